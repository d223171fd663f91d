#pragma once

#include <cstdint>
#include <vector>

#include "lcm/field.hpp"

namespace lcm {

// Interpolation nodes: betas carry data and noise positions, alphas are
// the group evaluation points. The two sets never overlap.
struct EvalPoints {
  std::vector<uint64_t> betas;   // k + T_h nodes
  std::vector<uint64_t> alphas;  // floor(H/v) nodes

  // beta_r = r (1-based), alpha_j = k + T_h + j. Requires
  // q >= k + T_h + num_groups so all points are distinct.
  static EvalPoints canonical(int degree, int num_groups, const Field& f);
};

// Lagrange basis row evaluated at alpha: entry r is
// prod_{l != r} (alpha - beta_l) / (beta_r - beta_l).
std::vector<uint64_t> coeff_row(const Field& f, uint64_t alpha,
                                const std::vector<uint64_t>& betas);

// Full coefficient matrix, one row per alpha.
std::vector<std::vector<uint64_t>> coeff_matrix(const Field& f,
                                                const EvalPoints& pts);

// Shares of one client: share j is the interpolant of (chunks, noise)
// at betas, evaluated at alpha_j.
std::vector<FieldVec> encode_client(const Field& f,
                                    const std::vector<FieldVec>& chunks,
                                    const std::vector<FieldVec>& noise,
                                    const EvalPoints& pts);

// Values at `targets` of the unique interpolant through the samples.
// Exactly degree-many samples with distinct nodes are required.
std::vector<FieldVec> interpolate_to_targets(
    const Field& f, const std::vector<uint64_t>& xs,
    const std::vector<FieldVec>& ys, const std::vector<uint64_t>& targets);

// Noise-column block of the coefficient matrix restricted to the given
// groups: row per group in `group_indices`, columns k..k+T_h-1.
std::vector<std::vector<uint64_t>> ub_submatrix(
    const Field& f, const std::vector<int>& group_indices,
    const EvalPoints& pts, int k);

// Rank test by Gaussian elimination over F_q.
bool is_invertible(const Field& f,
                   std::vector<std::vector<uint64_t>> m);

}  // namespace lcm
