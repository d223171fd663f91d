#include "lcm/lagrange.hpp"

#include <string>

namespace lcm {

EvalPoints EvalPoints::canonical(int degree, int num_groups,
                                 const Field& f) {
  if (f.modulus() < static_cast<uint64_t>(degree + num_groups)) {
    throw infeasible_params(
        "field too small for distinct evaluation points: need q >= " +
        std::to_string(degree + num_groups));
  }
  EvalPoints pts;
  pts.betas.resize(degree);
  for (int r = 0; r < degree; ++r) pts.betas[r] = static_cast<uint64_t>(r + 1);
  pts.alphas.resize(num_groups);
  for (int j = 0; j < num_groups; ++j)
    pts.alphas[j] = static_cast<uint64_t>(degree + j + 1);
  return pts;
}

std::vector<uint64_t> coeff_row(const Field& f, uint64_t alpha,
                                const std::vector<uint64_t>& betas) {
  const size_t n = betas.size();
  for (size_t i = 0; i < n; ++i)
    for (size_t j = i + 1; j < n; ++j)
      if (betas[i] == betas[j])
        throw degenerate_nodes("duplicate interpolation nodes");

  std::vector<uint64_t> row(n);
  for (size_t r = 0; r < n; ++r) {
    uint64_t num = 1, den = 1;
    for (size_t l = 0; l < n; ++l) {
      if (l == r) continue;
      num = f.mul(num, f.sub(alpha, betas[l]));
      den = f.mul(den, f.sub(betas[r], betas[l]));
    }
    row[r] = f.mul(num, f.inv(den));
  }
  return row;
}

std::vector<std::vector<uint64_t>> coeff_matrix(const Field& f,
                                                const EvalPoints& pts) {
  std::vector<std::vector<uint64_t>> m;
  m.reserve(pts.alphas.size());
  for (uint64_t a : pts.alphas) m.push_back(coeff_row(f, a, pts.betas));
  return m;
}

std::vector<FieldVec> encode_client(const Field& f,
                                    const std::vector<FieldVec>& chunks,
                                    const std::vector<FieldVec>& noise,
                                    const EvalPoints& pts) {
  const size_t degree = pts.betas.size();
  if (chunks.size() + noise.size() != degree)
    throw dimension_error("encode: chunk+noise count must equal k+T_h");
  const size_t clen = degree ? (chunks.empty() ? noise[0].size()
                                               : chunks[0].size())
                             : 0;
  for (const auto& c : chunks)
    if (c.size() != clen) throw dimension_error("encode: ragged chunks");
  for (const auto& z : noise)
    if (z.size() != clen) throw dimension_error("encode: ragged noise");

  std::vector<FieldVec> shares;
  shares.reserve(pts.alphas.size());
  for (uint64_t a : pts.alphas) {
    auto row = coeff_row(f, a, pts.betas);
    FieldVec share(clen, 0);
    for (size_t r = 0; r < degree; ++r) {
      const FieldVec& src = r < chunks.size() ? chunks[r]
                                              : noise[r - chunks.size()];
      for (size_t t = 0; t < clen; ++t)
        share[t] = f.add(share[t], f.mul(row[r], src[t]));
    }
    shares.push_back(std::move(share));
  }
  return shares;
}

std::vector<FieldVec> interpolate_to_targets(
    const Field& f, const std::vector<uint64_t>& xs,
    const std::vector<FieldVec>& ys, const std::vector<uint64_t>& targets) {
  if (xs.size() != ys.size())
    throw dimension_error("interpolate: sample count mismatch");
  if (xs.empty()) throw dimension_error("interpolate: no samples");
  const size_t vlen = ys[0].size();
  for (const auto& y : ys)
    if (y.size() != vlen) throw dimension_error("interpolate: ragged values");

  std::vector<FieldVec> out;
  out.reserve(targets.size());
  for (uint64_t t : targets) {
    auto row = coeff_row(f, t, xs);  // throws degenerate_nodes on dup xs
    FieldVec val(vlen, 0);
    for (size_t r = 0; r < xs.size(); ++r)
      for (size_t c = 0; c < vlen; ++c)
        val[c] = f.add(val[c], f.mul(row[r], ys[r][c]));
    out.push_back(std::move(val));
  }
  return out;
}

std::vector<std::vector<uint64_t>> ub_submatrix(
    const Field& f, const std::vector<int>& group_indices,
    const EvalPoints& pts, int k) {
  std::vector<std::vector<uint64_t>> m;
  m.reserve(group_indices.size());
  for (int g : group_indices) {
    if (g < 0 || static_cast<size_t>(g) >= pts.alphas.size())
      throw bad_group_index("group index out of range: " + std::to_string(g));
    auto row = coeff_row(f, pts.alphas[g], pts.betas);
    m.emplace_back(row.begin() + k, row.end());
  }
  return m;
}

bool is_invertible(const Field& f, std::vector<std::vector<uint64_t>> m) {
  const size_t n = m.size();
  for (const auto& row : m)
    if (row.size() != n) throw dimension_error("invertibility: non-square");
  for (size_t col = 0; col < n; ++col) {
    size_t pivot = col;
    while (pivot < n && m[pivot][col] == 0) ++pivot;
    if (pivot == n) return false;
    std::swap(m[col], m[pivot]);
    uint64_t inv = f.inv(m[col][col]);
    for (size_t r = col + 1; r < n; ++r) {
      if (m[r][col] == 0) continue;
      uint64_t factor = f.mul(m[r][col], inv);
      for (size_t c = col; c < n; ++c)
        m[r][c] = f.sub(m[r][c], f.mul(factor, m[col][c]));
    }
  }
  return true;
}

}  // namespace lcm
