#pragma once

#include <cstdint>
#include <map>
#include <utility>
#include <vector>

#include "lcm/field.hpp"
#include "lcm/params.hpp"

namespace lcm {

// Deterministic expansion of a pair seed into the shared mask vector.
FieldVec expand_mask(const Field& f, uint64_t pair_seed, size_t len);

// All pairwise masks for one round. Fully determined by
// (global_seed, E, len); both endpoints of a pair derive the same vector.
struct MaskSet {
  int num_clients = 0;
  size_t len = 0;
  std::map<std::pair<int, int>, FieldVec> pair_masks;  // keys (i,j), i<j

  static MaskSet generate(const Field& f, uint64_t global_seed,
                          int num_clients, size_t len);

  const FieldVec& mask(int i, int j) const;  // requires i < j
};

// y_i = g_i + sum_{j>i} s_ij - sum_{j<i} s_ji over F_q. Summing y over
// all clients telescopes the masks away.
FieldVec mask_gradient(const Field& f, int client, const FieldVec& gradient,
                       const MaskSet& masks);

// One client's per-round secrets: gradient, its masked form, and the
// T_h noise vectors blinding the shares.
struct ClientSecret {
  int client_id = 0;
  FieldVec gradient;             // length p
  FieldVec masked;               // length padded p
  std::vector<FieldVec> noise;   // T_h vectors of chunk length
};

// Builds every client's secret for a round. Gradients are zero-padded to
// a multiple of k; noise streams are seeded per client so they are
// independent across clients.
std::vector<ClientSecret> make_client_secrets(
    const Field& f, const Params& params,
    const std::vector<FieldVec>& gradients, uint64_t global_seed,
    bool disable_masks = false);

}  // namespace lcm
