#include "lcm/masking.hpp"

#include <string>

#include "lcm/rng.hpp"

namespace lcm {

FieldVec expand_mask(const Field& f, uint64_t pair_seed, size_t len) {
  SplitMix64 rng(pair_seed);
  return f.sample_vec(len, rng);
}

MaskSet MaskSet::generate(const Field& f, uint64_t global_seed,
                          int num_clients, size_t len) {
  MaskSet m;
  m.num_clients = num_clients;
  m.len = len;
  for (int i = 0; i < num_clients; ++i)
    for (int j = i + 1; j < num_clients; ++j)
      m.pair_masks[{i, j}] =
          expand_mask(f, derive_pair_seed(global_seed, i, j), len);
  return m;
}

const FieldVec& MaskSet::mask(int i, int j) const {
  if (i >= j) throw bad_pair_order("mask lookup requires i < j");
  auto it = pair_masks.find({i, j});
  if (it == pair_masks.end())
    throw bad_pair_order("no mask for pair (" + std::to_string(i) + "," +
                         std::to_string(j) + ")");
  return it->second;
}

FieldVec mask_gradient(const Field& f, int client, const FieldVec& gradient,
                       const MaskSet& masks) {
  FieldVec y = gradient;
  for (int j = 0; j < masks.num_clients; ++j) {
    if (j == client) continue;
    if (client < j)
      f.vec_add_inplace(y, masks.mask(client, j));
    else
      f.vec_sub_inplace(y, masks.mask(j, client));
  }
  return y;
}

std::vector<ClientSecret> make_client_secrets(
    const Field& f, const Params& params,
    const std::vector<FieldVec>& gradients, uint64_t global_seed,
    bool disable_masks) {
  const int e = params.num_clients;
  if (static_cast<int>(gradients.size()) != e)
    throw dimension_error("need one gradient per client");
  for (const auto& g : gradients)
    if (g.size() != params.grad_len)
      throw dimension_error("gradient length != p");

  const size_t padded = params.padded_len();
  MaskSet masks = disable_masks
                      ? MaskSet{e, padded, {}}
                      : MaskSet::generate(f, global_seed, e, padded);
  if (disable_masks) {
    FieldVec zero(padded, 0);
    for (int i = 0; i < e; ++i)
      for (int j = i + 1; j < e; ++j) masks.pair_masks[{i, j}] = zero;
  }

  std::vector<ClientSecret> out(e);
  for (int i = 0; i < e; ++i) {
    ClientSecret& cs = out[i];
    cs.client_id = i;
    cs.gradient = gradients[i];
    FieldVec g = gradients[i];
    g.resize(padded, 0);
    cs.masked = mask_gradient(f, i, g, masks);
    SplitMix64 noise_rng(mix_seed(global_seed, 0x6e6f6973ULL,
                                  static_cast<uint64_t>(i)));
    cs.noise.resize(params.server_collusion);
    for (auto& z : cs.noise) z = f.sample_vec(params.chunk_len(), noise_rng);
  }
  return out;
}

}  // namespace lcm
