#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "lcm/masking.hpp"
#include "lcm/params.hpp"

using namespace lcm;

TEST_CASE("pair seed derivation") {
  CHECK(derive_pair_seed(1, 0, 1) == derive_pair_seed(1, 0, 1));
  CHECK(derive_pair_seed(1, 0, 1) != derive_pair_seed(1, 1, 2));
  CHECK(derive_pair_seed(1, 0, 1) != derive_pair_seed(2, 0, 1));
  CHECK_THROWS_AS(derive_pair_seed(1, 2, 2), bad_pair_order);
  CHECK_THROWS_AS(derive_pair_seed(1, 3, 2), bad_pair_order);
}

TEST_CASE("mask expansion") {
  Field f(101);
  CHECK(expand_mask(f, 7, 0).empty());
  CHECK(expand_mask(f, 7, 8) == expand_mask(f, 7, 8));
  CHECK(expand_mask(f, 7, 8) != expand_mask(f, 8, 8));
}

TEST_CASE("mask expansion output is uniform across seeds") {
  Field f(3);
  const int n = 10000;
  int counts[3] = {0, 0, 0};
  for (int seed = 0; seed < n; ++seed)
    ++counts[expand_mask(f, static_cast<uint64_t>(seed), 1)[0]];
  const double expect = n / 3.0;
  const double sigma = std::sqrt(n * (1.0 / 3) * (2.0 / 3));
  for (int v = 0; v < 3; ++v)
    CHECK(std::abs(counts[v] - expect) < 5 * sigma);
}

TEST_CASE("masked gradients") {
  Field f(101);

  SUBCASE("two clients telescope") {
    MaskSet masks = MaskSet::generate(f, 99, 2, 4);
    FieldVec g1{1, 2, 3, 4}, g2{5, 6, 7, 8};
    auto y1 = mask_gradient(f, 0, g1, masks);
    auto y2 = mask_gradient(f, 1, g2, masks);
    CHECK(y1 == f.vec_add(g1, masks.mask(0, 1)));
    CHECK(y2 == f.vec_sub(g2, masks.mask(0, 1)));
    CHECK(f.vec_add(y1, y2) == f.vec_add(g1, g2));
  }

  SUBCASE("middle client adds later pairs, subtracts earlier ones") {
    MaskSet masks = MaskSet::generate(f, 99, 3, 2);
    FieldVec g{10, 20};
    auto y = mask_gradient(f, 1, g, masks);
    FieldVec expect =
        f.vec_sub(f.vec_add(g, masks.mask(1, 2)), masks.mask(0, 1));
    CHECK(y == expect);
  }

  SUBCASE("zero masks are the identity") {
    MaskSet masks;
    masks.num_clients = 2;
    masks.len = 3;
    masks.pair_masks[{0, 1}] = FieldVec{0, 0, 0};
    FieldVec g{4, 5, 6};
    CHECK(mask_gradient(f, 0, g, masks) == g);
  }
}

TEST_CASE("cancellation across all clients, random instances") {
  Field f(101);
  SplitMix64 rng(31);
  for (int e : {2, 3, 5, 8}) {
    MaskSet masks = MaskSet::generate(f, rng.next(), e, 6);
    FieldVec total(6, 0), total_g(6, 0);
    for (int i = 0; i < e; ++i) {
      FieldVec g = f.sample_vec(6, rng);
      f.vec_add_inplace(total_g, g);
      f.vec_add_inplace(total, mask_gradient(f, i, g, masks));
    }
    CHECK(total == total_g);
  }
}

TEST_CASE("mask set is a pure function of (seed, E, p)") {
  Field f(101);
  MaskSet a = MaskSet::generate(f, 5, 4, 3);
  MaskSet b = MaskSet::generate(f, 5, 4, 3);
  CHECK(a.pair_masks == b.pair_masks);
  CHECK(a.pair_masks.size() == 6);  // all pairs i < j
  for (const auto& [key, vec] : a.pair_masks) {
    CHECK(key.first < key.second);
    CHECK(vec.size() == 3);
  }
}

TEST_CASE("client secrets carry per-client independent noise") {
  Field f(101);
  Params p;
  p.num_clients = 3;
  p.num_servers = 4;
  p.stragglers = 1;
  p.server_collusion = 1;
  p.client_collusion = 1;
  p.group_size = 1;
  p.grad_len = 2;
  p.prime = 101;
  std::vector<FieldVec> grads{{1, 2}, {3, 4}, {5, 6}};
  auto secrets = make_client_secrets(f, p, grads, 77);
  CHECK(secrets.size() == 3);
  for (const auto& s : secrets) {
    CHECK(s.noise.size() == 1);
    CHECK(s.noise[0].size() == p.chunk_len());
  }
  CHECK(secrets[0].noise != secrets[1].noise);
  // masked gradients still sum to the gradient sum
  FieldVec total(2, 0), total_g(2, 0);
  for (int i = 0; i < 3; ++i) {
    f.vec_add_inplace(total, secrets[i].masked);
    f.vec_add_inplace(total_g, grads[i]);
  }
  CHECK(total == total_g);
}
