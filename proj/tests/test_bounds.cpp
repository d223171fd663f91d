#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <string>

#include "lcm/bounds.hpp"

using namespace lcm;

namespace {

Params make_params(int e, int h, int s, int th, int tc, int v) {
  Params p;
  p.num_clients = e;
  p.num_servers = h;
  p.stragglers = s;
  p.server_collusion = th;
  p.client_collusion = tc;
  p.group_size = v;
  p.grad_len = 4;
  p.prime = 2147483647ULL;
  return p;
}

bool has_violation(const Params& p, const std::string& needle) {
  for (const auto& v : check_params(p))
    if (v.find(needle) != std::string::npos) return true;
  return false;
}

}  // namespace

TEST_CASE("rational arithmetic basics") {
  CHECK(Rational(6, 2) == Rational(3));
  CHECK(Rational(-4, -2) == Rational(2));
  CHECK(Rational(1, 3) < Rational(1, 2));
  CHECK(Rational(4, 3) <= Rational(4, 3));
  CHECK(Rational(4, 3).to_string() == "4/3");
}

TEST_CASE("binomial coefficients") {
  CHECK(binomial(5, 4) == 5);
  CHECK(binomial(6, 2) == 15);
  CHECK(binomial(9, 8) == 9);
  CHECK(binomial(3, 5) == 0);
  CHECK(binomial(0, 0) == 1);
}

TEST_CASE("parameter feasibility gate") {
  SUBCASE("the worked configurations pass") {
    CHECK(check_params(make_params(4, 6, 1, 2, 2, 1)).empty());
    CHECK(check_params(make_params(4, 6, 1, 1, 2, 3)).empty());
  }
  SUBCASE("server collusion past H-2s-1") {
    CHECK(has_violation(make_params(4, 6, 1, 4, 2, 1), "T_h <= H-2s-1"));
  }
  SUBCASE("client collusion past E-2") {
    CHECK(has_violation(make_params(4, 6, 1, 2, 3, 1), "T_c <= E-2"));
  }
  SUBCASE("too many stragglers") {
    CHECK(has_violation(make_params(4, 6, 3, 0, 0, 1), "s < H/2"));
  }
  SUBCASE("zero recovery dimension") {
    // at v=1 the T_h cap already implies k >= 1, so drive k to zero with
    // replicated groups
    CHECK(has_violation(make_params(4, 6, 1, 2, 2, 3), "k = floor"));
  }
  SUBCASE("field too small") {
    Params p = make_params(4, 6, 1, 2, 2, 1);
    p.prime = 7;
    CHECK(has_violation(p, "q >="));
  }
  SUBCASE("validate_params throws with the violation text") {
    CHECK_THROWS_AS(validate_params(make_params(4, 6, 1, 4, 2, 1)),
                    infeasible_params);
  }
}

TEST_CASE("lower bounds") {
  CHECK(uplink_lower_bound(make_params(4, 6, 1, 2, 2, 1)) == Rational(3));
  CHECK(downlink_lower_bound(make_params(4, 6, 1, 2, 2, 1)) == Rational(2));
  CHECK(uplink_lower_bound(make_params(4, 6, 1, 1, 2, 1)) == Rational(2));
  CHECK(downlink_lower_bound(make_params(4, 6, 1, 1, 2, 1)) ==
        Rational(4, 3));
  CHECK(uplink_lower_bound(make_params(4, 6, 0, 0, 0, 1)) == Rational(1));
  CHECK(downlink_lower_bound(make_params(4, 6, 0, 0, 0, 1)) == Rational(1));
}

TEST_CASE("achievable loads for the worked examples") {
  // E=4, H=6, s=1, T_h=2, v=1: k=2
  auto p1 = make_params(4, 6, 1, 2, 2, 1);
  CHECK(uplink_lcm_load(p1) == Rational(3));
  CHECK(downlink_lcm_load(p1) == Rational(6));  // 2*(3 - ceil(3/5) + 1)
  // E=4, H=6, s=1, T_h=1, v=3: k=1
  auto p2 = make_params(4, 6, 1, 1, 2, 3);
  CHECK(uplink_lcm_load(p2) == Rational(6));
  CHECK(downlink_lcm_load(p2) == Rational(6));
}

TEST_CASE("bound sandwich and monotonicity") {
  for (int h = 4; h <= 9; ++h)
    for (int s = 0; 2 * s < h; ++s)
      for (int th = 0; th <= h - 2 * s - 1; ++th) {
        auto p = make_params(6, h, s, th, 2, 1);
        if (!check_params(p).empty()) continue;
        auto b = compute_bounds(p);
        CHECK(b.c_up_lower <= b.c_up_lcm);
        CHECK(b.c_down_lower <= b.c_down_lcm);
        if (th > 0) {
          auto prev = make_params(6, h, s, th - 1, 2, 1);
          CHECK(uplink_lower_bound(prev) <= b.c_up_lower);
          CHECK(downlink_lower_bound(prev) <= b.c_down_lower);
        }
        // bounds do not depend on the client collusion count
        auto tc0 = make_params(6, h, s, th, 0, 1);
        CHECK(compute_bounds(tc0).c_up_lower == b.c_up_lower);
        CHECK(compute_bounds(tc0).c_up_lcm == b.c_up_lcm);
        CHECK(compute_bounds(tc0).c_down_lcm == b.c_down_lcm);
      }
}

TEST_CASE("v=1 uplink optimality") {
  for (int h = 4; h <= 10; ++h)
    for (int s = 0; 2 * s < h; ++s)
      for (int th = 0; th <= h - 2 * s - 1; ++th) {
        auto p = make_params(6, h, s, th, 2, 1);
        if (!check_params(p).empty()) continue;
        CHECK(uplink_lcm_load(p) ==
              Rational(h, h - 2 * s - th));
      }
}

TEST_CASE("closed-form specializations agree with the general formulas") {
  SUBCASE("v = 1 downlink closed form") {
    for (int e : {3, 4, 8, 20})
      for (int h = 4; h <= 8; ++h)
        for (int s = 1; 2 * s < h; ++s)
          for (int th = 0; th <= h - 2 * s - 1; ++th) {
            auto p = make_params(e, h, s, th, 1, 1);
            if (!check_params(p).empty()) continue;
            long long bins =
                static_cast<long long>(binomial(h - s, s));
            long long ceil_term = (e - 1 + bins - 1) / bins;
            Rational closed((h - 2 * s) * (e - ceil_term),
                            h - 2 * s - th);
            CHECK(downlink_lcm_load(p) == closed);
          }
  }
  SUBCASE("v = 2s+1: both loads collapse to the same closed form") {
    for (int e : {4, 10})
      for (int h = 4; h <= 12; ++h)
        for (int s = 1; 2 * s < h; ++s)
          for (int th = 0; th <= 3; ++th) {
            auto p = make_params(e, h, s, th, 1, 2 * s + 1);
            if (!check_params(p).empty()) continue;
            long long g = h / (2 * s + 1);
            Rational closed(g * (2 * s + 1), g - th);
            CHECK(uplink_lcm_load(p) == closed);
            CHECK(downlink_lcm_load(p) == closed);
          }
  }
}
