#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <algorithm>

#include "lcm/protocol.hpp"

using namespace lcm;

namespace {

Params example1_params() {
  Params p;
  p.num_clients = 4;
  p.num_servers = 6;
  p.stragglers = 1;
  p.server_collusion = 2;
  p.client_collusion = 2;
  p.group_size = 1;
  p.grad_len = 2;  // k = 2 divides p
  p.prime = 2147483647ULL;
  return p;
}

Params example2_params() {
  Params p;
  p.num_clients = 4;
  p.num_servers = 6;
  p.stragglers = 1;
  p.server_collusion = 1;
  p.client_collusion = 2;
  p.group_size = 3;
  p.grad_len = 1;  // k = 1
  p.prime = 2147483647ULL;
  return p;
}

FailureTable with_misses(
    int e, int h, const std::vector<std::pair<int, int>>& misses) {
  FailureTable t(e, h, true);
  for (auto [i, j] : misses) t.set_link(i, j, false);
  return t;
}

std::vector<FieldVec> random_gradients(const Params& p, uint64_t seed) {
  Field f(p.prime);
  std::vector<FieldVec> g;
  SplitMix64 rng(seed);
  for (int i = 0; i < p.num_clients; ++i)
    g.push_back(f.sample_vec(p.grad_len, rng));
  return g;
}

FieldVec gradient_sum(const Params& p, const std::vector<FieldVec>& g) {
  Field f(p.prime);
  FieldVec total(p.grad_len, 0);
  for (const auto& v : g) f.vec_add_inplace(total, v);
  return total;
}

Rational receiver_load(const RoundResult& res, int receiver) {
  return Rational(
      static_cast<long long>(res.report.downlink_symbols[receiver]),
      static_cast<long long>(res.transcript.params.padded_len()));
}

}  // namespace

TEST_CASE("uplink loads of the worked configurations") {
  // v=1 configuration: 6 shares of p/2 symbols -> C_up = 3
  auto p1 = example1_params();
  auto res1 = run_round(p1, random_gradients(p1, 1),
                        FailureTable(4, 6, true), 7);
  CHECK(res1.report.c_up == Rational(3));
  // v=3 configuration: 2 shares replicated to 3 servers each -> C_up = 6
  auto p2 = example2_params();
  auto res2 = run_round(p2, random_gradients(p2, 2),
                        FailureTable(4, 6, true), 7);
  CHECK(res2.report.c_up == Rational(6));
}

TEST_CASE("v=1 scenario regressions for receiver 0") {
  auto p = example1_params();
  auto grads = random_gradients(p, 3);
  auto expect = gradient_sum(p, grads);

  SUBCASE("full aggregation: load 2") {
    // receiver misses server 2; everyone else misses server 3
    auto t = with_misses(4, 6, {{0, 2}, {1, 3}, {2, 3}, {3, 3}});
    auto res = run_round(p, grads, t, 7);
    CHECK(receiver_load(res, 0) == Rational(2));
    CHECK(res.decoded[0] == expect);
    const auto& plan = res.transcript.plans[0];
    CHECK(plan.agg_set == std::vector<int>{1, 2, 3});
    CHECK(plan.forwards.empty());
  }

  SUBCASE("no shared groups: everything forwarded, load 6") {
    auto t = with_misses(4, 6, {{0, 0}, {1, 1}, {2, 2}, {3, 3}});
    auto res = run_round(p, grads, t, 7);
    CHECK(receiver_load(res, 0) == Rational(6));
    CHECK(res.decoded[0] == expect);
  }

  SUBCASE("partial aggregation plus one forwarded client: load 4") {
    auto t = with_misses(4, 6, {{3, 1}, {0, 2}, {1, 3}, {2, 3}});
    auto res = run_round(p, grads, t, 7);
    CHECK(receiver_load(res, 0) == Rational(4));
    CHECK(res.decoded[0] == expect);
    const auto& plan = res.transcript.plans[0];
    CHECK(plan.agg_set == std::vector<int>{1, 2});
    CHECK(plan.agg_groups == std::vector<int>{0, 1, 4, 5});
    REQUIRE(plan.forwards.count(3) == 1);
    std::vector<int> fwd_groups;
    for (auto [g, srv] : plan.forwards.at(3)) fwd_groups.push_back(g);
    CHECK(fwd_groups == std::vector<int>{0, 3, 4, 5});
  }
}

TEST_CASE("v=3 scenario regressions for receiver 0") {
  auto p = example2_params();
  auto grads = random_gradients(p, 4);
  auto expect = gradient_sum(p, grads);

  SUBCASE("both groups aggregate everyone: load 2") {
    auto t = with_misses(4, 6, {{1, 1}, {2, 2}, {3, 5}});
    auto res = run_round(p, grads, t, 7);
    CHECK(receiver_load(res, 0) == Rational(2));
    CHECK(res.decoded[0] == expect);
  }

  SUBCASE("one group needs a same-group patch forward: load 3") {
    // clients 1..3 miss servers 0..2 respectively, so no single group-0
    // server heard all of them
    auto t = with_misses(4, 6, {{1, 0}, {2, 1}, {3, 2}});
    auto res = run_round(p, grads, t, 7);
    CHECK(receiver_load(res, 0) == Rational(3));
    CHECK(res.decoded[0] == expect);
    const auto& plan = res.transcript.plans[0];
    CHECK(plan.agg_set == std::vector<int>{1, 2, 3});
    CHECK(plan.patches.size() == 1);
  }

  SUBCASE("receiver-side straggling only: load 2") {
    auto t = with_misses(4, 6, {{0, 1}});
    auto res = run_round(p, grads, t, 7);
    CHECK(receiver_load(res, 0) == Rational(2));
    CHECK(res.decoded[0] == expect);
  }
}

TEST_CASE("zero gradients decode to zero under arbitrary masks") {
  auto p = example1_params();
  std::vector<FieldVec> zeros(4, FieldVec(2, 0));
  auto t = with_misses(4, 6, {{0, 2}, {3, 1}});
  auto res = run_round(p, zeros, t, 99);
  for (const auto& d : res.decoded) CHECK(d == FieldVec{0, 0});
}

TEST_CASE("three clients over F_11 with full connectivity") {
  Params p;
  p.num_clients = 3;
  p.num_servers = 4;
  p.stragglers = 1;
  p.server_collusion = 1;
  p.client_collusion = 1;
  p.group_size = 1;
  p.grad_len = 1;
  p.prime = 11;
  auto grads = random_gradients(p, 5);
  auto res = run_round(p, grads, FailureTable(3, 4, true), 13);
  auto expect = gradient_sum(p, grads);
  for (const auto& d : res.decoded) CHECK(d == expect);
  // all other clients aggregated, nothing forwarded
  for (const auto& plan : res.transcript.plans) {
    CHECK(plan.agg_set.size() == 2);
    CHECK(plan.forwards.empty());
  }
}

TEST_CASE("exhaustive recovery over Omega(1)") {
  Params p;
  p.num_clients = 3;
  p.num_servers = 4;
  p.stragglers = 1;
  p.server_collusion = 1;
  p.client_collusion = 1;
  p.group_size = 1;
  p.grad_len = 2;
  p.prime = 101;
  PatternSpace sp(3, 4, 1);
  auto grads = random_gradients(p, 6);
  auto expect = gradient_sum(p, grads);
  sp.enumerate([&](uint64_t id, const FailureTable& t) {
    auto res = run_round(p, grads, t, 21, false, id);
    for (const auto& d : res.decoded) CHECK(d == expect);
  });
}

TEST_CASE("no stragglers: downlink load is (k+T_h)/k for everyone") {
  Params p;
  p.num_clients = 3;
  p.num_servers = 4;
  p.stragglers = 0;
  p.server_collusion = 1;
  p.client_collusion = 1;
  p.group_size = 1;
  p.grad_len = 3;  // k = 3
  p.prime = 101;
  auto res = run_round(p, random_gradients(p, 8), FailureTable(3, 4, true),
                       5);
  CHECK(res.report.c_down == Rational(4, 3));
  for (auto d : res.report.downlink_symbols) CHECK(d == 4);
}

TEST_CASE("gradient padding when k does not divide p") {
  Params p = example1_params();
  p.grad_len = 3;  // k = 2, padded to 4
  CHECK(p.padded_len() == 4);
  auto grads = random_gradients(p, 9);
  auto res = run_round(p, grads, FailureTable(4, 6, true), 7);
  CHECK(res.decoded[0] == gradient_sum(p, grads));
  CHECK(res.decoded[0].size() == 3);
}

TEST_CASE("plan depends only on columns visible to the receiver") {
  auto p = example1_params();
  auto t = with_misses(4, 6, {{0, 2}, {1, 3}, {2, 3}, {3, 3}});
  auto grouping = make_groups(6, 1);
  auto base = plan_downlink(p, VisibleTable(t, 0), grouping);
  // mutate the column the receiver cannot see
  auto t2 = t;
  t2.set_link(1, 2, false);
  t2.set_link(3, 2, false);
  auto other = plan_downlink(p, VisibleTable(t2, 0), grouping);
  CHECK(base.agg_groups == other.agg_groups);
  CHECK(base.agg_set == other.agg_set);
  CHECK(base.agg_servers == other.agg_servers);
  CHECK(base.forwards == other.forwards);
}

TEST_CASE("plan rejects patterns outside Omega(s)") {
  auto p = example1_params();
  FailureTable t(4, 6, true);
  for (int j = 0; j < 5; ++j) t.set_link(1, j, false);
  CHECK_THROWS_AS(run_round(p, random_gradients(p, 1), t, 7),
                  infeasible_resiliency);
  auto grouping = make_groups(6, 1);
  CHECK_THROWS_AS(plan_downlink(p, VisibleTable(t, 0), grouping),
                  plan_infeasible);
}

TEST_CASE("server execution flags missing shares") {
  auto p = example1_params();
  auto t = FailureTable(4, 6, true);
  Field f(p.prime);
  auto grouping = make_groups(6, 1);
  auto plan = plan_downlink(p, VisibleTable(t, 0), grouping);
  std::vector<std::vector<UplinkShare>> empty_inboxes(6);
  CHECK_THROWS_AS(server_execute(f, plan, empty_inboxes, grouping),
                  plan_violation);
}

TEST_CASE("transcript log carries every message") {
  auto p = example2_params();
  auto res = run_round(p, random_gradients(p, 11),
                       FailureTable(4, 6, true), 3, false, 42);
  auto log = res.transcript.serialize();
  CHECK(log.find("pattern 42") == 0);
  CHECK(log.find("UP client=0 server=0 group=0") != std::string::npos);
  CHECK(log.find("kind=AGG") != std::string::npos);
  size_t up_lines = 0, down_lines = 0;
  for (size_t pos = 0; (pos = log.find("\nUP ", pos)) != std::string::npos;
       ++pos)
    ++up_lines;
  for (size_t pos = 0;
       (pos = log.find("DOWN ", pos)) != std::string::npos; ++pos)
    ++down_lines;
  // full connectivity: 4 clients * 2 groups * 3 servers = 24 deliveries
  CHECK(up_lines == 24);
  CHECK(down_lines == 8);  // 2 aggregates per receiver
}
