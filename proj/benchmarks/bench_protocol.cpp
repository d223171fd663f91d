#include <benchmark/benchmark.h>

#include "lcm/protocol.hpp"

namespace {

lcm::Params make_params(int e, int h, int s, int th, int v, size_t p) {
  lcm::Params prm;
  prm.num_clients = e;
  prm.num_servers = h;
  prm.stragglers = s;
  prm.server_collusion = th;
  prm.client_collusion = e > 2 ? 1 : 0;
  prm.group_size = v;
  prm.grad_len = p;
  prm.prime = 2147483647ULL;
  return prm;
}

std::vector<lcm::FieldVec> gradients(const lcm::Params& p) {
  lcm::Field f(p.prime);
  lcm::SplitMix64 rng(1);
  std::vector<lcm::FieldVec> g;
  for (int i = 0; i < p.num_clients; ++i)
    g.push_back(f.sample_vec(p.grad_len, rng));
  return g;
}

void BM_EncodeClient(benchmark::State& state) {
  auto p = make_params(4, 6, 1, 2, 1, static_cast<size_t>(state.range(0)));
  lcm::Field f(p.prime);
  auto pts = lcm::EvalPoints::canonical(p.code_degree(), p.num_groups(), f);
  auto secrets = lcm::make_client_secrets(f, p, gradients(p), 3);
  const size_t clen = p.chunk_len();
  std::vector<lcm::FieldVec> chunks;
  for (int r = 0; r < p.recovery_dim(); ++r)
    chunks.emplace_back(secrets[0].masked.begin() + r * clen,
                        secrets[0].masked.begin() + (r + 1) * clen);
  for (auto _ : state)
    benchmark::DoNotOptimize(
        lcm::encode_client(f, chunks, secrets[0].noise, pts));
  state.SetItemsProcessed(state.iterations());
}
BENCHMARK(BM_EncodeClient)->Arg(64)->Arg(1024)->Arg(16384);

void BM_Interpolate(benchmark::State& state) {
  lcm::Field f(2147483647ULL);
  const int n = static_cast<int>(state.range(0));
  lcm::FieldVec xs, targets;
  std::vector<lcm::FieldVec> ys;
  lcm::SplitMix64 rng(7);
  for (int i = 0; i < n; ++i) {
    xs.push_back(static_cast<uint64_t>(i + 1));
    ys.push_back(f.sample_vec(8, rng));
    targets.push_back(static_cast<uint64_t>(n + i + 1));
  }
  for (auto _ : state)
    benchmark::DoNotOptimize(lcm::interpolate_to_targets(f, xs, ys, targets));
}
BENCHMARK(BM_Interpolate)->Arg(4)->Arg(8)->Arg(16);

void BM_RunRound(benchmark::State& state) {
  auto p = make_params(static_cast<int>(state.range(0)), 10, 1, 1, 1, 70);
  auto g = gradients(p);
  lcm::FailureTable t(p.num_clients, p.num_servers, true);
  for (int i = 0; i < p.num_clients; ++i)
    t.set_link(i, i % p.num_servers, false);
  for (auto _ : state)
    benchmark::DoNotOptimize(lcm::run_round(p, g, t, 5));
  state.SetItemsProcessed(state.iterations());
}
BENCHMARK(BM_RunRound)->Arg(4)->Arg(10)->Arg(20);

}  // namespace

BENCHMARK_MAIN();
