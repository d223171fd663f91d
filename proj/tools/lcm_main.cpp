// Experiment runner for the LCM secure-aggregation simulator: bound
// calculators, pattern sweeps with exact load accounting, and the
// verification suites (decode correctness, bound conformance, privacy).

#include <algorithm>
#include <cstdint>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "lcm/bounds.hpp"
#include "lcm/field.hpp"
#include "lcm/network.hpp"
#include "lcm/privacy.hpp"
#include "lcm/protocol.hpp"

namespace {

constexpr int kExitBadConfig = 2;
constexpr int kExitIo = 3;
constexpr int kExitSkipped = 4;

struct Options {
  lcm::Params params;
  uint64_t seed = 1;
  std::string patterns = "all";
  std::string out_dir = ".";
  bool disable_masks = false;
};

void add_common_flags(CLI::App* cmd, Options& o) {
  cmd->add_option("--clients", o.params.num_clients, "number of clients E");
  cmd->add_option("--servers", o.params.num_servers, "number of servers H");
  cmd->add_option("--stragglers", o.params.stragglers,
                  "max straggling links per client s");
  cmd->add_option("--th", o.params.server_collusion,
                  "server collusion bound T_h");
  cmd->add_option("--tc", o.params.client_collusion,
                  "client collusion bound T_c");
  cmd->add_option("--group-size", o.params.group_size,
                  "servers per group v");
  cmd->add_option("--grad-len", o.params.grad_len,
                  "gradient length p in field symbols");
  cmd->add_option("--prime", o.params.prime, "field prime q");
  cmd->add_option("--seed", o.seed, "deterministic seed");
  cmd->add_option("--patterns", o.patterns,
                  "straggling patterns: all | sample:N | worst | file:PATH");
  cmd->add_option("--out", o.out_dir, "output directory for CSV files");
  cmd->add_flag("--disable-masks", o.disable_masks,
                "turn pairwise masks off (test-only negative control)");
  cmd->set_config("--config");
}

std::vector<lcm::FieldVec> draw_gradients(const lcm::Params& p,
                                          uint64_t seed,
                                          uint64_t pattern_id,
                                          uint64_t draw) {
  lcm::Field f(p.prime);
  std::vector<lcm::FieldVec> g(p.num_clients);
  for (int i = 0; i < p.num_clients; ++i) {
    lcm::SplitMix64 rng(lcm::mix_seed(seed ^ (draw * 0x9e37ULL), pattern_id,
                                      static_cast<uint64_t>(i)));
    g[i] = f.sample_vec(p.grad_len, rng);
  }
  return g;
}

// Resolved pattern list for one run; enumeration keeps pattern ids
// aligned with the index bijection.
std::vector<std::pair<uint64_t, lcm::FailureTable>> resolve_patterns(
    const Options& o) {
  std::vector<std::pair<uint64_t, lcm::FailureTable>> out;
  const auto& p = o.params;
  if (o.patterns.rfind("file:", 0) == 0) {
    std::ifstream in(o.patterns.substr(5));
    if (!in) throw std::ios_base::failure("cannot open pattern file");
    std::stringstream buf;
    buf << in.rdbuf();
    out.emplace_back(0, lcm::FailureTable::parse(buf.str()));
    return out;
  }
  lcm::PatternSpace space(p.num_clients, p.num_servers, p.stragglers);
  if (o.patterns == "all") {
    space.enumerate([&](uint64_t id, const lcm::FailureTable& t) {
      out.emplace_back(id, t);
    });
  } else if (o.patterns == "worst") {
    uint64_t id = 0;
    for (auto& t : space.worst_case_candidates()) out.emplace_back(id++, t);
  } else if (o.patterns.rfind("sample:", 0) == 0) {
    uint64_t n = std::stoull(o.patterns.substr(7));
    lcm::SplitMix64 rng(o.seed);
    for (uint64_t i = 0; i < n; ++i) out.emplace_back(i, space.sample(rng));
  } else {
    throw lcm::error("unknown pattern mode: " + o.patterns);
  }
  return out;
}

void write_file(const std::string& path, const std::string& content) {
  std::ofstream out(path);
  if (!out) throw std::ios_base::failure("cannot write " + path);
  out << content;
  if (!out) throw std::ios_base::failure("write failed: " + path);
}

std::string csv_cell(const lcm::Rational& r) {
  std::ostringstream s;
  s << r.to_string() << "," << r.to_double();
  return s.str();
}

int run_simulate(const Options& o) {
  lcm::validate_params(o.params);
  auto patterns = resolve_patterns(o);
  auto bounds = lcm::compute_bounds(o.params);

  std::ostringstream loads;
  loads << "pattern_id,client,c_up_ratio,c_up,c_down_ratio,c_down\n";
  lcm::Rational worst_down(0);
  lcm::Rational measured_up(0);
  for (const auto& [id, table] : patterns) {
    auto grads = draw_gradients(o.params, o.seed, id, 0);
    auto res = lcm::run_round(o.params, grads, table, o.seed,
                              o.disable_masks, id);
    const auto& rep = res.report;
    const long long norm =
        static_cast<long long>(o.params.padded_len());
    for (int i = 0; i < o.params.num_clients; ++i) {
      lcm::Rational up(static_cast<long long>(rep.uplink_symbols[i]), norm);
      lcm::Rational down(static_cast<long long>(rep.downlink_symbols[i]),
                         norm);
      loads << id << "," << i << "," << csv_cell(up) << ","
            << csv_cell(down) << "\n";
    }
    worst_down = std::max(worst_down, rep.c_down);
    measured_up = std::max(measured_up, rep.c_up);
  }

  std::ostringstream bcsv;
  bcsv << "c_up_lower_ratio,c_up_lower,c_down_lower_ratio,c_down_lower,"
          "c_up_lcm_ratio,c_up_lcm,c_down_lcm_ratio,c_down_lcm,"
          "measured_c_up_ratio,measured_c_up,"
          "measured_worst_c_down_ratio,measured_worst_c_down\n";
  bcsv << csv_cell(bounds.c_up_lower) << "," << csv_cell(bounds.c_down_lower)
       << "," << csv_cell(bounds.c_up_lcm) << ","
       << csv_cell(bounds.c_down_lcm) << "," << csv_cell(measured_up) << ","
       << csv_cell(worst_down) << "\n";

  std::filesystem::create_directories(o.out_dir);
  write_file(o.out_dir + "/loads.csv", loads.str());
  write_file(o.out_dir + "/bounds.csv", bcsv.str());

  bool conform = measured_up == bounds.c_up_lcm &&
                 worst_down <= bounds.c_down_lcm;
  std::cout << "patterns=" << patterns.size()
            << " c_up=" << measured_up.to_string()
            << " worst_c_down=" << worst_down.to_string()
            << " c_up_lcm=" << bounds.c_up_lcm.to_string()
            << " c_down_lcm=" << bounds.c_down_lcm.to_string()
            << " c_up_lower=" << bounds.c_up_lower.to_string() << " "
            << (conform ? "CONFORMS" : "VIOLATES") << "\n";
  if (measured_up == bounds.c_up_lower)
    std::cout << "uplink load matches the lower bound (optimal)\n";
  return conform ? 0 : 1;
}

int run_bounds(const Options& o) {
  lcm::validate_params(o.params);
  auto b = lcm::compute_bounds(o.params);
  std::cout << "c_up_lower=" << b.c_up_lower.to_string() << " ("
            << b.c_up_lower.to_double() << ")\n"
            << "c_down_lower=" << b.c_down_lower.to_string() << " ("
            << b.c_down_lower.to_double() << ")\n"
            << "c_up_lcm=" << b.c_up_lcm.to_string() << " ("
            << b.c_up_lcm.to_double() << ")\n"
            << "c_down_lcm=" << b.c_down_lcm.to_string() << " ("
            << b.c_down_lcm.to_double() << ")\n";
  return 0;
}

int run_sweep(const Options& o, const std::string& vary, int from, int to) {
  std::ostringstream csv;
  csv << vary
      << ",c_up_lcm_ratio,c_up_lcm,c_down_lcm_ratio,c_down_lcm,"
         "measured_c_up_ratio,measured_c_up,"
         "measured_worst_c_down_ratio,measured_worst_c_down\n";
  for (int value = from; value <= to; ++value) {
    Options local = o;
    if (vary == "v")
      local.params.group_size = value;
    else
      local.params.server_collusion = value;
    if (!lcm::check_params(local.params).empty()) continue;
    if (local.patterns == "all") local.patterns = "sample:200";
    auto patterns = resolve_patterns(local);
    lcm::Rational worst_down(0), up(0);
    for (const auto& [id, table] : patterns) {
      auto grads = draw_gradients(local.params, local.seed, id, 0);
      auto res = lcm::run_round(local.params, grads, table, local.seed,
                                false, id);
      worst_down = std::max(worst_down, res.report.c_down);
      up = std::max(up, res.report.c_up);
    }
    auto b = lcm::compute_bounds(local.params);
    csv << value << "," << csv_cell(b.c_up_lcm) << ","
        << csv_cell(b.c_down_lcm) << "," << csv_cell(up) << ","
        << csv_cell(worst_down) << "\n";
  }
  std::filesystem::create_directories(o.out_dir);
  write_file(o.out_dir + "/sweep.csv", csv.str());
  std::cout << csv.str();
  return 0;
}

bool verify_correctness(const Options& o, std::ostream& log) {
  lcm::PatternSpace space(o.params.num_clients, o.params.num_servers,
                          o.params.stragglers);
  if (space.total() > 1000000) {
    log << "correctness: SKIPPED (pattern space too large to enumerate)\n";
    throw lcm::too_large_to_enumerate("correctness sweep");
  }
  lcm::Field f(o.params.prime);
  bool ok = true;
  space.enumerate([&](uint64_t id, const lcm::FailureTable& t) {
    auto grads = draw_gradients(o.params, o.seed, id, 0);
    lcm::FieldVec expect(o.params.grad_len, 0);
    for (const auto& g : grads) f.vec_add_inplace(expect, g);
    auto res = lcm::run_round(o.params, grads, t, o.seed, o.disable_masks,
                              id);
    for (const auto& d : res.decoded)
      if (!(d == expect)) ok = false;
  });
  log << "correctness: " << (ok ? "PASS" : "FAIL") << " over "
      << space.total() << " patterns\n";
  return ok;
}

bool verify_bounds(const Options& o, std::ostream& log) {
  auto b = lcm::compute_bounds(o.params);
  bool ok = b.c_up_lower <= b.c_up_lcm && b.c_down_lower <= b.c_down_lcm;
  // Closed forms at v=1 and v=2s+1 must agree with the general formula.
  lcm::Params v1 = o.params;
  v1.group_size = 1;
  if (lcm::check_params(v1).empty()) {
    lcm::Rational expect(v1.num_servers, v1.num_servers -
                                             2 * v1.stragglers -
                                             v1.server_collusion);
    if (!(lcm::uplink_lcm_load(v1) == expect)) ok = false;
  }
  lcm::Params v2 = o.params;
  v2.group_size = 2 * v2.stragglers + 1;
  if (lcm::check_params(v2).empty()) {
    long long g = v2.num_groups();
    lcm::Rational expect(g * (2 * v2.stragglers + 1),
                         g - v2.server_collusion);
    if (!(lcm::uplink_lcm_load(v2) == expect) ||
        !(lcm::downlink_lcm_load(v2) == expect))
      ok = false;
  }
  // Conformance of measured loads.
  Options local = o;
  lcm::PatternSpace space(o.params.num_clients, o.params.num_servers,
                          o.params.stragglers);
  if (local.patterns == "all" && space.total() > 100000)
    local.patterns = "sample:1000";
  auto patterns = resolve_patterns(local);
  for (const auto& [id, table] : patterns) {
    auto grads = draw_gradients(o.params, o.seed, id, 0);
    auto res = lcm::run_round(o.params, grads, table, o.seed, false, id);
    if (!(res.report.c_up == b.c_up_lcm)) ok = false;
    if (b.c_down_lcm < res.report.c_down) ok = false;
  }
  log << "bounds: " << (ok ? "PASS" : "FAIL") << "\n";
  return ok;
}

bool verify_privacy(const Options& o, std::ostream& log) {
  bool ok = true;
  if (auto counter = lcm::ub_invertibility_sweep(o.params)) {
    log << "privacy: noise-block invertibility FAILED\n";
    ok = false;
  }
  lcm::PatternSpace space(o.params.num_clients, o.params.num_servers,
                          o.params.stragglers);
  lcm::OracleOptions opts;
  opts.disable_masks = o.disable_masks;
  uint64_t patterns = space.total();
  space.enumerate([&](uint64_t, const lcm::FailureTable& t) {
    for (int j = 0; j < o.params.num_servers && ok; ++j) {
      if (o.params.server_collusion < 1) break;
      auto r = lcm::mi_server_oracle(o.params, {j}, t, opts);
      if (!r.independent()) {
        log << "privacy: server oracle DEPENDENT (" << r.witness << ")\n";
        ok = false;
      }
    }
    for (int i = 0; i < o.params.num_clients && ok; ++i) {
      if (o.params.client_collusion < 1) break;
      auto r = lcm::mi_client_oracle(o.params, {i}, t, opts);
      if (!r.independent()) {
        log << "privacy: client oracle DEPENDENT (" << r.witness << ")\n";
        ok = false;
      }
    }
  });
  log << "privacy: " << (ok ? "PASS" : "FAIL") << " over " << patterns
      << " patterns\n";
  return ok;
}

int run_verify(const Options& o, const std::string& suite) {
  std::ostringstream log;
  bool ok = true;
  bool skipped = false;
  try {
    if (suite == "correctness" || suite == "all")
      ok = verify_correctness(o, log) && ok;
    if (suite == "bounds" || suite == "all") ok = verify_bounds(o, log) && ok;
    if (suite == "privacy" || suite == "all")
      ok = verify_privacy(o, log) && ok;
  } catch (const lcm::too_large_to_enumerate& e) {
    log << "skipped: " << e.what() << "\n";
    skipped = true;
  }
  std::cout << log.str();
  if (skipped) return kExitSkipped;
  return ok ? 0 : 1;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"LCM multi-server secure aggregation simulator"};
  app.require_subcommand(1);

  Options o;
  // Default configuration kept deliberately small and valid.
  o.params.num_clients = 4;
  o.params.num_servers = 6;
  o.params.stragglers = 1;
  o.params.server_collusion = 2;
  o.params.client_collusion = 2;
  o.params.group_size = 1;
  o.params.grad_len = 2;

  auto* bounds_cmd =
      app.add_subcommand("bounds", "print load bounds for a configuration");
  add_common_flags(bounds_cmd, o);

  auto* sim_cmd = app.add_subcommand(
      "simulate", "run rounds over straggling patterns, emit CSV loads");
  add_common_flags(sim_cmd, o);

  auto* sweep_cmd = app.add_subcommand(
      "sweep", "vary v or T_h over a range and compare loads");
  add_common_flags(sweep_cmd, o);
  std::string vary = "v";
  int from = 1, to = 1;
  sweep_cmd->add_option("--vary", vary, "parameter to vary: v | th")
      ->check(CLI::IsMember({"v", "th"}));
  sweep_cmd->add_option("--from", from, "first value");
  sweep_cmd->add_option("--to", to, "last value");

  auto* verify_cmd =
      app.add_subcommand("verify", "run a verification suite");
  add_common_flags(verify_cmd, o);
  std::string suite = "all";
  verify_cmd->add_option("--suite", suite,
                         "correctness | privacy | bounds | all")
      ->check(CLI::IsMember({"correctness", "privacy", "bounds", "all"}));

  CLI11_PARSE(app, argc, argv);

  try {
    if (bounds_cmd->parsed()) return run_bounds(o);
    if (sim_cmd->parsed()) return run_simulate(o);
    if (sweep_cmd->parsed()) return run_sweep(o, vary, from, to);
    if (verify_cmd->parsed()) return run_verify(o, suite);
  } catch (const lcm::infeasible_params& e) {
    std::cerr << e.what() << "\n";
    return kExitBadConfig;
  } catch (const lcm::infeasible_resiliency& e) {
    std::cerr << e.what() << "\n";
    return kExitBadConfig;
  } catch (const lcm::too_large_to_enumerate& e) {
    std::cerr << "skipped: " << e.what() << "\n";
    return kExitSkipped;
  } catch (const std::ios_base::failure& e) {
    std::cerr << "i/o error: " << e.what() << "\n";
    return kExitIo;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 0;
}
