#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include "lcm/bounds.hpp"
#include "lcm/field.hpp"
#include "lcm/lagrange.hpp"
#include "lcm/masking.hpp"
#include "lcm/network.hpp"
#include "lcm/params.hpp"

namespace lcm {

// One coded share: the client's polynomial evaluated at the group's
// point, destined for every server of that group.
struct UplinkShare {
  int client = 0;
  int group = 0;
  FieldVec payload;  // chunk_len symbols
};

// A forwarded share that completes a group's partial aggregate for one
// client the executing server did not hear from.
struct PatchForward {
  int client = 0;
  int group = 0;
  int server = 0;
};

// Per-receiver downlink plan, computed from the receiver's visible
// columns only.
//
// agg_groups is the selected set S of k+T_h groups. agg_set holds the
// clients M whose polynomials are aggregated: every group in S has some
// server that heard the client and reaches the receiver. At each group
// the executing server sums the clients it actually heard
// (agg_clients); the missing ones are patched by same-group forwards,
// so the receiver still obtains the evaluation of the full aggregate at
// that group's point. Clients outside M are forwarded wholesale at
// k+T_h of their usable groups.
struct AggregationPlan {
  int receiver = 0;
  std::vector<int> agg_groups;                      // S, ascending
  std::map<int, int> agg_servers;                   // group -> server
  std::vector<int> agg_set;                         // M, ascending
  std::map<int, std::vector<int>> agg_clients;      // group -> summed clients
  std::vector<PatchForward> patches;
  std::map<int, std::vector<std::pair<int, int>>> forwards;
  // l -> k+T_h (group, server) pairs

  size_t message_count() const;
};

struct DownlinkMsg {
  enum class Kind { PartialAggregate, Forward };
  Kind kind = Kind::Forward;
  int server = 0;
  int receiver = 0;
  int group = 0;
  std::vector<int> clients;  // summed clients, or the single origin
  FieldVec payload;
};

// Per-client symbol counts and the normalized loads of one round.
struct LoadReport {
  uint64_t pattern_id = 0;
  std::vector<uint64_t> uplink_symbols;    // q_i
  std::vector<uint64_t> downlink_symbols;  // d_i^m
  Rational c_up;
  Rational c_down;
};

// Everything observable in one round; input to load accounting and to
// the privacy views.
struct Transcript {
  Params params;
  FailureTable table{1, 1};
  uint64_t pattern_id = 0;
  std::vector<std::vector<UplinkShare>> inboxes;      // per server
  std::vector<AggregationPlan> plans;                 // per receiver
  std::vector<std::vector<DownlinkMsg>> downlink;     // per receiver

  // Line-oriented log: one message per line, payloads in hex.
  std::string serialize() const;
};

struct RoundResult {
  std::vector<FieldVec> decoded;  // per client, length p
  LoadReport report;
  Transcript transcript;
};

// The floor(H/v) shares of one client, one per group.
std::vector<UplinkShare> client_encode(const Field& f, const Params& params,
                                       const ClientSecret& secret,
                                       const EvalPoints& pts);

AggregationPlan plan_downlink(const Params& params, const VisibleTable& vis,
                              const Grouping& grouping);

// Executes one receiver's plan against the servers' inboxes.
std::vector<DownlinkMsg> server_execute(
    const Field& f, const AggregationPlan& plan,
    const std::vector<std::vector<UplinkShare>>& inboxes,
    const Grouping& grouping);

// Recovers sum_i g_i from the received messages plus the receiver's own
// masked gradient.
FieldVec client_decode(const Field& f, const Params& params,
                       const AggregationPlan& plan,
                       const std::vector<DownlinkMsg>& msgs,
                       const ClientSecret& own, const EvalPoints& pts);

RoundResult run_round(const Params& params,
                      const std::vector<FieldVec>& gradients,
                      const FailureTable& table, uint64_t global_seed,
                      bool disable_masks = false, uint64_t pattern_id = 0);

LoadReport measure_loads(const Transcript& tr);

}  // namespace lcm
