#include "lcm/protocol.hpp"

#include <algorithm>
#include <bit>
#include <sstream>

namespace lcm {

namespace {

std::string hex_payload(const FieldVec& v) {
  std::ostringstream out;
  out << std::hex;
  for (size_t i = 0; i < v.size(); ++i) {
    if (i) out << ':';
    out << v[i];
  }
  return out.str();
}

}  // namespace

size_t AggregationPlan::message_count() const {
  size_t n = agg_set.empty() ? 0 : agg_groups.size();
  n += patches.size();
  for (const auto& [l, pairs] : forwards) n += pairs.size();
  return n;
}

std::vector<UplinkShare> client_encode(const Field& f, const Params& params,
                                       const ClientSecret& secret,
                                       const EvalPoints& pts) {
  const size_t k = static_cast<size_t>(params.recovery_dim());
  const size_t clen = params.chunk_len();
  if (secret.masked.size() != params.padded_len())
    throw chunking_error("masked gradient length is not k*chunk_len");

  std::vector<FieldVec> chunks(k);
  for (size_t r = 0; r < k; ++r)
    chunks[r] = FieldVec(secret.masked.begin() + r * clen,
                         secret.masked.begin() + (r + 1) * clen);

  auto shares = encode_client(f, chunks, secret.noise, pts);
  std::vector<UplinkShare> out;
  out.reserve(shares.size());
  for (size_t j = 0; j < shares.size(); ++j)
    out.push_back({secret.client_id, static_cast<int>(j),
                   std::move(shares[j])});
  return out;
}

AggregationPlan plan_downlink(const Params& params, const VisibleTable& vis,
                              const Grouping& grouping) {
  const int e = params.num_clients;
  const int receiver = vis.receiver();
  const int num_groups = static_cast<int>(grouping.groups.size());
  const int degree = params.code_degree();  // |S| = k + T_h

  // Visible servers per group, ascending.
  std::vector<std::vector<int>> vis_servers(num_groups);
  for (int h : vis.visible_servers()) {
    int g = grouping.group_of(h);
    if (g >= 0) vis_servers[g].push_back(h);
  }

  // usable[l]: bitmask over groups with a server reaching both l and the
  // receiver. Computable from visible columns alone.
  std::vector<uint64_t> usable(e, 0);
  for (int l = 0; l < e; ++l) {
    if (l == receiver) continue;
    for (int g = 0; g < num_groups; ++g)
      for (int h : vis_servers[g])
        if (vis.link(l, h)) {
          usable[l] |= uint64_t{1} << g;
          break;
        }
    if (std::popcount(usable[l]) < degree)
      throw plan_infeasible(
          "client has fewer than k+T_h usable groups; pattern outside "
          "Omega(s)");
  }

  std::vector<int> cand;
  for (int g = 0; g < num_groups; ++g)
    if (!vis_servers[g].empty()) cand.push_back(g);
  if (static_cast<int>(cand.size()) < degree)
    throw plan_infeasible("receiver reaches fewer than k+T_h groups");

  auto members_of = [&](uint64_t s_mask) {
    std::vector<int> m;
    for (int l = 0; l < e; ++l)
      if (l != receiver && (usable[l] & s_mask) == s_mask) m.push_back(l);
    return m;
  };

  // Patch count for a chosen S: per group the executing server is the
  // one covering most of M (ties to the lowest id); every uncovered
  // member costs one same-group forward.
  auto patch_count = [&](const std::vector<int>& s_groups,
                         const std::vector<int>& members) {
    size_t patches = 0;
    for (int g : s_groups) {
      size_t best_cov = 0;
      for (int h : vis_servers[g]) {
        size_t cov = 0;
        for (int l : members)
          if (vis.link(l, h)) ++cov;
        best_cov = std::max(best_cov, cov);
      }
      patches += members.size() - best_cov;
    }
    return patches;
  };

  // Select S maximizing |M|, then minimizing patches, then
  // lexicographically smallest. Exact over all C(|cand|, degree)
  // subsets within budget, else greedy growth.
  std::vector<int> best_s;
  std::vector<int> best_m;
  size_t best_patches = 0;
  constexpr uint64_t kSearchBudget = 1000000;

  uint64_t n_subsets = binomial(cand.size(), degree);
  if (n_subsets != 0 && n_subsets <= kSearchBudget) {
    std::vector<int> idx(degree);
    for (int i = 0; i < degree; ++i) idx[i] = i;
    while (true) {
      uint64_t s_mask = 0;
      std::vector<int> s_groups(degree);
      for (int i = 0; i < degree; ++i) {
        s_groups[i] = cand[idx[i]];
        s_mask |= uint64_t{1} << cand[idx[i]];
      }
      auto m = members_of(s_mask);
      if (best_s.empty() || m.size() > best_m.size() ||
          (m.size() == best_m.size() &&
           patch_count(s_groups, m) < best_patches)) {
        best_s = s_groups;
        best_m = m;
        best_patches = patch_count(s_groups, m);
      }
      // next combination
      int i = degree - 1;
      while (i >= 0 &&
             idx[i] == static_cast<int>(cand.size()) - degree + i)
        --i;
      if (i < 0) break;
      ++idx[i];
      for (int j = i + 1; j < degree; ++j) idx[j] = idx[j - 1] + 1;
    }
  } else {
    uint64_t s_mask = 0;
    for (int step = 0; step < degree; ++step) {
      int best_g = -1;
      size_t best_cnt = 0;
      for (int g : cand) {
        if (s_mask & (uint64_t{1} << g)) continue;
        size_t cnt = members_of(s_mask | (uint64_t{1} << g)).size();
        if (best_g < 0 || cnt > best_cnt) {
          best_g = g;
          best_cnt = cnt;
        }
      }
      s_mask |= uint64_t{1} << best_g;
    }
    for (int g = 0; g < num_groups; ++g)
      if (s_mask & (uint64_t{1} << g)) best_s.push_back(g);
    best_m = members_of(s_mask);
    best_patches = patch_count(best_s, best_m);
  }

  AggregationPlan plan;
  plan.receiver = receiver;
  plan.agg_set = best_m;
  if (!best_m.empty()) {
    plan.agg_groups = best_s;
    std::sort(plan.agg_groups.begin(), plan.agg_groups.end());
    for (int g : plan.agg_groups) {
      int best_server = -1;
      size_t best_cov = 0;
      for (int h : vis_servers[g]) {
        size_t cov = 0;
        for (int l : best_m)
          if (vis.link(l, h)) ++cov;
        if (cov > best_cov || best_server < 0) {
          best_server = h;
          best_cov = cov;
        }
      }
      plan.agg_servers[g] = best_server;
      for (int l : best_m) {
        if (vis.link(l, best_server)) {
          plan.agg_clients[g].push_back(l);
        } else {
          for (int h : vis_servers[g])
            if (vis.link(l, h)) {
              plan.patches.push_back({l, g, h});
              break;
            }
        }
      }
    }
  }

  for (int l = 0; l < e; ++l) {
    if (l == receiver) continue;
    if (std::find(best_m.begin(), best_m.end(), l) != best_m.end())
      continue;
    std::vector<std::pair<int, int>> pairs;
    for (int g = 0; g < num_groups && static_cast<int>(pairs.size()) < degree;
         ++g) {
      if (!(usable[l] & (uint64_t{1} << g))) continue;
      for (int h : vis_servers[g])
        if (vis.link(l, h)) {
          pairs.emplace_back(g, h);
          break;
        }
    }
    plan.forwards[l] = std::move(pairs);
  }
  return plan;
}

std::vector<DownlinkMsg> server_execute(
    const Field& f, const AggregationPlan& plan,
    const std::vector<std::vector<UplinkShare>>& inboxes,
    const Grouping& grouping) {
  (void)grouping;
  auto find_share = [&](int server, int client,
                        int group) -> const FieldVec& {
    for (const auto& sh : inboxes[server])
      if (sh.client == client && sh.group == group) return sh.payload;
    throw plan_violation("server " + std::to_string(server) +
                         " lacks the share of client " +
                         std::to_string(client));
  };

  std::vector<DownlinkMsg> out;
  if (!plan.agg_set.empty()) {
    for (int g : plan.agg_groups) {
      int server = plan.agg_servers.at(g);
      const auto& clients = plan.agg_clients.at(g);
      if (clients.empty())
        throw plan_violation("aggregate over empty client set");
      FieldVec sum = find_share(server, clients[0], g);
      for (size_t i = 1; i < clients.size(); ++i)
        f.vec_add_inplace(sum, find_share(server, clients[i], g));
      out.push_back({DownlinkMsg::Kind::PartialAggregate, server,
                     plan.receiver, g, clients, std::move(sum)});
    }
  }
  for (const auto& patch : plan.patches) {
    out.push_back({DownlinkMsg::Kind::Forward, patch.server, plan.receiver,
                   patch.group,
                   {patch.client},
                   find_share(patch.server, patch.client, patch.group)});
  }
  for (const auto& [l, pairs] : plan.forwards) {
    for (const auto& [g, server] : pairs)
      out.push_back({DownlinkMsg::Kind::Forward, server, plan.receiver, g,
                     {l}, find_share(server, l, g)});
  }
  return out;
}

FieldVec client_decode(const Field& f, const Params& params,
                       const AggregationPlan& plan,
                       const std::vector<DownlinkMsg>& msgs,
                       const ClientSecret& own, const EvalPoints& pts) {
  const size_t k = static_cast<size_t>(params.recovery_dim());
  const size_t clen = params.chunk_len();
  const int degree = params.code_degree();
  std::vector<uint64_t> data_targets(pts.betas.begin(),
                                     pts.betas.begin() + k);

  std::vector<FieldVec> total(k, FieldVec(clen, 0));

  auto accumulate_poly = [&](const std::vector<uint64_t>& xs,
                             const std::vector<FieldVec>& ys) {
    if (static_cast<int>(xs.size()) != degree)
      throw decode_underdetermined("need k+T_h evaluations, have " +
                                   std::to_string(xs.size()));
    auto chunks = interpolate_to_targets(f, xs, ys, data_targets);
    for (size_t r = 0; r < k; ++r) f.vec_add_inplace(total[r], chunks[r]);
  };

  const bool in_m = !plan.agg_set.empty();
  if (in_m) {
    std::vector<uint64_t> xs;
    std::vector<FieldVec> ys;
    for (int g : plan.agg_groups) {
      FieldVec value;
      bool have_agg = false;
      for (const auto& m : msgs) {
        if (m.group != g) continue;
        if (m.kind == DownlinkMsg::Kind::PartialAggregate) {
          if (have_agg) {
            if (!(value == m.payload) && m.clients == plan.agg_clients.at(g))
              throw inconsistent_shares("conflicting aggregates for group " +
                                        std::to_string(g));
          } else {
            value = m.payload;
            have_agg = true;
          }
        }
      }
      if (!have_agg)
        throw decode_underdetermined("missing aggregate for group " +
                                     std::to_string(g));
      // Same-group forwards of aggregate-set members complete the
      // evaluation of the full aggregate polynomial at this point.
      for (const auto& m : msgs) {
        if (m.group != g || m.kind != DownlinkMsg::Kind::Forward) continue;
        int l = m.clients.at(0);
        if (std::find(plan.agg_set.begin(), plan.agg_set.end(), l) ==
            plan.agg_set.end())
          continue;
        f.vec_add_inplace(value, m.payload);
      }
      xs.push_back(pts.alphas[g]);
      ys.push_back(std::move(value));
    }
    accumulate_poly(xs, ys);
  }

  for (const auto& [l, pairs] : plan.forwards) {
    std::vector<uint64_t> xs;
    std::vector<FieldVec> ys;
    for (const auto& [g, server] : pairs) {
      const FieldVec* found = nullptr;
      for (const auto& m : msgs) {
        if (m.kind == DownlinkMsg::Kind::Forward && m.group == g &&
            m.server == server && m.clients.at(0) == l) {
          if (found && !(*found == m.payload))
            throw inconsistent_shares("conflicting forwards for client " +
                                      std::to_string(l));
          found = &m.payload;
        }
      }
      if (!found)
        throw decode_underdetermined("missing forward for client " +
                                     std::to_string(l));
      xs.push_back(pts.alphas[g]);
      ys.push_back(*found);
    }
    accumulate_poly(xs, ys);
  }

  // Own contribution enters locally, never over the network.
  for (size_t r = 0; r < k; ++r)
    for (size_t t = 0; t < clen; ++t)
      total[r][t] = f.add(total[r][t], own.masked[r * clen + t]);

  FieldVec out;
  out.reserve(params.padded_len());
  for (size_t r = 0; r < k; ++r)
    out.insert(out.end(), total[r].begin(), total[r].end());
  out.resize(params.grad_len);
  return out;
}

RoundResult run_round(const Params& params,
                      const std::vector<FieldVec>& gradients,
                      const FailureTable& table, uint64_t global_seed,
                      bool disable_masks, uint64_t pattern_id) {
  validate_params(params);
  if (table.num_clients() != params.num_clients ||
      table.num_servers() != params.num_servers)
    throw dimension_error("failure table shape mismatch");
  if (table.max_row_zeros() > params.stragglers)
    throw infeasible_resiliency(
        "failure table has a row with more than s stragglers");

  Field f(params.prime);
  Grouping grouping = make_groups(params.num_servers, params.group_size);
  EvalPoints pts = EvalPoints::canonical(
      params.code_degree(), params.num_groups(), f);
  auto secrets = make_client_secrets(f, params, gradients, global_seed,
                                     disable_masks);

  RoundResult res;
  res.transcript.params = params;
  res.transcript.table = table;
  res.transcript.pattern_id = pattern_id;
  res.transcript.inboxes.resize(params.num_servers);

  for (const auto& secret : secrets) {
    auto shares = client_encode(f, params, secret, pts);
    for (const auto& share : shares)
      for (int h : grouping.groups[share.group])
        if (table.link(share.client, h))
          res.transcript.inboxes[h].push_back(share);
  }

  res.decoded.resize(params.num_clients);
  res.transcript.plans.resize(params.num_clients);
  res.transcript.downlink.resize(params.num_clients);
  for (int i = 0; i < params.num_clients; ++i) {
    VisibleTable vis(table, i);
    auto plan = plan_downlink(params, vis, grouping);
    auto msgs = server_execute(f, plan, res.transcript.inboxes, grouping);
    // Keep only messages whose downlink actually delivers; the plan only
    // uses servers reaching the receiver, so nothing is lost here.
    std::vector<DownlinkMsg> delivered;
    for (auto& m : msgs)
      if (table.link(i, m.server)) delivered.push_back(std::move(m));
    res.decoded[i] = client_decode(f, params, plan, delivered, secrets[i],
                                   pts);
    res.transcript.plans[i] = std::move(plan);
    res.transcript.downlink[i] = std::move(delivered);
  }

  res.report = measure_loads(res.transcript);
  return res;
}

LoadReport measure_loads(const Transcript& tr) {
  const Params& p = tr.params;
  LoadReport r;
  r.pattern_id = tr.pattern_id;
  const uint64_t clen = p.chunk_len();
  // Uplink is pattern-independent: every share goes to all v servers of
  // its group whether or not the link delivers.
  const uint64_t q_i =
      static_cast<uint64_t>(p.num_groups()) * p.group_size * clen;
  r.uplink_symbols.assign(p.num_clients, q_i);
  r.downlink_symbols.assign(p.num_clients, 0);
  for (int i = 0; i < p.num_clients; ++i)
    for (const auto& m : tr.downlink[i])
      if (tr.table.link(i, m.server))
        r.downlink_symbols[i] += m.payload.size();

  uint64_t max_up = 0, max_down = 0;
  for (int i = 0; i < p.num_clients; ++i) {
    max_up = std::max(max_up, r.uplink_symbols[i]);
    max_down = std::max(max_down, r.downlink_symbols[i]);
  }
  const long long norm = static_cast<long long>(p.padded_len());
  r.c_up = Rational(static_cast<long long>(max_up), norm);
  r.c_down = Rational(static_cast<long long>(max_down), norm);
  return r;
}

std::string Transcript::serialize() const {
  std::ostringstream out;
  out << "pattern " << pattern_id << "\n";
  for (size_t h = 0; h < inboxes.size(); ++h)
    for (const auto& sh : inboxes[h])
      out << "UP client=" << sh.client << " server=" << h
          << " group=" << sh.group << " payload=" << hex_payload(sh.payload)
          << "\n";
  for (size_t i = 0; i < downlink.size(); ++i) {
    for (const auto& m : downlink[i]) {
      out << "DOWN server=" << m.server << " receiver=" << i << " kind="
          << (m.kind == DownlinkMsg::Kind::PartialAggregate ? "AGG" : "FWD")
          << " group=" << m.group << " clients=";
      for (size_t c = 0; c < m.clients.size(); ++c) {
        if (c) out << ',';
        out << m.clients[c];
      }
      out << " payload=" << hex_payload(m.payload) << "\n";
    }
  }
  return out.str();
}

}  // namespace lcm
