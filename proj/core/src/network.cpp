#include "lcm/network.hpp"

#include <algorithm>
#include <numeric>
#include <sstream>

namespace lcm {

Grouping make_groups(int num_servers, int group_size) {
  if (group_size < 1 || group_size > num_servers)
    throw bad_group_size("group size must satisfy 1 <= v <= H");
  Grouping g;
  int num_groups = num_servers / group_size;
  g.groups.resize(num_groups);
  int server = 0;
  for (int j = 0; j < num_groups; ++j)
    for (int t = 0; t < group_size; ++t) g.groups[j].push_back(server++);
  while (server < num_servers) g.dropped.push_back(server++);
  return g;
}

int Grouping::group_of(int server) const {
  for (size_t j = 0; j < groups.size(); ++j)
    for (int h : groups[j])
      if (h == server) return static_cast<int>(j);
  return -1;
}

FailureTable::FailureTable(int num_clients, int num_servers, bool all_up)
    : e_(num_clients),
      h_(num_servers),
      bits_(static_cast<size_t>(num_clients) * num_servers,
            all_up ? 1 : 0) {}

int FailureTable::row_zeros(int client) const {
  int z = 0;
  for (int j = 0; j < h_; ++j)
    if (!link(client, j)) ++z;
  return z;
}

int FailureTable::max_row_zeros() const {
  int z = 0;
  for (int i = 0; i < e_; ++i) z = std::max(z, row_zeros(i));
  return z;
}

std::string FailureTable::serialize() const {
  std::string out;
  out.reserve(static_cast<size_t>(e_) * (h_ + 1));
  for (int i = 0; i < e_; ++i) {
    for (int j = 0; j < h_; ++j) out.push_back(link(i, j) ? '1' : '0');
    out.push_back('\n');
  }
  return out;
}

FailureTable FailureTable::parse(const std::string& text) {
  std::vector<std::string> rows;
  std::istringstream in(text);
  std::string line;
  while (std::getline(in, line)) {
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (!line.empty()) rows.push_back(line);
  }
  if (rows.empty()) throw error("pattern file: no rows");
  const size_t h = rows[0].size();
  FailureTable t(static_cast<int>(rows.size()), static_cast<int>(h));
  for (size_t i = 0; i < rows.size(); ++i) {
    if (rows[i].size() != h)
      throw error("pattern file: ragged rows");
    for (size_t j = 0; j < h; ++j) {
      if (rows[i][j] != '0' && rows[i][j] != '1')
        throw error("pattern file: expected '0'/'1'");
      t.set_link(static_cast<int>(i), static_cast<int>(j),
                 rows[i][j] == '1');
    }
  }
  return t;
}

PatternSpace::PatternSpace(int num_clients, int num_servers,
                           int max_stragglers)
    : e_(num_clients), h_(num_servers), s_(max_stragglers) {
  if (max_stragglers < 0 || 2 * max_stragglers >= num_servers)
    throw infeasible_resiliency(
        "resiliency threshold must satisfy s < H/2");
  // All zero-position subsets of size <= s, in deterministic order.
  std::vector<int> subset;
  std::function<void(int)> rec = [&](int start) {
    rows_.push_back(subset);
    if (static_cast<int>(subset.size()) == s_) return;
    for (int j = start; j < h_; ++j) {
      subset.push_back(j);
      rec(j + 1);
      subset.pop_back();
    }
  };
  rec(0);
}

uint64_t PatternSpace::total() const {
  uint64_t t = 1;
  const uint64_t r = row_count();
  for (int i = 0; i < e_; ++i) {
    if (t > UINT64_MAX / r)
      throw too_large_to_enumerate("pattern space exceeds 2^64");
    t *= r;
  }
  return t;
}

FailureTable PatternSpace::table_at(uint64_t index) const {
  FailureTable t(e_, h_);
  const uint64_t r = row_count();
  for (int i = 0; i < e_; ++i) {
    const auto& zeros = rows_[index % r];
    index /= r;
    for (int j : zeros) t.set_link(i, j, false);
  }
  return t;
}

FailureTable PatternSpace::sample(SplitMix64& rng) const {
  FailureTable t(e_, h_);
  const uint64_t r = row_count();
  const uint64_t limit = UINT64_MAX - UINT64_MAX % r;
  for (int i = 0; i < e_; ++i) {
    uint64_t x;
    do {
      x = rng.next();
    } while (x >= limit);
    for (int j : rows_[x % r]) t.set_link(i, j, false);
  }
  return t;
}

void PatternSpace::enumerate(
    const std::function<void(uint64_t, const FailureTable&)>& fn) const {
  const uint64_t n = total();
  for (uint64_t idx = 0; idx < n; ++idx) fn(idx, table_at(idx));
}

std::vector<FailureTable> PatternSpace::worst_case_candidates(
    uint64_t budget) const {
  std::vector<FailureTable> out;
  uint64_t n;
  try {
    n = total();
  } catch (const too_large_to_enumerate&) {
    n = UINT64_MAX;
  }
  if (n <= budget) {
    out.reserve(n);
    for (uint64_t idx = 0; idx < n; ++idx) out.push_back(table_at(idx));
    return out;
  }
  // Heuristic: stragglers concentrated on shared column windows, plus
  // per-row staggered shifts, so rows disagree on as many groups as
  // possible.
  for (int base = 0; base < h_; ++base) {
    for (int stride : {0, 1, s_ > 0 ? s_ : 1}) {
      FailureTable t(e_, h_);
      for (int i = 0; i < e_; ++i)
        for (int z = 0; z < s_; ++z)
          t.set_link(i, (base + i * stride + z) % h_, false);
      if (std::find(out.begin(), out.end(), t) == out.end())
        out.push_back(t);
    }
  }
  return out;
}

std::vector<int> usable_groups(const FailureTable& t, const Grouping& g,
                               int sender, int receiver) {
  std::vector<int> out;
  for (size_t j = 0; j < g.groups.size(); ++j) {
    for (int h : g.groups[j]) {
      if (t.link(sender, h) && t.link(receiver, h)) {
        out.push_back(static_cast<int>(j));
        break;
      }
    }
  }
  return out;
}

VisibleTable::VisibleTable(const FailureTable& t, int receiver)
    : receiver_(receiver),
      e_(t.num_clients()),
      mask_(t.num_servers(), 0),
      cols_(t.num_servers()) {
  for (int j = 0; j < t.num_servers(); ++j) {
    if (!t.link(receiver, j)) continue;
    mask_[j] = 1;
    servers_.push_back(j);
    cols_[j].resize(e_);
    for (int i = 0; i < e_; ++i) cols_[j][i] = t.link(i, j) ? 1 : 0;
  }
}

bool VisibleTable::link(int client, int server) const {
  if (!mask_[server])
    throw error("column not visible to receiver");
  return cols_[server][client] != 0;
}

}  // namespace lcm
