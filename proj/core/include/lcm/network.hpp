#pragma once

#include <cstdint>
#include <functional>
#include <string>
#include <vector>

#include "lcm/errors.hpp"
#include "lcm/rng.hpp"

namespace lcm {

// Disjoint server groups of size v; servers past floor(H/v)*v take no
// part in the round.
struct Grouping {
  std::vector<std::vector<int>> groups;
  std::vector<int> dropped;

  int group_of(int server) const;  // -1 for dropped servers
};

Grouping make_groups(int num_servers, int group_size);

// E x H link matrix for one round; entry (i,j) set means the link
// between client i and server j works. The same table governs uplink
// and downlink.
class FailureTable {
 public:
  FailureTable(int num_clients, int num_servers, bool all_up = true);

  int num_clients() const { return e_; }
  int num_servers() const { return h_; }

  bool link(int client, int server) const {
    return bits_[static_cast<size_t>(client) * h_ + server] != 0;
  }
  void set_link(int client, int server, bool up) {
    bits_[static_cast<size_t>(client) * h_ + server] = up ? 1 : 0;
  }

  int row_zeros(int client) const;
  int max_row_zeros() const;

  // One row per client, '0'/'1' per server.
  std::string serialize() const;
  static FailureTable parse(const std::string& text);

  friend bool operator==(const FailureTable& a, const FailureTable& b) {
    return a.e_ == b.e_ && a.h_ == b.h_ && a.bits_ == b.bits_;
  }

 private:
  int e_;
  int h_;
  std::vector<uint8_t> bits_;
};

// The straggling-pattern space Omega(s): all tables with at most s zeros
// per row. Provides a stateless index -> table bijection so enumeration
// can be split across workers.
class PatternSpace {
 public:
  PatternSpace(int num_clients, int num_servers, int max_stragglers);

  uint64_t row_count() const { return static_cast<uint64_t>(rows_.size()); }
  // |Omega(s)| = row_count^E; throws too_large_to_enumerate on overflow.
  uint64_t total() const;

  FailureTable table_at(uint64_t index) const;
  FailureTable sample(SplitMix64& rng) const;

  void enumerate(const std::function<void(uint64_t, const FailureTable&)>&
                     fn) const;

  // Candidate worst-case tables: full enumeration when the space fits in
  // the budget, otherwise a heuristic that aligns and staggers each
  // row's stragglers across the same column sets.
  std::vector<FailureTable> worst_case_candidates(
      uint64_t budget = 1000000) const;

 private:
  int e_;
  int h_;
  int s_;
  std::vector<std::vector<int>> rows_;  // zero-position sets, one per row pattern
};

// Groups usable for the pair (sender, receiver): some server in the
// group heard the sender and can reach the receiver.
std::vector<int> usable_groups(const FailureTable& t, const Grouping& g,
                               int sender, int receiver);

// What one client can see of the table: only the columns of servers it
// is connected to.
class VisibleTable {
 public:
  VisibleTable(const FailureTable& t, int receiver);

  int receiver() const { return receiver_; }
  int num_clients() const { return e_; }
  const std::vector<int>& visible_servers() const { return servers_; }
  bool server_visible(int server) const { return mask_[server] != 0; }

  // Link state of a visible column; throws if the column is hidden.
  bool link(int client, int server) const;

 private:
  int receiver_;
  int e_;
  std::vector<int> servers_;
  std::vector<uint8_t> mask_;
  std::vector<std::vector<uint8_t>> cols_;  // indexed [server][client]
};

}  // namespace lcm
