#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "lcm/network.hpp"
#include "lcm/params.hpp"
#include "lcm/protocol.hpp"

namespace lcm {

// Exactly what a colluding set observes: for servers, their uplink
// inboxes; for clients, every inbox of a server some colluder reaches,
// plus the colluders' own gradients and randomness.
struct AdversaryView {
  bool servers = true;
  std::vector<int> colluders;
  std::vector<std::pair<int, std::vector<UplinkShare>>> inboxes;
  std::vector<ClientSecret> secrets;  // client collusion only
};

AdversaryView collusion_view(const Transcript& tr, bool servers,
                             const std::vector<int>& colluders,
                             const std::vector<ClientSecret>* secrets =
                                 nullptr,
                             bool enforce_threshold = true);

enum class Verdict { Independent, Dependent };

struct OracleResult {
  Verdict verdict = Verdict::Independent;
  uint64_t worlds = 0;
  std::string witness;  // populated when dependent

  bool independent() const { return verdict == Verdict::Independent; }
};

struct OracleOptions {
  bool disable_masks = false;
  bool enforce_threshold = true;
  uint64_t budget = 100000000ULL;
};

// Exhaustively enumerates every assignment of gradients, pairwise masks
// and noise, and tests whether the colluding servers' view has the same
// conditional distribution for every gradient tuple. Integer-count
// equality, which is equivalent to zero mutual information.
OracleResult mi_server_oracle(const Params& params,
                              const std::vector<int>& colluding_servers,
                              const FailureTable& table,
                              const OracleOptions& opts = {});

// Same enumeration for colluding clients: conditioned on the colluders'
// gradients and the aggregate, the view distribution must not vary with
// the honest gradients.
OracleResult mi_client_oracle(const Params& params,
                              const std::vector<int>& colluding_clients,
                              const FailureTable& table,
                              const OracleOptions& opts = {});

// Checks the noise block of the coefficient matrix for every T_h-subset
// of groups; returns the first non-invertible subset, if any.
std::optional<std::vector<int>> ub_invertibility_sweep(const Params& params);

}  // namespace lcm
