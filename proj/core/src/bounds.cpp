#include "lcm/bounds.hpp"

#include <algorithm>

#include "lcm/field.hpp"

namespace lcm {

uint64_t binomial(uint64_t n, uint64_t r) {
  if (r > n) return 0;
  r = std::min(r, n - r);
  uint64_t result = 1;
  for (uint64_t i = 1; i <= r; ++i) {
    result = result * (n - r + i) / i;
  }
  return result;
}

std::vector<std::string> check_params(const Params& p) {
  std::vector<std::string> v;
  if (p.num_clients < 2)
    v.push_back("client count must satisfy E >= 2 (got E=" +
                std::to_string(p.num_clients) + ")");
  if (p.num_servers < 1)
    v.push_back("server count must satisfy H >= 1");
  if (p.group_size < 1 || p.group_size > p.num_servers)
    v.push_back("group size must satisfy 1 <= v <= H (got v=" +
                std::to_string(p.group_size) + ")");
  if (p.stragglers < 0 || 2 * p.stragglers >= p.num_servers)
    v.push_back("resiliency threshold must satisfy s < H/2 (got s=" +
                std::to_string(p.stragglers) + ", H=" +
                std::to_string(p.num_servers) + ")");
  if (p.server_collusion < 0 ||
      p.server_collusion > p.num_servers - 2 * p.stragglers - 1)
    v.push_back("server collusion bound must satisfy T_h <= H-2s-1 (got T_h=" +
                std::to_string(p.server_collusion) + ", H-2s-1=" +
                std::to_string(p.num_servers - 2 * p.stragglers - 1) + ")");
  if (p.client_collusion < 0 || p.client_collusion > p.num_clients - 2)
    v.push_back("client collusion bound must satisfy T_c <= E-2 (got T_c=" +
                std::to_string(p.client_collusion) + ", E-2=" +
                std::to_string(p.num_clients - 2) + ")");
  if (p.group_size >= 1 && p.group_size <= p.num_servers &&
      p.recovery_dim() < 1)
    v.push_back(
        "recovery dimension must satisfy "
        "k = floor(H/v)-floor(2s/v)-T_h >= 1 (got k=" +
        std::to_string(p.recovery_dim()) + ")");
  if (p.group_size >= 1 && p.group_size <= p.num_servers &&
      p.recovery_dim() >= 1) {
    uint64_t need = static_cast<uint64_t>(p.code_degree() + p.num_groups());
    if (p.prime < need)
      v.push_back("field must satisfy q >= k+T_h+floor(H/v) = " +
                  std::to_string(need) + " (got q=" +
                  std::to_string(p.prime) + ")");
  }
  if (!is_prime_u64(p.prime))
    v.push_back("field modulus must be prime (got q=" +
                std::to_string(p.prime) + ")");
  return v;
}

void validate_params(const Params& p) {
  auto v = check_params(p);
  if (v.empty()) return;
  std::string msg = "invalid parameters:";
  for (const auto& s : v) msg += "\n  - " + s;
  throw infeasible_params(msg);
}

Rational uplink_lower_bound(const Params& p) {
  long long den = p.num_servers - 2 * p.stragglers - p.server_collusion;
  if (den < 1) throw infeasible_params("H-2s-T_h must be >= 1");
  return {p.num_servers, den};
}

Rational downlink_lower_bound(const Params& p) {
  long long den = p.num_servers - 2 * p.stragglers - p.server_collusion;
  if (den < 1) throw infeasible_params("H-2s-T_h must be >= 1");
  return {p.num_servers - 2 * p.stragglers, den};
}

Rational uplink_lcm_load(const Params& p) {
  return {static_cast<long long>(p.num_groups()) * p.group_size,
          p.recovery_dim()};
}

Rational downlink_lcm_load(const Params& p) {
  long long groups = p.num_groups();
  long long degree = p.code_degree();  // k + T_h
  // Groups that can be entirely cut off from one client.
  long long dead = std::max<long long>(
      p.stragglers - groups * (p.group_size - 1), 0);
  uint64_t bins = binomial(static_cast<uint64_t>(groups - dead),
                           static_cast<uint64_t>(degree));
  long long e1 = p.num_clients - 1;
  long long guaranteed =
      bins == 0 ? 0
                : (e1 + static_cast<long long>(bins) - 1) /
                      static_cast<long long>(bins);  // ceil((E-1)/bins)
  return Rational{degree * (e1 - guaranteed + p.group_size),
                  p.recovery_dim()};
}

BoundSet compute_bounds(const Params& p) {
  BoundSet b;
  b.c_up_lower = uplink_lower_bound(p);
  b.c_down_lower = downlink_lower_bound(p);
  b.c_up_lcm = uplink_lcm_load(p);
  b.c_down_lcm = downlink_lcm_load(p);
  return b;
}

}  // namespace lcm
