#pragma once

#include <cstdint>
#include <numeric>
#include <string>
#include <vector>

#include "lcm/errors.hpp"
#include "lcm/params.hpp"

namespace lcm {

// Exact rational; every bound and measured load is compared without
// floating point.
struct Rational {
  long long num = 0;
  long long den = 1;

  Rational() = default;
  Rational(long long n, long long d = 1) : num(n), den(d) { normalize(); }

  void normalize() {
    if (den < 0) {
      num = -num;
      den = -den;
    }
    long long g = std::gcd(num < 0 ? -num : num, den);
    if (g > 1) {
      num /= g;
      den /= g;
    }
    if (num == 0) den = 1;
  }

  double to_double() const { return static_cast<double>(num) / den; }
  std::string to_string() const {
    return std::to_string(num) + "/" + std::to_string(den);
  }

  friend bool operator==(const Rational& a, const Rational& b) {
    return a.num == b.num && a.den == b.den;
  }
  friend bool operator<(const Rational& a, const Rational& b) {
    return static_cast<__int128>(a.num) * b.den <
           static_cast<__int128>(b.num) * a.den;
  }
  friend bool operator<=(const Rational& a, const Rational& b) {
    return a == b || a < b;
  }
  friend bool operator>(const Rational& a, const Rational& b) { return b < a; }
  friend bool operator>=(const Rational& a, const Rational& b) {
    return b <= a;
  }
};

// C(n, r) over uint64; desk-scale arguments only.
uint64_t binomial(uint64_t n, uint64_t r);

// Lower bounds and the loads the LCM construction attains.
struct BoundSet {
  Rational c_up_lower;
  Rational c_down_lower;
  Rational c_up_lcm;
  Rational c_down_lcm;
};

// Every violated feasibility constraint, one message per violation,
// each naming the inequality it breaks. Empty means the configuration
// is admissible.
std::vector<std::string> check_params(const Params& p);

// Throws infeasible_params listing all violations.
void validate_params(const Params& p);

Rational uplink_lower_bound(const Params& p);
Rational downlink_lower_bound(const Params& p);
Rational uplink_lcm_load(const Params& p);
Rational downlink_lcm_load(const Params& p);

BoundSet compute_bounds(const Params& p);

}  // namespace lcm
