#include "lcm/field.hpp"

#include <string>

namespace lcm {

namespace {

uint64_t mulmod(uint64_t a, uint64_t b, uint64_t m) {
  return static_cast<uint64_t>(static_cast<unsigned __int128>(a) * b % m);
}

uint64_t powmod(uint64_t a, uint64_t e, uint64_t m) {
  uint64_t r = 1 % m;
  a %= m;
  while (e) {
    if (e & 1) r = mulmod(r, a, m);
    a = mulmod(a, a, m);
    e >>= 1;
  }
  return r;
}

}  // namespace

// Deterministic Miller-Rabin; this base set decides primality for all
// 64-bit integers.
bool is_prime_u64(uint64_t n) {
  if (n < 2) return false;
  for (uint64_t p : {2ULL, 3ULL, 5ULL, 7ULL, 11ULL, 13ULL, 17ULL, 19ULL,
                     23ULL, 29ULL, 31ULL, 37ULL}) {
    if (n % p == 0) return n == p;
  }
  uint64_t d = n - 1;
  int r = 0;
  while ((d & 1) == 0) {
    d >>= 1;
    ++r;
  }
  for (uint64_t a : {2ULL, 3ULL, 5ULL, 7ULL, 11ULL, 13ULL, 17ULL, 19ULL,
                     23ULL, 29ULL, 31ULL, 37ULL}) {
    uint64_t x = powmod(a, d, n);
    if (x == 1 || x == n - 1) continue;
    bool witness = true;
    for (int i = 1; i < r; ++i) {
      x = mulmod(x, x, n);
      if (x == n - 1) {
        witness = false;
        break;
      }
    }
    if (witness) return false;
  }
  return true;
}

Field::Field(uint64_t q) : q_(q) {
  if (!is_prime_u64(q)) {
    throw infeasible_params("field modulus must be prime, got " +
                            std::to_string(q));
  }
}

uint64_t Field::pow(uint64_t a, uint64_t e) const {
  return powmod(a % q_, e, q_);
}

FieldVec Field::vec_add(const FieldVec& u, const FieldVec& v) const {
  if (u.size() != v.size())
    throw dimension_error("vector add: length mismatch");
  FieldVec r(u.size());
  for (size_t i = 0; i < u.size(); ++i) r[i] = add(u[i], v[i]);
  return r;
}

FieldVec Field::vec_sub(const FieldVec& u, const FieldVec& v) const {
  if (u.size() != v.size())
    throw dimension_error("vector sub: length mismatch");
  FieldVec r(u.size());
  for (size_t i = 0; i < u.size(); ++i) r[i] = sub(u[i], v[i]);
  return r;
}

FieldVec Field::vec_scale(uint64_t c, const FieldVec& u) const {
  FieldVec r(u.size());
  for (size_t i = 0; i < u.size(); ++i) r[i] = mul(c, u[i]);
  return r;
}

void Field::vec_add_inplace(FieldVec& u, const FieldVec& v) const {
  if (u.size() != v.size())
    throw dimension_error("vector add: length mismatch");
  for (size_t i = 0; i < u.size(); ++i) u[i] = add(u[i], v[i]);
}

void Field::vec_sub_inplace(FieldVec& u, const FieldVec& v) const {
  if (u.size() != v.size())
    throw dimension_error("vector sub: length mismatch");
  for (size_t i = 0; i < u.size(); ++i) u[i] = sub(u[i], v[i]);
}

uint64_t Field::sample(SplitMix64& rng) const {
  // Largest multiple of q below 2^64; rejection keeps the draw uniform.
  const uint64_t limit = UINT64_MAX - UINT64_MAX % q_;
  uint64_t x;
  do {
    x = rng.next();
  } while (x >= limit);
  return x % q_;
}

FieldVec Field::sample_vec(size_t len, SplitMix64& rng) const {
  FieldVec r(len);
  for (auto& x : r) x = sample(rng);
  return r;
}

}  // namespace lcm
