#pragma once

#include <cstdint>
#include <vector>

#include "lcm/errors.hpp"
#include "lcm/rng.hpp"

namespace lcm {

using FieldVec = std::vector<uint64_t>;

bool is_prime_u64(uint64_t n);

// Arithmetic context for the prime field F_q. Elements are canonical
// residues in [0, q) stored as uint64_t; the modulus lives here, not in
// the elements.
class Field {
 public:
  explicit Field(uint64_t q);

  uint64_t modulus() const { return q_; }

  uint64_t reduce(uint64_t a) const { return a % q_; }

  // Maps a signed integer to its canonical residue (e.g. -56 -> q-56).
  uint64_t from_signed(long long a) const {
    long long r = a % static_cast<long long>(q_);
    if (r < 0) r += static_cast<long long>(q_);
    return static_cast<uint64_t>(r);
  }

  uint64_t add(uint64_t a, uint64_t b) const {
    uint64_t s = a + b;
    return s >= q_ ? s - q_ : s;
  }

  uint64_t sub(uint64_t a, uint64_t b) const {
    return a >= b ? a - b : a + q_ - b;
  }

  uint64_t neg(uint64_t a) const { return a == 0 ? 0 : q_ - a; }

  uint64_t mul(uint64_t a, uint64_t b) const {
    return static_cast<uint64_t>(
        static_cast<unsigned __int128>(a) * b % q_);
  }

  uint64_t pow(uint64_t a, uint64_t e) const;

  uint64_t inv(uint64_t a) const {
    if (a == 0) throw division_by_zero();
    return pow(a, q_ - 2);
  }

  // --- vector operations -------------------------------------------------

  FieldVec vec_add(const FieldVec& u, const FieldVec& v) const;
  FieldVec vec_sub(const FieldVec& u, const FieldVec& v) const;
  FieldVec vec_scale(uint64_t c, const FieldVec& u) const;

  void vec_add_inplace(FieldVec& u, const FieldVec& v) const;
  void vec_sub_inplace(FieldVec& u, const FieldVec& v) const;

  // Uniform sampling via rejection, so every residue is equally likely.
  uint64_t sample(SplitMix64& rng) const;
  FieldVec sample_vec(size_t len, SplitMix64& rng) const;

 private:
  uint64_t q_;
};

}  // namespace lcm
