#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

namespace kerbundle {

/// Raised when an input lies outside the mathematical domain an operation supports.
class DomainError : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

/// Raised when a caller violates a precondition (shape mismatch, dependent span, ...).
class UsageError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

using Scalar = std::uint32_t;

inline constexpr std::uint32_t kDefaultPrime = 32003;
inline constexpr int kDefaultDegreeBound = 64;

inline bool is_prime(std::uint64_t n) {
  if (n < 2) return false;
  for (std::uint64_t d = 2; d * d <= n; ++d) {
    if (n % d == 0) return false;
  }
  return true;
}

/// GF(p) with the degree bound of the session. All scalars are kept in [0, p).
class PrimeField {
 public:
  explicit PrimeField(std::uint32_t p = kDefaultPrime, int degree_bound = kDefaultDegreeBound)
      : p_(p), degree_bound_(degree_bound) {
    if (!is_prime(p)) throw DomainError("field modulus " + std::to_string(p) + " is not prime");
    if (p >= (1u << 31)) throw DomainError("field modulus must fit in 31 bits");
    if (static_cast<std::int64_t>(p) <= degree_bound) {
      throw DomainError("characteristic " + std::to_string(p) + " does not exceed the degree bound " +
                        std::to_string(degree_bound));
    }
  }

  std::uint32_t p() const { return p_; }
  int degree_bound() const { return degree_bound_; }

  /// Rejects degrees at or above the characteristic, where Taylor extraction stops being faithful.
  void require_degree(int d) const {
    if (d > degree_bound_ || static_cast<std::int64_t>(d) >= p_) {
      throw DomainError("degree " + std::to_string(d) + " exceeds the session degree bound " +
                        std::to_string(degree_bound_));
    }
  }

  Scalar reduce(std::int64_t v) const {
    std::int64_t r = v % static_cast<std::int64_t>(p_);
    return static_cast<Scalar>(r < 0 ? r + p_ : r);
  }
  Scalar add(Scalar x, Scalar y) const {
    Scalar s = x + y;
    return s >= p_ ? s - p_ : s;
  }
  Scalar sub(Scalar x, Scalar y) const { return x >= y ? x - y : x + p_ - y; }
  Scalar neg(Scalar x) const { return x == 0 ? 0 : p_ - x; }
  Scalar mul(Scalar x, Scalar y) const {
    return static_cast<Scalar>(static_cast<std::uint64_t>(x) * y % p_);
  }
  Scalar pow(Scalar x, std::uint64_t e) const {
    Scalar r = 1;
    while (e) {
      if (e & 1) r = mul(r, x);
      x = mul(x, x);
      e >>= 1;
    }
    return r;
  }
  Scalar inv(Scalar x) const {
    if (x == 0) throw UsageError("inverse of zero in GF(p)");
    return pow(x, p_ - 2);
  }

  bool operator==(const PrimeField& o) const { return p_ == o.p_; }

 private:
  std::uint32_t p_;
  int degree_bound_;
};

/// Deterministic generator; sub-streams are derived from a master seed and a counter so every
/// sub-computation can be replayed on its own.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : state_(seed) {}

  std::uint64_t next() {
    std::uint64_t z = (state_ += 0x9E3779B97F4A7C15ull);
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ull;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBull;
    return z ^ (z >> 31);
  }

  /// Uniform in [0, p); the modulo bias is below 2^-32 for 31-bit p.
  Scalar uniform(std::uint32_t p) { return static_cast<Scalar>(next() % p); }

  static std::uint64_t derive(std::uint64_t master, std::uint64_t counter) {
    Rng r(master ^ (counter * 0xD1B54A32D192ED03ull));
    r.next();
    return r.next();
  }

 private:
  std::uint64_t state_;
};

}  // namespace kerbundle
