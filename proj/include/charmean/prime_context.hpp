#pragma once

#include <cassert>
#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

#include "charmean/kahan.hpp"

namespace charmean {

/// A residue mod p, always stored reduced to [0, p).
using Residue = std::uint32_t;

class UnsupportedModulusError : public std::invalid_argument {
 public:
  explicit UnsupportedModulusError(const std::string& what)
      : std::invalid_argument(what) {}
};

/// Deterministic trial division; intended for desk-scale inputs.
bool is_prime(std::uint64_t n);

std::vector<std::uint32_t> primes_in_range(std::uint32_t lo, std::uint32_t hi);

/// Immutable per-prime workspace: modular tables (inverses, discrete logs on
/// the smallest primitive root) and unit-root tables of order p and p-1.
/// Building one is the only place trigonometry happens; everything downstream
/// reads the tables. Safe to share across threads once built.
class PrimeContext {
 public:
  /// Accepts odd primes p >= 5 only; throws UnsupportedModulusError otherwise.
  static PrimeContext build(std::uint32_t p);

  std::uint32_t p() const { return p_; }
  Residue primitive_root() const { return g_; }

  Residue add(Residue a, Residue b) const {
    const Residue s = a + b;
    return s >= p_ ? s - p_ : s;
  }

  Residue sub(Residue a, Residue b) const {
    return a >= b ? a - b : a + p_ - b;
  }

  Residue mul(Residue a, Residue b) const {
    return static_cast<Residue>(static_cast<std::uint64_t>(a) * b % p_);
  }

  Residue sq(Residue a) const { return mul(a, a); }

  Residue pow_mod(Residue a, std::uint64_t e) const;

  /// Reduces an arbitrary integer into [0, p).
  Residue reduce(std::int64_t x) const {
    const std::int64_t r = x % static_cast<std::int64_t>(p_);
    return static_cast<Residue>(r < 0 ? r + p_ : r);
  }

  /// Multiplicative inverse; inv(0) == 0 by convention.
  Residue inv(Residue a) const {
    assert(a < p_);
    return inv_[a];
  }

  /// Discrete log base g; index_of(0) is a sentinel (p) that must not be read.
  std::uint32_t index_of(Residue a) const {
    assert(a != 0 && a < p_);
    return index_[a];
  }

  /// Legendre symbol of any integer, 0 on multiples of p. Derived from the
  /// parity of the discrete log; cross-checked elsewhere against Euler's
  /// criterion.
  int legendre(std::int64_t a) const {
    const Residue r = reduce(a);
    if (r == 0) return 0;
    return (index_[r] & 1u) == 0 ? 1 : -1;
  }

  /// e(t / p) for t in [0, p).
  const Cplx& root_p(std::uint64_t t) const { return root_p_[t]; }

  /// e(t / (p-1)) for t in [0, p-1); the values of chi_j at g^t are
  /// root_pm1((j * t) mod (p-1)).
  const Cplx& root_pm1(std::uint64_t t) const { return root_pm1_[t]; }

 private:
  PrimeContext() = default;

  std::uint32_t p_ = 0;
  Residue g_ = 0;
  std::vector<Residue> inv_;
  std::vector<std::uint32_t> index_;
  std::vector<Cplx> root_p_;
  std::vector<Cplx> root_pm1_;
};

/// Direct sum over a in [0, p) of the Legendre symbol of a^2 + m a + n.
/// Equals p-1 when p divides m^2 - 4n and -1 otherwise.
long long quad_legendre_sum(const PrimeContext& ctx, Residue m, Residue n);

}  // namespace charmean
