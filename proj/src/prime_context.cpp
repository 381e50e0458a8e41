#include "charmean/prime_context.hpp"

#include <numbers>

namespace charmean {

bool is_prime(std::uint64_t n) {
  if (n < 2) return false;
  if (n % 2 == 0) return n == 2;
  for (std::uint64_t d = 3; d * d <= n; d += 2) {
    if (n % d == 0) return false;
  }
  return true;
}

std::vector<std::uint32_t> primes_in_range(std::uint32_t lo, std::uint32_t hi) {
  std::vector<std::uint32_t> out;
  for (std::uint64_t q = lo; q <= hi; ++q) {
    if (is_prime(q)) out.push_back(static_cast<std::uint32_t>(q));
  }
  return out;
}

Residue PrimeContext::pow_mod(Residue a, std::uint64_t e) const {
  std::uint64_t base = a % p_;
  std::uint64_t acc = 1;
  while (e > 0) {
    if (e & 1) acc = acc * base % p_;
    base = base * base % p_;
    e >>= 1;
  }
  return static_cast<Residue>(acc);
}

PrimeContext PrimeContext::build(std::uint32_t p) {
  if (p < 5 || p % 2 == 0 || !is_prime(p)) {
    throw UnsupportedModulusError("unsupported modulus " + std::to_string(p) +
                                  ": need an odd prime >= 5");
  }

  PrimeContext ctx;
  ctx.p_ = p;

  ctx.inv_.assign(p, 0);  // inv_[0] stays 0 by convention
  for (Residue a = 1; a < p; ++a) ctx.inv_[a] = ctx.pow_mod(a, p - 2);

  // Smallest primitive root by exhaustive order computation.
  Residue g = 0;
  for (Residue cand = 2; cand < p && g == 0; ++cand) {
    Residue x = cand;
    std::uint32_t ord = 1;
    while (x != 1) {
      x = ctx.mul(x, cand);
      ++ord;
    }
    if (ord == p - 1) g = cand;
  }
  ctx.g_ = g;

  ctx.index_.assign(p, p);  // index_[0] keeps the sentinel p
  Residue x = 1;
  for (std::uint32_t t = 0; t < p - 1; ++t) {
    ctx.index_[x] = t;
    x = ctx.mul(x, g);
  }

  const SumReal two_pi = 2.0L * std::numbers::pi_v<SumReal>;
  ctx.root_p_.resize(p);
  for (std::uint32_t t = 0; t < p; ++t) {
    const SumReal angle = two_pi * static_cast<SumReal>(t) / p;
    ctx.root_p_[t] = {std::cos(angle), std::sin(angle)};
  }
  ctx.root_pm1_.resize(p - 1);
  for (std::uint32_t t = 0; t + 1 < p; ++t) {
    const SumReal angle = two_pi * static_cast<SumReal>(t) / (p - 1);
    ctx.root_pm1_[t] = {std::cos(angle), std::sin(angle)};
  }

  return ctx;
}

long long quad_legendre_sum(const PrimeContext& ctx, Residue m, Residue n) {
  const std::uint32_t p = ctx.p();
  long long s = 0;
  for (Residue a = 0; a < p; ++a) {
    const Residue v = static_cast<Residue>(
        (static_cast<std::uint64_t>(a) * a +
         static_cast<std::uint64_t>(m) * a + n) %
        p);
    s += ctx.legendre(v);
  }
  return s;
}

}  // namespace charmean
