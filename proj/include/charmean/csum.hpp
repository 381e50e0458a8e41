#pragma once

#include <stdexcept>
#include <utility>
#include <vector>

#include "charmean/characters.hpp"
#include "charmean/kahan.hpp"

namespace charmean {

class ExcludedCaseError : public std::invalid_argument {
 public:
  explicit ExcludedCaseError(const std::string& what)
      : std::invalid_argument(what) {}
};

/// G(n, chi) = sum over a in [1, p] of chi(a) e(n a / p). The a = p term is
/// chi(0) = 0, so the loop runs over [1, p).
Cplx gauss_sum(const PrimeContext& ctx, const DirichletCharacter& chi,
               Residue n);

/// Returns {G(n, chi), conj(chi)(n) * G(1, chi)}. The two sides agree except
/// in the one excluded case (principal chi with n = 0), which throws.
std::pair<Cplx, Cplx> twist_check(const PrimeContext& ctx,
                                  const DirichletCharacter& chi, Residue n);

/// K(m, n, chi) = sum over a in [1, p) of chi(a) e((m a + n abar) / p),
/// with abar the inverse of a.
Cplx kloosterman(const PrimeContext& ctx, const DirichletCharacter& chi,
                 Residue m, Residue n);

/// H(m, n, k, chi) = sum over a in [1, p) of chi(m a + n abar) e(k a / p).
/// Terms with m a + n abar = 0 vanish (chi(0) = 0) and are skipped.
Cplx h_sum(const PrimeContext& ctx, const DirichletCharacter& chi, Residue m,
           Residue n, Residue k);

/// Sum over m in [1, p) of |H(m, n, k, chi)|^2. Independent of n and k for
/// n, k coprime to p; that invariance is verified, not assumed.
SumReal second_moment_m(const PrimeContext& ctx, const DirichletCharacter& chi,
                        Residue n, Residue k);

/// Sum over m in [1, p) of psi(m) |H(m, n, k, chi)|^2.
Cplx psi_weighted_second_moment(const PrimeContext& ctx,
                                const DirichletCharacter& chi,
                                const DirichletCharacter& psi, Residue n,
                                Residue k);

/// Sum over m in [1, p) of |K(m, n, chi)|^4.
SumReal kloosterman_fourth_moment(const PrimeContext& ctx,
                                  const DirichletCharacter& chi, Residue n);

/// |H(m, n, k, chi_j)|^2 for every character index j and every m in [1, p),
/// computed once so that the moment aggregates over (chi, m) can share it.
class HMomentTable {
 public:
  HMomentTable(const PrimeContext& ctx, Residue n, Residue k);

  SumReal h_norm_sq(std::uint32_t j, Residue m) const {
    assert(m >= 1);
    return hsq_[static_cast<std::size_t>(j) * pm1_ + (m - 1)];
  }

  Residue n() const { return n_; }
  Residue k() const { return k_; }

 private:
  Residue n_;
  Residue k_;
  std::uint32_t pm1_;
  std::vector<SumReal> hsq_;
};

}  // namespace charmean
