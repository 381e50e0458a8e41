#include "charmean/csum.hpp"

namespace charmean {

Cplx gauss_sum(const PrimeContext& ctx, const DirichletCharacter& chi,
               Residue n) {
  const std::uint32_t p = ctx.p();
  ComplexAccumulator acc;
  for (Residue a = 1; a < p; ++a) {
    const std::uint64_t t =
        static_cast<std::uint64_t>(chi.j) * ctx.index_of(a) % (p - 1);
    const std::uint64_t phase = static_cast<std::uint64_t>(n) * a % p;
    acc.add(ctx.root_pm1(t) * ctx.root_p(phase));
  }
  return acc.value();
}

std::pair<Cplx, Cplx> twist_check(const PrimeContext& ctx,
                                  const DirichletCharacter& chi, Residue n) {
  if (chi.is_principal && n % ctx.p() == 0) {
    throw ExcludedCaseError(
        "excluded case: principal character together with n = 0 mod p");
  }
  const Cplx lhs = gauss_sum(ctx, chi, n % ctx.p());
  const Cplx rhs = std::conj(char_eval(ctx, chi, n)) * gauss_sum(ctx, chi, 1);
  return {lhs, rhs};
}

Cplx kloosterman(const PrimeContext& ctx, const DirichletCharacter& chi,
                 Residue m, Residue n) {
  const std::uint32_t p = ctx.p();
  ComplexAccumulator acc;
  for (Residue a = 1; a < p; ++a) {
    const std::uint64_t t =
        static_cast<std::uint64_t>(chi.j) * ctx.index_of(a) % (p - 1);
    const std::uint64_t phase = (static_cast<std::uint64_t>(m) * a +
                                 static_cast<std::uint64_t>(n) * ctx.inv(a)) %
                                p;
    acc.add(ctx.root_pm1(t) * ctx.root_p(phase));
  }
  return acc.value();
}

Cplx h_sum(const PrimeContext& ctx, const DirichletCharacter& chi, Residue m,
           Residue n, Residue k) {
  const std::uint32_t p = ctx.p();
  ComplexAccumulator acc;
  for (Residue a = 1; a < p; ++a) {
    const Residue v = static_cast<Residue>((static_cast<std::uint64_t>(m) * a +
                                            static_cast<std::uint64_t>(n) *
                                                ctx.inv(a)) %
                                           p);
    if (v == 0) continue;
    const std::uint64_t t =
        static_cast<std::uint64_t>(chi.j) * ctx.index_of(v) % (p - 1);
    const std::uint64_t phase = static_cast<std::uint64_t>(k) * a % p;
    acc.add(ctx.root_pm1(t) * ctx.root_p(phase));
  }
  return acc.value();
}

SumReal second_moment_m(const PrimeContext& ctx, const DirichletCharacter& chi,
                        Residue n, Residue k) {
  const std::uint32_t p = ctx.p();
  KahanSum<SumReal> acc;
  for (Residue m = 1; m < p; ++m) acc.add(norm_sq(h_sum(ctx, chi, m, n, k)));
  return acc.value();
}

Cplx psi_weighted_second_moment(const PrimeContext& ctx,
                                const DirichletCharacter& chi,
                                const DirichletCharacter& psi, Residue n,
                                Residue k) {
  const std::uint32_t p = ctx.p();
  ComplexAccumulator acc;
  for (Residue m = 1; m < p; ++m) {
    acc.add(char_eval(ctx, psi, m) * norm_sq(h_sum(ctx, chi, m, n, k)));
  }
  return acc.value();
}

SumReal kloosterman_fourth_moment(const PrimeContext& ctx,
                                  const DirichletCharacter& chi, Residue n) {
  const std::uint32_t p = ctx.p();
  KahanSum<SumReal> acc;
  for (Residue m = 1; m < p; ++m) {
    const SumReal q = norm_sq(kloosterman(ctx, chi, m, n));
    acc.add(q * q);
  }
  return acc.value();
}

HMomentTable::HMomentTable(const PrimeContext& ctx, Residue n, Residue k)
    : n_(n), k_(k), pm1_(ctx.p() - 1) {
  const std::uint32_t p = ctx.p();
  hsq_.resize(static_cast<std::size_t>(pm1_) * pm1_);
  std::vector<std::uint32_t> tchar(p);
  std::vector<std::uint32_t> phase(p);
  for (Residue m = 1; m < p; ++m) {
    std::uint32_t cnt = 0;
    for (Residue a = 1; a < p; ++a) {
      const Residue v = static_cast<Residue>(
          (static_cast<std::uint64_t>(m) * a +
           static_cast<std::uint64_t>(n) * ctx.inv(a)) %
          p);
      if (v == 0) continue;  // chi(0) = 0 for every chi
      tchar[cnt] = ctx.index_of(v);
      phase[cnt] = static_cast<std::uint32_t>(
          static_cast<std::uint64_t>(k) * a % p);
      ++cnt;
    }
    for (std::uint32_t j = 0; j < pm1_; ++j) {
      ComplexAccumulator acc;
      for (std::uint32_t i = 0; i < cnt; ++i) {
        const std::uint64_t e =
            static_cast<std::uint64_t>(j) * tchar[i] % pm1_;
        acc.add(ctx.root_pm1(e) * ctx.root_p(phase[i]));
      }
      hsq_[static_cast<std::size_t>(j) * pm1_ + (m - 1)] = acc.norm_sq();
    }
  }
}

}  // namespace charmean
