#include "charmean/characters.hpp"

#include <numeric>

namespace charmean {

DirichletCharacter character(const PrimeContext& ctx, std::uint32_t j) {
  const std::uint32_t pm1 = ctx.p() - 1;
  j %= pm1;
  DirichletCharacter chi;
  chi.j = j;
  chi.is_principal = (j == 0);
  chi.is_legendre = (j == pm1 / 2);
  chi.parity = (j % 2 == 0) ? 1 : -1;  // chi(-1) = e(j/2), -1 at g^{(p-1)/2}
  chi.order = pm1 / std::gcd(j == 0 ? pm1 : j, pm1);
  return chi;
}

DirichletCharacter conjugate_character(const PrimeContext& ctx,
                                       const DirichletCharacter& chi) {
  const std::uint32_t pm1 = ctx.p() - 1;
  return character(ctx, (pm1 - chi.j) % pm1);
}

std::vector<DirichletCharacter> enumerate_characters(const PrimeContext& ctx) {
  std::vector<DirichletCharacter> out;
  out.reserve(ctx.p() - 1);
  for (std::uint32_t j = 0; j + 1 < ctx.p(); ++j) out.push_back(character(ctx, j));
  return out;
}

Cplx char_eval(const PrimeContext& ctx, const DirichletCharacter& chi,
               std::int64_t a) {
  const Residue r = ctx.reduce(a);
  if (r == 0) return {0.0L, 0.0L};
  const std::uint64_t t =
      static_cast<std::uint64_t>(chi.j) * ctx.index_of(r) % (ctx.p() - 1);
  return ctx.root_pm1(t);
}

int char_parity(const DirichletCharacter& chi) { return chi.parity; }

}  // namespace charmean
