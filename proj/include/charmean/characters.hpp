#pragma once

#include <cstdint>
#include <vector>

#include "charmean/prime_context.hpp"

namespace charmean {

/// A multiplicative character mod p, determined by its exponent j on the
/// fixed primitive root: chi_j(g^t) = e(j t / (p-1)). Characters are real
/// exactly when j is 0 (principal) or (p-1)/2 (the Legendre symbol).
struct DirichletCharacter {
  std::uint32_t j = 0;
  bool is_principal = true;
  bool is_legendre = false;
  int parity = 1;           // chi(-1), always +1 or -1
  std::uint32_t order = 1;  // order of chi in the dual group
};

DirichletCharacter character(const PrimeContext& ctx, std::uint32_t j);

DirichletCharacter conjugate_character(const PrimeContext& ctx,
                                       const DirichletCharacter& chi);

/// All p-1 characters, in index order j = 0 .. p-2.
std::vector<DirichletCharacter> enumerate_characters(const PrimeContext& ctx);

/// chi(a) for any integer a; 0 on multiples of p, otherwise a (p-1)-th root
/// of unity from the precomputed table.
Cplx char_eval(const PrimeContext& ctx, const DirichletCharacter& chi,
               std::int64_t a);

/// chi(-1) as +-1.
int char_parity(const DirichletCharacter& chi);

}  // namespace charmean
