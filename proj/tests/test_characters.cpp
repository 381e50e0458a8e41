#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <algorithm>
#include <complex>
#include <vector>

#include "charmean/characters.hpp"
#include "charmean/prime_context.hpp"

using namespace charmean;

namespace {

constexpr long double kEps = 1e-15L;

bool close(const Cplx& a, const Cplx& b, long double eps = kEps) {
  return std::abs(a - b) < eps;
}

}  // namespace

TEST_CASE("enumeration produces p-1 characters with the expected flags") {
  const PrimeContext ctx = PrimeContext::build(7);
  const std::vector<DirichletCharacter> chars = enumerate_characters(ctx);
  REQUIRE(chars.size() == 6);
  CHECK(chars[0].is_principal);
  CHECK_FALSE(chars[0].is_legendre);
  CHECK(chars[3].is_legendre);  // j = (p-1)/2
  CHECK_FALSE(chars[3].is_principal);
  for (std::uint32_t j = 0; j < 6; ++j) CHECK(chars[j].j == j);
}

TEST_CASE("character orders divide p-1 and form the expected multiset") {
  const PrimeContext ctx = PrimeContext::build(7);
  std::vector<std::uint32_t> orders;
  for (const DirichletCharacter& chi : enumerate_characters(ctx)) {
    orders.push_back(chi.order);
    CHECK(6 % chi.order == 0);
  }
  std::sort(orders.begin(), orders.end());
  CHECK(orders == std::vector<std::uint32_t>{1, 2, 3, 3, 6, 6});
}

TEST_CASE("legendre-index character coincides with the legendre symbol") {
  for (const std::uint32_t p : {5u, 7u, 13u}) {
    const PrimeContext ctx = PrimeContext::build(p);
    const DirichletCharacter chi_l = character(ctx, (p - 1) / 2);
    REQUIRE(chi_l.is_legendre);
    for (Residue a = 0; a < p; ++a) {
      const Cplx v = char_eval(ctx, chi_l, a);
      CHECK(close(v, Cplx{static_cast<SumReal>(ctx.legendre(a)), 0.0L}));
    }
  }
}

TEST_CASE("explicit values at p=5") {
  // g = 2, so the j=1 character sends 2 -> e(1/4) = i.
  const PrimeContext ctx = PrimeContext::build(5);
  REQUIRE(ctx.primitive_root() == 2);
  const DirichletCharacter chi = character(ctx, 1);
  CHECK(close(char_eval(ctx, chi, 2), Cplx{0.0L, 1.0L}));
  CHECK(close(char_eval(ctx, chi, 1), Cplx{1.0L, 0.0L}));
  CHECK(close(char_eval(ctx, chi, 4), Cplx{-1.0L, 0.0L}));
  CHECK(close(char_eval(ctx, chi, 3), Cplx{0.0L, -1.0L}));
  CHECK(close(char_eval(ctx, chi, 0), Cplx{0.0L, 0.0L}));
  CHECK(close(char_eval(ctx, chi, 7), char_eval(ctx, chi, 2)));  // periodicity
  CHECK(close(char_eval(ctx, chi, -3), char_eval(ctx, chi, 2)));
}

TEST_CASE("parity equals the value at -1") {
  CHECK(char_parity(character(PrimeContext::build(7), 3)) == -1);
  CHECK(char_parity(character(PrimeContext::build(5), 2)) == 1);
  for (const std::uint32_t p : {5u, 7u, 11u, 13u}) {
    const PrimeContext ctx = PrimeContext::build(p);
    for (const DirichletCharacter& chi : enumerate_characters(ctx)) {
      const Cplx at_minus1 = char_eval(ctx, chi, -1);
      CHECK(close(at_minus1,
                  Cplx{static_cast<SumReal>(char_parity(chi)), 0.0L}));
      CHECK(char_parity(chi) == (chi.j % 2 == 0 ? 1 : -1));
    }
  }
}

TEST_CASE("characters are completely multiplicative") {
  const PrimeContext ctx = PrimeContext::build(13);
  for (const DirichletCharacter& chi : enumerate_characters(ctx)) {
    for (Residue a = 1; a < 13; ++a) {
      for (Residue b = 1; b < 13; ++b) {
        CHECK(close(char_eval(ctx, chi, ctx.mul(a, b)),
                    char_eval(ctx, chi, a) * char_eval(ctx, chi, b),
                    1e-14L));
      }
    }
  }
}

TEST_CASE("conjugate character conjugates every value") {
  const PrimeContext ctx = PrimeContext::build(11);
  for (const DirichletCharacter& chi : enumerate_characters(ctx)) {
    const DirichletCharacter bar = conjugate_character(ctx, chi);
    for (Residue a = 0; a < 11; ++a) {
      CHECK(close(char_eval(ctx, bar, a), std::conj(char_eval(ctx, chi, a))));
    }
    // conjugating twice returns the original index
    CHECK(conjugate_character(ctx, bar).j == chi.j);
  }
}

TEST_CASE("column orthogonality: sum over characters detects a=1") {
  const PrimeContext ctx = PrimeContext::build(13);
  const std::vector<DirichletCharacter> chars = enumerate_characters(ctx);
  for (Residue a = 1; a < 13; ++a) {
    Cplx total{0.0L, 0.0L};
    for (const DirichletCharacter& chi : chars) {
      total += char_eval(ctx, chi, a);
    }
    const Cplx expected =
        a == 1 ? Cplx{static_cast<SumReal>(12), 0.0L} : Cplx{0.0L, 0.0L};
    CHECK(close(total, expected, 1e-13L));
  }
}

TEST_CASE("row orthogonality: sum over residues detects the principal") {
  const PrimeContext ctx = PrimeContext::build(13);
  for (const DirichletCharacter& chi : enumerate_characters(ctx)) {
    Cplx total{0.0L, 0.0L};
    for (Residue a = 0; a < 13; ++a) total += char_eval(ctx, chi, a);
    const Cplx expected = chi.is_principal
                              ? Cplx{static_cast<SumReal>(12), 0.0L}
                              : Cplx{0.0L, 0.0L};
    CHECK(close(total, expected, 1e-13L));
  }
}

TEST_CASE("principal character is the indicator of invertibility") {
  const PrimeContext ctx = PrimeContext::build(11);
  const DirichletCharacter chi0 = character(ctx, 0);
  for (Residue a = 0; a < 11; ++a) {
    const Cplx expected =
        a == 0 ? Cplx{0.0L, 0.0L} : Cplx{1.0L, 0.0L};
    CHECK(close(char_eval(ctx, chi0, a), expected));
  }
}
