#pragma once

#include <cstdint>
#include <utility>
#include <vector>

#include "charmean/prime_context.hpp"

namespace charmean {

/// One fiber S(N): the (u, a) pairs with u, a invertible, a != 1, u not in
/// {a, abar}, whose value (u a - 1)^bar (u abar - 1)(a - 1)^2 equals N.
/// Members are kept sorted so fibers compare as sets.
struct SetCensus {
  Residue N = 0;
  std::vector<std::pair<Residue, Residue>> members;

  std::size_t cardinality() const { return members.size(); }
};

/// Exhaustive scan of all (u, a).
SetCensus s_set_direct(const PrimeContext& ctx, Residue N);

/// Parametric construction: for each admissible a, the unique u solving the
/// defining congruence, with the a = -1 column adjoined when N = 4.
SetCensus s_set_via_lemma(const PrimeContext& ctx, Residue N);

/// Closed-form |S(N)|: p-5 at N=1, 2p-7 at N=4, p-7 at other squares,
/// p-3 at non-squares.
long long s_class_count(const PrimeContext& ctx, Residue N);

/// |S(N)| for every N in [1, p), by a single pass over all (u, a).
/// Entry [0] is unused.
std::vector<long long> s_census_counts(const PrimeContext& ctx);

/// Number of triples (u, a, b) of invertible residues at which both of the
/// two symmetric triple products vanish. Equals 9p - 20.
long long u0_count(const PrimeContext& ctx);

/// True when every such degenerate triple matches one of the nine
/// one-parameter families that are supposed to exhaust them.
bool u0_members_match_forms(const PrimeContext& ctx);

/// Discriminant of the pair-collision quadratic in u:
/// (1 - a^2 b^2)^2 + 4 a b (a + b - 2)(a + b - 2 a b) mod p.
Residue delta(const PrimeContext& ctx, Residue a, Residue b);

/// Number of u in [0, p) solving
/// (a+b-2ab) u^2 - (1+ab)(1-ab) u + ab(2-a-b) = 0, by exhaustive scan.
/// Requires a != b.
int sol_count(const PrimeContext& ctx, Residue a, Residue b);

/// T(p) by direct triple enumeration: triples where the two symmetric
/// products agree and are nonzero.
long long t_direct(const PrimeContext& ctx);

/// T(p) via the discriminant reduction:
/// (p-5)(2p-5) - legendre(2) + sum of legendre(delta(a, b)) over a != b with
/// a + b - 2ab nonzero.
long long t_via_delta(const PrimeContext& ctx);

/// T(p) as |U| - |U0|, where U collects all triples where the two products
/// agree (zero or not).
long long t_via_sets(const PrimeContext& ctx);

/// T_L(p) = sum over u of the square of
/// sum over a of legendre((u a - 1)(u abar - 1)).
long long t_l(const PrimeContext& ctx);

/// Sum over a in [1, p) of legendre((a - 1)(abar - 1)); equals -legendre(-1).
long long single_shift_legendre_sum(const PrimeContext& ctx);

/// Sum over u and a of legendre((u a - 1)(u abar - 1)); equals 2.
long long double_shift_legendre_sum(const PrimeContext& ctx);

}  // namespace charmean
