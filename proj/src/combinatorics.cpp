#include "charmean/combinatorics.hpp"

#include <algorithm>

namespace charmean {

namespace {

// Value of the fiber map at (u, a): (u a - 1)^bar (u abar - 1)(a - 1)^2.
// Zero exactly when u is in {a, abar} or a = 1, since inv(0) = 0.
Residue fiber_value(const PrimeContext& ctx, Residue u, Residue a) {
  const Residue x = ctx.sub(ctx.mul(u, a), 1);
  const Residue y = ctx.sub(ctx.mul(u, ctx.inv(a)), 1);
  const Residue z = ctx.sub(a, 1);
  return ctx.mul(ctx.mul(ctx.inv(x), y), ctx.sq(z));
}

// The two symmetric triple products behind T(p) and |U0|.
Residue triple_product_a(const PrimeContext& ctx, Residue u, Residue a,
                         Residue b) {
  // (a - 1)^2 (u abar - 1)(u b - 1)
  return ctx.mul(ctx.sq(ctx.sub(a, 1)),
                 ctx.mul(ctx.sub(ctx.mul(u, ctx.inv(a)), 1),
                         ctx.sub(ctx.mul(u, b), 1)));
}

Residue triple_product_b(const PrimeContext& ctx, Residue u, Residue a,
                         Residue b) {
  // (b - 1)^2 (u bbar - 1)(u a - 1)
  return ctx.mul(ctx.sq(ctx.sub(b, 1)),
                 ctx.mul(ctx.sub(ctx.mul(u, ctx.inv(b)), 1),
                         ctx.sub(ctx.mul(u, a), 1)));
}

}  // namespace

SetCensus s_set_direct(const PrimeContext& ctx, Residue N) {
  const std::uint32_t p = ctx.p();
  SetCensus census;
  census.N = N;
  for (Residue u = 1; u < p; ++u) {
    for (Residue a = 2; a < p; ++a) {
      if (u == a || u == ctx.inv(a)) continue;
      if (fiber_value(ctx, u, a) == N) census.members.emplace_back(u, a);
    }
  }
  std::sort(census.members.begin(), census.members.end());
  return census;
}

SetCensus s_set_via_lemma(const PrimeContext& ctx, Residue N) {
  const std::uint32_t p = ctx.p();
  SetCensus census;
  census.N = N;
  for (Residue a = 2; a + 1 < p; ++a) {  // a != 1 and a != -1
    const Residue z2 = ctx.sq(ctx.sub(a, 1));
    if (z2 == N) continue;
    const Residue zb2 = ctx.sq(ctx.sub(ctx.inv(a), 1));
    if (zb2 == N) continue;
    // Solve ((a-1)^2 abar - a N) u = (a-1)^2 - N for u.
    const Residue denom = ctx.sub(ctx.mul(z2, ctx.inv(a)), ctx.mul(a, N));
    if (denom == 0) continue;
    const Residue u = ctx.mul(ctx.sub(z2, N), ctx.inv(denom));
    census.members.emplace_back(u, a);
  }
  if (N == 4 % p) {
    // The a = -1 column contributes every u except u = -1.
    for (Residue u = 1; u + 1 < p; ++u) census.members.emplace_back(u, p - 1);
  }
  std::sort(census.members.begin(), census.members.end());
  return census;
}

long long s_class_count(const PrimeContext& ctx, Residue N) {
  const long long p = ctx.p();
  if (N == 1) return p - 5;
  if (N == 4u % ctx.p()) return 2 * p - 7;
  return ctx.legendre(N) == 1 ? p - 7 : p - 3;
}

std::vector<long long> s_census_counts(const PrimeContext& ctx) {
  const std::uint32_t p = ctx.p();
  std::vector<long long> counts(p, 0);
  for (Residue u = 1; u < p; ++u) {
    for (Residue a = 2; a < p; ++a) {
      const Residue v = fiber_value(ctx, u, a);
      if (v != 0) ++counts[v];  // v = 0 exactly on the excluded pairs
    }
  }
  return counts;
}

long long u0_count(const PrimeContext& ctx) {
  const std::uint32_t p = ctx.p();
  long long count = 0;
  for (Residue u = 1; u < p; ++u) {
    for (Residue a = 1; a < p; ++a) {
      for (Residue b = 1; b < p; ++b) {
        if (triple_product_a(ctx, u, a, b) == 0 &&
            triple_product_b(ctx, u, a, b) == 0) {
          ++count;
        }
      }
    }
  }
  return count;
}

bool u0_members_match_forms(const PrimeContext& ctx) {
  const std::uint32_t p = ctx.p();
  const Residue minus1 = p - 1;
  for (Residue u = 1; u < p; ++u) {
    for (Residue a = 1; a < p; ++a) {
      for (Residue b = 1; b < p; ++b) {
        if (triple_product_a(ctx, u, a, b) != 0 ||
            triple_product_b(ctx, u, a, b) != 0) {
          continue;
        }
        const bool match =
            (u == 1 && a == 1) ||                  // (1, 1, n)
            (a == 1 && u == b) ||                  // (n, 1, n)
            (a == 1 && b == 1) ||                  // (n, 1, 1)
            (u == 1 && b == 1) ||                  // (1, n, 1)
            (u == a && b == 1) ||                  // (n, n, 1)
            (u == minus1 && a == minus1) ||        // (-1, -1, n)
            (u == minus1 && b == minus1) ||        // (-1, n, -1)
            (u == a && a == b) ||                  // (n, n, n)
            (a == b && ctx.mul(u, a) == 1);        // (n, nbar, nbar)
        if (!match) return false;
      }
    }
  }
  return true;
}

Residue delta(const PrimeContext& ctx, Residue a, Residue b) {
  const Residue ab = ctx.mul(a, b);
  const Residue s = ctx.add(a, b);
  // The factored coefficient form agrees with this one; the tests compare
  // them over full (a, b) grids.
  return ctx.add(ctx.sq(ctx.sub(1, ctx.sq(ab))),
                 ctx.mul(ctx.mul(4, ab),
                         ctx.mul(ctx.sub(s, 2), ctx.sub(s, ctx.mul(2, ab)))));
}

int sol_count(const PrimeContext& ctx, Residue a, Residue b) {
  assert(a != b && a != 0 && b != 0);
  const std::uint32_t p = ctx.p();
  const Residue ab = ctx.mul(a, b);
  const Residue qa = ctx.sub(ctx.add(a, b), ctx.mul(2, ab));
  const Residue qb = ctx.sub(0, ctx.mul(ctx.add(1, ab), ctx.sub(1, ab)));
  const Residue qc = ctx.mul(ab, ctx.sub(2, ctx.add(a, b)));
  int count = 0;
  for (Residue u = 0; u < p; ++u) {
    const Residue v = ctx.add(ctx.add(ctx.mul(qa, ctx.sq(u)), ctx.mul(qb, u)),
                              qc);
    if (v == 0) ++count;
  }
  return count;
}

long long t_direct(const PrimeContext& ctx) {
  const std::uint32_t p = ctx.p();
  long long count = 0;
  for (Residue u = 1; u < p; ++u) {
    for (Residue a = 1; a < p; ++a) {
      for (Residue b = 1; b < p; ++b) {
        const Residue pa = triple_product_a(ctx, u, a, b);
        if (pa != 0 && pa == triple_product_b(ctx, u, a, b)) ++count;
      }
    }
  }
  return count;
}

long long t_via_delta(const PrimeContext& ctx) {
  const std::uint32_t p = ctx.p();
  long long dsum = 0;
  for (Residue a = 1; a < p; ++a) {
    for (Residue b = 1; b < p; ++b) {
      if (a == b) continue;
      if (ctx.sub(ctx.add(a, b), ctx.mul(2, ctx.mul(a, b))) == 0) continue;
      dsum += ctx.legendre(delta(ctx, a, b));
    }
  }
  const long long pl = p;
  return (pl - 5) * (2 * pl - 5) - ctx.legendre(2) + dsum;
}

long long t_via_sets(const PrimeContext& ctx) {
  const std::uint32_t p = ctx.p();
  long long all = 0;
  for (Residue u = 1; u < p; ++u) {
    for (Residue a = 1; a < p; ++a) {
      for (Residue b = 1; b < p; ++b) {
        if (triple_product_a(ctx, u, a, b) == triple_product_b(ctx, u, a, b)) {
          ++all;
        }
      }
    }
  }
  return all - u0_count(ctx);
}

long long t_l(const PrimeContext& ctx) {
  const std::uint32_t p = ctx.p();
  long long total = 0;
  for (Residue u = 1; u < p; ++u) {
    long long inner = 0;
    for (Residue a = 1; a < p; ++a) {
      const Residue x = ctx.sub(ctx.mul(u, a), 1);
      const Residue y = ctx.sub(ctx.mul(u, ctx.inv(a)), 1);
      inner += ctx.legendre(ctx.mul(x, y));
    }
    total += inner * inner;
  }
  return total;
}

long long single_shift_legendre_sum(const PrimeContext& ctx) {
  const std::uint32_t p = ctx.p();
  long long s = 0;
  for (Residue a = 1; a < p; ++a) {
    s += ctx.legendre(ctx.mul(ctx.sub(a, 1), ctx.sub(ctx.inv(a), 1)));
  }
  return s;
}

long long double_shift_legendre_sum(const PrimeContext& ctx) {
  const std::uint32_t p = ctx.p();
  long long s = 0;
  for (Residue u = 1; u < p; ++u) {
    for (Residue a = 1; a < p; ++a) {
      const Residue x = ctx.sub(ctx.mul(u, a), 1);
      const Residue y = ctx.sub(ctx.mul(u, ctx.inv(a)), 1);
      s += ctx.legendre(ctx.mul(x, y));
    }
  }
  return s;
}

}  // namespace charmean
