// Acceptance gate for the verification engine: thirteen criteria, one
// [PASS]/[FAIL] line each, exit 0 only when every one holds. The last
// criterion drives the installed CLI end to end; its path arrives as
//   acceptance --cli <path-to-charmean>
// Budgets are wall-clock and generous; a debug build should still clear them.

#include <sys/wait.h>
#include <unistd.h>

#include <chrono>
#include <cmath>
#include <complex>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iostream>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "charmean/combinatorics.hpp"
#include "charmean/csum.hpp"
#include "charmean/identities.hpp"
#include "charmean/prime_context.hpp"

using namespace charmean;
namespace fs = std::filesystem;
using Clock = std::chrono::steady_clock;

namespace {

struct Outcome {
  bool ok = true;
  std::string detail;
};

Outcome fail(std::string detail) { return {false, std::move(detail)}; }

double ms_since(Clock::time_point t0) {
  return std::chrono::duration<double, std::milli>(Clock::now() - t0).count();
}

Outcome budget_check(Clock::time_point t0, double budget_ms) {
  const double elapsed = ms_since(t0);
  if (elapsed > budget_ms) {
    std::ostringstream os;
    os << "took " << elapsed << " ms, budget " << budget_ms << " ms";
    return fail(os.str());
  }
  return {};
}

std::string describe(const VerificationRecord& rec) {
  std::ostringstream os;
  os << to_string(rec.identity) << " at p=" << rec.prime
     << " (lhs=" << rec.lhs << ", rhs=" << rec.rhs
     << ", abs_err=" << rec.abs_err << ", status=" << to_string(rec.status);
  if (!rec.skip_reason.empty()) os << ", " << rec.skip_reason;
  os << ")";
  return os.str();
}

const std::vector<std::uint32_t>& sweep_primes() {
  static const std::vector<std::uint32_t> primes = primes_in_range(5, 97);
  return primes;
}

Outcome expect_family_pass(IdentityId id, std::uint32_t lo, std::uint32_t hi) {
  for (const std::uint32_t p : primes_in_range(lo, hi)) {
    const PrimeContext ctx = PrimeContext::build(p);
    const VerificationRecord rec = run_identity(ctx, id, {});
    if (rec.status != Status::Pass) return fail(describe(rec));
  }
  return {};
}

bool close_to(double value, double target, double eps = 1e-6) {
  return std::abs(value - target) <= eps;
}

// --- criteria -------------------------------------------------------------

Outcome criterion_second_moment() {
  const auto t0 = Clock::now();
  for (const std::uint32_t p : sweep_primes()) {
    const PrimeContext ctx = PrimeContext::build(p);
    for (const DirichletCharacter& chi : enumerate_characters(ctx)) {
      const VerificationRecord rec = verify_th2_1(ctx, chi);
      if (rec.status != Status::Pass) {
        return fail("chi index " + std::to_string(chi.j) + ": " +
                    describe(rec));
      }
    }
  }
  return budget_check(t0, 5000.0);
}

Outcome criterion_squared_moment_sum() {
  const auto t0 = Clock::now();
  for (const std::uint32_t p : sweep_primes()) {
    const PrimeContext ctx = PrimeContext::build(p);
    const VerificationRecord rec = verify_th1(ctx);
    if (rec.status != Status::Pass) return fail(describe(rec));
    if (p == 5 && !close_to(rec.lhs, 500.0)) {
      return fail("expected 500 at p=5, got " + std::to_string(rec.lhs));
    }
    if (p == 7 && !close_to(rec.lhs, 4638.0)) {
      return fail("expected 4638 at p=7, got " + std::to_string(rec.lhs));
    }
  }
  return budget_check(t0, 30000.0);
}

Outcome criterion_fourth_moment() {
  const auto t0 = Clock::now();
  if (t_direct(PrimeContext::build(5)) != 11) {
    return fail("triple count at p=5 is not 11");
  }
  if (t_l(PrimeContext::build(5)) != 10) {
    return fail("weighted triple count at p=5 is not 10");
  }
  for (const std::uint32_t p : sweep_primes()) {
    const PrimeContext ctx = PrimeContext::build(p);
    const VerificationRecord rec = verify_th2(ctx);
    if (rec.status != Status::Pass) return fail(describe(rec));
    if (p == 5 && !close_to(rec.rhs, 228.0)) {
      return fail("expected closed form 228 at p=5, got " +
                  std::to_string(rec.rhs));
    }
  }
  return budget_check(t0, 60000.0);
}

Outcome criterion_triple_count_routes() {
  for (const std::uint32_t p : sweep_primes()) {
    const PrimeContext ctx = PrimeContext::build(p);
    const long long direct = t_direct(ctx);
    const long long via_delta = t_via_delta(ctx);
    const long long via_sets = t_via_sets(ctx);
    if (direct != via_delta || direct != via_sets) {
      std::ostringstream os;
      os << "routes disagree at p=" << p << ": direct=" << direct
         << ", delta=" << via_delta << ", sets=" << via_sets;
      return fail(os.str());
    }
  }
  return {};
}

Outcome criterion_twisted_square_sum() {
  for (const std::uint32_t p : sweep_primes()) {
    const PrimeContext ctx = PrimeContext::build(p);
    const VerificationRecord rec = run_identity(ctx, IdentityId::PSI_IDENTITY, {});
    if (rec.status != Status::Pass) return fail(describe(rec));
    if (p == 5 && !close_to(rec.lhs, 68.0)) {
      return fail("expected 68 at p=5, got " + std::to_string(rec.lhs));
    }
  }
  return {};
}

Outcome criterion_fiber_census() {
  for (const std::uint32_t p : sweep_primes()) {
    const PrimeContext ctx = PrimeContext::build(p);
    const std::vector<long long> census = s_census_counts(ctx);
    for (Residue N = 1; N < p; ++N) {
      const SetCensus direct = s_set_direct(ctx, N);
      const SetCensus lemma = s_set_via_lemma(ctx, N);
      if (direct.members != lemma.members) {
        return fail("set constructions disagree at p=" + std::to_string(p) +
                    ", N=" + std::to_string(N));
      }
      const long long expected = s_class_count(ctx, N);
      if (static_cast<long long>(direct.cardinality()) != expected ||
          census[N] != expected) {
        std::ostringstream os;
        os << "cardinality off at p=" << p << ", N=" << N << ": scan "
           << direct.cardinality() << ", census " << census[N]
           << ", closed form " << expected;
        return fail(os.str());
      }
    }
  }
  return {};
}

Outcome criterion_degenerate_triples() {
  for (const std::uint32_t p : sweep_primes()) {
    const PrimeContext ctx = PrimeContext::build(p);
    const long long count = u0_count(ctx);
    if (count != 9LL * p - 20) {
      return fail("count at p=" + std::to_string(p) + " is " +
                  std::to_string(count) + ", expected " +
                  std::to_string(9LL * p - 20));
    }
    if (!u0_members_match_forms(ctx)) {
      return fail("a degenerate triple escaped the nine families at p=" +
                  std::to_string(p));
    }
  }
  return {};
}

Outcome criterion_shift_sums() {
  for (const std::uint32_t p : sweep_primes()) {
    const PrimeContext ctx = PrimeContext::build(p);
    for (const IdentityId id : {IdentityId::L4_3A, IdentityId::L4_3B}) {
      const VerificationRecord rec = run_identity(ctx, id, {});
      if (rec.status != Status::Pass || rec.abs_err != 0.0) {
        return fail(describe(rec));
      }
    }
  }
  if (const Outcome o = expect_family_pass(IdentityId::QUAD_LEG, 5, 31); !o.ok) {
    return o;
  }
  if (quad_legendre_sum(PrimeContext::build(5), 0, 0) != 4) {
    return fail("degenerate quadratic sum at p=5 is not p-1");
  }
  return {};
}

Outcome criterion_weighted_moments() {
  for (const std::uint32_t p : sweep_primes()) {
    const PrimeContext ctx = PrimeContext::build(p);
    for (const IdentityId id : {IdentityId::L4_1, IdentityId::C4_1}) {
      const VerificationRecord rec = run_identity(ctx, id, {});
      if (rec.status != Status::Pass) return fail(describe(rec));
      if (id == IdentityId::C4_1 && p == 5 && !close_to(rec.lhs, 11.0)) {
        return fail("expected 11 at p=5, got " + std::to_string(rec.lhs));
      }
    }
  }
  return {};
}

Outcome criterion_legendre_weighted_aggregates() {
  for (const std::uint32_t p : sweep_primes()) {
    const PrimeContext ctx = PrimeContext::build(p);
    for (const IdentityId id : {IdentityId::C4_2A, IdentityId::C4_2B}) {
      const VerificationRecord rec = run_identity(ctx, id, {});
      if (rec.status != Status::Pass) return fail(describe(rec));
    }
  }
  return {};
}

Outcome criterion_kloosterman_mean() {
  const PrimeContext five = PrimeContext::build(5);
  const VerificationRecord principal = verify_zhang_k4(five, character(five, 0));
  if (principal.status != Status::Pass || !close_to(principal.lhs, 159.0)) {
    return fail("principal branch at p=5: " + describe(principal));
  }
  const VerificationRecord legendre = verify_zhang_k4(five, character(five, 2));
  if (legendre.status != Status::Pass || !close_to(legendre.lhs, 175.0)) {
    return fail("quadratic branch at p=5: " + describe(legendre));
  }
  return expect_family_pass(IdentityId::ZHANG_K4, 5, 31);
}

Outcome criterion_analytic_properties() {
  for (const std::uint32_t p : sweep_primes()) {
    const PrimeContext ctx = PrimeContext::build(p);
    const std::vector<DirichletCharacter> chars = enumerate_characters(ctx);
    const SumReal root_p = std::sqrt(static_cast<SumReal>(p));
    const SumReal tight = 1e-9L * root_p;

    for (const DirichletCharacter& chi : chars) {
      if (!chi.is_principal) {
        const SumReal mag = std::abs(gauss_sum(ctx, chi, 1));
        if (std::abs(mag - root_p) > tight) {
          return fail("gauss magnitude off at p=" + std::to_string(p) +
                      ", chi index " + std::to_string(chi.j));
        }
      }
      for (Residue n = 0; n < p; ++n) {
        if (chi.is_principal && n == 0) continue;
        const auto [lhs, rhs] = twist_check(ctx, chi, n);
        if (std::abs(lhs - rhs) > tight) {
          return fail("twist law off at p=" + std::to_string(p) +
                      ", chi index " + std::to_string(chi.j) +
                      ", n=" + std::to_string(n));
        }
      }
    }

    // column orthogonality over the full character group
    for (Residue a = 1; a < p; ++a) {
      Cplx total{0.0L, 0.0L};
      for (const DirichletCharacter& chi : chars) {
        total += char_eval(ctx, chi, a);
      }
      const Cplx expected = a == 1 ? Cplx{static_cast<SumReal>(p - 1), 0.0L}
                                   : Cplx{0.0L, 0.0L};
      if (std::abs(total - expected) > 1e-9L * p) {
        return fail("orthogonality off at p=" + std::to_string(p) +
                    ", a=" + std::to_string(a));
      }
    }

    // sampled (n, k) invariance of the per-character second moment
    const HMomentTable base(ctx, 1, 1);
    std::mt19937_64 rng(0xC12ULL ^ p);
    std::uniform_int_distribution<Residue> dist(1, p - 1);
    for (int trial = 0; trial < 3; ++trial) {
      const HMomentTable variant(ctx, dist(rng), dist(rng));
      for (const DirichletCharacter& chi : chars) {
        KahanSum<SumReal> base_sum;
        KahanSum<SumReal> var_sum;
        for (Residue m = 1; m < p; ++m) {
          base_sum.add(base.h_norm_sq(chi.j, m));
          var_sum.add(variant.h_norm_sq(chi.j, m));
        }
        const double b = static_cast<double>(base_sum.value());
        const double v = static_cast<double>(var_sum.value());
        const Tolerance tol{};
        if (std::abs(b - v) > 2.0 * tol.bound(std::abs(b))) {
          return fail("second moment drifts with (n, k) at p=" +
                      std::to_string(p) + ", chi index " +
                      std::to_string(chi.j));
        }
      }
    }
  }
  return {};
}

nlohmann::json normalized_records(const fs::path& report_path) {
  std::ifstream in(report_path);
  if (!in) throw std::runtime_error("cannot open " + report_path.string());
  nlohmann::json doc = nlohmann::json::parse(in);
  nlohmann::json records = doc.at("records");
  for (nlohmann::json& rec : records) {
    rec.erase("elapsed_ms");
    rec.erase("cached");
  }
  return records;
}

Outcome criterion_cli_sweep(const std::string& cli) {
  if (cli.empty()) return fail("--cli <path> was not provided");
  const fs::path tmp =
      fs::temp_directory_path() /
      ("charmean-acceptance-" + std::to_string(::getpid()));
  fs::create_directories(tmp);
  const fs::path parallel_out = tmp / "parallel.json";
  const fs::path serial_out = tmp / "serial.json";

  const std::string base = "\"" + cli + "\" verify --primes 5..97 --identities all";
  const auto t0 = Clock::now();
  const int rc_par = std::system(
      (base + " --jobs 4 --out \"" + parallel_out.string() + "\"").c_str());
  const double elapsed = ms_since(t0);
  if (rc_par == -1 || !WIFEXITED(rc_par) || WEXITSTATUS(rc_par) != 0) {
    return fail("parallel run did not exit 0");
  }
  if (elapsed > 180000.0) {
    return fail("parallel run took " + std::to_string(elapsed) +
                " ms, budget 180000 ms");
  }
  const int rc_ser = std::system(
      (base + " --jobs 1 --out \"" + serial_out.string() + "\"").c_str());
  if (rc_ser == -1 || !WIFEXITED(rc_ser) || WEXITSTATUS(rc_ser) != 0) {
    return fail("serial run did not exit 0");
  }
  const nlohmann::json par = normalized_records(parallel_out);
  const nlohmann::json ser = normalized_records(serial_out);
  if (par.size() != ser.size()) {
    return fail("record counts differ: parallel " +
                std::to_string(par.size()) + ", serial " +
                std::to_string(ser.size()));
  }
  if (par != ser) {
    for (std::size_t i = 0; i < par.size(); ++i) {
      if (par[i] != ser[i]) {
        return fail("record " + std::to_string(i) +
                    " differs between serial and parallel runs");
      }
    }
  }
  std::error_code ec;
  fs::remove_all(tmp, ec);
  return {};
}

struct Criterion {
  std::string title;
  std::function<Outcome()> run;
};

}  // namespace

int main(int argc, char** argv) {
  std::string cli;
  for (int i = 1; i + 1 < argc; ++i) {
    if (std::string(argv[i]) == "--cli") cli = argv[i + 1];
  }
  ::unsetenv("CHARMEAN_CACHE");  // keep every run a fresh computation

  const std::vector<Criterion> criteria{
      {"per-character second moment closed form, every character, p in 5..97",
       criterion_second_moment},
      {"sum of squared second moments, p in 5..97, spot values 500 and 4638",
       criterion_squared_moment_sum},
      {"fourth power mean of H with triple-count spot values, p in 5..97",
       criterion_fourth_moment},
      {"triple count agrees across three independent routes, p in 5..97",
       criterion_triple_count_routes},
      {"two-variable twisted square sum, dual route, spot value 68 at p=5",
       criterion_twisted_square_sum},
      {"fiber sizes and both constructions coincide for every N, p in 5..97",
       criterion_fiber_census},
      {"degenerate triple count 9p-20 and its nine families, p in 5..97",
       criterion_degenerate_triples},
      {"shifted Legendre sums exact, quadratic dichotomy for all pairs, p<=31",
       criterion_shift_sums},
      {"weighted second moments and their aggregate, spot value 11 at p=5",
       criterion_weighted_moments},
      {"Legendre-weighted aggregates over nonprincipal characters, p in 5..97",
       criterion_legendre_weighted_aggregates},
      {"twisted Kloosterman fourth power mean, p in 5..31, spots 159 and 175",
       criterion_kloosterman_mean},
      {"analytic properties: magnitudes, twists, orthogonality, invariance",
       criterion_analytic_properties},
      {"CLI sweep over the whole catalogue, parallel matches serial",
       [&cli] { return criterion_cli_sweep(cli); }},
  };

  int failures = 0;
  for (std::size_t i = 0; i < criteria.size(); ++i) {
    const auto t0 = Clock::now();
    Outcome outcome;
    try {
      outcome = criteria[i].run();
    } catch (const std::exception& e) {
      outcome = fail(std::string("unexpected exception: ") + e.what());
    }
    const double elapsed = ms_since(t0);
    std::ostringstream line;
    line << (outcome.ok ? "[PASS]" : "[FAIL]") << " criterion " << (i + 1)
         << ": " << criteria[i].title << " (" << static_cast<long>(elapsed)
         << " ms)";
    if (!outcome.ok) line << " -- " << outcome.detail;
    std::cout << line.str() << std::endl;
    if (!outcome.ok) ++failures;
  }

  std::cout << "acceptance: " << (criteria.size() - failures) << "/"
            << criteria.size() << " criteria passed" << std::endl;
  return failures == 0 ? 0 : 1;
}
