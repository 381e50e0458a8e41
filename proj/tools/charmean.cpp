// charmean: sweeps odd primes, evaluates the character-sum identities the
// library knows about by at least two independent routes each, and reports
// the results as JSON or CSV. Exit code 0 when everything passes, 1 when any
// record fails, 2 on usage or configuration errors.

#include <cstdio>
#include <iostream>
#include <sstream>
#include <string>

#include <CLI11.hpp>

#include "charmean/report.hpp"
#include "charmean/version.hpp"

namespace {

using namespace charmean;

std::pair<std::uint32_t, std::uint32_t> parse_prime_range(
    const std::string& text) {
  const auto parse_u32 = [&](const std::string& tok) {
    std::size_t pos = 0;
    unsigned long v = 0;
    try {
      v = std::stoul(tok, &pos);
    } catch (const std::exception&) {
      throw ConfigError("invalid prime range '" + text + "'");
    }
    if (pos != tok.size() || v > 0xffffffffUL) {
      throw ConfigError("invalid prime range '" + text + "'");
    }
    return static_cast<std::uint32_t>(v);
  };
  const auto dots = text.find("..");
  if (dots == std::string::npos) {
    const std::uint32_t p = parse_u32(text);
    return {p, p};
  }
  return {parse_u32(text.substr(0, dots)), parse_u32(text.substr(dots + 2))};
}

std::vector<IdentityId> parse_identities(const std::string& text) {
  std::vector<IdentityId> ids;
  std::stringstream ss(text);
  std::string tok;
  while (std::getline(ss, tok, ',')) {
    if (tok.empty()) continue;
    std::string lower = tok;
    for (char& c : lower) c = static_cast<char>(std::tolower(c));
    if (lower == "all") return {};  // empty filter means all
    const auto id = identity_from_string(tok);
    if (!id) throw ConfigError("unknown identity '" + tok + "'");
    ids.push_back(*id);
  }
  return ids;
}

struct CliOptions {
  std::string primes = "5..97";
  std::string identities = "all";
  std::int64_t n = 1;
  std::int64_t k = 1;
  double tolerance = 1e-6;
  unsigned jobs = 1;
  std::string format = "json";
  std::string out;
  std::string cache;
  std::uint32_t max_cubic_prime = 199;
  std::uint64_t seed = 0x5eed;
  bool vary_nk = false;
};

SweepConfig to_config(const CliOptions& cli) {
  SweepConfig cfg;
  std::tie(cfg.prime_lo, cfg.prime_hi) = parse_prime_range(cli.primes);
  cfg.identities = parse_identities(cli.identities);
  cfg.n = cli.n;
  cfg.k = cli.k;
  cfg.tolerance = cli.tolerance;
  cfg.jobs = cli.jobs;
  if (cli.format == "json") {
    cfg.format = ReportFormat::Json;
  } else if (cli.format == "csv") {
    cfg.format = ReportFormat::Csv;
  } else {
    throw ConfigError("unknown format '" + cli.format + "' (json or csv)");
  }
  cfg.out_path = cli.out;
  cfg.cache_dir = cli.cache;
  cfg.max_cubic_prime = cli.max_cubic_prime;
  cfg.seed = cli.seed;
  cfg.vary_nk = cli.vary_nk;
  return cfg;
}

int emit_and_status(const RunReport& report) {
  if (report.config.out_path.empty()) {
    emit_report(report, report.config.format, std::cout);
  } else {
    emit_report_to_file(report, report.config.format,
                        report.config.out_path);
  }
  std::fprintf(stderr,
               "charmean: %zu records (%zu pass, %zu fail, %zu skipped) in "
               "%.1f ms\n",
               report.records.size(), report.summary.pass,
               report.summary.fail, report.summary.skipped,
               report.summary.total_elapsed_ms);
  return report.summary.fail == 0 ? 0 : 1;
}

int cmd_verify(const CliOptions& cli) {
  const RunReport report = run_sweep(to_config(cli));
  return emit_and_status(report);
}

int cmd_show(std::uint32_t prime, const std::string& identity,
             const CliOptions& cli) {
  const auto id = identity_from_string(identity);
  if (!id) throw ConfigError("unknown identity '" + identity + "'");
  const PrimeContext ctx = PrimeContext::build(prime);
  VerifyOptions opts;
  opts.n = static_cast<Residue>(cli.n % prime);
  opts.k = static_cast<Residue>(cli.k % prime);
  if (opts.n == 0 || opts.k == 0) {
    throw ConfigError("n and k must be coprime to the prime");
  }
  opts.tol = Tolerance{cli.tolerance, 1e-9};
  opts.max_cubic_prime = cli.max_cubic_prime;

  const VerificationRecord rec = run_identity(ctx, *id, opts);
  std::printf("p = %u   primitive root g = %u   n = %u   k = %u\n", prime,
              ctx.primitive_root(), opts.n, opts.k);
  std::printf("%s: %s\n", to_string(*id), identity_label(*id));
  std::printf("  lhs        = %.17g\n", rec.lhs);
  std::printf("  rhs        = %.17g\n", rec.rhs);
  std::printf("  abs_err    = %.17g\n", rec.abs_err);
  std::printf("  rel_err    = %.17g\n", rec.rel_err);
  std::printf("  status     = %s%s%s\n", to_string(rec.status),
              rec.skip_reason.empty() ? "" : ": ",
              rec.skip_reason.c_str());
  std::printf("  elapsed_ms = %.3f\n", rec.elapsed_ms);

  std::printf("\nintermediates\n");
  if (prime <= cli.max_cubic_prime) {
    std::printf("  T(p)   direct=%lld  delta-route=%lld  set-route=%lld\n",
                t_direct(ctx), t_via_delta(ctx), t_via_sets(ctx));
  } else {
    std::printf("  T(p)   delta-route=%lld  (cubic routes guarded)\n",
                t_via_delta(ctx));
  }
  std::printf("  T_L(p) = %lld\n", t_l(ctx));
  std::printf("  |S(N)| census:\n");
  const std::vector<long long> counts = s_census_counts(ctx);
  for (Residue N = 1; N < prime; ++N) {
    const char* cls = N == 1               ? "N=1"
                      : N == 4             ? "N=4"
                      : ctx.legendre(N) == 1 ? "square"
                                             : "non-square";
    std::printf("    N=%-4u count=%-6lld expected=%-6lld class=%s\n", N,
                counts[N], s_class_count(ctx, N), cls);
  }
  return rec.status == Status::Fail ? 1 : 0;
}

int cmd_bench(const CliOptions& cli) {
  SweepConfig cfg = to_config(cli);
  cfg.cache_dir.clear();  // benchmarking always recomputes
  const RunReport report = run_sweep(cfg);
  struct Agg {
    double ms = 0;
    std::size_t n = 0;
  };
  std::vector<Agg> agg(all_identities().size());
  for (const VerificationRecord& rec : report.records) {
    Agg& a = agg[static_cast<std::size_t>(rec.identity)];
    a.ms += rec.elapsed_ms;
    a.n += 1;
  }
  std::printf("%-14s %10s %8s\n", "identity", "total_ms", "records");
  for (const IdentityId id : all_identities()) {
    const Agg& a = agg[static_cast<std::size_t>(id)];
    if (a.n == 0) continue;
    std::printf("%-14s %10.2f %8zu\n", to_string(id), a.ms, a.n);
  }
  std::printf("%-14s %10.2f %8zu\n", "overall",
              report.summary.total_elapsed_ms, report.records.size());
  if (report.summary.fail != 0) {
    std::fprintf(stderr, "charmean: %zu records failed during bench\n",
                 report.summary.fail);
    return 1;
  }
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"character-sum identity verification over odd prime moduli"};
  app.require_subcommand(1);

  CliOptions cli;
  std::uint32_t show_prime = 5;
  std::string show_identity = "TH1";

  CLI::App* verify = app.add_subcommand(
      "verify", "sweep a prime range and check the selected identities");
  verify->add_option("--primes", cli.primes, "prime range A..B (default 5..97)");
  verify->add_option("--identities", cli.identities,
                     "comma-separated identity list, or 'all'");
  verify->add_option("--n", cli.n, "first sum parameter (default 1)");
  verify->add_option("--k", cli.k, "second sum parameter (default 1)");
  verify->add_option("--tolerance", cli.tolerance,
                     "absolute floor of the pass rule (default 1e-6)");
  verify->add_option("--jobs", cli.jobs, "worker threads (default 1)");
  verify->add_option("--format", cli.format, "json or csv");
  verify->add_option("--out", cli.out, "output path (default stdout)");
  verify->add_option("--cache", cli.cache,
                     "cache directory (CHARMEAN_CACHE overrides)");
  verify->add_option("--max-cubic-prime", cli.max_cubic_prime,
                     "largest p for cubic-time integer routes (default 199)");
  verify->add_option("--seed", cli.seed, "seed for the vary-nk draws");
  verify->add_flag("--vary-nk", cli.vary_nk,
                   "re-run each family at 3 random coprime (n, k) pairs");

  CLI::App* show = app.add_subcommand(
      "show", "print one identity at one prime with its intermediates");
  show->add_option("--prime", show_prime, "odd prime >= 5")->required();
  show->add_option("--identity", show_identity, "identity id")->required();
  show->add_option("--n", cli.n, "first sum parameter (default 1)");
  show->add_option("--k", cli.k, "second sum parameter (default 1)");
  show->add_option("--tolerance", cli.tolerance, "absolute floor");
  show->add_option("--max-cubic-prime", cli.max_cubic_prime,
                   "largest p for cubic-time integer routes");

  CLI::App* bench = app.add_subcommand(
      "bench", "run a sweep and print per-identity timings");
  bench->add_option("--primes", cli.primes, "prime range A..B");
  bench->add_option("--identities", cli.identities, "identity list or 'all'");
  bench->add_option("--n", cli.n, "first sum parameter");
  bench->add_option("--k", cli.k, "second sum parameter");
  bench->add_option("--jobs", cli.jobs, "worker threads");
  bench->add_option("--max-cubic-prime", cli.max_cubic_prime,
                    "largest p for cubic-time integer routes");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 2;
  }

  try {
    if (verify->parsed()) return cmd_verify(cli);
    if (show->parsed()) return cmd_show(show_prime, show_identity, cli);
    if (bench->parsed()) return cmd_bench(cli);
  } catch (const ConfigError& e) {
    std::fprintf(stderr, "charmean: error: %s\n", e.what());
    return 2;
  } catch (const UnsupportedModulusError& e) {
    std::fprintf(stderr, "charmean: error: %s\n", e.what());
    return 2;
  } catch (const std::exception& e) {
    std::fprintf(stderr, "charmean: error: %s\n", e.what());
    return 2;
  }
  return 2;
}
