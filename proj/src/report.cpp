#include "charmean/report.hpp"

#include <atomic>
#include <chrono>
#include <cinttypes>
#include <cstdio>
#include <cstdlib>
#include <ctime>
#include <fstream>
#include <iostream>
#include <mutex>
#include <random>
#include <sstream>
#include <thread>

#include <json.hpp>

#include "charmean/version.hpp"

namespace charmean {

namespace {

using OrderedJson = nlohmann::ordered_json;

std::string iso_utc_now() {
  const std::time_t t =
      std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
  std::tm tm{};
  gmtime_r(&t, &tm);
  char buf[32];
  std::strftime(buf, sizeof(buf), "%Y-%m-%dT%H:%M:%SZ", &tm);
  return buf;
}

std::string format_g17(double x) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.17g", x);
  return buf;
}

std::string status_string(const VerificationRecord& rec) {
  if (rec.status == Status::Skipped) {
    return rec.skip_reason.empty() ? "skipped"
                                   : "skipped: " + rec.skip_reason;
  }
  return to_string(rec.status);
}

OrderedJson record_to_json(const VerificationRecord& rec) {
  OrderedJson j;
  j["identity"] = to_string(rec.identity);
  j["prime"] = rec.prime;
  j["lhs"] = rec.lhs;
  j["rhs"] = rec.rhs;
  j["abs_err"] = rec.abs_err;
  j["rel_err"] = rec.rel_err;
  j["status"] = status_string(rec);
  j["elapsed_ms"] = rec.elapsed_ms;
  j["cached"] = rec.cached;
  return j;
}

std::optional<VerificationRecord> record_from_json(const nlohmann::json& j) {
  VerificationRecord rec;
  if (!j.is_object()) return std::nullopt;
  const auto id = identity_from_string(j.value("identity", std::string{}));
  if (!id) return std::nullopt;
  rec.identity = *id;
  if (!j.contains("prime") || !j["prime"].is_number()) return std::nullopt;
  rec.prime = j["prime"].get<std::uint32_t>();
  rec.lhs = j.value("lhs", 0.0);
  rec.rhs = j.value("rhs", 0.0);
  rec.abs_err = j.value("abs_err", 0.0);
  rec.rel_err = j.value("rel_err", 0.0);
  rec.elapsed_ms = j.value("elapsed_ms", 0.0);
  const std::string status = j.value("status", std::string{});
  if (status == "pass") {
    rec.status = Status::Pass;
  } else if (status == "fail") {
    rec.status = Status::Fail;
  } else if (status.rfind("skipped", 0) == 0) {
    rec.status = Status::Skipped;
    const auto colon = status.find(": ");
    if (colon != std::string::npos) rec.skip_reason = status.substr(colon + 2);
  } else {
    return std::nullopt;
  }
  return rec;
}

std::uint64_t fnv1a64(const std::string& s) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (const unsigned char c : s) {
    h ^= c;
    h *= 0x100000001b3ULL;
  }
  return h;
}

std::string cache_key_string(std::uint32_t prime, IdentityId id,
                             std::int64_t n, std::int64_t k, double tolerance) {
  std::ostringstream os;
  os << kToolVersion << '|' << prime << '|' << to_string(id) << '|' << n << '|'
     << k << '|' << format_g17(tolerance);
  return os.str();
}

std::vector<IdentityId> effective_identities(const SweepConfig& cfg) {
  return cfg.identities.empty() ? all_identities() : cfg.identities;
}

void validate(const SweepConfig& cfg, const std::vector<std::uint32_t>& primes) {
  if (cfg.prime_lo < 5) {
    throw ConfigError("invalid range " + std::to_string(cfg.prime_lo) + ".." +
                      std::to_string(cfg.prime_hi) +
                      ": lower bound must be at least 5");
  }
  if (cfg.prime_hi < cfg.prime_lo) {
    throw ConfigError("invalid range " + std::to_string(cfg.prime_lo) + ".." +
                      std::to_string(cfg.prime_hi) +
                      ": upper bound below lower bound");
  }
  if (primes.empty()) {
    throw ConfigError("invalid range " + std::to_string(cfg.prime_lo) + ".." +
                      std::to_string(cfg.prime_hi) + ": contains no primes");
  }
  if (cfg.n < 1 || cfg.k < 1) {
    throw ConfigError("n and k must be positive integers");
  }
  for (const std::uint32_t p : primes) {
    if (cfg.n % p == 0 || cfg.k % p == 0) {
      throw ConfigError("n and k must be coprime to every prime in range; " +
                        std::to_string(p) + " divides one of them");
    }
  }
  if (cfg.jobs < 1) throw ConfigError("jobs must be at least 1");
  if (cfg.tolerance <= 0) throw ConfigError("tolerance must be positive");
}

// Re-runs one family at randomly drawn coprime (n, k) pairs. The stated
// parameter-independence of the per-character second moment is asserted
// against the base run; every variant must itself pass.
struct VariantSet {
  std::vector<IdentityWorkspace> workspaces;
  std::vector<VerifyOptions> opts;
};

VerificationRecord fold_variants(const PrimeContext& ctx,
                                 IdentityWorkspace& base_ws,
                                 VariantSet& variants, IdentityId id,
                                 const VerifyOptions& base_opts,
                                 VerificationRecord rec) {
  for (std::size_t i = 0; i < variants.workspaces.size(); ++i) {
    const VerificationRecord var =
        run_identity(variants.workspaces[i], id, variants.opts[i]);
    rec.elapsed_ms += var.elapsed_ms;
    if (var.status == Status::Fail) rec.status = Status::Fail;
    rec.abs_err = std::max(rec.abs_err, var.abs_err);
  }
  if (id == IdentityId::TH2_1 && rec.status != Status::Skipped) {
    const std::uint32_t p = ctx.p();
    const HMomentTable& base_tab = base_ws.h_table();
    for (std::size_t i = 0; i < variants.workspaces.size(); ++i) {
      const HMomentTable& var_tab = variants.workspaces[i].h_table();
      for (std::uint32_t j = 0; j + 1 < p; ++j) {
        KahanSum<SumReal> base_sum;
        KahanSum<SumReal> var_sum;
        for (Residue m = 1; m < p; ++m) {
          base_sum.add(base_tab.h_norm_sq(j, m));
          var_sum.add(var_tab.h_norm_sq(j, m));
        }
        const double gap = static_cast<double>(
            std::fabs(base_sum.value() - var_sum.value()));
        if (gap > 2 * base_opts.tol.bound(rec.rhs)) rec.status = Status::Fail;
      }
    }
  }
  return rec;
}

std::vector<VerificationRecord> run_prime(const SweepConfig& cfg,
                                          std::uint32_t p,
                                          const std::vector<IdentityId>& ids,
                                          const ResultCache* cache) {
  const PrimeContext ctx = PrimeContext::build(p);
  VerifyOptions opts;
  opts.n = static_cast<Residue>(cfg.n % p);
  opts.k = static_cast<Residue>(cfg.k % p);
  opts.tol = Tolerance{cfg.tolerance, 1e-9};
  opts.max_cubic_prime = cfg.max_cubic_prime;
  IdentityWorkspace ws(ctx, opts.n, opts.k);

  std::optional<VariantSet> variants;
  if (cfg.vary_nk) {
    variants.emplace();
    std::mt19937_64 rng(cfg.seed ^ (0x9e3779b97f4a7c15ULL * p));
    std::uniform_int_distribution<std::uint32_t> dist(1, p - 1);
    for (int i = 0; i < 3; ++i) {
      VerifyOptions vopts = opts;
      vopts.n = dist(rng);
      vopts.k = dist(rng);
      variants->opts.push_back(vopts);
      variants->workspaces.emplace_back(ctx, vopts.n, vopts.k);
    }
  }

  std::vector<VerificationRecord> records;
  records.reserve(ids.size());
  for (const IdentityId id : ids) {
    if (cache != nullptr && !cfg.vary_nk) {
      const auto t0 = std::chrono::steady_clock::now();
      auto hit = cache->lookup(p, id, cfg.n, cfg.k, cfg.tolerance);
      if (hit) {
        hit->cached = true;
        hit->elapsed_ms = std::chrono::duration<double, std::milli>(
                              std::chrono::steady_clock::now() - t0)
                              .count();
        records.push_back(*hit);
        continue;
      }
    }
    VerificationRecord rec = run_identity(ws, id, opts);
    if (variants) {
      rec = fold_variants(ctx, ws, *variants, id, opts, std::move(rec));
    }
    if (cache != nullptr && !cfg.vary_nk) {
      cache->store(rec, cfg.n, cfg.k, cfg.tolerance);
    }
    records.push_back(std::move(rec));
  }
  return records;
}

}  // namespace

RunReport run_sweep(const SweepConfig& cfg_in) {
  SweepConfig cfg = cfg_in;
  if (const char* env = std::getenv("CHARMEAN_CACHE");
      env != nullptr && *env != '\0') {
    cfg.cache_dir = env;
  }

  const std::vector<std::uint32_t> primes =
      primes_in_range(cfg.prime_lo, cfg.prime_hi);
  validate(cfg, primes);
  const std::vector<IdentityId> ids = effective_identities(cfg);

  std::optional<ResultCache> cache;
  if (!cfg.cache_dir.empty()) cache.emplace(cfg.cache_dir);

  const auto t0 = std::chrono::steady_clock::now();
  std::vector<std::vector<VerificationRecord>> slots(primes.size());

  const unsigned workers =
      std::max(1u, std::min<unsigned>(cfg.jobs,
                                      static_cast<unsigned>(primes.size())));
  if (workers == 1) {
    for (std::size_t i = 0; i < primes.size(); ++i) {
      slots[i] = run_prime(cfg, primes[i], ids,
                           cache ? &*cache : nullptr);
    }
  } else {
    std::atomic<std::size_t> next{0};
    std::exception_ptr first_error;
    std::mutex error_mutex;
    std::vector<std::thread> pool;
    pool.reserve(workers);
    for (unsigned w = 0; w < workers; ++w) {
      pool.emplace_back([&] {
        while (true) {
          const std::size_t i = next.fetch_add(1);
          if (i >= primes.size()) return;
          try {
            slots[i] = run_prime(cfg, primes[i], ids,
                                 cache ? &*cache : nullptr);
          } catch (...) {
            const std::lock_guard<std::mutex> lock(error_mutex);
            if (!first_error) first_error = std::current_exception();
            return;
          }
        }
      });
    }
    for (std::thread& t : pool) t.join();
    if (first_error) std::rethrow_exception(first_error);
  }

  RunReport report;
  report.config = cfg;
  report.config.identities = ids;
  for (std::vector<VerificationRecord>& slot : slots) {
    for (VerificationRecord& rec : slot) report.records.push_back(std::move(rec));
  }
  for (const VerificationRecord& rec : report.records) {
    switch (rec.status) {
      case Status::Pass: ++report.summary.pass; break;
      case Status::Fail: ++report.summary.fail; break;
      case Status::Skipped: ++report.summary.skipped; break;
    }
  }
  report.summary.total_elapsed_ms =
      std::chrono::duration<double, std::milli>(
          std::chrono::steady_clock::now() - t0)
          .count();
  report.version = kToolVersion;
  report.timestamp = iso_utc_now();
  return report;
}

std::string report_to_json_string(const RunReport& report) {
  OrderedJson j;
  OrderedJson cfg;
  cfg["primes"] = std::to_string(report.config.prime_lo) + ".." +
                  std::to_string(report.config.prime_hi);
  OrderedJson ids = OrderedJson::array();
  for (const IdentityId id : report.config.identities) ids.push_back(to_string(id));
  cfg["identities"] = ids;
  cfg["n"] = report.config.n;
  cfg["k"] = report.config.k;
  cfg["tolerance"] = report.config.tolerance;
  cfg["jobs"] = report.config.jobs;
  cfg["max_cubic_prime"] = report.config.max_cubic_prime;
  cfg["seed"] = report.config.seed;
  cfg["vary_nk"] = report.config.vary_nk;
  cfg["cache"] = report.config.cache_dir;
  j["config"] = cfg;
  OrderedJson records = OrderedJson::array();
  for (const VerificationRecord& rec : report.records) {
    records.push_back(record_to_json(rec));
  }
  j["records"] = records;
  OrderedJson summary;
  summary["pass"] = report.summary.pass;
  summary["fail"] = report.summary.fail;
  summary["skipped"] = report.summary.skipped;
  summary["records"] = report.records.size();
  summary["total_elapsed_ms"] = report.summary.total_elapsed_ms;
  j["summary"] = summary;
  j["version"] = report.version;
  j["timestamp"] = report.timestamp;
  return j.dump(2) + "\n";
}

std::string report_to_csv_string(const RunReport& report) {
  std::ostringstream os;
  os << "identity,prime,lhs,rhs,abs_err,rel_err,status,elapsed_ms,cached\n";
  for (const VerificationRecord& rec : report.records) {
    os << to_string(rec.identity) << ',' << rec.prime << ','
       << format_g17(rec.lhs) << ',' << format_g17(rec.rhs) << ','
       << format_g17(rec.abs_err) << ',' << format_g17(rec.rel_err) << ','
       << status_string(rec) << ',' << format_g17(rec.elapsed_ms) << ','
       << (rec.cached ? 1 : 0) << '\n';
  }
  return os.str();
}

void emit_report(const RunReport& report, ReportFormat format,
                 std::ostream& out) {
  out << (format == ReportFormat::Json ? report_to_json_string(report)
                                       : report_to_csv_string(report));
}

void emit_report_to_file(const RunReport& report, ReportFormat format,
                         const std::string& path) {
  namespace fs = std::filesystem;
  const fs::path target(path);
  if (target.has_parent_path()) {
    std::error_code ec;
    fs::create_directories(target.parent_path(), ec);
  }
  const fs::path tmp = target.string() + ".tmp";
  {
    std::ofstream out(tmp, std::ios::trunc);
    if (!out) {
      throw std::runtime_error("cannot write report to " + path);
    }
    emit_report(report, format, out);
    if (!out.good()) {
      throw std::runtime_error("short write emitting report to " + path);
    }
  }
  std::error_code ec;
  fs::rename(tmp, target, ec);
  if (ec) {
    throw std::runtime_error("cannot move report into place at " + path +
                             ": " + ec.message());
  }
}

ResultCache::ResultCache(std::filesystem::path dir) : dir_(std::move(dir)) {
  std::error_code ec;
  std::filesystem::create_directories(dir_, ec);
  if (ec && !std::filesystem::is_directory(dir_)) {
    throw std::runtime_error("cannot create cache directory " +
                             dir_.string() + ": " + ec.message());
  }
}

std::filesystem::path ResultCache::entry_path(std::uint32_t prime,
                                              IdentityId id, std::int64_t n,
                                              std::int64_t k,
                                              double tolerance) const {
  char hash[24];
  std::snprintf(hash, sizeof(hash), "%016" PRIx64,
                fnv1a64(cache_key_string(prime, id, n, k, tolerance)));
  return dir_ / ("p" + std::to_string(prime) + "_" + to_string(id) + "_" +
                 hash + ".json");
}

std::optional<VerificationRecord> ResultCache::lookup(std::uint32_t prime,
                                                      IdentityId id,
                                                      std::int64_t n,
                                                      std::int64_t k,
                                                      double tolerance) const {
  const std::filesystem::path path = entry_path(prime, id, n, k, tolerance);
  std::ifstream in(path);
  if (!in) return std::nullopt;
  nlohmann::json doc = nlohmann::json::parse(in, nullptr, false);
  const auto reject = [&](const char* why) -> std::optional<VerificationRecord> {
    std::cerr << "warning: discarding cache entry " << path.string() << " ("
              << why << ")\n";
    return std::nullopt;
  };
  if (doc.is_discarded() || !doc.is_object()) return reject("unparseable");
  if (doc.value("version", std::string{}) != kToolVersion) {
    return std::nullopt;  // stale tool version: silent miss
  }
  if (doc.value("prime", 0u) != prime ||
      doc.value("identity", std::string{}) != to_string(id) ||
      doc.value("n", std::int64_t{0}) != n ||
      doc.value("k", std::int64_t{0}) != k ||
      doc.value("tolerance", 0.0) != tolerance) {
    return reject("key mismatch");
  }
  if (!doc.contains("record")) return reject("missing record");
  auto rec = record_from_json(doc["record"]);
  if (!rec) return reject("malformed record");
  return rec;
}

void ResultCache::store(const VerificationRecord& record, std::int64_t n,
                        std::int64_t k, double tolerance) const {
  const std::filesystem::path path =
      entry_path(record.prime, record.identity, n, k, tolerance);
  OrderedJson doc;
  doc["version"] = kToolVersion;
  doc["prime"] = record.prime;
  doc["identity"] = to_string(record.identity);
  doc["n"] = n;
  doc["k"] = k;
  doc["tolerance"] = tolerance;
  doc["record"] = record_to_json(record);
  const std::filesystem::path tmp =
      path.string() + ".tmp" +
      std::to_string(
          std::hash<std::thread::id>{}(std::this_thread::get_id()) & 0xffff);
  {
    std::ofstream out(tmp, std::ios::trunc);
    if (!out) return;  // cache is best-effort; verification already succeeded
    out << doc.dump(2) << "\n";
  }
  std::error_code ec;
  std::filesystem::rename(tmp, path, ec);
}

}  // namespace charmean
