#pragma once

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "charmean/identities.hpp"

namespace charmean {

class ConfigError : public std::runtime_error {
 public:
  explicit ConfigError(const std::string& what) : std::runtime_error(what) {}
};

enum class ReportFormat { Json, Csv };

struct SweepConfig {
  std::uint32_t prime_lo = 5;
  std::uint32_t prime_hi = 97;
  std::vector<IdentityId> identities;  // empty means all
  std::int64_t n = 1;
  std::int64_t k = 1;
  double tolerance = 1e-6;  // absolute floor of the pass rule
  unsigned jobs = 1;
  ReportFormat format = ReportFormat::Json;
  std::string out_path;   // empty: caller prints to stdout
  std::string cache_dir;  // empty: no cache (CHARMEAN_CACHE overrides)
  std::uint32_t max_cubic_prime = 199;
  std::uint64_t seed = 0x5eed;
  bool vary_nk = false;  // rerun each family at 3 random coprime (n, k)
};

struct RunSummary {
  std::size_t pass = 0;
  std::size_t fail = 0;
  std::size_t skipped = 0;
  double total_elapsed_ms = 0;
};

struct RunReport {
  SweepConfig config;
  std::vector<VerificationRecord> records;  // sorted by (prime, identity)
  RunSummary summary;
  std::string version;
  std::string timestamp;  // ISO 8601, UTC
};

/// Runs the configured sweep. Records come back in (prime, identity) order
/// and are identical for serial and parallel runs up to timing fields.
/// Throws ConfigError on invalid configuration.
RunReport run_sweep(const SweepConfig& cfg);

void emit_report(const RunReport& report, ReportFormat format,
                 std::ostream& out);

/// Writes to path atomically (temp file + rename). Throws std::runtime_error
/// with the path in the message on IO failure.
void emit_report_to_file(const RunReport& report, ReportFormat format,
                         const std::string& path);

std::string report_to_json_string(const RunReport& report);
std::string report_to_csv_string(const RunReport& report);

/// On-disk memo of finished records, one JSON document per (prime, identity),
/// keyed by tool version, prime, identity, n, k and tolerance. Writes are
/// atomic; unreadable entries are reported and recomputed.
class ResultCache {
 public:
  explicit ResultCache(std::filesystem::path dir);

  std::optional<VerificationRecord> lookup(std::uint32_t prime, IdentityId id,
                                           std::int64_t n, std::int64_t k,
                                           double tolerance) const;

  void store(const VerificationRecord& record, std::int64_t n, std::int64_t k,
             double tolerance) const;

  std::filesystem::path entry_path(std::uint32_t prime, IdentityId id,
                                   std::int64_t n, std::int64_t k,
                                   double tolerance) const;

 private:
  std::filesystem::path dir_;
};

}  // namespace charmean
