#pragma once

#include <optional>
#include <string>
#include <vector>

#include "charmean/combinatorics.hpp"
#include "charmean/csum.hpp"

namespace charmean {

/// The identity families the engine can check. Enum order fixes the record
/// order within one prime.
enum class IdentityId {
  TH1,          // sum over chi of squared second moments of H
  TH2,          // fourth power mean of H over (chi, m)
  T_DELTA,      // triple count T(p), three independent routes
  PSI_IDENTITY, // squared moduli of the two-variable twisted sum over psi
  TH2_1,        // per-character second moment of H in m
  L3_1_SCOUNT,  // fiber sizes |S(N)| and their parametric construction
  U0_COUNT,     // degenerate triple count 9p - 20
  L4_1,         // weighted second moment at principal chi, closed form
  C4_1,         // aggregate of those weighted moments: 6p^2 - 31p + 16
  L4_2,         // weighted second moment at nonprincipal chi, dual route
  L4_3A,        // single-shift Legendre sum = -legendre(-1)
  L4_3B,        // double-shift Legendre sum = 2
  QUAD_LEG,     // quadratic Legendre sums vs the discriminant dichotomy
  C4_2A,        // Legendre-weighted moment aggregate over nonprincipal chi
  C4_2B,        // aggregate over nonprincipal chi and non-real psi
  ZHANG_K4,     // fourth power mean of the twisted Kloosterman sum
  EQ1_1,        // Gauss sum twist law
  GAUSS_MAG,    // |G(1, chi)| = sqrt(p) off the principal character
};

const std::vector<IdentityId>& all_identities();
const char* to_string(IdentityId id);
std::optional<IdentityId> identity_from_string(const std::string& name);

/// One-line description of what the family states; shown by the CLI.
const char* identity_label(IdentityId id);

enum class Status { Pass, Fail, Skipped };

const char* to_string(Status s);

struct VerificationRecord {
  IdentityId identity = IdentityId::TH1;
  std::uint32_t prime = 0;
  double lhs = 0;      // measured value (magnitude for complex-valued checks)
  double rhs = 0;      // expected value, exact or closed-form
  double abs_err = 0;  // |lhs - rhs|; complex difference where applicable
  double rel_err = 0;  // abs_err / |rhs| (abs_err when rhs = 0)
  Status status = Status::Pass;
  std::string skip_reason;
  double elapsed_ms = 0;
  bool cached = false;
};

/// Pass rule for floating routes: abs_err <= max(abs_floor, rel_scale*|rhs|).
/// Integer routes pass only at abs_err == 0.
struct Tolerance {
  double abs_floor = 1e-6;
  double rel_scale = 1e-9;

  double bound(double rhs_mag) const;
  bool pass(double abs_err, double rhs_mag) const;
};

struct VerifyOptions {
  Residue n = 1;
  Residue k = 1;
  Tolerance tol;
  std::uint32_t max_cubic_prime = 199;  // guard for O(p^3) integer routes
};

/// Per-prime scratch shared across families at fixed (n, k): character list
/// and the |H|^2 table, built lazily on first use.
class IdentityWorkspace {
 public:
  IdentityWorkspace(const PrimeContext& ctx, Residue n, Residue k)
      : ctx_(ctx), n_(n), k_(k) {}

  const PrimeContext& ctx() const { return ctx_; }
  Residue n() const { return n_; }
  Residue k() const { return k_; }
  const std::vector<DirichletCharacter>& chars();
  const HMomentTable& h_table();

 private:
  const PrimeContext& ctx_;
  Residue n_;
  Residue k_;
  std::vector<DirichletCharacter> chars_;
  std::optional<HMomentTable> htab_;
};

/// Runs one family at one prime. opts.n/opts.k must match the workspace.
VerificationRecord run_identity(IdentityWorkspace& ws, IdentityId id,
                                const VerifyOptions& opts);

/// Convenience overload owning a fresh workspace.
VerificationRecord run_identity(const PrimeContext& ctx, IdentityId id,
                                const VerifyOptions& opts = {});

// Single-instance verifiers, used directly by tests and by the family
// drivers. The family record reports the worst instance.

/// Second moment of |H|^2 in m for one character: 2p - 5 at the principal
/// character, p(p - 3 - chi(-1)) otherwise.
VerificationRecord verify_th2_1(const PrimeContext& ctx,
                                const DirichletCharacter& chi,
                                const VerifyOptions& opts = {});

VerificationRecord verify_th1(const PrimeContext& ctx,
                              const VerifyOptions& opts = {});

VerificationRecord verify_th2(const PrimeContext& ctx,
                              const VerifyOptions& opts = {});

VerificationRecord verify_psi_identity(const PrimeContext& ctx,
                                       const VerifyOptions& opts = {});

/// Weighted second moment at the principal character against its closed
/// form; psi must be nonprincipal.
VerificationRecord verify_l4_1(const PrimeContext& ctx,
                               const DirichletCharacter& psi,
                               const VerifyOptions& opts = {});

VerificationRecord verify_c4_1(const PrimeContext& ctx,
                               const VerifyOptions& opts = {});

/// Weighted second moment at a nonprincipal character against the
/// Gauss-sum route; chi and psi must both be nonprincipal.
VerificationRecord verify_l4_2(const PrimeContext& ctx,
                               const DirichletCharacter& chi,
                               const DirichletCharacter& psi,
                               const VerifyOptions& opts = {});

/// Fourth power mean of K(m, n, chi) over m for one character.
VerificationRecord verify_zhang_k4(const PrimeContext& ctx,
                                   const DirichletCharacter& chi,
                                   const VerifyOptions& opts = {});

}  // namespace charmean
