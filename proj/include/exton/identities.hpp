#pragma once

#include <string>
#include <vector>

#include "exton/series.hpp"

// Verification harness for the finite-sum identities (3.10)-(3.11), the
// decomposition formula (3.12), and the duplication formula (3.13)/(3.14).
// The printed formulas contain evident typographical gaps, so each verifier
// evaluates a declared list of variants (the printed form always included,
// never silently altered) and reports the match status of every variant.

namespace exton {

enum class IdentityStatus { match, mismatch, inconclusive };

std::string to_string(IdentityStatus status);

// Comparison thresholds: exact/terminating comparisons vs truncated ones.
inline constexpr double kIdentityTolExact = 1e-12;
inline constexpr double kIdentityTolTruncated = 1e-8;
inline constexpr double kIdentityAbsFloor = 1e-14;

struct VariantOutcome {
  std::string name;
  std::string formula;  // human-readable description of the variant's RHS
  double rhs = 0.0;
  double abs_diff = 0.0;
  double rel_diff = 0.0;
  IdentityStatus status = IdentityStatus::mismatch;
};

struct IdentityReport {
  std::string identity_id;  // "3.10" | "3.11" | "3.12" | "3.13"
  double lhs = 0.0;
  double rhs = 0.0;       // RHS of the best variant
  double abs_diff = 0.0;  // versus that variant
  double rel_diff = 0.0;
  TruncationPolicy truncation;
  IdentityStatus status = IdentityStatus::mismatch;  // best across variants
  std::string matched_variant;                       // empty when none match
  std::vector<VariantOutcome> variants;
  std::string notes;
};

/// Index map of the duplication formula: all seven totals derived from the
/// ten summation indices.
struct DuplicationIndexMap {
  long M = 0, N = 0, P = 0, Q1 = 0, Q2 = 0, Q3 = 0, Q4 = 0;

  static DuplicationIndexMap from(int m, int n, int p, int q, int s, int k,
                                  int r, int l, int h, int t);
};

/// Finite sum (3.10). Variants: printed; printed times x^n; and the fully
/// derived form (x^n, argument -z/x, extra lower parameter (1-b-n)_k).
IdentityReport verify_3_10(int n, double b, double c, double e1, double e2,
                           double e3, double e4, const Point4& point,
                           const TruncationPolicy& policy);

/// Finite sum (3.11). Variants: printed and the candidate correction factors
/// x^n, z^m, x^n z^m.
IdentityReport verify_3_11(int n, int m, double a, double e1, double e2,
                           double e3, double e4, const Point4& point,
                           const TruncationPolicy& policy);

/// Decomposition (3.12) with c = b on the left. Variants: printed inner
/// parameters; shifted inner parameters (e1+s, e2+k, e3+s+k+r, e4+r) with the
/// outer multinomial 1/(s!k!r!); shifted without the multinomial.
IdentityReport verify_3_12(double a, double b, double e1, double e2, double e3,
                           double e4, const Point4& point,
                           const TruncationPolicy& policy, int outer_bound);

/// Duplication formula (3.13)/(3.14). Variants: printed (inner c+N), printed
/// with c+P, and the derived form ((-1)^M sign, outer multinomial, inner c+P,
/// inner arguments doubled). The two-parameter overload exercises c = b.
IdentityReport verify_3_13(double a, double b, double c, double e1, double e2,
                           double e3, double e4, const Point4& point,
                           const TruncationPolicy& policy, int total_bound);
IdentityReport verify_3_13(double a, double b, double e1, double e2, double e3,
                           double e4, const Point4& point,
                           const TruncationPolicy& policy, int total_bound);

}  // namespace exton
