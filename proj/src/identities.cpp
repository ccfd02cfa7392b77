#include "exton/identities.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

namespace exton {

namespace {

struct Kbn {
  double sum = 0.0;
  double comp = 0.0;
  void add(double v) {
    const double t = sum + v;
    if (std::abs(sum) >= std::abs(v)) {
      comp += (sum - t) + v;
    } else {
      comp += (v - t) + sum;
    }
    sum = t;
  }
  double total() const { return sum + comp; }
};

double binom(int n, int k) {
  if (k < 0 || k > n) return 0.0;
  double out = 1.0;
  for (int i = 0; i < k; ++i) out = out * (n - i) / (i + 1);
  return out;
}

double int_pow(double v, int k) {
  double out = 1.0;
  for (int i = 0; i < k; ++i) out *= v;
  return out;
}

double factorial(int n) {
  double out = 1.0;
  for (int i = 2; i <= n; ++i) out *= i;
  return out;
}

// Candidate RHS value with bookkeeping for stability flags.
struct Candidate {
  std::string name;
  std::string formula;
  double rhs = 0.0;
  bool inconclusive = false;  // inner series issued a divergence warning
};

IdentityReport assemble(const std::string& id, double lhs,
                        const std::vector<Candidate>& candidates,
                        const TruncationPolicy& policy, double tol,
                        const std::string& notes) {
  IdentityReport report;
  report.identity_id = id;
  report.lhs = lhs;
  report.truncation = policy;
  report.notes = notes;

  int best = -1;
  for (const Candidate& cand : candidates) {
    VariantOutcome out;
    out.name = cand.name;
    out.formula = cand.formula;
    out.rhs = cand.rhs;
    out.abs_diff = std::abs(lhs - cand.rhs);
    const double scale = std::max(std::abs(lhs), std::abs(cand.rhs));
    out.rel_diff = scale > 0.0 ? out.abs_diff / scale : 0.0;
    const bool matched = out.rel_diff <= tol || out.abs_diff <= kIdentityAbsFloor;
    if (matched) {
      out.status = IdentityStatus::match;
    } else if (cand.inconclusive) {
      out.status = IdentityStatus::inconclusive;
    } else {
      out.status = IdentityStatus::mismatch;
    }
    report.variants.push_back(out);
    const size_t i = report.variants.size() - 1;
    if (best < 0 || report.variants[static_cast<size_t>(best)].abs_diff > out.abs_diff) {
      best = static_cast<int>(i);
    }
  }

  report.status = IdentityStatus::mismatch;
  for (const VariantOutcome& v : report.variants) {
    if (v.status == IdentityStatus::match) {
      report.status = IdentityStatus::match;
      report.matched_variant = v.name;
      report.rhs = v.rhs;
      report.abs_diff = v.abs_diff;
      report.rel_diff = v.rel_diff;
      break;
    }
  }
  if (report.status != IdentityStatus::match) {
    if (best >= 0) {
      const VariantOutcome& v = report.variants[static_cast<size_t>(best)];
      report.rhs = v.rhs;
      report.abs_diff = v.abs_diff;
      report.rel_diff = v.rel_diff;
    }
    for (const VariantOutcome& v : report.variants) {
      if (v.status == IdentityStatus::inconclusive) {
        report.status = IdentityStatus::inconclusive;
        break;
      }
    }
  }
  return report;
}

}  // namespace

std::string to_string(IdentityStatus status) {
  switch (status) {
    case IdentityStatus::match: return "match";
    case IdentityStatus::mismatch: return "mismatch";
    case IdentityStatus::inconclusive: return "inconclusive";
  }
  return "unknown";
}

DuplicationIndexMap DuplicationIndexMap::from(int m, int n, int p, int q, int s,
                                              int k, int r, int l, int h, int t) {
  DuplicationIndexMap map;
  map.M = m + n + p + q + s + k + r + l + h + t;
  map.N = 2L * (m + n + q + s + r + h) + k + l + t;
  map.P = 2L * p + k + l + t;
  map.Q1 = 2L * m + s + k + r;
  map.Q2 = 2L * n + s + l + h;
  map.Q3 = 2L * p + k + l + t;
  map.Q4 = 2L * q + r + h + t;
  return map;
}

IdentityReport verify_3_10(int n, double b, double c, double e1, double e2,
                           double e3, double e4, const Point4& point,
                           const TruncationPolicy& policy) {
  if (n < 0) throw DomainError("verify_3_10: n must be nonnegative");
  if (point.x == 0.0) throw DomainError("verify_3_10: x must be nonzero");

  TruncationPolicy eff = policy;
  eff.max_total_degree = std::max(policy.max_total_degree, n + 2);

  // LHS: alternating sum of terminating K2 values (a = -r).
  Kbn lhs;
  for (int r = 0; r <= n; ++r) {
    K2Params params{static_cast<double>(-r), b, c, e1, e2, e3, e4};
    const double value = k2_eval(params, point, eff).value;
    lhs.add((r % 2 == 0 ? 1.0 : -1.0) * binom(n, r) * value);
  }

  const double pref = checked_coefficient(pochhammer(b, n), pochhammer(e1, n));
  const double u1 = point.y / point.x;
  const double u2 = point.z / point.x;
  const double u3 = point.t / point.x;
  const double xn = int_pow(point.x, n);

  const double f3 = srivastava_f3_shape(n, e1, c, e2, e3, e4, u1, u2, u3, eff).value;

  // Fully derived triple sum: extra lower parameter (1-b-n)_k and signed
  // second argument -z/x.
  Kbn derived;
  for (int s = 0; s <= n; ++s) {
    for (int j = 0; j <= s; ++j) {
      for (int k = 0; k + j <= s; ++k) {
        const int l = s - j - k;
        const double num = pochhammer(-n, s) * pochhammer(1.0 - e1 - n, s) * pochhammer(c, k);
        const double den = pochhammer(1.0 - b - n, k) * pochhammer(e2, j) *
                           pochhammer(e3, k) * pochhammer(e4, l);
        const double coeff = checked_coefficient(num, den);
        if (coeff == 0.0) continue;
        derived.add(coeff * int_pow(u1, j) * int_pow(-u2, k) * int_pow(u3, l) /
                    (factorial(j) * factorial(k) * factorial(l)));
      }
    }
  }

  std::vector<Candidate> candidates;
  candidates.push_back({"printed", "(b)_n/(e1)_n * F3[y/x, z/x, u/x]", pref * f3, false});
  candidates.push_back({"printed-xn", "x^n * (b)_n/(e1)_n * F3[y/x, z/x, u/x]",
                        xn * pref * f3, false});
  candidates.push_back({"derived",
                        "x^n * (b)_n/(e1)_n * sum (-n)_s(1-e1-n)_s(c)_k / "
                        "((1-b-n)_k (e2)_j (e3)_k (e4)_l) (y/x)^j (-z/x)^k (u/x)^l / (j!k!l!)",
                        xn * pref * derived.total(), false});

  return assemble("3.10", lhs.total(), candidates, eff, kIdentityTolExact,
                  "LHS and all variants are exact finite sums (a = -r terminates)");
}

IdentityReport verify_3_11(int n, int m, double a, double e1, double e2,
                           double e3, double e4, const Point4& point,
                           const TruncationPolicy& policy) {
  if (n < 0 || m < 0) throw DomainError("verify_3_11: n, m must be nonnegative");
  if (point.x == 0.0) throw DomainError("verify_3_11: x must be nonzero");

  TruncationPolicy eff = policy;
  eff.max_total_degree = std::max(policy.max_total_degree, n + m + 2);

  // LHS: doubly alternating sum of K2 values terminating in the b and c slots.
  Kbn lhs;
  for (int r = 0; r <= n; ++r) {
    for (int s = 0; s <= m; ++s) {
      K2Params params{a, static_cast<double>(-r), static_cast<double>(-s),
                      e1, e2, e3, e4};
      const double value = k2_eval(params, point, eff).value;
      lhs.add(((r + s) % 2 == 0 ? 1.0 : -1.0) * binom(n, r) * binom(m, s) * value);
    }
  }

  const double base = checked_coefficient(
      pochhammer(a, m + n), pochhammer(e1, n) * pochhammer(e3, m));
  const double f4 = appell_f4(-n, 1.0 - e1 - n, e2, e4, point.y / point.x,
                              point.t / point.x, eff).value;
  const double xn = int_pow(point.x, n);
  const double zm = int_pow(point.z, m);

  std::vector<Candidate> candidates;
  const std::string core = "(a)_{m+n}/((e1)_n (e3)_m) * F4[-n, 1-e1-n; e2, e4; y/x, u/x]";
  candidates.push_back({"printed", core, base * f4, false});
  candidates.push_back({"xn", "x^n * " + core, xn * base * f4, false});
  candidates.push_back({"zm", "z^m * " + core, zm * base * f4, false});
  candidates.push_back({"xn-zm", "x^n z^m * " + core, xn * zm * base * f4, false});

  return assemble("3.11", lhs.total(), candidates, eff, kIdentityTolExact,
                  "LHS terminates (b = -r, c = -s); F4 terminates (first parameter -n); "
                  "all quantities are exact finite sums");
}

IdentityReport verify_3_12(double a, double b, double e1, double e2, double e3,
                           double e4, const Point4& point,
                           const TruncationPolicy& policy, int outer_bound) {
  if (outer_bound < 0) throw DomainError("verify_3_12: negative outer bound");

  const K2Params lhs_params{a, b, b, e1, e2, e3, e4};  // c = b
  const SeriesValue lhs = k2_eval(lhs_params, point, policy);

  Kbn printed, shifted, shifted_nomult;
  bool any_divergence = lhs.divergence_warning;

  for (int S = 0; S <= outer_bound; ++S) {
    for (int s = 0; s <= S; ++s) {
      for (int k = 0; k + s <= S; ++k) {
        const int r = S - s - k;
        const double num = pochhammer(a, 2 * S) * pochhammer(b, S);
        const double den = pochhammer(e1, s) * pochhammer(e2, k) *
                           pochhammer(e3, S) * pochhammer(e4, r);
        const double outer = checked_coefficient(num, den);
        if (outer == 0.0) continue;
        const double monom = int_pow(-point.x * point.z, s) *
                             int_pow(-point.y * point.z, k) *
                             int_pow(-point.t * point.z, r);
        if (monom == 0.0 && S > 0) continue;

        const SeriesValue inner_printed = lauricella_fc4(
            a + 2 * S, b + S, e1, e2, e3, e4, point, policy);
        const SeriesValue inner_shifted = lauricella_fc4(
            a + 2 * S, b + S, e1 + s, e2 + k, e3 + S, e4 + r, point, policy);
        any_divergence = any_divergence || inner_printed.divergence_warning ||
                         inner_shifted.divergence_warning;

        printed.add(outer * monom * inner_printed.value);
        const double mult = factorial(s) * factorial(k) * factorial(r);
        shifted.add(outer * monom / mult * inner_shifted.value);
        shifted_nomult.add(outer * monom * inner_shifted.value);
      }
    }
  }

  std::vector<Candidate> candidates;
  candidates.push_back({"printed",
                        "sum (a)_{2S}(b)_S/((e1)_s(e2)_k(e3)_S(e4)_r) (-xz)^s(-yz)^k(-uz)^r "
                        "* FC4[a+2S, b+S; e1, e2, e3, e4; x,y,z,u]",
                        printed.total(), any_divergence});
  candidates.push_back({"shifted",
                        "sum (a)_{2S}(b)_S/((e1)_s(e2)_k(e3)_S(e4)_r) (-xz)^s(-yz)^k(-uz)^r "
                        "/ (s!k!r!) * FC4[a+2S, b+S; e1+s, e2+k, e3+S, e4+r; x,y,z,u]",
                        shifted.total(), any_divergence});
  candidates.push_back({"shifted-no-multinomial",
                        "as 'shifted' but without the 1/(s!k!r!) weight",
                        shifted_nomult.total(), any_divergence});

  return assemble(
      "3.12", lhs.value, candidates, policy, kIdentityTolTruncated,
      "LHS is K2 with c = b; S = s+k+r; outer sum truncated at s+k+r <= " +
          std::to_string(outer_bound));
}

IdentityReport verify_3_13(double a, double b, double c, double e1, double e2,
                           double e3, double e4, const Point4& point,
                           const TruncationPolicy& policy, int total_bound) {
  if (total_bound < 0) throw DomainError("verify_3_13: negative total bound");

  const K2Params lhs_params{2.0 * a, b, c, e1, e2, e3, e4};
  const SeriesValue lhs = k2_eval(lhs_params, point, policy);

  const Point4 doubled{2.0 * point.x, 2.0 * point.y, 2.0 * point.z, 2.0 * point.t};

  Kbn printed_cn, printed_cp, derived, derived_cn;
  bool any_divergence = lhs.divergence_warning;

  // Ten summation indices (m,n,p,q,s,k,r,l,h,t) with total <= total_bound,
  // enumerated in lexicographic order within each total-degree shell.
  int idx[10];
  const auto visit = [&](auto&& self, int pos, int budget) -> void {
    if (pos == 10) {
      const int m = idx[0], n = idx[1], p = idx[2], q = idx[3], s = idx[4],
                k = idx[5], r = idx[6], l = idx[7], h = idx[8], t = idx[9];
      const auto map = DuplicationIndexMap::from(m, n, p, q, s, k, r, l, h, t);
      const double num = pochhammer(a, static_cast<int>(map.M)) *
                         pochhammer(b, static_cast<int>(map.N)) *
                         pochhammer(c, static_cast<int>(map.P));
      const double den = pochhammer(e1, static_cast<int>(map.Q1)) *
                         pochhammer(e2, static_cast<int>(map.Q2)) *
                         pochhammer(e3, static_cast<int>(map.Q3)) *
                         pochhammer(e4, static_cast<int>(map.Q4));
      const double outer = checked_coefficient(num, den);
      if (outer == 0.0) return;
      const double monom = int_pow(point.x, 2 * m) * int_pow(point.y, 2 * n) *
                           int_pow(point.z, 2 * p) * int_pow(point.t, 2 * q) *
                           int_pow(2.0 * point.x * point.y, s) *
                           int_pow(2.0 * point.x * point.z, k) *
                           int_pow(2.0 * point.x * point.t, r) *
                           int_pow(2.0 * point.y * point.z, l) *
                           int_pow(2.0 * point.y * point.t, h) *
                           int_pow(2.0 * point.z * point.t, t);
      if (monom == 0.0 && map.M > 0) return;

      const K2Params inner_cn{a + map.M, b + map.N, c + map.N,
                              e1 + map.Q1, e2 + map.Q2, e3 + map.Q3, e4 + map.Q4};
      const K2Params inner_cp{a + map.M, b + map.N, c + map.P,
                              e1 + map.Q1, e2 + map.Q2, e3 + map.Q3, e4 + map.Q4};

      const SeriesValue v_cn = k2_eval(inner_cn, point, policy);
      const SeriesValue v_cp = k2_eval(inner_cp, point, policy);
      const SeriesValue v_cp2 = k2_eval(inner_cp, doubled, policy);
      const SeriesValue v_cn2 = k2_eval(inner_cn, doubled, policy);
      any_divergence = any_divergence || v_cn.divergence_warning ||
                       v_cp.divergence_warning || v_cp2.divergence_warning ||
                       v_cn2.divergence_warning;

      printed_cn.add(outer * monom * v_cn.value);
      printed_cp.add(outer * monom * v_cp.value);

      const double mult = factorial(m) * factorial(n) * factorial(p) *
                          factorial(q) * factorial(s) * factorial(k) *
                          factorial(r) * factorial(l) * factorial(h) * factorial(t);
      const double sign = (map.M % 2 == 0) ? 1.0 : -1.0;
      derived.add(sign * outer * monom / mult * v_cp2.value);
      derived_cn.add(sign * outer * monom / mult * v_cn2.value);
      return;
    }
    for (int v = 0; v <= budget; ++v) {
      idx[pos] = v;
      self(self, pos + 1, budget - v);
    }
    idx[pos] = 0;
  };
  visit(visit, 0, total_bound);

  std::vector<Candidate> candidates;
  candidates.push_back({"printed-cN",
                        "ten-index sum, printed term (no sign, no multinomial), inner "
                        "K2[a+M, b+N, c+N; e+Q; x,y,z,u]",
                        printed_cn.total(), any_divergence});
  candidates.push_back({"printed-cP",
                        "printed term with inner c+P instead of c+N",
                        printed_cp.total(), any_divergence});
  candidates.push_back({"derived",
                        "(-1)^M sign, 1/(m!...t!) multinomial, inner "
                        "K2[a+M, b+N, c+P; e+Q; 2x,2y,2z,2u]",
                        derived.total(), any_divergence});
  candidates.push_back({"derived-cN",
                        "as 'derived' but with inner c+N",
                        derived_cn.total(), any_divergence});

  return assemble(
      "3.13", lhs.value, candidates, policy, kIdentityTolTruncated,
      "LHS is K2 with doubled first parameter 2a; ten-index sum truncated at "
      "total <= " + std::to_string(total_bound) +
      "; index map M,N,P,Q per (3.14)");
}

IdentityReport verify_3_13(double a, double b, double e1, double e2, double e3,
                           double e4, const Point4& point,
                           const TruncationPolicy& policy, int total_bound) {
  return verify_3_13(a, b, b, e1, e2, e3, e4, point, policy, total_bound);
}

}  // namespace exton
