#include "exton/pde_system.hpp"

#include <Eigen/Dense>
#include <Eigen/SVD>

#include <cmath>
#include <sstream>

namespace exton {

namespace {

// Slot masks for the sixteen solutions, bit i set <=> exponent 1-e_{i+1} in
// slot i (x, y, z, t). Order: popcount ascending, combinations lexicographic.
constexpr unsigned kSolutionMasks[16] = {
    0b0000,                           // 1
    0b1000, 0b0100, 0b0010, 0b0001,   // 2..5
    0b1100, 0b1010, 0b1001,           // 6..8
    0b0110, 0b0101, 0b0011,           // 9..11
    0b1110, 0b1101, 0b1011, 0b0111,   // 12..15
    0b1111,                           // 16
};

bool is_integral(double v) { return std::isfinite(v) && v == std::nearbyint(v); }

// v^eps with the Frobenius-prefactor conventions: fractional powers require
// v > 0; integer powers allow negative v; zero base allows only nonnegative
// integer exponents.
double checked_power(double v, double eps) {
  if (eps == 0.0) return 1.0;
  if (v > 0.0) return std::pow(v, eps);
  if (!is_integral(eps)) {
    throw DomainError(v == 0.0 ? "checked_power: fractional power of zero"
                               : "checked_power: fractional power of a negative coordinate");
  }
  if (v == 0.0) {
    if (eps > 0.0) return 0.0;
    throw DomainError("checked_power: negative power of zero");
  }
  return std::pow(v, eps);
}

// Falling factorial eps*(eps-1)*...*(eps-r+1).
double falling(double eps, int r) {
  double out = 1.0;
  for (int i = 0; i < r; ++i) out *= (eps - i);
  return out;
}

double small_binom(int n, int k) {
  if (k < 0 || k > n) return 0.0;
  double out = 1.0;
  for (int i = 0; i < k; ++i) out = out * (n - i) / (i + 1);
  return out;
}

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

}  // namespace

double ExponentQuadruple::operator[](int i) const {
  switch (i) {
    case 0: return alpha;
    case 1: return beta;
    case 2: return gamma;
    case 3: return delta;
    default: throw DomainError("ExponentQuadruple::operator[]: index out of range");
  }
}

IndicialRoots indicial_roots(const K2Params& params) {
  IndicialRoots out;
  const double e[4] = {params.e1, params.e2, params.e3, params.e4};
  for (int i = 0; i < 4; ++i) {
    out.roots[static_cast<size_t>(i)] = {0.0, 1.0 - e[i]};
    out.degenerate[static_cast<size_t>(i)] = (e[i] == 1.0);
  }
  return out;
}

std::array<ExponentQuadruple, 16> exponent_table(const K2Params& params) {
  std::array<ExponentQuadruple, 16> out;
  const double shift[4] = {1.0 - params.e1, 1.0 - params.e2, 1.0 - params.e3,
                           1.0 - params.e4};
  for (int j = 0; j < 16; ++j) {
    const unsigned mask = kSolutionMasks[j];
    ExponentQuadruple q;
    q.alpha = (mask & 0b1000) ? shift[0] : 0.0;
    q.beta = (mask & 0b0100) ? shift[1] : 0.0;
    q.gamma = (mask & 0b0010) ? shift[2] : 0.0;
    q.delta = (mask & 0b0001) ? shift[3] : 0.0;
    out[static_cast<size_t>(j)] = q;
  }
  return out;
}

K2Params TransformedParams::as_k2params() const {
  K2Params p;
  p.a = A;
  p.b = B;
  p.c = C;
  p.e1 = E1;
  p.e2 = E2;
  p.e3 = E3;
  p.e4 = E4;
  return p;
}

TransformedParams transformed_params(const ExponentQuadruple& exps, const K2Params& params) {
  TransformedParams t;
  t.A = exps.alpha + exps.beta + exps.gamma + exps.delta + params.a;
  t.B = exps.alpha + exps.beta + exps.delta + params.b;
  t.C = exps.gamma + params.c;
  t.E1 = 2.0 * exps.alpha + params.e1;
  t.E2 = 2.0 * exps.beta + params.e2;
  t.E3 = 2.0 * exps.gamma + params.e3;
  t.E4 = 2.0 * exps.delta + params.e4;
  return t;
}

SolutionSpec solution_spec(int j, const K2Params& params) {
  if (j < 1 || j > 16) throw DomainError("solution_spec: index must be 1..16");
  SolutionSpec spec;
  spec.index = j;
  spec.exponents = exponent_table(params)[static_cast<size_t>(j - 1)];
  spec.shifted = transformed_params(spec.exponents, params).as_k2params();
  return spec;
}

SeriesValue solution_value(int j, const K2Params& params, const Point4& point,
                           const TruncationPolicy& policy) {
  const SolutionSpec spec = solution_spec(j, params);
  double pref = 1.0;
  for (int i = 0; i < 4; ++i) pref *= checked_power(point[i], spec.exponents[i]);
  SeriesValue out = k2_eval(spec.shifted, point, policy);
  out.value *= pref;
  out.tail_estimate *= std::abs(pref);
  return out;
}

PartialProvider k2_partial_provider(const K2Params& params, const Point4& point,
                                    const TruncationPolicy& policy) {
  return [params, point, policy](const MultiIndex4& orders) {
    return k2_mixed_partial(params, point, orders, policy).value;
  };
}

PartialProvider solution_partial_provider(int j, const K2Params& params,
                                          const Point4& point,
                                          const TruncationPolicy& policy) {
  const SolutionSpec spec = solution_spec(j, params);
  return [spec, point, policy](const MultiIndex4& orders) {
    const int o[4] = {orders.m, orders.n, orders.p, orders.q};
    const double eps[4] = {spec.exponents.alpha, spec.exponents.beta,
                           spec.exponents.gamma, spec.exponents.delta};
    Kbn acc;
    // Leibniz: split each coordinate's derivative order between the monomial
    // prefactor and the K2 factor.
    int r[4];
    for (r[0] = 0; r[0] <= o[0]; ++r[0])
      for (r[1] = 0; r[1] <= o[1]; ++r[1])
        for (r[2] = 0; r[2] <= o[2]; ++r[2])
          for (r[3] = 0; r[3] <= o[3]; ++r[3]) {
            double factor = 1.0;
            for (int i = 0; i < 4; ++i) {
              const double fall = falling(eps[i], r[i]);
              if (fall == 0.0) {
                factor = 0.0;
                break;
              }
              factor *= small_binom(o[i], r[i]) * fall *
                        checked_power(point[i], eps[i] - r[i]);
            }
            if (factor == 0.0) continue;
            const MultiIndex4 rest{o[0] - r[0], o[1] - r[1], o[2] - r[2], o[3] - r[3]};
            acc.add(factor * k2_mixed_partial(spec.shifted, point, rest, policy).value);
          }
    return acc.total();
  };
}

PartialProvider constant_partial_provider(double value) {
  return [value](const MultiIndex4& orders) {
    return orders.total() == 0 ? value : 0.0;
  };
}

double pde_residual_2nd(int eq, const PartialProvider& u, const K2Params& params,
                        const Point4& point) {
  const double x = point.x, y = point.y, z = point.z, t = point.t;
  const double a = params.a, b = params.b, c = params.c;

  const double u0 = u(MultiIndex4{0, 0, 0, 0});
  const double ux = u(MultiIndex4{1, 0, 0, 0});
  const double uy = u(MultiIndex4{0, 1, 0, 0});
  const double uz = u(MultiIndex4{0, 0, 1, 0});
  const double ut = u(MultiIndex4{0, 0, 0, 1});
  const double uxx = u(MultiIndex4{2, 0, 0, 0});
  const double uyy = u(MultiIndex4{0, 2, 0, 0});
  const double uzz = u(MultiIndex4{0, 0, 2, 0});
  const double utt = u(MultiIndex4{0, 0, 0, 2});
  const double uxy = u(MultiIndex4{1, 1, 0, 0});
  const double uxz = u(MultiIndex4{1, 0, 1, 0});
  const double uxt = u(MultiIndex4{1, 0, 0, 1});
  const double uyz = u(MultiIndex4{0, 1, 1, 0});
  const double uyt = u(MultiIndex4{0, 1, 0, 1});
  const double uzt = u(MultiIndex4{0, 0, 1, 1});

  const double s = a + b + 1.0;
  Kbn acc;
  switch (eq) {
    case 1:
      acc.add(x * (1.0 - x) * uxx);
      acc.add(-y * y * uyy);
      acc.add(-t * t * utt);
      acc.add(-2.0 * x * y * uxy);
      acc.add(-x * z * uxz);
      acc.add(-2.0 * x * t * uxt);
      acc.add(-y * z * uyz);
      acc.add(-2.0 * y * t * uyt);
      acc.add(-z * t * uzt);
      acc.add((params.e1 - s * x) * ux);
      acc.add(-s * y * uy);
      acc.add(-b * z * uz);
      acc.add(-s * t * ut);
      acc.add(-a * b * u0);
      break;
    case 2:
      acc.add(y * (1.0 - y) * uyy);
      acc.add(-x * x * uxx);
      acc.add(-t * t * utt);
      acc.add(-2.0 * x * y * uxy);
      acc.add(-x * z * uxz);
      acc.add(-2.0 * x * t * uxt);
      acc.add(-y * z * uyz);
      acc.add(-2.0 * y * t * uyt);
      acc.add(-z * t * uzt);
      acc.add(-s * x * ux);
      acc.add((params.e2 - s * y) * uy);
      acc.add(-b * z * uz);
      acc.add(-s * t * ut);
      acc.add(-a * b * u0);
      break;
    case 3:
      acc.add(z * (1.0 - z) * uzz);
      acc.add(-x * z * uxz);
      acc.add(-y * z * uyz);
      acc.add(-z * t * uzt);
      acc.add(-c * x * ux);
      acc.add(-c * y * uy);
      acc.add((params.e3 - (a + c + 1.0) * z) * uz);
      acc.add(-c * t * ut);
      acc.add(-a * c * u0);
      break;
    case 4:
      acc.add(t * (1.0 - t) * utt);
      acc.add(-x * x * uxx);
      acc.add(-y * y * uyy);
      acc.add(-2.0 * x * y * uxy);
      acc.add(-x * z * uxz);
      acc.add(-2.0 * x * t * uxt);
      acc.add(-y * z * uyz);
      acc.add(-2.0 * y * t * uyt);
      acc.add(-z * t * uzt);
      acc.add(-s * x * ux);
      acc.add(-s * y * uy);
      acc.add(-b * z * uz);
      acc.add((params.e4 - s * t) * ut);
      acc.add(-a * b * u0);
      break;
    default:
      throw DomainError("pde_residual: equation index must be 1..4");
  }
  return acc.total();
}

double coefficient_recurrence_check(int eq, const K2Params& params, int bound) {
  return coefficient_recurrence_check(eq, params, bound, k2_rule(params));
}

double coefficient_recurrence_check(int eq, const K2Params& params, int bound,
                                    const CoefficientRule& rule) {
  if (eq < 1 || eq > 4) throw DomainError("coefficient_recurrence_check: equation index must be 1..4");
  if (bound < 0) throw DomainError("coefficient_recurrence_check: negative bound");

  // Full term coefficient T(idx) = Delta(idx) / (m! n! p! q!).
  const auto term_coeff = [&rule](const MultiIndex4& idx) {
    double f = 1.0;
    for (int i = 2; i <= idx.m; ++i) f *= i;
    for (int i = 2; i <= idx.n; ++i) f *= i;
    for (int i = 2; i <= idx.p; ++i) f *= i;
    for (int i = 2; i <= idx.q; ++i) f *= i;
    return rule(idx) / f;
  };

  double worst = 0.0;
  for (int s = 0; s <= bound; ++s) {
    for (int m = 0; m <= s; ++m) {
      for (int n = 0; n + m <= s; ++n) {
        for (int p = 0; p + n + m <= s; ++p) {
          const int q = s - m - n - p;
          const MultiIndex4 idx{m, n, p, q};
          const double T = term_coeff(idx);
          const int tot = idx.total();
          double lhs = 0.0, rhs = 0.0;
          switch (eq) {
            case 1:
              lhs = (params.e1 + m) * (m + 1) * term_coeff(MultiIndex4{m + 1, n, p, q});
              rhs = (params.a + tot) * (params.b + m + n + q) * T;
              break;
            case 2:
              lhs = (params.e2 + n) * (n + 1) * term_coeff(MultiIndex4{m, n + 1, p, q});
              rhs = (params.a + tot) * (params.b + m + n + q) * T;
              break;
            case 3:
              lhs = (params.e3 + p) * (p + 1) * term_coeff(MultiIndex4{m, n, p + 1, q});
              rhs = (params.a + tot) * (params.c + p) * T;
              break;
            case 4:
              lhs = (params.e4 + q) * (q + 1) * term_coeff(MultiIndex4{m, n, p, q + 1});
              rhs = (params.a + tot) * (params.b + m + n + q) * T;
              break;
            default:
              break;
          }
          const double scale = std::max(std::abs(lhs), std::abs(rhs));
          if (scale > 0.0) worst = std::max(worst, std::abs(lhs - rhs) / scale);
        }
      }
    }
  }
  return worst;
}

double global_solution(const GlobalSolutionCoeffs& coeffs, const K2Params& params,
                       const Point4& point, const TruncationPolicy& policy) {
  Kbn acc;
  for (int j = 1; j <= 16; ++j) {
    const double k = coeffs.k[static_cast<size_t>(j - 1)];
    if (k == 0.0) continue;
    acc.add(k * solution_value(j, params, point, policy).value);
  }
  return acc.total();
}

IndependenceDiagnostic independence_check(const K2Params& params,
                                          const std::vector<Point4>& points,
                                          const TruncationPolicy& policy,
                                          double rank_tol) {
  if (points.size() != 16) {
    throw DomainError("independence_check: exactly 16 sample points required");
  }
  IndependenceDiagnostic diag;

  const double e[4] = {params.e1, params.e2, params.e3, params.e4};
  const char* names[4] = {"e1", "e2", "e3", "e4"};
  for (int i = 0; i < 4; ++i) {
    if (is_integral(e[i])) {
      std::ostringstream os;
      os << "degenerate parameter: " << names[i] << " = " << e[i]
         << " is an integer, so exponents 0 and 1-" << names[i]
         << " differ by an integer";
      diag.warnings.push_back(os.str());
    }
  }
  for (int i = 0; i < 4; ++i) {
    for (int j = i + 1; j < 4; ++j) {
      if (is_integral(e[i] - e[j])) {
        std::ostringstream os;
        os << "non-generic parameters: " << names[i] << " - " << names[j]
           << " is an integer";
        diag.warnings.push_back(os.str());
      }
    }
  }
  for (int i = 0; i < 4; ++i) {
    if (std::abs(1.0 - e[i]) >= 1.0) {
      std::ostringstream os;
      os << "large prefactor exponent |1-" << names[i] << "| = "
         << std::abs(1.0 - e[i])
         << ": the sampled power basis is ill-conditioned on a small window, "
            "so a low singular-value ratio may reflect conditioning rather "
            "than dependence";
      diag.warnings.push_back(os.str());
    }
  }

  Eigen::MatrixXd M(16, 16);
  for (int r = 0; r < 16; ++r) {
    for (int j = 0; j < 16; ++j) {
      M(r, j) = solution_value(j + 1, params, points[static_cast<size_t>(r)], policy).value;
    }
  }

  // Column equilibration: the prefactor powers make the columns span many
  // orders of magnitude (x^{1-e} is huge for e > 1 at small x), which would
  // drown the rank information in pure scaling. Normalizing each column makes
  // the singular-value ratio a scale-invariant dependence measure; a zero
  // column is left in place and shows up as a zero singular value.
  for (int j = 0; j < 16; ++j) {
    const double norm = M.col(j).norm();
    if (norm > 0.0) M.col(j) /= norm;
  }

  Eigen::JacobiSVD<Eigen::MatrixXd> svd(M);
  const auto& sv = svd.singularValues();
  diag.largest_singular = sv(0);
  diag.smallest_singular = sv(sv.size() - 1);
  diag.full_rank = diag.largest_singular > 0.0 &&
                   diag.smallest_singular > rank_tol * diag.largest_singular;
  return diag;
}

// ---------------------------------------------------------------------------
// Symbolic layer.

double ParamExpr::eval(const K2Params& params) const {
  return constant + ca * params.a + cb * params.b + cc * params.c +
         ce[0] * params.e1 + ce[1] * params.e2 + ce[2] * params.e3 + ce[3] * params.e4;
}

std::string ParamExpr::str() const {
  std::ostringstream os;
  bool first = true;
  const auto emit = [&os, &first](int coeff, const std::string& sym) {
    if (coeff == 0) return;
    if (first) {
      if (coeff < 0) os << "-";
      first = false;
    } else {
      os << (coeff < 0 ? " - " : " + ");
    }
    const int mag = std::abs(coeff);
    if (sym.empty()) {
      os << mag;
    } else {
      if (mag != 1) os << mag << "*";
      os << sym;
    }
  };
  emit(constant, "");
  emit(ca, "a");
  emit(cb, "b");
  emit(cc, "c");
  emit(ce[0], "e1");
  emit(ce[1], "e2");
  emit(ce[2], "e3");
  emit(ce[3], "e4");
  if (first) os << "0";
  return os.str();
}

ParamExpr sym_const(int v) {
  ParamExpr e;
  e.constant = v;
  return e;
}
ParamExpr sym_a() {
  ParamExpr e;
  e.ca = 1;
  return e;
}
ParamExpr sym_b() {
  ParamExpr e;
  e.cb = 1;
  return e;
}
ParamExpr sym_c() {
  ParamExpr e;
  e.cc = 1;
  return e;
}
ParamExpr sym_e(int slot) {
  if (slot < 1 || slot > 4) throw DomainError("sym_e: slot must be 1..4");
  ParamExpr e;
  e.ce[static_cast<size_t>(slot - 1)] = 1;
  return e;
}

ParamExpr operator+(ParamExpr lhs, const ParamExpr& rhs) {
  lhs.constant += rhs.constant;
  lhs.ca += rhs.ca;
  lhs.cb += rhs.cb;
  lhs.cc += rhs.cc;
  for (int i = 0; i < 4; ++i) lhs.ce[static_cast<size_t>(i)] += rhs.ce[static_cast<size_t>(i)];
  return lhs;
}

ParamExpr operator-(ParamExpr lhs, const ParamExpr& rhs) {
  lhs.constant -= rhs.constant;
  lhs.ca -= rhs.ca;
  lhs.cb -= rhs.cb;
  lhs.cc -= rhs.cc;
  for (int i = 0; i < 4; ++i) lhs.ce[static_cast<size_t>(i)] -= rhs.ce[static_cast<size_t>(i)];
  return lhs;
}

ParamExpr operator*(int k, ParamExpr rhs) {
  rhs.constant *= k;
  rhs.ca *= k;
  rhs.cb *= k;
  rhs.cc *= k;
  for (int i = 0; i < 4; ++i) rhs.ce[static_cast<size_t>(i)] *= k;
  return rhs;
}

SymbolicParamList derived_symbolic_params(int j) {
  if (j < 1 || j > 16) throw DomainError("derived_symbolic_params: index must be 1..16");
  const unsigned mask = kSolutionMasks[j - 1];
  // Exponent in slot i: either 0 or 1 - e_{i+1}.
  std::array<ParamExpr, 4> exps;
  for (int i = 0; i < 4; ++i) {
    exps[static_cast<size_t>(i)] = (mask & (0b1000u >> i))
                                       ? sym_const(1) - sym_e(i + 1)
                                       : sym_const(0);
  }
  SymbolicParamList out;
  out[0] = exps[0] + exps[1] + exps[2] + exps[3] + sym_a();  // A
  out[1] = exps[0] + exps[1] + exps[3] + sym_b();            // B
  out[2] = exps[2] + sym_c();                                // C
  for (int i = 0; i < 4; ++i) {
    out[static_cast<size_t>(3 + i)] = 2 * exps[static_cast<size_t>(i)] + sym_e(i + 1);
  }
  return out;
}

SymbolicParamList printed_symbolic_params(int j) {
  const auto C = sym_const;
  const auto A = sym_a(), B = sym_b(), Cc = sym_c();
  const auto E1 = sym_e(1), E2 = sym_e(2), E3 = sym_e(3), E4 = sym_e(4);
  switch (j) {
    case 1:
      return {A, B, Cc, E1, E2, E3, E4};
    case 2:
      return {C(1) - E1 + A, C(1) - E1 + B, Cc, C(2) - E1, E2, E3, E4};
    case 3:
      return {C(1) - E2 + A, C(1) - E2 + B, Cc, E1, C(2) - E2, E3, E4};
    case 4:
      return {C(1) - E3 + A, B, C(1) - E3 + Cc, E1, E2, C(2) - E3, E4};
    case 5:
      return {C(1) - E4 + A, C(1) - E4 + B, Cc, E1, E2, E3, C(2) - E4};
    case 6:
      return {C(2) - E1 - E2 + A, C(2) - E1 - E2 + B, Cc, C(2) - E1, C(2) - E2, E3, E4};
    case 7:
      return {C(2) - E1 - E3 + A, C(1) - E1 + B, C(1) - E3 + Cc, C(2) - E1, E2, C(2) - E3, E4};
    case 8:
      return {C(2) - E1 - E4 + A, C(2) - E1 - E4 + B, Cc, C(2) - E1, E2, E3, C(2) - E4};
    case 9:
      return {C(2) - E2 - E3 + A, C(1) - E2 + B, C(1) - E3 + Cc, E1, C(2) - E2, C(2) - E3, E4};
    case 10:
      return {C(2) - E2 - E4 + A, C(2) - E2 - E4 + B, Cc, E1, C(2) - E2, E3, C(2) - E4};
    case 11:
      return {C(2) - E3 - E4 + A, C(1) - E4 + B, C(1) - E3 + Cc, E1, E2, C(2) - E3, C(2) - E4};
    case 12:
      return {C(3) - E1 - E2 - E3 + A, C(2) - E1 - E2 + B, C(1) - E3 + Cc,
              C(2) - E1, C(2) - E2, C(2) - E3, E4};
    case 13:
      return {C(3) - E1 - E2 - E4 + A, C(3) - E1 - E2 - E4 + B, Cc,
              C(2) - E1, C(2) - E2, E3, C(2) - E4};
    case 14:
      return {C(3) - E1 - E3 - E4 + A, C(2) - E1 - E4 + B, C(1) - E3 + Cc,
              C(2) - E1, E2, C(2) - E3, C(2) - E4};
    case 15:
      return {C(3) - E2 - E3 - E4 + A, C(2) - E2 - E4 + B, C(1) - E3 + Cc,
              E1, C(2) - E2, C(2) - E3, C(2) - E4};
    case 16:
      return {C(4) - E1 - E2 - E3 - E4 + A, C(3) - E1 - E2 - E4 + B, C(1) - E3 + Cc,
              C(2) - E1, C(2) - E2, C(2) - E3, C(2) - E4};
    default:
      throw DomainError("printed_symbolic_params: index must be 1..16");
  }
}

}  // namespace exton
