#pragma once

#include <array>
#include <cstdint>
#include <functional>
#include <stdexcept>
#include <string>

// Truncated-series evaluation of the Exton K2 quadruple hypergeometric
// function and the auxiliary families (2F1, Appell F4, the terminating
// triple series of Srivastava type, Lauricella FC), plus exact
// parameter-shift derivatives of K2.

namespace exton {

/// A denominator Pochhammer factor vanished against a nonzero numerator.
class PoleError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Evaluation request violates a hard precondition (fractional power of a
/// nonpositive coordinate, malformed input, ...).
class DomainError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// A verification could not be decided either way.
class InconclusiveError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// The seven parameters (a, b, c; e1..e4) of the K2 series.
struct K2Params {
  double a = 0.0;
  double b = 0.0;
  double c = 0.0;
  double e1 = 1.0;
  double e2 = 1.0;
  double e3 = 1.0;
  double e4 = 1.0;

  double e(int slot) const;  // slot in 1..4
  bool finite() const;
};

/// Evaluation point (x, y, z, t). Section 3 of the underlying material
/// renames t to u; this type covers both.
struct Point4 {
  double x = 0.0;
  double y = 0.0;
  double z = 0.0;
  double t = 0.0;

  double operator[](int i) const;  // i in 0..3
  double abs_sum() const { return std::abs(x) + std::abs(y) + std::abs(z) + std::abs(t); }
  bool finite() const;
};

/// Summation index (m, n, p, q); also used for derivative orders.
struct MultiIndex4 {
  int m = 0;
  int n = 0;
  int p = 0;
  int q = 0;

  int total() const { return m + n + p + q; }
  bool operator==(const MultiIndex4&) const = default;
};

struct TruncationPolicy {
  int max_total_degree = 30;   // D
  double abs_tol = 1e-16;
  double rel_tol = 1e-15;
};

struct SeriesValue {
  double value = 0.0;
  double tail_estimate = 0.0;      // magnitude of the last completed shell
  std::int64_t terms_summed = 0;
  int truncated_at_degree = 0;
  bool divergence_warning = false; // shell magnitudes non-decreasing at the cutoff
};

/// Bare coefficient map idx -> Delta(m,n,p,q). The evaluator applies the
/// factorials and powers itself.
using CoefficientRule = std::function<double(const MultiIndex4&)>;

// Conservative default evaluation domain: |x|+|y|+|z|+|t| <= 0.5. Outside it
// evaluation still runs but relies on the divergence heuristic.
inline constexpr double kDomainRadius = 0.5;
bool in_default_domain(const Point4& pt);

/// Rising factorial (a)_n as a running product, so that terminating series
/// produce exact zero factors.
double pochhammer(double a, int n);

/// Checked quotient with the terminating-series convention: zero/zero is a
/// vanishing term, nonzero/zero is a pole.
double checked_coefficient(double numerator, double denominator);

double k2_coefficient(const K2Params& params, const MultiIndex4& idx);
CoefficientRule k2_rule(const K2Params& params);

SeriesValue quad_series_eval(const CoefficientRule& rule, const Point4& point,
                             const TruncationPolicy& policy);
SeriesValue k2_eval(const K2Params& params, const Point4& point,
                    const TruncationPolicy& policy);

SeriesValue gauss_2f1(double alpha, double beta, double gamma, double x,
                      const TruncationPolicy& policy);
SeriesValue appell_f4(double alpha, double beta, double gamma, double delta,
                      double x, double y, const TruncationPolicy& policy);

/// The terminating triple series
///   sum_{j+k+l<=n} (-n)_{j+k+l} (1-e1-n)_{j+k+l} (c)_k
///                  / ((e2)_j (e3)_k (e4)_l) * u1^j u2^k u3^l / (j! k! l!).
/// Exact finite sum; no truncation error.
SeriesValue srivastava_f3_shape(int n, double e1, double c, double e2,
                                double e3, double e4, double u1, double u2,
                                double u3, const TruncationPolicy& policy);

SeriesValue lauricella_fc4(double alpha, double beta, double c1, double c2,
                           double c3, double c4, const Point4& point,
                           const TruncationPolicy& policy);

/// Mixed partial d^{i+j+k+l} K2 / dx^i dy^j dz^k dt^l via the parameter-shift
/// rule: prefactor (a)_{i+j+k+l}(b)_{i+j+l}(c)_k / ((e1)_i(e2)_j(e3)_k(e4)_l)
/// times K2(a+i+j+k+l, b+i+j+l, c+k; e1+i, e2+j, e3+k, e4+l) at the same point.
SeriesValue k2_mixed_partial(const K2Params& params, const Point4& point,
                             const MultiIndex4& orders,
                             const TruncationPolicy& policy);

}  // namespace exton
