#include "exton/series.hpp"

#include <algorithm>
#include <cmath>
#include <vector>

namespace exton {

namespace {

// Kahan-Babuska-Neumaier compensated accumulator.
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

std::vector<double> power_table(double v, int max_exp) {
  std::vector<double> out(static_cast<size_t>(max_exp) + 1, 1.0);
  for (int i = 1; i <= max_exp; ++i) out[static_cast<size_t>(i)] = out[static_cast<size_t>(i - 1)] * v;
  return out;
}

std::vector<double> factorial_table(int max_n) {
  std::vector<double> out(static_cast<size_t>(max_n) + 1, 1.0);
  for (int i = 1; i <= max_n; ++i) out[static_cast<size_t>(i)] = out[static_cast<size_t>(i - 1)] * i;
  return out;
}

}  // namespace

double K2Params::e(int slot) const {
  switch (slot) {
    case 1: return e1;
    case 2: return e2;
    case 3: return e3;
    case 4: return e4;
    default: throw DomainError("K2Params::e: slot out of range");
  }
}

bool K2Params::finite() const {
  return std::isfinite(a) && std::isfinite(b) && std::isfinite(c) &&
         std::isfinite(e1) && std::isfinite(e2) && std::isfinite(e3) &&
         std::isfinite(e4);
}

double Point4::operator[](int i) const {
  switch (i) {
    case 0: return x;
    case 1: return y;
    case 2: return z;
    case 3: return t;
    default: throw DomainError("Point4::operator[]: index out of range");
  }
}

bool Point4::finite() const {
  return std::isfinite(x) && std::isfinite(y) && std::isfinite(z) && std::isfinite(t);
}

bool in_default_domain(const Point4& pt) {
  return pt.finite() && pt.abs_sum() <= kDomainRadius;
}

double pochhammer(double a, int n) {
  if (n < 0) throw DomainError("pochhammer: negative order");
  double r = 1.0;
  for (int i = 0; i < n; ++i) r *= (a + i);
  return r;
}

double checked_coefficient(double numerator, double denominator) {
  if (denominator == 0.0) {
    if (numerator == 0.0) return 0.0;  // terminating series: vanishing term
    throw PoleError("series coefficient: denominator Pochhammer vanished");
  }
  return numerator / denominator;
}

double k2_coefficient(const K2Params& params, const MultiIndex4& idx) {
  const double num = pochhammer(params.a, idx.total()) *
                     pochhammer(params.b, idx.m + idx.n + idx.q) *
                     pochhammer(params.c, idx.p);
  const double den = pochhammer(params.e1, idx.m) * pochhammer(params.e2, idx.n) *
                     pochhammer(params.e3, idx.p) * pochhammer(params.e4, idx.q);
  return checked_coefficient(num, den);
}

CoefficientRule k2_rule(const K2Params& params) {
  return [params](const MultiIndex4& idx) { return k2_coefficient(params, idx); };
}

SeriesValue quad_series_eval(const CoefficientRule& rule, const Point4& point,
                             const TruncationPolicy& policy) {
  if (!point.finite()) throw DomainError("quad_series_eval: nonfinite point");
  if (policy.max_total_degree < 0) throw DomainError("quad_series_eval: negative degree bound");

  const int D = policy.max_total_degree;
  const auto xs = power_table(point.x, D);
  const auto ys = power_table(point.y, D);
  const auto zs = power_table(point.z, D);
  const auto ts = power_table(point.t, D);
  const auto fact = factorial_table(D);

  SeriesValue out;
  Kbn total;
  // Ring of the last three shell magnitudes for the divergence heuristic.
  double mag[3] = {-1.0, -1.0, -1.0};
  double prev_shell_mag = -1.0;

  for (int s = 0; s <= D; ++s) {
    Kbn shell;
    // Lexicographic (m, n, p) within the shell; q is determined.
    for (int m = 0; m <= s; ++m) {
      for (int n = 0; n + m <= s; ++n) {
        for (int p = 0; p + n + m <= s; ++p) {
          const int q = s - m - n - p;
          const double delta = rule(MultiIndex4{m, n, p, q});
          ++out.terms_summed;
          if (delta == 0.0) continue;
          const double monom = xs[static_cast<size_t>(m)] * ys[static_cast<size_t>(n)] *
                               zs[static_cast<size_t>(p)] * ts[static_cast<size_t>(q)];
          const double fden = fact[static_cast<size_t>(m)] * fact[static_cast<size_t>(n)] *
                              fact[static_cast<size_t>(p)] * fact[static_cast<size_t>(q)];
          shell.add(delta * monom / fden);
        }
      }
    }
    const double shell_val = shell.total();
    total.add(shell_val);
    const double shell_mag = std::abs(shell_val);

    mag[0] = mag[1];
    mag[1] = mag[2];
    mag[2] = shell_mag;
    out.truncated_at_degree = s;
    out.tail_estimate = shell_mag;

    const double thr = std::max(policy.abs_tol, policy.rel_tol * std::abs(total.total()));
    if (s >= 1 && prev_shell_mag < thr && shell_mag < thr) {
      out.value = total.total();
      return out;
    }
    prev_shell_mag = shell_mag;
  }

  out.value = total.total();
  const double thr = std::max(policy.abs_tol, policy.rel_tol * std::abs(out.value));
  if (mag[0] >= 0.0 && mag[0] <= mag[1] && mag[1] <= mag[2] && mag[2] > thr) {
    out.divergence_warning = true;
  }
  return out;
}

SeriesValue k2_eval(const K2Params& params, const Point4& point,
                    const TruncationPolicy& policy) {
  if (!params.finite()) throw DomainError("k2_eval: nonfinite parameters");
  return quad_series_eval(k2_rule(params), point, policy);
}

SeriesValue gauss_2f1(double alpha, double beta, double gamma, double x,
                      const TruncationPolicy& policy) {
  if (!std::isfinite(alpha) || !std::isfinite(beta) || !std::isfinite(gamma) ||
      !std::isfinite(x)) {
    throw DomainError("gauss_2f1: nonfinite input");
  }
  SeriesValue out;
  Kbn total;
  double term = 1.0;  // n = 0
  double mag[3] = {-1.0, -1.0, -1.0};
  double prev_mag = -1.0;

  for (int n = 0; n <= policy.max_total_degree; ++n) {
    if (term == 0.0) {  // terminated exactly; nothing further can revive it
      out.value = total.total();
      out.tail_estimate = 0.0;
      return out;
    }
    total.add(term);
    ++out.terms_summed;
    const double term_mag = std::abs(term);
    mag[0] = mag[1];
    mag[1] = mag[2];
    mag[2] = term_mag;
    out.truncated_at_degree = n;
    out.tail_estimate = term_mag;

    const double thr = std::max(policy.abs_tol, policy.rel_tol * std::abs(total.total()));
    if (n >= 1 && prev_mag < thr && term_mag < thr) {
      out.value = total.total();
      return out;
    }
    prev_mag = term_mag;

    if (gamma + n == 0.0) {
      if ((alpha + n) * (beta + n) == 0.0) {
        term = 0.0;
        continue;
      }
      throw PoleError("gauss_2f1: lower parameter hit a nonpositive integer");
    }
    term *= (alpha + n) * (beta + n) / ((gamma + n) * (n + 1)) * x;
  }

  out.value = total.total();
  const double thr = std::max(policy.abs_tol, policy.rel_tol * std::abs(out.value));
  if (mag[0] >= 0.0 && mag[0] <= mag[1] && mag[1] <= mag[2] && mag[2] > thr) {
    out.divergence_warning = true;
  }
  return out;
}

SeriesValue appell_f4(double alpha, double beta, double gamma, double delta,
                      double x, double y, const TruncationPolicy& policy) {
  if (!std::isfinite(alpha) || !std::isfinite(beta) || !std::isfinite(gamma) ||
      !std::isfinite(delta) || !std::isfinite(x) || !std::isfinite(y)) {
    throw DomainError("appell_f4: nonfinite input");
  }
  const int D = policy.max_total_degree;
  // (alpha)_i and (beta)_i are needed up to i = D; lower parameters up to D too.
  std::vector<double> pa(static_cast<size_t>(D) + 1, 1.0), pb = pa, pg = pa, pd = pa;
  for (int i = 0; i < D; ++i) {
    pa[static_cast<size_t>(i + 1)] = pa[static_cast<size_t>(i)] * (alpha + i);
    pb[static_cast<size_t>(i + 1)] = pb[static_cast<size_t>(i)] * (beta + i);
    pg[static_cast<size_t>(i + 1)] = pg[static_cast<size_t>(i)] * (gamma + i);
    pd[static_cast<size_t>(i + 1)] = pd[static_cast<size_t>(i)] * (delta + i);
  }
  const auto xs = power_table(x, D);
  const auto ys = power_table(y, D);
  const auto fact = factorial_table(D);

  SeriesValue out;
  Kbn total;
  double mag[3] = {-1.0, -1.0, -1.0};
  double prev_mag = -1.0;

  for (int s = 0; s <= D; ++s) {
    Kbn shell;
    for (int j = 0; j <= s; ++j) {
      const int k = s - j;
      const double num = pa[static_cast<size_t>(s)] * pb[static_cast<size_t>(s)];
      const double den = pg[static_cast<size_t>(j)] * pd[static_cast<size_t>(k)];
      const double coeff = checked_coefficient(num, den);
      ++out.terms_summed;
      if (coeff == 0.0) continue;
      shell.add(coeff * xs[static_cast<size_t>(j)] * ys[static_cast<size_t>(k)] /
                (fact[static_cast<size_t>(j)] * fact[static_cast<size_t>(k)]));
    }
    const double shell_val = shell.total();
    total.add(shell_val);
    const double shell_mag = std::abs(shell_val);
    mag[0] = mag[1];
    mag[1] = mag[2];
    mag[2] = shell_mag;
    out.truncated_at_degree = s;
    out.tail_estimate = shell_mag;

    const double thr = std::max(policy.abs_tol, policy.rel_tol * std::abs(total.total()));
    if (s >= 1 && prev_mag < thr && shell_mag < thr) {
      out.value = total.total();
      return out;
    }
    prev_mag = shell_mag;
  }

  out.value = total.total();
  const double thr = std::max(policy.abs_tol, policy.rel_tol * std::abs(out.value));
  if (mag[0] >= 0.0 && mag[0] <= mag[1] && mag[1] <= mag[2] && mag[2] > thr) {
    out.divergence_warning = true;
  }
  return out;
}

SeriesValue srivastava_f3_shape(int n, double e1, double c, double e2,
                                double e3, double e4, double u1, double u2,
                                double u3, const TruncationPolicy& policy) {
  (void)policy;  // the sum is finite; the policy carries no cutoff here
  if (n < 0) throw DomainError("srivastava_f3_shape: negative order n");
  SeriesValue out;
  Kbn total;
  const auto u1s = power_table(u1, n);
  const auto u2s = power_table(u2, n);
  const auto u3s = power_table(u3, n);
  const auto fact = factorial_table(n);

  for (int s = 0; s <= n; ++s) {
    for (int j = 0; j <= s; ++j) {
      for (int k = 0; k + j <= s; ++k) {
        const int l = s - j - k;
        const double num = pochhammer(-n, s) * pochhammer(1.0 - e1 - n, s) * pochhammer(c, k);
        const double den = pochhammer(e2, j) * pochhammer(e3, k) * pochhammer(e4, l);
        const double coeff = checked_coefficient(num, den);
        ++out.terms_summed;
        if (coeff == 0.0) continue;
        total.add(coeff * u1s[static_cast<size_t>(j)] * u2s[static_cast<size_t>(k)] *
                  u3s[static_cast<size_t>(l)] /
                  (fact[static_cast<size_t>(j)] * fact[static_cast<size_t>(k)] *
                   fact[static_cast<size_t>(l)]));
      }
    }
  }
  out.value = total.total();
  out.truncated_at_degree = n;
  out.tail_estimate = 0.0;  // exact finite sum
  return out;
}

SeriesValue lauricella_fc4(double alpha, double beta, double c1, double c2,
                           double c3, double c4, const Point4& point,
                           const TruncationPolicy& policy) {
  const CoefficientRule rule = [=](const MultiIndex4& idx) {
    const double num = pochhammer(alpha, idx.total()) * pochhammer(beta, idx.total());
    const double den = pochhammer(c1, idx.m) * pochhammer(c2, idx.n) *
                       pochhammer(c3, idx.p) * pochhammer(c4, idx.q);
    return checked_coefficient(num, den);
  };
  return quad_series_eval(rule, point, policy);
}

SeriesValue k2_mixed_partial(const K2Params& params, const Point4& point,
                             const MultiIndex4& orders,
                             const TruncationPolicy& policy) {
  if (orders.m < 0 || orders.n < 0 || orders.p < 0 || orders.q < 0) {
    throw DomainError("k2_mixed_partial: negative derivative order");
  }
  const int tot = orders.total();
  const double num = pochhammer(params.a, tot) *
                     pochhammer(params.b, orders.m + orders.n + orders.q) *
                     pochhammer(params.c, orders.p);
  if (num == 0.0) {
    // The K2 series is a polynomial that the requested derivative annihilates.
    SeriesValue out;
    out.value = 0.0;
    out.tail_estimate = 0.0;
    return out;
  }
  const double den = pochhammer(params.e1, orders.m) * pochhammer(params.e2, orders.n) *
                     pochhammer(params.e3, orders.p) * pochhammer(params.e4, orders.q);
  if (den == 0.0) {
    throw PoleError("k2_mixed_partial: derivative prefactor hit a parameter pole");
  }
  const double scale = num / den;

  K2Params shifted = params;
  shifted.a += tot;
  shifted.b += orders.m + orders.n + orders.q;
  shifted.c += orders.p;
  shifted.e1 += orders.m;
  shifted.e2 += orders.n;
  shifted.e3 += orders.p;
  shifted.e4 += orders.q;

  SeriesValue out = k2_eval(shifted, point, policy);
  out.value *= scale;
  out.tail_estimate *= std::abs(scale);
  return out;
}

}  // namespace exton
