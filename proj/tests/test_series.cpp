#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <limits>

#include "exton/series.hpp"

using namespace exton;

namespace {

const TruncationPolicy kDefault{};

TruncationPolicy with_degree(int d) {
  TruncationPolicy p;
  p.max_total_degree = d;
  return p;
}

// Direct quadruple loop over all indices with total degree <= bound; no
// compensation, no early exit. Slow but unambiguous.
double k2_brute_force(const K2Params& params, const Point4& pt, int bound) {
  double sum = 0.0;
  for (int m = 0; m <= bound; ++m)
    for (int n = 0; n + m <= bound; ++n)
      for (int p = 0; m + n + p <= bound; ++p)
        for (int q = 0; m + n + p + q <= bound; ++q) {
          const MultiIndex4 idx{m, n, p, q};
          double term = k2_coefficient(params, idx);
          term *= std::pow(pt.x, m) * std::pow(pt.y, n) * std::pow(pt.z, p) *
                  std::pow(pt.t, q);
          term /= std::tgamma(m + 1.0) * std::tgamma(n + 1.0) *
                  std::tgamma(p + 1.0) * std::tgamma(q + 1.0);
          sum += term;
        }
  return sum;
}

}  // namespace

TEST_CASE("pochhammer: empty product, integer products, terminating zero") {
  CHECK(pochhammer(5.7, 0) == 1.0);
  CHECK(pochhammer(3.0, 2) == 12.0);    // 3*4
  CHECK(pochhammer(-2.0, 3) == 0.0);    // third factor is exactly 0
  CHECK(pochhammer(0.5, 3) == 1.875);   // 0.5 * 1.5 * 2.5
  CHECK(pochhammer(-2.0, 2) == 2.0);    // (-2)(-1)
  CHECK(pochhammer(0.0, 0) == 1.0);
  CHECK(pochhammer(0.0, 1) == 0.0);
  // the zero at a = -n must be exact, not a rounding artifact
  CHECK(pochhammer(-7.0, 8) == 0.0);
  CHECK(pochhammer(-7.0, 100) == 0.0);
}

TEST_CASE("checked_coefficient: 0/0 vanishes, x/0 is a pole") {
  CHECK(checked_coefficient(0.0, 0.0) == 0.0);
  CHECK(checked_coefficient(6.0, 3.0) == 2.0);
  CHECK_THROWS_AS(checked_coefficient(1.0, 0.0), PoleError);
}

TEST_CASE("k2_coefficient: hand values and terminating directions") {
  K2Params ones{1, 1, 1, 2, 2, 2, 2};
  CHECK(k2_coefficient(ones, {0, 0, 0, 0}) == 1.0);
  // (1)_2 (1)_2 / ((2)_1 (2)_1) = 2*2 / (2*2)
  CHECK(k2_coefficient(ones, {1, 1, 0, 0}) == 1.0);

  K2Params z{0, 1, 1, 2, 2, 2, 2};  // a = 0
  CHECK(k2_coefficient(z, {1, 0, 0, 0}) == 0.0);

  // a = -2 terminates every direction at total degree 2
  K2Params trunc{-2, 0.5, 0.5, 2, 2, 2, 2};
  CHECK(k2_coefficient(trunc, {3, 0, 0, 0}) == 0.0);
  CHECK(k2_coefficient(trunc, {1, 1, 1, 0}) == 0.0);
  CHECK(k2_coefficient(trunc, {2, 0, 0, 0}) != 0.0);

  // nonzero numerator over vanishing (e1)_m
  K2Params pole{1, 1, 1, -1, 2, 2, 2};
  CHECK_THROWS_AS(k2_coefficient(pole, {2, 0, 0, 0}), PoleError);
  // ...but a vanishing numerator wins (0/0 convention)
  K2Params zz{-1, 1, 1, -1, 2, 2, 2};
  CHECK(k2_coefficient(zz, {2, 0, 0, 0}) == 0.0);
}

TEST_CASE("quad_series_eval: origin, single surviving term") {
  K2Params p{1, 1, 1, 2, 2, 2, 2};
  SeriesValue v = quad_series_eval(k2_rule(p), {0, 0, 0, 0}, kDefault);
  CHECK(v.value == 1.0);
  CHECK(v.tail_estimate == 0.0);
  CHECK_FALSE(v.divergence_warning);
}

TEST_CASE("k2_eval collapses to 2F1 on each axis") {
  K2Params p{0.3, 0.5, 0.7, 0.6, 1.3, 1.7, 1.9};
  const double tol = 1e-14;

  auto rel = [](double u, double v) { return std::abs(u - v) / std::abs(v); };

  SeriesValue fx = k2_eval(p, {0.1, 0, 0, 0}, kDefault);
  CHECK(rel(fx.value, gauss_2f1(p.a, p.b, p.e1, 0.1, kDefault).value) < tol);

  SeriesValue fy = k2_eval(p, {0, 0.1, 0, 0}, kDefault);
  CHECK(rel(fy.value, gauss_2f1(p.a, p.b, p.e2, 0.1, kDefault).value) < tol);

  SeriesValue fz = k2_eval(p, {0, 0, 0.1, 0}, kDefault);
  CHECK(rel(fz.value, gauss_2f1(p.a, p.c, p.e3, 0.1, kDefault).value) < tol);

  SeriesValue ft = k2_eval(p, {0, 0, 0, 0.1}, kDefault);
  CHECK(rel(ft.value, gauss_2f1(p.a, p.b, p.e4, 0.1, kDefault).value) < tol);
}

TEST_CASE("k2_eval: closed form on the x axis, a=b=c=1, e=2") {
  // sum_m (1)_m (1)_m / (2)_m x^m / m! = -log(1-x)/x
  K2Params p{1, 1, 1, 2, 2, 2, 2};
  SeriesValue v = k2_eval(p, {0.1, 0, 0, 0}, kDefault);
  const double ref = -std::log(0.9) / 0.1;  // 1.0536051565782630...
  CHECK(v.value == doctest::Approx(ref).epsilon(1e-13));
  CHECK(std::abs(v.value - 1.0536052) < 1e-6);
}

TEST_CASE("k2_eval matches brute-force summation at a generic point") {
  K2Params p{0.3, 0.5, 0.7, 0.6, 1.3, 1.7, 1.9};
  Point4 pt{0.04, 0.03, 0.02, 0.01};
  TruncationPolicy pol = with_degree(18);
  pol.abs_tol = 0.0;  // force the full scan up to D
  pol.rel_tol = 0.0;
  SeriesValue v = k2_eval(p, pt, pol);
  double ref = k2_brute_force(p, pt, 18);
  CHECK(v.value == doctest::Approx(ref).epsilon(1e-13));
}

TEST_CASE("k2_eval truncation stability D=20 vs D=24") {
  K2Params p{0.3, 0.5, 0.7, 1.6, 1.3, 1.7, 1.9};
  Point4 pt{0.05, 0.05, 0.05, 0.05};
  double v20 = k2_eval(p, pt, with_degree(20)).value;
  double v24 = k2_eval(p, pt, with_degree(24)).value;
  CHECK(std::abs(v20 - v24) < 1e-12);
}

TEST_CASE("k2_eval is deterministic bit-for-bit") {
  K2Params p{0.3, 0.5, 0.7, 0.6, 1.3, 1.7, 1.9};
  Point4 pt{0.04, 0.03, 0.02, 0.01};
  SeriesValue v1 = k2_eval(p, pt, kDefault);
  SeriesValue v2 = k2_eval(p, pt, kDefault);
  CHECK(v1.value == v2.value);
  CHECK(v1.tail_estimate == v2.tail_estimate);
  CHECK(v1.terms_summed == v2.terms_summed);
}

TEST_CASE("gauss_2f1: special values") {
  CHECK(gauss_2f1(0.0, 0.7, 1.1, 0.3, kDefault).value == 1.0);

  // alpha=beta=1, gamma=2: -log(1-x)/x
  SeriesValue log_form = gauss_2f1(1, 1, 2, 0.1, kDefault);
  CHECK(log_form.value == doctest::Approx(-std::log(0.9) / 0.1).epsilon(1e-14));

  // binomial: 2F1(a,b;b;x) = (1-x)^(-a)
  SeriesValue binom = gauss_2f1(0.3, 0.7, 0.7, 0.2, kDefault);
  CHECK(binom.value == doctest::Approx(std::pow(0.8, -0.3)).epsilon(1e-14));
}

TEST_CASE("gauss_2f1: terminating series is exact with zero tail") {
  SeriesValue v = gauss_2f1(-2, 1, 1, 0.5, kDefault);
  // (1-x)^2 at x=0.5
  CHECK(v.value == 0.25);
  CHECK(v.tail_estimate == 0.0);
  CHECK(v.terms_summed == 3);
}

TEST_CASE("gauss_2f1: nonpositive integer gamma") {
  // gamma = -1 is hit by the recurrence at n=2 with nonzero numerator
  CHECK_THROWS_AS(gauss_2f1(0.5, 0.5, -1.0, 0.1, kDefault), PoleError);
  // ...unless the numerator terminates first: alpha = -1 stops at n=1
  SeriesValue v = gauss_2f1(-1.0, 0.5, -1.0, 0.1, kDefault);
  CHECK(v.value == doctest::Approx(1.0 + 0.5 * 0.1 / 1.0).epsilon(1e-15));
}

TEST_CASE("appell_f4: collapses and symmetry") {
  const double tol = 1e-14;
  CHECK(appell_f4(0.4, 0.9, 1.2, 1.5, 0.0, 0.0, kDefault).value == 1.0);

  SeriesValue edge = appell_f4(0.4, 0.9, 1.2, 1.5, 0.07, 0.0, kDefault);
  SeriesValue gauss = gauss_2f1(0.4, 0.9, 1.2, 0.07, kDefault);
  CHECK(edge.value == doctest::Approx(gauss.value).epsilon(tol));

  // F4(a,b;c1,c2;x,y) = F4(a,b;c2,c1;y,x)
  SeriesValue lhs = appell_f4(0.4, 0.9, 1.2, 1.5, 0.04, 0.06, kDefault);
  SeriesValue rhs = appell_f4(0.4, 0.9, 1.5, 1.2, 0.06, 0.04, kDefault);
  CHECK(lhs.value == doctest::Approx(rhs.value).epsilon(tol));
}

TEST_CASE("appell_f4: terminating alpha against a hand sum") {
  // alpha = -1: only j+k <= 1 survives:
  // 1 + (-1)b/c1 * x + (-1)b/c2 * y
  double b = 0.8, c1 = 1.2, c2 = 1.7, x = 0.3, y = 0.4;
  SeriesValue v = appell_f4(-1, b, c1, c2, x, y, kDefault);
  double ref = 1.0 - b / c1 * x - b / c2 * y;
  CHECK(v.value == doctest::Approx(ref).epsilon(1e-15));
  CHECK(v.tail_estimate == 0.0);
}

TEST_CASE("appell_f4 equals k2_eval on the (x,y) face") {
  K2Params p{0.3, 0.5, 0.7, 0.6, 1.3, 1.7, 1.9};
  SeriesValue k2 = k2_eval(p, {0.05, 0.04, 0, 0}, kDefault);
  SeriesValue f4 = appell_f4(p.a, p.b, p.e1, p.e2, 0.05, 0.04, kDefault);
  CHECK(k2.value == doctest::Approx(f4.value).epsilon(1e-13));
}

TEST_CASE("appell_f4 flags divergence outside sqrt(x)+sqrt(y)<1") {
  // at x=y=0.5 the shell sums grow like s!
  SeriesValue v = appell_f4(1, 1, 1, 1, 0.5, 0.5, with_degree(24));
  CHECK(v.divergence_warning);
}

TEST_CASE("srivastava_f3_shape: n=0 and single-direction collapse") {
  SeriesValue unit = srivastava_f3_shape(0, 0.6, 0.7, 1.3, 1.7, 1.9,
                                         0.3, 0.4, 0.5, kDefault);
  CHECK(unit.value == 1.0);
  CHECK(unit.tail_estimate == 0.0);

  // u2 = u3 = 0 leaves sum_j (-n)_j (1-e1-n)_j / ((e2)_j j!) u1^j,
  // a terminating Gauss series
  int n = 3;
  double e1 = 0.6, e2 = 1.3, u1 = 0.35;
  SeriesValue tri = srivastava_f3_shape(n, e1, 0.7, e2, 1.7, 1.9,
                                        u1, 0.0, 0.0, kDefault);
  SeriesValue ref = gauss_2f1(-n, 1.0 - e1 - n, e2, u1, kDefault);
  CHECK(tri.value == doctest::Approx(ref.value).epsilon(1e-14));
  CHECK(tri.tail_estimate == 0.0);
}

TEST_CASE("srivastava_f3_shape: n=1 against the written-out sum") {
  double e1 = 0.6, c = 0.7, e2 = 1.3, e3 = 1.7, e4 = 1.9;
  double u1 = 0.2, u2 = 0.3, u3 = 0.4;
  // j+k+l <= 1: 1 + (-1)(-e1)[u1/e2 + c*u2/e3 + u3/e4]
  double ref = 1.0 + (-1.0) * (-e1) * (u1 / e2 + c * u2 / e3 + u3 / e4);
  SeriesValue v = srivastava_f3_shape(1, e1, c, e2, e3, e4, u1, u2, u3, kDefault);
  CHECK(v.value == doctest::Approx(ref).epsilon(1e-15));
}

TEST_CASE("lauricella_fc4: collapses to 2F1 and F4") {
  const double tol = 1e-14;
  SeriesValue axis = lauricella_fc4(0.4, 0.9, 1.2, 1.5, 1.8, 2.1,
                                    {0.07, 0, 0, 0}, kDefault);
  CHECK(axis.value ==
        doctest::Approx(gauss_2f1(0.4, 0.9, 1.2, 0.07, kDefault).value).epsilon(tol));

  SeriesValue face = lauricella_fc4(0.4, 0.9, 1.2, 1.5, 1.8, 2.1,
                                    {0.04, 0.05, 0, 0}, kDefault);
  CHECK(face.value ==
        doctest::Approx(appell_f4(0.4, 0.9, 1.2, 1.5, 0.04, 0.05, kDefault).value)
            .epsilon(tol));
}

TEST_CASE("k2_mixed_partial: parameter-shift values at the origin") {
  K2Params p{0.3, 0.5, 0.7, 0.6, 1.3, 1.7, 1.9};
  Point4 origin{0, 0, 0, 0};
  // at the origin the shifted K2 factor is exactly 1, so each first partial
  // is just its prefactor
  CHECK(k2_mixed_partial(p, origin, {1, 0, 0, 0}, kDefault).value ==
        doctest::Approx(p.a * p.b / p.e1).epsilon(1e-15));
  CHECK(k2_mixed_partial(p, origin, {0, 1, 0, 0}, kDefault).value ==
        doctest::Approx(p.a * p.b / p.e2).epsilon(1e-15));
  CHECK(k2_mixed_partial(p, origin, {0, 0, 1, 0}, kDefault).value ==
        doctest::Approx(p.a * p.c / p.e3).epsilon(1e-15));
  CHECK(k2_mixed_partial(p, origin, {0, 0, 0, 1}, kDefault).value ==
        doctest::Approx(p.a * p.b / p.e4).epsilon(1e-15));
  // zero order is the function itself
  CHECK(k2_mixed_partial(p, origin, {0, 0, 0, 0}, kDefault).value == 1.0);
}

TEST_CASE("k2_mixed_partial: central finite-difference cross-check") {
  K2Params p{0.3, 0.5, 0.7, 0.6, 1.3, 1.7, 1.9};
  Point4 pt{0.04, 0.03, 0.02, 0.01};
  const double h = 0.005;

  SeriesValue dz = k2_mixed_partial(p, pt, {0, 0, 1, 0}, kDefault);
  double fd = (k2_eval(p, {pt.x, pt.y, pt.z + h, pt.t}, kDefault).value -
               k2_eval(p, {pt.x, pt.y, pt.z - h, pt.t}, kDefault).value) /
              (2 * h);
  CHECK(dz.value == doctest::Approx(fd).epsilon(1e-4));
}

TEST_CASE("k2_mixed_partial: vanishing prefactor and pole prefactor") {
  // b = 0 makes (b)_1 = 0: the x-derivative is identically zero
  K2Params zb{0.3, 0.0, 0.7, 0.6, 1.3, 1.7, 1.9};
  SeriesValue v = k2_mixed_partial(zb, {0.04, 0.03, 0.02, 0.01}, {1, 0, 0, 0}, kDefault);
  CHECK(v.value == 0.0);
  CHECK(v.tail_estimate == 0.0);

  // e1 = -1 makes (e1)_2 = (-1)(0) = 0 with nonzero numerator
  K2Params pe{0.3, 0.5, 0.7, -1.0, 1.3, 1.7, 1.9};
  CHECK_THROWS_AS(k2_mixed_partial(pe, {0.04, 0, 0, 0}, {2, 0, 0, 0}, kDefault),
                  PoleError);
}

TEST_CASE("in_default_domain") {
  CHECK(in_default_domain({0.1, 0.1, 0.1, 0.1}));
  CHECK_FALSE(in_default_domain({0.2, 0.2, 0.2, 0.1}));
  CHECK(in_default_domain({-0.1, 0.1, -0.1, 0.1}));
}

TEST_CASE("SeriesValue bookkeeping: early stop below max degree") {
  K2Params p{0.3, 0.5, 0.7, 0.6, 1.3, 1.7, 1.9};
  SeriesValue v = k2_eval(p, {0.01, 0.01, 0.01, 0.01}, with_degree(40));
  CHECK(v.truncated_at_degree < 40);
  CHECK(v.tail_estimate < 1e-14);
  CHECK_FALSE(v.divergence_warning);
}
