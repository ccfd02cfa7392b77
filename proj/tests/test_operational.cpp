#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <vector>

#include "exton/operational.hpp"
#include "exton/series.hpp"

using namespace exton;
using namespace exton::opcalc;

namespace {

Monomial mono2(const Rational& e0, const Rational& e1) {
  Monomial m;
  m.exps[0] = e0;
  m.exps[1] = e1;
  return m;
}

}  // namespace

TEST_CASE("rational helpers") {
  CHECK(rational_pochhammer(Rational(1, 2), 3) == Rational(15, 8));  // 1/2*3/2*5/2
  CHECK(rational_pochhammer(Rational(-2), 3) == 0);
  CHECK(rational_pochhammer(Rational(5), 0) == 1);
  CHECK(rational_factorial(5) == 120);
  CHECK(rational_pow(Rational(2, 3), 3) == Rational(8, 27));
  CHECK(is_nonpositive_integer(Rational(0)));
  CHECK(is_nonpositive_integer(Rational(-4)));
  CHECK_FALSE(is_nonpositive_integer(Rational(-1, 2)));
  CHECK_FALSE(is_nonpositive_integer(Rational(3)));
}

TEST_CASE("parse_rational accepts integers, fractions and decimals") {
  CHECK(parse_rational("2") == Rational(2));
  CHECK(parse_rational("-7/3") == Rational(-7, 3));
  CHECK(parse_rational("0.25") == Rational(1, 4));
  CHECK(parse_rational("-1.5") == Rational(-3, 2));
  CHECK_THROWS_AS(parse_rational("abc"), DomainError);
  CHECK_THROWS_AS(parse_rational("1/0"), DomainError);
}

TEST_CASE("apply_derive: power action") {
  Monomial m;
  m.exps[0] = 3;

  // m = 0 is the identity
  CHECK(apply_derive(0, 0, m) == m);

  // D^2 x^3 = 6 x
  Monomial d2 = apply_derive(0, 2, m);
  CHECK(d2.coeff == 6);
  CHECK(d2.exps[0] == 1);

  // D x^(1/2) = (1/2) x^(-1/2)
  Monomial h;
  h.exps[0] = Rational(1, 2);
  Monomial dh = apply_derive(0, 1, h);
  CHECK(dh.coeff == Rational(1, 2));
  CHECK(dh.exps[0] == Rational(-1, 2));
}

TEST_CASE("apply_integrate: inverse power action and poles") {
  Monomial one;  // x^0

  // D^-1 1 = x
  Monomial i1 = apply_integrate(0, 1, one);
  CHECK(i1.coeff == 1);
  CHECK(i1.exps[0] == 1);

  // D^-2 1 = x^2/2
  Monomial i2 = apply_integrate(0, 2, one);
  CHECK(i2.coeff == Rational(1, 2));
  CHECK(i2.exps[0] == 2);

  // D^-1 x^(1/2) = (2/3) x^(3/2)
  Monomial h;
  h.exps[0] = Rational(1, 2);
  Monomial ih = apply_integrate(0, 1, h);
  CHECK(ih.coeff == Rational(2, 3));
  CHECK(ih.exps[0] == Rational(3, 2));

  // lambda = -1 divides by zero
  Monomial bad;
  bad.exps[0] = -1;
  CHECK_THROWS_AS(apply_integrate(0, 1, bad), PoleError);
}

TEST_CASE("apply_shift_pair: closed form and worked example") {
  // beta=2, gamma=3, m=2 on t^3 u^2: factor (2)_2/(3)_2 = 6/12 = 1/2
  Monomial m = mono2(3, 2);
  Monomial shifted = apply_shift_pair(0, 1, 2, m);
  CHECK(shifted.coeff == Rational(1, 2));
  CHECK(shifted.exps[0] == 1);
  CHECK(shifted.exps[1] == 4);

  // m = 0 identity
  CHECK(apply_shift_pair(0, 1, 0, m) == m);
}

TEST_CASE("apply_shift_pair equals the derive/integrate composition") {
  // exact composition law on a grid of rational beta, gamma, m <= 6
  const std::vector<Rational> betas = {Rational(1, 2), Rational(2), Rational(-3, 4),
                                       Rational(7, 3)};
  const std::vector<Rational> gammas = {Rational(5, 4), Rational(3), Rational(9, 7),
                                        Rational(1, 3)};
  for (const auto& beta : betas)
    for (const auto& gamma : gammas)
      for (int m = 0; m <= 6; ++m) {
        Monomial start = mono2(beta + m - 1, gamma - 1);
        Monomial closed = apply_shift_pair(0, 1, m, start);
        Monomial composed = apply_derive(0, m, apply_integrate(1, m, start));
        CHECK(closed == composed);
        // the (3.3) factor itself
        CHECK(closed.coeff ==
              rational_pochhammer(beta, m) / rational_pochhammer(gamma, m));
      }
}

TEST_CASE("derive and integrate on distinct variables commute") {
  Monomial m = mono2(Rational(5, 2), Rational(4, 3));
  Monomial ab = apply_derive(0, 2, apply_integrate(1, 3, m));
  Monomial ba = apply_integrate(1, 3, apply_derive(0, 2, m));
  CHECK(ab == ba);
}

TEST_CASE("apply_word: the shift word is shape-preserving") {
  // T = D_t u^-1 D_u^-1 t maps t^(b-1) u^(g-1) to (b/g) t^(b-1) u^(g-1):
  // the inner multiply/integrate pair cancels in the exponents, which is what
  // makes the word iterable inside the binomial expansion
  const Rational beta(3, 7), gamma(9, 5);
  Monomial start = mono2(beta - 1, gamma - 1);
  Monomial out = apply_word(shift_word(0, 1), start);
  CHECK(out.coeff == beta / gamma);
  CHECK(out.exps[0] == beta - 1);
  CHECK(out.exps[1] == gamma - 1);
  CHECK(same_shape(out, start));
}

TEST_CASE("expand_neg_power: N=0 keeps only the target") {
  NegPowerFactor f;
  f.alpha = Rational(5, 3);
  TaggedTerm term;
  term.degree = {1, 0, 0, 0};
  term.word = shift_word(0, 1);
  f.terms.push_back(term);

  Monomial target = mono2(Rational(1, 2), Rational(3, 4));
  ExpansionPolicy pol;
  pol.total_order = 0;
  IndeterminateSeries s = expand_neg_power(f, target, pol);
  REQUIRE(s.size() == 1);
  const Monomial& m0 = s.at({0, 0, 0, 0});
  CHECK(m0 == target);
}

TEST_CASE("expand_neg_power reproduces the Gauss coefficients of (3.5)") {
  const Rational alpha(1, 3), beta(3, 7), gamma(9, 5);

  NegPowerFactor f;
  f.alpha = alpha;
  TaggedTerm term;
  term.degree = {1, 0, 0, 0};
  // x * D_t D_x^-1 t with t = slot 0, x = slot 1
  term.word = {derive_atom(0), integrate_atom(1), multiply_power_atom(0, 1)};
  f.terms.push_back(term);

  Monomial target = mono2(beta - 1, gamma - 1);
  ExpansionPolicy pol;
  pol.total_order = 5;
  IndeterminateSeries s = expand_neg_power(f, target, pol);

  for (int k = 0; k <= 5; ++k) {
    const Monomial& mk = s.at({k, 0, 0, 0});
    CHECK(mk.coeff == gauss_series_coefficient(alpha, beta, gamma, k));
    CHECK(mk.exps[0] == beta - 1);
    CHECK(mk.exps[1] == gamma - 1 + k);
  }
}

TEST_CASE("k2_series_coefficient and gauss_series_coefficient") {
  RationalK2Params p{1, 1, 1, 2, 2, 2, 2};
  CHECK(k2_series_coefficient(p, {0, 0, 0, 0}) == 1);
  // (1)_2 (1)_2 / ((2)_1 (2)_1 * 1!1!) = 4/4
  CHECK(k2_series_coefficient(p, {1, 1, 0, 0}) == 1);
  // x^2 coefficient: (1)_2(1)_2/((2)_2 2!) = 4/12
  CHECK(k2_series_coefficient(p, {2, 0, 0, 0}) == Rational(1, 3));

  CHECK(gauss_series_coefficient(Rational(1, 2), Rational(2, 3), Rational(5, 4), 0) == 1);
  CHECK(gauss_series_coefficient(Rational(1, 2), Rational(2, 3), Rational(5, 4), 1) ==
        Rational(1, 2) * Rational(2, 3) / Rational(5, 4));
}

TEST_CASE("verify_lemma1: exact match for both printed forms") {
  LemmaCheck both = verify_lemma1(Rational(1, 2), Rational(2, 3), Rational(5, 4), 6);
  CHECK(both.ok);
  CHECK(both.worst_deviation == 0.0);

  LemmaCheck l34 = verify_lemma1(Rational(1, 2), Rational(2, 3), Rational(5, 4), 6,
                                 LemmaForm::eq_3_4);
  CHECK(l34.ok);
  LemmaCheck l35 = verify_lemma1(Rational(1, 2), Rational(2, 3), Rational(5, 4), 6,
                                 LemmaForm::eq_3_5);
  CHECK(l35.ok);

  // another rational triple
  CHECK(verify_lemma1(Rational(-3, 2), Rational(7, 5), Rational(11, 4), 5).ok);
}

TEST_CASE("verify_lemma1: N=0 and nonpositive-integer gamma") {
  CHECK(verify_lemma1(Rational(4, 7), Rational(1, 3), Rational(6, 5), 0).ok);
  CHECK_THROWS_AS(verify_lemma1(Rational(1, 2), Rational(2, 3), Rational(-2), 4),
                  PoleError);
}

TEST_CASE("verify_theorem31: N=0 and N=1") {
  RationalK2Params p{Rational(1, 3), Rational(1, 5), Rational(1, 7),
                     Rational(3, 2), Rational(5, 2), Rational(7, 2), Rational(9, 2)};
  CHECK(verify_theorem31(p, 0, TheoremForm::eq_3_7).ok);
  CHECK(verify_theorem31(p, 0, TheoremForm::eq_3_8).ok);
  CHECK(verify_theorem31(p, 1, TheoremForm::eq_3_7).ok);
  CHECK(verify_theorem31(p, 1, TheoremForm::eq_3_8).ok);
}

TEST_CASE("verify_theorem31: all 70 multidegrees at N=4, three parameter sets") {
  const std::vector<RationalK2Params> sets = {
      {Rational(1, 3), Rational(1, 5), Rational(1, 7), Rational(3, 2), Rational(5, 2),
       Rational(7, 2), Rational(9, 2)},
      {Rational(2, 5), Rational(-1, 2), Rational(3, 4), Rational(4, 3), Rational(5, 3),
       Rational(7, 3), Rational(8, 3)},
      {Rational(5, 7), Rational(6, 11), Rational(1, 2), Rational(13, 6), Rational(7, 6),
       Rational(11, 6), Rational(5, 6)},
  };
  for (const auto& p : sets) {
    TheoremCheck c7 = verify_theorem31(p, 4, TheoremForm::eq_3_7);
    CHECK(c7.ok);
    CHECK_FALSE(c7.found_mismatch);
    TheoremCheck c8 = verify_theorem31(p, 4, TheoremForm::eq_3_8);
    CHECK(c8.ok);
    CHECK_FALSE(c8.found_mismatch);
  }
}

TEST_CASE("verify_theorem31: pole in a lower parameter") {
  RationalK2Params p{Rational(1, 3), Rational(1, 5), Rational(1, 7), Rational(-1),
                     Rational(5, 2), Rational(7, 2), Rational(9, 2)};
  CHECK_THROWS_AS(verify_theorem31(p, 3, TheoremForm::eq_3_7), PoleError);
}

TEST_CASE("theorem expansion coefficient agrees with the double evaluator") {
  // the rational K2 coefficient should match k2_coefficient numerically
  RationalK2Params rp{Rational(1, 3), Rational(1, 5), Rational(1, 7), Rational(3, 2),
                      Rational(5, 2), Rational(7, 2), Rational(9, 2)};
  K2Params dp{1.0 / 3, 1.0 / 5, 1.0 / 7, 1.5, 2.5, 3.5, 4.5};
  for (int m = 0; m <= 3; ++m)
    for (int n = 0; n + m <= 3; ++n) {
      MultiIndex4 idx{m, n, 1, 0};
      double lhs = static_cast<double>(k2_series_coefficient(rp, idx));
      double fact = std::tgamma(m + 1.0) * std::tgamma(n + 1.0);
      double rhs = k2_coefficient(dp, idx) / fact;
      CHECK(lhs == doctest::Approx(rhs).epsilon(1e-13));
    }
}
