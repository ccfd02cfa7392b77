#pragma once

#include <array>
#include <map>
#include <string>
#include <vector>

#include <boost/multiprecision/cpp_int.hpp>

#include "exton/series.hpp"  // MultiIndex4, PoleError, DomainError

// Exact-rational operational calculus: the derivative/antiderivative atoms
// acting on monomials in the formal variables t1..t6, operator words, and
// truncated expansions of (1 - sum of words)^(-alpha) against a target
// monomial. Everything here is exact; no floating point enters until a
// deviation is reported.

namespace exton::opcalc {

using Rational = boost::multiprecision::cpp_rational;

inline constexpr int kVarCount = 6;    // formal variables t1..t6
inline constexpr int kIndetCount = 4;  // scalar indeterminates x, y, z, u

Rational rational_pochhammer(const Rational& a, int n);
Rational rational_factorial(int n);
Rational rational_pow(const Rational& base, int k);  // k >= 0
bool is_nonpositive_integer(const Rational& r);

/// Lenient rational parser: "2", "-7/3", "0.25" all accepted.
Rational parse_rational(const std::string& text);

/// coeff * t1^e1 ... t6^e6, with the scalar multipliers x,y,z,u carried as a
/// symbolic multidegree (they are never assigned numeric values here).
struct Monomial {
  Rational coeff = 1;
  std::array<Rational, kVarCount> exps{};
  std::array<int, kIndetCount> indet{};

  bool operator==(const Monomial&) const = default;
};
bool same_shape(const Monomial& lhs, const Monomial& rhs);  // exps and indet equal

struct OperatorAtom {
  enum class Kind { Derive, Integrate, MultiplyPower, ScaleByIndeterminate };
  Kind kind = Kind::Derive;
  int var = 0;            // t-variable slot 0..5 (not used for ScaleByIndeterminate)
  int order = 1;          // Derive / Integrate
  Rational exponent = 0;  // MultiplyPower
  int tag = 0;            // ScaleByIndeterminate: 0..3 for x,y,z,u
};

OperatorAtom derive_atom(int var, int order = 1);
OperatorAtom integrate_atom(int var, int order = 1);
OperatorAtom multiply_power_atom(int var, const Rational& exponent);
OperatorAtom scale_atom(int tag);

/// Stored in display order; applied right-to-left like the printed operator
/// products.
using OperatorWord = std::vector<OperatorAtom>;

/// The word D_{t_d} t_i^{-1} D_{t_i}^{-1} t_d (display order).
OperatorWord shift_word(int derive_var, int integrate_var);

// --- single-atom actions (Eqs. (3.1)-(3.3)) --------------------------------

/// D^m: coeff *= lambda(lambda-1)...(lambda-m+1); exponent -= m.
Monomial apply_derive(int var, int m, Monomial mono);
/// D^{-m}: coeff /= (lambda+1)...(lambda+m); exponent += m. PoleError when a
/// factor vanishes.
Monomial apply_integrate(int var, int m, Monomial mono);
/// Closed form of D_t^m D_u^{-m} on t^{beta+m-1} u^{gamma-1}: multiplies by
/// (beta)_m/(gamma)_m, shifts t by -m and u by +m. Must agree exactly with
/// the composition apply_derive(t) after apply_integrate(u).
Monomial apply_shift_pair(int t_var, int u_var, int m, Monomial mono);
/// Sequential (naive) application of a word, rightmost atom first. Note that
/// iterating this is NOT the expansion semantics of the binomial words; the
/// expansion collects all applications in normal order (see expand_*).
Monomial apply_word(const OperatorWord& word, Monomial mono);

// --- binomial expansion -----------------------------------------------------

/// One scalar-tagged term inside (1 - sum of terms)^(-alpha): an operator
/// word times a scalar monomial in the indeterminates (degree) and an exact
/// scalar factor (e.g. the 2 in 2xy).
struct TaggedTerm {
  std::array<int, kIndetCount> degree{};
  Rational scale = 1;
  OperatorWord word;
};

struct NegPowerFactor {
  Rational alpha = 0;  // the factor is (1 - sum of terms)^(-alpha)
  std::vector<TaggedTerm> terms;
};

struct ExpansionPolicy {
  int total_order = 4;  // truncation N on total indeterminate degree
};

using Degree4 = std::array<int, 4>;

/// Truncated expansion: indeterminate multidegree -> t-monomial.
using IndeterminateSeries = std::map<Degree4, Monomial>;

IndeterminateSeries expand_neg_power(const NegPowerFactor& factor,
                                     const Monomial& target,
                                     const ExpansionPolicy& policy);
/// Joint expansion of a product of such factors against one target, with all
/// derivative/integration phases collected in normal order across factors
/// (multiplications first, then integrations, then derivations, then the
/// inverse-power multiplications), as in the Eq. (3.9) rearrangement.
IndeterminateSeries expand_product(const std::vector<NegPowerFactor>& factors,
                                   const Monomial& target,
                                   const ExpansionPolicy& policy);

// --- verification -----------------------------------------------------------

struct RationalK2Params {
  Rational a, b, c, e1, e2, e3, e4;
};

/// Full series coefficient of K2 at idx including the 1/(m!n!p!q!).
Rational k2_series_coefficient(const RationalK2Params& params, const MultiIndex4& idx);
/// Gauss 2F1 coefficient (alpha)_n(beta)_n/((gamma)_n n!).
Rational gauss_series_coefficient(const Rational& alpha, const Rational& beta,
                                  const Rational& gamma, int n);

enum class LemmaForm { eq_3_4, eq_3_5, both };

struct LemmaCheck {
  bool ok = false;
  double worst_deviation = 0.0;  // 0 when ok (exact comparison)
  std::string notes;
};
LemmaCheck verify_lemma1(const Rational& alpha, const Rational& beta,
                         const Rational& gamma, int order,
                         LemmaForm form = LemmaForm::both);

enum class TheoremForm { eq_3_7, eq_3_8 };

struct TheoremCheck {
  bool ok = false;
  bool found_mismatch = false;
  MultiIndex4 first_mismatch{};  // meaningful when found_mismatch
  std::string notes;
};
TheoremCheck verify_theorem31(const RationalK2Params& params, int order,
                              TheoremForm form);

}  // namespace exton::opcalc
