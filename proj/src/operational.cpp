#include "exton/operational.hpp"

#include <algorithm>
#include <sstream>

namespace exton::opcalc {

namespace {

std::string rat_str(const Rational& r) {
  std::ostringstream os;
  os << r;
  return os.str();
}

// Normal-ordered footprint of one tagged term: what a single application
// contributes to each phase.
struct Phases {
  std::array<Rational, kVarCount> pre{};   // exponent bumps before any D/D^{-1}
  std::array<int, kVarCount> integ{};      // integration orders per variable
  std::array<int, kVarCount> deriv{};      // derivation orders per variable
  std::array<Rational, kVarCount> post{};  // remaining exponent bumps
  std::array<int, kIndetCount> degree{};   // indeterminate degree incl. scale atoms
  Rational scale = 1;
};

Phases classify(const TaggedTerm& term) {
  Phases ph;
  ph.degree = term.degree;
  ph.scale = term.scale;
  bool seen_op = false;
  // Application order is rightmost-first.
  for (auto it = term.word.rbegin(); it != term.word.rend(); ++it) {
    switch (it->kind) {
      case OperatorAtom::Kind::MultiplyPower:
        (seen_op ? ph.post : ph.pre)[static_cast<size_t>(it->var)] += it->exponent;
        break;
      case OperatorAtom::Kind::Integrate:
        ph.integ[static_cast<size_t>(it->var)] += it->order;
        seen_op = true;
        break;
      case OperatorAtom::Kind::Derive:
        ph.deriv[static_cast<size_t>(it->var)] += it->order;
        seen_op = true;
        break;
      case OperatorAtom::Kind::ScaleByIndeterminate:
        ph.degree[static_cast<size_t>(it->tag)] += 1;
        break;
    }
  }
  return ph;
}

int degree_total(const std::array<int, kIndetCount>& d) {
  return d[0] + d[1] + d[2] + d[3];
}

}  // namespace

Rational rational_pochhammer(const Rational& a, int n) {
  if (n < 0) throw DomainError("rational_pochhammer: negative order");
  Rational r = 1;
  for (int i = 0; i < n; ++i) r *= (a + i);
  return r;
}

Rational rational_factorial(int n) {
  if (n < 0) throw DomainError("rational_factorial: negative argument");
  Rational r = 1;
  for (int i = 2; i <= n; ++i) r *= i;
  return r;
}

Rational rational_pow(const Rational& base, int k) {
  if (k < 0) throw DomainError("rational_pow: negative power");
  Rational r = 1;
  for (int i = 0; i < k; ++i) r *= base;
  return r;
}

bool is_nonpositive_integer(const Rational& r) {
  return boost::multiprecision::denominator(r) == 1 &&
         boost::multiprecision::numerator(r) <= 0;
}

namespace {

// Decimal digit string (optional sign) -> integer. cpp_int's string
// constructor treats a leading 0 as octal, so digits are validated and
// normalized here instead of being passed through.
boost::multiprecision::cpp_int parse_integer(std::string digits, const std::string& original) {
  bool negative = false;
  if (!digits.empty() && (digits[0] == '+' || digits[0] == '-')) {
    negative = digits[0] == '-';
    digits.erase(0, 1);
  }
  if (digits.empty() || digits.find_first_not_of("0123456789") != std::string::npos) {
    throw DomainError("parse_rational: malformed number: " + original);
  }
  const size_t first = digits.find_first_not_of('0');
  digits.erase(0, std::min(first, digits.size() - 1));
  boost::multiprecision::cpp_int value(digits);
  return negative ? -value : value;
}

}  // namespace

Rational parse_rational(const std::string& text) {
  std::string s = text;
  s.erase(std::remove_if(s.begin(), s.end(), [](unsigned char ch) { return std::isspace(ch); }),
          s.end());
  if (s.empty()) throw DomainError("parse_rational: empty string");
  const auto dot = s.find('.');
  if (dot != std::string::npos) {
    if (s.find('/') != std::string::npos) {
      throw DomainError("parse_rational: mixed decimal and fraction: " + text);
    }
    std::string digits = s.substr(0, dot) + s.substr(dot + 1);
    const size_t frac_len = s.size() - dot - 1;
    boost::multiprecision::cpp_int num = parse_integer(digits, text);
    boost::multiprecision::cpp_int den = 1;
    for (size_t i = 0; i < frac_len; ++i) den *= 10;
    return Rational(num, den);
  }
  const auto slash = s.find('/');
  if (slash != std::string::npos) {
    boost::multiprecision::cpp_int num = parse_integer(s.substr(0, slash), text);
    boost::multiprecision::cpp_int den = parse_integer(s.substr(slash + 1), text);
    if (den == 0) throw DomainError("parse_rational: zero denominator: " + text);
    return Rational(num, den);
  }
  return Rational(parse_integer(s, text));
}

bool same_shape(const Monomial& lhs, const Monomial& rhs) {
  return lhs.exps == rhs.exps && lhs.indet == rhs.indet;
}

OperatorAtom derive_atom(int var, int order) {
  OperatorAtom a;
  a.kind = OperatorAtom::Kind::Derive;
  a.var = var;
  a.order = order;
  return a;
}

OperatorAtom integrate_atom(int var, int order) {
  OperatorAtom a;
  a.kind = OperatorAtom::Kind::Integrate;
  a.var = var;
  a.order = order;
  return a;
}

OperatorAtom multiply_power_atom(int var, const Rational& exponent) {
  OperatorAtom a;
  a.kind = OperatorAtom::Kind::MultiplyPower;
  a.var = var;
  a.exponent = exponent;
  return a;
}

OperatorAtom scale_atom(int tag) {
  OperatorAtom a;
  a.kind = OperatorAtom::Kind::ScaleByIndeterminate;
  a.tag = tag;
  return a;
}

OperatorWord shift_word(int derive_var, int integrate_var) {
  return OperatorWord{
      derive_atom(derive_var, 1),
      multiply_power_atom(integrate_var, -1),
      integrate_atom(integrate_var, 1),
      multiply_power_atom(derive_var, 1),
  };
}

Monomial apply_derive(int var, int m, Monomial mono) {
  if (var < 0 || var >= kVarCount) throw DomainError("apply_derive: variable out of range");
  if (m < 0) throw DomainError("apply_derive: negative order");
  Rational& lambda = mono.exps[static_cast<size_t>(var)];
  for (int i = 0; i < m; ++i) mono.coeff *= (lambda - i);
  lambda -= m;
  return mono;
}

Monomial apply_integrate(int var, int m, Monomial mono) {
  if (var < 0 || var >= kVarCount) throw DomainError("apply_integrate: variable out of range");
  if (m < 0) throw DomainError("apply_integrate: negative order");
  Rational& lambda = mono.exps[static_cast<size_t>(var)];
  for (int i = 1; i <= m; ++i) {
    const Rational factor = lambda + i;
    if (factor == 0) {
      throw PoleError("apply_integrate: exponent " + rat_str(lambda) +
                      " hits the pole at step " + std::to_string(i));
    }
    mono.coeff /= factor;
  }
  lambda += m;
  return mono;
}

Monomial apply_shift_pair(int t_var, int u_var, int m, Monomial mono) {
  if (t_var == u_var) throw DomainError("apply_shift_pair: variables must differ");
  // t-exponent is beta+m-1 and u-exponent is gamma-1 on entry.
  const Rational beta = mono.exps[static_cast<size_t>(t_var)] - (m - 1);
  const Rational gamma = mono.exps[static_cast<size_t>(u_var)] + 1;
  const Rational den = rational_pochhammer(gamma, m);
  if (den == 0) {
    throw PoleError("apply_shift_pair: (gamma)_m vanishes, gamma = " + rat_str(gamma));
  }
  mono.coeff *= rational_pochhammer(beta, m) / den;
  mono.exps[static_cast<size_t>(t_var)] -= m;
  mono.exps[static_cast<size_t>(u_var)] += m;
  return mono;
}

Monomial apply_word(const OperatorWord& word, Monomial mono) {
  for (auto it = word.rbegin(); it != word.rend(); ++it) {
    switch (it->kind) {
      case OperatorAtom::Kind::Derive:
        mono = apply_derive(it->var, it->order, std::move(mono));
        break;
      case OperatorAtom::Kind::Integrate:
        mono = apply_integrate(it->var, it->order, std::move(mono));
        break;
      case OperatorAtom::Kind::MultiplyPower:
        mono.exps[static_cast<size_t>(it->var)] += it->exponent;
        break;
      case OperatorAtom::Kind::ScaleByIndeterminate:
        mono.indet[static_cast<size_t>(it->tag)] += 1;
        break;
    }
  }
  return mono;
}

IndeterminateSeries expand_neg_power(const NegPowerFactor& factor,
                                     const Monomial& target,
                                     const ExpansionPolicy& policy) {
  return expand_product(std::vector<NegPowerFactor>{factor}, target, policy);
}

IndeterminateSeries expand_product(const std::vector<NegPowerFactor>& factors,
                                   const Monomial& target,
                                   const ExpansionPolicy& policy) {
  if (policy.total_order < 0) throw DomainError("expand_product: negative truncation order");

  struct FlatTerm {
    Phases phases;
    size_t factor_index;
    int degree_total;
  };
  std::vector<FlatTerm> flat;
  for (size_t f = 0; f < factors.size(); ++f) {
    for (const TaggedTerm& term : factors[f].terms) {
      FlatTerm ft{classify(term), f, 0};
      ft.degree_total = degree_total(ft.phases.degree);
      if (ft.degree_total <= 0) {
        throw DomainError("expand_product: a tagged term does not raise the indeterminate degree");
      }
      flat.push_back(std::move(ft));
    }
  }

  IndeterminateSeries out;

  // Applies the count vector to the target and merges the result.
  std::vector<int> counts(flat.size(), 0);
  const auto emit = [&]() {
    Monomial mono = target;
    Rational coeff = target.coeff;
    mono.coeff = 1;  // reassembled below

    // Binomial/multinomial coefficient: one Pochhammer per factor over the
    // factor's total application count, divided by the per-term factorials.
    std::vector<int> factor_counts(factors.size(), 0);
    for (size_t i = 0; i < flat.size(); ++i) {
      factor_counts[flat[i].factor_index] += counts[i];
    }
    for (size_t f = 0; f < factors.size(); ++f) {
      coeff *= rational_pochhammer(factors[f].alpha, factor_counts[f]);
    }
    for (size_t i = 0; i < flat.size(); ++i) {
      coeff /= rational_factorial(counts[i]);
      coeff *= rational_pow(flat[i].phases.scale, counts[i]);
    }

    Degree4 degree{0, 0, 0, 0};
    for (size_t i = 0; i < flat.size(); ++i) {
      for (int d = 0; d < kIndetCount; ++d) {
        degree[static_cast<size_t>(d)] +=
            counts[i] * flat[i].phases.degree[static_cast<size_t>(d)];
      }
    }

    // Phase 1: pre-multiplications.
    for (size_t i = 0; i < flat.size(); ++i) {
      for (int v = 0; v < kVarCount; ++v) {
        mono.exps[static_cast<size_t>(v)] +=
            counts[i] * flat[i].phases.pre[static_cast<size_t>(v)];
      }
    }
    // Phase 2: integrations, jointly per variable.
    for (int v = 0; v < kVarCount; ++v) {
      int total = 0;
      for (size_t i = 0; i < flat.size(); ++i) {
        total += counts[i] * flat[i].phases.integ[static_cast<size_t>(v)];
      }
      if (total == 0) continue;
      Rational& lambda = mono.exps[static_cast<size_t>(v)];
      for (int s = 1; s <= total; ++s) {
        const Rational factor = lambda + s;
        if (factor == 0) {
          throw PoleError("expand_product: integration pole on t" + std::to_string(v + 1) +
                          " (exponent " + rat_str(lambda) + ")");
        }
        coeff /= factor;
      }
      lambda += total;
    }
    // Phase 3: derivations, jointly per variable.
    for (int v = 0; v < kVarCount; ++v) {
      int total = 0;
      for (size_t i = 0; i < flat.size(); ++i) {
        total += counts[i] * flat[i].phases.deriv[static_cast<size_t>(v)];
      }
      if (total == 0) continue;
      Rational& lambda = mono.exps[static_cast<size_t>(v)];
      for (int s = 0; s < total; ++s) coeff *= (lambda - s);
      lambda -= total;
    }
    // Phase 4: post-multiplications.
    for (size_t i = 0; i < flat.size(); ++i) {
      for (int v = 0; v < kVarCount; ++v) {
        mono.exps[static_cast<size_t>(v)] +=
            counts[i] * flat[i].phases.post[static_cast<size_t>(v)];
      }
    }

    mono.coeff = coeff;
    auto [it, inserted] = out.emplace(degree, mono);
    if (!inserted) {
      if (!same_shape(it->second, mono)) {
        throw DomainError("expand_product: incompatible monomials at one multidegree");
      }
      it->second.coeff += mono.coeff;
    }
  };

  // Enumerate count vectors with total weighted degree <= N.
  const auto recurse = [&](auto&& self, size_t i, int budget) -> void {
    if (i == flat.size()) {
      emit();
      return;
    }
    const int step = flat[i].degree_total;
    for (int k = 0; k * step <= budget; ++k) {
      counts[i] = k;
      self(self, i + 1, budget - k * step);
    }
    counts[i] = 0;
  };
  recurse(recurse, 0, policy.total_order);
  return out;
}

Rational k2_series_coefficient(const RationalK2Params& params, const MultiIndex4& idx) {
  const Rational num = rational_pochhammer(params.a, idx.total()) *
                       rational_pochhammer(params.b, idx.m + idx.n + idx.q) *
                       rational_pochhammer(params.c, idx.p);
  const Rational den = rational_pochhammer(params.e1, idx.m) *
                       rational_pochhammer(params.e2, idx.n) *
                       rational_pochhammer(params.e3, idx.p) *
                       rational_pochhammer(params.e4, idx.q) *
                       rational_factorial(idx.m) * rational_factorial(idx.n) *
                       rational_factorial(idx.p) * rational_factorial(idx.q);
  if (den == 0) {
    if (num == 0) return 0;
    throw PoleError("k2_series_coefficient: denominator Pochhammer vanished");
  }
  return num / den;
}

Rational gauss_series_coefficient(const Rational& alpha, const Rational& beta,
                                  const Rational& gamma, int n) {
  const Rational num = rational_pochhammer(alpha, n) * rational_pochhammer(beta, n);
  const Rational den = rational_pochhammer(gamma, n) * rational_factorial(n);
  if (den == 0) {
    if (num == 0) return 0;
    throw PoleError("gauss_series_coefficient: (gamma)_n vanished");
  }
  return num / den;
}

namespace {

// Shared helper: check one lemma form, return first mismatching order or -1.
int check_lemma_form(const Rational& alpha, const Rational& beta,
                     const Rational& gamma, int order, LemmaForm form,
                     Rational& worst) {
  // Variables: slot 0 = t, slot 1 = u (3.4) or x (3.5).
  Monomial target;
  target.exps[0] = beta - 1;
  target.exps[1] = gamma - 1;

  NegPowerFactor factor;
  factor.alpha = alpha;
  TaggedTerm term;
  term.degree = {1, 0, 0, 0};
  if (form == LemmaForm::eq_3_4) {
    term.word = shift_word(0, 1);
  } else {
    // (1 - D_t D_x^{-1} t)^{-alpha}: no inverse-power atom; the x-power of the
    // result grows with the order instead.
    term.word = OperatorWord{derive_atom(0, 1), integrate_atom(1, 1),
                             multiply_power_atom(0, 1)};
  }
  factor.terms.push_back(term);

  ExpansionPolicy policy;
  policy.total_order = order;
  const IndeterminateSeries series = expand_neg_power(factor, target, policy);

  int first_mismatch = -1;
  for (int k = 0; k <= order; ++k) {
    const Degree4 key{k, 0, 0, 0};
    const auto it = series.find(key);
    Rational computed = 0;
    bool shape_ok = true;
    if (it != series.end()) {
      computed = it->second.coeff;
      Monomial expected_shape = target;
      if (form == LemmaForm::eq_3_5) expected_shape.exps[1] = gamma - 1 + k;
      shape_ok = same_shape(it->second, expected_shape);
    }
    const Rational expected = gauss_series_coefficient(alpha, beta, gamma, k);
    if (computed != expected || !shape_ok) {
      if (first_mismatch < 0) first_mismatch = k;
      const Rational dev = boost::multiprecision::abs(computed - expected);
      if (dev > worst) worst = dev;
      if (!shape_ok && worst == 0) worst = 1;  // shape error with equal coeff
    }
  }
  return first_mismatch;
}

}  // namespace

LemmaCheck verify_lemma1(const Rational& alpha, const Rational& beta,
                         const Rational& gamma, int order, LemmaForm form) {
  if (order < 0) throw DomainError("verify_lemma1: negative order");
  if (is_nonpositive_integer(gamma)) {
    throw PoleError("verify_lemma1: gamma = " + rat_str(gamma) +
                    " is a nonpositive integer (lower-parameter pole)");
  }
  LemmaCheck check;
  Rational worst = 0;
  std::ostringstream notes;
  bool ok = true;
  if (form == LemmaForm::eq_3_4 || form == LemmaForm::both) {
    const int mis = check_lemma_form(alpha, beta, gamma, order, LemmaForm::eq_3_4, worst);
    notes << "(3.4): " << (mis < 0 ? "exact match" : "first mismatch at order " + std::to_string(mis));
    ok = ok && mis < 0;
  }
  if (form == LemmaForm::both) notes << "; ";
  if (form == LemmaForm::eq_3_5 || form == LemmaForm::both) {
    const int mis = check_lemma_form(alpha, beta, gamma, order, LemmaForm::eq_3_5, worst);
    notes << "(3.5): " << (mis < 0 ? "exact match" : "first mismatch at order " + std::to_string(mis));
    ok = ok && mis < 0;
  }
  check.ok = ok;
  check.worst_deviation = worst.convert_to<double>();
  check.notes = notes.str();
  return check;
}

TheoremCheck verify_theorem31(const RationalK2Params& params, int order,
                              TheoremForm form) {
  if (order < 0) throw DomainError("verify_theorem31: negative order");
  for (const Rational* e : {&params.e1, &params.e2, &params.e3, &params.e4}) {
    if (is_nonpositive_integer(*e)) {
      throw PoleError("verify_theorem31: lower parameter " + rat_str(*e) +
                      " is a nonpositive integer");
    }
  }

  Monomial target;
  std::vector<NegPowerFactor> factors;
  std::ostringstream notes;

  if (form == TheoremForm::eq_3_7) {
    // Variables t1..t5; target t1^{a-1} t2^{e1-1} t3^{e2-1} t4^{e3-1} t5^{e4-1}.
    // The printed target has t3 twice (t3^{e2-1} t3^{e3-1}); the right-hand
    // side uses t4^{e3-1}, which is what we encode.
    target.exps = {params.a - 1, params.e1 - 1, params.e2 - 1,
                   params.e3 - 1, params.e4 - 1, 0};
    NegPowerFactor f1;  // (1 - x T12 - y T13 - u T15)^{-b}
    f1.alpha = params.b;
    f1.terms.push_back(TaggedTerm{{1, 0, 0, 0}, 1, shift_word(0, 1)});
    f1.terms.push_back(TaggedTerm{{0, 1, 0, 0}, 1, shift_word(0, 2)});
    f1.terms.push_back(TaggedTerm{{0, 0, 0, 1}, 1, shift_word(0, 4)});
    NegPowerFactor f2;  // (1 - z T14)^{-c}
    f2.alpha = params.c;
    f2.terms.push_back(TaggedTerm{{0, 0, 1, 0}, 1, shift_word(0, 3)});
    factors = {f1, f2};
    notes << "form (3.7); printed target normalized to t4^{e3-1}; ";
  } else {
    // Variables t1..t6; target t1^{b-1} t2^{c-1} t3^{e1-1} ... t6^{e4-1}.
    target.exps = {params.b - 1, params.c - 1, params.e1 - 1,
                   params.e2 - 1, params.e3 - 1, params.e4 - 1};
    NegPowerFactor f;  // (1 - x T13 - y T14 - z T25 - u T16)^{-a}
    f.alpha = params.a;
    f.terms.push_back(TaggedTerm{{1, 0, 0, 0}, 1, shift_word(0, 2)});
    f.terms.push_back(TaggedTerm{{0, 1, 0, 0}, 1, shift_word(0, 3)});
    f.terms.push_back(TaggedTerm{{0, 0, 1, 0}, 1, shift_word(1, 4)});
    f.terms.push_back(TaggedTerm{{0, 0, 0, 1}, 1, shift_word(0, 5)});
    factors = {f};
    notes << "form (3.8); ";
  }
  notes << "12-slot K2 bracket read as the (1.1) coefficient pattern "
           "(a)_{m+n+p+q}(b)_{m+n+q}(c)_p";

  ExpansionPolicy policy;
  policy.total_order = order;
  const IndeterminateSeries series = expand_product(factors, target, policy);

  TheoremCheck check;
  check.notes = notes.str();
  // Lexicographic scan over all multidegrees with total <= order.
  for (int m = 0; m <= order; ++m) {
    for (int n = 0; n + m <= order; ++n) {
      for (int p = 0; p + n + m <= order; ++p) {
        for (int q = 0; q + p + n + m <= order; ++q) {
          const MultiIndex4 idx{m, n, p, q};
          const Degree4 key{m, n, p, q};
          const auto it = series.find(key);
          Rational computed = 0;
          bool shape_ok = true;
          if (it != series.end()) {
            computed = it->second.coeff;
            Monomial expected_shape = target;
            shape_ok = same_shape(it->second, expected_shape);
          }
          const Rational expected = k2_series_coefficient(params, idx);
          if (computed != expected || !shape_ok) {
            if (!check.found_mismatch) {
              check.found_mismatch = true;
              check.first_mismatch = idx;
            }
          }
        }
      }
    }
  }
  check.ok = !check.found_mismatch;
  return check;
}

}  // namespace exton::opcalc
