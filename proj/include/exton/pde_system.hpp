#pragma once

#include <array>
#include <functional>
#include <string>
#include <vector>

#include "exton/series.hpp"

// The system of four second-order PDEs attached to K2, its sixteen Frobenius
// solutions x^alpha y^beta z^gamma t^delta * K2(shifted parameters), and
// diagnostics: numeric residuals, coefficient recurrences, the symbolic
// exponent/parameter table, and a rank test for linear independence.

namespace exton {

/// One Frobenius exponent quadruple (alpha, beta, gamma, delta).
struct ExponentQuadruple {
  double alpha = 0.0;
  double beta = 0.0;
  double gamma = 0.0;
  double delta = 0.0;

  double operator[](int i) const;  // i in 0..3
};

/// Indicial roots per direction: {0, 1-e_i}, flagged degenerate when they
/// coincide (e_i = 1).
struct IndicialRoots {
  std::array<std::array<double, 2>, 4> roots;
  std::array<bool, 4> degenerate;
};
IndicialRoots indicial_roots(const K2Params& params);

/// The sixteen exponent quadruples, in the canonical order: number of
/// nonzero slots ascending, slots ordered (x, y, z, t) lexicographically.
std::array<ExponentQuadruple, 16> exponent_table(const K2Params& params);

/// Shifted upper/lower parameters attached to an exponent quadruple:
///   A = alpha+beta+gamma+delta+a,  B = alpha+beta+delta+b,  C = gamma+c,
///   E_i = 2*(i-th exponent) + e_i.
struct TransformedParams {
  double A = 0.0, B = 0.0, C = 0.0;
  double E1 = 1.0, E2 = 1.0, E3 = 1.0, E4 = 1.0;

  K2Params as_k2params() const;
};
TransformedParams transformed_params(const ExponentQuadruple& exps, const K2Params& params);

/// Full description of solution j (1-based).
struct SolutionSpec {
  int index = 1;
  ExponentQuadruple exponents;
  K2Params shifted;  // parameters of the K2 factor
};
SolutionSpec solution_spec(int j, const K2Params& params);

/// Value of solution j at a point. Coordinates raised to fractional
/// exponents must be positive (DomainError otherwise); zero coordinates are
/// accepted only when the corresponding exponent is a nonnegative integer.
SeriesValue solution_value(int j, const K2Params& params, const Point4& point,
                           const TruncationPolicy& policy);

/// Supplies mixed partials u_{x^i y^j z^k t^l} of some candidate solution at
/// a fixed point; orders.total() <= 2 is all the residual needs.
using PartialProvider = std::function<double(const MultiIndex4& orders)>;

PartialProvider k2_partial_provider(const K2Params& params, const Point4& point,
                                    const TruncationPolicy& policy);
PartialProvider solution_partial_provider(int j, const K2Params& params,
                                          const Point4& point,
                                          const TruncationPolicy& policy);
/// Constant function; only the constant 0 solves the system (a*b != 0), so
/// this is the standard negative probe.
PartialProvider constant_partial_provider(double value);

/// Residual of equation eq (1..4) of the second-order system at the point.
double pde_residual_2nd(int eq, const PartialProvider& u, const K2Params& params,
                        const Point4& point);

/// Worst relative violation of the term-coefficient recurrence implied by
/// equation eq of the Euler-operator system, scanned over all indices with
/// total degree <= bound. The recurrence is stated on full term coefficients
/// T = Delta/(m! n! p! q!), e.g. equation 1:
///   (e1+m)(m+1) T(m+1,n,p,q) = (a+m+n+p+q)(b+m+n+q) T(m,n,p,q).
/// The overload taking a rule checks an arbitrary bare-Delta coefficient map
/// (fault injection / detector sanity).
double coefficient_recurrence_check(int eq, const K2Params& params, int bound);
double coefficient_recurrence_check(int eq, const K2Params& params, int bound,
                                    const CoefficientRule& rule);

/// Linear combination sum_j k_j * (solution j).
struct GlobalSolutionCoeffs {
  std::array<double, 16> k{};
};
double global_solution(const GlobalSolutionCoeffs& coeffs, const K2Params& params,
                       const Point4& point, const TruncationPolicy& policy);

/// Numerical linear-independence diagnostic: the 16x16 matrix of solution
/// values at 16 sample points, judged by its singular values.
struct IndependenceDiagnostic {
  double smallest_singular = 0.0;
  double largest_singular = 0.0;
  bool full_rank = false;
  std::vector<std::string> warnings;  // degeneracy notes (integer e_i, ...)
};
IndependenceDiagnostic independence_check(const K2Params& params,
                                          const std::vector<Point4>& points,
                                          const TruncationPolicy& policy,
                                          double rank_tol = 1e-8);

// ---------------------------------------------------------------------------
// Symbolic layer: parameters of the sixteen solutions as exact affine
// expressions in (a, b, c, e1..e4) with integer coefficients, so the derived
// table can be compared against the printed solution lists literally.

struct ParamExpr {
  int constant = 0;
  int ca = 0, cb = 0, cc = 0;
  std::array<int, 4> ce{0, 0, 0, 0};

  bool operator==(const ParamExpr&) const = default;
  double eval(const K2Params& params) const;
  std::string str() const;  // e.g. "2 - e1 - e3 + a"
};

ParamExpr sym_const(int v);
ParamExpr sym_a();
ParamExpr sym_b();
ParamExpr sym_c();
ParamExpr sym_e(int slot);  // 1..4
ParamExpr operator+(ParamExpr lhs, const ParamExpr& rhs);
ParamExpr operator-(ParamExpr lhs, const ParamExpr& rhs);
ParamExpr operator*(int k, ParamExpr rhs);

/// Parameters (A, B, C, E1..E4) of solution j in a fixed order.
using SymbolicParamList = std::array<ParamExpr, 7>;

/// Derived from the exponent table and the shift formulas.
SymbolicParamList derived_symbolic_params(int j);
/// Transcribed from the printed solution list, solution by solution.
SymbolicParamList printed_symbolic_params(int j);

}  // namespace exton
