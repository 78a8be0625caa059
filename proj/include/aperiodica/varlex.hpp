#pragma once

#include <span>

#include "aperiodica/types.hpp"

namespace aperiodica {

/// Pointwise exponent p(x) >= 1 on a quadrature mesh; +inf entries select the
/// threshold branch (0 for |f| <= lambda, infinite otherwise).
struct ExponentField {
  std::vector<double> p;

  double p_minus() const;
  double p_plus() const;
  bool is_constant() const;
  void validate() const;
  static ExponentField constant(std::size_t size, double value);
};

struct Modular {
  bool infinite = false;
  double value = 0.0; // meaningful only when !infinite
};

/// rho(f) = sum_x phi_{p(x)}(|f(x)|) * cell_volume on a uniform mesh.
Modular modular(std::span<const double> abs_values, const ExponentField& p, double cell_volume);

struct LuxemburgOptions {
  double rel_tol = 1e-10;
  double bracket_lo = 1e-12;
  double bracket_hi = 1e12;
};

/// inf{ lambda > 0 : rho(f / lambda) <= 1 } by bracketed bisection; returns 0
/// for f = 0 and throws when no lambda <= bracket_hi tames the modular.
double luxemburg_norm(std::span<const double> abs_values, const ExponentField& p,
                      double cell_volume, const LuxemburgOptions& opt = {});

struct InequalityReport {
  double lhs = 0.0;
  double rhs = 0.0;
  bool holds = false;
  double slack = 0.0; // rhs - lhs
};

/// ||fg||_q <= 2 ||f||_p ||g||_r, requiring 1/q = 1/p + 1/r pointwise.
InequalityReport holder_check(std::span<const double> f_abs, std::span<const double> g_abs,
                              const ExponentField& q, const ExponentField& p,
                              const ExponentField& r, double cell_volume);

/// ||f||_q <= 2 (1 + measure) ||f||_p, requiring q <= p pointwise.
InequalityReport embedding_check(std::span<const double> f_abs, const ExponentField& q,
                                 const ExponentField& p, double cell_volume);

} // namespace aperiodica
