#include "aperiodica/varlex.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace aperiodica {

double ExponentField::p_minus() const {
  double m = kInf;
  for (double v : p) m = std::min(m, v);
  return m;
}

double ExponentField::p_plus() const {
  double m = 1.0;
  for (double v : p) m = std::max(m, v);
  return m;
}

bool ExponentField::is_constant() const {
  for (double v : p)
    if (v != p[0]) return false;
  return true;
}

void ExponentField::validate() const {
  if (p.empty()) throw std::invalid_argument("empty exponent field");
  for (double v : p)
    if (!(v >= 1.0)) throw std::invalid_argument("exponents must satisfy p(x) >= 1");
}

ExponentField ExponentField::constant(std::size_t size, double value) {
  ExponentField f;
  f.p.assign(size, value);
  f.validate();
  return f;
}

Modular modular(std::span<const double> abs_values, const ExponentField& p, double cell_volume) {
  if (abs_values.size() != p.p.size())
    throw std::invalid_argument("modular: value/exponent size mismatch");
  Modular m;
  double acc = 0.0;
  for (std::size_t i = 0; i < abs_values.size(); ++i) {
    const double t = abs_values[i];
    const double e = p.p[i];
    if (std::isinf(e)) {
      if (t > 1.0) {
        m.infinite = true;
        return m;
      }
      continue; // contributes 0
    }
    acc += std::pow(t, e);
  }
  acc *= cell_volume;
  if (!std::isfinite(acc)) {
    m.infinite = true;
    return m;
  }
  m.value = acc;
  return m;
}

namespace {

bool under_unit(std::span<const double> a, const ExponentField& p, double vol, double lambda) {
  double acc = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    const double t = a[i] / lambda;
    const double e = p.p[i];
    if (std::isinf(e)) {
      if (t > 1.0) return false;
      continue;
    }
    acc += std::pow(t, e);
    if (acc * vol > 1.0) return false; // early out; also catches overflow to inf
  }
  return acc * vol <= 1.0;
}

} // namespace

double luxemburg_norm(std::span<const double> abs_values, const ExponentField& p,
                      double cell_volume, const LuxemburgOptions& opt) {
  p.validate();
  if (abs_values.size() != p.p.size())
    throw std::invalid_argument("luxemburg_norm: value/exponent size mismatch");
  double max_abs = 0.0;
  for (double a : abs_values) {
    if (!(a >= 0.0)) throw std::invalid_argument("luxemburg_norm: negative magnitude");
    max_abs = std::max(max_abs, a);
  }
  if (max_abs == 0.0) return 0.0;

  const auto ok = [&](double lambda) { return under_unit(abs_values, p, cell_volume, lambda); };

  if (ok(opt.bracket_lo)) return opt.bracket_lo; // norm below resolution; treat as the floor
  double hi = std::max(max_abs, opt.bracket_lo * 4.0);
  double lo = opt.bracket_lo;
  if (ok(hi)) {
    while (hi * 0.25 > opt.bracket_lo && ok(hi * 0.25)) hi *= 0.25;
    lo = std::max(lo, hi * 0.25);
  } else {
    while (!ok(hi)) {
      lo = hi;
      hi *= 4.0;
      if (hi > opt.bracket_hi)
        throw std::runtime_error("luxemburg_norm: modular stays above 1 up to the bracket cap");
    }
  }
  // Bisect for the smallest lambda with rho(f/lambda) <= 1.
  while (hi - lo > opt.rel_tol * hi) {
    const double mid = 0.5 * (hi + lo);
    if (ok(mid))
      hi = mid;
    else
      lo = mid;
  }
  return hi;
}

InequalityReport holder_check(std::span<const double> f_abs, std::span<const double> g_abs,
                              const ExponentField& q, const ExponentField& p,
                              const ExponentField& r, double cell_volume) {
  if (f_abs.size() != g_abs.size()) throw std::invalid_argument("holder_check: size mismatch");
  for (std::size_t i = 0; i < q.p.size(); ++i) {
    const auto inv = [](double e) { return std::isinf(e) ? 0.0 : 1.0 / e; };
    if (std::abs(inv(q.p[i]) - inv(p.p[i]) - inv(r.p[i])) > 1e-9)
      throw std::invalid_argument("holder_check: exponents do not satisfy 1/q = 1/p + 1/r");
  }
  std::vector<double> prod(f_abs.size());
  for (std::size_t i = 0; i < prod.size(); ++i) prod[i] = f_abs[i] * g_abs[i];
  InequalityReport rep;
  rep.lhs = luxemburg_norm(prod, q, cell_volume);
  rep.rhs = 2.0 * luxemburg_norm(f_abs, p, cell_volume) * luxemburg_norm(g_abs, r, cell_volume);
  rep.slack = rep.rhs - rep.lhs;
  rep.holds = rep.lhs <= rep.rhs * (1.0 + 1e-9);
  return rep;
}

InequalityReport embedding_check(std::span<const double> f_abs, const ExponentField& q,
                                 const ExponentField& p, double cell_volume) {
  for (std::size_t i = 0; i < q.p.size(); ++i)
    if (q.p[i] > p.p[i] + 1e-12)
      throw std::invalid_argument("embedding_check: requires q <= p pointwise");
  const double measure = cell_volume * static_cast<double>(f_abs.size());
  InequalityReport rep;
  rep.lhs = luxemburg_norm(f_abs, q, cell_volume);
  rep.rhs = 2.0 * (1.0 + measure) * luxemburg_norm(f_abs, p, cell_volume);
  rep.slack = rep.rhs - rep.lhs;
  rep.holds = rep.lhs <= rep.rhs * (1.0 + 1e-9);
  return rep;
}

} // namespace aperiodica
