#include "aperiodica/periodic.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace aperiodica {

double default_defect_tolerance(const SampledFunction& f) {
  double h = 0.0;
  for (double s : f.grid.step) h = std::max(h, s);
  return 10.0 * h * lipschitz_estimate(f);
}

PeriodicReport check_periodic(const SampledFunction& f, const PeriodSpec& spec,
                              std::optional<double> tol, const DomainSubset* within) {
  if (static_cast<int>(spec.omega.size()) != f.grid.dim())
    throw std::invalid_argument("check_periodic: omega dimension mismatch");
  PeriodicReport rep;
  rep.snap = snap_shift(f.grid, spec.omega);
  rep.snap_bound = lipschitz_estimate(f) * rep.snap.sum_abs_error;
  ShiftScanOptions opt;
  if (within) opt.mask = within->mask.data();
  const auto st = sup_shift_defect(f, rep.snap.offsets, spec.c, opt);
  if (st.points == 0)
    throw std::runtime_error("check_periodic: the shifted window has no admissible overlap");
  rep.defect = st.sup;
  rep.points = st.points;
  rep.tolerance = tol.value_or(default_defect_tolerance(f)) + rep.snap_bound;
  rep.pass = rep.defect <= rep.tolerance;
  return rep;
}

std::vector<PeriodicReport> check_periodic_axiswise(const SampledFunction& f, const RVec& omegas,
                                                    const std::vector<Complex>& cs,
                                                    std::optional<double> tol) {
  const int n = f.grid.dim();
  if (static_cast<int>(omegas.size()) != n || static_cast<int>(cs.size()) != n)
    throw std::invalid_argument("check_periodic_axiswise: need one (omega, c) per axis");
  std::vector<PeriodicReport> out;
  out.reserve(n);
  for (int j = 0; j < n; ++j) {
    PeriodSpec s;
    s.omega.assign(n, 0.0);
    s.omega[j] = omegas[j];
    s.c = cs[j];
    out.push_back(check_periodic(f, s, tol));
  }
  return out;
}

SampledFunction profile_transform(const SampledFunction& f, const PeriodSpec& spec,
                                  const RVec* weights) {
  const int n = f.grid.dim();
  if (static_cast<int>(spec.omega.size()) != n)
    throw std::invalid_argument("profile_transform: omega dimension mismatch");
  std::vector<int> active;
  for (int j = 0; j < n; ++j)
    if (spec.omega[j] != 0.0) active.push_back(j);
  if (active.empty()) throw std::invalid_argument("profile_transform: all omega components vanish");
  RVec a(n, 0.0);
  if (weights) {
    if (static_cast<int>(weights->size()) != n)
      throw std::invalid_argument("profile_transform: weight dimension mismatch");
    double sum = 0.0;
    for (int j : active) sum += (*weights)[j];
    if (std::abs(sum - 1.0) > 1e-9)
      throw std::invalid_argument("profile_transform: weights over active axes must sum to 1");
    a = *weights;
  } else {
    for (int j : active) a[j] = 1.0 / static_cast<double>(active.size());
  }

  const Complex logc = std::log(spec.c);
  SampledFunction g = f;
  g.label = f.label + "~profiled";
  RVec p(n);
  for (std::size_t i = 0; i < f.size(); ++i) {
    f.grid.point(i, p.data());
    double s = 0.0;
    for (int j : active) s += a[j] * p[j] / spec.omega[j];
    const Complex factor = std::exp(-logc * s);
    for (int k = 0; k < f.width; ++k)
      g.values[i * static_cast<std::size_t>(f.width) + k] *= factor;
  }
  return g;
}

SampledFunction profile_transform_axis(const SampledFunction& f, int axis, double omega_j,
                                       Complex c_j) {
  if (axis < 0 || axis >= f.grid.dim())
    throw std::invalid_argument("profile_transform_axis: bad axis");
  if (omega_j == 0.0) throw std::invalid_argument("profile_transform_axis: omega must be nonzero");
  PeriodSpec s;
  s.omega.assign(f.grid.dim(), 0.0);
  s.omega[axis] = omega_j;
  s.c = c_j;
  RVec w(f.grid.dim(), 0.0);
  w[axis] = 1.0;
  return profile_transform(f, s, &w);
}

namespace {

// Enumerates shift offsets (excluding zero) whose overlap with the window
// keeps at least min_overlap of the points per axis, decimated by stride.
template <typename Fn>
void for_each_shift(const Grid& g, Index stride, double min_overlap, double max_shift_abs,
                    Fn&& fn) {
  const int n = g.dim();
  std::vector<Index> lo(n), hi(n), d(n);
  for (int j = 0; j < n; ++j) {
    const auto reach = static_cast<Index>(
        std::floor(static_cast<double>(g.count[j] - 1) * (1.0 - min_overlap)));
    lo[j] = -reach;
    hi[j] = reach;
    d[j] = lo[j];
  }
  RVec tau(n);
  for (;;) {
    bool zero = true;
    double abs2 = 0.0;
    for (int j = 0; j < n; ++j) {
      tau[j] = static_cast<double>(d[j]) * g.step[j];
      abs2 += tau[j] * tau[j];
      zero = zero && d[j] == 0;
    }
    if (!zero && std::sqrt(abs2) <= max_shift_abs) fn(d, tau);
    int ax = n - 1;
    while (ax >= 0) {
      d[ax] += stride;
      if (d[ax] <= hi[ax]) break;
      d[ax] = lo[ax];
      --ax;
    }
    if (ax < 0) break;
  }
}

} // namespace

EpsPeriodScanReport epsilon_period_scan(const SampledFunction& f, double eps, Complex c,
                                        const DomainSubset& candidates, double l_max,
                                        const EpsScanOptions& opt) {
  if (!(eps > 0.0)) throw std::invalid_argument("epsilon_period_scan: eps must be positive");
  EpsPeriodScanReport rep;
  rep.eps = eps;
  ShiftScanOptions sopt;
  sopt.decimate = opt.sup_stride;
  sopt.early_exit_above = eps; // only the pass/fail vs eps matters per shift
  for_each_shift(f.grid, std::max<Index>(1, opt.tau_stride), opt.min_overlap, opt.max_shift,
                 [&](const std::vector<Index>& d, const RVec& tau) {
                   ++rep.shifts_scanned;
                   const auto st = sup_shift_defect(f, d, c, sopt);
                   if (st.points == 0) return;
                   if (st.sup <= eps) rep.periods.push_back({tau, st.sup});
                 });

  if (rep.periods.empty()) {
    rep.covering_l = kInf;
    rep.relatively_dense = false;
    return rep;
  }
  // Covering radius of the period set over the candidate points.
  const int n = f.grid.dim();
  RVec p(n);
  double worst = 0.0;
  for (std::size_t i = 0; i < candidates.mask.size(); ++i) {
    if (!candidates.mask[i]) continue;
    f.grid.point(i, p.data());
    double best = kInf;
    for (const auto& per : rep.periods) {
      double acc = 0.0;
      for (int j = 0; j < n; ++j) {
        const double dd = per.tau[j] - p[j];
        acc += dd * dd;
      }
      best = std::min(best, acc);
      if (best == 0.0) break;
    }
    worst = std::max(worst, std::sqrt(best));
  }
  rep.covering_l = worst;
  rep.relatively_dense = worst <= l_max;
  return rep;
}

RecurrenceReport uniform_recurrence_check(const SampledFunction& f, Complex c,
                                          std::optional<double> tol,
                                          const RecurrenceOptions& opt) {
  RecurrenceReport rep;
  rep.tolerance = tol.value_or(default_defect_tolerance(f));
  const int n = f.grid.dim();
  // Band edges: |tau| up to half the window extent, overlap stays >= 1/2.
  double extent = kInf;
  for (int j = 0; j < n; ++j)
    extent = std::min(extent, static_cast<double>(f.grid.count[j] - 1) * f.grid.step[j]);
  const double reach = 0.5 * extent;
  const int bands = std::max(1, opt.bands);

  for (int b = 0; b < bands; ++b) {
    const double r_lo = reach * static_cast<double>(b) / bands;
    const double r_hi = reach * static_cast<double>(b + 1) / bands;
    RecurrenceStep best;
    best.defect = kInf;
    ShiftScanOptions sopt;
    sopt.decimate = opt.sup_stride;
    for_each_shift(f.grid, std::max<Index>(1, opt.tau_stride), 0.5, r_hi,
                   [&](const std::vector<Index>& d, const RVec& tau) {
                     double abs2 = 0.0;
                     for (double v : tau) abs2 += v * v;
                     const double r = std::sqrt(abs2);
                     if (r <= r_lo) return;
                     sopt.early_exit_above = best.defect;
                     const auto st = sup_shift_defect(f, d, c, sopt);
                     if (st.points == 0) return;
                     if (st.sup < best.defect) best = {tau, st.sup};
                   });
    if (best.defect < kInf) rep.ladder.push_back(best);
  }
  if (rep.ladder.empty()) {
    rep.verdict = Verdict::Indeterminate;
    return rep;
  }
  bool all_good = true;
  for (const auto& step : rep.ladder) all_good = all_good && step.defect <= rep.tolerance;
  rep.verdict = all_good ? Verdict::Pass : Verdict::Fail;
  return rep;
}

} // namespace aperiodica
