#include "aperiodica/asymptotic.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "aperiodica/corpus.hpp"
#include "detail.hpp"

namespace aperiodica {

namespace {

using detail::TauCandidate;
using detail::ball_candidates;
using detail::banded_candidates;
using detail::max_extent;
using detail::require_unbounded;
using detail::resolve_ladder;
using detail::resolve_set;
using detail::sample_centers;
using detail::tail_masks;

std::vector<LadderPoint> witness_ladder(const SampledFunction& f, Complex c, const RVec& tau,
                                        const std::vector<DomainSubset>& tails,
                                        const std::vector<double>& m_ladder, Index stride) {
  const ShiftSnap snap = snap_shift(f.grid, tau);
  std::vector<LadderPoint> out;
  for (std::size_t r = 0; r < m_ladder.size(); ++r) {
    ShiftScanOptions so;
    so.mask = tails[r].mask.data();
    so.mask_shifted = tails[r].mask.data();
    so.decimate = stride;
    const ScanStats s = sup_shift_defect(f, snap.offsets, c, so);
    out.push_back({m_ladder[r], s.points ? s.sup : 0.0, s.points});
  }
  return out;
}

} // namespace

Verdict ladder_verdict(const std::vector<LadderPoint>& rungs, double tol, double slack) {
  if (rungs.empty()) return Verdict::Indeterminate;
  const LadderPoint* prev = nullptr;
  for (const LadderPoint& r : rungs) {
    if (r.points == 0) continue;
    if (prev && r.value > prev->value + slack) return Verdict::Indeterminate;
    prev = &r;
  }
  // An unreachable deepest rung means the window cannot see the tail at all.
  if (prev == nullptr || rungs.back().points == 0) return Verdict::Indeterminate;
  return prev->value <= tol ? Verdict::Pass : Verdict::Fail;
}

std::vector<double> default_tail_ladder(const Domain& d) {
  if (d.radius <= 0.0) throw std::invalid_argument("default_tail_ladder: domain has no radius");
  return {0.25 * d.radius, 0.375 * d.radius, 0.5 * d.radius};
}

DecayReport vanishing_check(const SampledFunction& q, const DomainSubset& dset,
                            std::vector<double> tail_ladder, std::optional<double> tol) {
  const Grid& g = q.grid;
  const DomainSubset d = resolve_set(g, dset, "vanishing_check");
  const std::vector<double> ladder = resolve_ladder(q.domain, std::move(tail_ladder), {});

  DecayReport rep;
  const ScanStats whole = sup_norm(q, d.mask.data());
  rep.tolerance = tol.value_or(0.05 * whole.sup);
  for (double T : ladder) {
    const DomainSubset dt = d.tail(g, T);
    const ScanStats s = sup_norm(q, dt.mask.data());
    rep.margins.push_back({T, s.points ? s.sup : 0.0, s.points});
  }
  if (whole.points == 0) {
    rep.verdict = Verdict::Indeterminate;
    rep.note = "empty admissible set";
    return rep;
  }
  rep.verdict = ladder_verdict(rep.margins, rep.tolerance);
  return rep;
}

SAsymptoticReport s_asymptotic_check(const SampledFunction& f, const AsymptoticSpec& spec,
                                     std::optional<double> tol) {
  const Grid& g = f.grid;
  if (spec.shift.omega.size() != static_cast<std::size_t>(g.dim()))
    throw std::invalid_argument("s_asymptotic_check: omega dimension mismatch");
  const DomainSubset d = resolve_set(g, spec.d, "s_asymptotic_check");
  require_unbounded(g, f.domain, d, "s_asymptotic_check");
  const std::vector<double> ladder = resolve_ladder(f.domain, {}, spec.tail_ladder);

  SAsymptoticReport rep;
  rep.snap = snap_shift(g, spec.shift.omega);
  rep.snap_bound = lipschitz_estimate(f) * rep.snap.sum_abs_error;
  rep.tolerance = tol.value_or(default_defect_tolerance(f)) + rep.snap_bound;
  for (double T : ladder) {
    const DomainSubset dt = d.tail(g, T);
    ShiftScanOptions so;
    so.mask = dt.mask.data();
    const ScanStats s = sup_shift_defect(f, rep.snap.offsets, spec.shift.c, so);
    rep.margins.push_back({T, s.points ? s.sup : 0.0, s.points});
  }
  if (rep.margins.front().points == 0)
    throw std::runtime_error("s_asymptotic_check: no shift overlap on the first tail shell");
  rep.verdict = ladder_verdict(rep.margins, rep.tolerance);
  return rep;
}

std::vector<SAsymptoticReport> s_asymptotic_axiswise(const SampledFunction& f,
                                                     const AsymptoticSpec& spec,
                                                     std::optional<double> tol) {
  const int n = f.grid.dim();
  if (spec.axis_shifts.size() != static_cast<std::size_t>(n))
    throw std::invalid_argument("s_asymptotic_axiswise: need one shift law per axis");
  if (!spec.dj.empty() && spec.dj.size() != static_cast<std::size_t>(n))
    throw std::invalid_argument("s_asymptotic_axiswise: need one admissible set per axis");

  std::vector<SAsymptoticReport> out;
  out.reserve(static_cast<std::size_t>(n));
  for (int j = 0; j < n; ++j) {
    if (spec.axis_shifts[j].omega.size() != 1)
      throw std::invalid_argument("s_asymptotic_axiswise: axis law holds one scalar omega_j");
    AsymptoticSpec sub;
    sub.shift.omega.assign(static_cast<std::size_t>(n), 0.0);
    sub.shift.omega[static_cast<std::size_t>(j)] = spec.axis_shifts[j].omega[0];
    sub.shift.c = spec.axis_shifts[j].c;
    sub.d = spec.dj.empty() ? DomainSubset{} : spec.dj[static_cast<std::size_t>(j)];
    sub.tail_ladder = spec.tail_ladder;
    out.push_back(s_asymptotic_check(f, sub, tol));
  }
  return out;
}

QuasiReport quasi_asymptotic_check(const SampledFunction& f, const AsymptoticSpec& spec,
                                   double eps, const QuasiOptions& opt) {
  const Grid& g = f.grid;
  if (!(eps > 0.0)) throw std::invalid_argument("quasi_asymptotic_check: eps must be positive");
  const DomainSubset d = resolve_set(g, spec.d, "quasi_asymptotic_check");
  const DomainSubset ip = resolve_set(g, spec.iprime, "quasi_asymptotic_check: candidate set");
  require_unbounded(g, f.domain, d, "quasi_asymptotic_check");
  require_unbounded(g, f.domain, ip, "quasi_asymptotic_check: candidate set");

  const std::vector<double> m_ladder =
      resolve_ladder(f.domain, opt.m_ladder, spec.tail_ladder);
  std::vector<double> l_ladder = opt.l_ladder;
  if (l_ladder.empty()) {
    const double e = max_extent(g);
    l_ladder = {e / 16.0, e / 8.0, e / 4.0, e / 2.0, e};
  }
  for (std::size_t i = 0; i < l_ladder.size(); ++i)
    if (l_ladder[i] <= 0.0 || (i > 0 && l_ladder[i] <= l_ladder[i - 1]))
      throw std::invalid_argument("quasi_asymptotic_check: l ladder must increase");

  const std::vector<DomainSubset> tails = tail_masks(g, d, m_ladder);
  const std::vector<std::size_t> centers =
      sample_centers(g, ip, opt.t0_reach * f.domain.radius, opt.max_t0);

  QuasiReport rep;
  rep.eps = eps;
  rep.centers = centers.size();
  if (centers.empty()) {
    rep.note = "no ball centers within reach";
    return rep;
  }

  const Complex c = spec.shift.c;
  bool unresolved = false;
  for (double l : l_ladder) {
    std::vector<QuasiWitness> witnesses;
    bool ok = true;
    for (std::size_t center : centers) {
      const RVec t0 = g.point(center);
      const std::vector<TauCandidate> cands = ball_candidates(g, ip, t0, l, opt.max_tau);
      bool found = false;
      for (const TauCandidate& cand : cands) {
        const RVec tau = g.point(cand.flat);
        const ShiftSnap snap = snap_shift(g, tau);
        for (std::size_t r = 0; r < m_ladder.size(); ++r) {
          ShiftScanOptions so;
          so.mask = tails[r].mask.data();
          so.mask_shifted = tails[r].mask.data();
          so.decimate = opt.sup_stride;
          so.early_exit_above = eps;
          const ScanStats s = sup_shift_defect(f, snap.offsets, c, so);
          if (s.points == 0) break; // deeper rungs only shrink the overlap
          if (s.sup <= eps) {
            witnesses.push_back({t0, tau, m_ladder[r], s.sup});
            found = true;
            break;
          }
        }
        if (found) break;
      }
      if (!found) {
        ok = false;
        if (l == l_ladder.back() && !cands.empty()) {
          // Probe the nearest candidate over the whole ladder: a defect that
          // was still sinking at the deepest rung leaves the verdict open.
          const RVec tau = g.point(cands.front().flat);
          const std::vector<LadderPoint> probe =
              witness_ladder(f, c, tau, tails, m_ladder, opt.sup_stride);
          const LadderPoint& first = probe.front();
          const LadderPoint& last = probe.back();
          if (first.points > 0 && last.points > 0 && last.value > eps &&
              last.value < 0.9 * first.value)
            unresolved = true;
        }
        break;
      }
    }
    if (ok) {
      rep.verdict = Verdict::Pass;
      rep.l = l;
      rep.witnesses = std::move(witnesses);
      const auto worst = std::max_element(
          rep.witnesses.begin(), rep.witnesses.end(),
          [](const QuasiWitness& a, const QuasiWitness& b) { return a.defect < b.defect; });
      rep.margins = witness_ladder(f, c, worst->tau, tails, m_ladder, opt.sup_stride);
      rep.note = "every sampled center holds a witness";
      return rep;
    }
  }
  rep.verdict = unresolved ? Verdict::Indeterminate : Verdict::Fail;
  rep.note = unresolved ? "defect still sinking at the deepest tail the window affords"
                        : "some center has no admissible shift at any ladder radius";
  return rep;
}

std::vector<QuasiReport> quasi_asymptotic_sweep(const SampledFunction& f,
                                                const AsymptoticSpec& spec,
                                                const std::vector<double>& eps_list,
                                                const QuasiOptions& opt) {
  if (eps_list.empty())
    throw std::invalid_argument("quasi_asymptotic_sweep: eps list must be nonempty");
  std::vector<QuasiReport> out;
  out.reserve(eps_list.size());
  for (double eps : eps_list) out.push_back(quasi_asymptotic_check(f, spec, eps, opt));
  return out;
}

QuasiRecurrenceReport quasi_uniform_recurrence_check(const SampledFunction& f,
                                                     const AsymptoticSpec& spec, int k_bands,
                                                     std::optional<double> tol,
                                                     const QuasiUrOptions& opt) {
  const Grid& g = f.grid;
  if (k_bands < 2)
    throw std::invalid_argument("quasi_uniform_recurrence_check: need at least two bands");
  const DomainSubset d = resolve_set(g, spec.d, "quasi_uniform_recurrence_check");
  const DomainSubset ip =
      resolve_set(g, spec.iprime, "quasi_uniform_recurrence_check: candidate set");
  require_unbounded(g, f.domain, d, "quasi_uniform_recurrence_check");

  QuasiRecurrenceReport rep;
  rep.tolerance = tol.value_or(default_defect_tolerance(f));
  const std::vector<double> m_ladder = resolve_ladder(f.domain, opt.m_ladder, spec.tail_ladder);

  const double extent = max_extent(g);
  const double tau_cap = 0.45 * extent;
  // Bands reach past four tolerances so a linear drift cannot hide below tol,
  // yet stay shallow against the tail depth so the double limit has room.
  double tau_max = opt.tau_max > 0.0
                       ? opt.tau_max
                       : std::min(tau_cap, std::max(extent / 48.0, 4.0 * rep.tolerance));

  std::vector<std::vector<TauCandidate>> banded;
  for (int attempt = 0;; ++attempt) {
    banded = banded_candidates(g, ip, tau_max, k_bands, opt.max_tau);
    const bool filled = std::none_of(banded.begin(), banded.end(),
                                     [](const std::vector<TauCandidate>& b) { return b.empty(); });
    if (filled) break;
    if (attempt >= 6 || tau_max >= tau_cap) {
      rep.note = "shift set too sparse for the band ladder";
      return rep;
    }
    tau_max = std::min(tau_max * 2.0, tau_cap);
  }

  const double m_lo = m_ladder.front();
  const double m_hi = m_ladder.back();
  bool all_under = true;
  for (int k = 0; k < k_bands; ++k) {
    const auto& cands = banded[static_cast<std::size_t>(k)];
    QuasiBand band;
    band.m = m_lo + (m_hi - m_lo) * static_cast<double>(k) / (k_bands - 1);
    const double w = tau_max / k_bands;
    band.tau_lo = w * k;
    band.tau_hi = w * (k + 1);
    band.candidates = cands.size();
    band.best.defect = kInf;
    const DomainSubset dm = d.tail(g, band.m);
    for (const TauCandidate& cand : cands) {
      const RVec tau = g.point(cand.flat);
      const ShiftSnap snap = snap_shift(g, tau);
      ShiftScanOptions so;
      so.mask = dm.mask.data();
      so.mask_shifted = dm.mask.data();
      so.decimate = opt.sup_stride;
      const ScanStats s = sup_shift_defect(f, snap.offsets, spec.shift.c, so);
      if (s.points == 0) continue;
      if (s.sup < band.best.defect) band.best = {g.point(cand.flat), tau, band.m, s.sup};
      if (s.sup <= rep.tolerance) break;
    }
    if (band.best.defect > rep.tolerance) all_under = false;
    rep.bands.push_back(std::move(band));
  }

  if (all_under) {
    rep.verdict = Verdict::Pass;
    rep.note = "every band holds a shift under tolerance";
    return rep;
  }
  const double first = rep.bands.front().best.defect;
  const double last = rep.bands.back().best.defect;
  if (std::isfinite(first) && std::isfinite(last) && last > rep.tolerance &&
      last < 0.75 * first) {
    rep.verdict = Verdict::Indeterminate;
    rep.note = "band defects still sinking at the window edge";
  } else {
    rep.verdict = Verdict::Fail;
    rep.note = "some band keeps every shift above tolerance";
  }
  return rep;
}

PerturbationReport perturbation_property(const SampledFunction& f, const SampledFunction& q,
                                         const AsymptoticSpec& spec, double eps,
                                         const QuasiOptions& opt) {
  PerturbationReport rep;
  const DomainSubset d = resolve_set(f.grid, spec.d, "perturbation_property");
  rep.decay = vanishing_check(q, d, spec.tail_ladder, {});
  if (rep.decay.verdict != Verdict::Pass)
    throw std::invalid_argument("perturbation_property: Q does not vanish on D");
  rep.base = quasi_asymptotic_check(f, spec, eps, opt);
  rep.inflation = (1.0 + std::abs(spec.shift.c)) * rep.decay.margins.front().value;
  const SampledFunction sum = combine(f, q, Complex{1.0, 0.0}, Complex{1.0, 0.0});
  rep.perturbed = quasi_asymptotic_check(sum, spec, eps + rep.inflation, opt);
  rep.pass = rep.perturbed.verdict == rep.base.verdict;
  return rep;
}

TelescopeReport telescope_combine(const SampledFunction& f, const AsymptoticSpec& spec,
                                  std::optional<double> tol) {
  const Grid& g = f.grid;
  const int n = g.dim();
  if (spec.axis_shifts.size() != static_cast<std::size_t>(n))
    throw std::invalid_argument("telescope_combine: need one shift law per axis");
  if (!spec.dj.empty() && spec.dj.size() != static_cast<std::size_t>(n))
    throw std::invalid_argument("telescope_combine: need one admissible set per axis");
  const std::vector<double> ladder = resolve_ladder(f.domain, {}, spec.tail_ladder);

  TelescopeReport rep;
  std::vector<DomainSubset> dsets;
  RVec joint_omega(static_cast<std::size_t>(n), 0.0);
  Complex joint_c{1.0, 0.0};
  for (int j = 0; j < n; ++j) {
    if (spec.axis_shifts[j].omega.size() != 1)
      throw std::invalid_argument("telescope_combine: axis law holds one scalar omega_j");
    dsets.push_back(resolve_set(g, spec.dj.empty() ? DomainSubset{} : spec.dj[j],
                                "telescope_combine"));
    joint_omega[static_cast<std::size_t>(j)] = spec.axis_shifts[j].omega[0];
    joint_c *= spec.axis_shifts[j].c;

    AsymptoticSpec sub;
    sub.shift.omega.assign(static_cast<std::size_t>(n), 0.0);
    sub.shift.omega[static_cast<std::size_t>(j)] = spec.axis_shifts[j].omega[0];
    sub.shift.c = spec.axis_shifts[j].c;
    sub.d = dsets.back();
    sub.tail_ladder = ladder;
    rep.axis_reports.push_back(s_asymptotic_check(f, sub, tol));
  }

  // Chain bound: the joint defect telescopes into per-axis defects taken at
  // partially shifted points, weighted by the prefix factors |c_1 .. c_{k-1}|.
  const ShiftSnap joint_snap = snap_shift(g, joint_omega);
  double bound = 0.0;
  double prefix = 1.0;
  for (int k = 0; k < n; ++k) {
    std::vector<Index> delta(static_cast<std::size_t>(n), 0);
    delta[static_cast<std::size_t>(k)] = joint_snap.offsets[static_cast<std::size_t>(k)];
    ShiftScanOptions so;
    so.mask = dsets[static_cast<std::size_t>(k)].mask.data();
    const ScanStats s = sup_shift_defect(f, delta, spec.axis_shifts[k].c, so);
    bound += prefix * s.sup;
    prefix *= std::abs(spec.axis_shifts[k].c);
  }
  rep.defect_bound = bound;

  // Admissible joint points: every partial shift t + sum_{j>k} omega_j e_j
  // must land in D_k (and on a valid sample), so each telescoped term is
  // covered by its axis sup.
  DomainSubset comb;
  comb.mask.assign(g.size(), 0);
  comb.label = "telescoped";
  const std::vector<Index> strides = g.strides();
  std::vector<Index> idx(static_cast<std::size_t>(n), 0);
  for (std::size_t flat = 0; flat < g.size(); ++flat) {
    bool ok = true;
    for (int k = 0; k < n && ok; ++k) {
      std::size_t shifted = flat;
      for (int j = k + 1; j < n; ++j) {
        const Index moved = idx[static_cast<std::size_t>(j)] +
                            joint_snap.offsets[static_cast<std::size_t>(j)];
        if (moved < 0 || moved >= g.count[j]) {
          ok = false;
          break;
        }
        shifted += static_cast<std::size_t>(
            (moved - idx[static_cast<std::size_t>(j)]) * strides[static_cast<std::size_t>(j)]);
      }
      ok = ok && dsets[static_cast<std::size_t>(k)].mask[shifted] && f.is_valid(shifted);
    }
    comb.mask[flat] = ok ? 1 : 0;
    int j = n - 1;
    while (j >= 0 && ++idx[static_cast<std::size_t>(j)] == g.count[j]) {
      idx[static_cast<std::size_t>(j)] = 0;
      --j;
    }
  }
  rep.combined_points = comb.count();
  if (!comb.reaches_outer_shell(g, f.domain))
    throw std::runtime_error("telescope_combine: combined admissible set misses the outer shell");

  AsymptoticSpec js;
  js.shift.omega = joint_omega;
  js.shift.c = joint_c;
  js.d = comb;
  js.tail_ladder = ladder;
  rep.joint = s_asymptotic_check(f, js, tol);

  const double slack = 1e-9 * (1.0 + bound);
  rep.bound_holds = true;
  for (const LadderPoint& m : rep.joint.margins)
    if (m.points > 0 && m.value > bound + slack) rep.bound_holds = false;

  rep.verdict = rep.joint.verdict;
  for (const SAsymptoticReport& ar : rep.axis_reports) {
    if (ar.verdict == Verdict::Fail) rep.verdict = Verdict::Fail;
    else if (ar.verdict == Verdict::Indeterminate && rep.verdict == Verdict::Pass)
      rep.verdict = Verdict::Indeterminate;
  }
  return rep;
}

DecompositionReport decomposition_check(const SampledFunction& f, const SampledFunction& f0,
                                        const SampledFunction& q, const AsymptoticSpec& spec,
                                        std::optional<double> tol) {
  DecompositionReport rep;
  const DomainSubset d = resolve_set(f.grid, spec.d, "decomposition_check");
  const SampledFunction sum = combine(f0, q, Complex{1.0, 0.0}, Complex{1.0, 0.0});
  rep.mismatch = sup_difference(f, sum).sup;
  rep.mismatch_tol = 1e-9 * (1.0 + sup_norm(f).sup);
  rep.periodic = check_periodic(f0, spec.shift);
  rep.decay = vanishing_check(q, d, spec.tail_ladder, {});
  AsymptoticSpec js;
  js.shift = spec.shift;
  js.d = d;
  js.tail_ladder = spec.tail_ladder;
  rep.s_check = s_asymptotic_check(f, js, tol);
  rep.pass = rep.mismatch <= rep.mismatch_tol && rep.periodic.pass &&
             rep.decay.verdict == Verdict::Pass && rep.s_check.verdict == Verdict::Pass;
  return rep;
}

} // namespace aperiodica
