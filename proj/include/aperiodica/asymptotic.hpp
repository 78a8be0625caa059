#pragma once

#include <optional>

#include "aperiodica/periodic.hpp"

namespace aperiodica {

/// One rung of a tail ladder: the measured sup over { t in D : |t| >= threshold }.
struct LadderPoint {
  double threshold = 0.0;
  double value = 0.0;
  std::size_t points = 0; // admissible points behind the sup; 0 = rung saw nothing
};

/// Pass needs margins that never increase (beyond slack) and a final rung
/// under tol. Non-monotone margins and an unreachable final rung are
/// indeterminate: a finite window cannot certify a limit from them.
Verdict ladder_verdict(const std::vector<LadderPoint>& rungs, double tol, double slack = 0.0);

/// Tail cutoffs {R/4, 3R/8, R/2}; the last rung is the outer shell bound.
std::vector<double> default_tail_ladder(const Domain& d);

/// Shift law plus the sets it is tested on. Uniformity over a finite
/// parameter family is carried by the component axis of the sample (sup
/// value norm), so it needs no field here.
struct AsymptoticSpec {
  PeriodSpec shift;                     // joint law; omega may be empty for quasi classes
  std::vector<PeriodSpec> axis_shifts;  // per-axis laws; omega holds the one scalar omega_j
  DomainSubset d;                       // admissible set D (empty mask = whole window)
  std::vector<DomainSubset> dj;         // per-axis admissible sets D_j
  DomainSubset iprime;                  // shift candidate set I' for quasi classes
  std::vector<double> tail_ladder;      // T_1 < ... < T_r; empty = default ladder
};

struct DecayReport {
  Verdict verdict = Verdict::Indeterminate;
  std::vector<LadderPoint> margins;
  double tolerance = 0.0;
  std::string klass = "vanishing";
  std::string note;
};

/// sup ||Q|| over D_T per rung. Tolerance defaults to 5% of the sup of ||Q||
/// over D: "vanishes" has to mean small relative to the function itself.
DecayReport vanishing_check(const SampledFunction& q, const DomainSubset& d,
                            std::vector<double> tail_ladder = {},
                            std::optional<double> tol = {});

struct SAsymptoticReport {
  Verdict verdict = Verdict::Indeterminate;
  std::vector<LadderPoint> margins; // sup_{t in D_T} ||F(t+omega) - c F(t)||
  double tolerance = 0.0;           // applied tolerance, snapping included
  double snap_bound = 0.0;
  ShiftSnap snap;
  std::string klass = "s-asymptotic";
  std::string note;
};

/// Tail-ladder version of check_periodic: the defect sup is taken over
/// D_T only (the shifted point just has to stay inside the window), and the
/// verdict demands decay below tolerance instead of a single sup.
SAsymptoticReport s_asymptotic_check(const SampledFunction& f, const AsymptoticSpec& spec,
                                     std::optional<double> tol = {});

/// Axis laws (omega_j e_j, c_j), each on its own admissible set spec.dj[j].
std::vector<SAsymptoticReport> s_asymptotic_axiswise(const SampledFunction& f,
                                                     const AsymptoticSpec& spec,
                                                     std::optional<double> tol = {});

struct QuasiWitness {
  RVec t0;            // ball center in I'
  RVec tau;           // accepted shift in B(t0, l) and I'
  double m = 0.0;     // tail cutoff where the defect fell under eps
  double defect = 0.0;
};

struct QuasiOptions {
  std::vector<double> l_ladder; // ball radii; empty = max extent * {1/16,1/8,1/4,1/2,1}
  std::vector<double> m_ladder; // tail cutoffs; empty = spec ladder or default
  int max_t0 = 24;              // sampled ball centers
  int max_tau = 24;             // candidates tried per center
  Index sup_stride = 1;
  double t0_reach = 0.5;        // centers kept within reach * R
};

struct QuasiReport {
  Verdict verdict = Verdict::Indeterminate;
  double eps = 0.0;
  double l = kInf;                     // smallest accepted ball radius
  std::vector<QuasiWitness> witnesses; // one per center at the accepted radius
  std::vector<LadderPoint> margins;    // tail ladder of the worst accepted witness
  std::size_t centers = 0;
  std::string klass = "quasi-asymptotic";
  std::string note;
};

/// For every sampled center t0 in I', hunt a shift tau in B(t0, l) (also in
/// I') whose defect sup { ||F(t+tau) - c F(t)|| : t, t+tau in D_M } drops
/// under eps at some rung M. The smallest ladder radius l where every center
/// produces a witness is accepted. Fail flips to indeterminate when the best
/// candidate was still decaying at the deepest rung the window affords.
QuasiReport quasi_asymptotic_check(const SampledFunction& f, const AsymptoticSpec& spec,
                                   double eps, const QuasiOptions& opt = {});

std::vector<QuasiReport> quasi_asymptotic_sweep(const SampledFunction& f,
                                                const AsymptoticSpec& spec,
                                                const std::vector<double>& eps_list,
                                                const QuasiOptions& opt = {});

struct QuasiBand {
  double tau_lo = 0.0;
  double tau_hi = 0.0;
  double m = 0.0;          // tail cutoff used for this band
  QuasiWitness best;       // least tail defect found in the band
  std::size_t candidates = 0;
};

struct QuasiRecurrenceReport {
  Verdict verdict = Verdict::Indeterminate;
  double tolerance = 0.0;
  std::vector<QuasiBand> bands;
  std::string klass = "quasi-uniform-recurrence";
  std::string note;
};

struct QuasiUrOptions {
  double tau_max = 0.0; // largest |tau| band; 0 = auto, widened until bands fill
  int max_tau = 24;     // candidates per band
  Index sup_stride = 1;
  std::vector<double> m_ladder;
};

/// K bands of |tau| rising toward tau_max with tail cutoffs M_k rising toward
/// the outer shell; every band must hold a shift in I' whose defect over
/// { t, t+tau in D_{M_k} } stays under tol.
QuasiRecurrenceReport quasi_uniform_recurrence_check(const SampledFunction& f,
                                                     const AsymptoticSpec& spec, int k_bands,
                                                     std::optional<double> tol = {},
                                                     const QuasiUrOptions& opt = {});

struct PerturbationReport {
  DecayReport decay;      // Q on D
  QuasiReport base;       // F
  QuasiReport perturbed;  // F + Q at eps inflated by the Q tail bound
  double inflation = 0.0; // (1 + |c|) * sup ||Q|| on the first tail rung
  bool pass = false;      // perturbed verdict matches the base verdict
};

/// Adding a vanishing Q must not change the classification; throws when Q
/// fails vanishing_check on D.
PerturbationReport perturbation_property(const SampledFunction& f, const SampledFunction& q,
                                         const AsymptoticSpec& spec, double eps,
                                         const QuasiOptions& opt = {});

struct TelescopeReport {
  std::vector<SAsymptoticReport> axis_reports;
  SAsymptoticReport joint;       // omega = sum omega_j e_j, c = prod c_j
  double defect_bound = 0.0;     // sum_k |c_1 .. c_{k-1}| * (axis-k defect over all of D_k)
  bool bound_holds = false;      // every joint margin <= defect_bound (+ slack)
  std::size_t combined_points = 0;
  Verdict verdict = Verdict::Indeterminate;
};

/// Chains the axis laws into the joint one. The joint check runs on the set
/// of t whose partial shifts t + sum_{j>k} omega_j e_j land in D_k for every
/// k, where the axiswise defects add up (weighted by the prefix factors).
TelescopeReport telescope_combine(const SampledFunction& f, const AsymptoticSpec& spec,
                                  std::optional<double> tol = {});

struct DecompositionReport {
  double mismatch = 0.0;     // sup ||F - F0 - Q||
  double mismatch_tol = 0.0;
  PeriodicReport periodic;   // F0 against the shift law
  DecayReport decay;         // Q on D
  SAsymptoticReport s_check; // F inherits the law on D
  bool pass = false;
};

/// F = F0 + Q with F0 exactly periodic and Q vanishing on D; a passing
/// decomposition must make the direct tail check pass too, so it is run and
/// folded into the verdict.
DecompositionReport decomposition_check(const SampledFunction& f, const SampledFunction& f0,
                                        const SampledFunction& q, const AsymptoticSpec& spec,
                                        std::optional<double> tol = {});

} // namespace aperiodica
