#pragma once

#include <optional>

#include "aperiodica/scan.hpp"

namespace aperiodica {

/// Joint shift law F(t + omega) = c F(t).
struct PeriodSpec {
  RVec omega;
  Complex c{1.0, 0.0};
};

struct PeriodicReport {
  bool pass = false;
  double defect = 0.0;    // sup defect over the admissible overlap
  double tolerance = 0.0; // tolerance actually applied (includes snapping)
  double snap_bound = 0.0;
  ShiftSnap snap;
  std::size_t points = 0;
};

/// Default defect tolerance: 10 * (largest step) * finite-difference slope.
double default_defect_tolerance(const SampledFunction& f);

PeriodicReport check_periodic(const SampledFunction& f, const PeriodSpec& spec,
                              std::optional<double> tol = {},
                              const DomainSubset* within = nullptr);

/// Axis law F(t + omega_j e_j) = c_j F(t) for each axis separately.
std::vector<PeriodicReport> check_periodic_axiswise(const SampledFunction& f, const RVec& omegas,
                                                    const std::vector<Complex>& cs,
                                                    std::optional<double> tol = {});

/// G(t) = c^{-sum_{i in S} a_i t_i / omega_i} F(t) with S = {i: omega_i != 0}
/// and weights summing to 1 (uniform by default); principal branch powers.
SampledFunction profile_transform(const SampledFunction& f, const PeriodSpec& spec,
                                  const RVec* weights = nullptr);

/// Single-axis profile G(t) = c_j^{-t_j/omega_j} F(t).
SampledFunction profile_transform_axis(const SampledFunction& f, int axis, double omega_j,
                                       Complex c_j);

struct EpsPeriod {
  RVec tau;
  double defect;
};

struct EpsPeriodScanReport {
  std::vector<EpsPeriod> periods; // every eps-period found (grid shifts)
  double covering_l = kInf;       // sup over candidates of the gap to a period
  bool relatively_dense = false;  // covering_l <= l_max
  double eps = 0.0;
  std::size_t shifts_scanned = 0;
};

struct EpsScanOptions {
  Index tau_stride = 1;      // decimation of the shift lattice
  Index sup_stride = 1;      // decimation inside each defect sup
  double max_shift = kInf;   // restrict |tau| (defaults to the overlap limit)
  double min_overlap = 0.25; // required fraction of the window in the overlap
};

/// Scans grid shifts for eps-periods with factor c and measures how densely
/// they cover the candidate set. A miss is evidence only up to l_max.
EpsPeriodScanReport epsilon_period_scan(const SampledFunction& f, double eps, Complex c,
                                        const DomainSubset& candidates, double l_max,
                                        const EpsScanOptions& opt = {});

struct RecurrenceStep {
  RVec tau;
  double defect; // best full-window sup defect in the band
};

struct RecurrenceReport {
  std::vector<RecurrenceStep> ladder;
  Verdict verdict = Verdict::Indeterminate;
  double tolerance = 0.0;
};

struct RecurrenceOptions {
  int bands = 5;
  Index tau_stride = 4;
  Index sup_stride = 2;
};

/// Looks for shifts tau_k with |tau_k| growing toward the window edge whose
/// full-window sup defect stays under tol; every band must produce one.
RecurrenceReport uniform_recurrence_check(const SampledFunction& f, Complex c,
                                          std::optional<double> tol = {},
                                          const RecurrenceOptions& opt = {});

} // namespace aperiodica
