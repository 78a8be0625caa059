#pragma once

#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "aperiodica/asymptotic.hpp"
#include "aperiodica/grid.hpp"
#include "aperiodica/varlex.hpp"

namespace aperiodica {

/// Scalar map composed with cell distances, together with the companion map
/// that witnesses the factoring bound phi(x*y) <= companion(x) * phi(y).
struct ScalarMap {
  std::function<double(double)> eval;       // null means identity
  std::function<double(double)> companion;  // null means x itself
  std::string name = "identity";

  double operator()(double x) const { return eval ? eval(x) : x; }
  double factor(double x) const { return companion ? companion(x) : x; }
};

ScalarMap identity_map();
/// x^s for s > 0; companion x^s.
ScalarMap power_map(double s);
/// log(1+x); concave taper, companion 1+x.
ScalarMap log_taper_map();

/// Worst violation of phi(x*y) <= companion(x)*phi(y) over a seeded
/// log-uniform sample of (x, y), measured relative to the bound's size;
/// values at roundoff scale mean the bound held everywhere.
double factor_bound_gap(const ScalarMap& phi, unsigned seed = 2026, int samples = 256);

/// Largest sampled ratio phi(x_1+...+x_m) / sum phi(x_i): the subadditivity
/// constant c_m used by the power-transport bound.
double subadditivity_constant(const ScalarMap& phi, int m, unsigned seed = 2026,
                              int samples = 256);

/// Where the scalar map sits in the weighted cell norm:
///   InsideNorm     w * || phi(d) ||
///   AfterNorm      w * phi(|| d ||)
///   AroundWeighted phi(w * || d ||)
enum class PhiPlacement { InsideNorm, AfterNorm, AroundWeighted };

/// Weight evaluators; a null callback is the constant weight 1.
struct WeightSpec {
  ScalarMap phi;
  std::function<double(const RVec&, double, const RVec&)> qa_weight;  // (t, eps, tau)
  std::function<double(const RVec&, double)> recurrence_weight;       // (t, k)
  std::function<double(const RVec&)> tail_weight;                     // (t)
  std::function<double(double, const RVec&)> scale_weight;            // (l, t)
};

/// Scale weight l^{-sigma}, the form every worked example uses.
WeightSpec power_law_weight(double sigma);
/// Scale weight l^{-n/p}: cell-volume normalization, the classical seminorm.
WeightSpec classical_weyl_weight(int dim, double p);

/// Compact cell per axis; empty vectors mean the unit cube [0,1]^n.
struct CellWindow {
  RVec lo;
  RVec hi;
};

/// Closed mesh of grid offsets covering scale * cell: per axis the offsets
/// lround(scale*lo/h) .. lround(scale*hi/h), both ends kept, so the mesh of
/// -cell is exactly the negated mesh of cell. Quadrature weight h^n per
/// point; the exponent field is resampled onto the mesh by nearest index.
struct CellMesh {
  std::vector<Index> lo;
  std::vector<Index> hi;
  std::vector<double> p;    // per mesh point, row-major; empty means p == 1
  std::size_t points = 0;
  double point_volume = 0.0;
};

CellMesh make_cell_mesh(const Grid& g, const CellWindow& cell, double scale,
                        const ExponentField& p);

/// t -> (u -> F(t+u)) on a fixed cell mesh; turns the Stepanov cell distance
/// into a pointwise sup distance between handles.
class BochnerTransform {
 public:
  /// The function must outlive the transform. Empty p means constant 1.
  BochnerTransform(const SampledFunction& f, CellWindow cell = {}, ExponentField p = {});

  struct Handle {
    RVec t;                // snapped anchor
    std::size_t flat = 0;  // anchor flat index
  };

  /// Snaps t to the nearest grid point. Throws when the cell exits the
  /// window or covers an invalid sample.
  Handle at(const RVec& t) const;

  /// F(t + u_k) where k is the row-major mesh offset index.
  Complex eval(const Handle& h, std::size_t k, int channel = 0) const;

  /// Luxemburg norm over the cell of the pointwise difference.
  double distance(const Handle& a, const Handle& b) const;

  const CellMesh& mesh() const { return mesh_; }

 private:
  const SampledFunction* f_;
  CellMesh mesh_;
  std::vector<Index> strides_;
};

struct StepanovConfig {
  CellWindow cell;                                       // default unit cube
  ExponentField p;                                       // on the cell mesh
  PhiPlacement placement = PhiPlacement::InsideNorm;
  WeightSpec weights;
  AsymptoticSpec law;  // c, admissible set D, candidate set I', tail ladder
  int workers = 1;
};

struct StepanovDistance {
  double value = 0.0;
  std::size_t points = 0;  // admissible anchors
  bool both_ends = false;  // t + tau was held inside the tail set too
};

/// sup over t in D with |t| >= M (and t+tau likewise, unless D is invariant
/// under the shift on the grid, in which case the second constraint is
/// dropped) of the placement composition of the weight, phi, and the cell
/// norm of F(.+t+tau) - c F(.+t). Throws when a weight comes back <= 0.
StepanovDistance stepanov_qa_distance(const SampledFunction& f, const StepanovConfig& cfg,
                                      const RVec& tau, double eps, double M);

/// Relatively dense witness search with the cell distance as the defect;
/// same ladder structure as quasi_asymptotic_check, one report per eps.
std::vector<QuasiReport> stepanov_classify(const SampledFunction& f, const StepanovConfig& cfg,
                                           const std::vector<double>& eps_list,
                                           const QuasiOptions& opt = {});

struct WeylConfig {
  CellWindow cell;
  ExponentField p;
  PhiPlacement placement = PhiPlacement::InsideNorm;
  bool equi = false;            // one good scale suffices; else limsup mode
  std::vector<double> scales;   // l_1 < ... < l_r
  WeightSpec weights;           // scale_weight feeds the ladder
  Complex c{1.0, 0.0};
  DomainSubset lambda;          // ambient admissible set, empty = whole grid
  DomainSubset lambda_prime;    // shift candidates for recurrence search
  int workers = 1;
};

struct ScaleRung {
  double scale = 0.0;
  double value = 0.0;
  std::size_t points = 0;
};

struct WeylLadder {
  std::vector<ScaleRung> rungs;
  double aggregate = 0.0;   // equi: min over rungs; limsup: max over top half
  bool increasing = false;  // positive trend across the top half
  bool equi = false;
  std::string note;
};

/// One weighted cell-norm sup per scale. Throws when a scale leaves no
/// admissible anchor or the closure spot-check Lambda'+Lambda+l*cell fails.
WeylLadder weyl_distance(const SampledFunction& f, const WeylConfig& cfg, const RVec& tau);

/// equi: min <= tol passes; limsup: the top-half estimate must hold with a
/// non-increasing trend, an increasing trend leaves the verdict open.
Verdict weyl_verdict(const WeylLadder& ladder, double tol);

struct ThresholdRow {
  double sigma = 0.0;
  double scale = 0.0;
  double value = 0.0;
  Verdict verdict = Verdict::Indeterminate;  // the per-sigma verdict, repeated
};

struct ThresholdReport {
  std::vector<ThresholdRow> rows;  // sigma-major, one row per (sigma, scale)
  std::vector<double> sigmas;
  std::vector<Verdict> verdicts;
  double bracket_lo = 0.0;   // largest failing sigma (NaN when none fail)
  double bracket_hi = 0.0;   // smallest passing sigma above it
  double crossover = 0.0;    // where the deepest rung crosses tol
  double predicted = 0.0;    // (n-1)/p0
  RVec probe;                // tau: one grid step per axis
  double tol = 1.0;
};

/// Power-law sweep sigma -> l^{-sigma}-weighted ladder verdicts for the one
/// shift probe tau = one grid step per axis. The inner sup is
/// sigma-independent, so each scale is measured once and reweighted.
ThresholdReport weyl_threshold_experiment(const SampledFunction& f, double p0,
                                          const std::vector<double>& sigma_grid,
                                          const std::vector<double>& scales, double tol = 1.0,
                                          int workers = 1);

struct WeylBand {
  double tau_lo = 0.0;
  double tau_hi = 0.0;
  std::size_t candidates = 0;
  RVec tau;                // best shift found
  double value = kInf;     // its ladder aggregate
};

struct WeylUrOptions {
  double tau_max = 0.0;  // 0: grow bands toward the window edge automatically
  int max_tau = 12;      // candidates tried per band
  Index sup_stride = 1;  // anchor decimation inside the sup
};

struct WeylRecurrenceReport {
  Verdict verdict = Verdict::Indeterminate;
  double tolerance = 0.0;
  std::vector<WeylBand> bands;
  std::string note;
};

/// Recurrence at the Weyl scale: k_bands annuli of shifts from Lambda',
/// reaching toward the window edge, each needing one shift whose limsup
/// ladder aggregate sits under tolerance. Default tolerance scales the
/// sup-defect tolerance by the weighted response to a unit defect.
WeylRecurrenceReport weyl_ur_check(const SampledFunction& f, const WeylConfig& cfg, int k_bands,
                                   std::optional<double> tol = {},
                                   const WeylUrOptions& opt = {});

struct PowerTransportReport {
  Verdict verdict = Verdict::Indeterminate;
  int m = 1;
  Complex c_from{1.0, 0.0};
  Complex c_to{1.0, 0.0};
  RVec tau;
  double subadd_constant = 1.0;  // sampled c_m
  double bound_factor = 0.0;     // c_m * sum_j companion(|c|^j)
  WeylLadder single;             // shift tau, factor c
  WeylLadder transported;        // shift m*tau, factor c^m
  bool bound_holds = false;      // transported <= factor * single, per rung
  std::string note;
};

/// Telescopes the m-fold shift defect into single-step defects: a Weyl pass
/// for (tau, c) transports to (m*tau, c^m) with the per-rung bound
/// c_m * sum_{j<m} companion(|c|^j) * single(l). Omitted tau picks the
/// smallest nonzero point of Lambda'. Throws when the iterated closure
/// j*tau + Lambda + l*cell fails its spot-check.
PowerTransportReport power_argument_check(const SampledFunction& f, const WeylConfig& cfg, int m,
                                          std::optional<RVec> tau = {});

} // namespace aperiodica
