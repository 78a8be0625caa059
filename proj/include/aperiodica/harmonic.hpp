#pragma once

#include <optional>
#include <span>

#include "aperiodica/periodic.hpp"

namespace aperiodica {

/// One truncation rung of a windowed average over [base, base + T]^n.
struct MeanRung {
  double T = 0.0;
  std::vector<Complex> raw;      // plain cube average anchored at the base
  std::vector<Complex> smoothed; // tapered average over a cube of side T + S
  double shift_spread = 0.0;     // max over anchors of ||raw shifted - raw||
  std::size_t points = 0;        // valid samples in the raw cube
};

struct MeanReport {
  std::vector<Complex> value; // smoothed estimate at the top rung
  std::vector<MeanRung> rungs;
  double residual = 0.0; // ||raw - value|| at the top rung
  std::string note;

  double magnitude() const;
};

struct MeanOptions {
  std::vector<double> t_ladder; // cube sides, strictly increasing; empty = auto
  std::vector<double> anchor_fractions{0.05, 0.1}; // anchor shifts s = frac * T_top
  double smooth_fraction = 0.5;                    // taper length S = fraction * T
};

/// Cube averages of F over an increasing T ladder. The raw rungs carry the
/// O(1/T) oscillatory error; the smoothed value averages the cube anchor over
/// [0, S]^n as well, which multiplies the error bounds of the two box
/// averages. Anchored re-averages quantify the shift independence.
MeanReport mean_value(const SampledFunction& f, const MeanOptions& opt = {});

/// mean_value applied to e^{-i<lambda, t>} F(t).
MeanReport bohr_coefficient(const SampledFunction& f, const RVec& lambda,
                            const MeanOptions& opt = {});

struct SpectrumPeak {
  RVec lambda;
  std::vector<Complex> coefficient;
  double magnitude = 0.0;
  double residual = 0.0; // raw vs smoothed disagreement at the top rung
};

struct SpectrumEstimate {
  std::vector<SpectrumPeak> peaks; // ascending |lambda|
  std::vector<double> t_ladder;
  double noise_floor = 0.0;
  double resolution = 0.0;   // coarse scan step
  double refine_width = 0.0; // final bracket width per axis
  std::string note;
};

struct SpectrumScanOptions {
  double lambda_max = 4.0;
  double resolution = 0.0;  // 0 = auto: half of the estimator main lobe
  double noise_floor = 0.0; // 0 = auto: 5x unit-probe leakage times sup||F||
  std::vector<double> t_ladder;
  int max_peaks = 64;
  int workers = 1; // coarse grid scan only; refinement stays sequential
  double smooth_fraction = 0.5;
};

/// Coarse scan of |coefficient| over a symmetric frequency grid, peak
/// acceptance against the floor plus the predicted leakage of already
/// accepted peaks, then per-peak coordinate refinement.
SpectrumEstimate bohr_spectrum_scan(const SampledFunction& f,
                                    const SpectrumScanOptions& opt = {});

struct SemiAxisWitness {
  int axis = -1;
  double omega = 0.0;  // discovered shift, a grid multiple
  double defect = 0.0; // max over checked m of the sup defect
  int m_checked = 0;
  std::size_t points = 0; // smallest overlap among the checked rungs
  bool found = false;
};

struct SemiEpsResult {
  double eps = 0.0;
  std::vector<SemiAxisWitness> axes;
  bool pass = false;
};

struct SemiReport {
  Verdict verdict = Verdict::Indeterminate;
  std::vector<SemiEpsResult> results;
  std::vector<PeriodicReport> rigidity; // axes with |c_j| != 1; empty entries else
  std::string klass = "semi-periodic";
  std::string note;
};

struct SemiOptions {
  int m_max = 4;
  Index sup_stride = 1;
  int max_candidates = 12;  // shift candidates given a full m ladder each
  double min_overlap = 0.2; // window fraction that must survive at m = m_max
  std::vector<double> eps_ladder; // construction rungs; empty = geometric
};

/// Axiswise search for shifts omega_j whose defect against c_j^m stays under
/// eps for every m up to m_max, for each eps in the list. Unit-modulus
/// factors get the search; other factors must be exact axis periods, which
/// is cross-checked and reported in `rigidity`.
SemiReport semi_cj_check(const SampledFunction& f, const std::vector<Complex>& cs,
                         const std::vector<double>& eps_list, const SemiOptions& opt = {});

struct ApproxStep {
  double eps = 0.0; // ladder value the rung was built or certified at
  double gap = 0.0; // sup ||F - G_k||
  RVec omega;       // per-axis shifts of the approximant
  double shift_defect = 0.0; // approximant's own worst checked defect
  int m_checked = 0;
  bool certified = false; // shift defect stays under the gap
};

struct ApproximationReport {
  Verdict verdict = Verdict::Indeterminate;
  std::vector<ApproxStep> steps;
  std::vector<SampledFunction> approximants; // construction direction only
  std::string note;
};

/// Builds exactly (omega_j, c_j)-periodic approximants by twisted
/// periodization of the base cell over shifts validated across the whole
/// fold range of the window, one rung per eps ladder entry. Gaps must
/// decrease strictly for a pass.
ApproximationReport semi_periodic_approximation(const SampledFunction& f,
                                                const std::vector<Complex>& cs, int k_max,
                                                const SemiOptions& opt = {});

/// Converse direction: measures the uniform gap to each supplied approximant
/// and certifies eps = 3 * gap whenever the approximant's own shift defect
/// stays under the gap, so the triangle inequality transfers the shift to F.
ApproximationReport certify_from_approximants(const SampledFunction& f,
                                              std::span<const SampledFunction> approximants,
                                              const std::vector<Complex>& cs,
                                              const SemiOptions& opt = {});

struct CommensurabilityAxis {
  int axis = -1;
  bool pass = false;
  double omega = 0.0;        // 2 pi q / base when found
  Index denominator = 0;     // accepted q
  double residual = kInf;    // max distance of lambda * omega to 2 pi Z
  double best_in_cap = kInf; // smallest residual over the whole denominator scan
};

struct CommensurabilityReport {
  Verdict verdict = Verdict::Indeterminate;
  std::vector<CommensurabilityAxis> axes;
  double tolerance = 0.0;
  Index denominator_cap = 10000;
  std::string note;
};

/// Per axis, searches a common omega_j with lambda_j * omega_j within
/// tolerance of 2 pi Z for every spectrum frequency, scanning rational
/// multiples of the smallest active frequency with denominators up to the
/// cap. An exhausted scan far from tolerance is a certified obstruction;
/// a near miss stays indeterminate.
CommensurabilityReport commensurability_test(const SpectrumEstimate& spectrum,
                                             double tolerance, Index denominator_cap = 10000);

} // namespace aperiodica
