#pragma once

#include <functional>
#include <string>

#include "aperiodica/asymptotic.hpp"

namespace aperiodica {

/// Integrable kernel, truncated for quadrature at `radius` (sup norm).
/// The declared tail mass outside the truncation box must be below `delta`;
/// everything downstream treats the truncated kernel as the kernel and
/// carries delta into its tolerances.
struct Kernel {
  std::function<double(const double*)> evaluator;
  double l1_norm = 0.0;  // declared integral of |h|
  double radius = 0.0;   // effective support radius
  double delta = 0.0;    // declared tail mass outside the box [-radius, radius]^n
  int dim = 1;
  std::string name;
};

/// Mass-one box on [-w, w]^n. Compact support, so delta = 0.
Kernel box_kernel(int dim, double halfwidth);

/// Heat kernel (4 pi t0)^{-n/2} exp(-|y|^2 / (4 t0)), truncated where the
/// tail mass falls under delta.
Kernel gaussian_kernel(int dim, double t0, double delta = 1e-9);

/// Trapezoid quadrature of |h| over the truncation box at the given step.
/// The Kernel invariant is that this lands within 1e-6 of l1_norm once the
/// step resolves the kernel.
double kernel_quadrature_mass(const Kernel& k, double step);

/// Same quadrature with the sign kept; what convolving the constant 1 yields.
double kernel_signed_mass(const Kernel& k, double step);

/// Trapezoid convolution sum over the truncated support, on f's grid.
/// Output points are valid exactly where every kernel tap lands on a valid
/// sample; the boundary band (and anything near invalid samples) is flagged
/// invalid. Throws when no output point survives.
SampledFunction convolve(const Kernel& k, const SampledFunction& f, int workers = 1);

/// One heat-semigroup step: convolve with gaussian_kernel(dim, t0, delta).
SampledFunction gaussian_apply(double t0, const SampledFunction& f, int workers = 1,
                               double delta = 1e-9);

enum class InvarianceVariant { ExactPeriodic, SAsymptotic, QuasiAsymptotic };

struct InvarianceReport {
  InvarianceVariant variant = InvarianceVariant::ExactPeriodic;
  Verdict input = Verdict::Indeterminate;   // the hypothesis check on f
  Verdict output = Verdict::Indeterminate;  // the same check on k * f
  double eps = 0.0;                         // tolerance applied to f
  double eps_out = 0.0;                     // inflated tolerance applied to k * f
  double input_defect = 0.0;
  double output_defect = 0.0;
  std::string note;
};

/// Transports a class verdict through the convolution. Checks f at eps
/// (throws unless that passes: the hypothesis is the caller's claim), then
/// checks k * f at
///   eps_out = eps * max(l1, quadrature mass) + (1 + |c|) sup|f| delta,
/// since averaging shift defects keeps them under the kernel mass and the
/// discarded tail contributes at most its mass times the two samples.
InvarianceReport convolution_invariance_property(const Kernel& k, const SampledFunction& f,
                                                 const AsymptoticSpec& law, InvarianceVariant v,
                                                 double eps, const QuasiOptions& opt = {},
                                                 int workers = 1);

}  // namespace aperiodica
