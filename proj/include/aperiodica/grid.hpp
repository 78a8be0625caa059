#pragma once

#include <functional>
#include <span>
#include <utility>

#include "aperiodica/types.hpp"

namespace aperiodica {

enum class AxisKind { FullLine, HalfLineFrom, HalfLineTo };

/// Product domain with unbounded axes realized by a finite truncation
/// radius R. Tail limits are never extrapolated: they are evaluated on the
/// outer shell R/2 <= |t| <= R of the realized window.
struct Domain {
  std::vector<AxisKind> kinds;
  RVec anchors;        // half-line endpoints; ignored for full lines
  double radius = 0.0; // truncation radius R

  int dim() const { return static_cast<int>(kinds.size()); }
  /// Realized finite interval for one axis.
  std::pair<double, double> axis_window(int axis) const;
  /// Membership in the mathematical (untruncated) domain.
  bool contains(std::span<const double> t) const;

  static Domain full(int dim, double radius);
  static Domain quadrant(int dim, double radius); // [0,inf)^n truncated
};

/// Uniform rectangular grid. Index 0 of axis j sits at origin[j]; the grid is
/// stored row-major with the last axis contiguous.
struct Grid {
  RVec origin;
  RVec step;                 // h_j > 0
  std::vector<Index> count;  // N_j >= 1

  int dim() const { return static_cast<int>(step.size()); }
  std::size_t size() const;
  std::vector<Index> strides() const;
  double coord(int axis, Index i) const { return origin[axis] + step[axis] * static_cast<double>(i); }
  void point(std::size_t flat, double* out) const;
  RVec point(std::size_t flat) const;
  double point_abs(std::size_t flat) const; // Euclidean |t|
  double cell_volume() const;
  void validate() const;

  /// Smallest grid with these steps whose points cover the domain window.
  static Grid cover(const Domain& d, const RVec& step);
};

struct SampledFunction {
  Grid grid;
  Domain domain;
  int width = 1; // components per grid point
  ValueNorm norm_kind = ValueNorm::Euclidean;
  std::string label;
  std::vector<Complex> values;     // point-major blocks of `width`
  std::vector<std::uint8_t> valid; // 1 = usable sample

  std::size_t size() const { return grid.size(); }
  const Complex* at(std::size_t flat) const { return values.data() + flat * static_cast<std::size_t>(width); }
  bool is_valid(std::size_t flat) const { return valid[flat] != 0; }
  double value_norm(std::size_t flat) const { return vector_norm(at(flat), width, norm_kind); }
  std::size_t valid_count() const;
};

using PointFn = std::function<void(const double* t, Complex* out)>;

/// Samples fn on the grid. Every produced component must be finite.
SampledFunction sample(const PointFn& fn, const Domain& domain, const Grid& grid,
                       int width = 1, ValueNorm norm_kind = ValueNorm::Euclidean,
                       std::string label = {});

struct ShiftSnap {
  std::vector<Index> offsets; // integer steps per axis
  RVec snapped;               // offsets * step
  double max_abs_error = 0.0; // max_j |snapped_j - requested_j|
  double sum_abs_error = 0.0; // sum_j |snapped_j - requested_j|
};

ShiftSnap snap_shift(const Grid& grid, std::span<const double> tau);

/// G(t) = F(t + tau) with tau snapped to grid multiples. Points whose source
/// leaves the window are flagged invalid; an empty overlap is an error.
SampledFunction shift_sample(const SampledFunction& f, std::span<const double> tau,
                             ShiftSnap* snap_out = nullptr);

/// G(t) = F(-t) on the mirrored grid; exact involution at grid level.
SampledFunction reflect_sample(const SampledFunction& f);

/// Pointwise ||F(t)|| as a width-1 real sample on the same grid.
SampledFunction abs_field(const SampledFunction& f);

/// 1/F for scalar samples bounded away from zero. Throws std::domain_error
/// when a valid sample vanishes; width above one is rejected outright.
SampledFunction reciprocal(const SampledFunction& f);

/// Pointwise set of grid points, used for restricted domains D, candidate
/// sets I' and their tails D_T = { t in D : |t| >= T }.
struct DomainSubset {
  std::vector<std::uint8_t> mask;
  std::string label;

  static DomainSubset all(const Grid& g, std::string label = "all");
  static DomainSubset where(const Grid& g, const std::function<bool(const double*)>& pred,
                            std::string label = {});
  DomainSubset tail(const Grid& g, double T) const;
  DomainSubset intersect(const DomainSubset& other) const;
  std::size_t count() const;
  /// True when the subset meets the outer shell |t| >= R/2, i.e. it is
  /// unbounded as far as the truncated window can tell.
  bool reaches_outer_shell(const Grid& g, const Domain& d) const;
};

/// Grid points within half a step per axis of the ray {k omega : k = 0,1,...}.
DomainSubset ray_lattice(const Grid& g, const RVec& omega);

/// Mask transported by t -> -t; matches the grid produced by reflect_sample.
DomainSubset reflect_subset(const DomainSubset& s);

} // namespace aperiodica
