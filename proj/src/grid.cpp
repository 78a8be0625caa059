#include "aperiodica/grid.hpp"

#include <cmath>
#include <stdexcept>

namespace aperiodica {

std::pair<double, double> Domain::axis_window(int axis) const {
  switch (kinds[axis]) {
    case AxisKind::FullLine: return {-radius, radius};
    case AxisKind::HalfLineFrom: return {anchors[axis], radius};
    case AxisKind::HalfLineTo: return {-radius, anchors[axis]};
  }
  throw std::logic_error("bad axis kind");
}

bool Domain::contains(std::span<const double> t) const {
  for (int j = 0; j < dim(); ++j) {
    switch (kinds[j]) {
      case AxisKind::FullLine: break;
      case AxisKind::HalfLineFrom:
        if (t[j] < anchors[j] - 1e-12) return false;
        break;
      case AxisKind::HalfLineTo:
        if (t[j] > anchors[j] + 1e-12) return false;
        break;
    }
  }
  return true;
}

Domain Domain::full(int dim, double radius) {
  Domain d;
  d.kinds.assign(dim, AxisKind::FullLine);
  d.anchors.assign(dim, 0.0);
  d.radius = radius;
  return d;
}

Domain Domain::quadrant(int dim, double radius) {
  Domain d;
  d.kinds.assign(dim, AxisKind::HalfLineFrom);
  d.anchors.assign(dim, 0.0);
  d.radius = radius;
  return d;
}

std::size_t Grid::size() const {
  std::size_t n = 1;
  for (Index c : count) n *= static_cast<std::size_t>(c);
  return n;
}

std::vector<Index> Grid::strides() const {
  const int n = dim();
  std::vector<Index> s(n, 1);
  for (int j = n - 2; j >= 0; --j) s[j] = s[j + 1] * count[j + 1];
  return s;
}

void Grid::point(std::size_t flat, double* out) const {
  const int n = dim();
  for (int j = n - 1; j >= 0; --j) {
    const auto c = static_cast<std::size_t>(count[j]);
    out[j] = coord(j, static_cast<Index>(flat % c));
    flat /= c;
  }
}

RVec Grid::point(std::size_t flat) const {
  RVec p(dim());
  point(flat, p.data());
  return p;
}

double Grid::point_abs(std::size_t flat) const {
  double p[16];
  point(flat, p);
  double acc = 0.0;
  for (int j = 0; j < dim(); ++j) acc += p[j] * p[j];
  return std::sqrt(acc);
}

double Grid::cell_volume() const {
  double v = 1.0;
  for (double h : step) v *= h;
  return v;
}

void Grid::validate() const {
  if (origin.size() != step.size() || step.size() != count.size())
    throw std::invalid_argument("grid axis arrays disagree in length");
  if (dim() == 0 || dim() > 16) throw std::invalid_argument("grid dimension out of range");
  for (int j = 0; j < dim(); ++j) {
    if (!(step[j] > 0.0)) throw std::invalid_argument("grid step must be positive");
    if (count[j] < 1) throw std::invalid_argument("grid count must be at least 1");
  }
}

Grid Grid::cover(const Domain& d, const RVec& step) {
  if (static_cast<int>(step.size()) != d.dim())
    throw std::invalid_argument("step dimension does not match domain");
  Grid g;
  g.origin.resize(d.dim());
  g.step = step;
  g.count.resize(d.dim());
  for (int j = 0; j < d.dim(); ++j) {
    auto [lo, hi] = d.axis_window(j);
    if (!(hi > lo)) throw std::invalid_argument("empty axis window; increase the truncation radius");
    g.origin[j] = lo;
    g.count[j] = static_cast<Index>(std::floor((hi - lo) / step[j] + 1e-9)) + 1;
  }
  g.validate();
  return g;
}

std::size_t SampledFunction::valid_count() const {
  std::size_t n = 0;
  for (std::uint8_t v : valid) n += v;
  return n;
}

SampledFunction sample(const PointFn& fn, const Domain& domain, const Grid& grid,
                       int width, ValueNorm norm_kind, std::string label) {
  grid.validate();
  if (domain.dim() != grid.dim()) throw std::invalid_argument("domain/grid dimension mismatch");
  if (width < 1) throw std::invalid_argument("width must be at least 1");
  SampledFunction f;
  f.grid = grid;
  f.domain = domain;
  f.width = width;
  f.norm_kind = norm_kind;
  f.label = std::move(label);
  const std::size_t n = grid.size();
  f.values.resize(n * static_cast<std::size_t>(width));
  f.valid.assign(n, 1);
  RVec p(grid.dim());
  for (std::size_t i = 0; i < n; ++i) {
    grid.point(i, p.data());
    Complex* out = f.values.data() + i * static_cast<std::size_t>(width);
    fn(p.data(), out);
    for (int k = 0; k < width; ++k) {
      if (!std::isfinite(out[k].real()) || !std::isfinite(out[k].imag()))
        throw std::runtime_error("sample: non-finite value at a grid point in '" + f.label + "'");
    }
  }
  return f;
}

ShiftSnap snap_shift(const Grid& grid, std::span<const double> tau) {
  if (static_cast<int>(tau.size()) != grid.dim())
    throw std::invalid_argument("shift dimension does not match grid");
  ShiftSnap s;
  s.offsets.resize(grid.dim());
  s.snapped.resize(grid.dim());
  for (int j = 0; j < grid.dim(); ++j) {
    s.offsets[j] = static_cast<Index>(std::llround(tau[j] / grid.step[j]));
    s.snapped[j] = static_cast<double>(s.offsets[j]) * grid.step[j];
    s.max_abs_error = std::max(s.max_abs_error, std::abs(s.snapped[j] - tau[j]));
    s.sum_abs_error += std::abs(s.snapped[j] - tau[j]);
  }
  return s;
}

SampledFunction shift_sample(const SampledFunction& f, std::span<const double> tau,
                             ShiftSnap* snap_out) {
  const ShiftSnap snap = snap_shift(f.grid, tau);
  if (snap_out) *snap_out = snap;
  const int n = f.grid.dim();
  const auto strides = f.grid.strides();

  SampledFunction g = f;
  g.label = f.label + "+shift";
  std::fill(g.valid.begin(), g.valid.end(), 0);
  std::fill(g.values.begin(), g.values.end(), Complex{0.0, 0.0});

  // Index box where t + offset stays inside the grid.
  std::vector<Index> lo(n), hi(n);
  Index dflat = 0;
  for (int j = 0; j < n; ++j) {
    lo[j] = std::max<Index>(0, -snap.offsets[j]);
    hi[j] = std::min<Index>(f.grid.count[j], f.grid.count[j] - snap.offsets[j]);
    if (lo[j] >= hi[j]) throw std::runtime_error("shift_sample: shifted window has no overlap");
    dflat += snap.offsets[j] * strides[j];
  }

  std::vector<Index> idx(lo);
  const int inner = n - 1;
  std::size_t copied = 0;
  for (;;) {
    std::size_t base = 0;
    for (int j = 0; j < n; ++j) base += static_cast<std::size_t>(idx[j] * strides[j]);
    for (Index i = lo[inner]; i < hi[inner]; ++i) {
      const std::size_t t = base + static_cast<std::size_t>(i - lo[inner]);
      const std::size_t src = t + static_cast<std::size_t>(dflat);
      if (!f.valid[src]) continue;
      g.valid[t] = 1;
      for (int k = 0; k < f.width; ++k)
        g.values[t * static_cast<std::size_t>(f.width) + k] =
            f.values[src * static_cast<std::size_t>(f.width) + k];
      ++copied;
    }
    int ax = inner - 1;
    while (ax >= 0) {
      idx[ax] += 1;
      if (idx[ax] < hi[ax]) break;
      idx[ax] = lo[ax];
      --ax;
    }
    if (ax < 0) break;
  }
  if (copied == 0) throw std::runtime_error("shift_sample: shifted window has no valid overlap");
  return g;
}

SampledFunction reflect_sample(const SampledFunction& f) {
  SampledFunction g = f;
  g.label = f.label + "~reflected";
  for (int j = 0; j < f.grid.dim(); ++j)
    g.grid.origin[j] = -(f.grid.origin[j] + static_cast<double>(f.grid.count[j] - 1) * f.grid.step[j]);
  for (int j = 0; j < f.domain.dim(); ++j) {
    switch (f.domain.kinds[j]) {
      case AxisKind::FullLine: break;
      case AxisKind::HalfLineFrom:
        g.domain.kinds[j] = AxisKind::HalfLineTo;
        g.domain.anchors[j] = -f.domain.anchors[j];
        break;
      case AxisKind::HalfLineTo:
        g.domain.kinds[j] = AxisKind::HalfLineFrom;
        g.domain.anchors[j] = -f.domain.anchors[j];
        break;
    }
  }
  // Row-major full box: reversing every axis reverses the flat order.
  const std::size_t n = f.size();
  const auto w = static_cast<std::size_t>(f.width);
  for (std::size_t i = 0; i < n; ++i) {
    const std::size_t r = n - 1 - i;
    g.valid[i] = f.valid[r];
    for (std::size_t k = 0; k < w; ++k) g.values[i * w + k] = f.values[r * w + k];
  }
  return g;
}

SampledFunction abs_field(const SampledFunction& f) {
  SampledFunction g;
  g.grid = f.grid;
  g.domain = f.domain;
  g.width = 1;
  g.norm_kind = ValueNorm::Euclidean;
  g.label = "|" + f.label + "|";
  g.valid = f.valid;
  g.values.resize(f.size());
  for (std::size_t i = 0; i < f.size(); ++i) g.values[i] = Complex{f.value_norm(i), 0.0};
  return g;
}

SampledFunction reciprocal(const SampledFunction& f) {
  if (f.width != 1)
    throw std::invalid_argument("reciprocal: only scalar samples invert");
  SampledFunction g = f;
  g.label = f.label + "~reciprocal";
  for (std::size_t i = 0; i < f.size(); ++i) {
    if (!g.valid.empty() && !g.valid[i]) continue;
    if (std::abs(f.values[i]) == 0.0)
      throw std::domain_error("reciprocal: sample vanishes at a valid point");
    g.values[i] = 1.0 / f.values[i];
  }
  return g;
}

DomainSubset DomainSubset::all(const Grid& g, std::string label) {
  DomainSubset s;
  s.mask.assign(g.size(), 1);
  s.label = std::move(label);
  return s;
}

DomainSubset DomainSubset::where(const Grid& g, const std::function<bool(const double*)>& pred,
                                 std::string label) {
  DomainSubset s;
  s.mask.assign(g.size(), 0);
  s.label = std::move(label);
  RVec p(g.dim());
  for (std::size_t i = 0; i < s.mask.size(); ++i) {
    g.point(i, p.data());
    s.mask[i] = pred(p.data()) ? 1 : 0;
  }
  return s;
}

DomainSubset DomainSubset::tail(const Grid& g, double T) const {
  DomainSubset s = *this;
  s.label = label + "|tail";
  for (std::size_t i = 0; i < s.mask.size(); ++i)
    if (s.mask[i] && g.point_abs(i) < T) s.mask[i] = 0;
  return s;
}

DomainSubset DomainSubset::intersect(const DomainSubset& other) const {
  if (other.mask.size() != mask.size())
    throw std::invalid_argument("subset size mismatch");
  DomainSubset s = *this;
  for (std::size_t i = 0; i < s.mask.size(); ++i) s.mask[i] &= other.mask[i];
  return s;
}

std::size_t DomainSubset::count() const {
  std::size_t n = 0;
  for (std::uint8_t v : mask) n += v;
  return n;
}

bool DomainSubset::reaches_outer_shell(const Grid& g, const Domain& d) const {
  const double half = d.radius * 0.5;
  for (std::size_t i = 0; i < mask.size(); ++i)
    if (mask[i] && g.point_abs(i) >= half) return true;
  return false;
}

DomainSubset ray_lattice(const Grid& g, const RVec& omega) {
  if (omega.size() != static_cast<std::size_t>(g.dim()))
    throw std::invalid_argument("ray_lattice: omega dimension mismatch");
  int lead = -1;
  for (int j = 0; j < g.dim(); ++j)
    if (omega[j] != 0.0) { lead = j; break; }
  if (lead < 0) throw std::invalid_argument("ray_lattice: omega must be nonzero");

  DomainSubset s;
  s.mask.assign(g.size(), 0);
  s.label = "ray";
  RVec t(g.dim());
  for (std::size_t i = 0; i < g.size(); ++i) {
    g.point(i, t.data());
    const double kr = t[lead] / omega[lead];
    const auto k = static_cast<long long>(std::llround(kr));
    if (k < 0) continue;
    bool on = true;
    for (int j = 0; j < g.dim() && on; ++j)
      on = std::abs(t[j] - static_cast<double>(k) * omega[j]) <= 0.5 * g.step[j];
    s.mask[i] = on ? 1 : 0;
  }
  return s;
}

DomainSubset reflect_subset(const DomainSubset& s) {
  DomainSubset r;
  r.label = s.label + "~reflected";
  r.mask.resize(s.mask.size());
  const std::size_t n = s.mask.size();
  for (std::size_t i = 0; i < n; ++i) r.mask[i] = s.mask[n - 1 - i];
  return r;
}

} // namespace aperiodica
