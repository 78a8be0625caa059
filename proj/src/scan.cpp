#include "aperiodica/scan.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace aperiodica {

namespace {

// Squared norm of F(t+delta) - c F(t) over the width components.
inline double defect_sq(const Complex* a, const Complex* b, int width, Complex c, ValueNorm kind) {
  double acc = 0.0;
  for (int k = 0; k < width; ++k) {
    const Complex d = a[k] - c * b[k];
    const double m = std::norm(d);
    acc = (kind == ValueNorm::Euclidean) ? acc + m : std::max(acc, m);
  }
  return acc;
}

} // namespace

ScanStats sup_shift_defect(const SampledFunction& f, std::span<const Index> delta, Complex c,
                           const ShiftScanOptions& opt) {
  const int n = f.grid.dim();
  if (static_cast<int>(delta.size()) != n) throw std::invalid_argument("delta dimension mismatch");
  const auto strides = f.grid.strides();
  std::vector<Index> lo(n), hi(n);
  Index dflat = 0;
  for (int j = 0; j < n; ++j) {
    lo[j] = std::max<Index>(0, -delta[j]);
    hi[j] = std::min<Index>(f.grid.count[j], f.grid.count[j] - delta[j]);
    if (lo[j] >= hi[j]) return {};
    dflat += delta[j] * strides[j];
  }

  const Index dec = std::max<Index>(1, opt.decimate);
  const double exit_sq = opt.early_exit_above < kInf
                             ? opt.early_exit_above * opt.early_exit_above
                             : kInf;
  ScanStats st;
  double sup_sq = 0.0;
  const auto w = static_cast<std::size_t>(f.width);
  std::vector<Index> idx(lo);
  const int innerAx = n - 1;
  for (;;) {
    std::size_t base = 0;
    for (int j = 0; j < n; ++j) base += static_cast<std::size_t>(idx[j] * strides[j]);
    for (Index i = lo[innerAx]; i < hi[innerAx]; i += dec) {
      const std::size_t t = base + static_cast<std::size_t>(i - lo[innerAx]);
      const std::size_t ts = t + static_cast<std::size_t>(dflat);
      if (!f.valid[t] || !f.valid[ts]) continue;
      if (opt.mask && !opt.mask[t]) continue;
      if (opt.mask_shifted && !opt.mask_shifted[ts]) continue;
      const double d = defect_sq(f.values.data() + ts * w, f.values.data() + t * w,
                                 f.width, c, f.norm_kind);
      sup_sq = std::max(sup_sq, d);
      ++st.points;
      if (sup_sq > exit_sq) {
        st.sup = std::sqrt(sup_sq);
        return st;
      }
    }
    int ax = innerAx - 1;
    while (ax >= 0) {
      idx[ax] += dec;
      if (idx[ax] < hi[ax]) break;
      idx[ax] = lo[ax];
      --ax;
    }
    if (ax < 0) break;
  }
  st.sup = std::sqrt(sup_sq);
  return st;
}

ScanStats sup_norm(const SampledFunction& f, const std::uint8_t* mask, Index decimate) {
  const Index dec = std::max<Index>(1, decimate);
  ScanStats st;
  double sup = 0.0;
  // Decimation applies per axis; for dec == 1 a flat pass suffices.
  if (dec == 1) {
    for (std::size_t i = 0; i < f.size(); ++i) {
      if (!f.valid[i] || (mask && !mask[i])) continue;
      sup = std::max(sup, f.value_norm(i));
      ++st.points;
    }
    st.sup = sup;
    return st;
  }
  const int n = f.grid.dim();
  const auto strides = f.grid.strides();
  std::vector<Index> idx(n, 0);
  for (;;) {
    std::size_t base = 0;
    for (int j = 0; j < n; ++j) base += static_cast<std::size_t>(idx[j] * strides[j]);
    if (f.valid[base] && (!mask || mask[base])) {
      sup = std::max(sup, f.value_norm(base));
      ++st.points;
    }
    int ax = n - 1;
    while (ax >= 0) {
      idx[ax] += dec;
      if (idx[ax] < f.grid.count[ax]) break;
      idx[ax] = 0;
      --ax;
    }
    if (ax < 0) break;
  }
  st.sup = sup;
  return st;
}

ScanStats sup_difference(const SampledFunction& f, const SampledFunction& g,
                         const std::uint8_t* mask, Index decimate) {
  if (f.size() != g.size() || f.width != g.width)
    throw std::invalid_argument("sup_difference: incompatible samples");
  const Index dec = std::max<Index>(1, decimate);
  ScanStats st;
  double sup_sq = 0.0;
  const auto w = static_cast<std::size_t>(f.width);
  for (std::size_t i = 0; i < f.size(); i += static_cast<std::size_t>(dec)) {
    if (!f.valid[i] || !g.valid[i] || (mask && !mask[i])) continue;
    sup_sq = std::max(sup_sq, defect_sq(f.values.data() + i * w, g.values.data() + i * w,
                                        f.width, Complex{1.0, 0.0}, f.norm_kind));
    ++st.points;
  }
  st.sup = std::sqrt(sup_sq);
  return st;
}

void shift_defect_field(const SampledFunction& f, std::span<const Index> delta, Complex c,
                        std::span<double> out) {
  if (out.size() != f.size()) throw std::invalid_argument("output size mismatch");
  const int n = f.grid.dim();
  const auto strides = f.grid.strides();
  std::vector<Index> lo(n), hi(n);
  Index dflat = 0;
  for (int j = 0; j < n; ++j) {
    lo[j] = std::max<Index>(0, -delta[j]);
    hi[j] = std::min<Index>(f.grid.count[j], f.grid.count[j] - delta[j]);
    dflat += delta[j] * strides[j];
  }
  std::fill(out.begin(), out.end(), std::numeric_limits<double>::quiet_NaN());
  for (int j = 0; j < n; ++j)
    if (lo[j] >= hi[j]) return;

  const auto w = static_cast<std::size_t>(f.width);
  std::vector<Index> idx(lo);
  const int innerAx = n - 1;
  for (;;) {
    std::size_t base = 0;
    for (int j = 0; j < n; ++j) base += static_cast<std::size_t>(idx[j] * strides[j]);
    for (Index i = lo[innerAx]; i < hi[innerAx]; ++i) {
      const std::size_t t = base + static_cast<std::size_t>(i - lo[innerAx]);
      const std::size_t ts = t + static_cast<std::size_t>(dflat);
      if (!f.valid[t] || !f.valid[ts]) continue;
      out[t] = std::sqrt(defect_sq(f.values.data() + ts * w, f.values.data() + t * w,
                                   f.width, c, f.norm_kind));
    }
    int ax = innerAx - 1;
    while (ax >= 0) {
      idx[ax] += 1;
      if (idx[ax] < hi[ax]) break;
      idx[ax] = lo[ax];
      --ax;
    }
    if (ax < 0) break;
  }
}

double lipschitz_estimate(const SampledFunction& f) {
  const int n = f.grid.dim();
  double best = 0.0;
  std::vector<Index> delta(n, 0);
  for (int j = 0; j < n; ++j) {
    if (f.grid.count[j] < 2) continue;
    delta.assign(n, 0);
    delta[j] = 1;
    const auto st = sup_shift_defect(f, delta, Complex{1.0, 0.0});
    if (st.points > 0) best = std::max(best, st.sup / f.grid.step[j]);
  }
  return best;
}

} // namespace aperiodica
