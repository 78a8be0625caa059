#include "aperiodica/harmonic.hpp"

#include "detail.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <sstream>
#include <stdexcept>

namespace aperiodica {
namespace {

using detail::parallel_for;

constexpr double kTwoPi = 2.0 * std::numbers::pi;

double block_norm(const std::vector<Complex>& v, ValueNorm kind) {
  return vector_norm(v.data(), static_cast<int>(v.size()), kind);
}

double block_distance(const std::vector<Complex>& a, const std::vector<Complex>& b,
                      ValueNorm kind) {
  std::vector<Complex> d(a.size());
  for (std::size_t i = 0; i < a.size(); ++i) d[i] = a[i] - b[i];
  return block_norm(d, kind);
}

// One axis of the averaging window: a box of n_raw points, optionally
// convolved with a box of n_taper anchor positions. The weight vector is the
// discrete convolution of the two indicator boxes, so modulated exponentials
// pick up the product of the two normalized Dirichlet factors.
struct AxisWindow {
  Index base = 0;
  Index n_raw = 1;
  Index n_taper = 1;
  std::vector<double> weight;

  Index span() const { return n_raw + n_taper - 1; }
  void build_weight() {
    weight.assign(static_cast<std::size_t>(span()), 0.0);
    for (Index u = 0; u < span(); ++u) {
      const Index lo = std::max<Index>(0, u - n_raw + 1);
      const Index hi = std::min<Index>(n_taper - 1, u);
      weight[static_cast<std::size_t>(u)] = static_cast<double>(hi - lo + 1);
    }
  }
};

// Normalized Dirichlet magnitude |sum_k e^{i k phi}| / N for k = 0..N-1.
double dirichlet_mag(Index n, double phi) {
  const double s = std::sin(0.5 * phi);
  if (std::abs(s) < 1e-14) return 1.0;
  return std::abs(std::sin(0.5 * static_cast<double>(n) * phi) /
                  (static_cast<double>(n) * s));
}

struct BoxAverager {
  const SampledFunction* f = nullptr;
  std::vector<AxisWindow> axes;

  // Response magnitude of the window to a pure frequency offset per axis.
  double window_response(std::span<const double> delta) const {
    double r = 1.0;
    for (std::size_t j = 0; j < axes.size(); ++j) {
      const double phi = delta[j] * f->grid.step[j];
      r *= dirichlet_mag(axes[j].n_raw, phi) * dirichlet_mag(axes[j].n_taper, phi);
    }
    return r;
  }

  // Weighted average of e^{-i<lambda, t>} F(t) over the window, anchored
  // `anchor` grid steps past the base per axis. Invalid samples are dropped
  // and the weight mass renormalized accordingly.
  std::vector<Complex> eval(const RVec* lambda, std::span<const Index> anchor,
                            std::size_t* points_out) const {
    const Grid& g = f->grid;
    const int n = g.dim();
    const int width = f->width;
    const auto strides = g.strides();

    std::vector<std::vector<Complex>> phase(static_cast<std::size_t>(n));
    for (int j = 0; j < n; ++j) {
      const AxisWindow& ax = axes[static_cast<std::size_t>(j)];
      auto& tab = phase[static_cast<std::size_t>(j)];
      tab.resize(static_cast<std::size_t>(ax.span()));
      const double lam = lambda != nullptr ? (*lambda)[static_cast<std::size_t>(j)] : 0.0;
      if (lam == 0.0) {
        std::fill(tab.begin(), tab.end(), Complex{1.0, 0.0});
        continue;
      }
      const Index i0 = ax.base + (anchor.empty() ? 0 : anchor[static_cast<std::size_t>(j)]);
      const Complex mult = std::polar(1.0, -lam * g.step[j]);
      Complex cur{0.0, 0.0};
      for (Index u = 0; u < ax.span(); ++u) {
        if (u % 256 == 0) cur = std::polar(1.0, -lam * g.coord(j, i0 + u));
        tab[static_cast<std::size_t>(u)] = cur;
        cur *= mult;
      }
    }

    std::vector<Complex> acc(static_cast<std::size_t>(width), Complex{0.0, 0.0});
    double mass = 0.0;
    std::size_t points = 0;
    std::vector<Index> u(static_cast<std::size_t>(n), 0);
    for (;;) {
      double w = 1.0;
      Complex ph{1.0, 0.0};
      std::size_t flat = 0;
      for (int j = 0; j < n; ++j) {
        const AxisWindow& ax = axes[static_cast<std::size_t>(j)];
        const Index uj = u[static_cast<std::size_t>(j)];
        const Index ij = ax.base + (anchor.empty() ? 0 : anchor[static_cast<std::size_t>(j)]) + uj;
        flat += static_cast<std::size_t>(ij) * static_cast<std::size_t>(strides[static_cast<std::size_t>(j)]);
        w *= ax.weight[static_cast<std::size_t>(uj)];
        ph *= phase[static_cast<std::size_t>(j)][static_cast<std::size_t>(uj)];
      }
      if (f->is_valid(flat)) {
        const Complex* v = f->at(flat);
        const Complex wp = w * ph;
        for (int c = 0; c < width; ++c) acc[static_cast<std::size_t>(c)] += wp * v[c];
        mass += w;
        ++points;
      }
      int j = n - 1;
      while (j >= 0 && ++u[static_cast<std::size_t>(j)] >= axes[static_cast<std::size_t>(j)].span()) {
        u[static_cast<std::size_t>(j)] = 0;
        --j;
      }
      if (j < 0) break;
    }
    if (points_out != nullptr) *points_out = points;
    if (mass <= 0.0) {
      std::fill(acc.begin(), acc.end(), Complex{0.0, 0.0});
      return acc;
    }
    for (auto& a : acc) a /= mass;
    return acc;
  }
};

// Index of the grid point nearest the start of the averaging region: the
// nonnegative part of the axis, clipped into the window.
Index base_index(const SampledFunction& f, int axis) {
  const auto [lo, hi] = f.domain.axis_window(axis);
  (void)hi;
  const double target = std::max(0.0, lo);
  const double steps = (target - f.grid.origin[static_cast<std::size_t>(axis)]) /
                       f.grid.step[static_cast<std::size_t>(axis)];
  Index i = static_cast<Index>(std::llround(steps));
  i = std::clamp<Index>(i, 0, f.grid.count[static_cast<std::size_t>(axis)] - 1);
  return i;
}

BoxAverager make_averager(const SampledFunction& f, double T, double S, Index anchor_slack) {
  BoxAverager av;
  av.f = &f;
  const int n = f.grid.dim();
  av.axes.resize(static_cast<std::size_t>(n));
  for (int j = 0; j < n; ++j) {
    AxisWindow& ax = av.axes[static_cast<std::size_t>(j)];
    const double h = f.grid.step[static_cast<std::size_t>(j)];
    ax.base = base_index(f, j);
    ax.n_raw = static_cast<Index>(std::floor(T / h + 1e-9)) + 1;
    ax.n_taper = S > 0.0 ? static_cast<Index>(std::floor(S / h + 1e-9)) + 1 : 1;
    if (ax.n_raw < 2)
      throw std::invalid_argument("mean_value: truncation side below the grid step");
    if (ax.base + anchor_slack + ax.span() - 1 >= f.grid.count[static_cast<std::size_t>(j)])
      throw std::invalid_argument("mean_value: truncation ladder exceeds the sampled window");
    ax.build_weight();
  }
  return av;
}

std::vector<double> default_t_ladder(const SampledFunction& f, const MeanOptions& opt) {
  double room = kInf;
  for (int j = 0; j < f.grid.dim(); ++j) {
    const Index base = base_index(f, j);
    const Index last = f.grid.count[static_cast<std::size_t>(j)] - 1;
    room = std::min(room, static_cast<double>(last - base) * f.grid.step[static_cast<std::size_t>(j)]);
  }
  double frac_slack = 0.0;
  for (double a : opt.anchor_fractions) frac_slack = std::max(frac_slack, a);
  const double top = room / (1.0 + opt.smooth_fraction + frac_slack);
  if (top <= 0.0) throw std::invalid_argument("mean_value: window has no room for a cube");
  return {0.25 * top, 0.5 * top, top};
}

MeanReport windowed_mean(const SampledFunction& f, const RVec* lambda, const MeanOptions& opt) {
  if (lambda != nullptr && static_cast<int>(lambda->size()) != f.grid.dim())
    throw std::invalid_argument("bohr_coefficient: frequency dimension mismatch");
  std::vector<double> ladder = opt.t_ladder.empty() ? default_t_ladder(f, opt) : opt.t_ladder;
  for (std::size_t i = 0; i < ladder.size(); ++i)
    if (ladder[i] <= 0.0 || (i > 0 && ladder[i] <= ladder[i - 1]))
      throw std::invalid_argument("mean_value: ladder must be positive and increasing");

  const double t_top = ladder.back();
  const int n = f.grid.dim();
  MeanReport rep;
  for (double T : ladder) {
    MeanRung rung;
    rung.T = T;
    // Anchor offsets are fractions of the top rung, fixed across the ladder.
    Index slack = 0;
    std::vector<std::vector<Index>> anchors;
    for (double frac : opt.anchor_fractions) {
      std::vector<Index> a(static_cast<std::size_t>(n), 0);
      for (int j = 0; j < n; ++j) {
        a[static_cast<std::size_t>(j)] = static_cast<Index>(
            std::llround(frac * t_top / f.grid.step[static_cast<std::size_t>(j)]));
        slack = std::max(slack, a[static_cast<std::size_t>(j)]);
      }
      anchors.push_back(std::move(a));
    }

    BoxAverager raw_av = make_averager(f, T, 0.0, slack);
    BoxAverager smooth_av = make_averager(f, T, opt.smooth_fraction * T, 0);
    rung.raw = raw_av.eval(lambda, {}, &rung.points);
    std::size_t pts = 0;
    rung.smoothed = smooth_av.eval(lambda, {}, &pts);
    for (const auto& a : anchors) {
      const auto shifted = raw_av.eval(lambda, a, &pts);
      rung.shift_spread =
          std::max(rung.shift_spread, block_distance(shifted, rung.raw, f.norm_kind));
    }
    rep.rungs.push_back(std::move(rung));
  }
  rep.value = rep.rungs.back().smoothed;
  rep.residual = block_distance(rep.rungs.back().raw, rep.value, f.norm_kind);
  return rep;
}

// ---- semi-(c_j) machinery ----

bool unit_modulus(Complex c) { return std::abs(std::abs(c) - 1.0) <= 1e-12; }

Complex int_pow(Complex c, int m) {
  Complex r{1.0, 0.0};
  for (int i = 0; i < m; ++i) r *= c;
  return r;
}

std::vector<Index> axis_delta(int dim, int axis, Index k) {
  std::vector<Index> d(static_cast<std::size_t>(dim), 0);
  d[static_cast<std::size_t>(axis)] = k;
  return d;
}

struct ShiftCandidate {
  Index k = 0;
  double defect = 0.0;
};

// All grid shifts along one axis whose single-step defect stays under eps,
// capped so that m_max applications still leave min_overlap of the window.
std::vector<ShiftCandidate> axis_candidates(const SampledFunction& f, int axis, Complex c,
                                            double eps, const SemiOptions& opt,
                                            Index* k_cap_out) {
  const Index count = f.grid.count[static_cast<std::size_t>(axis)];
  const Index k_cap = static_cast<Index>(
      std::floor(static_cast<double>(count - 1) * (1.0 - opt.min_overlap) /
                 static_cast<double>(std::max(1, opt.m_max))));
  if (k_cap_out != nullptr) *k_cap_out = k_cap;
  std::vector<ShiftCandidate> out;
  ShiftScanOptions so;
  so.decimate = opt.sup_stride;
  so.early_exit_above = eps;
  for (Index k = 1; k <= k_cap; ++k) {
    const auto delta = axis_delta(f.grid.dim(), axis, k);
    const ScanStats s = sup_shift_defect(f, delta, c, so);
    if (s.points > 0 && s.sup <= eps) out.push_back({k, s.sup});
  }
  return out;
}

// Verifies the m ladder for one candidate shift; defect must stay under eps
// for every m with a nonempty overlap, up to m_max.
bool verify_m_ladder(const SampledFunction& f, int axis, Index k, Complex c, double eps,
                     const SemiOptions& opt, SemiAxisWitness* w) {
  double worst = 0.0;
  std::size_t min_points = std::numeric_limits<std::size_t>::max();
  int checked = 0;
  ShiftScanOptions so;
  so.decimate = opt.sup_stride;
  so.early_exit_above = eps;
  for (int m = 1; m <= opt.m_max; ++m) {
    const auto delta = axis_delta(f.grid.dim(), axis, k * m);
    const ScanStats s = sup_shift_defect(f, delta, int_pow(c, m), so);
    if (s.points == 0) break;
    if (s.sup > eps) return false;
    worst = std::max(worst, s.sup);
    min_points = std::min(min_points, s.points);
    ++checked;
  }
  if (checked == 0) return false;
  if (w != nullptr) {
    w->omega = static_cast<double>(k) * f.grid.step[static_cast<std::size_t>(axis)];
    w->defect = worst;
    w->m_checked = checked;
    w->points = min_points;
    w->found = true;
  }
  return true;
}

// Best-defect exact-period hunt for the rigidity branch.
PeriodicReport rigidity_check(const SampledFunction& f, int axis, Complex c) {
  const Index count = f.grid.count[static_cast<std::size_t>(axis)];
  const Index k_cap = static_cast<Index>(std::floor(static_cast<double>(count - 1) * 0.8));
  double best = kInf;
  Index best_k = 0;
  ShiftScanOptions so;
  for (Index k = 1; k <= k_cap; ++k) {
    so.early_exit_above = best;
    const ScanStats s = sup_shift_defect(f, axis_delta(f.grid.dim(), axis, k), c, so);
    if (s.points > 0 && s.sup < best) {
      best = s.sup;
      best_k = k;
    }
  }
  if (best_k == 0) return {};
  PeriodSpec spec;
  spec.omega.assign(static_cast<std::size_t>(f.grid.dim()), 0.0);
  spec.omega[static_cast<std::size_t>(axis)] =
      static_cast<double>(best_k) * f.grid.step[static_cast<std::size_t>(axis)];
  spec.c = c;
  return check_periodic(f, spec);
}

std::string value_shape_warning(const SampledFunction& f, const std::vector<Complex>& cs) {
  double max_abs = 0.0, max_imag = 0.0;
  double min_real = kInf;
  for (std::size_t i = 0; i < f.values.size(); ++i) {
    max_abs = std::max(max_abs, std::abs(f.values[i]));
    max_imag = std::max(max_imag, std::abs(f.values[i].imag()));
    min_real = std::min(min_real, f.values[i].real());
  }
  const bool real_valued = max_imag <= 1e-9 * std::max(1.0, max_abs);
  if (!real_valued) return {};
  const bool nonneg = min_real >= -1e-9 * std::max(1.0, max_abs);
  for (Complex c : cs) {
    if (nonneg && std::abs(c - Complex{1.0, 0.0}) > 1e-9)
      return "warning: nonnegative real input admits only factor 1; ";
    if (std::abs(c - Complex{1.0, 0.0}) > 1e-9 && std::abs(c + Complex{1.0, 0.0}) > 1e-9)
      return "warning: real-valued input admits only factors -1 and 1; ";
  }
  return {};
}

// Mask selecting the base cell {index_j < k} of one axis.
std::vector<std::uint8_t> base_cell_mask(const Grid& g, int axis, Index k) {
  std::vector<std::uint8_t> mask(g.size(), 0);
  const auto strides = g.strides();
  const Index stride = strides[static_cast<std::size_t>(axis)];
  const Index count = g.count[static_cast<std::size_t>(axis)];
  for (std::size_t i = 0; i < mask.size(); ++i) {
    const Index idx = (static_cast<Index>(i) / stride) % count;
    mask[i] = idx < k ? 1 : 0;
  }
  return mask;
}

// Validates one axis shift across the whole fold range of the window: the
// defect of m steps, anchored in the base cell, must stay under eps for
// every m reachable inside the window. This is exactly the bound the
// periodization needs.
bool verify_fold_range(const SampledFunction& f, int axis, Index k, Complex c, double eps,
                       const SemiOptions& opt, double* worst_out, int* folds_out) {
  const Index count = f.grid.count[static_cast<std::size_t>(axis)];
  const Index folds = (count - 1) / k;
  // A single fold is no evidence: the cell must repeat at least twice, or
  // any coincidence at the far edge of the window would pass.
  if (folds < 2) return false;
  const auto mask = base_cell_mask(f.grid, axis, k);
  ShiftScanOptions so;
  so.mask = mask.data();
  so.decimate = opt.sup_stride;
  so.early_exit_above = eps;
  double worst = 0.0;
  for (Index m = folds; m >= 1; --m) {
    const auto delta = axis_delta(f.grid.dim(), axis, k * m);
    const ScanStats s = sup_shift_defect(f, delta, int_pow(c, static_cast<int>(m)), so);
    if (s.points == 0) continue;
    if (s.sup > eps) return false;
    worst = std::max(worst, s.sup);
  }
  if (worst_out != nullptr) *worst_out = worst;
  if (folds_out != nullptr) *folds_out = static_cast<int>(folds);
  return true;
}

// Twisted periodization of the base cell over the grid-aligned lattice
// {k_j e_j}: G(t) = prod_j c_j^{m_j} F(rho(t)) with t = rho(t) + sum m_j k_j.
SampledFunction periodize(const SampledFunction& f, const std::vector<Index>& ks,
                          const std::vector<Complex>& cs) {
  SampledFunction g = f;
  g.label = f.label + "~periodization";
  const auto strides = f.grid.strides();
  const int n = f.grid.dim();
  std::vector<Index> idx(static_cast<std::size_t>(n), 0);
  for (std::size_t i = 0; i < f.size(); ++i) {
    std::size_t src = 0;
    Complex twist{1.0, 0.0};
    for (int j = 0; j < n; ++j) {
      const Index stride = strides[static_cast<std::size_t>(j)];
      const Index ij = (static_cast<Index>(i) / stride) % f.grid.count[static_cast<std::size_t>(j)];
      const Index m = ij / ks[static_cast<std::size_t>(j)];
      const Index r = ij % ks[static_cast<std::size_t>(j)];
      src += static_cast<std::size_t>(r) * static_cast<std::size_t>(stride);
      twist *= int_pow(cs[static_cast<std::size_t>(j)], static_cast<int>(m));
    }
    for (int c = 0; c < f.width; ++c)
      g.values[i * static_cast<std::size_t>(f.width) + static_cast<std::size_t>(c)] =
          twist * f.values[src * static_cast<std::size_t>(f.width) + static_cast<std::size_t>(c)];
    g.valid[i] = f.valid[src];
  }
  return g;
}

} // namespace

double MeanReport::magnitude() const {
  return vector_norm(value.data(), static_cast<int>(value.size()), ValueNorm::Euclidean);
}

MeanReport mean_value(const SampledFunction& f, const MeanOptions& opt) {
  return windowed_mean(f, nullptr, opt);
}

MeanReport bohr_coefficient(const SampledFunction& f, const RVec& lambda,
                            const MeanOptions& opt) {
  return windowed_mean(f, &lambda, opt);
}

SpectrumEstimate bohr_spectrum_scan(const SampledFunction& f, const SpectrumScanOptions& opt) {
  const int n = f.grid.dim();
  MeanOptions mo;
  mo.t_ladder = opt.t_ladder;
  mo.anchor_fractions.clear();
  mo.smooth_fraction = opt.smooth_fraction;
  std::vector<double> ladder = mo.t_ladder.empty() ? default_t_ladder(f, mo) : mo.t_ladder;
  mo.t_ladder = ladder;
  const double t_top = ladder.back();

  SpectrumEstimate est;
  est.t_ladder = ladder;
  est.resolution = opt.resolution > 0.0
                       ? opt.resolution
                       : std::numbers::pi / (2.0 * t_top);

  BoxAverager top = make_averager(f, t_top, opt.smooth_fraction * t_top, 0);
  const auto response_mag = [&](const RVec& lam) {
    std::size_t pts = 0;
    const auto v = top.eval(&lam, {}, &pts);
    return vector_norm(v.data(), static_cast<int>(v.size()), f.norm_kind);
  };

  // Empirical leakage of the estimator on unit probes at a few irrational
  // frequency offsets, scaled by the data magnitude.
  const double sup = sup_norm(f).sup;
  if (opt.noise_floor > 0.0) {
    est.noise_floor = opt.noise_floor;
  } else {
    double probe = 0.0;
    const double gammas[] = {std::numbers::sqrt2, (1.0 + std::sqrt(5.0)) / 2.0,
                             std::numbers::pi - std::numbers::e};
    for (double g : gammas) {
      RVec d(static_cast<std::size_t>(n), 0.0);
      for (int j = 0; j < n; ++j) {
        std::fill(d.begin(), d.end(), 0.0);
        d[static_cast<std::size_t>(j)] = g;
        probe = std::max(probe, top.window_response(d));
      }
    }
    est.noise_floor = 5.0 * probe * sup + 1e-14;
  }

  // Coarse grid: symmetric per-axis ticks including zero.
  const Index half = static_cast<Index>(std::ceil(opt.lambda_max / est.resolution));
  const Index ticks = 2 * half + 1;
  std::size_t total = 1;
  for (int j = 0; j < n; ++j) total *= static_cast<std::size_t>(ticks);
  const auto tick_value = [&](Index t) {
    return static_cast<double>(t - half) * est.resolution;
  };
  std::vector<double> coarse(total, 0.0);
  parallel_for(total, opt.workers, [&](std::size_t i) {
    RVec lam(static_cast<std::size_t>(n), 0.0);
    std::size_t rest = i;
    for (int j = n - 1; j >= 0; --j) {
      lam[static_cast<std::size_t>(j)] = tick_value(static_cast<Index>(rest % static_cast<std::size_t>(ticks)));
      rest /= static_cast<std::size_t>(ticks);
    }
    coarse[i] = response_mag(lam);
  });

  // Local maxima above the floor.
  std::vector<std::size_t> axis_stride(static_cast<std::size_t>(n), 1);
  for (int j = n - 2; j >= 0; --j)
    axis_stride[static_cast<std::size_t>(j)] =
        axis_stride[static_cast<std::size_t>(j + 1)] * static_cast<std::size_t>(ticks);
  std::vector<std::pair<double, std::size_t>> cands;
  for (std::size_t i = 0; i < total; ++i) {
    if (coarse[i] < est.noise_floor) continue;
    bool is_max = true;
    for (int j = 0; j < n && is_max; ++j) {
      const std::size_t st = axis_stride[static_cast<std::size_t>(j)];
      const Index pos = static_cast<Index>((i / st) % static_cast<std::size_t>(ticks));
      if (pos > 0 && coarse[i - st] >= coarse[i]) is_max = false;
      if (pos + 1 < ticks && coarse[i + st] > coarse[i]) is_max = false;
    }
    if (is_max) cands.emplace_back(coarse[i], i);
  }
  std::sort(cands.begin(), cands.end(), [](const auto& a, const auto& b) {
    if (a.first != b.first) return a.first > b.first;
    return a.second < b.second;
  });

  // Acceptance in decreasing magnitude, screening against the predicted
  // leakage of the peaks already taken, then coordinate refinement.
  const int refine_iters = 44;
  double bracket = est.resolution;
  for (int i = 0; i < refine_iters; ++i) bracket *= 2.0 / 3.0;
  est.refine_width = bracket;
  for (const auto& [mag, flat] : cands) {
    if (static_cast<int>(est.peaks.size()) >= opt.max_peaks) {
      est.note += "peak cap reached; ";
      break;
    }
    RVec lam(static_cast<std::size_t>(n), 0.0);
    std::size_t rest = flat;
    for (int j = n - 1; j >= 0; --j) {
      lam[static_cast<std::size_t>(j)] = tick_value(static_cast<Index>(rest % static_cast<std::size_t>(ticks)));
      rest /= static_cast<std::size_t>(ticks);
    }
    double predicted = 0.0;
    bool duplicate = false;
    RVec delta(static_cast<std::size_t>(n), 0.0);
    for (const auto& p : est.peaks) {
      bool close = true;
      for (int j = 0; j < n; ++j) {
        delta[static_cast<std::size_t>(j)] = lam[static_cast<std::size_t>(j)] - p.lambda[static_cast<std::size_t>(j)];
        if (std::abs(delta[static_cast<std::size_t>(j)]) > est.resolution) close = false;
      }
      if (close) duplicate = true;
      predicted += p.magnitude * top.window_response(delta);
    }
    if (duplicate || mag <= std::max(est.noise_floor, 2.0 * predicted)) continue;

    const int rounds = n == 1 ? 1 : 2;
    for (int r = 0; r < rounds; ++r)
      for (int j = 0; j < n; ++j) {
        double lo = lam[static_cast<std::size_t>(j)] - est.resolution;
        double hi = lam[static_cast<std::size_t>(j)] + est.resolution;
        for (int it = 0; it < refine_iters; ++it) {
          const double m1 = lo + (hi - lo) / 3.0;
          const double m2 = hi - (hi - lo) / 3.0;
          RVec a = lam, b = lam;
          a[static_cast<std::size_t>(j)] = m1;
          b[static_cast<std::size_t>(j)] = m2;
          if (response_mag(a) < response_mag(b))
            lo = m1;
          else
            hi = m2;
        }
        lam[static_cast<std::size_t>(j)] = 0.5 * (lo + hi);
      }

    bool refined_dup = false;
    for (const auto& p : est.peaks) {
      bool close = true;
      for (int j = 0; j < n; ++j)
        if (std::abs(lam[static_cast<std::size_t>(j)] - p.lambda[static_cast<std::size_t>(j)]) > est.resolution)
          close = false;
      if (close) refined_dup = true;
    }
    if (refined_dup) continue;

    MeanReport coef = bohr_coefficient(f, lam, mo);
    const double m = vector_norm(coef.value.data(), static_cast<int>(coef.value.size()), f.norm_kind);
    if (m <= est.noise_floor) continue;
    SpectrumPeak peak;
    peak.lambda = lam;
    peak.coefficient = coef.value;
    peak.magnitude = m;
    peak.residual = coef.residual;
    est.peaks.push_back(std::move(peak));
  }

  std::sort(est.peaks.begin(), est.peaks.end(), [](const SpectrumPeak& a, const SpectrumPeak& b) {
    double na = 0.0, nb = 0.0;
    for (double v : a.lambda) na += v * v;
    for (double v : b.lambda) nb += v * v;
    if (na != nb) return na < nb;
    return a.lambda < b.lambda;
  });
  return est;
}

SemiReport semi_cj_check(const SampledFunction& f, const std::vector<Complex>& cs,
                         const std::vector<double>& eps_list, const SemiOptions& opt) {
  const int n = f.grid.dim();
  if (static_cast<int>(cs.size()) != n)
    throw std::invalid_argument("semi_cj_check: need one factor per axis");
  if (eps_list.empty()) throw std::invalid_argument("semi_cj_check: empty eps list");
  for (double e : eps_list)
    if (e <= 0.0) throw std::invalid_argument("semi_cj_check: eps must be positive");
  for (Complex c : cs)
    if (std::abs(c) == 0.0) throw std::invalid_argument("semi_cj_check: zero factor");

  SemiReport rep;
  rep.note = value_shape_warning(f, cs);
  rep.rigidity.resize(static_cast<std::size_t>(n));

  // Axes with non-unimodular factors must carry an exact axis period; the
  // search degenerates to the best-shift periodicity check.
  std::vector<bool> rigid_ok(static_cast<std::size_t>(n), true);
  bool any_rigid_fail = false;
  for (int j = 0; j < n; ++j) {
    if (unit_modulus(cs[static_cast<std::size_t>(j)])) continue;
    rep.rigidity[static_cast<std::size_t>(j)] = rigidity_check(f, j, cs[static_cast<std::size_t>(j)]);
    rigid_ok[static_cast<std::size_t>(j)] = rep.rigidity[static_cast<std::size_t>(j)].pass;
    if (!rigid_ok[static_cast<std::size_t>(j)]) any_rigid_fail = true;
  }

  bool all_pass = true;
  bool any_unsearchable = false;
  for (double eps : eps_list) {
    SemiEpsResult res;
    res.eps = eps;
    res.axes.resize(static_cast<std::size_t>(n));
    res.pass = true;
    for (int j = 0; j < n; ++j) {
      SemiAxisWitness& w = res.axes[static_cast<std::size_t>(j)];
      w.axis = j;
      const Complex c = cs[static_cast<std::size_t>(j)];
      if (!unit_modulus(c)) {
        const PeriodicReport& pr = rep.rigidity[static_cast<std::size_t>(j)];
        w.found = pr.pass;
        if (pr.pass) {
          double omega = 0.0;
          for (double o : pr.snap.snapped) omega += o;
          w.omega = omega;
          w.defect = pr.defect;
          w.m_checked = 1;
          w.points = pr.points;
        }
        if (!w.found) res.pass = false;
        continue;
      }
      Index k_cap = 0;
      auto cands = axis_candidates(f, j, c, eps, opt, &k_cap);
      if (k_cap < 1) {
        any_unsearchable = true;
        res.pass = false;
        continue;
      }
      std::sort(cands.begin(), cands.end(), [](const ShiftCandidate& a, const ShiftCandidate& b) {
        if (a.defect != b.defect) return a.defect < b.defect;
        return a.k < b.k;
      });
      if (static_cast<int>(cands.size()) > opt.max_candidates)
        cands.resize(static_cast<std::size_t>(opt.max_candidates));
      for (const ShiftCandidate& cand : cands)
        if (verify_m_ladder(f, j, cand.k, c, eps, opt, &w)) break;
      if (!w.found) res.pass = false;
    }
    if (!res.pass) all_pass = false;
    rep.results.push_back(std::move(res));
  }

  if (any_rigid_fail || (!all_pass && !any_unsearchable))
    rep.verdict = Verdict::Fail;
  else if (!all_pass)
    rep.verdict = Verdict::Indeterminate;
  else
    rep.verdict = Verdict::Pass;
  if (any_unsearchable) rep.note += "window too small for the shift search; ";
  return rep;
}

ApproximationReport semi_periodic_approximation(const SampledFunction& f,
                                                const std::vector<Complex>& cs, int k_max,
                                                const SemiOptions& opt) {
  const int n = f.grid.dim();
  if (static_cast<int>(cs.size()) != n)
    throw std::invalid_argument("semi_periodic_approximation: need one factor per axis");
  if (k_max < 1) throw std::invalid_argument("semi_periodic_approximation: k_max must be >= 1");

  std::vector<double> ladder = opt.eps_ladder;
  if (ladder.empty()) {
    const double top = 0.5 * sup_norm(f).sup;
    if (top <= 0.0) throw std::invalid_argument("semi_periodic_approximation: zero input");
    for (int k = 0; k < k_max; ++k) ladder.push_back(top * std::pow(0.5, k));
  }
  if (static_cast<int>(ladder.size()) < k_max)
    throw std::invalid_argument("semi_periodic_approximation: eps ladder shorter than k_max");

  ApproximationReport rep;
  const double scale = std::max(1.0, sup_norm(f).sup);
  double prev_gap = kInf;
  bool monotone = true;
  for (int rung = 0; rung < k_max; ++rung) {
    const double eps = ladder[static_cast<std::size_t>(rung)];
    std::vector<Index> ks(static_cast<std::size_t>(n), 0);
    ApproxStep step;
    step.eps = eps;
    step.omega.assign(static_cast<std::size_t>(n), 0.0);
    bool found_all = true;
    for (int j = 0; j < n; ++j) {
      const Complex c = cs[static_cast<std::size_t>(j)];
      const Index count = f.grid.count[static_cast<std::size_t>(j)];
      // Smallest shift whose defect holds across the whole fold range; the
      // quick single-step scan filters before the full fold validation.
      ShiftScanOptions so;
      so.decimate = opt.sup_stride;
      so.early_exit_above = eps;
      bool found = false;
      for (Index k = 1; k <= count - 1; ++k) {
        const ScanStats quick = sup_shift_defect(f, axis_delta(n, j, k), c, so);
        if (quick.points == 0 || quick.sup > eps) continue;
        double worst = 0.0;
        int folds = 0;
        if (!verify_fold_range(f, j, k, c, eps, opt, &worst, &folds)) continue;
        ks[static_cast<std::size_t>(j)] = k;
        step.omega[static_cast<std::size_t>(j)] =
            static_cast<double>(k) * f.grid.step[static_cast<std::size_t>(j)];
        step.shift_defect = std::max(step.shift_defect, worst);
        step.m_checked = std::max(step.m_checked, folds);
        found = true;
        break;
      }
      if (!found) {
        found_all = false;
        break;
      }
    }
    if (!found_all) {
      std::ostringstream os;
      os << "no admissible shift at eps " << eps << "; ";
      rep.note += os.str();
      rep.verdict = Verdict::Fail;
      return rep;
    }
    SampledFunction g = periodize(f, ks, cs);
    step.gap = sup_difference(f, g).sup;
    step.certified = true;
    if (step.gap >= prev_gap - 1e-12 * scale) monotone = false;
    prev_gap = step.gap;
    rep.steps.push_back(step);
    rep.approximants.push_back(std::move(g));
  }
  rep.verdict = monotone ? Verdict::Pass : Verdict::Indeterminate;
  if (!monotone) rep.note += "gap ladder failed to decrease; ";
  return rep;
}

ApproximationReport certify_from_approximants(const SampledFunction& f,
                                              std::span<const SampledFunction> approximants,
                                              const std::vector<Complex>& cs,
                                              const SemiOptions& opt) {
  const int n = f.grid.dim();
  if (static_cast<int>(cs.size()) != n)
    throw std::invalid_argument("certify_from_approximants: need one factor per axis");
  if (approximants.empty())
    throw std::invalid_argument("certify_from_approximants: no approximants");

  ApproximationReport rep;
  const double scale = std::max(1.0, sup_norm(f).sup);
  double prev_gap = kInf;
  bool monotone = true;
  int certified = 0;
  for (const SampledFunction& g : approximants) {
    if (g.grid.count != f.grid.count || g.grid.step != f.grid.step)
      throw std::invalid_argument("certify_from_approximants: grid mismatch");
    ApproxStep step;
    step.gap = sup_difference(f, g).sup;
    step.eps = 3.0 * step.gap;
    step.omega.assign(static_cast<std::size_t>(n), 0.0);
    const double eps_cert = std::max(step.gap, 1e-9 * scale);
    bool all_axes = true;
    for (int j = 0; j < n; ++j) {
      SemiOptions so = opt;
      Index k_cap = 0;
      auto cands = axis_candidates(g, j, cs[static_cast<std::size_t>(j)], eps_cert, so, &k_cap);
      std::sort(cands.begin(), cands.end(), [](const ShiftCandidate& a, const ShiftCandidate& b) {
        if (a.defect != b.defect) return a.defect < b.defect;
        return a.k < b.k;
      });
      if (static_cast<int>(cands.size()) > so.max_candidates)
        cands.resize(static_cast<std::size_t>(so.max_candidates));
      SemiAxisWitness w;
      for (const ShiftCandidate& cand : cands)
        if (verify_m_ladder(g, j, cand.k, cs[static_cast<std::size_t>(j)], eps_cert, so, &w)) break;
      if (!w.found) {
        all_axes = false;
        break;
      }
      step.omega[static_cast<std::size_t>(j)] = w.omega;
      step.shift_defect = std::max(step.shift_defect, w.defect);
      step.m_checked = step.m_checked == 0 ? w.m_checked : std::min(step.m_checked, w.m_checked);
    }
    step.certified = all_axes;
    if (all_axes) ++certified;
    if (step.gap >= prev_gap - 1e-12 * scale && rep.steps.size() > 0) monotone = false;
    prev_gap = step.gap;
    rep.steps.push_back(std::move(step));
  }
  if (!monotone) {
    rep.verdict = Verdict::Indeterminate;
    rep.note += "gap ladder failed to decrease; ";
  } else if (certified == 0) {
    rep.verdict = Verdict::Indeterminate;
    rep.note += "no rung certified inside the window; ";
  } else {
    rep.verdict = Verdict::Pass;
    if (certified < static_cast<int>(rep.steps.size()))
      rep.note += "some rungs certified only by gap decrease; ";
  }
  return rep;
}

CommensurabilityReport commensurability_test(const SpectrumEstimate& spectrum, double tolerance,
                                             Index denominator_cap) {
  if (spectrum.peaks.empty())
    throw std::invalid_argument("commensurability_test: empty spectrum");
  if (tolerance <= 0.0 || denominator_cap < 1)
    throw std::invalid_argument("commensurability_test: bad tolerance or cap");
  const int n = static_cast<int>(spectrum.peaks.front().lambda.size());

  CommensurabilityReport rep;
  rep.tolerance = tolerance;
  rep.denominator_cap = denominator_cap;
  bool all_pass = true;
  bool any_fail = false;
  for (int j = 0; j < n; ++j) {
    CommensurabilityAxis ax;
    ax.axis = j;
    std::vector<double> freqs;
    double max_abs = 0.0;
    for (const auto& p : spectrum.peaks)
      max_abs = std::max(max_abs, std::abs(p.lambda[static_cast<std::size_t>(j)]));
    for (const auto& p : spectrum.peaks) {
      const double v = std::abs(p.lambda[static_cast<std::size_t>(j)]);
      if (v > 1e-9 * std::max(1.0, max_abs)) freqs.push_back(v);
    }
    if (freqs.empty()) {
      ax.pass = true;
      ax.omega = kTwoPi;
      ax.denominator = 1;
      ax.residual = 0.0;
      ax.best_in_cap = 0.0;
      rep.axes.push_back(ax);
      continue;
    }
    const double base = *std::min_element(freqs.begin(), freqs.end());
    std::vector<double> ratios;
    ratios.reserve(freqs.size());
    for (double v : freqs) ratios.push_back(v / base);
    for (Index q = 1; q <= denominator_cap; ++q) {
      double worst = 0.0;
      for (double r : ratios) {
        const double x = r * static_cast<double>(q);
        worst = std::max(worst, kTwoPi * std::abs(x - std::round(x)));
        if (worst > tolerance && worst >= ax.best_in_cap) break;
      }
      if (worst < ax.best_in_cap) ax.best_in_cap = worst;
      if (worst <= tolerance) {
        ax.pass = true;
        ax.denominator = q;
        ax.omega = kTwoPi * static_cast<double>(q) / base;
        ax.residual = worst;
        break;
      }
    }
    if (!ax.pass) {
      all_pass = false;
      if (ax.best_in_cap > 10.0 * tolerance) any_fail = true;
    }
    rep.axes.push_back(ax);
  }
  if (all_pass)
    rep.verdict = Verdict::Pass;
  else if (any_fail)
    rep.verdict = Verdict::Fail;
  else {
    rep.verdict = Verdict::Indeterminate;
    rep.note += "denominator cap reached near tolerance; ";
  }
  return rep;
}

} // namespace aperiodica
