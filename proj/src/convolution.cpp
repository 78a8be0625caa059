#include "aperiodica/convolution.hpp"

#include <atomic>
#include <cmath>
#include <stdexcept>

#include "aperiodica/periodic.hpp"
#include "aperiodica/scan.hpp"
#include "conv_detail.hpp"
#include "detail.hpp"

namespace aperiodica {
namespace {

constexpr double kPi = 3.14159265358979323846;

/// Trapezoid weight on the closed index range [-m, m]: halved at the ends.
double edge_factor(Index i, Index m) { return (i == -m || i == m) ? 0.5 : 1.0; }

}  // namespace

namespace conv_detail {

std::vector<Tap> build_taps(const Kernel& k, const Grid& g, const char* what) {
  const int n = g.dim();
  if (!k.evaluator) throw std::invalid_argument(std::string(what) + ": kernel has no evaluator");
  if (k.dim != n) throw std::invalid_argument(std::string(what) + ": kernel dimension mismatch");
  if (!(k.radius > 0.0) || !std::isfinite(k.radius))
    throw std::invalid_argument(std::string(what) + ": kernel radius must be positive");

  std::vector<Index> m(n);
  double vol = 1.0;
  for (int j = 0; j < n; ++j) {
    m[j] = static_cast<Index>(std::ceil(k.radius / g.step[j] - 1e-12));
    vol *= g.step[j];
  }
  const auto strides = g.strides();

  std::vector<Tap> taps;
  std::vector<Index> idx(n);
  for (int j = 0; j < n; ++j) idx[j] = -m[j];
  RVec sigma(n);
  for (;;) {
    double w = vol;
    for (int j = 0; j < n; ++j) {
      sigma[j] = static_cast<double>(idx[j]) * g.step[j];
      w *= edge_factor(idx[j], m[j]);
    }
    const double v = k.evaluator(sigma.data());
    if (!std::isfinite(v))
      throw std::invalid_argument(std::string(what) + ": kernel evaluator returned a non-finite value");
    if (v != 0.0) {
      Tap t;
      t.off = idx;
      for (int j = 0; j < n; ++j) t.flat += idx[j] * strides[j];
      t.weight = w * v;
      taps.push_back(std::move(t));
    }
    int j = n - 1;
    while (j >= 0 && ++idx[j] > m[j]) {
      idx[j] = -m[j];
      --j;
    }
    if (j < 0) break;
  }
  return taps;
}

}  // namespace conv_detail

Kernel box_kernel(int dim, double halfwidth) {
  if (dim < 1) throw std::invalid_argument("box_kernel: dimension must be positive");
  if (!(halfwidth > 0.0)) throw std::invalid_argument("box_kernel: halfwidth must be positive");
  Kernel k;
  const double height = std::pow(2.0 * halfwidth, -dim);
  const double edge = halfwidth * (1.0 + 1e-12);
  k.evaluator = [dim, height, edge](const double* y) {
    for (int j = 0; j < dim; ++j)
      if (std::abs(y[j]) > edge) return 0.0;
    return height;
  };
  k.l1_norm = 1.0;
  k.radius = halfwidth;
  k.delta = 0.0;
  k.dim = dim;
  k.name = "box";
  return k;
}

Kernel gaussian_kernel(int dim, double t0, double delta) {
  if (dim < 1) throw std::invalid_argument("gaussian_kernel: dimension must be positive");
  if (!(t0 > 0.0)) throw std::invalid_argument("gaussian_kernel: t0 must be positive");
  if (!(delta > 0.0 && delta < 1.0))
    throw std::invalid_argument("gaussian_kernel: delta must lie in (0, 1)");
  Kernel k;
  const double scale = std::pow(4.0 * kPi * t0, -0.5 * dim);
  const double inv = 1.0 / (4.0 * t0);
  k.evaluator = [dim, scale, inv](const double* y) {
    double q = 0.0;
    for (int j = 0; j < dim; ++j) q += y[j] * y[j];
    return scale * std::exp(-q * inv);
  };
  k.l1_norm = 1.0;
  // Per-axis Chernoff tail e^{-r^2 / 4 t0}, union-bounded over the axes.
  k.radius = 2.0 * std::sqrt(t0 * std::log(static_cast<double>(dim) / delta));
  k.delta = delta;
  k.dim = dim;
  k.name = "heat";
  return k;
}

namespace {

double lattice_mass(const Kernel& k, double step, bool absolute) {
  if (!(step > 0.0)) throw std::invalid_argument("kernel quadrature: step must be positive");
  Grid g;
  g.origin.assign(k.dim, 0.0);
  g.step.assign(k.dim, step);
  g.count.assign(k.dim, 1);
  const auto taps = conv_detail::build_taps(k, g, "kernel quadrature");
  double s = 0.0;
  for (const auto& t : taps) s += absolute ? std::abs(t.weight) : t.weight;
  return s;
}

}  // namespace

double kernel_quadrature_mass(const Kernel& k, double step) { return lattice_mass(k, step, true); }

double kernel_signed_mass(const Kernel& k, double step) { return lattice_mass(k, step, false); }

SampledFunction convolve(const Kernel& k, const SampledFunction& f, int workers) {
  const Grid& g = f.grid;
  const auto taps = conv_detail::build_taps(k, g, "convolve");
  const int n = g.dim();
  const int width = f.width;
  const auto strides = g.strides();
  const std::size_t total = g.size();

  SampledFunction out;
  out.grid = g;
  out.domain = f.domain;
  out.width = width;
  out.norm_kind = f.norm_kind;
  out.label = (k.name.empty() ? std::string("kernel") : k.name) + "*" +
              (f.label.empty() ? std::string("f") : f.label);
  out.values.assign(f.values.size(), Complex{});
  out.valid.assign(total, 0);

  if (taps.empty()) {
    out.valid = f.valid;  // zero kernel: zero output wherever the input exists
    return out;
  }

  std::atomic<std::size_t> kept{0};
  detail::parallel_for(total, workers, [&](std::size_t flat) {
    thread_local std::vector<Index> coords;
    thread_local std::vector<Complex> acc;
    coords.assign(n, 0);
    std::size_t rem = flat;
    for (int j = 0; j < n; ++j) {
      coords[j] = static_cast<Index>(rem / static_cast<std::size_t>(strides[j]));
      rem %= static_cast<std::size_t>(strides[j]);
    }
    acc.assign(width, Complex{});
    for (const auto& t : taps) {
      for (int j = 0; j < n; ++j) {
        const Index c = coords[j] + t.off[j];
        if (c < 0 || c >= g.count[j]) return;  // tap exits the window: boundary point
      }
      const std::size_t target = flat + static_cast<std::size_t>(t.flat);
      if (!f.is_valid(target)) return;
      const Complex* src = f.at(target);
      for (int ch = 0; ch < width; ++ch) acc[ch] += t.weight * src[ch];
    }
    Complex* dst = out.values.data() + flat * static_cast<std::size_t>(width);
    for (int ch = 0; ch < width; ++ch) dst[ch] = acc[ch];
    out.valid[flat] = 1;
    kept.fetch_add(1, std::memory_order_relaxed);
  });

  if (kept.load() == 0)
    throw std::invalid_argument("convolve: kernel support never fits inside the window");
  return out;
}

SampledFunction gaussian_apply(double t0, const SampledFunction& f, int workers, double delta) {
  return convolve(gaussian_kernel(f.grid.dim(), t0, delta), f, workers);
}

InvarianceReport convolution_invariance_property(const Kernel& k, const SampledFunction& f,
                                                 const AsymptoticSpec& law, InvarianceVariant v,
                                                 double eps, const QuasiOptions& opt,
                                                 int workers) {
  if (!(eps > 0.0))
    throw std::invalid_argument("convolution_invariance_property: eps must be positive");

  InvarianceReport rep;
  rep.variant = v;
  rep.eps = eps;
  const double mass = std::max(k.l1_norm, kernel_quadrature_mass(k, detail::min_step(f.grid)));
  const double supf = sup_norm(f).sup;
  rep.eps_out = eps * mass + (1.0 + std::abs(law.shift.c)) * supf * k.delta;

  const auto run = [&](const SampledFunction& s, double tol, double& defect) {
    switch (v) {
      case InvarianceVariant::ExactPeriodic: {
        const PeriodicReport r = check_periodic(s, law.shift, tol);
        defect = r.defect;
        return r.pass ? Verdict::Pass : Verdict::Fail;
      }
      case InvarianceVariant::SAsymptotic: {
        const SAsymptoticReport r = s_asymptotic_check(s, law, tol);
        defect = r.margins.empty() ? 0.0 : r.margins.back().value;
        return r.verdict;
      }
      case InvarianceVariant::QuasiAsymptotic: {
        const QuasiReport r = quasi_asymptotic_check(s, law, tol, opt);
        defect = r.margins.empty() ? 0.0 : r.margins.back().value;
        return r.verdict;
      }
    }
    return Verdict::Indeterminate;
  };

  rep.input = run(f, eps, rep.input_defect);
  if (rep.input != Verdict::Pass)
    throw std::invalid_argument(
        "convolution_invariance_property: the input fails its own class check");

  const SampledFunction conv = convolve(k, f, workers);
  rep.output = run(conv, rep.eps_out, rep.output_defect);
  rep.note = rep.output == Verdict::Pass ? "verdict carried through the convolution"
                                         : "verdict lost under the convolution";
  return rep;
}

}  // namespace aperiodica
