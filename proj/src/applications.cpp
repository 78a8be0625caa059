#include "aperiodica/applications.hpp"

#include <cmath>
#include <cstdio>
#include <stdexcept>

#include "aperiodica/periodic.hpp"
#include "aperiodica/scan.hpp"
#include "conv_detail.hpp"
#include "detail.hpp"

namespace aperiodica {
namespace {

void validate_wave_factor(const WaveProblem& p, const char* what) {
  if (!(p.a > 0.0)) throw std::invalid_argument(std::string(what) + ": wave speed must be positive");
  if (p.k < 1) throw std::invalid_argument(std::string(what) + ": k must be at least 1");
  if (std::abs(p.c) == 0.0) throw std::invalid_argument(std::string(what) + ": zero factor");
  Complex pw{1.0, 0.0};
  for (int j = 0; j < p.k - 1; ++j) pw *= p.c;
  if (std::abs(pw - Complex{1.0, 0.0}) > 1e-12)
    throw std::invalid_argument(std::string(what) + ": c^(k-1) must equal 1");
}

void require_line_pair(const WaveProblem& p, const char* what) {
  const Grid& gf = p.f.grid;
  const Grid& gg = p.g.grid;
  if (gf.dim() != 1 || p.f.width != 1 || p.g.width != 1)
    throw std::invalid_argument(std::string(what) + ": wave data must be scalar on one axis");
  if (gf.origin != gg.origin || gf.step != gg.step || gf.count != gg.count)
    throw std::invalid_argument(std::string(what) + ": f and g must share one grid");
}

/// Lattice index of x = 0; the anchor of the velocity antiderivative.
Index zero_index(const Grid& g, const char* what) {
  const Index i0 = static_cast<Index>(std::llround(-g.origin[0] / g.step[0]));
  if (i0 < 0 || i0 >= g.count[0] || std::abs(g.origin[0] + static_cast<double>(i0) * g.step[0]) >
                                        1e-9 * std::max(1.0, g.step[0]))
    throw std::invalid_argument(std::string(what) + ": the origin is off the lattice");
  return i0;
}

}  // namespace

SampledFunction cumulative_integral(const SampledFunction& g) {
  if (g.grid.dim() != 1 || g.width != 1)
    throw std::invalid_argument("cumulative_integral: needs a scalar sample on one axis");
  for (std::size_t i = 0; i < g.size(); ++i)
    if (!g.is_valid(i))
      throw std::invalid_argument("cumulative_integral: every sample in the window must be valid");
  const Index i0 = zero_index(g.grid, "cumulative_integral");
  const double h = g.grid.step[0];

  SampledFunction out = g;
  out.label = "int(" + (g.label.empty() ? std::string("g") : g.label) + ")";
  out.values.assign(g.size(), Complex{});
  out.values[static_cast<std::size_t>(i0)] = Complex{};
  for (Index i = i0 + 1; i < g.grid.count[0]; ++i)
    out.values[i] = out.values[i - 1] + 0.5 * h * (g.values[i - 1] + g.values[i]);
  for (Index i = i0 - 1; i >= 0; --i)
    out.values[i] = out.values[i + 1] - 0.5 * h * (g.values[i] + g.values[i + 1]);
  return out;
}

SampledFunction dalembert_solve(const WaveProblem& prob, double x_radius, double t_max) {
  validate_wave_factor(prob, "dalembert_solve");
  require_line_pair(prob, "dalembert_solve");
  if (!(x_radius >= 0.0) || !(t_max >= 0.0))
    throw std::invalid_argument("dalembert_solve: window extents must be nonnegative");

  const Grid& gf = prob.f.grid;
  const double h = gf.step[0];
  const Index i0 = zero_index(gf, "dalembert_solve");
  const Index half = static_cast<Index>(std::floor(x_radius / h + 1e-9));
  const Index nx = 2 * half + 1;
  const Index nt = static_cast<Index>(std::floor(t_max * prob.a / h + 1e-9)) + 1;
  const Index base = i0 - half;  // f-lattice index under u's first column
  if (base - (nt - 1) < 0 || base + (nx - 1) + (nt - 1) >= gf.count[0])
    throw std::invalid_argument("dalembert_solve: the dependency interval leaves the data window");

  const SampledFunction g1 = cumulative_integral(prob.g);
  const double dt = h / prob.a;

  SampledFunction u;
  u.grid.origin = {-static_cast<double>(half) * h, 0.0};
  u.grid.step = {h, dt};
  u.grid.count = {nx, nt};
  u.domain = Domain::full(2, std::hypot(static_cast<double>(half) * h,
                                        static_cast<double>(nt - 1) * dt));
  u.width = 1;
  u.norm_kind = prob.f.norm_kind;
  u.label = "dalembert(" + (prob.f.label.empty() ? std::string("f") : prob.f.label) + ")";
  u.values.assign(static_cast<std::size_t>(nx) * static_cast<std::size_t>(nt), Complex{});
  u.valid.assign(u.values.size(), 0);

  const double half_inv_a = 0.5 / prob.a;
  for (Index ix = 0; ix < nx; ++ix) {
    for (Index it = 0; it < nt; ++it) {
      const std::size_t fm = static_cast<std::size_t>(base + ix - it);
      const std::size_t fp = static_cast<std::size_t>(base + ix + it);
      const std::size_t flat = static_cast<std::size_t>(ix * nt + it);
      if (!prob.f.is_valid(fm) || !prob.f.is_valid(fp)) continue;
      u.values[flat] = 0.5 * (prob.f.values[fm] + prob.f.values[fp]) +
                       half_inv_a * (g1.values[fp] - g1.values[fm]);
      u.valid[flat] = 1;
    }
  }
  return u;
}

double dalembert_residual(const SampledFunction& u, double a) {
  if (u.grid.dim() != 2 || u.width != 1)
    throw std::invalid_argument("dalembert_residual: needs a scalar sample on the (x, t) grid");
  const Index nx = u.grid.count[0];
  const Index nt = u.grid.count[1];
  const double hx2 = u.grid.step[0] * u.grid.step[0];
  const double ht2 = u.grid.step[1] * u.grid.step[1];
  const double a2 = a * a;

  double worst = 0.0;
  std::size_t points = 0;
  for (Index ix = 1; ix + 1 < nx; ++ix) {
    for (Index it = 1; it + 1 < nt; ++it) {
      const std::size_t f = static_cast<std::size_t>(ix * nt + it);
      const std::size_t xm = f - static_cast<std::size_t>(nt);
      const std::size_t xp = f + static_cast<std::size_t>(nt);
      if (!(u.is_valid(f) && u.is_valid(xm) && u.is_valid(xp) && u.is_valid(f - 1) &&
            u.is_valid(f + 1)))
        continue;
      const Complex uxx = (u.values[xm] - 2.0 * u.values[f] + u.values[xp]) / hx2;
      const Complex utt = (u.values[f - 1] - 2.0 * u.values[f] + u.values[f + 1]) / ht2;
      worst = std::max(worst, std::abs(utt - a2 * uxx));
      ++points;
    }
  }
  if (points == 0)
    throw std::invalid_argument("dalembert_residual: no interior stencil point is valid");
  return worst;
}

WaveCertificate dalembert_asymptotic_certify(const WaveProblem& prob, const SampledFunction& u,
                                             std::optional<double> tol) {
  validate_wave_factor(prob, "dalembert_asymptotic_certify");
  require_line_pair(prob, "dalembert_asymptotic_certify");
  if (prob.omega == 0.0)
    throw std::invalid_argument("dalembert_asymptotic_certify: omega must be nonzero");
  if (!prob.region)
    throw std::invalid_argument("dalembert_asymptotic_certify: no certification region");
  if (u.grid.dim() != 2 || u.width != 1)
    throw std::invalid_argument("dalembert_asymptotic_certify: the solution lives on (x, t)");

  const Grid& gf = prob.f.grid;
  const double h = gf.step[0];
  const SampledFunction g1 = cumulative_integral(prob.g);
  const ShiftSnap snap = snap_shift(gf, RVec{prob.omega});
  const Index off = snap.offsets[0];

  std::vector<double> df(gf.size()), dg1(gf.size());
  const std::vector<Index> delta{off};
  shift_defect_field(prob.f, delta, prob.c, df);
  shift_defect_field(g1, delta, prob.c, dg1);

  WaveCertificate cert;
  cert.shift = {0.5 * (1.0 + prob.k) * prob.omega, 0.5 * (prob.k - 1) * prob.omega / prob.a};
  cert.tolerance = tol ? *tol
                       : static_cast<double>(1 + prob.k) *
                             (default_defect_tolerance(prob.f) + default_defect_tolerance(g1));

  const DomainSubset reg = DomainSubset::where(
      u.grid, [&](const double* t) { return prob.region(t[0], t[1]); }, "region");
  if (reg.count() == 0)
    throw std::invalid_argument("dalembert_asymptotic_certify: the region misses the window");

  // Data-side decay sum along the region shells: both characteristics, the
  // x + at one telescoped k times.
  const std::vector<double> ladder = detail::resolve_ladder(u.domain, {}, {});
  const Index nt = u.grid.count[1];
  const Index nf = gf.count[0];
  const auto data_sum = [&](Index ix, Index it, double& out) {
    const double x = u.grid.coord(0, ix);
    const Index fbase = static_cast<Index>(std::llround((x - gf.origin[0]) / h));
    const Index fm = fbase - it;
    const Index fp = fbase + it;
    if (fm < 0 || fp >= nf) return false;
    double s = df[fm] + dg1[fm];
    for (int j = 0; j < prob.k; ++j) {
      const Index y = fp + static_cast<Index>(j) * off;
      if (y < 0 || y >= nf) return false;
      s += df[y] + dg1[y];
    }
    if (!std::isfinite(s)) return false;
    out = s;
    return true;
  };

  for (double T : ladder) {
    LadderPoint rung{T, 0.0, 0};
    for (std::size_t flat = 0; flat < u.grid.size(); ++flat) {
      if (!reg.mask[flat] || u.grid.point_abs(flat) < T) continue;
      const Index ix = static_cast<Index>(flat) / nt;
      const Index it = static_cast<Index>(flat) % nt;
      double s = 0.0;
      if (!data_sum(ix, it, s)) continue;
      rung.value = std::max(rung.value, s);
      ++rung.points;
    }
    if (rung.points > 0) cert.decay_margins.push_back(rung);
  }

  if (cert.decay_margins.size() < 2) {
    cert.decay = Verdict::Indeterminate;
    cert.verdict = Verdict::Indeterminate;
    cert.note = "region too thin for a shell ladder";
    return cert;
  }
  const double first = cert.decay_margins.front().value;
  const double last = cert.decay_margins.back().value;
  if (last <= cert.tolerance)
    cert.decay = Verdict::Pass;
  else if (last < 0.9 * first)
    cert.decay = Verdict::Indeterminate;
  else
    cert.decay = Verdict::Fail;

  if (cert.decay != Verdict::Pass) {
    cert.verdict = cert.decay;
    cert.note = cert.decay == Verdict::Fail
                    ? "data defect does not decay along the region"
                    : "data decay unresolved at the window edge; check u directly";
    return cert;
  }

  AsymptoticSpec law;
  law.shift.omega = cert.shift;
  law.shift.c = prob.c;
  law.d = reg;
  law.tail_ladder = ladder;
  cert.solution = s_asymptotic_check(u, law, cert.tolerance);
  cert.verdict = cert.solution.verdict;
  cert.note = "data decay certified; the transported law was checked on the region";
  return cert;
}

SampledFunction hammerstein_solve(const HammersteinProblem& prob, const SampledFunction& y0,
                                  int max_iter, double tol, PicardLog* log, int workers) {
  const double q = prob.contraction();
  if (!(q < 1.0))
    throw std::invalid_argument("hammerstein_solve: L |k|_1 must stay below 1");
  if (!prob.nonlinearity) throw std::invalid_argument("hammerstein_solve: no nonlinearity");
  if (y0.width != 1)
    throw std::invalid_argument("hammerstein_solve: the unknown must be scalar");
  if (max_iter < 1) throw std::invalid_argument("hammerstein_solve: max_iter must be positive");
  if (!(tol > 0.0)) throw std::invalid_argument("hammerstein_solve: tol must be positive");

  const Grid& g = y0.grid;
  const auto taps = conv_detail::build_taps(prob.kernel, g, "hammerstein_solve");
  const int n = g.dim();
  const auto strides = g.strides();
  const std::size_t total = g.size();

  // The truncated operator only reads valid samples; its output is trusted
  // one kernel radius inside the window, where truncation changes nothing.
  std::vector<std::uint8_t> interior(total, 0);
  std::size_t interior_count = 0;
  {
    std::vector<Index> coords(n, 0);
    for (std::size_t flat = 0; flat < total; ++flat) {
      bool ok = y0.is_valid(flat);
      for (const auto& t : taps) {
        if (!ok) break;
        for (int j = 0; j < n; ++j) {
          const Index c = coords[j] + t.off[j];
          if (c < 0 || c >= g.count[j]) {
            ok = false;
            break;
          }
        }
        if (ok && !y0.is_valid(flat + static_cast<std::size_t>(t.flat))) ok = false;
      }
      if (ok) {
        interior[flat] = 1;
        ++interior_count;
      }
      int j = n - 1;
      while (j >= 0 && ++coords[j] == g.count[j]) {
        coords[j] = 0;
        --j;
      }
    }
  }
  if (interior_count == 0)
    throw std::invalid_argument("hammerstein_solve: kernel support never fits inside the window");

  std::vector<Complex> y(total), z(total), next(total);
  for (std::size_t i = 0; i < total; ++i) y[i] = y0.values[i];

  const auto apply = [&](std::vector<Complex>& dst) {
    detail::parallel_for(total, workers, [&](std::size_t flat) {
      thread_local std::vector<Index> coords;
      coords.assign(n, 0);
      std::size_t rem = flat;
      for (int j = 0; j < n; ++j) {
        coords[j] = static_cast<Index>(rem / static_cast<std::size_t>(strides[j]));
        rem %= static_cast<std::size_t>(strides[j]);
      }
      Complex acc{};
      for (const auto& t : taps) {
        bool in = true;
        for (int j = 0; j < n; ++j) {
          const Index c = coords[j] + t.off[j];
          if (c < 0 || c >= g.count[j]) {
            in = false;
            break;
          }
        }
        if (!in) continue;
        const std::size_t target = flat + static_cast<std::size_t>(t.flat);
        if (!y0.is_valid(target)) continue;
        acc += t.weight * z[target];
      }
      dst[flat] = acc;
    });
  };
  const auto compose = [&](const std::vector<Complex>& cur) {
    detail::parallel_for(total, workers, [&](std::size_t flat) {
      if (!y0.is_valid(flat)) {
        z[flat] = Complex{};
        return;
      }
      thread_local RVec pt;
      pt.assign(n, 0.0);
      g.point(flat, pt.data());
      z[flat] = prob.nonlinearity(pt.data(), cur[flat]);
    });
  };

  PicardLog local;
  PicardLog& lg = log ? *log : local;
  lg = PicardLog{};
  lg.tol = tol;

  for (int it = 1; it <= max_iter; ++it) {
    compose(y);
    apply(next);
    double update = 0.0;
    for (std::size_t i = 0; i < total; ++i) update = std::max(update, std::abs(next[i] - y[i]));
    lg.updates.push_back(update);
    if (lg.updates.size() >= 2) {
      const double prev = lg.updates[lg.updates.size() - 2];
      if (prev > 0.0) lg.contraction_ratio = std::max(lg.contraction_ratio, update / prev);
    }
    y.swap(next);
    lg.iterations = it;
    if (update <= tol) {
      lg.converged = true;
      break;
    }
  }
  if (!lg.converged) {
    char buf[160];
    std::snprintf(buf, sizeof buf,
                  "hammerstein_solve: no convergence after %d iterations (contraction ratio %.3f)",
                  lg.iterations, lg.contraction_ratio);
    throw std::runtime_error(buf);
  }

  compose(y);
  apply(next);
  double res = 0.0;
  for (std::size_t i = 0; i < total; ++i) res = std::max(res, std::abs(next[i] - y[i]));
  lg.residual = res;

  SampledFunction out = y0;
  out.label = "hammerstein(" + (prob.kernel.name.empty() ? std::string("k") : prob.kernel.name) + ")";
  out.values = std::move(y);
  out.valid = std::move(interior);
  return out;
}

SemiTransportReport hammerstein_semiperiodic_property(const HammersteinProblem& prob,
                                                      const SampledFunction& y, double eps,
                                                      const PicardLog& log) {
  if (!(eps > 0.0))
    throw std::invalid_argument("hammerstein_semiperiodic_property: eps must be positive");
  const double q = prob.contraction();
  if (!(q < 1.0))
    throw std::invalid_argument("hammerstein_semiperiodic_property: L |k|_1 must stay below 1");

  SemiTransportReport rep;
  rep.eps = eps;
  rep.eps_out = eps + 2.0 * log.residual / (1.0 - q);

  SampledFunction comp = y;
  comp.label = "composed(" + (y.label.empty() ? std::string("y") : y.label) + ")";
  {
    RVec pt(y.grid.dim());
    for (std::size_t flat = 0; flat < y.size(); ++flat) {
      if (!y.is_valid(flat)) continue;
      y.grid.point(flat, pt.data());
      comp.values[flat] = prob.nonlinearity(pt.data(), y.values[flat]);
    }
  }

  // Window truncation perturbs the iterate near the edge, and the Picard map
  // carries that perturbation inward, shrinking it by q per kernel radius.
  // Restrict both checks to the core where the geometric envelope
  // 2 |k|_1 sup|G| / (1 - q) * q^rings has fallen under a quarter of eps.
  SampledFunction core = y;
  {
    double mg = 0.0;
    for (std::size_t flat = 0; flat < comp.size(); ++flat)
      if (comp.is_valid(flat)) mg = std::max(mg, std::abs(comp.values[flat]));
    const double envelope = 2.0 * prob.kernel.l1_norm * mg / (1.0 - q);
    int rings = 0;
    if (q > 0.0 && envelope > 0.25 * eps)
      rings = static_cast<int>(std::ceil(std::log(0.25 * eps / envelope) / std::log(q)));
    const double cut = prob.kernel.radius * static_cast<double>(1 + rings);
    if (rings > 0) {
      const int n = y.grid.dim();
      RVec pt(n);
      std::size_t kept = 0;
      for (std::size_t flat = 0; flat < y.size(); ++flat) {
        if (!y.is_valid(flat)) continue;
        y.grid.point(flat, pt.data());
        double dist = kInf;
        for (int j = 0; j < n; ++j) {
          const double lo = y.grid.origin[j];
          const double hi = lo + y.grid.step[j] * static_cast<double>(y.grid.count[j] - 1);
          dist = std::min(dist, std::min(pt[j] - lo, hi - pt[j]));
        }
        if (dist < cut) {
          core.valid[flat] = 0;
          comp.valid[flat] = 0;
        } else {
          ++kept;
        }
      }
      if (kept == 0) {
        rep.verdict = Verdict::Indeterminate;
        rep.note = "no core survives the window-truncation discount; enlarge the window";
        return rep;
      }
      char buf[96];
      std::snprintf(buf, sizeof(buf), "; checked %d kernel radii inside the window", 1 + rings);
      rep.note = buf;
    }
  }

  const std::vector<Complex> ones(static_cast<std::size_t>(y.grid.dim()), Complex{1.0, 0.0});
  rep.composed = semi_cj_check(comp, ones, {eps});
  rep.solution = semi_cj_check(core, ones, {rep.eps_out});

  if (rep.composed.verdict == Verdict::Pass && rep.solution.verdict == Verdict::Pass)
    rep.verdict = Verdict::Pass;
  else if (rep.composed.verdict == Verdict::Fail || rep.solution.verdict == Verdict::Fail)
    rep.verdict = Verdict::Fail;
  else
    rep.verdict = Verdict::Indeterminate;
  rep.note = "composition and solution checked with every axis factor 1" + rep.note;
  return rep;
}

}  // namespace aperiodica
