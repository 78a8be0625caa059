#include "aperiodica/corpus.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>

namespace aperiodica {

namespace {

constexpr double kPi = std::numbers::pi;

double factorial(int n) {
  double f = 1.0;
  for (int k = 2; k <= n; ++k) f *= static_cast<double>(k);
  return f;
}

double point_abs(const double* t, int n) {
  double acc = 0.0;
  for (int j = 0; j < n; ++j) acc += t[j] * t[j];
  return std::sqrt(acc);
}

// Principal-branch power c^(t/denominator).
Complex cpow_linear(Complex c, double t, double denominator) {
  return std::exp(std::log(c) * (t / denominator));
}

PointFn trig_poly_fn(std::vector<std::pair<Complex, RVec>> terms, int n) {
  return [terms = std::move(terms), n](const double* t, Complex* out) {
    Complex acc{0.0, 0.0};
    for (const auto& [coef, freq] : terms) {
      double phase = 0.0;
      for (int j = 0; j < n; ++j) phase += freq[j] * t[j];
      acc += coef * Complex{std::cos(phase), std::sin(phase)};
    }
    out[0] = acc;
  };
}

// Multi-index series sum_{|l| <= L} prod_j e^{i t_j/(2 l_j q_j + 1)} / l_j!
// expanded into trig-polynomial terms.
std::vector<std::pair<Complex, RVec>> series_terms(int n, const std::vector<int>& qs, int L) {
  std::vector<std::pair<Complex, RVec>> terms;
  std::vector<int> l(n, 0);
  for (;;) {
    int total = 0;
    for (int v : l) total += v;
    if (total <= L) {
      double coef = 1.0;
      RVec freq(n);
      for (int j = 0; j < n; ++j) {
        coef /= factorial(l[j]);
        freq[j] = 1.0 / static_cast<double>(2 * l[j] * qs[j] + 1);
      }
      terms.emplace_back(Complex{coef, 0.0}, std::move(freq));
    }
    int ax = n - 1;
    while (ax >= 0) {
      if (l[ax] < L) {
        ++l[ax];
        break;
      }
      l[ax] = 0;
      --ax;
    }
    if (ax < 0) break;
  }
  return terms;
}

} // namespace

CorpusEntry corpus_entry(const std::string& id, const CorpusParams& params) {
  CorpusEntry e;
  e.id = id;
  const int dim = params.dim;

  const auto finish = [&](double def_radius, double def_step) {
    const double R = params.radius > 0.0 ? params.radius : def_radius;
    const double h = params.step > 0.0 ? params.step : def_step;
    if (e.default_domain.dim() == 0) e.default_domain = Domain::full(e.input_dim, R);
    e.default_domain.radius = R;
    e.default_step.assign(e.input_dim, h);
  };

  if (id == "zero" || id == "constant") {
    e.input_dim = dim > 0 ? dim : 1;
    const Complex v = id == "zero" ? Complex{0.0, 0.0}
                                   : (params.aux.empty() ? Complex{1.0, 0.0}
                                                         : Complex{params.aux[0], 0.0});
    e.eval = [v](const double*, Complex* out) { out[0] = v; };
    finish(50.0, 0.25);
  } else if (id == "sine") {
    e.input_dim = 1;
    e.eval = [](const double* t, Complex* out) { out[0] = std::sin(t[0]); };
    e.trig_terms = {{Complex{0.0, -0.5}, {1.0}}, {Complex{0.0, 0.5}, {-1.0}}};
    e.expected["periodic"] = "omega = 2 pi (snapped), c = 1; omega = pi, c = -1";
    finish(120.0, 0.05);
  } else if (id == "unit-rotation") {
    // e^{i pi t / 8}: exactly 16-periodic, 8-anti-periodic, (4, i)-periodic,
    // all grid aligned for steps dividing 4.
    e.input_dim = 1;
    e.eval = [](const double* t, Complex* out) {
      const double ph = kPi * t[0] / 8.0;
      out[0] = Complex{std::cos(ph), std::sin(ph)};
    };
    e.trig_terms = {{Complex{1.0, 0.0}, {kPi / 8.0}}};
    e.expected["periodic"] = "omega = 16 c = 1; omega = 8 c = -1; omega = 4 c = i";
    finish(120.0, 0.25);
  } else if (id == "two-tone") {
    e.input_dim = 1;
    e.eval = [](const double* t, Complex* out) {
      out[0] = std::sin(t[0]) + std::sin(std::numbers::sqrt2 * t[0]);
    };
    const double s2 = std::numbers::sqrt2;
    e.trig_terms = {{Complex{0.0, -0.5}, {1.0}},
                    {Complex{0.0, 0.5}, {-1.0}},
                    {Complex{0.0, -0.5}, {s2}},
                    {Complex{0.0, 0.5}, {-s2}}};
    e.expected["almost-periodic"] = "incommensurable spectrum {1, sqrt 2}; no semi-period";
    finish(160.0, 0.05);
  } else if (id == "sin-log") {
    e.input_dim = dim > 0 ? dim : 1;
    const int n = e.input_dim;
    e.eval = [n](const double* t, Complex* out) {
      out[0] = std::sin(std::log(1.0 + point_abs(t, n)));
    };
    e.expected["quasi-asymptotic"] = "pass with c = 1 (any shift works in the tail); fail c = -1";
    e.expected["uniform-recurrence"] = "fail: defects near the origin never vanish";
    finish(200.0, 0.25);
  } else if (id == "exp2" || id == "exp-half") {
    // 2^{+-t}: exactly (1, 2)- resp. (1, 1/2)-periodic with grid-aligned shift.
    e.input_dim = 1;
    const double sign = id == "exp2" ? 1.0 : -1.0;
    e.eval = [sign](const double* t, Complex* out) {
      out[0] = Complex{std::exp2(sign * t[0]), 0.0};
    };
    e.default_domain = Domain::quadrant(1, 20.0);
    e.expected["periodic"] = id == "exp2" ? "omega = 1, c = 2" : "omega = 1, c = 1/2";
    finish(20.0, 0.25);
  } else if (id == "cexp-product") {
    // prod_j c_j^{t_j/(2 pi)} sin(t_j): exactly (2 pi, c_j)-periodic per axis.
    e.input_dim = dim > 0 ? dim : 2;
    const int n = e.input_dim;
    std::vector<Complex> cs = params.cs;
    if (cs.empty()) cs.assign(n, Complex{0.0, 1.0});
    if (static_cast<int>(cs.size()) != n)
      throw std::invalid_argument("cexp-product: need one factor per axis");
    for (const Complex& c : cs)
      if (std::abs(std::abs(c) - 1.0) > 1e-12)
        throw std::invalid_argument("cexp-product: factors must have unit modulus");
    e.eval = [cs, n](const double* t, Complex* out) {
      Complex acc{1.0, 0.0};
      for (int j = 0; j < n; ++j) acc *= cpow_linear(cs[j], t[j], 2.0 * kPi) * std::sin(t[j]);
      out[0] = acc;
    };
    e.default_domain = Domain::quadrant(e.input_dim, 40.0);
    e.expected["periodic-axiswise"] = "omega_j = 2 pi, c_j as configured, defect 0 up to snapping";
    finish(40.0, 0.25);
  } else if (id == "c0-seq") {
    // Coordinates f_k(t) = 4 k^2 t^2 / (t^2 + k^2)^2, k = 1..K, sup norm.
    e.input_dim = 1;
    const int K = params.cutoff >= 0 ? params.cutoff : 128;
    if (K < 1) throw std::invalid_argument("c0-seq: cutoff must be >= 1");
    e.width = K;
    e.norm_kind = ValueNorm::Sup;
    e.eval = [K](const double* t, Complex* out) {
      const double x = t[0];
      for (int k = 1; k <= K; ++k) {
        const double kk = static_cast<double>(k);
        const double d = x * x + kk * kk;
        out[k - 1] = Complex{4.0 * kk * kk * x * x / (d * d), 0.0};
      }
    };
    e.default_domain = Domain::quadrant(1, 20.0);
    finish(20.0, 0.1);
    const double R = e.default_domain.radius;
    const double k1 = static_cast<double>(K + 1);
    const double den = k1 * k1 + R * R;
    e.truncation.cutoff = K;
    e.truncation.delta = 4.0 * k1 * k1 * R * R / (den * den) * (1.0 + 1e-9);
    e.truncation.note = "sup over the window of the first dropped coordinate";
    e.expected["s-asymptotic"] = "pass for every omega > 0 with c = 1";
  } else if (id == "product-sasymp") {
    // cexp-product on the leading axes times the c0 sequence on the last one.
    const int n = dim > 0 ? dim : 2; // total axes, last one carries the sequence
    if (n < 2) throw std::invalid_argument("product-sasymp: needs at least 2 axes");
    e.input_dim = n;
    const int K = params.cutoff >= 0 ? params.cutoff : 300;
    std::vector<Complex> cs = params.cs;
    if (cs.empty()) cs.assign(n - 1, Complex{0.0, 1.0});
    if (static_cast<int>(cs.size()) != n - 1)
      throw std::invalid_argument("product-sasymp: need n-1 unit factors");
    e.width = K;
    e.norm_kind = ValueNorm::Sup;
    e.eval = [cs, n, K](const double* t, Complex* out) {
      Complex head{1.0, 0.0};
      for (int j = 0; j < n - 1; ++j)
        head *= cpow_linear(cs[j], t[j], 2.0 * kPi) * std::sin(t[j]);
      const double x = t[n - 1];
      for (int k = 1; k <= K; ++k) {
        const double kk = static_cast<double>(k);
        const double d = x * x + kk * kk;
        out[k - 1] = head * (4.0 * kk * kk * x * x / (d * d));
      }
    };
    e.default_domain = Domain::quadrant(n, 30.0);
    finish(30.0, 0.5);
    const double R = e.default_domain.radius;
    const double k1 = static_cast<double>(K + 1);
    const double den = k1 * k1 + R * R;
    e.truncation.cutoff = K;
    e.truncation.delta = 4.0 * k1 * k1 * R * R / (den * den) * (1.0 + 1e-9);
    e.truncation.note = "bounded head times the first dropped sequence coordinate";
    e.expected["s-asymptotic-axiswise"] =
        "axes 1..n-1: omega = 2 pi, c_j, any tail set; axis n: any omega, c = 1, "
        "tail set = compact box times the half line";
  } else if (id == "hieber") {
    const int n = dim > 0 ? dim : 1;
    e.input_dim = n;
    std::vector<int> qs = params.qs;
    if (qs.empty()) qs.assign(n, 1);
    if (static_cast<int>(qs.size()) != n)
      throw std::invalid_argument("hieber: need one odd q per axis");
    for (int q : qs)
      if (q < 1 || q % 2 == 0) throw std::invalid_argument("hieber: q must be odd and positive");
    const int L = params.cutoff >= 0 ? params.cutoff : 13;
    e.trig_terms = series_terms(n, qs, L);
    e.eval = trig_poly_fn(e.trig_terms, n);
    double kept = 0.0;
    for (const auto& [coef, freq] : e.trig_terms) kept += coef.real();
    e.truncation.cutoff = L;
    e.truncation.delta = std::pow(std::exp(1.0), n) - kept; // dropped positive coefficients
    e.truncation.note = "sum of dropped reciprocal-factorial coefficients";
    e.expected["semi-periodic"] = "c_j = -1 with omega_j = pi * lcm of the kept odd denominators";
    finish(200.0, 0.05);
  } else if (id == "trig-poly") {
    const int n = dim > 0 ? dim : 1;
    e.input_dim = n;
    if (params.terms.empty()) throw std::invalid_argument("trig-poly: no terms given");
    for (const auto& [coef, freq] : params.terms) {
      (void)coef;
      if (static_cast<int>(freq.size()) != n)
        throw std::invalid_argument("trig-poly: frequency dimension mismatch");
    }
    e.trig_terms = params.terms;
    e.eval = trig_poly_fn(e.trig_terms, n);
    finish(160.0, 0.05);
  } else if (id == "decay-inv") {
    e.input_dim = dim > 0 ? dim : 1;
    const int n = e.input_dim;
    e.eval = [n](const double* t, Complex* out) {
      out[0] = Complex{1.0 / (1.0 + point_abs(t, n)), 0.0};
    };
    e.expected["vanishing"] = "sup over |t| >= T is 1/(1+T)";
    finish(100.0, 0.25);
  } else if (id == "decay-exp") {
    e.input_dim = dim > 0 ? dim : 1;
    const int n = e.input_dim;
    e.eval = [n](const double* t, Complex* out) {
      out[0] = Complex{std::exp(-point_abs(t, n)), 0.0};
    };
    finish(40.0, 0.25);
  } else if (id == "linear") {
    e.input_dim = dim > 0 ? dim : 1;
    e.eval = [](const double* t, Complex* out) { out[0] = Complex{t[0], 0.0}; };
    finish(50.0, 0.25);
  } else if (id == "indicator-quadrant") {
    e.input_dim = dim > 0 ? dim : 2;
    const int n = e.input_dim;
    e.eval = [n](const double* t, Complex* out) {
      for (int j = 0; j < n; ++j)
        if (t[j] < 0.0) {
          out[0] = Complex{0.0, 0.0};
          return;
        }
      out[0] = Complex{1.0, 0.0};
    };
    e.expected["scale-ladder"] = "threshold at sigma = (n-1)/p for the power-law weight";
    finish(256.0, 1.0);
  } else if (id == "indicator-box") {
    e.input_dim = dim > 0 ? dim : 1;
    const int n = e.input_dim;
    const double a = params.aux.size() > 0 ? params.aux[0] : 0.0;
    const double b = params.aux.size() > 1 ? params.aux[1] : 4.0;
    if (!(b > a)) throw std::invalid_argument("indicator-box: need aux = {a, b} with a < b");
    e.eval = [n, a, b](const double* t, Complex* out) {
      for (int j = 0; j < n; ++j)
        if (t[j] < a || t[j] > b) {
          out[0] = Complex{0.0, 0.0};
          return;
        }
      out[0] = Complex{1.0, 0.0};
    };
    e.expected["scale-ladder"] = "values <= 4 l^{-sigma} (1+|c|) measure(box), vanish as l grows";
    finish(64.0, 0.25);
  } else if (id == "pair-difference") {
    // g(t_2) - g(t_1) with g = sin; kept as a flagged example only, no
    // classification is asserted for it by the verify suites.
    e.input_dim = 2;
    e.eval = [](const double* t, Complex* out) {
      out[0] = Complex{std::sin(t[1]) - std::sin(t[0]), 0.0};
    };
    e.expected["note"] = "diagonal-shift scale ladder example; documented, not asserted";
    finish(80.0, 0.25);
  } else {
    throw std::invalid_argument("unknown corpus id: " + id);
  }

  if (e.default_domain.dim() != e.input_dim)
    e.default_domain = Domain::full(e.input_dim, e.default_domain.radius);
  return e;
}

std::vector<std::string> corpus_ids() {
  return {"zero",        "constant",   "sine",          "unit-rotation", "two-tone",
          "sin-log",     "exp2",       "exp-half",      "cexp-product",  "c0-seq",
          "product-sasymp", "hieber",  "trig-poly",     "decay-inv",     "decay-exp",
          "linear",      "indicator-quadrant", "indicator-box", "pair-difference"};
}

SampledFunction sample_corpus(const CorpusEntry& e) {
  const Grid g = Grid::cover(e.default_domain, e.default_step);
  return sample_corpus(e, e.default_domain, g);
}

SampledFunction sample_corpus(const CorpusEntry& e, const Domain& d, const Grid& g) {
  return sample(e.eval, d, g, e.width, e.norm_kind, e.id);
}

SampledFunction combine(const SampledFunction& f, const SampledFunction& g, Complex a, Complex b) {
  if (f.size() != g.size() || f.width != g.width)
    throw std::invalid_argument("combine: incompatible samples");
  SampledFunction out = f;
  out.label = f.label + "+" + g.label;
  for (std::size_t i = 0; i < out.values.size(); ++i)
    out.values[i] = a * f.values[i] + b * g.values[i];
  for (std::size_t i = 0; i < out.valid.size(); ++i) out.valid[i] = f.valid[i] & g.valid[i];
  return out;
}

SampledFunction scale(const SampledFunction& f, Complex a) {
  SampledFunction out = f;
  for (auto& v : out.values) v *= a;
  return out;
}

} // namespace aperiodica
