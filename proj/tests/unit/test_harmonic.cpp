#include <doctest.h>

#include <cmath>
#include <complex>
#include <numbers>
#include <stdexcept>
#include <vector>

#include "aperiodica/corpus.hpp"
#include "aperiodica/harmonic.hpp"
#include "aperiodica/periodic.hpp"
#include "aperiodica/scan.hpp"

using namespace aperiodica;

namespace {

constexpr double kPi = std::numbers::pi;
const Complex kOne{1.0, 0.0};
const Complex kMinusOne{-1.0, 0.0};
const Complex kI{0.0, 1.0};

// Full-line sample on a grid whose step divides the shifts under test, so
// exact shift identities survive sampling.
SampledFunction sample_aligned(const CorpusEntry& e, double step, Index half) {
  Grid g;
  g.origin = {-step * static_cast<double>(half)};
  g.step = {step};
  g.count = {2 * half + 1};
  const Domain d = Domain::full(1, step * static_cast<double>(half) + 1.0);
  return sample_corpus(e, d, g);
}

SampledFunction trig_sample(const std::vector<std::pair<Complex, RVec>>& terms, double radius,
                            double step) {
  CorpusParams p;
  p.terms = terms;
  p.radius = radius;
  p.step = step;
  return sample_corpus(corpus_entry("trig-poly", p));
}

double tail_after(int cutoff, int top) {
  double fact = 1.0;
  for (int l = 1; l <= cutoff; ++l) fact *= static_cast<double>(l);
  double sum = 0.0;
  for (int l = cutoff + 1; l <= top; ++l) {
    fact *= static_cast<double>(l);
    sum += 1.0 / fact;
  }
  return sum;
}

SpectrumEstimate exact_spectrum(const std::vector<RVec>& lambdas) {
  SpectrumEstimate est;
  for (const auto& lam : lambdas) {
    SpectrumPeak p;
    p.lambda = lam;
    p.coefficient = {kOne};
    p.magnitude = 1.0;
    est.peaks.push_back(std::move(p));
  }
  return est;
}

} // namespace

TEST_CASE("mean of a constant is exact on every rung") {
  CorpusParams p;
  p.aux = {2.5};
  auto f = sample_corpus(corpus_entry("constant", p));

  SUBCASE("fully valid window") {
    const auto rep = mean_value(f);
    REQUIRE(rep.rungs.size() == 3);
    for (const auto& r : rep.rungs) {
      CHECK(std::abs(r.raw[0] - Complex{2.5, 0.0}) <= 1e-12);
      CHECK(std::abs(r.smoothed[0] - Complex{2.5, 0.0}) <= 1e-12);
      CHECK(r.shift_spread <= 1e-12);
    }
    CHECK(rep.magnitude() == doctest::Approx(2.5).epsilon(1e-12));
    CHECK(rep.residual <= 1e-12);
  }
  SUBCASE("dropped samples renormalize the mass") {
    for (std::size_t i = 0; i < f.valid.size(); i += 7) f.valid[i] = 0;
    const auto rep = mean_value(f);
    CHECK(std::abs(rep.value[0] - Complex{2.5, 0.0}) <= 1e-12);
  }
}

TEST_CASE("box average of a pure tone follows the window response exactly") {
  // For F = e^{i pi t} on step 1/4, an N-point box average has magnitude
  // |sin(N pi/8)| / (N sin(pi/8)); the chosen N ladder keeps N mod 16 in
  // {5, 13}, so |raw| * N = cot(pi/8) = 1 + sqrt 2 on every rung.
  const auto f = trig_sample({{kOne, {kPi}}}, 610.0, 0.25);
  MeanOptions opt;
  opt.t_ladder = {51.0, 101.0, 201.0, 401.0};
  opt.anchor_fractions.clear();
  const auto rep = mean_value(f, opt);
  REQUIRE(rep.rungs.size() == 4);
  const std::size_t n_expect[] = {205, 405, 805, 1605};
  const double cot8 = 1.0 + std::numbers::sqrt2;
  for (std::size_t i = 0; i < 4; ++i) {
    CHECK(rep.rungs[i].points == n_expect[i]);
    const double scaled =
        std::abs(rep.rungs[i].raw[0]) * static_cast<double>(rep.rungs[i].points);
    CHECK(scaled == doctest::Approx(cot8).epsilon(1e-9));
  }
  // The smoothed estimate multiplies two such responses; the oscillation
  // error drops from O(1/T) to O(1/T^2).
  CHECK(rep.magnitude() <= 1e-4);
  CHECK(rep.magnitude() < std::abs(rep.rungs.back().raw[0]));
}

TEST_CASE("squared sine averages to one half") {
  const auto f = trig_sample(
      {{Complex{0.5, 0.0}, {0.0}}, {Complex{-0.25, 0.0}, {2.0}}, {Complex{-0.25, 0.0}, {-2.0}}},
      200.0, 0.25);
  const auto rep = mean_value(f);
  CHECK(std::abs(rep.value[0] - Complex{0.5, 0.0}) <= 1e-3);
  CHECK(rep.rungs.back().shift_spread <= 0.02);
}

TEST_CASE("mean options validate the ladder and the window") {
  CorpusParams p;
  p.aux = {1.0};
  const auto f = sample_corpus(corpus_entry("constant", p));
  MeanOptions opt;
  opt.t_ladder = {500.0};
  CHECK_THROWS_AS(mean_value(f, opt), std::invalid_argument);
  opt.t_ladder = {10.0, 10.0};
  CHECK_THROWS_AS(mean_value(f, opt), std::invalid_argument);
  opt.t_ladder = {0.1};
  CHECK_THROWS_AS(mean_value(f, opt), std::invalid_argument);
  CHECK_THROWS_AS(bohr_coefficient(f, {1.0, 2.0}), std::invalid_argument);
}

TEST_CASE("coefficient extraction is exact on resonance and linear") {
  const auto f = trig_sample({{Complex{3.0, 0.0}, {1.0}}}, 160.0, 0.05);
  SUBCASE("on resonance the modulated input is constant") {
    const auto rep = bohr_coefficient(f, {1.0});
    CHECK(std::abs(rep.value[0] - Complex{3.0, 0.0}) <= 1e-9);
  }
  SUBCASE("off resonance only window leakage remains") {
    const auto rep = bohr_coefficient(f, {2.0});
    CHECK(rep.magnitude() <= 5e-3);
  }
  SUBCASE("linearity over pointwise combinations") {
    const auto g = trig_sample({{Complex{0.0, 1.5}, {std::numbers::sqrt2}}}, 160.0, 0.05);
    const Complex a{0.7, -0.2};
    const auto combo = combine(f, g, a, kOne);
    const RVec probe = {1.0};
    const auto lhs = bohr_coefficient(combo, probe);
    const auto rf = bohr_coefficient(f, probe);
    const auto rg = bohr_coefficient(g, probe);
    CHECK(std::abs(lhs.value[0] - (a * rf.value[0] + rg.value[0])) <= 1e-12);
  }
}

TEST_CASE("two dimensional coefficient on the quadrant window") {
  CorpusParams p;
  p.dim = 2;
  p.terms = {{Complex{2.0, 0.0}, {1.0, 0.0}}, {kOne, {0.0, std::numbers::sqrt2}}};
  const auto e = corpus_entry("trig-poly", p);
  const auto f = sample_corpus(e, Domain::quadrant(2, 330.0),
                               Grid::cover(Domain::quadrant(2, 330.0), {0.5, 0.5}));
  MeanOptions opt;
  opt.t_ladder = {50.0, 100.0, 200.0};
  const auto rep = bohr_coefficient(f, {0.0, std::numbers::sqrt2}, opt);
  CHECK(std::abs(rep.value[0] - kOne) <= 1e-2);
}

TEST_CASE("spectrum scan resolves the two tone pair") {
  const auto f = sample_corpus(corpus_entry("two-tone"));
  SpectrumScanOptions opt;
  opt.lambda_max = 2.0;
  opt.workers = 4;
  const auto est = bohr_spectrum_scan(f, opt);
  REQUIRE(est.peaks.size() == 4);
  // Ascending |lambda| with lexicographic ties: -1, 1, -sqrt2, sqrt2.
  const double want[] = {-1.0, 1.0, -std::numbers::sqrt2, std::numbers::sqrt2};
  const Complex coef[] = {Complex{0.0, 0.5}, Complex{0.0, -0.5}, Complex{0.0, 0.5},
                          Complex{0.0, -0.5}};
  for (std::size_t i = 0; i < 4; ++i) {
    CHECK(std::abs(est.peaks[i].lambda[0] - want[i]) <= 2e-3);
    CHECK(std::abs(est.peaks[i].coefficient[0] - coef[i]) <= 1e-2);
  }
  CHECK(est.noise_floor < 0.1);

  SUBCASE("worker count does not change the result") {
    SpectrumScanOptions serial = opt;
    serial.workers = 1;
    const auto again = bohr_spectrum_scan(f, serial);
    REQUIRE(again.peaks.size() == est.peaks.size());
    for (std::size_t i = 0; i < est.peaks.size(); ++i) {
      CHECK(again.peaks[i].lambda[0] == est.peaks[i].lambda[0]);
      CHECK(again.peaks[i].coefficient[0] == est.peaks[i].coefficient[0]);
    }
  }
}

TEST_CASE("spectrum of the zero input is empty") {
  const auto f = sample_corpus(corpus_entry("zero"));
  const auto est = bohr_spectrum_scan(f);
  CHECK(est.peaks.empty());
}

TEST_CASE("series spectrum recovers the leading reciprocal factorial lines") {
  CorpusParams p;
  p.radius = 1000.0;
  const auto f = sample_corpus(corpus_entry("hieber", p));
  SpectrumScanOptions opt;
  opt.lambda_max = 1.25;
  opt.workers = 4;
  const auto est = bohr_spectrum_scan(f, opt);
  CHECK(est.resolution < 3e-3);
  CHECK(est.peaks.size() <= 12);

  // Lines sit at 1/(2l+1) with weights 1/l!; everything found must be one
  // of them and the heavy ones must all be found. The weight-5 line leans on
  // the flank of its far heavier neighbor, so its position carries the
  // leakage bias of a magnitude-only refinement.
  double fact = 1.0;
  for (int l = 0; l <= 5; ++l) {
    if (l > 0) fact *= static_cast<double>(l);
    const double freq = 1.0 / static_cast<double>(2 * l + 1);
    const double slack = l < 5 ? 1e-3 : 4e-3;
    bool found = false;
    for (const auto& peak : est.peaks)
      if (std::abs(peak.lambda[0] - freq) <= slack) {
        found = true;
        if (l <= 2) CHECK(std::abs(peak.coefficient[0] - Complex{1.0 / fact, 0.0}) <= 1e-2);
      }
    CHECK(found);
  }
  for (const auto& peak : est.peaks) {
    double best = 1.0;
    for (int l = 0; l <= 13; ++l)
      best = std::min(best, std::abs(peak.lambda[0] - 1.0 / static_cast<double>(2 * l + 1)));
    CHECK(best <= 4e-3);
  }
}

TEST_CASE("exact shift families on aligned grids") {
  const auto f = sample_aligned(corpus_entry("sine"), kPi / 16.0, 512);
  SUBCASE("factor one finds a full period") {
    const auto rep = semi_cj_check(f, {kOne}, {1e-9});
    REQUIRE(rep.verdict == Verdict::Pass);
    const auto& w = rep.results[0].axes[0];
    CHECK(w.found);
    CHECK(w.defect <= 1e-12);
    const double turns = w.omega / (2.0 * kPi);
    CHECK(std::abs(turns - std::round(turns)) <= 1e-9);
    CHECK(std::round(turns) >= 1.0);
    CHECK(w.m_checked == 4);
  }
  SUBCASE("factor minus one finds a half period") {
    const auto rep = semi_cj_check(f, {kMinusOne}, {1e-9});
    REQUIRE(rep.verdict == Verdict::Pass);
    const auto& w = rep.results[0].axes[0];
    const double halves = w.omega / kPi;
    CHECK(w.defect <= 1e-12);
    CHECK(std::abs(halves - std::round(halves)) <= 1e-9);
    CHECK(std::fmod(std::round(halves), 2.0) == 1.0);
  }
}

TEST_CASE("series input is semi periodic with factor minus one") {
  const auto f = sample_corpus(corpus_entry("hieber"));
  SemiOptions opt;
  opt.m_max = 3;
  SUBCASE("the documented shift family passes at one half") {
    const auto rep = semi_cj_check(f, {kMinusOne}, {0.5}, opt);
    REQUIRE(rep.verdict == Verdict::Pass);
    const auto& w = rep.results[0].axes[0];
    CHECK(w.found);
    CHECK(std::abs(w.omega - 15.0 * kPi) <= 0.05);
    CHECK(w.defect <= 0.5);
    CHECK(w.defect >= 0.25);
    CHECK(w.m_checked == 3);
    CHECK(std::isfinite(sup_norm(f).sup));
    CHECK(rep.note.empty());
  }
  SUBCASE("an incompatible factor is rejected outright") {
    const auto rep = semi_cj_check(f, {kI}, {0.5}, opt);
    CHECK(rep.verdict == Verdict::Fail);
    CHECK_FALSE(rep.results[0].axes[0].found);
  }
  SUBCASE("long shifts recur across coarse bands") {
    RecurrenceOptions ropt;
    ropt.bands = 2;
    const auto rec = uniform_recurrence_check(f, kOne, 0.5, ropt);
    CHECK(rec.verdict == Verdict::Pass);
  }
}

TEST_CASE("incommensurable pair admits no unimodular shift family") {
  const auto f = sample_corpus(corpus_entry("two-tone"));
  SemiOptions opt;
  opt.m_max = 4;
  const auto rep = semi_cj_check(f, {kOne}, {0.30}, opt);
  CHECK(rep.verdict == Verdict::Fail);
  CHECK_FALSE(rep.results[0].axes[0].found);
}

TEST_CASE("modulus away from one forces an exact growth period") {
  SUBCASE("doubling input carries its exact law") {
    const auto f = sample_corpus(corpus_entry("exp2"));
    const auto rep = semi_cj_check(f, {Complex{2.0, 0.0}}, {0.1});
    REQUIRE(rep.verdict == Verdict::Pass);
    CHECK(rep.rigidity[0].pass);
    CHECK(rep.results[0].axes[0].omega == doctest::Approx(1.0).epsilon(1e-9));
  }
  SUBCASE("a bounded oscillation has no growth period") {
    const auto f = sample_corpus(corpus_entry("sine"));
    const auto rep = semi_cj_check(f, {Complex{2.0, 0.0}}, {0.1});
    CHECK(rep.verdict == Verdict::Fail);
    CHECK_FALSE(rep.rigidity[0].pass);
    CHECK(rep.note.find("real-valued") != std::string::npos);
  }
  SUBCASE("nonnegative input warns about any other factor") {
    const auto f = sample_corpus(corpus_entry("decay-inv"));
    const auto rep = semi_cj_check(f, {kMinusOne}, {0.003});
    CHECK(rep.note.find("nonnegative") != std::string::npos);
    CHECK(rep.verdict == Verdict::Fail);
  }
}

TEST_CASE("two dimensional split factors find their axis shifts") {
  CorpusParams p;
  p.dim = 2;
  p.cs = {kI, kMinusOne};
  p.radius = 26.0;
  p.step = kPi / 16.0;
  const auto f = sample_corpus(corpus_entry("cexp-product", p));
  SemiOptions opt;
  opt.m_max = 3;
  const auto rep = semi_cj_check(f, {kI, kMinusOne}, {1e-6}, opt);
  REQUIRE(rep.verdict == Verdict::Pass);
  const auto& axes = rep.results[0].axes;
  CHECK(axes[0].omega == doctest::Approx(2.0 * kPi).epsilon(1e-9));
  CHECK(axes[1].omega == doctest::Approx(2.0 * kPi).epsilon(1e-9));
  CHECK(axes[0].defect <= 1e-9);
  CHECK(axes[1].defect <= 1e-9);
  CHECK(axes[0].m_checked == 3);
}

TEST_CASE("semi input validation") {
  const auto f = sample_corpus(corpus_entry("sine"));
  CHECK_THROWS_AS(semi_cj_check(f, {kOne, kOne}, {0.1}), std::invalid_argument);
  CHECK_THROWS_AS(semi_cj_check(f, {kOne}, {}), std::invalid_argument);
  CHECK_THROWS_AS(semi_cj_check(f, {kOne}, {-0.5}), std::invalid_argument);
  CHECK_THROWS_AS(semi_cj_check(f, {Complex{0.0, 0.0}}, {0.1}), std::invalid_argument);
}

TEST_CASE("geometric ladder construction shrinks the gap each rung") {
  const std::vector<std::pair<Complex, RVec>> terms = {
      {kOne, {1.0}},
      {Complex{0.5, 0.0}, {1.0 / 3.0}},
      {Complex{0.25, 0.0}, {1.0 / 9.0}},
      {Complex{0.125, 0.0}, {1.0 / 27.0}}};
  CorpusParams p;
  p.terms = terms;
  const auto f = sample_aligned(corpus_entry("trig-poly", p), kPi / 32.0, 1024);
  SemiOptions opt;
  opt.eps_ladder = {1.8, 0.8, 0.25, 1e-9};
  const auto rep = semi_periodic_approximation(f, {kMinusOne}, 4, opt);
  REQUIRE(rep.verdict == Verdict::Pass);
  REQUIRE(rep.steps.size() == 4);
  const double want_omega[] = {kPi, 3.0 * kPi, 9.0 * kPi, 27.0 * kPi};
  const double want_gap[] = {1.191891609, 0.678015650, 0.216506351, 0.0};
  for (std::size_t i = 0; i < 4; ++i) {
    CHECK(rep.steps[i].omega[0] == doctest::Approx(want_omega[i]).epsilon(1e-12));
    if (i < 3)
      CHECK(rep.steps[i].gap == doctest::Approx(want_gap[i]).epsilon(1e-6));
    else
      CHECK(rep.steps[i].gap <= 1e-9);
    if (i > 0) CHECK(rep.steps[i].gap < rep.steps[i - 1].gap);
  }
  // Each approximant carries its shift law exactly by construction.
  REQUIRE(rep.approximants.size() == 4);
  for (std::size_t i = 0; i < 4; ++i) {
    const auto pr = check_periodic(rep.approximants[i], {{want_omega[i]}, kMinusOne}, 1e-9);
    CHECK(pr.pass);
    CHECK(pr.defect <= 1e-12);
  }
}

TEST_CASE("construction declines when no shift family exists") {
  const auto f = sample_corpus(corpus_entry("sin-log"));
  const auto rep = semi_periodic_approximation(f, {kOne}, 2);
  CHECK(rep.verdict == Verdict::Fail);
  CHECK(rep.steps.empty());
  CHECK(rep.note.find("no admissible shift") != std::string::npos);
}

TEST_CASE("construction on an exactly periodic input reproduces it") {
  const auto f = sample_corpus(corpus_entry("unit-rotation"));
  SemiOptions opt;
  opt.eps_ladder = {1e-9};
  const auto rep = semi_periodic_approximation(f, {kOne}, 1, opt);
  REQUIRE(rep.verdict == Verdict::Pass);
  CHECK(rep.steps[0].omega[0] == doctest::Approx(16.0).epsilon(1e-12));
  CHECK(rep.steps[0].gap <= 1e-12);
}

TEST_CASE("construction input validation") {
  const auto f = sample_corpus(corpus_entry("unit-rotation"));
  CHECK_THROWS_AS(semi_periodic_approximation(f, {kOne}, 0), std::invalid_argument);
  SemiOptions opt;
  opt.eps_ladder = {0.5};
  CHECK_THROWS_AS(semi_periodic_approximation(f, {kOne}, 2, opt), std::invalid_argument);
}

TEST_CASE("partial sums certify against the full series") {
  CorpusParams base;
  base.step = 0.025;
  const auto f = sample_corpus(corpus_entry("hieber", base));
  std::vector<SampledFunction> approx;
  for (int cutoff = 1; cutoff <= 4; ++cutoff) {
    CorpusParams p;
    p.step = 0.025;
    p.cutoff = cutoff;
    approx.push_back(sample_corpus(corpus_entry("hieber", p)));
  }
  const auto rep = certify_from_approximants(f, approx, {kMinusOne});
  REQUIRE(rep.steps.size() == 4);
  // Gaps are the dropped positive series weights, attained at the origin.
  for (std::size_t i = 0; i < 4; ++i) {
    const double tail = tail_after(static_cast<int>(i) + 1, 13);
    CHECK(rep.steps[i].gap == doctest::Approx(tail).epsilon(1e-9));
    CHECK(rep.steps[i].eps == doctest::Approx(3.0 * tail).epsilon(1e-12));
  }
  // The first two shift families fit inside the window; the later periods
  // are too long, so those rungs lean on the gap decrease alone.
  CHECK(rep.steps[0].certified);
  CHECK(rep.steps[1].certified);
  CHECK_FALSE(rep.steps[2].certified);
  CHECK_FALSE(rep.steps[3].certified);
  CHECK(std::abs(rep.steps[0].omega[0] - 3.0 * kPi) <= 0.05);
  CHECK(std::abs(rep.steps[1].omega[0] - 15.0 * kPi) <= 0.05);
  CHECK(rep.verdict == Verdict::Pass);
  CHECK(rep.note.find("certified only by gap decrease") != std::string::npos);
}

TEST_CASE("an identical approximant certifies with zero gap") {
  const auto f = sample_corpus(corpus_entry("unit-rotation"));
  const std::vector<SampledFunction> approx = {f};
  const auto rep = certify_from_approximants(f, approx, {kOne});
  REQUIRE(rep.verdict == Verdict::Pass);
  CHECK(rep.steps[0].gap == 0.0);
  CHECK(rep.steps[0].certified);
  // Every multiple of the full period ties at machine noise; any may win.
  const double turns = rep.steps[0].omega[0] / 16.0;
  CHECK(std::abs(turns - std::round(turns)) <= 1e-9);
  CHECK(std::round(turns) >= 1.0);
  CHECK(rep.note.empty());
}

TEST_CASE("certification input validation") {
  const auto f = sample_corpus(corpus_entry("unit-rotation"));
  CHECK_THROWS_AS(certify_from_approximants(f, {}, {kOne}), std::invalid_argument);
  CorpusParams p;
  p.radius = 60.0;
  const std::vector<SampledFunction> wrong = {
      sample_corpus(corpus_entry("unit-rotation", p))};
  CHECK_THROWS_AS(certify_from_approximants(f, wrong, {kOne}), std::invalid_argument);
}

TEST_CASE("commensurability over a capped denominator scan") {
  SUBCASE("integer spectrum passes with the fundamental frequency") {
    const auto est = exact_spectrum({{1.0}, {2.0}, {3.0}});
    const auto rep = commensurability_test(est, 1e-6);
    CHECK(rep.verdict == Verdict::Pass);
    CHECK(rep.axes[0].pass);
    CHECK(rep.axes[0].denominator == 1);
    CHECK(rep.axes[0].omega == doctest::Approx(2.0 * kPi).epsilon(1e-12));
  }
  SUBCASE("reciprocal odd lines need the odd common multiple") {
    std::vector<RVec> lam;
    for (int l = 0; l <= 6; ++l) lam.push_back({1.0 / static_cast<double>(2 * l + 1)});
    const auto rep = commensurability_test(exact_spectrum(lam), 1e-6);
    REQUIRE(rep.verdict == Verdict::Pass);
    CHECK(rep.axes[0].denominator == 3465);
    CHECK(rep.axes[0].omega == doctest::Approx(2.0 * kPi * 45045.0).epsilon(1e-9));
  }
  SUBCASE("sqrt two against one fails decisively") {
    const auto est = exact_spectrum({{1.0}, {std::numbers::sqrt2}});
    const auto rep = commensurability_test(est, 1e-6);
    CHECK(rep.verdict == Verdict::Fail);
    CHECK_FALSE(rep.axes[0].pass);
    // Best rational approach inside the cap is q = 5741.
    CHECK(rep.axes[0].best_in_cap == doctest::Approx(3.8694e-4).epsilon(1e-3));
  }
  SUBCASE("near-threshold misses stay open") {
    const auto est = exact_spectrum({{1.0}, {std::numbers::sqrt2}});
    const auto rep = commensurability_test(est, 1e-4);
    CHECK(rep.verdict == Verdict::Indeterminate);
    CHECK(rep.note.find("denominator cap") != std::string::npos);
  }
  SUBCASE("axes are handled independently") {
    const auto est = exact_spectrum({{1.0, 1.0 / 3.0}, {2.0, 1.0 / 5.0}});
    const auto rep = commensurability_test(est, 1e-6);
    REQUIRE(rep.verdict == Verdict::Pass);
    CHECK(rep.axes[0].denominator == 1);
    CHECK(rep.axes[1].denominator == 3);
    CHECK(rep.axes[1].omega == doctest::Approx(30.0 * kPi).epsilon(1e-9));
  }
  SUBCASE("an all-zero axis passes trivially") {
    const auto est = exact_spectrum({{0.0, 1.5}});
    const auto rep = commensurability_test(est, 1e-6);
    CHECK(rep.axes[0].pass);
    CHECK(rep.axes[1].pass);
  }
  SUBCASE("input validation") {
    CHECK_THROWS_AS(commensurability_test(SpectrumEstimate{}, 1e-6), std::invalid_argument);
    const auto est = exact_spectrum({{1.0}});
    CHECK_THROWS_AS(commensurability_test(est, 0.0), std::invalid_argument);
  }
}
