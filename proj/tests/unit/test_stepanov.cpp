#include <doctest.h>

#include <cmath>
#include <numbers>

#include "aperiodica/corpus.hpp"
#include "aperiodica/scan.hpp"
#include "aperiodica/stepanov.hpp"

using namespace aperiodica;

namespace {
constexpr double kPi = std::numbers::pi;
const Complex kOne{1.0, 0.0};
const Complex kI{0.0, 1.0};

SampledFunction load(const std::string& id, int dim, double radius, double step) {
  CorpusParams p;
  p.dim = dim;
  p.radius = radius;
  p.step = step;
  return sample_corpus(corpus_entry(id, p));
}

// Unit-cell exponent fields on a step-h base mesh.
ExponentField unit_cell_const(double h, int dim, double value) {
  std::size_t pts = 1;
  const auto per_axis = static_cast<std::size_t>(std::llround(1.0 / h)) + 1;
  for (int j = 0; j < dim; ++j) pts *= per_axis;
  return ExponentField::constant(pts, value);
}

ExponentField unit_cell_ramp(double h, double at_zero) {
  const auto pts = static_cast<std::size_t>(std::llround(1.0 / h)) + 1;
  ExponentField p;
  p.p.resize(pts);
  for (std::size_t i = 0; i < pts; ++i) p.p[i] = at_zero + h * static_cast<double>(i);
  return p;
}
} // namespace

TEST_CASE("scalar map catalog vanishes at zero and honors its factor bound") {
  const ScalarMap maps[] = {identity_map(), power_map(2.0), power_map(0.5), log_taper_map()};
  for (const ScalarMap& m : maps) {
    CHECK(m(0.0) == 0.0);
    CHECK(factor_bound_gap(m) <= 1e-12);
  }
  CHECK_THROWS_AS((void)power_map(0.0), std::invalid_argument);

  CHECK(subadditivity_constant(identity_map(), 3) == doctest::Approx(1.0).epsilon(1e-14));
  // Equal tuples hit the extremal ray of x^2: phi(2x) = 4 phi(x).
  CHECK(subadditivity_constant(power_map(2.0), 2) == doctest::Approx(2.0).epsilon(1e-12));
  // Concave with phi(0) = 0 is genuinely subadditive; the constant floors at 1.
  CHECK(subadditivity_constant(log_taper_map(), 2) == 1.0);
  CHECK_THROWS_AS((void)subadditivity_constant(identity_map(), 0), std::invalid_argument);
}

TEST_CASE("closed cell meshes mirror exactly and resample the exponent") {
  Grid g;
  g.origin = {-4.0};
  g.step = {0.25};
  g.count = {33};

  const CellMesh m = make_cell_mesh(g, {}, 2.0, {});
  CHECK(m.lo[0] == 0);
  CHECK(m.hi[0] == 8);
  CHECK(m.points == 9);
  CHECK(m.point_volume == 0.25);

  CellWindow neg;
  neg.lo = {-1.0};
  neg.hi = {0.0};
  const CellMesh mn = make_cell_mesh(g, neg, 2.0, {});
  CHECK(mn.lo[0] == -m.hi[0]);
  CHECK(mn.hi[0] == -m.lo[0]);

  // A cell thinner than the grid step has no interior mesh.
  CellWindow thin;
  thin.lo = {0.0};
  thin.hi = {0.1};
  CHECK_THROWS_AS((void)make_cell_mesh(g, thin, 1.0, {}), std::invalid_argument);

  const ExponentField ramp = unit_cell_ramp(0.25, 1.5);
  const CellMesh base = make_cell_mesh(g, {}, 1.0, ramp);
  REQUIRE(base.p.size() == 5);
  for (std::size_t i = 0; i < 5; ++i) CHECK(base.p[i] == ramp.p[i]);
  const CellMesh twice = make_cell_mesh(g, {}, 2.0, ramp);
  REQUIRE(twice.p.size() == 9);
  CHECK(twice.p.front() == ramp.p.front());
  CHECK(twice.p.back() == ramp.p.back());
  CHECK(twice.p[4] == ramp.p[2]); // midpoint keeps the midpoint exponent

  ExponentField wrong = ExponentField::constant(7, 2.0);
  CHECK_THROWS_AS((void)make_cell_mesh(g, {}, 1.0, wrong), std::invalid_argument);
}

TEST_CASE("cell handles evaluate shifted windows of the sample") {
  const auto f = load("sine", 0, 8.0, 0.01);
  const BochnerTransform b(f);

  // Pointwise reads follow the mesh offsets.
  const auto h0 = b.at({0.5});
  CHECK(b.eval(h0, 0).real() == doctest::Approx(std::sin(0.5)).epsilon(1e-12));
  CHECK(b.eval(h0, 100).real() == doctest::Approx(std::sin(1.5)).epsilon(1e-12));

  const double closed = 2.0 * (std::cos(0.5) - std::cos(1.5));
  const double d = b.distance(h0, b.at({0.5 + kPi}));
  CHECK(d == doctest::Approx(1.627612795932828).epsilon(1e-8));
  CHECK(std::abs(d - closed) < 2.5 * 0.01);

  const auto fine = load("sine", 0, 8.0, 0.002);
  const BochnerTransform bf(fine);
  const double df = bf.distance(bf.at({0.5}), bf.at({0.5 + kPi}));
  CHECK(df == doctest::Approx(1.616855376484275).epsilon(1e-8));
  CHECK(std::abs(df - closed) < 5e-3);

  // One full period apart the cells agree up to snapping.
  CHECK(b.distance(h0, b.at({0.5 + 2.0 * kPi})) < 4e-3);

  const auto c = load("constant", 0, 8.0, 0.01);
  const BochnerTransform bc(c);
  CHECK(bc.distance(bc.at({-3.0}), bc.at({2.0})) == 0.0);

  CHECK_THROWS_AS((void)b.at({7.9}), std::invalid_argument);

  // Cells covering invalidated samples are rejected.
  const auto g = shift_sample(f, RVec{5.0});
  const BochnerTransform bg(g);
  CHECK_THROWS_AS((void)bg.at({2.8}), std::invalid_argument);
}

TEST_CASE("cell distance reproduces the frozen classical values") {
  const auto f = load("sine", 0, 40.0, 0.125);

  StepanovConfig cfg;
  cfg.p = unit_cell_const(0.125, 1, 2.0);
  const auto d2 = stepanov_qa_distance(f, cfg, {1.0}, 0.05, 10.0);
  CHECK(d2.value == doctest::Approx(0.965899840273310).epsilon(1e-8));
  CHECK(d2.points > 0);
  CHECK_FALSE(d2.both_ends); // the whole window is shift invariant

  StepanovConfig vcfg;
  vcfg.p = unit_cell_ramp(0.125, 1.0);
  const auto dv = stepanov_qa_distance(f, vcfg, {1.0}, 0.05, 10.0);
  CHECK(dv.value == doctest::Approx(0.986752366987640).epsilon(1e-8));

  const auto slog = load("sin-log", 0, 0.0, 0.0);
  StepanovConfig scfg;
  scfg.p = unit_cell_const(0.25, 1, 2.0);
  const auto ds = stepanov_qa_distance(slog, scfg, {5.0}, 0.05, 50.0);
  CHECK(ds.value == doctest::Approx(0.086976671099283).epsilon(1e-8));

  // Exact periodicity closes the cell distance at any admissible variant.
  const auto rot = load("unit-rotation", 0, 0.0, 0.0);
  StepanovConfig rcfg;
  rcfg.p = unit_cell_const(0.25, 1, 2.0);
  CHECK(stepanov_qa_distance(rot, rcfg, {16.0}, 0.05, 0.0).value < 1e-12);
}

TEST_CASE("squared taper turns the type-two composition into the squared norm") {
  const auto f = load("sine", 0, 40.0, 0.125);
  StepanovConfig plain;
  plain.p = unit_cell_const(0.125, 1, 2.0);
  const double base = stepanov_qa_distance(f, plain, {1.0}, 0.05, 10.0).value;

  StepanovConfig after = plain;
  after.placement = PhiPlacement::AfterNorm;
  after.weights.phi = power_map(2.0);
  StepanovConfig around = plain;
  around.placement = PhiPlacement::AroundWeighted;
  around.weights.phi = power_map(2.0);

  const double t1 = stepanov_qa_distance(f, after, {1.0}, 0.05, 10.0).value;
  const double t2 = stepanov_qa_distance(f, around, {1.0}, 0.05, 10.0).value;
  CHECK(t1 == doctest::Approx(base * base).epsilon(1e-12));
  CHECK(t2 == doctest::Approx(t1).epsilon(1e-12));
}

TEST_CASE("placement variants coincide for the identity map") {
  const auto f = load("sine", 0, 40.0, 0.125);
  StepanovConfig cfg;
  cfg.p = unit_cell_const(0.125, 1, 2.0);

  double got[3];
  const PhiPlacement kinds[] = {PhiPlacement::InsideNorm, PhiPlacement::AfterNorm,
                                PhiPlacement::AroundWeighted};
  for (int i = 0; i < 3; ++i) {
    StepanovConfig c = cfg;
    c.placement = kinds[i];
    got[i] = stepanov_qa_distance(f, c, {1.0}, 0.05, 10.0).value;
  }
  CHECK(got[0] == got[1]);
  CHECK(got[1] == got[2]);

  WeylConfig w;
  w.p = unit_cell_const(0.125, 1, 2.0);
  w.scales = {1.0, 2.0, 4.0};
  WeylLadder lads[3];
  for (int i = 0; i < 3; ++i) {
    WeylConfig c = w;
    c.placement = kinds[i];
    lads[i] = weyl_distance(f, c, {1.0});
  }
  for (std::size_t r = 0; r < lads[0].rungs.size(); ++r) {
    CHECK(lads[0].rungs[r].value == lads[1].rungs[r].value);
    CHECK(lads[1].rungs[r].value == lads[2].rungs[r].value);
  }
}

TEST_CASE("cell norms interlace the pointwise sup and the scale ladder") {
  const auto f = load("sine", 0, 40.0, 0.125);
  const std::vector<Index> delta{8};
  const double pointwise = sup_shift_defect(f, delta, kOne).sup;

  StepanovConfig cfg;
  cfg.p = unit_cell_const(0.125, 1, 2.0);
  const double cell = stepanov_qa_distance(f, cfg, {1.0}, 0.05, 0.0).value;

  // The closed mesh carries measure 1+h, so the cell norm of a bounded
  // defect may exceed the sup by that volume factor and no more.
  const double vol = std::sqrt(1.125);
  CHECK(cell <= pointwise * vol * (1.0 + 1e-9));

  WeylConfig w;
  w.p = unit_cell_const(0.125, 1, 2.0);
  w.scales = {1.0, 2.0, 4.0};
  w.weights = classical_weyl_weight(1, 2.0);
  const WeylLadder lad = weyl_distance(f, w, {1.0});
  for (const ScaleRung& r : lad.rungs) CHECK(r.value <= cell * vol * (1.0 + 1e-9));
}

TEST_CASE("reflection transports the ladders at grid exactness") {
  // Indicator data with p = 1 sums integers: both directions agree bitwise.
  const auto box = load("indicator-box", 0, 0.0, 0.0);
  const auto rbox = reflect_sample(box);
  WeylConfig w;
  w.p = unit_cell_const(0.25, 1, 1.0);
  w.scales = {1.0, 2.0, 4.0};
  const WeylLadder a = weyl_distance(box, w, {2.0});
  WeylConfig wr = w;
  wr.cell.lo = {-1.0};
  wr.cell.hi = {0.0};
  const WeylLadder b = weyl_distance(rbox, wr, {-2.0});
  REQUIRE(a.rungs.size() == b.rungs.size());
  for (std::size_t i = 0; i < a.rungs.size(); ++i) {
    CHECK(a.rungs[i].value == b.rungs[i].value);
    CHECK(a.rungs[i].points == b.rungs[i].points);
  }

  // Smooth data accumulates in opposite orders; agreement to roundoff.
  const auto f = load("sine", 0, 40.0, 0.125);
  const auto rf = reflect_sample(f);
  WeylConfig ws;
  ws.p = unit_cell_const(0.125, 1, 2.0);
  ws.scales = {1.0, 2.0, 4.0};
  const WeylLadder sa = weyl_distance(f, ws, {1.0});
  WeylConfig wsr = ws;
  wsr.cell.lo = {-1.0};
  wsr.cell.hi = {0.0};
  const WeylLadder sb = weyl_distance(rf, wsr, {-1.0});
  for (std::size_t i = 0; i < sa.rungs.size(); ++i)
    CHECK(sa.rungs[i].value == doctest::Approx(sb.rungs[i].value).epsilon(1e-12));

  // Variable exponent transports with the reversed profile.
  const ExponentField ramp = unit_cell_ramp(0.25, 1.5);
  ExponentField rev = ramp;
  for (std::size_t i = 0; i < rev.p.size(); ++i) rev.p[i] = ramp.p[ramp.p.size() - 1 - i];
  WeylConfig v;
  v.p = ramp;
  v.scales = {1.0};
  v.c = kI;
  const WeylLadder va = weyl_distance(box, v, {2.0});
  WeylConfig vr = v;
  vr.p = rev;
  vr.cell.lo = {-1.0};
  vr.cell.hi = {0.0};
  const WeylLadder vb = weyl_distance(rbox, vr, {-2.0});
  CHECK(va.rungs[0].value == doctest::Approx(vb.rungs[0].value).epsilon(1e-9));
}

TEST_CASE("box ladder matches the frozen cross-check and the measure bound") {
  const auto box = load("indicator-box", 0, 0.0, 0.0);
  WeylConfig w;
  w.p = unit_cell_ramp(0.25, 1.5);
  w.scales = {2.0, 4.0, 8.0, 16.0};
  w.weights = power_law_weight(0.5);
  w.c = kI;
  const WeylLadder lad = weyl_distance(box, w, {2.0});
  REQUIRE(lad.rungs.size() == 4);
  const double frozen[] = {1.489884402765504, 1.292540394025757, 1.102407345872675,
                           0.865574809542797};
  for (std::size_t i = 0; i < 4; ++i) {
    CHECK(lad.rungs[i].value == doctest::Approx(frozen[i]).epsilon(1e-8));
    // Compact support: l^{-sigma} (1+|c|) measure scaling caps every rung.
    CHECK(lad.rungs[i].value <=
          4.0 * std::pow(lad.rungs[i].scale, -0.5) * 2.0 * 4.0 * (1.0 + 1e-12));
    if (i > 0) CHECK(lad.rungs[i].value < lad.rungs[i - 1].value);
  }
  CHECK_FALSE(lad.increasing);
}

TEST_CASE("factor away from one keeps the quadrant ladder off the floor") {
  const auto quad = load("indicator-quadrant", 2, 64.0, 0.5);
  WeylConfig w;
  w.p = unit_cell_const(0.5, 2, 2.0);
  w.scales = {2.0, 4.0, 8.0};
  w.c = kI;
  const WeylLadder lad = weyl_distance(quad, w, {0.5, 0.5});
  // Deep-quadrant anchors see |1 - c| on the whole cell before any weight.
  for (const ScaleRung& r : lad.rungs) CHECK(r.value >= std::sqrt(2.0) - 1e-9);
}

TEST_CASE("threshold sweep brackets the scale crossover") {
  const auto quad = load("indicator-quadrant", 2, 64.0, 0.5);
  const std::vector<double> scales{2.0, 4.0, 8.0, 16.0, 32.0};

  // The unweighted rungs have a closed form on this data.
  WeylConfig base;
  base.p = unit_cell_const(0.5, 2, 2.0);
  base.scales = scales;
  const WeylLadder unit = weyl_distance(quad, base, {0.5, 0.5});
  for (std::size_t i = 0; i < scales.size(); ++i)
    CHECK(unit.rungs[i].value ==
          doctest::Approx(0.5 * std::sqrt(4.0 * scales[i] + 1.0)).epsilon(1e-12));

  std::vector<double> sigmas;
  for (int i = 1; i <= 15; ++i) sigmas.push_back(0.1 * i);
  const ThresholdReport rep = weyl_threshold_experiment(quad, 2.0, sigmas, scales);
  REQUIRE(rep.verdicts.size() == 15);
  for (std::size_t i = 0; i < 15; ++i) {
    const bool expect_pass = sigmas[i] > 0.55;
    CHECK((rep.verdicts[i] == Verdict::Pass) == expect_pass);
  }
  CHECK(rep.bracket_lo == doctest::Approx(0.5).epsilon(1e-12));
  CHECK(rep.bracket_hi == doctest::Approx(0.6).epsilon(1e-12));
  CHECK(rep.crossover == doctest::Approx(0.501123).epsilon(1e-4));
  CHECK(rep.predicted == doctest::Approx(0.5).epsilon(1e-12));
  CHECK(rep.rows.size() == 15 * scales.size());
  REQUIRE(rep.probe.size() == 2);
  CHECK(rep.probe[0] == 0.5);

  // One dimension has no surface term: every positive sigma passes.
  const auto line = load("indicator-quadrant", 1, 64.0, 0.5);
  const ThresholdReport one = weyl_threshold_experiment(line, 1.0, sigmas, scales);
  for (const Verdict v : one.verdicts) CHECK(v == Verdict::Pass);
  CHECK(std::isnan(one.bracket_lo));
  CHECK(one.bracket_hi == doctest::Approx(0.1).epsilon(1e-12));
  CHECK(one.predicted == 0.0);
  CHECK(one.crossover < 0.0); // already under tolerance at unit weight
}

TEST_CASE("equi reading takes the best scale instead of the deep limit") {
  const auto quad = load("indicator-quadrant", 2, 64.0, 0.5);
  WeylConfig w;
  w.p = unit_cell_const(0.5, 2, 2.0);
  w.scales = {2.0, 4.0, 8.0, 16.0, 32.0};
  w.weights = power_law_weight(1.0);
  w.equi = true;
  const WeylLadder equi = weyl_distance(quad, w, {0.5, 0.5});
  CHECK(equi.aggregate == equi.rungs.back().value);
  CHECK(weyl_verdict(equi, 0.2) == Verdict::Pass);

  WeylConfig wl = w;
  wl.equi = false;
  const WeylLadder lim = weyl_distance(quad, wl, {0.5, 0.5});
  CHECK(weyl_verdict(lim, 0.2) == Verdict::Fail);
}

TEST_CASE("ladder verdicts read aggregate, trend, and mode") {
  WeylLadder lad;
  lad.rungs = {{1, 0.1, 9}, {2, 0.2, 9}, {4, 0.4, 9}, {8, 0.8, 9}};
  lad.aggregate = 0.8;
  lad.increasing = true;
  CHECK(weyl_verdict(lad, 1.0) == Verdict::Indeterminate);
  lad.increasing = false;
  CHECK(weyl_verdict(lad, 1.0) == Verdict::Pass);
  CHECK(weyl_verdict(lad, 0.5) == Verdict::Fail);

  WeylLadder equi;
  equi.equi = true;
  equi.rungs = {{1, 10.0, 9}, {2, 5.0, 9}};
  equi.aggregate = 5.0;
  CHECK(weyl_verdict(equi, 6.0) == Verdict::Pass);
  CHECK(weyl_verdict(equi, 1.0) == Verdict::Indeterminate); // still sinking
  equi.rungs[1].value = 9.5;
  equi.aggregate = 9.5;
  CHECK(weyl_verdict(equi, 1.0) == Verdict::Fail);
}

TEST_CASE("cell classification mirrors the pointwise search") {
  const auto slog = load("sin-log", 0, 0.0, 0.0);
  StepanovConfig cfg;
  cfg.p = unit_cell_const(0.25, 1, 1.0);
  const auto reps = stepanov_classify(slog, cfg, {0.05});
  REQUIRE(reps.size() == 1);
  CHECK(reps[0].verdict == Verdict::Pass);
  CHECK(reps[0].klass == "stepanov-quasi-asymptotic");
  CHECK_FALSE(reps[0].witnesses.empty());
  CHECK_FALSE(reps[0].margins.empty());
  CHECK(reps[0].margins.back().value <= 0.05);

  // The averaged defect never exceeds the pointwise one, so the pointwise
  // pass transports.
  AsymptoticSpec spec;
  const QuasiReport q = quasi_asymptotic_check(slog, spec, 0.05);
  CHECK(q.verdict == Verdict::Pass);

  const auto lin = load("linear", 0, 0.0, 0.0);
  StepanovConfig lcfg;
  lcfg.p = unit_cell_const(0.25, 1, 1.0);
  const auto lreps = stepanov_classify(lin, lcfg, {0.1});
  CHECK(lreps[0].verdict == Verdict::Fail);

  // Failing with c = -1: the tail defect tends to 2|sin log|, not 0.
  StepanovConfig ncfg = cfg;
  ncfg.law.shift.c = Complex{-1.0, 0.0};
  const auto nreps = stepanov_classify(slog, ncfg, {0.05});
  CHECK(nreps[0].verdict != Verdict::Pass);
}

TEST_CASE("cell classification works jointly in two dimensions") {
  const auto slog = load("sin-log", 2, 16.0, 0.5);
  StepanovConfig cfg;
  cfg.p = unit_cell_const(0.5, 2, 1.0);
  QuasiOptions opt;
  opt.max_t0 = 8;
  opt.max_tau = 8;
  const auto reps = stepanov_classify(slog, cfg, {0.2}, opt);
  REQUIRE(reps.size() == 1);
  CHECK(reps[0].verdict == Verdict::Pass);
  CHECK(reps[0].l <= 32.0);
}

TEST_CASE("scale recurrence follows the pointwise recurrence for the sine") {
  const auto f = load("sine", 0, 0.0, 0.0);
  const DomainSubset ray = ray_lattice(f.grid, {2.0 * kPi});

  AsymptoticSpec spec;
  spec.iprime = ray;
  QuasiUrOptions qopt;
  qopt.tau_max = 40.0;
  const QuasiRecurrenceReport q = quasi_uniform_recurrence_check(f, spec, 3, 0.05, qopt);
  REQUIRE(q.verdict == Verdict::Pass);

  WeylConfig w;
  w.p = unit_cell_const(0.05, 1, 2.0);
  w.scales = {1.0, 2.0, 4.0};
  w.weights = power_law_weight(0.5);
  w.lambda_prime = ray;
  WeylUrOptions opt;
  opt.tau_max = 40.0;
  const WeylRecurrenceReport rep = weyl_ur_check(f, w, 3, 0.05, opt);
  CHECK(rep.verdict == Verdict::Pass);
  CHECK(rep.tolerance == 0.05);
  REQUIRE(rep.bands.size() == 3);
  for (const WeylBand& band : rep.bands) {
    CHECK(band.value <= 0.05);
    CHECK(band.candidates > 0);
  }
}

TEST_CASE("unbounded drift defeats the scale recurrence") {
  const auto lin = load("linear", 0, 0.0, 0.0);
  WeylConfig w;
  w.p = unit_cell_const(0.25, 1, 1.0);
  w.scales = {1.0, 2.0, 4.0};
  const WeylRecurrenceReport rep = weyl_ur_check(lin, w, 3);
  CHECK(rep.verdict == Verdict::Fail);
}

TEST_CASE("power transport certifies the composed shift") {
  const auto rot = load("unit-rotation", 0, 0.0, 0.0);
  WeylConfig w;
  w.p = unit_cell_const(0.25, 1, 2.0);
  w.scales = {1.0, 2.0};
  w.c = kI;

  const PowerTransportReport rep = power_argument_check(rot, w, 4, RVec{4.0});
  CHECK(rep.verdict == Verdict::Pass);
  CHECK(rep.bound_holds);
  CHECK(rep.c_to.real() == doctest::Approx(1.0).epsilon(1e-14));
  CHECK(rep.c_to.imag() == doctest::Approx(0.0).epsilon(1e-14));
  CHECK(rep.bound_factor == doctest::Approx(4.0).epsilon(1e-12));
  for (const ScaleRung& r : rep.single.rungs) CHECK(r.value < 1e-12);
  for (const ScaleRung& r : rep.transported.rungs) CHECK(r.value < 1e-12);

  // m = 1 is the identity transport.
  const PowerTransportReport id = power_argument_check(rot, w, 1, RVec{4.0});
  REQUIRE(id.single.rungs.size() == id.transported.rungs.size());
  for (std::size_t i = 0; i < id.single.rungs.size(); ++i) {
    CHECK(id.single.rungs[i].value == id.transported.rungs[i].value);
    CHECK(id.single.rungs[i].points == id.transported.rungs[i].points);
  }
  CHECK(id.subadd_constant == doctest::Approx(1.0).epsilon(1e-14));

  // Omitted tau picks the smallest nonzero candidate.
  WeylConfig wp = w;
  wp.lambda_prime = ray_lattice(rot.grid, {4.0});
  const PowerTransportReport picked = power_argument_check(rot, wp, 2);
  REQUIRE(picked.tau.size() == 1);
  CHECK(picked.tau[0] == doctest::Approx(4.0).epsilon(1e-12));

  const auto f = load("sine", 0, 40.0, 0.125);
  WeylConfig ws;
  ws.p = unit_cell_const(0.125, 1, 2.0);
  ws.scales = {1.0, 2.0};
  const PowerTransportReport two = power_argument_check(f, ws, 2, RVec{3.0});
  CHECK(two.verdict == Verdict::Pass);
  CHECK(two.bound_factor == doctest::Approx(2.0).epsilon(1e-12));
  for (std::size_t i = 0; i < two.single.rungs.size(); ++i)
    CHECK(two.transported.rungs[i].value <=
          two.bound_factor * two.single.rungs[i].value + 1e-6);
}

TEST_CASE("reciprocals carry the reciprocal factor") {
  const auto e2 = load("exp2", 0, 0.0, 0.0);
  const auto inv = reciprocal(e2);
  StepanovConfig cfg;
  cfg.p = unit_cell_const(0.25, 1, 2.0);
  cfg.law.shift.c = Complex{0.5, 0.0};
  CHECK(stepanov_qa_distance(inv, cfg, {1.0}, 0.05, 0.0).value < 1e-12);

  const auto rot = load("unit-rotation", 0, 0.0, 0.0);
  const auto rinv = reciprocal(rot);
  WeylConfig w;
  w.p = unit_cell_const(0.25, 1, 2.0);
  w.scales = {1.0, 2.0};
  w.c = Complex{0.0, -1.0};
  const WeylLadder lad = weyl_distance(rinv, w, {4.0});
  for (const ScaleRung& r : lad.rungs) CHECK(r.value < 1e-12);

  const auto sine = load("sine", 0, 40.0, 0.125);
  CHECK_THROWS_AS((void)reciprocal(sine), std::domain_error);
}

TEST_CASE("diagonal pair data yields a ladder without a classification claim") {
  const auto pd = load("pair-difference", 0, 40.0, 0.0);
  WeylConfig w;
  w.p = unit_cell_const(0.25, 2, 2.0);
  w.scales = {1.0, 2.0, 4.0};
  const WeylLadder lad = weyl_distance(pd, w, {6.25, 6.25});
  REQUIRE(lad.rungs.size() == 3);
  for (const ScaleRung& r : lad.rungs) {
    CHECK(r.value >= 0.0);
    CHECK(std::isfinite(r.value));
  }
  CHECK_FALSE(lad.note.empty());
}

TEST_CASE("parallel cell sups agree with the sequential ones bitwise") {
  const auto f = load("sine", 0, 40.0, 0.125);
  StepanovConfig cfg;
  cfg.p = unit_cell_ramp(0.125, 1.0); // variable exponent takes the gather path
  const double seq = stepanov_qa_distance(f, cfg, {1.0}, 0.05, 10.0).value;
  StepanovConfig par = cfg;
  par.workers = 4;
  CHECK(stepanov_qa_distance(f, par, {1.0}, 0.05, 10.0).value == seq);
}

TEST_CASE("cell checkers validate their inputs") {
  const auto f = load("sine", 0, 40.0, 0.125);
  StepanovConfig cfg;
  cfg.p = unit_cell_const(0.125, 1, 2.0);
  CHECK_THROWS_AS((void)stepanov_qa_distance(f, cfg, {1.0}, 0.0, 10.0), std::invalid_argument);
  CHECK_THROWS_AS((void)stepanov_qa_distance(f, cfg, {1.0}, 0.05, -1.0), std::invalid_argument);

  StepanovConfig bad = cfg;
  bad.weights.qa_weight = [](const RVec&, double, const RVec&) { return 0.0; };
  CHECK_THROWS_AS((void)stepanov_qa_distance(f, bad, {1.0}, 0.05, 10.0), std::invalid_argument);

  // The default cell escapes a domain pointing the other way.
  const auto e2 = load("exp2", 0, 0.0, 0.0);
  const auto re2 = reflect_sample(e2);
  StepanovConfig rcfg;
  rcfg.p = unit_cell_const(0.25, 1, 2.0);
  CHECK_THROWS_AS((void)stepanov_qa_distance(re2, rcfg, {-1.0}, 0.05, 0.0),
                  std::invalid_argument);

  WeylConfig w;
  w.p = unit_cell_const(0.125, 1, 2.0);
  CHECK_THROWS_AS((void)weyl_distance(f, w, {1.0}), std::invalid_argument); // no scales
  w.scales = {2.0, 1.0};
  CHECK_THROWS_AS((void)weyl_distance(f, w, {1.0}), std::invalid_argument);
  w.scales = {300.0};
  CHECK_THROWS_AS((void)weyl_distance(f, w, {1.0}), std::invalid_argument); // nothing fits
  w.scales = {1.0, 2.0};
  CHECK_THROWS_AS((void)weyl_ur_check(f, w, 1), std::invalid_argument);
  CHECK_THROWS_AS((void)power_argument_check(f, w, 0), std::invalid_argument);

  const auto quad = load("indicator-quadrant", 2, 64.0, 0.5);
  CHECK_THROWS_AS((void)weyl_threshold_experiment(quad, 0.5, {0.5}, {2.0, 4.0}),
                  std::invalid_argument);
  CHECK_THROWS_AS((void)weyl_threshold_experiment(quad, 2.0, {0.5, 0.4}, {2.0, 4.0}),
                  std::invalid_argument);
}
