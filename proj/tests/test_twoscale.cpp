#include <catch2/catch.hpp>

#include <cmath>
#include <complex>
#include <set>

#include <nlohmann/json.hpp>

#include "s2s/twoscale.hpp"

using namespace s2s;

namespace {

SectorScene quarter_sector() {
  SectorScene s;
  s.omega = Opening::from_rational(1, 2);
  s.outer_radius = 1.0;
  s.rho0 = 1.0;
  s.rho0p = 0.65;
  return s;
}

// Transformed pattern declared directly in the half-plane variable: one
// mirror pair of disks at +-0.25i, radius 0.15.
TransformedScene quarter_pattern() {
  TransformedScene xs;
  xs.kappa = 2.0;
  xs.outer_radius_B = 1.0;
  TransformedComponent comp;
  comp.kind = ComponentKind::MirrorPair;
  comp.upper_curve = disk_curve(Complex(0, 0.25), 0.15);
  xs.components = {comp};
  xs.m_cross = 0;
  xs.m_pair = 1;
  return xs;
}

struct QuarterRig {
  SectorScene sector = quarter_sector();
  TransformedScene xscene = quarter_pattern();
  UnperturbedSolution u0;
  CornerExpansion corner;
  CornerExpansion corner_deep;
  PanelMesh mesh_b;
  QMeshLayout q;
  TaylorBlocks tb;
  TraceFamily traces;
  TwoScaleExpansion ts;
};

const QuarterRig& rig() {
  static QuarterRig r = [] {
    QuarterRig r;
    r.u0 = solve_unperturbed(r.sector, AnalyticRHS::constant(1.0), 10.0);
    r.corner = r.u0.expand(0.2, 4.0);
    r.corner_deep = r.u0.expand(0.2, 8.0);
    r.mesh_b = mesh_outer(r.xscene, 6.0);
    r.q = mesh_pattern(r.xscene, 12.0);
    r.tb = taylor_blocks(r.xscene, r.mesh_b, r.q, 2);
    r.traces = push_traces(r.corner, r.xscene, r.q);
    UnperturbedSolution u0 = r.u0;
    CornerExpansion deep = r.corner_deep;
    double r_sw = 0.3 * r.u0.rho1p;
    r.ts = two_scale_coeffs(r.traces, r.tb, 2, 4.0,
                            [u0, deep, r_sw](Complex t) {
                              if (std::abs(t) < r_sw)
                                return deep.eval_u0(t, deep.gamma_max);
                              return u0.u0(t);
                            });
    return r;
  }();
  return r;
}

// Direct hole-scale solve with the fully summed pushed trace at this eps.
SolutionPair reference_solve(const QuarterRig& r, double eps, double* eta_out) {
  double eta = std::pow(eps, r.xscene.kappa);
  if (eta_out) *eta_out = eta;
  BlockSystem sys = assemble_M(r.xscene, eta, r.mesh_b, r.q);
  std::vector<double> psi(r.mesh_b.size(), 0.0);
  std::vector<double> data(r.q.mesh.size(), 0.0);
  for (const TraceSlot& s : r.traces.slots) {
    double w = eval_E(s.gamma, eps, r.corner.idx);
    for (size_t i = 0; i < data.size(); ++i) data[i] -= w * s.psi[i];
  }
  return solve_direct(sys, psi, data);
}

double ref_value_global(const QuarterRig& r, const SolutionPair& sol,
                        Complex t) {
  return r.ts.u0_at(t) + sol.eval_slow(conformal_power_map(t, r.xscene.kappa));
}

}  // namespace

TEST_CASE("unperturbed solve on the quarter disk", "[twoscale]") {
  const QuarterRig& r = rig();

  SECTION("residual checks for f == 1") {
    CHECK(r.u0.trace_residual() < 1e-7);
    for (Complex z : {std::polar(0.45, 0.6), std::polar(0.5, 0.8),
                      std::polar(0.35, 1.0)}) {
      CHECK(r.u0.laplacian_defect(z) < 1e-4);
    }
    // The particular part is the frozen quarter-disk polynomial rho^2 / 4.
    CHECK(r.u0.u_f.eval_real(Complex(0.3, 0.4)) == Approx(0.25 / 4).epsilon(1e-12));
  }

  SECTION("zero right-hand side gives the zero solution") {
    UnperturbedSolution z =
        solve_unperturbed(quarter_sector(), AnalyticRHS::zero(), 8.0);
    CHECK(z.trace_residual() == 0.0);
    CHECK(z.u0(Complex(0.3, 0.3)) == 0.0);
    CHECK(z.u0(std::polar(0.6, 1.1)) == 0.0);
  }

  SECTION("arc trace round trip through the corner expansion") {
    auto resum_err = [&](const CornerExpansion& ce) {
      double worst = 0;
      for (int j = 0; j < 7; ++j) {
        double th = r.sector.omega.value * (0.11 + 0.11 * j);
        Complex z = std::polar(r.u0.rho1p, th);
        worst = std::max(worst,
                         std::abs(ce.eval_u0(z, ce.gamma_max) - r.u0.u0(z)));
      }
      return worst;
    };
    double e4 = resum_err(r.corner);
    double e8 = resum_err(r.corner_deep);
    CHECK(e4 < 5e-3);       // Fourier tail of the omitted remainder modes
    CHECK(e8 < e4 / 10.0);  // deeper expansion shrinks the tail
  }
}

TEST_CASE("pushed traces realize the fast packets", "[twoscale]") {
  const QuarterRig& r = rig();

  SECTION("pure sector mode pulls back to the imaginary part") {
    CornerExpansion one = corner_expansion_remainder_only(
        r.sector.omega, 0.2, 4.0, 0.7, {1.0});
    TraceFamily fam = push_traces(one, r.xscene, r.q);
    const TraceSlot* slot = fam.find(GammaKey::frac(1));
    REQUIRE(slot != nullptr);
    for (int i = 0; i < r.q.mesh.size(); ++i)
      CHECK(slot->psi[i] == Approx(r.q.mesh.x[i].imag()).margin(1e-13));
  }

  SECTION("zero expansion pushes zero traces") {
    CornerExpansion zero = corner_expansion_remainder_only(
        r.sector.omega, 0.2, 4.0, 0.7, {0.0});
    TraceFamily fam = push_traces(zero, r.xscene, r.q);
    for (const TraceSlot& s : fam.slots) CHECK(s.sup == 0.0);
  }

  SECTION("family structure for the constant right-hand side") {
    CHECK(r.traces.find(GammaKey::frac(1)) != nullptr);
    CHECK(r.traces.find(GammaKey::pair(0, 2)) != nullptr);
    // omega = pi/2 makes ell = 2 an exact resonance carrying the log packet.
    const ResonantEntry* e = r.corner.idx.find(2);
    REQUIRE(e != nullptr);
    CHECK(e->exact);
    CHECK(e->gamma_prime == Approx(2.0));
    CHECK(r.traces.find(GammaKey::pair(2, 0)) != nullptr);
    for (const TraceSlot& s : r.traces.slots) {
      CHECK(is_odd(r.q.mesh, s.psi));
      // exact odd extension at paired nodes
      for (int i = 0; i < r.q.mesh.size(); ++i)
        CHECK(s.psi[i] == -s.psi[r.q.mesh.pair[i]]);
    }
    CHECK(r.traces.fitM > 0);
    CHECK(std::isfinite(r.traces.fitM));
  }
}

TEST_CASE("two-scale coefficients and the expansion manifest", "[twoscale]") {
  const QuarterRig& r = rig();

  SECTION("outer n = 0 layer vanishes") {
    std::set<GammaKey> keys;
    for (const auto& t : r.ts.terms) keys.insert(t.gamma);
    REQUIRE(!keys.empty());
    for (const GammaKey& g : keys) {
      const TwoScaleTerm* t0 = r.ts.find(0, g);
      REQUIRE(t0 != nullptr);
      CHECK(t0->sup_slow < 1e-12);
      CHECK(std::abs(r.ts.uS_at(0, g, std::polar(0.5, 0.7))) < 1e-12);
    }
  }

  SECTION("terms are sorted and complete") {
    size_t n_slots = 0;
    for (const TraceSlot& s : r.traces.slots)
      if (s.gamma.abs(r.corner.omega) <= 4.0 + 1e-9) ++n_slots;
    CHECK(r.ts.terms.size() == 3 * n_slots);
    for (size_t i = 1; i < r.ts.terms.size(); ++i)
      CHECK(r.ts.terms[i - 1].exponent <= r.ts.terms[i].exponent + 1e-12);
    // rational angle: the exponent lattice is integral
    for (const auto& t : r.ts.terms) {
      CHECK(std::abs(t.exponent - std::round(t.exponent)) < 1e-12);
    }
    CHECK(r.ts.fitM > 0);
    CHECK(std::isfinite(r.ts.fitC));
    for (const auto& t : r.ts.terms) CHECK_FALSE(t.mp.even_flagged);
  }

  SECTION("manifest round trips through a JSON parser") {
    nlohmann::json j = nlohmann::json::parse(expansion_manifest(r.ts));
    CHECK(j["kappa"].get<double>() == Approx(2.0));
    CHECK(j["terms"].size() == r.ts.terms.size());
    CHECK(j["n_max"].get<int>() == 2);
  }

  SECTION("zero corner expansion yields the bare unperturbed field") {
    CornerExpansion zero = corner_expansion_remainder_only(
        r.sector.omega, 0.2, 4.0, 0.7, {0.0});
    TraceFamily fam = push_traces(zero, r.xscene, r.q);
    TwoScaleExpansion ts0 = two_scale_coeffs(fam, r.tb, 2, 4.0);
    for (const auto& t : ts0.terms) {
      CHECK(t.sup_slow == 0.0);
      CHECK(t.sup_fast == 0.0);
    }
    ExpansionValue v =
        eval_expansion(ts0, 0.15, std::polar(0.5, 0.7), EvalFrame::Global, 4.0);
    CHECK(v.value == Approx(ts0.u0_at(std::polar(0.5, 0.7))).margin(1e-14));
  }

  SECTION("input guards") {
    CHECK_THROWS_AS(two_scale_coeffs(r.traces, r.tb, 5, 4.0),
                    std::invalid_argument);
    CHECK_THROWS_AS(two_scale_coeffs(r.traces, r.tb, 2, 0.0),
                    std::invalid_argument);
  }
}

TEST_CASE("truncated expansion against the direct reference", "[twoscale]") {
  const QuarterRig& r = rig();
  const double eps = 0.15;
  double eta = 0;
  SolutionPair ref = reference_solve(r, eps, &eta);
  CHECK_FALSE(ref.data_projected);

  SECTION("sup error decreases strictly with the exponent cutoff") {
    std::vector<Complex> probes;
    for (int j = 0; j < 6; ++j) {
      double s = (j + 0.5) / 6.0;
      double rr = 0.13 * std::pow(0.6 / 0.13, s);
      probes.push_back(std::polar(rr, r.sector.omega.value * (0.15 + 0.12 * j)));
    }
    double prev = 1e300;
    for (double cut : {0.0, 2.0, 4.0}) {
      double sup = 0;
      for (Complex t : probes) {
        double v = eval_expansion(r.ts, eps, t, EvalFrame::Global, cut).value;
        sup = std::max(sup, std::abs(v - ref_value_global(r, ref, t)));
      }
      CHECK(sup < prev);
      prev = sup;
      if (cut == 4.0) CHECK(sup < 1e-3);
    }
  }

  SECTION("eps = 0 collapses to the unperturbed solution") {
    Complex t = std::polar(0.5, 0.8);
    CHECK(eval_expansion(r.ts, 0.0, t, EvalFrame::Global, 4.0).value ==
          Approx(r.ts.u0_at(t)).margin(1e-15));
    CHECK(eval_expansion(r.ts, 0.0, t, EvalFrame::Outer, 4.0).value ==
          Approx(r.ts.u0_at(t)).margin(1e-15));
    CHECK(eval_expansion(r.ts, 0.0, Complex(2.0, 1.0), EvalFrame::Inner, 4.0)
              .value == 0.0);
  }

  SECTION("frame admissibility is enforced") {
    // t chosen so that G t / eta is the hole center
    Complex bad = conformal_power_map(Complex(0, 0.25 * eta), 0.5);
    CHECK_THROWS_AS(eval_expansion(r.ts, eps, bad, EvalFrame::Global, 4.0),
                    std::invalid_argument);
    // inside the hull but outside the holes: outer rejects, global accepts
    Complex hullpt = std::polar(0.3 * r.ts.hull_P * eps, 0.7);
    CHECK_THROWS_AS(eval_expansion(r.ts, eps, hullpt, EvalFrame::Outer, 4.0),
                    std::invalid_argument);
    CHECK_NOTHROW(eval_expansion(r.ts, eps, hullpt, EvalFrame::Global, 4.0));
    // fast-frame point inside the upper hole
    CHECK_THROWS_AS(eval_expansion(r.ts, eps, std::polar(0.5, pi / 4),
                                   EvalFrame::Inner, 4.0),
                    std::invalid_argument);
    // fast-frame point that leaves the sector at this eps
    CHECK_THROWS_AS(
        eval_expansion(r.ts, eps, Complex(8.0, 4.0), EvalFrame::Inner, 4.0),
        std::invalid_argument);
    CHECK_THROWS_AS(
        eval_expansion(r.ts, -0.1, Complex(0.5, 0.2), EvalFrame::Global, 4.0),
        std::invalid_argument);
  }

  SECTION("truncated system residual is small in the assembled system") {
    BlockSystem sys = assemble_M(r.xscene, eta, r.mesh_b, r.q);
    Eigen::VectorXd s = Eigen::VectorXd::Zero(sys.dim());
    for (const auto& term : r.ts.terms) {
      double w = r.ts.weight(term, eps);
      for (int i = 0; i < sys.n_b(); ++i)
        s[i] += w * term.sol.phi[sys.up_b[i]];
      for (int i = 0; i < sys.n_q(); ++i)
        s[sys.n_b() + i] += w * term.sol.big_phi[sys.up_q[i]];
      for (int j = 0; j < sys.m_sharp(); ++j)
        s[sys.n_b() + sys.n_q() + j] += w * term.sol.c[j];
    }
    Eigen::VectorXd d = Eigen::VectorXd::Zero(sys.dim());
    for (int i = 0; i < sys.n_q(); ++i) {
      double v = 0;
      for (const TraceSlot& slot : r.traces.slots)
        v -= eval_E(slot.gamma, eps, r.corner.idx) * slot.psi[sys.up_q[i]];
      d[sys.n_b() + i] = v;
    }
    double res = (sys.mat * s - d).lpNorm<Eigen::Infinity>();
    CHECK(res < 1e-4);
  }
}

TEST_CASE("frames agree within their tails", "[twoscale]") {
  const QuarterRig& r = rig();
  const double eps = 0.15;
  // fast points in the matching annulus [1.2, 1.8] hull_P, slow images eps T
  for (Complex T : {std::polar(0.8, 0.55), std::polar(0.95, 0.9),
                    std::polar(1.1, 1.2)}) {
    Complex t = eps * T;
    ExpansionValue g = eval_expansion(r.ts, eps, t, EvalFrame::Global, 4.0);
    ExpansionValue o = eval_expansion(r.ts, eps, t, EvalFrame::Outer, 4.0);
    ExpansionValue in = eval_expansion(r.ts, eps, T, EvalFrame::Inner, 4.0);
    double tol_o = std::max(g.tail, o.tail) + 1e-10;
    double tol_i = std::max(g.tail, in.tail) + 1e-10;
    CHECK(std::abs(g.value - o.value) <= tol_o);
    CHECK(std::abs(g.value - in.value) <= tol_i);
    // scaling bookkeeping: resumming at eps T must equal the weighted
    // fast-side packets, log cross terms included
    CHECK(r.corner.eval_u0(t, 4.0) ==
          Approx(r.corner.eval_u0_scaled(eps, T, 4.0)).margin(1e-13));
  }
  CHECK(r.ts.tail_estimate(eps, 0.0) > r.ts.tail_estimate(eps, 4.0));
}

TEST_CASE("regrouping independence at matched cutoffs", "[twoscale]") {
  SectorScene sector;
  sector.omega = Opening::from_value(1.0);
  sector.outer_radius = 1.0;
  sector.rho0 = 1.0;
  sector.rho0p = 0.6;
  AnalyticRHS f = AnalyticRHS::from_real_poly({{{1, 0}, 1.0}});

  TransformedScene xs;
  xs.kappa = sector.omega.kappa();
  xs.outer_radius_B = 1.0;
  TransformedComponent comp;
  comp.kind = ComponentKind::MirrorPair;
  comp.upper_curve = disk_curve(Complex(0, 0.35), 0.12);
  xs.components = {comp};
  xs.m_cross = 0;
  xs.m_pair = 1;

  UnperturbedSolution u0 = solve_unperturbed(sector, f, 10.0);
  PanelMesh mesh_b = mesh_outer(xs, 6.0);
  QMeshLayout q = mesh_pattern(xs, 12.0);
  TaylorBlocks tb = taylor_blocks(xs, mesh_b, q, 2);
  auto u0fn = [u0](Complex t) { return u0.u0(t); };

  // dist(3 * omega, pi) = 0.1416: resonant for delta = 0.4, plain for 0.1
  TraceFamily tr_a = push_traces(u0.expand(0.1, 4.2), xs, q);
  TraceFamily tr_b = push_traces(u0.expand(0.4, 4.2), xs, q);
  CHECK(tr_a.find(GammaKey::pair(3, 0)) == nullptr);
  CHECK(tr_b.find(GammaKey::pair(3, 0)) != nullptr);

  TwoScaleExpansion ts_a = two_scale_coeffs(tr_a, tb, 1, 4.2, u0fn);
  TwoScaleExpansion ts_b = two_scale_coeffs(tr_b, tb, 1, 4.2, u0fn);

  const double eps = 0.15, cut = 3.3;
  for (Complex t : {std::polar(0.3, 0.25), std::polar(0.45, 0.5),
                    std::polar(0.55, 0.8), std::polar(0.38, 0.6)}) {
    double va = eval_expansion(ts_a, eps, t, EvalFrame::Global, cut).value;
    double vb = eval_expansion(ts_b, eps, t, EvalFrame::Global, cut).value;
    CHECK(va == Approx(vb).margin(1e-8));
  }
  for (Complex T : {std::polar(1.1, 0.3), std::polar(1.5, 0.55),
                    std::polar(1.9, 0.8)}) {
    double va = eval_expansion(ts_a, eps, T, EvalFrame::Inner, cut).value;
    double vb = eval_expansion(ts_b, eps, T, EvalFrame::Inner, cut).value;
    CHECK(va == Approx(vb).margin(1e-8));
  }
}

TEST_CASE("vanishing right-hand side near the corner", "[twoscale]") {
  const QuarterRig& r = rig();
  CornerExpansion rem = corner_expansion_remainder_only(
      r.sector.omega, 0.2, 6.0, 0.7, {0.3, -0.1, 0.05});
  TraceFamily fam = push_traces(rem, r.xscene, r.q);
  REQUIRE(!fam.slots.empty());
  for (const TraceSlot& s : fam.slots)
    CHECK(s.gamma.kind == GammaKey::Kind::Frac);

  TwoScaleExpansion ts = two_scale_coeffs(fam, r.tb, 2, 6.0);
  for (const auto& t : ts.terms) {
    CHECK(t.gamma.kind == GammaKey::Kind::Frac);
    // exponents live on the pure lattice (pi / omega) N = 2 N
    CHECK(std::abs(t.exponent - 2.0 * std::round(t.exponent / 2.0)) < 1e-12);
  }
  CHECK(ts.find(1, GammaKey::pair(0, 2)) == nullptr);
  CHECK(fam.find(GammaKey::pair(0, 2)) == nullptr);
  CHECK(fam.find(GammaKey::pair(2, 0)) == nullptr);
}

TEST_CASE("convergence study emits monotone tables", "[twoscale]") {
  SectorScene scene = quarter_sector();
  scene.rho0p = 0.7;
  HoleSpec hole;
  hole.kind = HoleSpec::Kind::Disk;
  hole.center = std::polar(0.5, pi / 4);
  hole.radius = 0.15;
  scene.holes = {hole};

  StudyParams p;
  p.refit = 12;
  p.ppu_A = 10.0;
  p.ppu_B = 6.0;
  p.ppu_Q = 8.0;
  p.taylor_order = 2;
  p.gamma_pad = 2.5;

  std::vector<double> eps = {0.1, 0.15, 0.2};
  std::vector<double> cuts = {0.0, 2.0, 4.0};

  SECTION("quarter disk with one mirror pair hole") {
    StudyTable tab =
        convergence_study(scene, AnalyticRHS::constant(1.0), eps, cuts, 8, p);
    REQUIRE(tab.rows.size() == 27);

    // Never increases with the cutoff; a step may tie when no term with a
    // nonzero field enters (the outer sum starts empty, and the alternation
    // between slow and fast correction layers can leave a frame unchanged).
    // Across the full ladder the drop must be strict and substantial.
    for (EvalFrame f :
         {EvalFrame::Global, EvalFrame::Outer, EvalFrame::Inner}) {
      for (double e : eps) {
        double first = -1, last = -1, prev = 1e300;
        for (double c : cuts) {
          for (const StudyRow& row : tab.rows)
            if (row.frame == f && row.eps == e && row.order == c) {
              CHECK(row.sup_error <= prev * (1 + 1e-9));
              prev = row.sup_error;
              if (first < 0) first = row.sup_error;
              last = row.sup_error;
            }
        }
        CHECK(last < first / 10.0);
      }
    }

    // order-0 truncation: slope matches the lowest omitted exponent
    for (const StudyRow& row : tab.rows)
      if (row.order == 0.0 && row.frame == EvalFrame::Global)
        CHECK(row.slope == Approx(2.0).margin(0.3));

    std::string csv = tab.csv();
    CHECK(csv.rfind("eps,order,frame,sup_error,slope\n", 0) == 0);
    CHECK(csv.find("global") != std::string::npos);
    CHECK(std::count(csv.begin(), csv.end(), '\n') == 28);
  }

  SECTION("zero data produces a zero table") {
    StudyTable tab = convergence_study(scene, AnalyticRHS::zero(), {0.1, 0.2},
                                       {0.0, 2.0}, 4, p);
    REQUIRE(tab.rows.size() == 12);
    for (const StudyRow& row : tab.rows) CHECK(row.sup_error <= 1e-14);
  }

  SECTION("empty inputs produce an empty table") {
    StudyTable tab =
        convergence_study(scene, AnalyticRHS::constant(1.0), {}, cuts, 4, p);
    CHECK(tab.rows.empty());
  }
}
