#include <catch2/catch.hpp>

#include "s2s/cornerseries.hpp"
#include "s2s/geometry.hpp"

#include <cmath>
#include <complex>
#include <vector>

using namespace s2s;

namespace {

// 5-point Laplacian stencil, for harmonicity spot checks.
template <class F>
double stencil_lap(F&& u, Complex z, double h) {
  return (u(z + h) + u(z - h) + u(z + Complex(0, h)) + u(z - Complex(0, h)) - 4.0 * u(z)) / (h * h);
}

}  // namespace

TEST_CASE("particular interior solutions match hand values") {
  SECTION("constant load") {
    auto u = particular_interior(AnalyticRHS::constant(1.0));
    Complex z(0.3, 0.4);
    CHECK(u.eval_real(z) == Approx(0.25 * std::norm(z)).epsilon(1e-14));
    CHECK(u.laplacian().eval_real(z) == Approx(1.0).margin(1e-13));
  }
  SECTION("linear load t1") {
    // f = t1 -> u = rho^2 t1 / 8.
    auto u = particular_interior(AnalyticRHS::from_real_poly({{{1, 0}, 1.0}}));
    Complex z(0.2, -0.5);
    CHECK(u.eval_real(z) == Approx(std::norm(z) * z.real() / 8.0).epsilon(1e-13));
    CHECK(u.laplacian().eval_real(z) == Approx(z.real()).margin(1e-13));
  }
  SECTION("zero load") {
    auto u = particular_interior(AnalyticRHS::zero());
    CHECK(u.eval_real(Complex(0.4, 0.1)) == 0.0);
  }
  SECTION("laplacian round trip on a mixed polynomial") {
    auto rhs = AnalyticRHS::from_real_poly({{{0, 0}, 2.0}, {{1, 1}, -0.7}, {{3, 0}, 0.25}});
    auto u = particular_interior(rhs);
    auto lap = u.laplacian();
    for (Complex z : {Complex(0.3, 0.2), Complex(-0.1, 0.6), Complex(0.7, -0.4)})
      CHECK(lap.eval_real(z) == Approx(rhs.f.eval_real(z)).margin(1e-12));
  }
}

TEST_CASE("lateral traces of the interior correction") {
  // Quarter plane, f = 1: u_f = rho^2/4 on both rays, so the lateral data
  // carries -1/4 at degree 2.
  auto omega = Opening::from_rational(1, 2);
  auto u = particular_interior(AnalyticRHS::constant(1.0));
  auto tr = lateral_traces(u, omega);
  REQUIRE(tr.degree() >= 2);
  CHECK(tr.g0[2] == Approx(-0.25).margin(1e-15));
  CHECK(tr.gw[2] == Approx(-0.25).margin(1e-15));

  // f = t1: u_f = rho^2 t1/8; theta = 0 trace rho^3/8, theta = pi/2 trace 0.
  auto u3 = particular_interior(AnalyticRHS::from_real_poly({{{1, 0}, 1.0}}));
  auto tr3 = lateral_traces(u3, omega);
  REQUIRE(tr3.degree() >= 3);
  CHECK(tr3.g0[3] == Approx(-0.125).margin(1e-15));
  CHECK(tr3.gw[3] == Approx(0.0).margin(1e-15));
  CHECK(tr3.g0[2] == Approx(0.0).margin(1e-15));
}

TEST_CASE("index set of nearly resonant exponents") {
  SECTION("quarter plane, wide window") {
    auto idx = build_index_set(Opening::from_rational(1, 2), 0.7, 5.0);
    REQUIRE(idx.resonant.size() == 2);
    CHECK(idx.resonant[0].ell == 2);
    CHECK(idx.resonant[0].k == 1);
    CHECK(idx.resonant[0].exact);
    CHECK(idx.resonant[1].ell == 4);
    CHECK(idx.resonant[1].k == 2);
  }
  SECTION("window zero disables regrouping entirely") {
    auto idx = build_index_set(Opening::from_rational(1, 2), 0.0, 12.0);
    CHECK(idx.resonant.empty());
  }
  SECTION("badly approximable opening stays clear") {
    // omega = pi/phi: distances |l omega - k pi| stay above 0.1 up to l = 20
    // (minimum 0.108 at l = 13).
    double phi = 0.5 * (1.0 + std::sqrt(5.0));
    auto idx = build_index_set(Opening::from_value(pi / phi), 0.1, 20.0);
    CHECK(idx.resonant.empty());
  }
  SECTION("window outside the legal range is rejected") {
    // delta_omega must stay below min(omega, pi)/2.
    CHECK_THROWS_AS(build_index_set(Opening::from_value(0.1), 0.2, 40.0), std::invalid_argument);
    CHECK_THROWS_AS(build_index_set(Opening::from_rational(1, 2), -0.1, 5.0), std::invalid_argument);
  }
}

TEST_CASE("single lateral solutions across the three regimes") {
  SECTION("plain regime") {
    auto idx = build_index_set(Opening::from_rational(1, 2), 0.0, 5.0);
    // l = 1, g0 = 0, gw = 1: a = (1 - 0)/sin(pi/2) = 1, b = 0.
    auto w = lateral_term(1, 0.0, 1.0, idx);
    CHECK(w.kind == LateralKind::Plain);
    CHECK(w.a == Approx(1.0).margin(1e-15));
    CHECK(w.b == 0.0);
    Complex z = 0.3 * std::polar(1.0, 0.9);
    CHECK(w.eval(z) == Approx(0.3 * std::sin(0.9)).epsilon(1e-14));
  }
  SECTION("exact resonance, log regime") {
    auto idx = build_index_set(Opening::from_rational(1, 2), 0.5, 5.0);
    // l = 2, k = 1, g0 = gw = -1/4: cos(l omega) = -1 gives
    // a = (-1/4 - 1/4) / ((pi/2)(-1)) = 1/pi.
    auto w = lateral_term(2, -0.25, -0.25, idx);
    CHECK(w.kind == LateralKind::Log);
    CHECK(w.a == Approx(1.0 / pi).epsilon(1e-14));
    CHECK(w.b == Approx(-0.25).margin(1e-15));
    double rho = 0.6;
    CHECK(w.eval(Complex(rho, 0.0)) == Approx(-0.25 * rho * rho).epsilon(1e-13));
    CHECK(w.eval(Complex(0.0, rho)) == Approx(-0.25 * rho * rho).epsilon(1e-13));
  }
  SECTION("near resonance uses the divided difference and stays bounded") {
    double om = 3.0 * pi / 3.1;  // l = 3 sits near k = 3, gamma' = 3.1
    auto idx = build_index_set(Opening::from_value(om), 0.4, 4.0);
    auto w = lateral_term(3, 0.2, -0.1, idx);
    CHECK(w.kind == LateralKind::DividedDiff);
    CHECK(std::abs(w.a) < 10.0);  // no 1/sin blowup
    double rho = 0.5;
    CHECK(w.eval(Complex(rho, 0.0)) == Approx(0.2 * rho * rho * rho).epsilon(1e-11));
    CHECK(w.eval(std::polar(rho, om)) == Approx(-0.1 * rho * rho * rho).epsilon(1e-11));
  }
  SECTION("log and divided-difference branches agree across the boundary") {
    double g0 = 0.3, gw = -0.2;
    auto mk = [&](Opening om) {
      auto idx = build_index_set(om, 0.6, 1.5);
      return lateral_term(1, g0, gw, idx);
    };
    auto wl = mk(Opening::from_rational(1, 1));
    auto wd = mk(Opening::from_value(pi * (1.0 + 1e-8)));
    REQUIRE(wl.kind == LateralKind::Log);
    REQUIRE(wd.kind == LateralKind::DividedDiff);
    for (double th : {0.4, 1.3, 2.8}) {
      Complex z = std::polar(0.7, th);
      CHECK(wd.eval(z) == Approx(wl.eval(z)).margin(1e-6));
    }
  }
  SECTION("divided-difference branch is continuous through the resonance") {
    double om_star = 2.0 * pi / 3.0;  // l = 3 resonates with k = 2
    double g0 = -0.4, gw = 0.15;
    auto mk = [&](double om) {
      auto idx = build_index_set(Opening::from_value(om), 0.3, 3.5);
      return lateral_term(3, g0, gw, idx);
    };
    auto wm = mk(om_star * (1.0 - 5e-9));
    auto wp = mk(om_star * (1.0 + 5e-9));
    Complex z = std::polar(0.8, 0.5);
    CHECK(wm.eval(z) == Approx(wp.eval(z)).margin(1e-6));
  }
  SECTION("excluded exact resonance with incompatible data is rejected") {
    auto idx = build_index_set(Opening::from_rational(1, 2), 0.0, 5.0);
    CHECK_THROWS_AS(lateral_term(2, -0.25, -0.25, idx), std::domain_error);
  }
  SECTION("half plane reduces to a Taylor term even outside the window") {
    // omega = pi: every l is an exact resonance, but analytic data satisfies
    // g^w = (-1)^l g^0, the numerator vanishes and w stays plain.
    auto idx = build_index_set(Opening::from_rational(1, 1), 0.0, 5.0);
    auto w = lateral_term(2, -0.25, -0.25, idx);
    CHECK(w.kind == LateralKind::Plain);
    CHECK(w.a == 0.0);
    CHECK(w.b == Approx(-0.25).margin(1e-15));
  }
}

TEST_CASE("shifted generators") {
  auto om2 = Opening::from_rational(1, 2);
  auto bare2 = build_index_set(om2, 0.0, 6.0);
  SECTION("fractional power") {
    // Z_{pi/omega}(i) = i^2 = -1 on the quarter plane.
    Complex v = eval_Z(GammaKey::frac(1), Complex(0, 1), bare2);
    CHECK(v.real() == Approx(-1.0).epsilon(1e-14));
    CHECK(std::abs(v.imag()) < 1e-14);
    CHECK(eval_Z(GammaKey::frac(1), Complex(0, 0), bare2) == Complex(0, 0));
  }
  SECTION("plain pair") {
    Complex v = eval_Z(GammaKey::pair(1, 1), Complex(0, 2), bare2);
    CHECK(v.real() == Approx(4.0).epsilon(1e-14));
    CHECK(std::abs(v.imag()) < 1e-14);
  }
  SECTION("log kind on a resonant pair") {
    auto idx = build_index_set(om2, 0.5, 5.0);
    Complex z = std::polar(0.5, 0.7);
    Complex v = eval_Z(GammaKey::pair(2, 0), z, idx);
    Complex want = z * z * std::log(z);
    CHECK(std::abs(v - want) < 1e-14);
  }
  SECTION("divided difference on a near resonance") {
    double om = 3.0 * pi / 3.1;
    auto idx = build_index_set(Opening::from_value(om), 0.4, 4.0);
    Complex v = eval_Z(GammaKey::pair(3, 0), Complex(0.5, 0.0), idx);
    double want = (0.125 - std::pow(0.5, 3.1)) / (3.0 - 3.1);
    CHECK(v.real() == Approx(want).epsilon(1e-10));
    CHECK(std::abs(v.real() - (-0.0837)) < 1e-3);
  }
}

TEST_CASE("scale factors and pseudo homogeneity") {
  auto om2 = Opening::from_rational(1, 2);
  auto bare2 = build_index_set(om2, 0.0, 6.0);
  SECTION("plain powers of eps") {
    CHECK(eval_E(GammaKey::frac(1), 0.5, bare2) == Approx(0.25).epsilon(1e-15));
    CHECK(eval_E(GammaKey::pair(1, 2), 0.5, bare2) == Approx(0.125).epsilon(1e-15));
    CHECK(eval_E(GammaKey::pair(1, 2), 0.0, bare2) == 0.0);
  }
  SECTION("log branch value and rejection at the origin") {
    auto idx = build_index_set(om2, 0.5, 5.0);
    CHECK(eval_E(GammaKey::pair(2, 0), 0.5, idx) == Approx(0.25 * std::log(0.5)).epsilon(1e-14));
    CHECK_THROWS_AS(eval_E(GammaKey::pair(2, 0), 0.0, idx), std::domain_error);
    CHECK_THROWS_AS(eval_E(GammaKey::pair(2, 0), -0.25, idx), std::domain_error);
  }
  SECTION("pseudo homogeneity, log kind") {
    auto idx = build_index_set(om2, 0.5, 5.0);
    double eps = 0.3;
    Complex T = std::polar(1.7, 1.1);
    auto g = GammaKey::pair(2, 0);
    Complex lhs = eval_Z(g, eps * T, idx);
    Complex rhs = (eps * eps) * eval_Z(g, T, idx) + eval_E(g, eps, idx) * (T * T);
    CHECK(std::abs(lhs - rhs) < 1e-12 * (1.0 + std::abs(lhs)));
  }
  SECTION("pseudo homogeneity, divided-difference kind") {
    double om = 3.0 * pi / 3.1;
    auto o = Opening::from_value(om);
    auto idx = build_index_set(o, 0.4, 4.0);
    double eps = 0.42;
    Complex T = std::polar(1.3, 0.4);
    auto g = GammaKey::pair(3, 0);
    Complex lhs = eval_Z(g, eps * T, idx);
    Complex rhs = std::pow(eps, 3.0) * eval_Z(g, T, idx) +
                  eval_E(g, eps, idx) * std::pow(T, 3.1);
    CHECK(std::abs(lhs - rhs) < 1e-12 * (1.0 + std::abs(lhs)));
  }
}

TEST_CASE("remainder extraction from an arc trace") {
  auto om2 = Opening::from_rational(1, 2);
  SECTION("single mode comes back rescaled") {
    // g(th) = sin(2 th) sampled at rho' = 0.5: c_1 = 0.5^{-2} = 4.
    auto c = remainder_coeffs([](double th) { return std::sin(2.0 * th); }, om2, 0.5, 4);
    REQUIRE(c.size() == 4);
    CHECK(c[0] == Approx(4.0).epsilon(1e-12));
    for (int k = 1; k < 4; ++k) CHECK(std::abs(c[k]) < 1e-12);
  }
  SECTION("zero trace gives zero coefficients") {
    auto c = remainder_coeffs([](double) { return 0.0; }, om2, 0.5, 3);
    for (double ck : c) CHECK(std::abs(ck) < 1e-15);
  }
  SECTION("trace that misses the corner condition is rejected") {
    // sin(3 th) does not vanish at th = pi/2.
    CHECK_THROWS_AS(remainder_coeffs([](double th) { return std::sin(3.0 * th); }, om2, 1.0, 8),
                    std::invalid_argument);
  }
  SECTION("with the endpoint check relaxed the transform aliases as expected") {
    auto c = remainder_coeffs([](double th) { return std::sin(3.0 * th); }, om2, 1.0, 16, 10.0);
    // Sine series of sin 3th against sin 2k th on (0, pi/2):
    // b_k = (-1)^{k+1} 8k / (pi (9 - 4 k^2)).
    CHECK(c[0] == Approx(8.0 / (5.0 * pi)).margin(0.05));
    CHECK(c[1] == Approx(16.0 / (7.0 * pi)).margin(0.05));
  }
  SECTION("compatible one-third sector reproduces the mode exactly") {
    auto om3 = Opening::from_rational(1, 3);
    auto c = remainder_coeffs([](double th) { return std::sin(3.0 * th); }, om3, 1.0, 5);
    CHECK(c[0] == Approx(1.0).epsilon(1e-12));
    for (int k = 1; k < 5; ++k) CHECK(std::abs(c[k]) < 1e-12);
  }
}

namespace {

// Closed-form corner solution for the quarter disk with unit load, used as an
// independent oracle: u0 = rho^2/4 + w_2 + sum_k c_k Im z^{2k} with
// c_1 = -3/(4 pi), c_2 = 0, c_3 = 1/(24 pi) from hand integration of
// h(th) = -1/4 - (th/pi) cos 2th + (1/4) cos 2th against sin 2k th.
struct QuarterOracle {
  std::vector<double> c;
  QuarterOracle() {
    // High-resolution sine transform of h for the deeper modes.
    int N = 4096;
    c.assign(40, 0.0);
    std::vector<double> h(N);
    h[0] = 0.0;
    for (int j = 1; j < N; ++j) {
      double th = 0.5 * pi * j / N;
      h[j] = -0.25 - (th / pi) * std::cos(2 * th) + 0.25 * std::cos(2 * th);
    }
    for (int k = 1; k <= 40; ++k) {
      double s = 0.0;
      for (int j = 1; j < N; ++j) s += h[j] * std::sin(pi * k * j / N);
      c[k - 1] = 2.0 * s / N;
    }
  }
  double w2(Complex z) const {
    if (z == Complex(0, 0)) return 0.0;
    Complex zz = z * z;
    return std::imag((1.0 / pi) * zz * std::log(z)) - 0.25 * std::real(zz);
  }
  double operator()(Complex z) const {
    double u = 0.25 * std::norm(z) + w2(z);
    Complex z2 = z * z;
    Complex p = z2;
    for (int k = 1; k <= 40; ++k, p *= z2) u += c[k - 1] * std::imag(p);
    return u;
  }
};

}  // namespace

TEST_CASE("corner expansion of the loaded quarter disk") {
  QuarterOracle oracle;
  // Frozen analytic values; the numerical transform above must agree.
  REQUIRE(oracle.c[0] == Approx(-3.0 / (4.0 * pi)).margin(1e-8));
  REQUIRE(oracle.c[1] == Approx(0.0).margin(1e-8));
  REQUIRE(oracle.c[2] == Approx(1.0 / (24.0 * pi)).margin(1e-8));

  auto om2 = Opening::from_rational(1, 2);
  auto rhs = AnalyticRHS::constant(1.0);
  auto arc = [&](double th) { return oracle(std::polar(0.5, th)) - 0.25 * 0.25; };
  auto ce = corner_expansion(rhs, om2, 0.5, 12.0, 0.5, arc, 6);

  SECTION("coefficients land in the predicted slots") {
    REQUIRE(ce.a.count(GammaKey::pair(2, 0)) == 1);
    REQUIRE(ce.a.count(GammaKey::pair(0, 2)) == 1);
    REQUIRE(ce.a.count(GammaKey::pair(1, 1)) == 1);
    REQUIRE(ce.a.count(GammaKey::frac(1)) == 1);
    CHECK(ce.a.at(GammaKey::pair(2, 0)).real() == Approx(1.0 / pi).epsilon(1e-10));
    CHECK(ce.a.at(GammaKey::pair(0, 2)).imag() == Approx(-0.25).epsilon(1e-10));
    CHECK(ce.a.at(GammaKey::pair(1, 1)).imag() == Approx(0.25).epsilon(1e-10));
    CHECK(std::abs(ce.a.at(GammaKey::frac(1)).real() - (-3.0 / (4.0 * pi))) < 1e-6);
    if (ce.a.count(GammaKey::frac(2)))
      CHECK(std::abs(ce.a.at(GammaKey::frac(2))) < 1e-6);
    REQUIRE(ce.a.count(GammaKey::frac(3)) == 1);
    CHECK(ce.a.at(GammaKey::frac(3)).real() == Approx(1.0 / (24.0 * pi)).margin(1e-6));
  }
  SECTION("coefficients on the distinguished rays are real") {
    for (auto& [g, a] : ce.a) {
      bool distinguished = g.kind == GammaKey::Kind::Frac || (g.a1 > 0 && g.a2 == 0);
      if (distinguished) CHECK(std::abs(a.imag()) < 1e-12);
    }
  }
  SECTION("field agrees with the oracle inside the half disk") {
    for (Complex z : {std::polar(0.3, 0.7), std::polar(0.45, 1.4), std::polar(0.12, 0.2),
                      std::polar(0.49, 0.05)}) {
      CHECK(ce.eval_u0(z, 12.0) == Approx(oracle(z)).margin(2e-7));
    }
  }
  SECTION("ray traces vanish") {
    for (double rho : {0.2, 0.45}) {
      CHECK(std::abs(ce.eval_u0(Complex(rho, 0), 12.0)) < 1e-10);
      CHECK(std::abs(ce.eval_u0(Complex(0, rho), 12.0)) < 1e-10);
      CHECK(std::abs(ce.packet_degree(2, Complex(rho, 0))) < 1e-14);
      CHECK(std::abs(ce.packet_degree(2, Complex(0, rho))) < 1e-14);
    }
  }
  SECTION("scaled form matches direct evaluation") {
    double eps = 0.1;
    for (Complex T : {std::polar(3.0, 0.7), std::polar(1.2, 1.5), std::polar(4.5, 0.1)}) {
      double direct = ce.eval_u0(eps * T, 12.0);
      double scaled = ce.eval_u0_scaled(eps, T, 12.0);
      CHECK(std::abs(scaled - direct) < 1e-12 * (1.0 + std::abs(direct)));
    }
  }
  SECTION("growth envelope is a genuine bound") {
    REQUIRE(ce.fitC > 0.0);
    REQUIRE(ce.fitM > 0.0);
    for (auto& [g, a] : ce.a)
      CHECK(std::abs(a) <= ce.fitC * std::pow(ce.fitM, g.abs(om2)) * (1.0 + 1e-12));
  }
  SECTION("tail bound decreases with the cutoff") {
    double t4 = ce.tail_bound(0.1, 4.0);
    double t8 = ce.tail_bound(0.1, 8.0);
    CHECK(t8 < t4);
    CHECK(t8 > 0.0);
  }
}

TEST_CASE("remainder-only expansion evaluates a bare corner mode") {
  auto om2 = Opening::from_rational(1, 2);
  auto ce = corner_expansion_remainder_only(om2, 0.0, 4.0, 1.0, {1.0});
  double eps = 0.2;
  Complex T = std::polar(1.5, 0.8);
  double want = std::imag(std::pow(eps * T, 2.0));
  CHECK(ce.eval_u0_scaled(eps, T, 4.0) == Approx(want).epsilon(1e-13));
  CHECK(ce.packet_frac(1, T) == Approx(std::imag(T * T)).epsilon(1e-13));
}

TEST_CASE("every basis term is harmonic") {
  auto om2 = Opening::from_rational(1, 2);
  auto bare2 = build_index_set(om2, 0.0, 6.0);
  auto idx2 = build_index_set(om2, 0.5, 5.0);
  auto odd = Opening::from_value(3.0 * pi / 3.1);
  auto idd = build_index_set(odd, 0.4, 4.0);
  Complex z(0.5, 0.3);
  double h = 1e-3;

  auto frac = [&](Complex w) { return eval_Z(GammaKey::frac(3), w, bare2).imag(); };
  auto logt = [&](Complex w) { return eval_Z(GammaKey::pair(2, 0), w, idx2).imag(); };
  auto ddt = [&](Complex w) { return eval_Z(GammaKey::pair(3, 0), w, idd).imag(); };
  CHECK(std::abs(stencil_lap(frac, z, h)) < 1e-3);
  CHECK(std::abs(stencil_lap(logt, z, h)) < 1e-3);
  CHECK(std::abs(stencil_lap(ddt, z, h)) < 1e-3);
}

TEST_CASE("lateral sum reproduces the boundary data on both rays") {
  // Generic opening, mixed load f = 1 + t1; the per-degree lateral terms must
  // add up to the full trace data on each ray.
  auto om = Opening::from_value(1.2);
  auto idx = build_index_set(om, 0.3, 6.0);
  auto u = particular_interior(AnalyticRHS::from_real_poly({{{0, 0}, 1.0}, {{1, 0}, 1.0}}));
  auto tr = lateral_traces(u, om);
  for (double rho : {0.17, 0.42}) {
    double want0 = 0.0, wantw = 0.0, got0 = 0.0, gotw = 0.0;
    for (int l = 1; l <= tr.degree(); ++l) {
      if (tr.g0[l] == 0.0 && tr.gw[l] == 0.0) continue;
      auto w = lateral_term(l, tr.g0[l], tr.gw[l], idx);
      want0 += tr.g0[l] * std::pow(rho, double(l));
      wantw += tr.gw[l] * std::pow(rho, double(l));
      got0 += w.eval(Complex(rho, 0.0));
      gotw += w.eval(std::polar(rho, om.value));
    }
    CHECK(got0 == Approx(want0).margin(1e-13));
    CHECK(gotw == Approx(wantw).margin(1e-13));
  }
}
