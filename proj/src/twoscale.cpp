#include "s2s/twoscale.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <set>
#include <stdexcept>

#include <nlohmann/json.hpp>

namespace s2s {

namespace {

// Least-squares slope of y against x; 0 when degenerate.
double ls_slope(const std::vector<std::pair<double, double>>& pts) {
  if (pts.size() < 2) return 0;
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  for (auto [x, y] : pts) {
    sx += x;
    sy += y;
    sxx += x * x;
    sxy += x * y;
  }
  double n = double(pts.size());
  double den = n * sxx - sx * sx;
  if (den <= 1e-14 * (sxx + 1)) return 0;
  return (n * sxy - sx * sy) / den;
}

// Envelope fit sup <= C M^g over (g, sup) samples.
void fit_cm(const std::vector<std::pair<double, double>>& grade_sup, double& C,
            double& M) {
  std::vector<std::pair<double, double>> pts;
  for (auto [g, s] : grade_sup)
    if (s > 1e-300) pts.push_back({g, std::log(s)});
  if (pts.empty()) {
    C = 0;
    M = 1;
    return;
  }
  M = std::exp(std::clamp(ls_slope(pts), -30.0, 30.0));
  C = 0;
  for (auto [g, ls] : pts) C = std::max(C, std::exp(ls) * std::pow(M, -g));
}

double packet_value(const CornerExpansion& ce, const GammaKey& g, Complex T) {
  if (g.kind == GammaKey::Kind::Frac) return ce.packet_frac(g.k, T);
  if (g.a1 == 0 && g.a2 > 0) return ce.packet_degree(g.a2, T);
  if (g.a2 == 0 && g.a1 > 0) return ce.packet_resonant(g.a1, T);
  return 0;
}

const double golden = 0.6180339887498949;

std::string frame_name(EvalFrame f) {
  switch (f) {
    case EvalFrame::Global: return "global";
    case EvalFrame::Outer: return "outer";
    default: return "inner";
  }
}

}  // namespace

// Deterministic low-discrepancy probes in the sector annulus [r_lo, r_hi]:
// geometric radii, golden-angle arguments kept off both rays.
std::vector<Complex> study_probes(double r_lo, double r_hi, double omega,
                                  int n) {
  std::vector<Complex> pts;
  pts.reserve(n);
  for (int j = 0; j < n; ++j) {
    double s = (j + 0.5) / n;
    double r = r_lo * std::pow(r_hi / r_lo, s);
    double frac = std::fmod((j + 1) * golden, 1.0);
    double th = omega * (0.08 + 0.84 * frac);
    pts.push_back(std::polar(r, th));
  }
  return pts;
}

double UnperturbedSolution::u0(Complex z) const {
  return u_f.eval_real(z) + correction(z);
}

double UnperturbedSolution::correction_value(Complex z) const {
  return correction(z);
}

std::function<double(double)> UnperturbedSolution::arc() const {
  InteriorSolution corr = correction;
  ComplexPoly uf = u_f;
  double r = rho1p;
  double om = scene.omega.value;
  return [corr = std::move(corr), uf, r, om](double theta) {
    // On the rays the layer hits its own Dirichlet data -u_f; the quadrature
    // sum is unusable there, the limit is exact.
    if (theta < 1e-9 || theta > om - 1e-9)
      return -uf.eval_real(std::polar(r, std::clamp(theta, 0.0, om)));
    return corr(std::polar(r, theta));
  };
}

CornerExpansion UnperturbedSolution::expand(double delta_omega,
                                            double gamma_max, int K) const {
  return corner_expansion(f, scene.omega, delta_omega, gamma_max, rho1p, arc(),
                          K);
}

double UnperturbedSolution::trace_residual() const {
  const PanelMesh& m = correction.mesh;
  Eigen::MatrixXd K = assemble_K(m);
  Eigen::VectorXd mu(m.size());
  for (int i = 0; i < m.size(); ++i) mu[i] = correction.mu[i];
  Eigen::VectorXd tr = K * mu - 0.5 * mu;
  double worst = 0;
  for (int i = 0; i < m.size(); ++i)
    worst = std::max(worst, std::abs(u_f.eval_real(m.x[i]) + tr[i]));
  return worst;
}

double UnperturbedSolution::laplacian_defect(Complex z, double h) const {
  double lap = (u0(z + h) + u0(z - h) + u0(z + Complex(0, h)) +
                u0(z - Complex(0, h)) - 4.0 * u0(z)) /
               (h * h);
  return std::abs(lap - f.f.eval_real(z));
}

UnperturbedSolution solve_unperturbed(const SectorScene& scene,
                                      const AnalyticRHS& f,
                                      double panels_per_unit, double rho1p) {
  if (rho1p <= 0) rho1p = 0.7 * scene.outer_radius;
  if (rho1p >= scene.outer_radius)
    throw std::invalid_argument("arc radius must lie inside the sector");
  UnperturbedSolution out;
  out.scene = scene;
  out.f = f;
  out.u_f = particular_interior(f);
  out.rho1p = rho1p;
  BoundaryCurve bnd = pie_slice_curve(scene.outer_radius, scene.omega.value);
  PanelMesh m = discretize({bnd}, panels_per_unit);
  std::vector<double> g(m.size());
  for (int i = 0; i < m.size(); ++i) g[i] = -out.u_f.eval_real(m.x[i]);
  out.correction = solve_interior_dirichlet(m, g);
  return out;
}

const TraceSlot* TraceFamily::find(const GammaKey& g) const {
  for (const auto& s : slots)
    if (s.gamma == g) return &s;
  return nullptr;
}

double TraceFamily::packet(const GammaKey& g, Complex T) const {
  return packet_value(corner, g, T);
}

TraceFamily push_traces(const CornerExpansion& exp,
                        const TransformedScene& scene, const QMeshLayout& q) {
  const double kappa = exp.omega.kappa();
  if (std::abs(scene.kappa - kappa) > 1e-12 * (1 + kappa))
    throw std::invalid_argument("scene and expansion disagree on the angle");

  // Slot keys: one per pure sector mode, one per integer degree, one per
  // regrouped resonant index. Conjugate-pair coefficients ride inside their
  // degree packet.
  std::set<GammaKey> keys;
  for (const auto& [g, a] : exp.a) {
    if (g.kind == GammaKey::Kind::Frac) {
      keys.insert(g);
    } else {
      keys.insert(GammaKey::pair(0, g.a1 + g.a2));
      if (g.a2 == 0 && exp.idx.is_resonant(g.a1)) keys.insert(g);
    }
  }

  TraceFamily fam;
  fam.corner = exp;
  fam.q = q;
  const PanelMesh& m = q.mesh;
  for (const GammaKey& g : keys) {
    TraceSlot slot;
    slot.gamma = g;
    slot.psi.assign(m.size(), 0.0);
    for (int i = 0; i < m.size(); ++i) {
      if (m.x[i].imag() <= 0) continue;
      Complex T = conformal_power_map(m.x[i], 1.0 / kappa);
      slot.psi[i] = packet_value(exp, g, T);
    }
    for (int i = 0; i < m.size(); ++i) {
      if (m.x[i].imag() >= 0) continue;
      if (m.pair[i] < 0)
        throw std::invalid_argument("hole mesh is not reflection paired");
      slot.psi[i] = -slot.psi[m.pair[i]];
    }
    for (double v : slot.psi) slot.sup = std::max(slot.sup, std::abs(v));
    fam.slots.push_back(std::move(slot));
  }

  std::vector<std::pair<double, double>> grade_sup;
  for (const auto& s : fam.slots)
    grade_sup.push_back({s.gamma.abs(exp.omega), s.sup});
  fit_cm(grade_sup, fam.fitC, fam.fitM);
  return fam;
}

double TwoScaleExpansion::u0_at(Complex t) const {
  if (u0_full) return u0_full(t);
  return corner.eval_u0(t, corner.gamma_max);
}

const TwoScaleTerm* TwoScaleExpansion::find(int n, const GammaKey& g) const {
  for (const auto& t : terms)
    if (t.n == n && t.gamma == g) return &t;
  return nullptr;
}

double TwoScaleExpansion::weight(const TwoScaleTerm& term, double eps) const {
  return std::pow(eps, double(term.n) * kappa()) *
         eval_E(term.gamma, eps, corner.idx);
}

double TwoScaleExpansion::v_at(const TwoScaleTerm& term, Complex t) const {
  return term.sol.w_eval(conformal_power_map(t, kappa()));
}

double TwoScaleExpansion::V_at(const TwoScaleTerm& term, Complex T) const {
  return term.sol.big_w_eval(conformal_power_map(T, kappa()));
}

double TwoScaleExpansion::uS_at(int n, const GammaKey& g, Complex t) const {
  Complex X = conformal_power_map(t, kappa());
  double R = std::abs(X), th = std::arg(X);
  double s = 0;
  if (const TwoScaleTerm* tm = find(n, g)) s += tm->sol.w_eval(X);
  for (int k = 1; k <= n; ++k) {
    const TwoScaleTerm* tm = find(n - k, g);
    if (!tm || k > int(tm->mp.w.size())) continue;
    s += tm->mp.w[k - 1] * std::pow(tm->mp.R0 / R, k) * std::sin(k * th);
  }
  return s;
}

double TwoScaleExpansion::uF_at(int n, const GammaKey& g, Complex T) const {
  Complex X = conformal_power_map(T, kappa());
  double R = std::abs(X), th = std::arg(X);
  double s = 0;
  if (n == 0) s += packet_value(corner, g, T);
  if (const TwoScaleTerm* tm = find(n, g)) s += tm->sol.big_w_eval(X);
  for (int k = 1; k <= n; ++k) {
    const TwoScaleTerm* tm = find(n - k, g);
    if (!tm || k > int(tm->slow_sine.size())) continue;
    s += tm->slow_sine[k - 1] * std::pow(R / tm->rs, k) * std::sin(k * th);
  }
  return s;
}

double TwoScaleExpansion::tail_estimate(double eps, double cutoff) const {
  if (eps <= 0) return 0;
  double tail = 0;
  for (const auto& t : terms)
    if (t.exponent > cutoff + 1e-9)
      tail += std::abs(weight(t, eps)) * std::max(t.sup_slow, t.sup_fast);
  // Uncomputed range: grades above n_max + gamma_max, geometric closure in
  // the exponent lattice with spacing s and linear multiplicity.
  double s = std::min(1.0, kappa());
  double r = std::pow(fitM, 1.0 / s) * eps;
  if (r >= 1) return tail + 1e300;
  double e_next =
      std::min(double(n_max + 1) * kappa() + s, gamma_max + s);
  e_next = std::max(e_next, cutoff + 1e-9);
  long m0 = long(std::floor(e_next / s)) + 1;
  double q = std::pow(r, s), qm = std::pow(r, double(m0) * s);
  double uncomputed =
      fitC * qm * ((double(m0) + 3) / (1 - q) + q / ((1 - q) * (1 - q)));
  return (tail + uncomputed) * (1 + std::abs(std::log(eps)));
}

TwoScaleExpansion two_scale_coeffs(const TraceFamily& traces,
                                   const TaylorBlocks& tb, int n_max,
                                   double gamma_max,
                                   std::function<double(Complex)> u0_full) {
  if (n_max < 0 || n_max > tb.order())
    throw std::invalid_argument("order outside the Taylor range");
  if (gamma_max <= 0) throw std::invalid_argument("gamma_max must be > 0");
  if (traces.q.mesh.size() != tb.base.q.mesh.size())
    throw std::invalid_argument("trace family and system use different meshes");

  TwoScaleExpansion ts;
  ts.corner = traces.corner;
  ts.tb = tb;
  ts.u0_full = std::move(u0_full);
  ts.n_max = n_max;
  ts.gamma_max = gamma_max;
  ts.hull_X = tb.base.r0;
  const double kappa = ts.kappa();
  ts.hull_P = std::pow(ts.hull_X, 1.0 / kappa);

  const double r1 = tb.base.r1;
  const double rs = 0.7 * r1;
  const double R0 = 1.3 * ts.hull_X;
  const int k_modes = std::max(1, n_max);
  const int ring_n = 256;

  std::vector<double> psi0(tb.base.mesh_b.size(), 0.0);
  for (const TraceSlot& slot : traces.slots) {
    if (slot.gamma.abs(ts.corner.omega) > gamma_max + 1e-9) continue;
    std::vector<double> data(slot.psi.size());
    for (size_t i = 0; i < data.size(); ++i) data[i] = -slot.psi[i];
    NeumannSeries ns = neumann_series(tb, psi0, data, n_max);
    for (int n = 0; n <= n_max; ++n) {
      TwoScaleTerm term;
      term.n = n;
      term.gamma = slot.gamma;
      term.exponent = n * kappa + slot.gamma.abs(ts.corner.omega);
      term.sol = ns.orders[n];
      term.rs = rs;
      term.slow_sine.assign(k_modes, 0.0);
      for (int j = 0; j < ring_n; ++j) {
        double th = 2 * pi * (j + 0.5) / ring_n;
        double v = term.sol.w_eval(std::polar(rs, th));
        for (int k = 1; k <= k_modes; ++k)
          term.slow_sine[k - 1] += 2.0 / ring_n * v * std::sin(k * th);
      }
      term.mp = multipole_coeffs(
          [&term](Complex X) { return term.sol.big_w_eval(X); }, R0, k_modes);
      for (int j = 0; j < 64; ++j) {
        double th = 2 * pi * (j + 0.5) / 64;
        term.sup_slow = std::max(
            term.sup_slow, std::abs(term.sol.w_eval(std::polar(0.5 * r1, th))));
        term.sup_fast = std::max(
            term.sup_fast,
            std::abs(term.sol.big_w_eval(std::polar(1.4 * ts.hull_X, th))));
      }
      ts.terms.push_back(std::move(term));
    }
  }

  std::sort(ts.terms.begin(), ts.terms.end(),
            [](const TwoScaleTerm& a, const TwoScaleTerm& b) {
              if (a.exponent != b.exponent) return a.exponent < b.exponent;
              if (a.n != b.n) return a.n < b.n;
              return a.gamma < b.gamma;
            });

  std::vector<std::pair<double, double>> grade_sup;
  for (const auto& t : ts.terms)
    grade_sup.push_back({t.n + t.gamma.abs(ts.corner.omega),
                         std::max(t.sup_slow, t.sup_fast)});
  fit_cm(grade_sup, ts.fitC, ts.fitM);
  return ts;
}

ExpansionValue eval_expansion(const TwoScaleExpansion& ts, double eps,
                              Complex point, EvalFrame frame, double cutoff) {
  if (eps < 0) throw std::invalid_argument("eps must be >= 0");
  const double kappa = ts.kappa();
  if (eps == 0) {
    if (frame == EvalFrame::Inner) return {0.0, 0.0};
    return {ts.u0_at(point), 0.0};
  }
  const double eta = std::pow(eps, kappa);
  const double r1 = ts.tb.base.r1;
  Complex X = conformal_power_map(point, kappa);
  ExpansionValue out;
  out.tail = ts.tail_estimate(eps, cutoff);

  auto inside_hole = [&](Complex Y) {
    for (const auto& loop : ts.tb.base.q.loops)
      if (loop.contains(Y)) return true;
    return false;
  };

  if (frame == EvalFrame::Inner) {
    if (std::abs(X) * eta > 0.999 * r1)
      throw std::invalid_argument("fast point leaves the sector at this eps");
    if (inside_hole(X))
      throw std::invalid_argument("fast point lies inside a hole");
    // Fast layers are normalized on the ring |X| = 1.4 hull_X; the packet
    // part grows like |T|^|gamma| beyond it, so outside the ring the omitted
    // exponents see an effective eps |T| / T_ring.
    double t_ring = std::pow(1.4 * ts.hull_X, 1.0 / kappa);
    out.tail = ts.tail_estimate(
        eps * std::max(1.0, std::abs(point) / t_ring), cutoff);
    std::set<GammaKey> keys;
    for (const auto& t : ts.terms) keys.insert(t.gamma);
    for (int n = 0; n <= ts.n_max; ++n)
      for (const GammaKey& g : keys) {
        double e = n * kappa + g.abs(ts.corner.omega);
        if (e > cutoff + 1e-9) continue;
        out.value += std::pow(eps, double(n) * kappa) *
                     eval_E(g, eps, ts.corner.idx) * ts.uF_at(n, g, point);
      }
    return out;
  }

  if (std::abs(X) > r1 * (1 + 1e-9))
    throw std::invalid_argument("point outside the sector radius");
  if (inside_hole(X / eta))
    throw std::invalid_argument("point lies inside a hole");
  out.value = ts.u0_at(point);

  if (frame == EvalFrame::Global) {
    for (const auto& t : ts.terms) {
      if (t.exponent > cutoff + 1e-9) continue;
      out.value += ts.weight(t, eps) *
                   (t.sol.w_eval(X) + t.sol.big_w_eval(X / eta));
    }
    return out;
  }

  if (std::abs(X) <= eta * ts.hull_X * 1.02)
    throw std::invalid_argument("outer point inside the hole hull");
  // The regrouped hole images form a ladder in (eta R0 / |X|)^k; near the
  // hull edge that ratio, not eps, controls the omitted exponents, so feed
  // the closure an effective eps matching it.
  {
    double R0 = ts.terms.empty() ? 1.3 * ts.hull_X : ts.terms.front().mp.R0;
    double s = std::min(1.0, kappa);
    double ladder = std::pow(eta * R0 / std::abs(X), 1.0 / kappa);
    double eps_eff =
        std::max(eps, ladder / std::max(std::pow(ts.fitM, 1.0 / s), 1e-12));
    out.tail = ts.tail_estimate(eps_eff, cutoff);
  }
  std::set<GammaKey> keys;
  for (const auto& t : ts.terms) keys.insert(t.gamma);
  for (int n = 1; n <= ts.n_max; ++n)
    for (const GammaKey& g : keys) {
      double e = n * kappa + g.abs(ts.corner.omega);
      if (e > cutoff + 1e-9) continue;
      out.value += std::pow(eps, double(n) * kappa) *
                   eval_E(g, eps, ts.corner.idx) * ts.uS_at(n, g, point);
    }
  return out;
}

std::string expansion_manifest(const TwoScaleExpansion& ts) {
  nlohmann::json j;
  j["kappa"] = ts.kappa();
  j["n_max"] = ts.n_max;
  j["gamma_max"] = ts.gamma_max;
  j["hull"] = {{"transformed", ts.hull_X}, {"sector", ts.hull_P}};
  j["fit"] = {{"C", ts.fitC}, {"M", ts.fitM}};
  j["terms"] = nlohmann::json::array();
  for (const auto& t : ts.terms) {
    nlohmann::json g;
    if (t.gamma.kind == GammaKey::Kind::Frac) {
      g = {{"kind", "frac"}, {"k", t.gamma.k}};
    } else {
      g = {{"kind", "pair"}, {"a1", t.gamma.a1}, {"a2", t.gamma.a2}};
    }
    j["terms"].push_back({{"n", t.n},
                          {"gamma", g},
                          {"exponent", t.exponent},
                          {"sup_slow", t.sup_slow},
                          {"sup_fast", t.sup_fast}});
  }
  return j.dump(2);
}

std::string StudyTable::csv() const {
  std::string out = "eps,order,frame,sup_error,slope\n";
  char buf[160];
  for (const auto& r : rows) {
    std::snprintf(buf, sizeof(buf), "%.12g,%.12g,%s,%.12g,%.12g\n", r.eps,
                  r.order, frame_name(r.frame).c_str(), r.sup_error, r.slope);
    out += buf;
  }
  return out;
}

StudyTable convergence_study_prepared(const TwoScaleExpansion& ts,
                                      const TraceFamily& traces,
                                      const TransformedScene& scene,
                                      const std::vector<double>& eps_list,
                                      const std::vector<double>& cutoffs,
                                      int n_probes, const StudyParams& p) {
  StudyTable table;
  if (eps_list.empty() || cutoffs.empty() || n_probes <= 0) return table;
  const double kappa = ts.kappa();
  const double omega = ts.corner.omega.value;
  const double r1 = ts.tb.base.r1;
  const double c2 = p.c2 > 0 ? p.c2 : 0.9 * ts.corner.rho1p;

  double eps_max = *std::max_element(eps_list.begin(), eps_list.end());
  double inner_hi = std::min(3.0 * ts.hull_P,
                             0.95 * std::pow(r1 / std::pow(eps_max, kappa),
                                             1.0 / kappa));
  std::vector<Complex> inner_pts =
      study_probes(1.2 * ts.hull_P, inner_hi, omega, n_probes);

  struct Ref {
    SolutionPair sol;
    std::vector<Complex> outer_pts;
    std::vector<double> ref_outer, ref_inner;
  };
  std::vector<Ref> refs;
  std::vector<double> psi0(ts.tb.base.mesh_b.size(), 0.0);
  for (double eps : eps_list) {
    Ref r;
    double eta = std::pow(eps, kappa);
    BlockSystem sys = assemble_M(scene, eta, ts.tb.base.mesh_b, ts.tb.base.q);
    std::vector<double> data(traces.q.mesh.size(), 0.0);
    for (const TraceSlot& slot : traces.slots) {
      double w = eval_E(slot.gamma, eps, traces.corner.idx);
      for (size_t i = 0; i < data.size(); ++i) data[i] -= w * slot.psi[i];
    }
    r.sol = solve_direct(sys, psi0, data);
    r.outer_pts = study_probes(p.c1 * ts.hull_P * eps, c2, omega, n_probes);
    for (Complex t : r.outer_pts)
      r.ref_outer.push_back(ts.u0_at(t) +
                            r.sol.eval_slow(conformal_power_map(t, kappa)));
    for (Complex T : inner_pts)
      r.ref_inner.push_back(
          ts.corner.eval_u0_scaled(eps, T, ts.corner.gamma_max) +
          r.sol.eval_fast(conformal_power_map(T, kappa)));
    refs.push_back(std::move(r));
  }

  for (double cut : cutoffs) {
    for (EvalFrame frame :
         {EvalFrame::Global, EvalFrame::Outer, EvalFrame::Inner}) {
      size_t first = table.rows.size();
      std::vector<std::pair<double, double>> loglog;
      for (size_t ie = 0; ie < eps_list.size(); ++ie) {
        double eps = eps_list[ie];
        const Ref& r = refs[ie];
        double sup = 0;
        if (frame == EvalFrame::Inner) {
          for (size_t j = 0; j < inner_pts.size(); ++j) {
            double v = eval_expansion(ts, eps, inner_pts[j], frame, cut).value;
            sup = std::max(sup, std::abs(v - r.ref_inner[j]));
          }
        } else {
          for (size_t j = 0; j < r.outer_pts.size(); ++j) {
            double v =
                eval_expansion(ts, eps, r.outer_pts[j], frame, cut).value;
            sup = std::max(sup, std::abs(v - r.ref_outer[j]));
          }
        }
        table.rows.push_back({eps, cut, frame, sup, 0.0});
        if (sup > 0) loglog.push_back({std::log(eps), std::log(sup)});
      }
      double slope = ls_slope(loglog);
      for (size_t j = first; j < table.rows.size(); ++j)
        table.rows[j].slope = slope;
    }
  }
  return table;
}

StudyTable convergence_study(const SectorScene& scene, const AnalyticRHS& f,
                             const std::vector<double>& eps_list,
                             const std::vector<double>& cutoffs, int n_probes,
                             const StudyParams& p) {
  StudyTable empty;
  if (eps_list.empty() || cutoffs.empty() || n_probes <= 0) return empty;
  TransformedScene tsc = transform_scene(scene, p.refit);
  UnperturbedSolution u0 = solve_unperturbed(scene, f, p.ppu_A, p.rho1p);
  double max_cut = *std::max_element(cutoffs.begin(), cutoffs.end());
  double gamma_max = max_cut + p.gamma_pad;
  CornerExpansion corner = u0.expand(p.delta_omega, gamma_max);
  PanelMesh mesh_b = mesh_outer(tsc, p.ppu_B);
  QMeshLayout q = mesh_pattern(tsc, p.ppu_Q);
  int order = p.taylor_order >= 0
                  ? p.taylor_order
                  : std::max(2, int(std::ceil(max_cut / tsc.kappa)));
  TaylorBlocks tb = taylor_blocks(tsc, mesh_b, q, order);
  TraceFamily traces = push_traces(corner, tsc, q);
  // Hybrid unperturbed evaluator: near the corner the quadrature of the layer
  // solve degrades while the resummed series is at its best, so switch there.
  CornerExpansion deep =
      gamma_max >= 8.0 ? corner : u0.expand(p.delta_omega, 8.0);
  double r_switch = 0.3 * u0.rho1p;
  TwoScaleExpansion ts = two_scale_coeffs(
      traces, tb, order, gamma_max, [u0, deep, r_switch](Complex t) {
        if (std::abs(t) < r_switch) return deep.eval_u0(t, deep.gamma_max);
        return u0.u0(t);
      });
  return convergence_study_prepared(ts, traces, tsc, eps_list, cutoffs,
                                    n_probes, p);
}

}  // namespace s2s
