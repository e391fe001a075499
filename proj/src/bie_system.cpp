#include "s2s/bie_system.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>
#include <variant>

namespace s2s {

namespace {

/// Signed area of a closed loop, positive for counterclockwise traversal.
/// Green's theorem, exact for lines and arcs.
double loop_signed_area(const BoundaryCurve& loop) {
  double a2 = 0;  // accumulates the contour integral of cross(x, dx)
  for (const auto& seg : loop.segments) {
    if (std::holds_alternative<LineSeg>(seg)) {
      const auto& l = std::get<LineSeg>(seg);
      a2 += l.a.real() * l.b.imag() - l.a.imag() * l.b.real();
    } else {
      const auto& c = std::get<ArcSeg>(seg);
      const Complex de = std::polar(1.0, c.t1) - std::polar(1.0, c.t0);
      a2 += c.r * (std::conj(c.c) * de * Complex(0, -1)).real();
      a2 += c.r * c.r * (c.t1 - c.t0);
    }
  }
  return 0.5 * a2;
}

BoundaryCurve oriented_ccw(const BoundaryCurve& loop) {
  return loop_signed_area(loop) >= 0 ? loop : loop.reversed();
}

/// n . grad E(x - y); the double layer kernel is its negative.
double normal_grad_e(Complex x, Complex y, Complex n) {
  const Complex z = x - y;
  return -(n.real() * z.real() + n.imag() * z.imag()) / (2.0 * pi * std::norm(z));
}

Complex ipow(Complex z, int k) {
  Complex r(1, 0);
  for (int i = 0; i < k; ++i) r *= z;
  return r;
}

std::vector<int> upper_nodes(const PanelMesh& m) {
  std::vector<int> up;
  for (int i = 0; i < m.size(); ++i)
    if (m.x[i].imag() > 0) up.push_back(i);
  return up;
}

/// Odd-project the data and restrict it to the reduced unknowns; flags a
/// detectable even component.
Eigen::VectorXd reduced_data(const BlockSystem& sys, const std::vector<double>& psi,
                             const std::vector<double>& big_psi, bool* projected) {
  if (static_cast<int>(psi.size()) != sys.mesh_b.size() ||
      static_cast<int>(big_psi.size()) != sys.q.mesh.size())
    throw std::invalid_argument("solve: data length does not match the meshes");
  std::vector<double> po = psi, bo = big_psi;
  odd_project(sys.mesh_b, po);
  odd_project(sys.q.mesh, bo);
  double scale = 0, leak = 0;
  for (size_t i = 0; i < psi.size(); ++i) {
    scale = std::max(scale, std::abs(psi[i]));
    leak = std::max(leak, std::abs(psi[i] - po[i]));
  }
  for (size_t i = 0; i < big_psi.size(); ++i) {
    scale = std::max(scale, std::abs(big_psi[i]));
    leak = std::max(leak, std::abs(big_psi[i] - bo[i]));
  }
  *projected = leak > 1e-10 * std::max(1.0, scale);
  const int nb = sys.n_b(), nq = sys.n_q();
  Eigen::VectorXd d = Eigen::VectorXd::Zero(sys.dim());
  for (int a = 0; a < nb; ++a) d(a) = po[sys.up_b[a]];
  for (int a = 0; a < nq; ++a) d(nb + a) = bo[sys.up_q[a]];
  return d;
}

/// Expand a reduced solution vector into a full odd density pair.
SolutionPair unpack(const BlockSystem& sys, const Eigen::VectorXd& s, double eta,
                    double cond, bool projected) {
  SolutionPair sol;
  sol.eta = eta;
  sol.cond_est = cond;
  sol.data_projected = projected;
  sol.mesh_b = sys.mesh_b;
  sol.mesh_q = sys.q.mesh;
  sol.xi = sys.xi;
  sol.q_loops = sys.q.loops;
  const int nb = sys.n_b(), nq = sys.n_q(), ms = sys.m_sharp();
  sol.phi.assign(sys.mesh_b.size(), 0.0);
  for (int a = 0; a < nb; ++a) {
    const int i = sys.up_b[a];
    sol.phi[i] = s(a);
    sol.phi[sys.mesh_b.pair[i]] = -s(a);
  }
  sol.big_phi.assign(sys.q.mesh.size(), 0.0);
  for (int a = 0; a < nq; ++a) {
    const int i = sys.up_q[a];
    sol.big_phi[i] = s(nb + a);
    sol.big_phi[sys.q.mesh.pair[i]] = -s(nb + a);
  }
  sol.c.assign(ms, 0.0);
  for (int j = 0; j < ms; ++j) sol.c[j] = s(nb + nq + j);
  return sol;
}

}  // namespace

QMeshLayout mesh_pattern(const TransformedScene& scene, double panels_per_unit,
                         double grading_exp, int nodes_per_panel) {
  QMeshLayout q;
  q.panels_per_unit = panels_per_unit;
  q.grading_exp = grading_exp;
  q.nodes_per_panel = nodes_per_panel;
  for (const auto& comp : scene.components) {
    if (comp.kind == ComponentKind::AxisSymmetric) {
      q.loops.push_back(oriented_ccw(comp.full));
    } else {
      const int cu = static_cast<int>(q.loops.size());
      q.loops.push_back(oriented_ccw(comp.upper_curve));
      q.loops.push_back(oriented_ccw(comp.upper_curve.reflected()));
      q.mirror_pairs.emplace_back(cu, cu + 1);
    }
  }
  if (q.loops.empty())
    throw std::invalid_argument("mesh_pattern: scene has no holes");
  q.mesh = discretize(q.loops, panels_per_unit, grading_exp, nodes_per_panel);
  if (!q.mesh.pairing_complete())
    throw std::invalid_argument("mesh_pattern: hole mesh is not mirror symmetric");
  return q;
}

PanelMesh mesh_outer(const TransformedScene& scene, double panels_per_unit,
                     double grading_exp, int nodes_per_panel) {
  return discretize({disk_curve(Complex(0, 0), scene.outer_radius_B)},
                    panels_per_unit, grading_exp, nodes_per_panel);
}

BlockSystem assemble_M(const TransformedScene& scene, double eta,
                       const PanelMesh& mesh_b, const QMeshLayout& q) {
  if (!(eta >= 0))
    throw std::invalid_argument("assemble_M: eta must be nonnegative");
  if (!mesh_b.pairing_complete() || mesh_b.n_components != 1)
    throw std::invalid_argument(
        "assemble_M: outer mesh must be one mirror-symmetric curve");
  if (!q.mesh.pairing_complete())
    throw std::invalid_argument("assemble_M: hole mesh is not mirror symmetric");

  BlockSystem s;
  s.mesh_b = mesh_b;
  s.q = q;
  s.eta = eta;
  s.r0 = scene.pattern_radius();
  s.r1 = std::numeric_limits<double>::infinity();
  for (const Complex& x : mesh_b.x) s.r1 = std::min(s.r1, std::abs(x));
  double maxy = 0;
  for (const Complex& y : q.mesh.x) maxy = std::max(maxy, std::abs(y));
  if (eta > 0 && eta * maxy >= s.r1)
    throw std::invalid_argument(
        "assemble_M: scaled holes reach the outer circle at this eta");

  s.up_b = upper_nodes(mesh_b);
  s.up_q = upper_nodes(q.mesh);
  if (2 * static_cast<int>(s.up_b.size()) != mesh_b.size() ||
      2 * static_cast<int>(s.up_q.size()) != q.mesh.size())
    throw std::invalid_argument("assemble_M: meshes must have no axis nodes");

  // One dipole field per mirror pair, solved on the pair alone at unit scale.
  for (const auto& pr : q.mirror_pairs) {
    PanelMesh pm = discretize({q.loops[pr.first], q.loops[pr.second]},
                              q.panels_per_unit, q.grading_exp, q.nodes_per_panel);
    s.xi.push_back(solve_xi(pm, 0, 1));
  }

  const int nb = s.n_b(), nq = s.n_q(), ms = s.m_sharp();
  const Eigen::MatrixXd kb = assemble_K(mesh_b);
  const Eigen::MatrixXd kq = assemble_K(q.mesh);

  // Reduction to the odd subspace: the column for an upper node carries its
  // own kernel value minus the mirror node's (the lower value is the negated
  // upper one), rows collocate at upper nodes only.
  auto reduce = [](const Eigen::MatrixXd& full, const std::vector<int>& rows,
                   const std::vector<int>& cols, const std::vector<int>& pair) {
    Eigen::MatrixXd r(rows.size(), cols.size());
    for (size_t a = 0; a < rows.size(); ++a)
      for (size_t b = 0; b < cols.size(); ++b)
        r(a, b) = full(rows[a], cols[b]) - full(rows[a], pair[cols[b]]);
    return r;
  };

  s.m11 = reduce(kb, s.up_b, s.up_b, mesh_b.pair);
  s.m11.diagonal().array() -= 0.5;
  s.m22 = -reduce(kq, s.up_q, s.up_q, q.mesh.pair);
  s.m22.diagonal().array() -= 0.5;

  s.m23.resize(nq, ms);
  for (int j = 0; j < ms; ++j) {
    const int cu = q.mirror_pairs[j].first, cd = q.mirror_pairs[j].second;
    for (int a = 0; a < nq; ++a) {
      const int i = s.up_q[a];
      const int comp = q.mesh.comp[i];
      // own pair: the boundary trace is the prescribed +1 / -1 exactly
      s.m23(a, j) =
          comp == cu ? 1.0 : (comp == cd ? -1.0 : s.xi[j].eval(q.mesh.x[i]));
    }
  }

  s.m12 = Eigen::MatrixXd::Zero(nb, nq);
  s.m21 = Eigen::MatrixXd::Zero(nq, nb);
  s.m13 = Eigen::MatrixXd::Zero(nb, ms);
  if (eta > 0) {
    for (int a = 0; a < nb; ++a) {
      const Complex x = mesh_b.x[s.up_b[a]];
      for (int b = 0; b < nq; ++b) {
        const int j = s.up_q[b], jm = q.mesh.pair[j];
        s.m12(a, b) =
            eta * (normal_grad_e(x, eta * q.mesh.x[j], q.mesh.nrm[j]) * q.mesh.w[j] -
                   normal_grad_e(x, eta * q.mesh.x[jm], q.mesh.nrm[jm]) * q.mesh.w[jm]);
      }
      for (int j = 0; j < ms; ++j) s.m13(a, j) = s.xi[j].eval(x / eta);
    }
    for (int a = 0; a < nq; ++a) {
      const Complex p = eta * q.mesh.x[s.up_q[a]];
      for (int b = 0; b < nb; ++b) {
        const int j = s.up_b[b], jm = mesh_b.pair[j];
        // double layer of the outer density at the scaled hole node
        s.m21(a, b) =
            -normal_grad_e(p, mesh_b.x[j], mesh_b.nrm[j]) * mesh_b.w[j] +
            normal_grad_e(p, mesh_b.x[jm], mesh_b.nrm[jm]) * mesh_b.w[jm];
      }
    }
  }

  const int dim = s.dim();
  s.mat = Eigen::MatrixXd::Zero(dim, dim);
  s.mat.topLeftCorner(nb, nb) = s.m11;
  s.mat.block(0, nb, nb, nq) = s.m12;
  s.mat.block(nb, 0, nq, nb) = s.m21;
  s.mat.block(nb, nb, nq, nq) = s.m22;
  if (ms > 0) {
    s.mat.block(0, nb + nq, nb, ms) = s.m13;
    s.mat.block(nb, nb + nq, nq, ms) = s.m23;
    for (int j = 0; j < ms; ++j) {
      const int cu = q.mirror_pairs[j].first;
      for (int b = 0; b < nq; ++b)
        if (q.mesh.comp[s.up_q[b]] == cu)
          s.mat(nb + nq + j, nb + b) = q.mesh.w[s.up_q[b]];
    }
  }
  return s;
}

double SolutionPair::w_eval(Complex x) const {
  return dlp_eval_one(mesh_b, phi, x);
}

double SolutionPair::big_w_eval(Complex X) const {
  double v = -dlp_eval_one(mesh_q, big_phi, X);
  for (size_t j = 0; j < xi.size(); ++j) v += c[j] * xi[j].eval(X);
  return v;
}

double SolutionPair::eval_slow(Complex x) const {
  return eta > 0 ? w_eval(x) + big_w_eval(x / eta) : w_eval(x);
}

double SolutionPair::eval_fast(Complex X) const {
  return big_w_eval(X) + w_eval(eta * X);
}

SolutionPair solve_direct(const BlockSystem& sys, const std::vector<double>& psi,
                          const std::vector<double>& big_psi) {
  bool projected = false;
  const Eigen::VectorXd d = reduced_data(sys, psi, big_psi, &projected);
  Eigen::PartialPivLU<Eigen::MatrixXd> lu(sys.mat);
  const Eigen::VectorXd s = lu.solve(d);
  const double cond = cond1_estimate(sys.mat, lu);
  if (!s.allFinite() || cond > 1e14)
    throw std::runtime_error("solve_direct: system is numerically singular");
  return unpack(sys, s, sys.eta, cond, projected);
}

std::vector<double> eval_solution(const SolutionPair& sol,
                                  const std::vector<Complex>& pts, Frame frame) {
  std::vector<double> out;
  out.reserve(pts.size());
  for (const Complex& p : pts) {
    if (frame == Frame::Fast || sol.eta > 0) {
      const Complex hc = frame == Frame::Fast ? p : p / sol.eta;
      for (const auto& loop : sol.q_loops)
        if (loop.contains(hc))
          throw std::invalid_argument("eval_solution: point inside a hole");
    }
    out.push_back(frame == Frame::Fast ? sol.eval_fast(p) : sol.eval_slow(p));
  }
  return out;
}

TaylorBlocks taylor_blocks(const TransformedScene& scene, const PanelMesh& mesh_b,
                           const QMeshLayout& q, int order) {
  if (order < 0)
    throw std::invalid_argument("taylor_blocks: order must be nonnegative");
  TaylorBlocks tb;
  tb.base = assemble_M(scene, 0.0, mesh_b, q);
  const BlockSystem& bs = tb.base;
  const int nb = bs.n_b(), nq = bs.n_q(), ms = bs.m_sharp(), dim = bs.dim();
  double maxy = 0;
  for (const Complex& y : q.mesh.x) maxy = std::max(maxy, std::abs(y));
  tb.eta1 = 0.5 * bs.r1 / maxy;
  tb.coeff.push_back(bs.mat);

  if (order >= 1) {
    for (int j = 0; j < ms; ++j) {
      double hull = 0;
      for (const Complex& y : bs.xi[j].mesh.x) hull = std::max(hull, std::abs(y));
      const ExteriorField& f = bs.xi[j];
      // Sample off the holes; the normalization radius cancels against the
      // R0^k factor in the coefficient entries.
      tb.xi_mp.push_back(multipole_coeffs(
          [&f](Complex X) { return f.eval(X); }, 1.3 * hull, order));
    }
  }

  for (int k = 1; k <= order; ++k) {
    Eigen::MatrixXd mk = Eigen::MatrixXd::Zero(dim, dim);

    // holes -> outer circle: geometric series of 1/(x - eta Y) in eta,
    // mirror-folded columns; the explicit eta factor shifts orders by one
    std::vector<Complex> cy(nq);
    for (int b = 0; b < nq; ++b) {
      const int j = bs.up_q[b], jm = q.mesh.pair[j];
      cy[b] = q.mesh.w[j] * q.mesh.nrm[j] * ipow(q.mesh.x[j], k - 1) -
              q.mesh.w[jm] * q.mesh.nrm[jm] * ipow(q.mesh.x[jm], k - 1);
    }
    for (int a = 0; a < nb; ++a) {
      const Complex xk = ipow(mesh_b.x[bs.up_b[a]], k);
      for (int b = 0; b < nq; ++b)
        mk(a, nb + b) = -(cy[b] / xk).real() / (2.0 * pi);
    }

    // outer circle -> holes: harmonic expansion of the outer layer potential
    // around the origin, order k term
    std::vector<Complex> cb(nb);
    for (int b = 0; b < nb; ++b) {
      const int j = bs.up_b[b], jm = mesh_b.pair[j];
      cb[b] = mesh_b.w[j] * mesh_b.nrm[j] / ipow(mesh_b.x[j], k + 1) -
              mesh_b.w[jm] * mesh_b.nrm[jm] / ipow(mesh_b.x[jm], k + 1);
    }
    for (int a = 0; a < nq; ++a) {
      const Complex Xk = ipow(q.mesh.x[bs.up_q[a]], k);
      for (int b = 0; b < nb; ++b)
        mk(nb + a, b) = -(cb[b] * Xk).real() / (2.0 * pi);
    }

    // dipole columns: mode k of each pair field, rescaled to the slow frame
    for (int j = 0; j < ms; ++j) {
      const double wk =
          k - 1 < static_cast<int>(tb.xi_mp[j].w.size()) ? tb.xi_mp[j].w[k - 1] : 0.0;
      const double R0 = tb.xi_mp[j].R0;
      for (int a = 0; a < nb; ++a) {
        const Complex x = mesh_b.x[bs.up_b[a]];
        mk(a, nb + nq + j) =
            wk * std::pow(R0 / std::abs(x), k) * std::sin(k * std::arg(x));
      }
    }
    tb.coeff.push_back(mk);
  }

  bool finite = true;
  for (const auto& m : tb.coeff) finite = finite && m.allFinite();
  if (order >= 2) {
    // least squares slope of log ||M_k|| against k gives the geometric ratio
    double sk = 0, sy = 0, skk = 0, sky = 0;
    for (int k = 1; k <= order; ++k) {
      const double y = std::log(tb.coeff[k].norm() + 1e-300);
      sk += k;
      sy += y;
      skk += k * static_cast<double>(k);
      sky += k * y;
    }
    const double n = order;
    tb.ratio_fit = std::exp((n * sky - sk * sy) / (n * skk - sk * sk));
  }
  tb.growth_flagged =
      !finite || (tb.ratio_fit > 1.25 * bs.r0 / bs.r1 && order >= 2);
  return tb;
}

double NeumannSeries::eval_slow(double eta, Complex x, int n_terms) const {
  const int last = n_terms < 0 ? static_cast<int>(orders.size()) - 1
                               : std::min<int>(n_terms, orders.size() - 1);
  double u = 0, p = 1;
  for (int n = 0; n <= last; ++n, p *= eta)
    u += p * (orders[n].w_eval(x) +
              (eta > 0 ? orders[n].big_w_eval(x / eta) : 0.0));
  return u;
}

double NeumannSeries::eval_fast(double eta, Complex X, int n_terms) const {
  const int last = n_terms < 0 ? static_cast<int>(orders.size()) - 1
                               : std::min<int>(n_terms, orders.size() - 1);
  double u = 0, p = 1;
  for (int n = 0; n <= last; ++n, p *= eta)
    u += p * (orders[n].big_w_eval(X) + orders[n].w_eval(eta * X));
  return u;
}

NeumannSeries neumann_series(const TaylorBlocks& tb, const std::vector<double>& psi,
                             const std::vector<double>& big_psi, int n_terms) {
  if (n_terms < 0 || n_terms > tb.order())
    throw std::invalid_argument(
        "neumann_series: requested order exceeds the Taylor data");
  bool projected = false;
  const Eigen::VectorXd d = reduced_data(tb.base, psi, big_psi, &projected);
  Eigen::PartialPivLU<Eigen::MatrixXd> lu(tb.base.mat);
  const double cond = cond1_estimate(tb.base.mat, lu);
  if (cond > 1e14)
    throw std::runtime_error("neumann_series: decoupled system is singular");

  std::vector<Eigen::VectorXd> s(n_terms + 1);
  s[0] = lu.solve(d);
  for (int n = 1; n <= n_terms; ++n) {
    Eigen::VectorXd acc = Eigen::VectorXd::Zero(tb.base.dim());
    for (int k = 1; k <= n; ++k) acc.noalias() += tb.coeff[k] * s[n - k];
    s[n] = lu.solve(-acc);
  }

  NeumannSeries out;
  for (int n = 0; n <= n_terms; ++n)
    out.orders.push_back(unpack(tb.base, s[n], 0.0, cond, projected));
  if (n_terms >= 2) {
    // paired norms sidestep identically vanishing odd orders
    const double tail = s[n_terms].norm() + s[n_terms - 1].norm();
    const double head = s[0].norm() + s[1].norm();
    out.growth_rate =
        std::pow((tail + 1e-300) / (head + 1e-300), 1.0 / (n_terms - 1));
  }
  out.instability_flagged = tb.eta1 > 0 && out.growth_rate > 1.0 / tb.eta1;
  return out;
}

}  // namespace s2s
