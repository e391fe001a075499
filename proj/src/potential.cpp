#include "s2s/potential.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <sstream>

namespace s2s {

double fundamental(Complex x) {
  if (x == Complex{0.0, 0.0})
    throw std::invalid_argument("fundamental: x = 0");
  return -std::log(std::abs(x)) / (2.0 * pi);
}

Complex fundamental_grad(Complex x) {
  if (x == Complex{0.0, 0.0})
    throw std::invalid_argument("fundamental_grad: x = 0");
  return -x / (2.0 * pi * std::norm(x));
}

namespace {

/// Double layer kernel  n(y).(x - y) / (2 pi |x - y|^2)  =  Re(n/(x-y))/2pi.
/// Vanishes identically when x lies on the straight panel through y.
double dlp_kernel(Complex x, Complex y, Complex n) {
  const Complex z = x - y;
  const double r2 = std::norm(z);
  return (n.real() * z.real() + n.imag() * z.imag()) / (2.0 * pi * r2);
}

/// Gradient of the kernel in x, as a complex vector: -conj(n) / (2pi zbar^2).
Complex dlp_kernel_grad(Complex x, Complex y, Complex n) {
  const Complex zb = std::conj(x - y);
  return -std::conj(n) / (2.0 * pi * zb * zb);
}

struct SegPanels {
  std::vector<double> breaks;  // parameter breakpoints in [0,1]
};

/// Graded breakpoints: exponent q clusters panels toward flagged ends.
SegPanels grade_segment(int n_panels, double q, bool corner_start,
                        bool corner_end) {
  SegPanels sp;
  const int P = n_panels;
  sp.breaks.resize(P + 1);
  if (corner_start && corner_end) {
    const int P1 = P / 2, P2 = P - P1;
    for (int i = 0; i <= P1; ++i)
      sp.breaks[i] = 0.5 * std::pow(double(i) / P1, q);
    for (int j = 1; j <= P2; ++j)
      sp.breaks[P1 + j] = 1.0 - 0.5 * std::pow(double(P2 - j) / P2, q);
  } else if (corner_start) {
    for (int i = 0; i <= P; ++i) sp.breaks[i] = std::pow(double(i) / P, q);
  } else if (corner_end) {
    for (int i = 0; i <= P; ++i)
      sp.breaks[i] = 1.0 - std::pow(double(P - i) / P, q);
  } else {
    for (int i = 0; i <= P; ++i) sp.breaks[i] = double(i) / P;
  }
  return sp;
}

double seg_curvature(const Segment& s) {
  if (std::holds_alternative<LineSeg>(s)) return 0.0;
  const auto& a = std::get<ArcSeg>(s);
  return (a.t1 >= a.t0 ? 1.0 : -1.0) / a.r;
}

/// A junction is a corner when the tangent turns there.
bool tangent_break(Complex t_end, Complex t_next) {
  const Complex r = t_next * std::conj(t_end);
  return std::abs(std::arg(r)) > 1e-9;
}

}  // namespace

double PanelMesh::component_length(int c) const {
  double L = 0;
  for (int i = 0; i < size(); ++i)
    if (comp[i] == c) L += w[i];
  return L;
}

std::vector<int> PanelMesh::component_nodes(int c) const {
  std::vector<int> out;
  for (int i = 0; i < size(); ++i)
    if (comp[i] == c) out.push_back(i);
  return out;
}

bool PanelMesh::pairing_complete() const {
  return std::all_of(pair.begin(), pair.end(),
                     [](int p) { return p >= 0; });
}

std::string PanelMesh::dump() const {
  std::ostringstream os;
  os << "# comp panel x y w nx ny curv pair\n";
  for (int i = 0; i < size(); ++i)
    os << comp[i] << ' ' << panel[i] << ' ' << x[i].real() << ' '
       << x[i].imag() << ' ' << w[i] << ' ' << nrm[i].real() << ' '
       << nrm[i].imag() << ' ' << curv[i] << ' ' << pair[i] << '\n';
  return os.str();
}

PanelMesh discretize(const std::vector<BoundaryCurve>& curves,
                     double panels_per_unit, double grading_exp,
                     int nodes_per_panel) {
  if (!(panels_per_unit > 0))
    throw std::invalid_argument("discretize: panels_per_unit");
  if (!(grading_exp >= 1.0))
    throw std::invalid_argument("discretize: grading exponent < 1");
  if (nodes_per_panel < 2 || nodes_per_panel > 32)
    throw std::invalid_argument("discretize: nodes_per_panel");

  const GaussRule gr = gauss_legendre(nodes_per_panel);
  PanelMesh m;
  int panel_id = 0;
  for (size_t ci = 0; ci < curves.size(); ++ci) {
    const auto& segs = curves[ci].segments;
    if (segs.empty() || !curves[ci].is_closed())
      throw std::invalid_argument("discretize: curve not closed");
    const int S = static_cast<int>(segs.size());
    for (const auto& s : segs)
      if (seg_length(s) < 1e-14)
        throw std::invalid_argument("discretize: zero-length segment");

    // Corner flags at the S junctions (junction j joins segment j to j+1).
    std::vector<bool> corner(S);
    for (int j = 0; j < S; ++j)
      corner[j] = tangent_break(seg_tangent(segs[j], 1.0),
                                seg_tangent(segs[(j + 1) % S], 0.0));

    for (int si = 0; si < S; ++si) {
      const Segment& s = segs[si];
      const double L = seg_length(s);
      const int P = std::max(2, int(std::ceil(panels_per_unit * L)));
      const bool cs = corner[(si + S - 1) % S];
      const bool ce = corner[si];
      const SegPanels sp = grade_segment(P, grading_exp, cs, ce);
      const double kap = seg_curvature(s);
      for (int p = 0; p < P; ++p) {
        const double ta = sp.breaks[p], tb = sp.breaks[p + 1];
        m.panel_len.push_back((tb - ta) * L);
        for (int k = 0; k < nodes_per_panel; ++k) {
          const double t = 0.5 * (ta + tb) + 0.5 * (tb - ta) * gr.x[k];
          const Complex tan = seg_tangent(s, t);
          m.x.push_back(seg_point(s, t));
          m.w.push_back(0.5 * (tb - ta) * L * gr.w[k]);
          m.nrm.push_back(Complex{tan.imag(), -tan.real()});
          m.curv.push_back(kap);
          m.comp.push_back(static_cast<int>(ci));
          m.panel.push_back(panel_id);
        }
        ++panel_id;
      }
    }
  }
  m.n_components = static_cast<int>(curves.size());

  // Reflection pairing by exact mirror matching (sorted sweep on Re x).
  const int N = m.size();
  m.pair.assign(N, -1);
  double scale = 1.0;
  for (const auto& z : m.x) scale = std::max(scale, std::abs(z));
  const double tol = 1e-9 * scale;
  std::vector<int> order(N);
  std::iota(order.begin(), order.end(), 0);
  std::sort(order.begin(), order.end(), [&](int a, int b) {
    return m.x[a].real() < m.x[b].real();
  });
  std::vector<double> re_sorted(N);
  for (int i = 0; i < N; ++i) re_sorted[i] = m.x[order[i]].real();
  for (int i = 0; i < N; ++i) {
    const Complex target = std::conj(m.x[i]);
    auto lo = std::lower_bound(re_sorted.begin(), re_sorted.end(),
                               target.real() - tol);
    int best = -1;
    double bestd = tol;
    for (auto it = lo; it != re_sorted.end() && *it <= target.real() + tol;
         ++it) {
      const int j = order[it - re_sorted.begin()];
      const double d = std::abs(m.x[j] - target);
      if (d < bestd) {
        bestd = d;
        best = j;
      }
    }
    m.pair[i] = best;
  }
  for (int i = 0; i < N; ++i)  // pairing must be an involution
    if (m.pair[i] >= 0 && m.pair[m.pair[i]] != i) m.pair[i] = -1;
  return m;
}

void odd_project(const PanelMesh& m, std::vector<double>& v) {
  std::vector<double> out(v.size(), 0.0);
  for (int i = 0; i < m.size(); ++i)
    if (m.pair[i] >= 0) out[i] = 0.5 * (v[i] - v[m.pair[i]]);
  v = std::move(out);
}

bool is_odd(const PanelMesh& m, const std::vector<double>& v, double tol) {
  double sup = 0, err = 0;
  for (int i = 0; i < m.size(); ++i) {
    sup = std::max(sup, std::abs(v[i]));
    if (m.pair[i] < 0) return false;
    err = std::max(err, std::abs(v[i] + v[m.pair[i]]));
  }
  return err <= tol * std::max(1.0, sup);
}

double component_mean(const PanelMesh& m, const std::vector<double>& v,
                      int c) {
  double s = 0;
  for (int i = 0; i < m.size(); ++i)
    if (m.comp[i] == c) s += m.w[i] * v[i];
  return s;
}

double dlp_eval_one(const PanelMesh& m, const std::vector<double>& phi,
                    Complex target) {
  double s = 0;
  for (int i = 0; i < m.size(); ++i)
    s += phi[i] * dlp_kernel(target, m.x[i], m.nrm[i]) * m.w[i];
  return s;
}

Complex dlp_grad_one(const PanelMesh& m, const std::vector<double>& phi,
                     Complex target) {
  Complex g{0.0, 0.0};
  for (int i = 0; i < m.size(); ++i)
    g += phi[i] * dlp_kernel_grad(target, m.x[i], m.nrm[i]) * m.w[i];
  return g;
}

FieldValues dlp_eval(const PanelMesh& m, const std::vector<double>& phi,
                     const std::vector<Complex>& targets) {
  if (phi.size() != size_t(m.size()))
    throw std::invalid_argument("dlp_eval: density size mismatch");
  FieldValues out;
  out.values.reserve(targets.size());
  out.near_flag.reserve(targets.size());
  for (const Complex& t : targets) {
    bool near = false;
    for (int i = 0; i < m.size(); ++i)
      if (std::abs(t - m.x[i]) < 2.0 * m.panel_len[m.panel[i]]) {
        near = true;
        break;
      }
    out.values.push_back(dlp_eval_one(m, phi, t));
    out.near_flag.push_back(near ? 1 : 0);
  }
  return out;
}

Eigen::MatrixXd assemble_K(const PanelMesh& m) {
  const int N = m.size();
  Eigen::MatrixXd K(N, N);
  for (int i = 0; i < N; ++i)
    for (int j = 0; j < N; ++j)
      K(i, j) = (i == j)
                    ? -m.curv[j] / (4.0 * pi) * m.w[j]
                    : dlp_kernel(m.x[i], m.x[j], m.nrm[j]) * m.w[j];
  return K;
}

double rowsum_defect(const Eigen::MatrixXd& K) {
  return (K.rowwise().sum().array() + 0.5).abs().maxCoeff();
}

namespace {

/// Hager-style lower bound for ||A^{-1}||_1 from an LU factorization.
double inv_norm1_estimate(const Eigen::PartialPivLU<Eigen::MatrixXd>& lu,
                          int n) {
  Eigen::VectorXd x = Eigen::VectorXd::Constant(n, 1.0 / n);
  double est = 0;
  for (int iter = 0; iter < 5; ++iter) {
    Eigen::VectorXd y = lu.solve(x);
    est = y.lpNorm<1>();
    Eigen::VectorXd xi =
        y.array().sign().matrix().eval();
    Eigen::VectorXd z = lu.transpose().solve(xi);
    int j = 0;
    const double zmax = z.cwiseAbs().maxCoeff(&j);
    if (zmax <= z.dot(x) * (1.0 + 1e-12)) break;
    x.setZero();
    x(j) = 1.0;
  }
  return est;
}

}  // namespace

double cond1_estimate(const Eigen::MatrixXd& A,
                      const Eigen::PartialPivLU<Eigen::MatrixXd>& lu) {
  const double a1 = A.cwiseAbs().colwise().sum().maxCoeff();
  return a1 * inv_norm1_estimate(lu, static_cast<int>(A.rows()));
}

double InteriorSolution::operator()(Complex z) const {
  return dlp_eval_one(mesh, mu, z);
}

FieldValues InteriorSolution::eval(const std::vector<Complex>& targets) const {
  return dlp_eval(mesh, mu, targets);
}

InteriorSolution solve_interior_dirichlet(const PanelMesh& m,
                                          const std::vector<double>& g) {
  if (m.n_components != 1)
    throw std::invalid_argument(
        "solve_interior_dirichlet: mesh must be one closed curve");
  const int N = m.size();
  if (g.size() != size_t(N))
    throw std::invalid_argument("solve_interior_dirichlet: data size");
  Eigen::MatrixXd A = assemble_K(m);
  A.diagonal().array() -= 0.5;
  Eigen::PartialPivLU<Eigen::MatrixXd> lu(A);
  const double cond = cond1_estimate(A, lu);
  Eigen::VectorXd rhs(N);
  for (int i = 0; i < N; ++i) rhs(i) = g[i];
  Eigen::VectorXd sol = lu.solve(rhs);
  if (!sol.allFinite() || cond > 1e14)
    throw std::runtime_error(
        "solve_interior_dirichlet: ill-conditioned system, cond est " +
        std::to_string(cond));
  InteriorSolution out;
  out.mesh = m;
  out.mu.assign(sol.data(), sol.data() + N);
  out.cond_est = cond;
  return out;
}

double ExteriorField::eval(Complex x) const {
  return dlp_eval_one(mesh, mu, x) +
         alpha * (fundamental(x - zp) - fundamental(x - zm));
}

Complex ExteriorField::grad(Complex x) const {
  return dlp_grad_one(mesh, mu, x) +
         alpha * (fundamental_grad(x - zp) - fundamental_grad(x - zm));
}

double ExteriorField::flux(Complex center, double r, int n_quad) const {
  double s = 0;
  for (int k = 0; k < n_quad; ++k) {
    const Complex dir = std::polar(1.0, 2.0 * pi * k / n_quad);
    const Complex g = grad(center + r * dir);
    s += g.real() * dir.real() + g.imag() * dir.imag();
  }
  return s * 2.0 * pi * r / n_quad;
}

ExteriorField solve_xi(const PanelMesh& m, int comp_up, int comp_dn) {
  if (m.n_components != 2)
    throw std::invalid_argument("solve_xi: mesh must hold exactly the pair");
  if (comp_up == comp_dn || comp_up < 0 || comp_up >= 2 || comp_dn < 0 ||
      comp_dn >= 2)
    throw std::invalid_argument("solve_xi: component ids");
  if (!m.pairing_complete())
    throw std::invalid_argument("solve_xi: mesh not reflection paired");
  const std::vector<int> up = m.component_nodes(comp_up);
  for (int i : up) {
    if (std::abs(m.x[i].imag()) < 1e-12)
      throw std::invalid_argument("solve_xi: hole touches the axis");
    if (m.comp[m.pair[i]] != comp_dn)
      throw std::invalid_argument("solve_xi: components are not mirrors");
  }

  // Source points: weighted centroids of the two hole boundaries.
  Complex zp{0, 0}, zm{0, 0};
  double Lp = 0;
  for (int i : up) {
    zp += m.w[i] * m.x[i];
    Lp += m.w[i];
  }
  zp /= Lp;
  zm = std::conj(zp);

  // Odd-reduced augmented system: unknowns are the upper-node values and
  // the source strength alpha; the last row is the zero-mean side condition.
  const Eigen::MatrixXd K = assemble_K(m);
  const int n = static_cast<int>(up.size());
  Eigen::MatrixXd A = Eigen::MatrixXd::Zero(n + 1, n + 1);
  Eigen::VectorXd rhs = Eigen::VectorXd::Zero(n + 1);
  for (int i = 0; i < n; ++i) {
    const int ui = up[i];
    for (int j = 0; j < n; ++j) {
      const int uj = up[j];
      A(i, j) = K(ui, uj) - K(ui, m.pair[uj]);
      if (i == j) A(i, j) += 0.5;  // exterior trace is +phi/2 + K phi
    }
    A(i, n) = fundamental(m.x[ui] - zp) - fundamental(m.x[ui] - zm);
    rhs(i) = 1.0;
    A(n, i) = m.w[ui];
  }
  Eigen::PartialPivLU<Eigen::MatrixXd> lu(A);
  const double cond = cond1_estimate(A, lu);
  Eigen::VectorXd sol = lu.solve(rhs);
  if (!sol.allFinite() || cond > 1e12)
    throw std::runtime_error("solve_xi: singular system (holes touching?), cond est " +
                             std::to_string(cond));

  ExteriorField xi;
  xi.mesh = m;
  xi.mu.assign(m.size(), 0.0);
  for (int i = 0; i < n; ++i) {
    xi.mu[up[i]] = sol(i);
    xi.mu[m.pair[up[i]]] = -sol(i);
  }
  xi.alpha = sol(n);
  xi.zp = zp;
  xi.zm = zm;
  xi.cond_est = cond;

  double R_mesh = 0;
  for (const auto& z : m.x) R_mesh = std::max(R_mesh, std::abs(z));
  for (double R : {4.0, 8.0, 16.0, 32.0}) {
    const double rr = R * R_mesh;
    for (int k = 0; k < 32; ++k) {
      const double v =
          std::abs(xi.eval(rr * std::polar(1.0, 2.0 * pi * (k + 0.31) / 32)));
      xi.fitC = std::max(xi.fitC, rr * v);
    }
  }
  return xi;
}

MultipoleCoeffs multipole_coeffs(const std::function<double(Complex)>& field,
                                 double R0, int k_max, double even_tol) {
  if (!(R0 > 0) || k_max < 1)
    throw std::invalid_argument("multipole_coeffs: parameters");
  const int M = std::max(64, 8 * k_max);
  std::vector<double> f(M);
  double fmax = 0;
  for (int j = 0; j < M; ++j) {
    f[j] = field(R0 * std::polar(1.0, 2.0 * pi * j / M));
    fmax = std::max(fmax, std::abs(f[j]));
  }
  MultipoleCoeffs mc;
  mc.R0 = R0;
  mc.w.resize(k_max);
  double even_max = 0;
  {
    double a0 = 0;
    for (int j = 0; j < M; ++j) a0 += f[j];
    even_max = std::abs(a0 / M);
  }
  for (int k = 1; k <= k_max; ++k) {
    double s = 0, c = 0;
    for (int j = 0; j < M; ++j) {
      const double th = 2.0 * pi * j * k / M;
      s += f[j] * std::sin(th);
      c += f[j] * std::cos(th);
    }
    mc.w[k - 1] = 2.0 * s / M;
    even_max = std::max(even_max, std::abs(2.0 * c / M));
  }
  mc.even_residual = fmax > 0 ? even_max / fmax : even_max;
  mc.even_flagged = mc.even_residual > even_tol;
  return mc;
}

double multipole_eval(const MultipoleCoeffs& mc, Complex X) {
  const double R = std::abs(X);
  if (R <= 0) return 0.0;
  const double th = std::atan2(X.imag(), X.real());
  double s = 0;
  for (size_t k = 1; k <= mc.w.size(); ++k)
    s += mc.w[k - 1] * std::pow(R / mc.R0, -double(k)) * std::sin(k * th);
  return s;
}

}  // namespace s2s
