#pragma once

#include <Eigen/Dense>
#include <functional>
#include <string>
#include <vector>

#include "s2s/geometry.hpp"
#include "s2s/util.hpp"

namespace s2s {

/// Fundamental solution of -Laplace, E(x) = -(1/2pi) log|x|.
double fundamental(Complex x);
/// grad E(x) = -x / (2 pi |x|^2).
Complex fundamental_grad(Complex x);

/// Composite Gauss-Legendre discretization of a family of closed curves.
///
/// Curves are meshed exactly as given: the normal at a node is the unit
/// tangent rotated by -pi/2, which for a counterclockwise curve points out
/// of the enclosed region. A perforated-domain mesh therefore passes its
/// hole curves reversed(), so that all normals leave the domain.
struct PanelMesh {
  std::vector<Complex> x;      // quadrature nodes
  std::vector<double> w;       // arclength weights
  std::vector<Complex> nrm;    // unit normals
  std::vector<double> curv;    // signed curvature in the traversal frame
  std::vector<int> comp;       // closed-component id per node
  std::vector<int> panel;      // panel id per node
  std::vector<double> panel_len;  // arclength per panel
  std::vector<int> pair;       // reflection pairing, -1 where unmatched
  int n_components = 0;

  int size() const { return static_cast<int>(x.size()); }
  double component_length(int c) const;
  std::vector<int> component_nodes(int c) const;
  bool pairing_complete() const;
  /// One line per node, for debugging dumps.
  std::string dump() const;
};

/// panels_per_unit panels per unit arclength on each segment (at least two
/// per segment), nodes_per_panel Gauss nodes each. Panels are graded with
/// exponent q toward segment junctions where the tangent turns.
PanelMesh discretize(const std::vector<BoundaryCurve>& curves,
                     double panels_per_unit, double grading_exp = 3.0,
                     int nodes_per_panel = 4);

/// Odd part  v <- (v - v o pair)/2; nodes without a partner are zeroed.
void odd_project(const PanelMesh& m, std::vector<double>& v);
bool is_odd(const PanelMesh& m, const std::vector<double>& v,
            double tol = 1e-12);
/// Weighted mean  sum w_i v_i over one closed component.
double component_mean(const PanelMesh& m, const std::vector<double>& v,
                      int c);

struct FieldValues {
  std::vector<double> values;
  std::vector<char> near_flag;  // target closer than two panel lengths
};

/// Double layer potential  D[phi](x) = -sum phi_i n_i . grad E(x - y_i) w_i
/// at off-curve targets. Accuracy degrades within ~2 panel lengths of the
/// curve; such targets are flagged, not refused.
FieldValues dlp_eval(const PanelMesh& m, const std::vector<double>& phi,
                     const std::vector<Complex>& targets);
double dlp_eval_one(const PanelMesh& m, const std::vector<double>& phi,
                    Complex target);
/// Gradient of the double layer potential at an off-curve target.
Complex dlp_grad_one(const PanelMesh& m, const std::vector<double>& phi,
                     Complex target);

/// Nystrom matrix of the trace-average operator K. Off-diagonal entries are
/// kernel values times weights; the diagonal carries the curvature limit
/// -curv/(4 pi) (zero on straight panels, where the kernel vanishes
/// identically).
Eigen::MatrixXd assemble_K(const PanelMesh& m);

/// Diagnostic for the identity K[1] = -1/2: max_i |row_i sum + 1/2|.
double rowsum_defect(const Eigen::MatrixXd& K);

/// 1-norm condition estimate of a factored square matrix (Hager's bound
/// for the inverse norm).
double cond1_estimate(const Eigen::MatrixXd& A,
                      const Eigen::PartialPivLU<Eigen::MatrixXd>& lu);

struct InteriorSolution {
  PanelMesh mesh;
  std::vector<double> mu;  // (-I/2 + K) mu = g
  double cond_est = 0;     // 1-norm condition estimate of the solve
  double operator()(Complex x) const;
  FieldValues eval(const std::vector<Complex>& targets) const;
};

/// Dirichlet problem on the region enclosed by a single closed curve,
/// solved as the boundary integral equation (-I/2 + K) mu = g; the field is
/// D[mu] inside. g holds one value per mesh node.
InteriorSolution solve_interior_dirichlet(const PanelMesh& m,
                                          const std::vector<double>& g);

/// Bounded exterior field with traces +1 / -1 on a mirror pair of holes:
/// D[mu] plus a log source pair alpha (E(.-zp) - E(.-zm)) that carries the
/// flux a pure double layer cannot.
struct ExteriorField {
  PanelMesh mesh;           // the pair's boundary, normals out of the holes
  std::vector<double> mu;   // odd, zero mean on the upper component
  double alpha = 0;
  Complex zp, zm;           // source points inside the holes
  double cond_est = 0;
  double fitC = 0;          // fitted decay envelope |value| <= fitC / R

  double eval(Complex x) const;
  Complex grad(Complex x) const;
  /// Flux of the field through a circle of radius r around center; equals
  /// -alpha when the circle encloses exactly the upper hole.
  double flux(Complex center, double r, int n_quad = 256) const;
};

/// Solves for the exterior field of the mirror pair (comp_up, comp_dn).
/// The mesh must consist of exactly these two components, reflection
/// paired, both strictly off the axis.
ExteriorField solve_xi(const PanelMesh& m, int comp_up, int comp_dn);

struct MultipoleCoeffs {
  std::vector<double> w;     // w[k-1] multiplies (R/R0)^{-k} sin k theta
  double R0 = 1;
  double even_residual = 0;  // largest cosine-mode amplitude, relative
  bool even_flagged = false;
};

/// Sine-Fourier analysis of an odd decaying harmonic field on the circle
/// R = R0. A relative even-mode residual above even_tol trips the flag.
MultipoleCoeffs multipole_coeffs(const std::function<double(Complex)>& field,
                                 double R0, int k_max,
                                 double even_tol = 1e-6);
/// Truncated multipole sum at X (valid for |X| >= R0).
double multipole_eval(const MultipoleCoeffs& mc, Complex X);

}  // namespace s2s
