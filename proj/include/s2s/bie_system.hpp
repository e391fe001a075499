#pragma once

#include <utility>
#include <vector>

#include <Eigen/Dense>

#include "s2s/geometry.hpp"
#include "s2s/potential.hpp"

namespace s2s {

/// Discretization of the hole pattern boundary at unit scale. Loops are kept
/// alongside the mesh so pair submeshes (for the dipole fields) can be rebuilt
/// with identical nodes, and so hole membership tests stay available to the
/// evaluators. Normals point out of the holes; every loop is mirror matched
/// node by node within the mesh.
struct QMeshLayout {
  PanelMesh mesh;
  std::vector<BoundaryCurve> loops;              // one per mesh component, as meshed
  std::vector<std::pair<int, int>> mirror_pairs; // (upper comp, lower comp)
  double panels_per_unit = 0;
  double grading_exp = 3.0;
  int nodes_per_panel = 4;
};

/// Mesh the transformed hole pattern: axis-symmetric components contribute
/// their full loop, mirror pairs contribute the upper loop and its reflection.
/// Orientation is normalized so normals point out of each hole.
QMeshLayout mesh_pattern(const TransformedScene& scene, double panels_per_unit,
                         double grading_exp = 3.0, int nodes_per_panel = 4);

/// Mesh the outer circle (radius outer_radius_B, normals pointing out).
PanelMesh mesh_outer(const TransformedScene& scene, double panels_per_unit,
                     double grading_exp = 3.0, int nodes_per_panel = 4);

/// Two-curve coupled system for the perforated disk, reduced to the odd
/// subspace. Unknowns are the upper-half node values of the outer density,
/// the upper-half node values of the hole density, and one dipole strength
/// per mirror pair; lower-half values are the negated mirror images.
///
/// Row blocks collocate the outer equation at upper outer nodes and the hole
/// equation at upper hole nodes; one zero-mean row per mirror pair closes the
/// square system. The diagonal blocks and the dipole trace block do not
/// depend on eta; the coupling blocks vanish at eta = 0.
struct BlockSystem {
  PanelMesh mesh_b;
  QMeshLayout q;
  std::vector<int> up_b, up_q;   // odd-reduced node index lists
  std::vector<ExteriorField> xi; // one dipole field per mirror pair
  double eta = 0;
  double r0 = 0;                 // hole pattern hull radius
  double r1 = 0;                 // min |x| over the outer mesh

  Eigen::MatrixXd m11, m12, m13, m21, m22, m23;
  Eigen::MatrixXd mat;           // assembled square matrix with zero-mean rows

  int n_b() const { return static_cast<int>(up_b.size()); }
  int n_q() const { return static_cast<int>(up_q.size()); }
  int m_sharp() const { return static_cast<int>(q.mirror_pairs.size()); }
  int dim() const { return n_b() + n_q() + m_sharp(); }
};

/// Assemble the coupled system at a given eta. Requires eta * max|Y| over the
/// hole pattern < min|x| over the outer mesh (throws std::invalid_argument
/// otherwise). At eta = 0 every coupling block is exactly zero.
BlockSystem assemble_M(const TransformedScene& scene, double eta,
                       const PanelMesh& mesh_b, const QMeshLayout& q);

/// Solved density pair. phi lives on the outer mesh, Phi on the hole mesh,
/// both odd by construction; c holds one dipole strength per mirror pair.
/// The two evaluation frames agree where both make sense:
///   slow   u(x)       = D_b[phi](x) + W(x / eta)
///   fast   u(eta X)   = -D_q[Phi](X) + D_b[phi](eta X) + sum_j c_j Xi_j(X)
/// with W(X) = -D_q[Phi](X) + sum_j c_j Xi_j(X). At eta = 0 the slow frame
/// is the outer part alone and the fast frame is the hole-scale part alone.
struct SolutionPair {
  double eta = 0;
  std::vector<double> phi, big_phi;
  std::vector<double> c;
  double cond_est = 0;
  bool data_projected = false; // inputs had a detectable even component

  PanelMesh mesh_b;
  PanelMesh mesh_q;
  std::vector<ExteriorField> xi;
  std::vector<BoundaryCurve> q_loops;

  double w_eval(Complex x) const;    // outer part D_b[phi]
  double big_w_eval(Complex X) const; // hole-scale part W
  double eval_slow(Complex x) const;
  double eval_fast(Complex X) const;
};

/// Solve the assembled system for boundary data given as node values (psi on
/// the outer mesh, big_psi on the hole mesh). Data with an even component is
/// projected onto the odd subspace and the projection is flagged.
SolutionPair solve_direct(const BlockSystem& sys, const std::vector<double>& psi,
                          const std::vector<double>& big_psi);

enum class Frame { Slow, Fast };

/// Evaluate at a batch of points in the chosen frame. Points inside a hole
/// (slow frame: x / eta inside a hole; fast frame: X inside a hole) are
/// rejected with std::invalid_argument.
std::vector<double> eval_solution(const SolutionPair& sol,
                                  const std::vector<Complex>& pts, Frame frame);

/// Taylor coefficients of the system matrix in eta: mat(eta) apprx
/// sum_k eta^k coeff[k]. coeff[0] is the decoupled matrix; for k >= 1 only
/// the coupling blocks contribute. The outer->hole block comes from the
/// harmonic expansion of the outer layer potential around the origin, the
/// hole->outer block from the geometric series of the kernel, and the dipole
/// column from the multipole coefficients of each dipole field.
struct TaylorBlocks {
  BlockSystem base;                    // the eta = 0 system
  std::vector<Eigen::MatrixXd> coeff;  // coeff[k], k = 0..order
  std::vector<MultipoleCoeffs> xi_mp;  // multipole data per mirror pair
  double ratio_fit = 0;    // fitted geometric ratio of coefficient norms
  double eta1 = 0;         // reported series radius 0.5 * r1 / max|Y|
  bool growth_flagged = false;

  int order() const { return static_cast<int>(coeff.size()) - 1; }
};

TaylorBlocks taylor_blocks(const TransformedScene& scene, const PanelMesh& mesh_b,
                           const QMeshLayout& q, int order);

/// Coefficient pairs of the perturbation series: solution(eta) apprx
/// sum_n eta^n orders[n], each order an eta-independent density pair obtained
/// from the inverse-free recursion
///   s_0 = M0^-1 d,   s_n = -M0^-1 sum_{k=1..n} Mk s_{n-k}.
/// Evaluation sums eta^n (w_n(x) + W_n(x / eta)).
struct NeumannSeries {
  std::vector<SolutionPair> orders;
  double growth_rate = 0;      // fitted geometric growth of the coefficients
  bool instability_flagged = false;

  double eval_slow(double eta, Complex x, int n_terms = -1) const;
  double eval_fast(double eta, Complex X, int n_terms = -1) const;
};

/// Run the recursion up to the Taylor order of tb (throws
/// std::invalid_argument for n_terms beyond it).
NeumannSeries neumann_series(const TaylorBlocks& tb, const std::vector<double>& psi,
                             const std::vector<double>& big_psi, int n_terms);

}  // namespace s2s
