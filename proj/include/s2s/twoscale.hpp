#pragma once

#include <functional>
#include <string>
#include <vector>

#include "s2s/bie_system.hpp"
#include "s2s/cornerseries.hpp"
#include "s2s/geometry.hpp"
#include "s2s/potential.hpp"

namespace s2s {

/// Solution of the unperforated sector problem Delta u0 = f, u0 = 0 on the
/// sector boundary, split as u0 = u_f + (harmonic correction). The correction
/// carries boundary data -u_f and is represented by a layer density on the
/// sector boundary; the arc sampler at rho1p feeds the corner expansion.
struct UnperturbedSolution {
  SectorScene scene;
  AnalyticRHS f;
  ComplexPoly u_f;
  InteriorSolution correction;  // u0 - u_f, layer density on the sector boundary
  double rho1p = 0;             // arc sampling radius for the remainder modes

  double u0(Complex z) const;
  /// (u0 - u_f)(z), the harmonic correction field.
  double correction_value(Complex z) const;
  /// theta -> (u0 - u_f)(rho1p e^{i theta}), the input to corner_expansion.
  std::function<double(double)> arc() const;
  /// Corner expansion of u0 with the given regrouping window and depth.
  CornerExpansion expand(double delta_omega, double gamma_max, int K = 0) const;

  /// Discrete trace of u0 on the boundary mesh via the interior jump limit:
  /// max_i |u_f(x_i) + (-mu/2 + K mu)_i|. Certifies the data wiring; the
  /// solve leaves only the linear-algebra residual here.
  double trace_residual() const;
  /// |five-point Laplacian of u0 at z - f(z)| with step h.
  double laplacian_defect(Complex z, double h = 1e-3) const;
};

/// Solve the unperturbed problem on the (unperforated) sector. rho1p <= 0
/// picks the default 0.7 * outer_radius; the radius must stay clear of the
/// boundary by a few panel lengths for the arc samples to be trustworthy.
UnperturbedSolution solve_unperturbed(const SectorScene& scene,
                                      const AnalyticRHS& f,
                                      double panels_per_unit = 12.0,
                                      double rho1p = 0);

/// One pushed trace: the packet Phi_gamma of the corner expansion pulled to
/// the transformed hole boundary, Psi_gamma(X) = Phi_gamma(X^{1/kappa}) on
/// the upper half and its odd extension below.
struct TraceSlot {
  GammaKey gamma;
  std::vector<double> psi;  // node values on the hole mesh, odd
  double sup = 0;
};

/// All pushed traces for one corner expansion on one hole mesh. The corner
/// expansion travels with the family so downstream consumers can evaluate
/// the fast-variable packets and the scale factors E_gamma.
struct TraceFamily {
  CornerExpansion corner;
  QMeshLayout q;
  std::vector<TraceSlot> slots;
  double fitC = 0, fitM = 1;  // sup <= C M^{|gamma|} envelope

  const TraceSlot* find(const GammaKey& g) const;
  /// Packet Phi_gamma evaluated in the fast sector variable T.
  double packet(const GammaKey& g, Complex T) const;
};

/// Evaluate every packet of the expansion on the hole mesh and odd-extend.
/// Slots exist for the pure sector exponents, one per integer degree, and
/// one per regrouped near-resonant index; conjugate-pair indices other than
/// those carry no slot of their own.
TraceFamily push_traces(const CornerExpansion& exp, const TransformedScene& scene,
                        const QMeshLayout& q);

/// One (n, gamma) coefficient of the two-scale series: the order-n response
/// of the hole-scale system to the pushed trace -Psi_gamma, together with
/// the harmonic re-expansions used by the regrouped outer and inner sums.
struct TwoScaleTerm {
  int n = 0;
  GammaKey gamma;
  double exponent = 0;  // n * kappa + |gamma|

  SolutionPair sol;  // L_n(0, -Psi_gamma): slow part on B, fast part on Q-complement

  /// Interior modes of the slow part: w(x) = sum_k b[k-1] (|x|/rs)^k sin(k arg x).
  std::vector<double> slow_sine;
  double rs = 0;
  /// Multipole modes of the fast part: W(X) = sum_k w[k-1] (|X|/R0)^{-k} sin(k arg X).
  MultipoleCoeffs mp;

  double sup_slow = 0, sup_fast = 0;  // probe-ring sups, growth diagnostics
};

struct ExpansionValue {
  double value = 0;
  double tail = 0;  // crude estimate of the omitted part
};

enum class EvalFrame { Global, Outer, Inner };

/// The assembled two-scale expansion
///   u_eps(t) = u0(t) + sum_{n,gamma} eps^{n kappa} E_gamma(eps)
///              [ v_{n gamma}(t) + V_{n gamma}(t / eps) ]
/// with v = w o G_kappa and V = W o G_kappa. The outer form regroups the
/// multipole tails of V into slow functions (its n = 0 layer vanishes); the
/// inner form pairs V with the fast-variable packets of u0 and the interior
/// re-expansion of the slow parts.
struct TwoScaleExpansion {
  CornerExpansion corner;
  TaylorBlocks tb;  // geometry, meshes, and the eta structure of the system
  std::function<double(Complex)> u0_full;  // optional exact u0; corner resum otherwise
  int n_max = 0;
  double gamma_max = 0;
  double hull_X = 0;  // hole pattern hull, transformed plane
  double hull_P = 0;  // hull_X^{1/kappa}, sector plane
  std::vector<TwoScaleTerm> terms;  // sorted by (exponent, n, gamma)
  double fitC = 0, fitM = 1;  // sup <= C M^{n+|gamma|} envelope

  double kappa() const { return corner.omega.kappa(); }
  double u0_at(Complex t) const;
  const TwoScaleTerm* find(int n, const GammaKey& g) const;
  /// eps^{n kappa} E_gamma(eps); the series weight of one term.
  double weight(const TwoScaleTerm& term, double eps) const;

  /// Slow coefficient v_{n gamma}(t) = w_{n gamma}(t^kappa).
  double v_at(const TwoScaleTerm& term, Complex t) const;
  /// Fast coefficient V_{n gamma}(T) = W_{n gamma}(T^kappa).
  double V_at(const TwoScaleTerm& term, Complex T) const;
  /// Regrouped outer coefficient u^S_{n gamma}(t): the slow part plus the
  /// multipole tails of the lower-order fast parts.
  double uS_at(int n, const GammaKey& g, Complex t) const;
  /// Regrouped inner coefficient U^F_{n gamma}(T): the packet layer (n = 0),
  /// the fast part, and the interior modes of the lower-order slow parts.
  double uF_at(int n, const GammaKey& g, Complex T) const;

  /// Sum of |weight| * sup over computed terms above the cutoff plus a
  /// geometric bound for the uncomputed range; reported, not certified.
  double tail_estimate(double eps, double cutoff) const;
};

/// Build the expansion: one perturbation series per trace slot, re-expanded
/// for the regrouped frames. u0_full, when given, backs the global and outer
/// evaluations exactly; otherwise the corner resummation stands in (valid
/// near the corner only).
TwoScaleExpansion two_scale_coeffs(const TraceFamily& traces,
                                   const TaylorBlocks& tb, int n_max,
                                   double gamma_max,
                                   std::function<double(Complex)> u0_full = {});

/// Evaluate the truncated expansion. The cutoff is exponent-based: terms
/// with n kappa + |gamma| <= cutoff enter, ordered by exponent with ties on
/// n first. Global and outer take a sector point t, inner takes the fast
/// variable T. Points inside a hole, outside the sector radius, or (outer)
/// inside the hole hull are rejected with std::invalid_argument.
ExpansionValue eval_expansion(const TwoScaleExpansion& ts, double eps,
                              Complex point, EvalFrame frame, double cutoff);

/// JSON manifest of the expansion: kappa, depths, growth fit, and one entry
/// per term with its index, exponent, and coefficient sups.
std::string expansion_manifest(const TwoScaleExpansion& ts);

struct StudyParams {
  double delta_omega = 0.15;
  double gamma_pad = 3.0;   // corner depth = max cutoff + pad
  int taylor_order = -1;    // -1: derived from the cutoffs
  double ppu_A = 12.0;      // sector boundary mesh density (u0 solve)
  double ppu_B = 8.0;       // outer circle density
  double ppu_Q = 12.0;      // hole pattern density
  int refit = 24;           // power-map polyline refit
  double rho1p = 0;         // 0: default arc radius
  double c1 = 1.3;          // outer probes start at c1 * hull_P * eps
  double c2 = 0;            // outer probes end; 0: 0.9 * rho1p
};

struct StudyRow {
  double eps = 0;
  double order = 0;  // exponent cutoff
  EvalFrame frame = EvalFrame::Global;
  double sup_error = 0;
  double slope = 0;  // log-log eps slope of this (order, frame) group
};

/// Deterministic low-discrepancy probes in the sector annulus [r_lo, r_hi]:
/// geometric radii, golden-angle arguments kept off both rays.
std::vector<Complex> study_probes(double r_lo, double r_hi, double omega,
                                  int n);

struct StudyTable {
  std::vector<StudyRow> rows;
  /// UTF-8 CSV with header eps,order,frame,sup_error,slope.
  std::string csv() const;
};

/// Truncation study against the direct reference: for each eps the reference
/// solves the hole-scale system at eta with the full pushed trace, and each
/// (cutoff, frame) row records the sup difference over deterministic probe
/// sets in the outer annulus {c1 hull eps <= |t| <= c2} and the inner
/// annulus {1.2 hull <= |T| <= 3 hull}.
StudyTable convergence_study_prepared(const TwoScaleExpansion& ts,
                                      const TraceFamily& traces,
                                      const TransformedScene& scene,
                                      const std::vector<double>& eps_list,
                                      const std::vector<double>& cutoffs,
                                      int n_probes, const StudyParams& p = {});

/// Full pipeline on a sector scene: unperturbed solve, corner expansion,
/// transformed meshes, trace push, series build, then the prepared study.
StudyTable convergence_study(const SectorScene& scene, const AnalyticRHS& f,
                             const std::vector<double>& eps_list,
                             const std::vector<double>& cutoffs, int n_probes,
                             const StudyParams& p = {});

}  // namespace s2s
