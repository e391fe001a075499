#pragma once

#include <functional>
#include <map>
#include <vector>

#include "s2s/geometry.hpp"
#include "s2s/util.hpp"

namespace s2s {

/// Polynomial in zeta and conj(zeta) with complex coefficients;
/// key = (power of zeta, power of conj(zeta)).
struct ComplexPoly {
  std::map<std::pair<int, int>, Complex> c;

  Complex eval(Complex z) const;
  double eval_real(Complex z) const { return eval(z).real(); }
  /// 4 d^2/(dzeta dzbar), the Laplacian in conjugate coordinates.
  ComplexPoly laplacian() const;
  int degree() const;
};

/// Right-hand side near the corner: a polynomial in (t1, t2), held in the
/// conjugate-coordinate basis together with a coefficient majorant
/// |f_alpha| <= C M^{|alpha|}.
struct AnalyticRHS {
  ComplexPoly f;
  double C = 0, M = 1;

  /// Build from real-basis coefficients {(a,b) -> coeff of t1^a t2^b}.
  static AnalyticRHS from_real_poly(const std::map<std::pair<int, int>, double>& re);
  static AnalyticRHS constant(double v);
  static AnalyticRHS zero();
};

/// Polynomial particular solution of Delta u = f built termwise:
/// f_alpha zeta^a zbar^b picks up the factor 1/(4(a+1)(b+1)) and one extra
/// power of each variable. The result is real-valued for real f.
ComplexPoly particular_interior(const AnalyticRHS& rhs);

/// Ray restrictions of -u_f by total degree: g0[l] on theta = 0 and
/// gw[l] on theta = omega are the coefficients of rho^l.
struct LateralData {
  std::vector<double> g0, gw;
  int degree() const { return int(g0.size()) - 1; }
};

LateralData lateral_traces(const ComplexPoly& uf, const Opening& omega);

/// Entry of the near-resonant set: dist(ell*omega, pi N_*) <= delta_omega,
/// paired with k = round(ell*omega/pi); exact when ell*omega = k*pi holds in
/// the declared-rational sense.
struct ResonantEntry {
  long ell = 0;
  long k = 0;
  bool exact = false;
  double gamma_prime = 0;  // k pi / omega
};

struct IndexSet {
  Opening omega;
  double delta_omega = 0;
  double gamma_max = 0;
  std::vector<ResonantEntry> resonant;

  const ResonantEntry* find(long ell) const;
  bool is_resonant(long ell) const { return find(ell) != nullptr; }
};

/// delta_omega must lie in (0, min(omega, pi)/2), or be 0 to disable
/// regrouping; the pairing ell <-> k is checked injective.
IndexSet build_index_set(const Opening& omega, double delta_omega,
                         double gamma_max);

enum class LateralKind { Plain, Log, DividedDiff };

/// Homogeneous-degree lateral solution w_l: harmonic, matches the degree-l
/// ray data of -u_f on both sides.
struct LateralTerm {
  long ell = 0;
  LateralKind kind = LateralKind::Plain;
  double a = 0, b = 0;
  long k = 0;              // paired resonance (Log/DividedDiff)
  double gamma_prime = 0;  // k pi / omega

  double eval(Complex z) const;
};

LateralTerm lateral_term(long ell, double g0, double gw, const IndexSet& idx);

/// Index into the expansion basis: either the pure sector exponent
/// gamma = k pi/omega (Frac) or a conjugate-coordinate pair (a1, a2).
struct GammaKey {
  enum class Kind { Frac, Pair } kind = Kind::Pair;
  long k = 0;
  long a1 = 0, a2 = 0;

  static GammaKey frac(long k) { return {Kind::Frac, k, 0, 0}; }
  static GammaKey pair(long a1, long a2) { return {Kind::Pair, 0, a1, a2}; }
  double abs(const Opening& omega) const;
  auto operator<=>(const GammaKey&) const = default;
};

/// Basis function Z_gamma on the sector branch: zeta^gamma (Frac),
/// zeta^a1 zbar^a2, and for near-resonant (l, 0) the log solution
/// zeta^l log zeta (exact resonance) or the divided power
/// (zeta^l - zeta^{k pi/omega})/(l - k pi/omega). Log evaluation at 0 is
/// rejected; all other members vanish at 0.
Complex eval_Z(const GammaKey& g, Complex z, const IndexSet& idx);

/// Scale factor family E_gamma(eps): eps^|gamma| off the resonant set;
/// eps^l log eps or the divided power in eps on it. eps < 0 is rejected
/// everywhere, eps = 0 on the log branch too; elsewhere eps = 0 gives 0.
double eval_E(const GammaKey& g, double eps, const IndexSet& idx);

/// Sine-series analysis of an arc trace at rho = rho1p: coefficients c_k of
/// Im zeta^{k pi/omega} such that the trace equals sum c_k rho1p^{k pi/omega}
/// sin(k pi theta / omega). Sampled at 4 K equispaced interior nodes
/// (discrete sine transform, exact on pure modes below Nyquist). The trace
/// must vanish at both ends within endpoint_tol (relative).
std::vector<double> remainder_coeffs(const std::function<double(double)>& arc,
                                     const Opening& omega, double rho1p, int K,
                                     double endpoint_tol = 1e-5);

struct CornerExpansion {
  Opening omega;
  IndexSet idx;
  double gamma_max = 0;
  double rho1p = 0;
  std::map<GammaKey, Complex> a;
  double fitC = 0, fitM = 1;  // envelope |a_gamma| <= C M^|gamma|

  /// Im sum over |gamma| <= cut of a_gamma Z_gamma(z).
  double eval_u0(Complex z, double cut) const;
  /// Same value arranged as sum_gamma E_gamma(eps) * packet(T), the scaled
  /// form used to push traces to the fast variable; z = eps * T.
  double eval_u0_scaled(double eps, Complex T, double cut) const;
  /// Packet value Phi_gamma(T) for a trace-family slot (see twoscale).
  double packet_frac(long k, Complex T) const;
  double packet_degree(long ell, Complex T) const;
  double packet_resonant(long ell, Complex T) const;
  /// Tail bound sum_{|gamma| > cut} C (M rho)^{|gamma|} (geometric estimate).
  double tail_bound(double rho, double cut) const;
  void fit_envelope();
};

/// Assembles the corner expansion of u0 = u_f + u_d + u_rm: interior part
/// from the right-hand side, lateral terms per degree, remainder from the
/// sine analysis of arc(theta) - u_d at rho = rho1p, where `arc` samples
/// u0 - u_f. K defaults to enough modes to cover gamma_max.
CornerExpansion corner_expansion(const AnalyticRHS& rhs, const Opening& omega,
                                 double delta_omega, double gamma_max,
                                 double rho1p,
                                 const std::function<double(double)>& arc,
                                 int K = 0);

/// Variant with prescribed remainder data only (right-hand side vanishing
/// near the corner): coefficients c[k-1] multiply Im zeta^{k pi/omega}.
CornerExpansion corner_expansion_remainder_only(const Opening& omega,
                                                double delta_omega,
                                                double gamma_max, double rho1p,
                                                const std::vector<double>& c);

}  // namespace s2s
