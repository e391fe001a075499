#include "s2s/cornerseries.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

namespace s2s {

Complex ComplexPoly::eval(Complex z) const {
  Complex zb = std::conj(z);
  Complex s = 0;
  for (const auto& [ab, v] : c) {
    Complex t = v;
    for (int i = 0; i < ab.first; ++i) t *= z;
    for (int i = 0; i < ab.second; ++i) t *= zb;
    s += t;
  }
  return s;
}

ComplexPoly ComplexPoly::laplacian() const {
  ComplexPoly out;
  for (const auto& [ab, v] : c) {
    auto [a, b] = ab;
    if (a >= 1 && b >= 1)
      out.c[{a - 1, b - 1}] += 4.0 * double(a) * double(b) * v;
  }
  return out;
}

int ComplexPoly::degree() const {
  int d = -1;
  for (const auto& [ab, v] : c)
    if (std::abs(v) > 0) d = std::max(d, ab.first + ab.second);
  return d;
}

AnalyticRHS AnalyticRHS::from_real_poly(
    const std::map<std::pair<int, int>, double>& re) {
  // t1 = (z + zb)/2, t2 = (z - zb)/(2i); expand each monomial binomially.
  AnalyticRHS rhs;
  for (const auto& [ab, v] : re) {
    auto [p, q] = ab;
    if (v == 0) continue;
    std::vector<double> binp(p + 1), binq(q + 1);
    binp[0] = 1;
    for (int i = 1; i <= p; ++i) binp[i] = binp[i - 1] * double(p - i + 1) / i;
    binq[0] = 1;
    for (int j = 1; j <= q; ++j) binq[j] = binq[j - 1] * double(q - j + 1) / j;
    Complex base = v * std::pow(Complex(0, 2), -q) * std::pow(2.0, -p);
    for (int i = 0; i <= p; ++i)
      for (int j = 0; j <= q; ++j) {
        double sgn = (q - j) % 2 ? -1.0 : 1.0;
        rhs.f.c[{i + j, p - i + q - j}] += base * binp[i] * binq[j] * sgn;
      }
  }
  for (const auto& [ab, v] : rhs.f.c)
    rhs.C = std::max(rhs.C, std::abs(v));
  rhs.M = 1;
  return rhs;
}

AnalyticRHS AnalyticRHS::constant(double v) {
  AnalyticRHS rhs;
  if (v != 0) rhs.f.c[{0, 0}] = v;
  rhs.C = std::abs(v);
  return rhs;
}

AnalyticRHS AnalyticRHS::zero() { return AnalyticRHS{}; }

ComplexPoly particular_interior(const AnalyticRHS& rhs) {
  ComplexPoly u;
  for (const auto& [ab, v] : rhs.f.c) {
    auto [a, b] = ab;
    u.c[{a + 1, b + 1}] = v / (4.0 * double(a + 1) * double(b + 1));
  }
  return u;
}

LateralData lateral_traces(const ComplexPoly& uf, const Opening& omega) {
  int d = std::max(0, uf.degree());
  LateralData out;
  out.g0.assign(d + 1, 0.0);
  out.gw.assign(d + 1, 0.0);
  for (const auto& [ab, v] : uf.c) {
    auto [a, b] = ab;
    int l = a + b;
    // On theta = 0 the monomial restricts to v rho^l; on theta = omega it
    // picks up e^{i omega (a-b)}. The traces of -u_f are the negatives.
    out.g0[l] -= v.real();
    out.gw[l] -= (v * std::polar(1.0, omega.value * double(a - b))).real();
  }
  return out;
}

namespace {

// sin/cos of ell*omega computed through the signed distance to the nearest
// multiple of pi; near resonances this keeps full relative accuracy.
struct ResTrig {
  double s, c, d;  // sin, cos, ell*omega - k*pi
  long k;
};

ResTrig res_trig(long ell, const Opening& omega) {
  double x = double(ell) * omega.value;
  double d = std::remainder(x, pi);
  long k = std::lround((x - d) / pi);
  if (k < 1) {  // nearest positive multiple is pi itself
    k = 1;
    d = x - pi;
  }
  double sgn = (k % 2 == 0) ? 1.0 : -1.0;
  return {sgn * std::sin(d), sgn * std::cos(d), d, k};
}

}  // namespace

const ResonantEntry* IndexSet::find(long ell) const {
  for (const auto& e : resonant)
    if (e.ell == ell) return &e;
  return nullptr;
}

IndexSet build_index_set(const Opening& omega, double delta_omega,
                         double gamma_max) {
  double half = 0.5 * std::min(omega.value, pi);
  if (delta_omega < 0 || delta_omega >= half)
    throw std::invalid_argument("delta_omega outside [0, min(omega,pi)/2)");
  if (gamma_max <= 0) throw std::invalid_argument("gamma_max must be positive");
  IndexSet idx;
  idx.omega = omega;
  idx.delta_omega = delta_omega;
  idx.gamma_max = gamma_max;
  long lmax = long(std::floor(gamma_max + 1e-12));
  long prev_k = 0;
  // delta_omega = 0 is the regrouping-off switch: the exceptional set stays
  // empty and exact resonances must not occur downstream.
  for (long ell = 1; delta_omega > 0 && ell <= lmax; ++ell) {
    ResTrig t = res_trig(ell, omega);
    auto ex = omega.exact_resonance(ell);
    bool in = ex.has_value() || std::abs(t.d) <= delta_omega;
    if (!in) continue;
    ResonantEntry e;
    e.ell = ell;
    e.k = ex ? *ex : t.k;
    e.exact = ex.has_value();
    e.gamma_prime = double(e.k) * pi / omega.value;
    if (e.k <= prev_k)
      throw std::logic_error("resonance pairing not injective");
    prev_k = e.k;
    idx.resonant.push_back(e);
  }
  return idx;
}

double LateralTerm::eval(Complex z) const {
  Complex zl = 1;
  for (long i = 0; i < ell; ++i) zl *= z;
  switch (kind) {
    case LateralKind::Plain:
      return a * zl.imag() + b * zl.real();
    case LateralKind::Log:
      if (z == Complex(0)) throw std::domain_error("log term at zeta = 0");
      return a * (zl * log_sector(z)).imag() + b * zl.real();
    case LateralKind::DividedDiff:
      return a * divided_power(z, double(ell), gamma_prime).imag() +
             b * zl.real();
  }
  return 0;
}

LateralTerm lateral_term(long ell, double g0, double gw, const IndexSet& idx) {
  if (ell < 1) throw std::invalid_argument("lateral degree must be >= 1");
  LateralTerm w;
  w.ell = ell;
  w.b = g0;
  const ResonantEntry* e = idx.find(ell);
  ResTrig t = res_trig(ell, idx.omega);
  if (e && e->exact) {
    w.kind = LateralKind::Log;
    w.k = e->k;
    w.gamma_prime = e->gamma_prime;
    double cs = (e->k % 2 == 0) ? 1.0 : -1.0;
    w.a = (gw - g0 * cs) / (idx.omega.value * cs);
  } else if (e) {
    w.kind = LateralKind::DividedDiff;
    w.k = e->k;
    w.gamma_prime = e->gamma_prime;
    // (gw - g0 cos) * (ell - k pi/omega) / sin, with the difference and the
    // sine both expressed through d = ell*omega - k*pi for cancellation-free
    // division: (ell - gamma') = d/omega and sin = (-1)^k sin d.
    w.a = (gw - g0 * t.c) * (t.d / idx.omega.value) / t.s;
  } else {
    double num = gw - g0 * t.c;
    bool res = std::abs(t.s) < 1e-300 || idx.omega.exact_resonance(ell).has_value();
    if (res && std::abs(num) <= 1e-12 * (std::abs(g0) + std::abs(gw))) {
      // compatible data at a resonance (e.g. omega = pi): homogeneous solve
      w.kind = LateralKind::Plain;
      w.a = 0;
    } else if (res) {
      throw std::domain_error("exact resonance excluded from index set");
    } else {
      w.kind = LateralKind::Plain;
      w.a = num / t.s;
    }
  }
  return w;
}

double GammaKey::abs(const Opening& omega) const {
  if (kind == Kind::Frac) return double(k) * pi / omega.value;
  return double(a1 + a2);
}

Complex eval_Z(const GammaKey& g, Complex z, const IndexSet& idx) {
  if (g.kind == GammaKey::Kind::Frac) {
    if (g.k < 1) throw std::invalid_argument("fractional index must be >= 1");
    return pow_sector(z, double(g.k) * pi / idx.omega.value);
  }
  if (g.a1 < 0 || g.a2 < 0 || g.a1 + g.a2 < 1)
    throw std::invalid_argument("invalid pair index");
  const ResonantEntry* e = (g.a2 == 0) ? idx.find(g.a1) : nullptr;
  if (e && e->exact) {
    if (z == Complex(0)) throw std::domain_error("log member at zeta = 0");
    Complex zl = 1;
    for (long i = 0; i < g.a1; ++i) zl *= z;
    return zl * log_sector(z);
  }
  if (e) {
    if (z == Complex(0)) return 0;
    return divided_power(z, double(g.a1), e->gamma_prime);
  }
  Complex zb = std::conj(z), t = 1;
  for (long i = 0; i < g.a1; ++i) t *= z;
  for (long i = 0; i < g.a2; ++i) t *= zb;
  return t;
}

double eval_E(const GammaKey& g, double eps, const IndexSet& idx) {
  if (eps < 0) throw std::domain_error("eps must be >= 0");
  if (g.kind == GammaKey::Kind::Frac) {
    if (eps == 0) return 0;
    return std::pow(eps, double(g.k) * pi / idx.omega.value);
  }
  const ResonantEntry* e = (g.a2 == 0) ? idx.find(g.a1) : nullptr;
  if (e && e->exact) {
    if (eps <= 0) throw std::domain_error("log scale factor needs eps > 0");
    return std::pow(eps, double(g.a1)) * std::log(eps);
  }
  if (e) return divided_power_real(eps, double(g.a1), e->gamma_prime);
  if (eps == 0) return 0;
  return std::pow(eps, double(g.a1 + g.a2));
}

std::vector<double> remainder_coeffs(const std::function<double(double)>& arc,
                                     const Opening& omega, double rho1p, int K,
                                     double endpoint_tol) {
  if (K < 1) throw std::invalid_argument("need at least one mode");
  if (rho1p <= 0) throw std::invalid_argument("extraction radius must be > 0");
  int N = 4 * K;
  std::vector<double> g(N - 1);
  double amax = 0;
  for (int j = 1; j < N; ++j) {
    g[j - 1] = arc(double(j) * omega.value / N);
    amax = std::max(amax, std::abs(g[j - 1]));
  }
  double e0 = std::abs(arc(0.0)), e1 = std::abs(arc(omega.value));
  double scale = std::max({amax, e0, e1, 1e-12});
  if (e0 > endpoint_tol * scale || e1 > endpoint_tol * scale)
    throw std::invalid_argument(
        "arc trace does not vanish at the sector sides");
  std::vector<double> c(K);
  for (int k = 1; k <= K; ++k) {
    double s = 0;
    for (int j = 1; j < N; ++j)
      s += g[j - 1] * std::sin(pi * double(k) * j / N);
    double gk = 2.0 * s / N;
    c[k - 1] = gk * std::pow(rho1p, -double(k) * pi / omega.value);
  }
  return c;
}

double CornerExpansion::eval_u0(Complex z, double cut) const {
  double s = 0;
  for (const auto& [g, av] : a) {
    if (g.abs(omega) > cut + 1e-9) continue;
    s += (av * eval_Z(g, z, idx)).imag();
  }
  return s;
}

double CornerExpansion::eval_u0_scaled(double eps, Complex T,
                                       double cut) const {
  double s = 0;
  for (const auto& [g, av] : a) {
    if (g.abs(omega) > cut + 1e-9) continue;
    if (g.kind == GammaKey::Kind::Frac) {
      s += eval_E(g, eps, idx) * (av * eval_Z(g, T, idx)).imag();
      continue;
    }
    double el = double(g.a1 + g.a2);
    s += (eps == 0 ? (el == 0 ? 1.0 : 0.0) : std::pow(eps, el)) *
         (av * eval_Z(g, T, idx)).imag();
    const ResonantEntry* e = (g.a2 == 0) ? idx.find(g.a1) : nullptr;
    if (e) {
      // pseudo-homogeneous shadow: E_gamma(eps) * Z_{k pi/omega}(T)
      double E = eval_E(g, eps, idx);
      Complex shadow = pow_sector(T, e->gamma_prime);
      s += E * (av * shadow).imag();
    }
  }
  return s;
}

double CornerExpansion::packet_frac(long k, Complex T) const {
  auto it = a.find(GammaKey::frac(k));
  if (it == a.end()) return 0;
  return (it->second * eval_Z(it->first, T, idx)).imag();
}

double CornerExpansion::packet_degree(long ell, Complex T) const {
  double s = 0;
  for (const auto& [g, av] : a) {
    if (g.kind != GammaKey::Kind::Pair || g.a1 + g.a2 != ell) continue;
    s += (av * eval_Z(g, T, idx)).imag();
  }
  return s;
}

double CornerExpansion::packet_resonant(long ell, Complex T) const {
  const ResonantEntry* e = idx.find(ell);
  if (!e) return 0;
  auto it = a.find(GammaKey::pair(ell, 0));
  if (it == a.end()) return 0;
  return (it->second * pow_sector(T, e->gamma_prime)).imag();
}

double CornerExpansion::tail_bound(double rho, double cut) const {
  double r = fitM * rho;
  if (r >= 1) return std::numeric_limits<double>::infinity();
  // Exponents are spaced at least s apart with multiplicity <= m+3 at the
  // m-th step; sum (m+3) C r^{m s} over m s > cut.
  double s = std::min(1.0, omega.kappa());
  long m0 = long(std::floor(cut / s)) + 1;
  double q = std::pow(r, s), qm = std::pow(r, double(m0) * s);
  // sum_{m>=m0} (m+3) q^{m-m0} = (m0+3)/(1-q) + q/(1-q)^2
  return fitC * qm * ((double(m0) + 3) / (1 - q) + q / ((1 - q) * (1 - q)));
}

void CornerExpansion::fit_envelope() {
  std::vector<std::pair<double, double>> pts;  // (|gamma|, log|a|)
  for (const auto& [g, av] : a) {
    double m = std::abs(av);
    if (m < 1e-300) continue;
    pts.push_back({g.abs(omega), std::log(m)});
  }
  if (pts.empty()) {
    fitC = 0;
    fitM = 1;
    return;
  }
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  for (auto [x, y] : pts) {
    sx += x;
    sy += y;
    sxx += x * x;
    sxy += x * y;
  }
  double n = double(pts.size());
  double den = n * sxx - sx * sx;
  double slope = (den > 1e-12) ? (n * sxy - sx * sy) / den : 0.0;
  fitM = std::exp(std::clamp(slope, -30.0, 30.0));
  fitC = 0;
  for (auto [x, y] : pts)
    fitC = std::max(fitC, std::exp(y) * std::pow(fitM, -x));
}

CornerExpansion corner_expansion(const AnalyticRHS& rhs, const Opening& omega,
                                 double delta_omega, double gamma_max,
                                 double rho1p,
                                 const std::function<double(double)>& arc,
                                 int K) {
  CornerExpansion ce;
  ce.omega = omega;
  ce.idx = build_index_set(omega, delta_omega, gamma_max);
  ce.gamma_max = gamma_max;
  ce.rho1p = rho1p;

  // Interior part: Re sum c zeta^a zbar^b = Im sum (i c) Z_(a,b).
  ComplexPoly uf = particular_interior(rhs);
  for (const auto& [ab, v] : uf.c) {
    if (std::abs(v) == 0) continue;
    ce.a[GammaKey::pair(ab.first, ab.second)] += Complex(0, 1) * v;
  }

  // Lateral terms per degree.
  LateralData ld = lateral_traces(uf, omega);
  std::vector<LateralTerm> lat;
  for (int l = 1; l <= ld.degree(); ++l) {
    if (std::abs(ld.g0[l]) < 1e-14 && std::abs(ld.gw[l]) < 1e-14) continue;
    LateralTerm w = lateral_term(l, ld.g0[l], ld.gw[l], ce.idx);
    lat.push_back(w);
    // In every case w_l = Im(a Z_(l,0) + i b Z_(0,l)): the b Re zeta^l part
    // rides on the conjugate slot, keeping a_(l,0) real.
    ce.a[GammaKey::pair(w.ell, 0)] += Complex(w.a, 0);
    ce.a[GammaKey::pair(0, w.ell)] += Complex(0, w.b);
  }

  // Remainder: sine analysis of arc - u_d on the extraction arc.
  if (arc) {
    if (K < 1) K = std::max(1, int(std::floor(gamma_max * omega.value / pi +
                                              1e-12)));
    auto g_rm = [&](double th) {
      Complex z = std::polar(rho1p, th);
      double ud = 0;
      for (const auto& w : lat) ud += w.eval(z);
      return arc(th) - ud;
    };
    std::vector<double> c = remainder_coeffs(g_rm, omega, rho1p, K);
    for (int k = 1; k <= int(c.size()); ++k)
      ce.a[GammaKey::frac(k)] += c[k - 1];
  }

  // Drop numerically empty slots.
  for (auto it = ce.a.begin(); it != ce.a.end();)
    it = (std::abs(it->second) < 1e-300) ? ce.a.erase(it) : std::next(it);
  ce.fit_envelope();
  return ce;
}

CornerExpansion corner_expansion_remainder_only(const Opening& omega,
                                                double delta_omega,
                                                double gamma_max, double rho1p,
                                                const std::vector<double>& c) {
  CornerExpansion ce;
  ce.omega = omega;
  ce.idx = build_index_set(omega, delta_omega, gamma_max);
  ce.gamma_max = gamma_max;
  ce.rho1p = rho1p;
  for (int k = 1; k <= int(c.size()); ++k)
    if (c[k - 1] != 0) ce.a[GammaKey::frac(k)] = c[k - 1];
  ce.fit_envelope();
  return ce;
}

}  // namespace s2s
