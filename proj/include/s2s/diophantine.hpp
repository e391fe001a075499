#pragma once

#include <boost/multiprecision/cpp_int.hpp>
#include <string>
#include <vector>

#include "s2s/geometry.hpp"

namespace s2s {

using BigInt = boost::multiprecision::cpp_int;
using BigRat = boost::multiprecision::cpp_rational;

/// Exact rational value of a double (m * 2^e decomposition).
BigRat exact_rational(double x);

/// Natural log of a large positive integer, computed from its bit length.
double log_big(const BigInt& x);

struct ContinuedFraction {
  std::vector<BigInt> quotients;  // a0; a1, a2, ...
  std::vector<BigInt> p, q;       // convergents p[n]/q[n]
  bool terminated = false;        // expansion ended exactly (rational input)
};

/// Continued fraction of a positive rational, at most `depth` quotients.
ContinuedFraction continued_fraction(const BigRat& x, int depth);
/// Same for a double via its exact binary rational; depth is capped at 64
/// because deeper quotients only reflect the floating representation.
ContinuedFraction continued_fraction(double x, int depth);

/// Certificate describing how well a number is rationally approximable.
/// SeriesPow describes a = sum_n base^{-b_n} with b_n generated by `rule`:
/// Factorial (b_n = n!) or Tower (b_{n+1} = tower_base^{b_n} from b0).
struct LiouvilleCertificate {
  enum class Kind { Rational, BoundedQuotients, SeriesPow } kind;
  BigInt p = 0, q = 1;  // Rational
  long bound = 1;       // BoundedQuotients: all partial quotients <= bound
  long base = 2;        // SeriesPow
  enum class Rule { Factorial, Tower } rule = Rule::Factorial;
  long tower_base = 2;
  BigInt b0 = 1;
  int depth = 6;

  static LiouvilleCertificate rational(BigInt p, BigInt q);
  static LiouvilleCertificate bounded_quotients(long bound);
  static LiouvilleCertificate factorial_series(long base = 10, int depth = 6);
  static LiouvilleCertificate tower_series(long tower_base = 2, long base = 2,
                                           BigInt b0 = 2, int depth = 6);
};

enum class Verdict {
  Rational,
  NotLiouville,
  Liouville,
  ExpLiouville,
  SuperExpLiouville,
  Inconclusive,
};

std::string to_string(Verdict v);

/// One approximation fact |a - p_n/q_n| = err: nu is the polynomial
/// exponent ln(1/err)/ln q, ln_c the log of the exponential rate
/// ln(1/err)/q (clamped to +-1e308 when out of double range).
struct EvidenceRow {
  int n = 0;
  double log_q = 0;
  double nu = 0;
  double ln_c = 0;
};

struct AngleClass {
  Verdict verdict = Verdict::Inconclusive;
  bool certified = false;
  // class membership flags, meaningful when certified
  bool liouville = false, exp_liouville = false, super_exp = false;
  std::vector<EvidenceRow> evidence;
  std::string note;
};

/// Certified classification from a certificate: membership decided by the
/// growth rule's asymptotics, evidence rows computed from the canonical
/// truncations in exact arithmetic.
AngleClass classify(const LiouvilleCertificate& cert);

/// Floating input: continued-fraction evidence only, never certified.
AngleClass classify(double x, int depth = 40);

struct SinSeriesScan {
  double rho_est = 1.0;            // estimated radius factor
  std::vector<long> record_ell;    // running minima of |ell*omega - k*pi|
  std::vector<double> record_dist;
  std::vector<long> record_k;
  bool two_sided_ok = true;        // (2/pi) d <= |sin| <= d throughout
  long worst_ell = 0;
};

/// Scans |sin(ell*omega)|^(-1/ell) for ell <= L and estimates the radius
/// factor limiting the corner series (limsup proxy over the tail window
/// [L/2, L]). Declared-rational omega is rejected: sin(ell*omega) vanishes
/// at resonant ell and no radius exists.
SinSeriesScan sin_series_radius(const Opening& omega, long L);

/// Raw scan over any positive angle value (not restricted to valid sector
/// openings); used for angle-family studies.
SinSeriesScan sin_series_radius(double omega, long L);

}  // namespace s2s
