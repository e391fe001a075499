#include "s2s/diophantine.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace s2s {

namespace mp = boost::multiprecision;

BigRat exact_rational(double x) {
  if (!std::isfinite(x)) throw std::invalid_argument("exact_rational: not finite");
  int e = 0;
  const double fr = std::frexp(x, &e);
  const long long m = static_cast<long long>(std::ldexp(fr, 53));
  BigInt num = m;
  const int e2 = e - 53;
  if (e2 >= 0) return BigRat(num << e2, 1);
  return BigRat(num, BigInt(1) << (-e2));
}

double log_big(const BigInt& x) {
  if (x <= 0) throw std::invalid_argument("log_big: x <= 0");
  const unsigned bits = mp::msb(x) + 1;
  if (bits <= 63) return std::log(x.convert_to<double>());
  const BigInt top = x >> (bits - 53);
  return std::log(top.convert_to<double>()) + double(bits - 53) * std::log(2.0);
}

static double log_rat(const BigRat& r) {
  return log_big(mp::numerator(r)) - log_big(mp::denominator(r));
}

ContinuedFraction continued_fraction(const BigRat& x, int depth) {
  if (x <= 0) throw std::invalid_argument("continued_fraction: x must be positive");
  if (depth < 1) throw std::invalid_argument("continued_fraction: depth");
  ContinuedFraction cf;
  BigInt num = mp::numerator(x), den = mp::denominator(x);
  BigInt pm1 = 1, pm2 = 0, qm1 = 0, qm2 = 1;
  for (int n = 0; n < depth; ++n) {
    const BigInt a = num / den;  // positive operands: floor
    const BigInt rem = num - a * den;
    cf.quotients.push_back(a);
    const BigInt pn = a * pm1 + pm2;
    const BigInt qn = a * qm1 + qm2;
    cf.p.push_back(pn);
    cf.q.push_back(qn);
    pm2 = pm1;
    pm1 = pn;
    qm2 = qm1;
    qm1 = qn;
    if (rem == 0) {
      cf.terminated = true;
      break;
    }
    num = den;
    den = rem;
  }
  return cf;
}

ContinuedFraction continued_fraction(double x, int depth) {
  return continued_fraction(exact_rational(x), std::min(depth, 64));
}

LiouvilleCertificate LiouvilleCertificate::rational(BigInt p, BigInt q) {
  LiouvilleCertificate c;
  c.kind = Kind::Rational;
  c.p = std::move(p);
  c.q = std::move(q);
  if (c.q <= 0) throw std::invalid_argument("certificate: q must be positive");
  return c;
}

LiouvilleCertificate LiouvilleCertificate::bounded_quotients(long bound) {
  if (bound < 1) throw std::invalid_argument("certificate: bound >= 1");
  LiouvilleCertificate c;
  c.kind = Kind::BoundedQuotients;
  c.bound = bound;
  return c;
}

LiouvilleCertificate LiouvilleCertificate::factorial_series(long base, int depth) {
  if (base < 2) throw std::invalid_argument("certificate: base >= 2");
  LiouvilleCertificate c;
  c.kind = Kind::SeriesPow;
  c.base = base;
  c.rule = Rule::Factorial;
  c.depth = depth;
  return c;
}

LiouvilleCertificate LiouvilleCertificate::tower_series(long tower_base, long base,
                                                        BigInt b0, int depth) {
  if (base < 2 || tower_base < 2)
    throw std::invalid_argument("certificate: bases >= 2");
  if (b0 < 1) throw std::invalid_argument("certificate: b0 >= 1");
  LiouvilleCertificate c;
  c.kind = Kind::SeriesPow;
  c.base = base;
  c.rule = Rule::Tower;
  c.tower_base = tower_base;
  c.b0 = std::move(b0);
  c.depth = depth;
  return c;
}

std::string to_string(Verdict v) {
  switch (v) {
    case Verdict::Rational: return "Rational";
    case Verdict::NotLiouville: return "NotLiouville";
    case Verdict::Liouville: return "Liouville";
    case Verdict::ExpLiouville: return "ExpLiouville";
    case Verdict::SuperExpLiouville: return "SuperExpLiouville";
    case Verdict::Inconclusive: return "InconclusiveEvidence";
  }
  return "?";
}

namespace {

constexpr double kClamp = 1e308;

double clampd(double x) {
  if (x > kClamp) return kClamp;
  if (x < -kClamp) return -kClamp;
  return x;
}

/// Exponent sequence of a SeriesPow certificate, capped so b_n stays
/// representable (~1e6 bits).
std::vector<BigInt> series_exponents(const LiouvilleCertificate& c) {
  std::vector<BigInt> b;
  if (c.rule == LiouvilleCertificate::Rule::Factorial) {
    BigInt f = 1;
    for (int n = 1; n <= c.depth + 1; ++n) {
      f *= n;
      b.push_back(f);
      if (mp::msb(f) > 64) break;
    }
  } else {
    BigInt cur = c.b0;
    b.push_back(cur);
    for (int n = 0; n < c.depth; ++n) {
      if (cur > 1000000) break;  // next tower level would be astronomical
      BigInt next = mp::pow(BigInt(c.tower_base), cur.convert_to<unsigned>());
      b.push_back(next);
      cur = next;
    }
  }
  if (b.size() < 2)
    throw std::invalid_argument("certificate: depth too small");
  return b;
}

}  // namespace

AngleClass classify(const LiouvilleCertificate& cert) {
  AngleClass out;
  out.certified = true;

  if (cert.kind == LiouvilleCertificate::Kind::Rational) {
    out.verdict = Verdict::Rational;
    out.note = "declared rational";
    return out;
  }

  if (cert.kind == LiouvilleCertificate::Kind::BoundedQuotients) {
    out.verdict = Verdict::NotLiouville;
    out.note = "partial quotients bounded by " + std::to_string(cert.bound) +
               ": |a - p/q| > 1/((bound+2) q^2) for every convergent";
    return out;
  }

  // SeriesPow: truncation after b_n has denominator base^{b_n} (the last
  // series term contributes an odd numerator digit, so nothing cancels)
  // and error within [base^{-b_{n+1}}, 2 base^{-b_{n+1}}].
  const auto b = series_exponents(cert);
  const double lnB = std::log(double(cert.base));
  for (size_t n = 0; n + 1 < b.size(); ++n) {
    EvidenceRow row;
    row.n = int(n);
    const double log_bn = log_big(b[n]);
    const double log_bn1 = log_big(b[n + 1]);
    // ln q = b_n ln B (clamped once b_n leaves double range)
    const double bn_lnB =
        mp::msb(b[n]) < 500 ? b[n].convert_to<double>() * lnB : kClamp;
    row.log_q = bn_lnB;
    // nu = b_{n+1} / b_n
    row.nu = clampd(std::exp(std::min(700.0, log_bn1 - log_bn)));
    // ln c = ln(b_{n+1} ln B) - b_n ln B
    row.ln_c = clampd(log_bn1 + std::log(lnB) - bn_lnB);
    out.evidence.push_back(row);
  }

  // rule asymptotics
  bool liou = false, expo = false, super = false;
  if (cert.rule == LiouvilleCertificate::Rule::Factorial) {
    liou = true;  // b_{n+1}/b_n = n+1 -> infinity
    expo = false; // ln c_n = ln((n+1)! lnB) - n! lnB -> -infinity
    super = false;
    out.note = "factorial growth: polynomial exponent n+1 unbounded, "
               "exponential rate ln c_n -> -inf";
  } else {
    liou = true;  // b_{n+1}/b_n = T^{b_n}/b_n -> infinity
    if (cert.tower_base > cert.base) {
      expo = super = true;
      out.note = "tower base exceeds series base: rate c_n = lnB (T/B)^{b_n} -> inf";
    } else if (cert.tower_base == cert.base) {
      expo = true;
      super = false;
      out.note = "tower base equals series base: rate c_n -> ln(base), "
                 "positive but bounded";
    } else {
      expo = super = false;
      out.note = "tower base below series base: rate c_n -> 0";
    }
  }
  out.liouville = liou;
  out.exp_liouville = expo;
  out.super_exp = super;
  out.verdict = super   ? Verdict::SuperExpLiouville
                : expo  ? Verdict::ExpLiouville
                : liou  ? Verdict::Liouville
                        : Verdict::NotLiouville;
  return out;
}

AngleClass classify(double x, int depth) {
  AngleClass out;
  out.certified = false;
  const BigRat xr = exact_rational(x);
  ContinuedFraction cf = continued_fraction(xr, std::min(depth, 64));
  for (size_t n = 1; n < cf.q.size(); ++n) {
    const BigRat err_r = mp::abs(xr - BigRat(cf.p[n], cf.q[n]));
    if (err_r == 0) break;
    EvidenceRow row;
    row.n = int(n);
    row.log_q = log_big(cf.q[n]);
    const double ln_inv_err = -log_rat(err_r);
    row.nu = ln_inv_err / std::max(row.log_q, 1e-300);
    row.ln_c = clampd(std::log(ln_inv_err) - row.log_q);
    out.evidence.push_back(row);
  }
  if (cf.terminated) {
    out.verdict = Verdict::Rational;
    out.note = "floating value is exactly rational in binary; "
               "resolution limits any deeper statement";
  } else {
    out.verdict = Verdict::Inconclusive;
    out.note = "floating input: evidence only, no certificate";
  }
  return out;
}

SinSeriesScan sin_series_radius(const Opening& omega, long L) {
  if (omega.declared_rational())
    throw std::invalid_argument(
        "sin_series_radius: declared-rational opening has resonant zeros");
  return sin_series_radius(omega.value, L);
}

SinSeriesScan sin_series_radius(double omega, long L) {
  if (!(omega > 0))
    throw std::invalid_argument("sin_series_radius: omega must be positive");
  if (L < 10) throw std::invalid_argument("sin_series_radius: L too small");
  const double w = omega;
  SinSeriesScan scan;
  double best = std::numeric_limits<double>::max();
  double tail_max = 0.0;
  for (long ell = 1; ell <= L; ++ell) {
    const double x = double(ell) * w;
    const double rem = std::remainder(x, pi);  // x - k pi, nearest k
    const double d = std::abs(rem);
    const double s = std::abs(std::sin(x));
    if (s < (2.0 / pi) * d - 1e-9 || s > d + 1e-9) scan.two_sided_ok = false;
    if (d < best) {
      best = d;
      scan.record_ell.push_back(ell);
      scan.record_dist.push_back(d);
      scan.record_k.push_back(std::lround((x - rem) / pi));
      scan.worst_ell = ell;
    }
    if (ell >= L / 2 && s > 0) {
      const double rate = std::log(1.0 / s) / double(ell);
      tail_max = std::max(tail_max, rate);
    }
  }
  scan.rho_est = std::exp(-std::max(0.0, tail_max));
  return scan;
}

}  // namespace s2s
