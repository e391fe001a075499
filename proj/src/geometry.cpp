#include "s2s/geometry.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

namespace s2s {

namespace {

Complex mirror_point(Complex z) { return std::conj(z); }

/// Mirror image of a segment traversed in the reversed direction, so that
/// appending mirrored-reversed segments of a chain closes an odd extension.
Segment mirror_reversed(const Segment& s) {
  if (std::holds_alternative<LineSeg>(s)) {
    const auto& l = std::get<LineSeg>(s);
    return LineSeg{mirror_point(l.b), mirror_point(l.a)};
  }
  const auto& a = std::get<ArcSeg>(s);
  return ArcSeg{mirror_point(a.c), a.r, -a.t1, -a.t0};
}

double dist_point_seg(Complex p, Complex a, Complex b) {
  const Complex d = b - a;
  const double L2 = std::norm(d);
  if (L2 == 0.0) return std::abs(p - a);
  double t = ((p.real() - a.real()) * d.real() + (p.imag() - a.imag()) * d.imag()) / L2;
  t = std::clamp(t, 0.0, 1.0);
  return std::abs(p - (a + t * d));
}

bool segs_intersect(Complex a, Complex b, Complex c, Complex d, double tol) {
  auto cross = [](Complex u, Complex v) {
    return u.real() * v.imag() - u.imag() * v.real();
  };
  const double d1 = cross(b - a, c - a);
  const double d2 = cross(b - a, d - a);
  const double d3 = cross(d - c, a - c);
  const double d4 = cross(d - c, b - c);
  if (((d1 > tol && d2 < -tol) || (d1 < -tol && d2 > tol)) &&
      ((d3 > tol && d4 < -tol) || (d3 < -tol && d4 > tol)))
    return true;
  return false;
}

}  // namespace

Complex seg_start(const Segment& s) {
  if (std::holds_alternative<LineSeg>(s)) return std::get<LineSeg>(s).a;
  const auto& a = std::get<ArcSeg>(s);
  return a.c + a.r * std::polar(1.0, a.t0);
}

Complex seg_end(const Segment& s) {
  if (std::holds_alternative<LineSeg>(s)) return std::get<LineSeg>(s).b;
  const auto& a = std::get<ArcSeg>(s);
  return a.c + a.r * std::polar(1.0, a.t1);
}

double seg_length(const Segment& s) {
  if (std::holds_alternative<LineSeg>(s)) {
    const auto& l = std::get<LineSeg>(s);
    return std::abs(l.b - l.a);
  }
  const auto& a = std::get<ArcSeg>(s);
  return a.r * std::abs(a.t1 - a.t0);
}

Complex seg_point(const Segment& s, double t) {
  if (std::holds_alternative<LineSeg>(s)) {
    const auto& l = std::get<LineSeg>(s);
    return l.a + t * (l.b - l.a);
  }
  const auto& a = std::get<ArcSeg>(s);
  return a.c + a.r * std::polar(1.0, a.t0 + t * (a.t1 - a.t0));
}

Complex seg_tangent(const Segment& s, double t) {
  if (std::holds_alternative<LineSeg>(s)) {
    const auto& l = std::get<LineSeg>(s);
    return (l.b - l.a) / std::abs(l.b - l.a);
  }
  const auto& a = std::get<ArcSeg>(s);
  const double ang = a.t0 + t * (a.t1 - a.t0);
  const double sgn = a.t1 >= a.t0 ? 1.0 : -1.0;
  return sgn * Complex{-std::sin(ang), std::cos(ang)};
}

Segment seg_reflect(const Segment& s) { return mirror_reversed(s); }

double BoundaryCurve::length() const {
  double L = 0;
  for (const auto& s : segments) L += seg_length(s);
  return L;
}

bool BoundaryCurve::is_closed(double tol) const {
  if (segments.empty()) return false;
  const double scale = std::max(1.0, length());
  for (size_t i = 0; i < segments.size(); ++i) {
    const auto& next = segments[(i + 1) % segments.size()];
    if (std::abs(seg_end(segments[i]) - seg_start(next)) > tol * scale)
      return false;
  }
  return true;
}

std::vector<Complex> BoundaryCurve::sample(int per_segment) const {
  std::vector<Complex> pts;
  for (const auto& s : segments) {
    // polyline edges need no internal refinement
    const int n = std::holds_alternative<LineSeg>(s) ? 1 : per_segment;
    for (int i = 0; i < n; ++i) pts.push_back(seg_point(s, double(i) / n));
  }
  return pts;
}

int BoundaryCurve::winding(Complex p) const {
  auto pts = sample(64);
  double total = 0;
  for (size_t i = 0; i < pts.size(); ++i) {
    const Complex u = pts[i] - p;
    const Complex v = pts[(i + 1) % pts.size()] - p;
    total += std::atan2(u.real() * v.imag() - u.imag() * v.real(),
                        u.real() * v.real() + u.imag() * v.imag());
  }
  return int(std::lround(total / (2 * pi)));
}

BoundaryCurve BoundaryCurve::reflected() const {
  BoundaryCurve out;
  out.segments.reserve(segments.size());
  for (auto it = segments.rbegin(); it != segments.rend(); ++it)
    out.segments.push_back(mirror_reversed(*it));
  return out;
}

BoundaryCurve BoundaryCurve::reversed() const {
  BoundaryCurve out;
  out.segments.reserve(segments.size());
  for (auto it = segments.rbegin(); it != segments.rend(); ++it) {
    if (std::holds_alternative<LineSeg>(*it)) {
      const auto& l = std::get<LineSeg>(*it);
      out.segments.push_back(LineSeg{l.b, l.a});
    } else {
      const auto& a = std::get<ArcSeg>(*it);
      out.segments.push_back(ArcSeg{a.c, a.r, a.t1, a.t0});
    }
  }
  return out;
}

double BoundaryCurve::max_abs() const {
  double m = 0;
  for (const auto& p : sample(64)) m = std::max(m, std::abs(p));
  return m;
}

double BoundaryCurve::min_abs() const {
  double m = std::numeric_limits<double>::max();
  for (const auto& p : sample(64)) m = std::min(m, std::abs(p));
  return m;
}

BoundaryCurve disk_curve(Complex center, double radius) {
  if (radius <= 0) throw std::invalid_argument("disk_curve: radius");
  BoundaryCurve c;
  // two half arcs keep parameter ranges short
  c.segments.push_back(ArcSeg{center, radius, 0.0, pi});
  c.segments.push_back(ArcSeg{center, radius, pi, 2 * pi});
  return c;
}

BoundaryCurve polygon_curve(const std::vector<Complex>& v) {
  if (v.size() < 3) throw std::invalid_argument("polygon_curve: <3 vertices");
  double area2 = 0;
  for (size_t i = 0; i < v.size(); ++i) {
    const Complex a = v[i], b = v[(i + 1) % v.size()];
    area2 += a.real() * b.imag() - b.real() * a.imag();
  }
  std::vector<Complex> w = v;
  if (area2 < 0) std::reverse(w.begin(), w.end());  // counterclockwise
  BoundaryCurve c;
  for (size_t i = 0; i < w.size(); ++i)
    c.segments.push_back(LineSeg{w[i], w[(i + 1) % w.size()]});
  return c;
}

BoundaryCurve pie_slice_curve(double radius, double omega) {
  if (radius <= 0 || omega <= 0 || omega >= 2 * pi)
    throw std::invalid_argument("pie_slice_curve: parameters");
  BoundaryCurve c;
  c.segments.push_back(LineSeg{{0, 0}, {radius, 0}});
  c.segments.push_back(ArcSeg{{0, 0}, radius, 0.0, omega});
  c.segments.push_back(LineSeg{radius * std::polar(1.0, omega), {0, 0}});
  return c;
}

BoundaryCurve HoleSpec::curve() const {
  if (kind == Kind::Disk) return disk_curve(center, radius);
  return polygon_curve(vertices);
}

std::optional<long> Opening::exact_resonance(long ell) const {
  if (!rational_pi) return std::nullopt;
  const auto [p, q] = *rational_pi;
  if ((ell * p) % q != 0) return std::nullopt;
  return ell * p / q;
}

Opening Opening::from_value(double v) {
  if (!(v > 0) || !(v < 2 * pi))
    throw std::invalid_argument("opening angle must lie in (0, 2pi)");
  Opening o;
  o.value = v;
  return o;
}

Opening Opening::from_rational(long p, long q) {
  if (p <= 0 || q <= 0) throw std::invalid_argument("opening p, q must be positive");
  const long g = std::gcd(p, q);
  p /= g;
  q /= g;
  const double v = double(p) * pi / double(q);
  if (!(v < 2 * pi)) throw std::invalid_argument("opening angle must lie in (0, 2pi)");
  Opening o;
  o.value = v;
  o.rational_pi = {p, q};
  return o;
}

Complex conformal_power_map(Complex p, double kappa) {
  if (p == Complex{0, 0}) {
    if (kappa <= 0) throw std::invalid_argument("power map: 0 with kappa <= 0");
    return {0, 0};
  }
  double theta = arg_sector(p);
  if (theta > 2 * pi - 1e-12) theta = 0.0;  // noise below the positive axis
  const double image = kappa * theta;
  if (image >= 2 * pi)
    throw std::domain_error("power map: image angle leaves the admissible range");
  return std::polar(std::pow(std::abs(p), kappa), image);
}

// ---------------------------------------------------------------------------
// validation

namespace {

struct SideContact {
  // per side: list of [a,b] parameter intervals along the ray (distance from 0)
  std::vector<std::pair<double, double>> runs[2];
  bool isolated = false;
  std::string isolated_what;
};

// signed distance data of a point to side 0 (positive x-axis) or side 1 (ray
// at angle omega): returns {off-line distance, along-ray coordinate}
std::pair<double, double> side_coords(Complex p, int side, double omega) {
  if (side == 0) return {p.imag(), p.real()};
  const Complex e = std::polar(1.0, omega);
  const double along = p.real() * e.real() + p.imag() * e.imag();
  const double off = p.real() * e.imag() - p.imag() * e.real();
  // off > 0 on the sector side of the ray-omega line
  return {off, along};
}

SideContact hole_side_contact(const HoleSpec& h, double omega, double tol) {
  SideContact sc;
  for (int side = 0; side < 2; ++side) {
    if (h.kind == HoleSpec::Kind::Disk) {
      const auto [off, along] = side_coords(h.center, side, omega);
      if (std::abs(std::abs(off) - h.radius) <= tol && along > tol) {
        sc.isolated = true;
        sc.isolated_what = "disk tangent to a sector side (isolated touch point)";
      }
    } else {
      const auto& v = h.vertices;
      const size_t n = v.size();
      std::vector<bool> on(n);
      std::vector<double> along(n);
      for (size_t i = 0; i < n; ++i) {
        const auto [off, al] = side_coords(v[i], side, omega);
        on[i] = std::abs(off) <= tol && al >= -tol;
        along[i] = al;
      }
      for (size_t i = 0; i < n; ++i) {
        if (!on[i]) continue;
        if (std::abs(v[i]) <= tol) continue;  // boundary through the corner is allowed
        const bool prev_edge = on[(i + n - 1) % n];
        const bool next_edge = on[(i + 1) % n];
        if (!prev_edge && !next_edge) {
          sc.isolated = true;
          sc.isolated_what = "polygon vertex touches a sector side in an isolated point";
        }
      }
      for (size_t i = 0; i < n; ++i) {
        if (on[i] && on[(i + 1) % n])
          sc.runs[side].push_back({std::min(along[i], along[(i + 1) % n]),
                                   std::max(along[i], along[(i + 1) % n])});
      }
      // merge adjacent runs
      auto& r = sc.runs[side];
      std::sort(r.begin(), r.end());
      std::vector<std::pair<double, double>> merged;
      for (auto& in : r) {
        if (!merged.empty() && in.first <= merged.back().second + tol)
          merged.back().second = std::max(merged.back().second, in.second);
        else
          merged.push_back(in);
      }
      r = merged;
    }
  }
  return sc;
}

}  // namespace

ValidationReport validate_pattern(const SectorScene& scene) {
  ValidationReport rep;
  auto fail = [&](std::string w, int hole) {
    rep.ok = false;
    rep.issues.push_back({std::move(w), hole});
  };

  const double omega = scene.omega.value;
  if (!(omega > 0 && omega < 2 * pi)) fail("opening angle outside (0, 2pi)", -1);
  if (!(scene.rho0p < scene.rho0 + 1e-15))
    fail("pattern radius rho0p must not exceed rho0", -1);
  if (!(scene.rho0 <= scene.outer_radius + 1e-15))
    fail("rho0 must not exceed the outer radius", -1);

  const double tol = 1e-12 * std::max(1.0, scene.outer_radius);

  std::vector<std::vector<Complex>> polys;
  for (int hi = 0; hi < int(scene.holes.size()); ++hi) {
    const auto& h = scene.holes[hi];
    BoundaryCurve c = h.curve();
    auto pts = c.sample(128);
    polys.push_back(pts);

    // containment in {rho < rho0p} and the closed sector
    double max_rho = 0;
    bool angle_ok = true;
    for (const auto& p : pts) {
      max_rho = std::max(max_rho, std::abs(p));
      if (std::abs(p) <= tol) continue;
      const auto [off0, al0] = side_coords(p, 0, omega);
      const auto [off1, al1] = side_coords(p, 1, omega);
      if (omega <= pi) {
        if (off0 < -tol || off1 < -tol) angle_ok = false;
      } else {
        // reflex sector: outside only if below BOTH half-plane bounds
        if (off0 < -tol && off1 < -tol) angle_ok = false;
      }
    }
    if (max_rho >= scene.rho0p - tol)
      fail("hole not contained in the pattern disk {rho < rho0p}", hi);
    if (!angle_ok) fail("hole leaves the closed sector", hi);

    // simplicity (polygons; disks are simple by construction)
    if (h.kind == HoleSpec::Kind::Polygon) {
      const auto& v = h.vertices;
      const size_t n = v.size();
      for (size_t i = 0; i < n; ++i)
        for (size_t j = i + 1; j < n; ++j) {
          if (j == i || (j + 1) % n == i || (i + 1) % n == j) continue;
          if (segs_intersect(v[i], v[(i + 1) % n], v[j], v[(j + 1) % n], tol))
            fail("hole boundary self-intersects", hi);
        }
    }

    // side contact: isolated points break the Lipschitz extension;
    // contact must be connected per hole
    SideContact sc = hole_side_contact(h, omega, 1e-10 * std::max(1.0, scene.outer_radius));
    if (sc.isolated) fail(sc.isolated_what, hi);
    int contact_components = int(sc.runs[0].size() + sc.runs[1].size());
    bool corner0 = !sc.runs[0].empty() && sc.runs[0].front().first <= tol;
    bool corner1 = !sc.runs[1].empty() && sc.runs[1].front().first <= tol;
    if (corner0 && corner1) contact_components -= 1;  // joined through the corner
    if (contact_components > 1)
      fail("hole touches the sector boundary in more than one component", hi);
  }

  // pairwise disjointness
  for (size_t i = 0; i < polys.size(); ++i)
    for (size_t j = i + 1; j < polys.size(); ++j) {
      double dmin = std::numeric_limits<double>::max();
      for (size_t a = 0; a < polys[i].size(); ++a) {
        const Complex pa = polys[i][a];
        const Complex pb = polys[i][(a + 1) % polys[i].size()];
        for (size_t b = 0; b < polys[j].size(); ++b)
          dmin = std::min(dmin, dist_point_seg(polys[j][b], pa, pb));
        if (dmin <= tol) break;
      }
      if (dmin <= tol) fail("holes touch or overlap", int(j));
      // containment of one hole in another
      BoundaryCurve ci = scene.holes[i].curve();
      if (ci.contains(polys[j][0]) && dmin > tol)
        fail("hole contained in another hole", int(j));
    }

  return rep;
}

// ---------------------------------------------------------------------------
// odd extension

namespace {

struct ChainSplit {
  std::vector<std::vector<Segment>> chains;  // maximal non-axis runs
  bool touches_axis = false;
};

ChainSplit split_chains(const BoundaryCurve& c, double tol) {
  const size_t n = c.segments.size();
  if (n == 0) throw std::invalid_argument("odd extension: empty curve");
  const double scale = std::max(1.0, c.length());
  const double atol = tol * scale;

  auto im_min_interior = [&](const Segment& s) {
    double m = std::numeric_limits<double>::max();
    for (int i = 1; i < 32; ++i)
      m = std::min(m, seg_point(s, i / 32.0).imag());
    return m;
  };
  auto on_axis = [&](const Segment& s) {
    return std::abs(seg_start(s).imag()) <= atol &&
           std::abs(seg_end(s).imag()) <= atol &&
           std::abs(seg_point(s, 0.5).imag()) <= atol;
  };

  std::vector<bool> axis(n);
  for (size_t i = 0; i < n; ++i) {
    axis[i] = on_axis(c.segments[i]);
    double lo = std::min(im_min_interior(c.segments[i]),
                         std::min(seg_start(c.segments[i]).imag(),
                                  seg_end(c.segments[i]).imag()));
    if (lo < -atol)
      throw std::invalid_argument("odd extension: curve dips below the axis");
    if (!axis[i]) {
      // interior tangency from above is an isolated touch point
      const bool start_up = seg_start(c.segments[i]).imag() > atol;
      const bool end_up = seg_end(c.segments[i]).imag() > atol;
      if (start_up && end_up && im_min_interior(c.segments[i]) <= atol)
        throw std::invalid_argument(
            "odd extension: curve meets the axis at an isolated point");
    }
  }

  ChainSplit out;
  out.touches_axis =
      std::any_of(axis.begin(), axis.end(), [](bool b) { return b; });
  // vertex touch: joint on the axis with both neighbors off-axis
  for (size_t i = 0; i < n; ++i) {
    const size_t j = (i + 1) % n;
    const Complex joint = seg_end(c.segments[i]);
    if (std::abs(joint.imag()) <= atol && !axis[i] && !axis[j]) {
      out.touches_axis = true;
      throw std::invalid_argument(
          "odd extension: curve meets the axis at an isolated point");
    }
  }
  if (!out.touches_axis) return out;

  // rotate so position 0 starts a non-axis chain
  size_t start = 0;
  for (size_t i = 0; i < n; ++i) {
    if (!axis[i] && axis[(i + n - 1) % n]) {
      start = i;
      break;
    }
  }
  std::vector<Segment> cur;
  for (size_t k = 0; k < n; ++k) {
    const size_t i = (start + k) % n;
    if (axis[i]) {
      if (!cur.empty()) out.chains.push_back(std::move(cur)), cur.clear();
    } else {
      cur.push_back(c.segments[i]);
    }
  }
  if (!cur.empty()) out.chains.push_back(std::move(cur));
  if (out.chains.empty())
    throw std::invalid_argument("odd extension: curve lies on the axis");

  // snap chain endpoints onto the axis exactly
  for (auto& ch : out.chains) {
    auto snap = [](Segment& s, bool front) {
      auto fix = [](Complex z) { return Complex{z.real(), 0.0}; };
      if (std::holds_alternative<LineSeg>(s)) {
        auto& l = std::get<LineSeg>(s);
        (front ? l.a : l.b) = fix(front ? l.a : l.b);
      }
      // arcs ending on the axis keep their exact parametrization
    };
    snap(ch.front(), true);
    snap(ch.back(), false);
  }
  return out;
}

std::vector<Segment> close_chain(const std::vector<Segment>& chain) {
  std::vector<Segment> loop = chain;
  for (auto it = chain.rbegin(); it != chain.rend(); ++it)
    loop.push_back(mirror_reversed(*it));
  return loop;
}

}  // namespace

std::vector<BoundaryCurve> odd_extend_domain(const BoundaryCurve& c, double tol) {
  ChainSplit cs = split_chains(c, tol);
  std::vector<BoundaryCurve> out;
  if (!cs.touches_axis) {
    out.push_back(c);
    out.push_back(c.reflected());
    return out;
  }
  for (const auto& ch : cs.chains) {
    BoundaryCurve loop;
    loop.segments = close_chain(ch);
    out.push_back(std::move(loop));
  }
  return out;
}

// ---------------------------------------------------------------------------
// scene transform

namespace {

/// Maps one source segment through the power map as a polyline with chords
/// roughly equalized in the image.
std::vector<Complex> map_segment(const Segment& s, double kappa, int refit) {
  std::vector<Complex> img(refit + 1);
  for (int i = 0; i <= refit; ++i)
    img[i] = conformal_power_map(seg_point(s, double(i) / refit), kappa);
  // one arclength-equalizing pass
  std::vector<double> cum(refit + 1, 0.0);
  for (int i = 1; i <= refit; ++i)
    cum[i] = cum[i - 1] + std::abs(img[i] - img[i - 1]);
  if (cum[refit] == 0.0) return img;
  std::vector<Complex> out(refit + 1);
  out[0] = img[0];
  out[refit] = img[refit];
  int seg = 0;
  for (int i = 1; i < refit; ++i) {
    const double target = cum[refit] * i / refit;
    while (seg < refit - 1 && cum[seg + 1] < target) ++seg;
    const double t0 = double(seg) / refit;
    const double dt = (target - cum[seg]) /
                      std::max(cum[seg + 1] - cum[seg], 1e-300) / refit;
    out[i] = conformal_power_map(seg_point(s, t0 + dt), kappa);
  }
  return out;
}

void snap_axis(std::vector<Complex>& pts, double scale) {
  for (auto& p : pts)
    if (std::abs(p.imag()) < 1e-12 * scale) p = {p.real(), 0.0};
}

}  // namespace

double TransformedScene::pattern_radius() const {
  double m = 0;
  for (const auto& comp : components) {
    const BoundaryCurve& c =
        comp.kind == ComponentKind::AxisSymmetric ? comp.full : comp.upper_curve;
    m = std::max(m, c.max_abs());
  }
  return m;
}

TransformedScene transform_scene(const SectorScene& scene, int refit) {
  auto rep = validate_pattern(scene);
  if (!rep.ok) {
    std::string what = "transform_scene: scene invalid";
    for (const auto& is : rep.issues) what += "; " + is.what;
    throw std::invalid_argument(what);
  }
  TransformedScene ts;
  ts.kappa = scene.omega.kappa();
  ts.outer_radius_B = std::pow(scene.outer_radius, ts.kappa);

  for (const auto& h : scene.holes) {
    BoundaryCurve src = h.curve();
    BoundaryCurve img;
    double scale = 0;
    for (const auto& s : src.segments) {
      auto pts = map_segment(s, ts.kappa, refit);
      for (const auto& p : pts) scale = std::max(scale, std::abs(p));
      snap_axis(pts, std::max(scale, 1e-6));
      for (int i = 0; i < int(pts.size()) - 1; ++i) {
        if (std::abs(pts[i + 1] - pts[i]) == 0.0) continue;
        img.segments.push_back(LineSeg{pts[i], pts[i + 1]});
      }
    }

    ChainSplit cs = split_chains(img, 1e-9);
    TransformedComponent comp;
    if (cs.touches_axis) {
      if (cs.chains.size() != 1)
        throw std::invalid_argument(
            "transform_scene: hole contact with the axis is disconnected");
      comp.kind = ComponentKind::AxisSymmetric;
      comp.upper = cs.chains.front();
      comp.full.segments = close_chain(comp.upper);
      ts.m_cross += 1;
    } else {
      comp.kind = ComponentKind::MirrorPair;
      comp.upper = img.segments;
      comp.upper_curve = img;
      ts.m_pair += 1;
    }
    ts.components.push_back(std::move(comp));
  }
  return ts;
}

}  // namespace s2s
