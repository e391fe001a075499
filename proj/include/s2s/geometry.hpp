#pragma once

#include <optional>
#include <string>
#include <variant>
#include <vector>

#include "s2s/util.hpp"

namespace s2s {

/// Straight edge from a to b.
struct LineSeg {
  Complex a, b;
};

/// Circular arc, center c, radius r, parameter t in [t0, t1] (radians,
/// point = c + r e^{it}); t1 > t0 traverses counterclockwise.
struct ArcSeg {
  Complex c;
  double r;
  double t0, t1;
};

using Segment = std::variant<LineSeg, ArcSeg>;

Complex seg_start(const Segment& s);
Complex seg_end(const Segment& s);
double seg_length(const Segment& s);
Complex seg_point(const Segment& s, double t);    // t in [0,1]
Complex seg_tangent(const Segment& s, double t);  // unit tangent
Segment seg_reflect(const Segment& s);            // mirror image, reversed orientation baked in by caller

/// Closed oriented curve: consecutive segments join end-to-start and the
/// last closes on the first. Orientation is counterclockwise around the
/// enclosed region; the outward normal of a unit tangent t is (t.y, -t.x).
struct BoundaryCurve {
  std::vector<Segment> segments;

  double length() const;
  bool is_closed(double tol = 1e-9) const;
  /// Dense polyline sample (per-segment count proportional to length).
  std::vector<Complex> sample(int per_segment = 32) const;
  /// Winding number around p (1 = enclosed by a ccw curve, 0 = outside).
  int winding(Complex p) const;
  bool contains(Complex p) const { return winding(p) != 0; }
  /// Mirror image across the axis, re-oriented counterclockwise.
  BoundaryCurve reflected() const;
  /// Same point set traversed the other way (outward normal flips inward).
  BoundaryCurve reversed() const;
  /// Bounding radius max |z| over the curve.
  double max_abs() const;
  double min_abs() const;
};

BoundaryCurve disk_curve(Complex center, double radius);
BoundaryCurve polygon_curve(const std::vector<Complex>& vertices);
/// Pie slice {0 < rho < radius, 0 < theta < omega}: two straight sides and
/// the outer arc, counterclockwise.
BoundaryCurve pie_slice_curve(double radius, double omega);

/// Hole description as read from a scene file.
struct HoleSpec {
  enum class Kind { Disk, Polygon } kind;
  Complex center{};                  // disk
  double radius{};                   // disk
  std::vector<Complex> vertices;     // polygon
  BoundaryCurve curve() const;
};

/// Opening angle with its declared form. Rational multiples of pi are
/// declared exactly (value = p*pi/q); everything else is a plain double.
struct Opening {
  double value = pi / 2;
  std::optional<std::pair<long, long>> rational_pi;  // (p, q), omega = p*pi/q

  double kappa() const { return pi / value; }
  bool declared_rational() const { return rational_pi.has_value(); }
  /// k with ell*omega == k*pi exactly, available only for declared-rational
  /// omega (ell*p/q integral).
  std::optional<long> exact_resonance(long ell) const;
  static Opening from_value(double v);
  static Opening from_rational(long p, long q);
};

/// Sector {0 < theta < omega} of outer radius rho_A with holes; the hole
/// pattern must sit in the closed sector inside {rho < rho0p}.
struct SectorScene {
  Opening omega;
  double outer_radius = 1.0;  // rho_A
  double rho0 = 1.0;          // corner data radius, <= outer_radius
  double rho0p = 0.5;         // pattern hull radius, < rho0
  std::vector<HoleSpec> holes;

  double eps0() const { return rho0 / rho0p; }
};

struct ValidationIssue {
  std::string what;
  int hole = -1;  // index, or -1 for scene-level
};

struct ValidationReport {
  bool ok = true;
  std::vector<ValidationIssue> issues;
};

/// Checks the standing geometric assumptions: holes simple, pairwise
/// disjoint, contained in the sector within {rho < rho0p}; contact with a
/// sector side only along segments (isolated touch points break the
/// Lipschitz property of the odd extension); contact connected per side.
ValidationReport validate_pattern(const SectorScene& scene);

/// Odd (reflection) extension of the region bounded by c, assumed to lie in
/// the closed upper half-plane. Returns the boundary loops of the extension:
/// one loop per maximal non-axis chain when c meets the axis in segments,
/// or {c, mirror(c)} when c avoids the axis entirely. Throws when c touches
/// the axis in an isolated point.
std::vector<BoundaryCurve> odd_extend_domain(const BoundaryCurve& c,
                                             double tol = 1e-12);

/// rho^kappa e^{i kappa theta} with theta the sector-branch argument of p.
/// Rejects p = 0 with kappa <= 0 and images with angle >= 2pi.
Complex conformal_power_map(Complex p, double kappa);

enum class ComponentKind { AxisSymmetric, MirrorPair };

/// One hole component of the transformed pattern. `upper` is the part of
/// the boundary strictly above the axis (the mirror half is implied); for
/// MirrorPair it is the whole upper curve Q+ and the partner Q- is its
/// mirror. `full` is the assembled closed boundary (AxisSymmetric only).
struct TransformedComponent {
  ComponentKind kind;
  std::vector<Segment> upper;
  BoundaryCurve full;         // AxisSymmetric: the odd-extended loop
  BoundaryCurve upper_curve;  // MirrorPair: Q+ as a closed curve
};

/// Image of the scene under the composite map: power map to the half-plane
/// followed by odd reflection. The outer boundary is exactly the circle of
/// radius outer_radius^kappa.
struct TransformedScene {
  double kappa = 2.0;
  double outer_radius_B = 1.0;
  std::vector<TransformedComponent> components;
  int m_cross = 0;  // axis-symmetric components
  int m_pair = 0;   // mirror pairs

  int m_total() const { return m_cross + 2 * m_pair; }
  double eta_of_eps(double eps) const { return std::pow(eps, kappa); }
  double eps_of_eta(double eta) const { return std::pow(eta, 1.0 / kappa); }
  /// Hull radius max |Y| over all hole boundaries.
  double pattern_radius() const;
};

/// Maps every hole through the power map (polyline refit, `refit` nodes per
/// source segment), classifies side contact, odd-extends or mirror-pairs.
TransformedScene transform_scene(const SectorScene& scene, int refit = 64);

}  // namespace s2s
