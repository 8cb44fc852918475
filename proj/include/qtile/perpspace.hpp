#pragma once

#include "qtile/gpp.hpp"
#include "qtile/tiling.hpp"

#include <clipper2/clipper.h>

#include <string>
#include <vector>

namespace qtile {

/// A region of perpendicular space as integer rings on a grid of pitch 1 / kPerpScale:
/// counter-clockwise outer rings, clockwise holes, non-zero fill.
using PerpRegion = Clipper2Lib::Paths64;
inline constexpr double kPerpScale = 1e9;

PerpRegion region_from(const std::vector<Point2>& loop);
std::vector<std::vector<Point2>> rings_of(const PerpRegion& r);

struct PerpCloud {
  std::vector<Point2> points;
  int generation = 0;
  std::vector<std::string> rule_history;
};

/// Perpendicular images of the vertices; with interior_only, only vertices of non-peripheral faces.
PerpCloud project_cloud(const Tiling& tiling, bool interior_only = false);

/// Largest signed distance of a point beyond the regular decagon with vertices e_j
/// (negative when every point is strictly inside).
double hull_containment(const std::vector<Point2>& points);

/// The orthogonal map of perpendicular space induced by g (rotation by one step in physical
/// space is rotation by 7 * 36 degrees here).
Eigen::Matrix2d perp_action(const D10Element& g);

/// Half the L1 distance between the normalized bins x bins histograms of the cloud and of its
/// image under g, on the square [-1, 1]^2.
double symmetry_mismatch(const PerpCloud& cloud, const D10Element& g, int bins = 64);

enum class CarveMode { None, Left, Right };

struct DualMapConfig {
  double contraction = 0.0;         // sigma*, the conjugate of the expansion factor
  std::vector<Point2> translates;  // perpendicular images of the motif
  CarveMode carve = CarveMode::None;
  ModuleVector carve_offset = ModuleVector::Zero();  // removed T-complex vertex in frame coordinates

  static DualMapConfig for_rule(const GppRule& rule, const RuleCatalog& cat = RuleCatalog::builtin());
};

/// Drops rings below 1e-10 in area.
PerpRegion clean(const PerpRegion& r);
PerpRegion translated(const PerpRegion& r, const Point2& t);
PerpRegion scaled(const PerpRegion& r, double s);
PerpRegion mirrored(const PerpRegion& r);
PerpRegion union_all(std::vector<PerpRegion> parts);
PerpRegion intersection(const PerpRegion& a, const PerpRegion& b);
PerpRegion difference(const PerpRegion& a, const PerpRegion& b);
double area(const PerpRegion& r);

/// The ten-pointed star: outer vertices e_j, inner vertices at radius cos36/cos18.
PerpRegion star_decagon();
/// The closed regular decagon with vertices e_j.
PerpRegion hull_decagon();

/// sigma* X + S_perp.
PerpRegion dual_map_step(const PerpRegion& x, const DualMapConfig& cfg);

/// Perpendicular image of the points removed at the acute corners of the rhombi whose four
/// vertices project into source.
PerpRegion carve_region(const PerpRegion& source, const DualMapConfig& cfg);

/// Carves mapped = dual_map_step(source) according to cfg.carve.
PerpRegion carve_step(const PerpRegion& mapped, const PerpRegion& source, const DualMapConfig& cfg);

/// X_0, X_1, ..., X_n with X_{i+1} = carve(dual_map(X_i)).
std::vector<PerpRegion> surface_iterates(const PerpRegion& x0, const DualMapConfig& cfg, int n);

/// sup over points of a of the distance to b, resolved to about h.
double directed_hausdorff(const PerpRegion& a, const PerpRegion& b, double h = 5e-4);
/// Hausdorff distance between the closed regions a and b.
double hausdorff(const PerpRegion& a, const PerpRegion& b, double h = 5e-4);

struct SurfaceReport {
  double outside_fraction = 0.0;  // cloud points farther than tolerance outside the region
  double uncovered_fraction = 0.0;  // region area with no cloud point within radius
  long points = 0;
};

SurfaceReport validate_surface(const PerpCloud& cloud, const PerpRegion& region, double radius = 0.02,
                               double tolerance = 1e-9);

/// The obtuse golden triangle standing inward on the hull edge e_j e_{j+1}, split into the regular
/// pentagon at its apex and the two acute golden triangles at its base corners.
struct EdgeTriangle {
  PerpRegion triangle, pentagon, left, right;
};
EdgeTriangle edge_triangle(int j);

struct Occupancy {
  double pentagon = 0.0;
  double triangles = 0.0;  // both base triangles together
  double left = 0.0, right = 0.0;
};
/// Fractions of the pieces of edge_triangle(j) covered by region.
Occupancy edge_triangle_occupancy(const PerpRegion& region, int j);

}  // namespace qtile
