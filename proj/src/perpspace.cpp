#include "qtile/perpspace.hpp"

#include <boost/geometry.hpp>
#include <boost/geometry/geometries/point_xy.hpp>
#include <boost/geometry/geometries/segment.hpp>
#include <boost/geometry/index/rtree.hpp>

#include <algorithm>
#include <cmath>
#include <unordered_map>

namespace qtile {

namespace {

namespace bg = boost::geometry;
namespace bgi = boost::geometry::index;
using BgPoint = bg::model::d2::point_xy<double>;
using Segment = bg::model::segment<BgPoint>;
namespace cl = Clipper2Lib;

constexpr double kPi = 3.14159265358979323846;
constexpr double kSliverArea = 1e-10;

Point2 unit_at(double degrees) { return {std::cos(degrees * kPi / 180.0), std::sin(degrees * kPi / 180.0)}; }

cl::Point64 grid_point(const Point2& p) { return {std::llround(p.x() * kPerpScale), std::llround(p.y() * kPerpScale)}; }
Point2 real_point(const cl::Point64& p) { return Point2(p.x, p.y) / kPerpScale; }

template <typename F>
PerpRegion transform_points(const PerpRegion& r, F&& f) {
  PerpRegion out = r;
  for (auto& path : out) {
    for (auto& p : path) p = grid_point(f(real_point(p)));
  }
  return out;
}

std::vector<Segment> segments_of(const PerpRegion& r) {
  std::vector<Segment> segs;
  for (const auto& ring : rings_of(r)) {
    for (std::size_t i = 0; i < ring.size(); ++i) {
      const Point2& a = ring[i];
      const Point2& b = ring[(i + 1) % ring.size()];
      segs.emplace_back(BgPoint(a.x(), a.y()), BgPoint(b.x(), b.y()));
    }
  }
  return segs;
}

// Point location against many rings: edges bucketed into horizontal slabs for even-odd tests,
// and an R-tree for boundary distances.
class RegionIndex {
 public:
  explicit RegionIndex(const PerpRegion& r) : segs_(segments_of(r)), tree_(segs_.begin(), segs_.end()) {
    const cl::Rect64 box = cl::GetBounds(r);
    y0_ = box.top / kPerpScale;
    const double y1 = box.bottom / kPerpScale;
    slabs_ = std::max<int>(1, static_cast<int>(std::sqrt(static_cast<double>(segs_.size()))) * 4);
    height_ = std::max(y1 - y0_, 1e-12) / slabs_;
    bucket_.assign(slabs_, {});
    for (int i = 0; i < static_cast<int>(segs_.size()); ++i) {
      const double a = segs_[i].first.y(), b = segs_[i].second.y();
      const int lo = slab(std::min(a, b)), hi = slab(std::max(a, b));
      for (int s = lo; s <= hi; ++s) bucket_[s].push_back(i);
    }
  }

  bool contains(const Point2& p) const {
    if (p.y() < y0_ || p.y() > y0_ + height_ * slabs_) return false;
    bool in = false;
    for (int i : bucket_[slab(p.y())]) {
      const auto& s = segs_[i];
      const double ay = s.first.y(), by = s.second.y();
      if ((ay > p.y()) == (by > p.y())) continue;
      const double x = s.first.x() + (p.y() - ay) * (s.second.x() - s.first.x()) / (by - ay);
      if (p.x() < x) in = !in;
    }
    return in;
  }

  double boundary_distance(const Point2& p) const {
    if (segs_.empty()) return std::numeric_limits<double>::infinity();
    const BgPoint q(p.x(), p.y());
    std::vector<Segment> hit;
    tree_.query(bgi::nearest(q, 1), std::back_inserter(hit));
    return bg::distance(q, hit.front());
  }

  double distance(const Point2& p) const { return contains(p) ? 0.0 : boundary_distance(p); }

 private:
  int slab(double y) const { return std::clamp(static_cast<int>((y - y0_) / height_), 0, slabs_ - 1); }

  std::vector<Segment> segs_;
  bgi::rtree<Segment, bgi::quadratic<16>> tree_;
  double y0_ = 0.0, height_ = 1.0;
  int slabs_ = 1;
  std::vector<std::vector<int>> bucket_;
};

std::vector<Point2> boundary_samples(const PerpRegion& r, double h) {
  std::vector<Point2> out;
  for (const auto& s : segments_of(r)) {
    const Point2 a(s.first.x(), s.first.y()), b(s.second.x(), s.second.y());
    const int n = std::max(1, static_cast<int>(std::ceil((b - a).norm() / h)));
    for (int k = 0; k < n; ++k) out.push_back(a + (b - a) * (static_cast<double>(k) / n));
  }
  return out;
}

}  // namespace

PerpCloud project_cloud(const Tiling& tiling, bool interior_only) {
  PerpCloud c;
  c.generation = tiling.generation;
  c.rule_history = tiling.rule_history;
  const auto& pts = tiling.vertices().points();
  std::vector<char> keep(pts.size(), !interior_only);
  if (interior_only)
    for (const Tile& f : tiling.faces())
      if (!f.peripheral)
        for (int v : f.boundary) keep[v] = 1;
  c.points.reserve(pts.size());
  for (std::size_t i = 0; i < pts.size(); ++i)
    if (keep[i]) c.points.push_back(to_perp(pts[i]));
  return c;
}

double hull_containment(const std::vector<Point2>& points) {
  const double apothem = std::cos(kPi / 10.0);
  std::array<Point2, 10> normals;
  for (int j = 0; j < 10; ++j) normals[j] = unit_at(36.0 * j + 18.0);
  double worst = -std::numeric_limits<double>::infinity();
  for (const auto& p : points) {
    double d = -std::numeric_limits<double>::infinity();
    for (const auto& n : normals) d = std::max(d, p.dot(n) - apothem);
    worst = std::max(worst, d);
  }
  return worst;
}

Eigen::Matrix2d perp_action(const D10Element& g) {
  const double a = 36.0 * ((7 * g.rotation) % 10) * kPi / 180.0;
  Eigen::Matrix2d rot;
  rot << std::cos(a), -std::sin(a), std::sin(a), std::cos(a);
  Eigen::Matrix2d flip = Eigen::Matrix2d::Identity();
  if (g.reflected) flip(1, 1) = -1.0;
  return rot * flip;
}

double symmetry_mismatch(const PerpCloud& cloud, const D10Element& g, int bins) {
  if (cloud.points.empty()) return 0.0;
  auto bin = [bins](double x) { return std::clamp(static_cast<int>(std::floor((x + 1.0) * 0.5 * bins)), 0, bins - 1); };
  std::vector<long> a(static_cast<std::size_t>(bins) * bins, 0), b(a.size(), 0);
  const Eigen::Matrix2d m = perp_action(g);
  for (const auto& p : cloud.points) {
    ++a[bin(p.x()) * bins + bin(p.y())];
    const Point2 q = m * p;
    ++b[bin(q.x()) * bins + bin(q.y())];
  }
  long diff = 0;
  for (std::size_t i = 0; i < a.size(); ++i) diff += std::labs(a[i] - b[i]);
  return 0.5 * static_cast<double>(diff) / static_cast<double>(cloud.points.size());
}

DualMapConfig DualMapConfig::for_rule(const GppRule& rule, const RuleCatalog& cat) {
  DualMapConfig cfg;
  cfg.contraction = std::pow(-1.0 / kTau, rule.sigma_exponent);
  for (const auto& m : rule.motif.points()) cfg.translates.push_back(to_perp(m));
  const bool has_t = std::any_of(rule.templates.begin(), rule.templates.end(),
                                 [](const EliminationTemplate& t) { return t.kind == ComplexKind::T; });
  if (has_t && rule.chirality != Chirality::None) {
    cfg.carve = rule.chirality == Chirality::Left ? CarveMode::Left : CarveMode::Right;
    cfg.carve_offset = cat.t_inner_vertex(rule.chirality);
  }
  return cfg;
}

PerpRegion region_from(const std::vector<Point2>& loop) {
  cl::Path64 path;
  for (const auto& p : loop) path.push_back(grid_point(p));
  if (cl::Area(path) < 0) std::reverse(path.begin(), path.end());
  return {path};
}

std::vector<std::vector<Point2>> rings_of(const PerpRegion& r) {
  std::vector<std::vector<Point2>> out;
  for (const auto& path : r) {
    std::vector<Point2> ring;
    for (const auto& p : path) ring.push_back(real_point(p));
    out.push_back(std::move(ring));
  }
  return out;
}

PerpRegion clean(const PerpRegion& r) {
  const double limit = kSliverArea * kPerpScale * kPerpScale;
  PerpRegion out;
  for (const auto& path : r) {
    if (std::abs(cl::Area(path)) >= limit) out.push_back(path);
  }
  return out;
}

PerpRegion translated(const PerpRegion& r, const Point2& t) {
  const cl::Point64 d = grid_point(t);
  return cl::TranslatePaths(r, d.x, d.y);
}

PerpRegion scaled(const PerpRegion& r, double s) {
  // negative factors are point reflections, which keep ring orientation
  return transform_points(r, [&](const Point2& p) { return Point2(p * s); });
}

PerpRegion mirrored(const PerpRegion& r) {
  PerpRegion out = transform_points(r, [](const Point2& p) { return Point2(p.x(), -p.y()); });
  for (auto& path : out) std::reverse(path.begin(), path.end());
  return out;
}

PerpRegion union_all(std::vector<PerpRegion> parts) {
  PerpRegion all;
  for (auto& p : parts) all.insert(all.end(), p.begin(), p.end());
  return clean(cl::Union(all, cl::FillRule::NonZero));
}

PerpRegion intersection(const PerpRegion& a, const PerpRegion& b) {
  return clean(cl::Intersect(a, b, cl::FillRule::NonZero));
}

PerpRegion difference(const PerpRegion& a, const PerpRegion& b) {
  return clean(cl::Difference(a, b, cl::FillRule::NonZero));
}

double area(const PerpRegion& r) { return cl::Area(r) / (kPerpScale * kPerpScale); }

PerpRegion star_decagon() {
  const double inner = std::cos(kPi / 5.0) / std::cos(kPi / 10.0);
  std::vector<Point2> loop;
  for (int j = 0; j < 10; ++j) {
    loop.push_back(unit_at(36.0 * j));
    loop.push_back(inner * unit_at(36.0 * j + 18.0));
  }
  return region_from(loop);
}

PerpRegion hull_decagon() {
  std::vector<Point2> loop;
  for (int j = 0; j < 10; ++j) loop.push_back(unit_at(36.0 * j));
  return region_from(loop);
}

PerpRegion dual_map_step(const PerpRegion& x, const DualMapConfig& cfg) {
  const PerpRegion small = scaled(x, cfg.contraction);
  std::vector<PerpRegion> copies;
  for (const auto& s : cfg.translates) copies.push_back(clean(translated(small, s)));
  return union_all(std::move(copies));
}

PerpRegion carve_region(const PerpRegion& source, const DualMapConfig& cfg) {
  if (cfg.carve == CarveMode::None) return {};
  std::vector<PerpRegion> parts;
  for (int d = 0; d < 10; ++d) {
    // rhombus spanned by e_d and e_{d+1} with its acute corner at a vertex projecting to x
    const Point2 a = to_perp(unit(d)), b = to_perp(unit(d + 1));
    PerpRegion corner = intersection(source, translated(source, -a));
    corner = intersection(corner, translated(source, -b));
    corner = intersection(corner, translated(source, -(a + b)));
    if (corner.empty()) continue;
    const Point2 off = to_perp(apply_symmetry(D10Element::rotation_by(d), cfg.carve_offset));
    parts.push_back(clean(translated(scaled(corner, cfg.contraction), off)));
  }
  return union_all(std::move(parts));
}

PerpRegion carve_step(const PerpRegion& mapped, const PerpRegion& source, const DualMapConfig& cfg) {
  if (cfg.carve == CarveMode::None) return mapped;
  return difference(mapped, carve_region(source, cfg));
}

std::vector<PerpRegion> surface_iterates(const PerpRegion& x0, const DualMapConfig& cfg, int n) {
  std::vector<PerpRegion> xs{clean(x0)};
  for (int i = 0; i < n; ++i) xs.push_back(carve_step(dual_map_step(xs.back(), cfg), xs.back(), cfg));
  return xs;
}

double directed_hausdorff(const PerpRegion& a, const PerpRegion& b, double h) {
  // sup over a of the distance to b is attained in the closure of a \ b: probe its boundary and
  // a grid of pitch h inside each of its pieces
  const PerpRegion diff = difference(a, b);
  if (diff.empty()) return 0.0;
  const RegionIndex ib(b), id(diff);
  double d = 0.0;
  for (const auto& p : boundary_samples(diff, h)) d = std::max(d, ib.distance(p));
  for (const auto& ring : diff) {
    if (cl::Area(ring) <= 0) continue;
    const cl::Rect64 box = cl::GetBounds(cl::Paths64{ring});
    for (double y = box.top / kPerpScale + h / 2; y < box.bottom / kPerpScale; y += h) {
      for (double x = box.left / kPerpScale + h / 2; x < box.right / kPerpScale; x += h) {
        const Point2 p(x, y);
        if (id.contains(p)) d = std::max(d, ib.distance(p));
      }
    }
  }
  return d;
}

double hausdorff(const PerpRegion& a, const PerpRegion& b, double h) {
  return std::max(directed_hausdorff(a, b, h), directed_hausdorff(b, a, h));
}

SurfaceReport validate_surface(const PerpCloud& cloud, const PerpRegion& region, double radius, double tolerance) {
  SurfaceReport rep;
  rep.points = static_cast<long>(cloud.points.size());
  if (cloud.points.empty()) return rep;
  const RegionIndex idx(region);
  long outside = 0;
  for (const auto& p : cloud.points) {
    if (!idx.contains(p) && idx.boundary_distance(p) > tolerance) ++outside;
  }
  rep.outside_fraction = static_cast<double>(outside) / static_cast<double>(cloud.points.size());

  // hash the cloud on cells of size radius, then probe a grid of spacing radius / 2 over the region
  auto key = [radius](const Point2& p) {
    const auto ix = static_cast<std::int64_t>(std::floor(p.x() / radius));
    const auto iy = static_cast<std::int64_t>(std::floor(p.y() / radius));
    return (ix << 32) ^ (iy & 0xffffffffLL);
  };
  std::unordered_map<std::int64_t, std::vector<int>> grid;
  for (int i = 0; i < static_cast<int>(cloud.points.size()); ++i) grid[key(cloud.points[i])].push_back(i);
  const cl::Rect64 box = cl::GetBounds(region);
  const double step = radius / 2.0;
  long inside = 0, bare = 0;
  for (double y = box.top / kPerpScale + step / 2; y < box.bottom / kPerpScale; y += step) {
    for (double x = box.left / kPerpScale + step / 2; x < box.right / kPerpScale; x += step) {
      const Point2 p(x, y);
      if (!idx.contains(p)) continue;
      ++inside;
      bool near = false;
      for (int dx = -1; dx <= 1 && !near; ++dx) {
        for (int dy = -1; dy <= 1 && !near; ++dy) {
          auto it = grid.find(key(p + Point2(dx * radius, dy * radius)));
          if (it == grid.end()) continue;
          for (int i : it->second) {
            if ((cloud.points[i] - p).norm() <= radius) {
              near = true;
              break;
            }
          }
        }
      }
      if (!near) ++bare;
    }
  }
  rep.uncovered_fraction = inside ? static_cast<double>(bare) / static_cast<double>(inside) : 0.0;
  return rep;
}

EdgeTriangle edge_triangle(int j) {
  const Point2 a = unit_at(36.0 * j), b = unit_at(36.0 * (j + 1));
  const Point2 mid = (a + b) / 2.0;
  const double base = (b - a).norm();
  const Point2 along = (b - a) / base;
  const Point2 inward(-along.y(), along.x());
  const Point2 apex = mid + inward * (base / 2.0 * std::tan(kPi / 5.0));
  const double leg = (a - apex).norm();
  const double side = leg / kTau;  // the pentagon's edge
  const Point2 la = apex + (a - apex) / leg * side, lb = apex + (b - apex) / leg * side;
  const Point2 ba = mid - along * (side / 2.0), bb = mid + along * (side / 2.0);
  EdgeTriangle t;
  t.triangle = region_from({a, b, apex});
  t.pentagon = region_from({apex, la, ba, bb, lb});
  t.left = region_from({la, a, ba});
  t.right = region_from({lb, bb, b});
  return t;
}

Occupancy edge_triangle_occupancy(const PerpRegion& region, int j) {
  const EdgeTriangle t = edge_triangle(j);
  auto covered = [&](const PerpRegion& p) { return area(intersection(region, p)); };
  Occupancy o;
  const double al = area(t.left), ar = area(t.right);
  const double cl = covered(t.left), cr = covered(t.right);
  o.pentagon = covered(t.pentagon) / area(t.pentagon);
  o.left = cl / al;
  o.right = cr / ar;
  o.triangles = (cl + cr) / (al + ar);
  return o;
}

}  // namespace qtile
