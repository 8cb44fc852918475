#include "qtile/tiling.hpp"

#include <algorithm>
#include <cmath>
#include <Eigen/Geometry>
#include <iterator>
#include <limits>
#include <map>
#include <stdexcept>
#include <unordered_set>

namespace qtile {

namespace {

constexpr double kSin36 = 0.58778525229247312917;

const std::map<std::vector<int>, Shape>& shape_table() {
  static const std::map<std::vector<int>, Shape> table = [] {
    std::map<std::vector<int>, Shape> m;
    for (Shape s : {Shape::R, Shape::P, Shape::H, Shape::C, Shape::S}) m[canonical_word(prototile_word(s))] = s;
    return m;
  }();
  return table;
}

std::vector<int> prototile_turns(Shape s) {
  switch (s) {
    case Shape::R: return {1, 4, 1, 4};
    case Shape::P: return {2, 2, 2, 2, 2};
    case Shape::H: return {1, 2, 2, 1, 2, 2};
    case Shape::C: return {-2, 4, -2, 4, 1, 1, 4};
    case Shape::S: return {-2, 4, -2, 4, -2, 4, -2, 4, -2, 4};
    default: return {};
  }
}

// Exact test: do segments ab and cd share a point other than a common endpoint?
bool segments_meet(const ModuleVector& a, const ModuleVector& b, const ModuleVector& c, const ModuleVector& d) {
  const bool share = (a == c) || (a == d) || (b == c) || (b == d);
  if (share) {
    // Two distinct segments from a shared endpoint overlap only if they point the same way.
    const ModuleVector& p = (a == c || a == d) ? a : b;
    const ModuleVector& u = (p == a) ? b : a;
    const ModuleVector& w = (p == c) ? d : c;
    return orientation(p, u, w) == 0 && twice_dot(u - p, w - p).sign() > 0;
  }
  const int o1 = orientation(a, b, c), o2 = orientation(a, b, d);
  const int o3 = orientation(c, d, a), o4 = orientation(c, d, b);
  if (o1 * o2 < 0 && o3 * o4 < 0) return true;
  auto on_segment = [](const ModuleVector& p, const ModuleVector& q, const ModuleVector& r) {
    // r collinear with pq; inside the closed segment iff (r - p).(r - q) <= 0
    return twice_dot(r - p, r - q).sign() <= 0;
  };
  if (o1 == 0 && on_segment(a, b, c)) return true;
  if (o2 == 0 && on_segment(a, b, d)) return true;
  if (o3 == 0 && on_segment(c, d, a)) return true;
  if (o4 == 0 && on_segment(c, d, b)) return true;
  return false;
}

std::int64_t cell_key(double x, double y) {
  const auto ix = static_cast<std::int64_t>(std::floor(x));
  const auto iy = static_cast<std::int64_t>(std::floor(y));
  return (ix << 32) ^ (iy & 0xffffffffLL);
}

struct Incidence {
  std::vector<int> offset, nbr, edge;
  std::vector<std::int8_t> dir;
};

Incidence build_incidence(const PointSet& pts, const std::vector<Edge>& edges) {
  Incidence inc;
  const int n = pts.size();
  inc.offset.assign(n + 1, 0);
  for (const auto& [i, j] : edges) {
    ++inc.offset[i + 1];
    ++inc.offset[j + 1];
  }
  for (int v = 0; v < n; ++v) inc.offset[v + 1] += inc.offset[v];
  const std::size_t m = inc.offset[n];
  inc.nbr.resize(m);
  inc.edge.resize(m);
  inc.dir.resize(m);
  std::vector<int> fill(inc.offset.begin(), inc.offset.end() - 1);
  for (int e = 0; e < static_cast<int>(edges.size()); ++e) {
    const auto [i, j] = edges[e];
    const int d = direction_of(pts[j] - pts[i]);
    if (d < 0) throw std::invalid_argument("edge is not a unit vector: " + to_string(pts[j] - pts[i]));
    int k = fill[i]++;
    inc.nbr[k] = j; inc.edge[k] = e; inc.dir[k] = static_cast<std::int8_t>(d);
    k = fill[j]++;
    inc.nbr[k] = i; inc.edge[k] = e; inc.dir[k] = static_cast<std::int8_t>((d + 5) % 10);
  }
  for (int v = 0; v < n; ++v) {
    const int lo = inc.offset[v], hi = inc.offset[v + 1];
    // insertion sort on at most ten entries
    for (int a = lo + 1; a < hi; ++a) {
      for (int b = a; b > lo && inc.dir[b - 1] > inc.dir[b]; --b) {
        std::swap(inc.dir[b - 1], inc.dir[b]);
        std::swap(inc.nbr[b - 1], inc.nbr[b]);
        std::swap(inc.edge[b - 1], inc.edge[b]);
      }
    }
  }
  return inc;
}

struct Walk {
  FaceSet faces;
  std::vector<int> half_edge_face;  // per incidence entry: bounded index, or -1 - outer index
};

Walk walk_faces(const PointSet& pts, const Incidence& inc) {
  Walk w;
  const std::size_t m = inc.nbr.size();
  w.half_edge_face.assign(m, std::numeric_limits<int>::min());
  auto entry_of = [&](int v, int d) {
    for (int k = inc.offset[v]; k < inc.offset[v + 1]; ++k) {
      if (inc.dir[k] == d) return k;
    }
    return -1;
  };
  for (std::size_t start = 0; start < m; ++start) {
    if (w.half_edge_face[start] != std::numeric_limits<int>::min()) continue;
    int v = static_cast<int>(std::upper_bound(inc.offset.begin(), inc.offset.end(), static_cast<int>(start)) -
                             inc.offset.begin()) - 1;
    Tile t;
    std::vector<int> entries;
    int k = static_cast<int>(start);
    std::size_t steps = 0;
    do {
      if (++steps > m) throw std::runtime_error("face traversal did not close at vertex " + to_string(pts[v]));
      entries.push_back(k);
      t.boundary.push_back(v);
      t.direction_word.push_back(inc.dir[k]);
      const int u = inc.nbr[k];
      const int r = (inc.dir[k] + 5) % 10;
      int next = -1;
      for (int s = 1; s <= 10 && next < 0; ++s) next = entry_of(u, ((r - s) % 10 + 10) % 10);
      v = u;
      k = next;
    } while (k != static_cast<int>(start));

    // shoelace relative to the first vertex keeps the integers small
    const ModuleVector& base = pts[t.boundary[0]];
    GoldenInt twice;
    for (std::size_t i = 1; i + 1 < t.boundary.size(); ++i) {
      twice += cross_over_sin36(pts[t.boundary[i]] - base, pts[t.boundary[i + 1]] - base);
    }
    t.twice_area = twice;
    int id;
    if (twice.sign() > 0) {
      t.canonical = canonical_word(t.direction_word);
      auto it = shape_table().find(t.canonical);
      t.shape = it == shape_table().end() ? Shape::Unknown : it->second;
      id = static_cast<int>(w.faces.bounded.size());
      w.faces.bounded.push_back(std::move(t));
    } else {
      id = -1 - static_cast<int>(w.faces.outer.size());
      w.faces.outer.push_back(std::move(t));
    }
    for (int e : entries) w.half_edge_face[e] = id;
  }
  return w;
}

bool is_simple(const Tile& t) {
  std::vector<int> b = t.boundary;
  std::sort(b.begin(), b.end());
  return std::adjacent_find(b.begin(), b.end()) == b.end();
}

}  // namespace

char shape_letter(Shape s) {
  switch (s) {
    case Shape::R: return 'R';
    case Shape::P: return 'P';
    case Shape::H: return 'H';
    case Shape::C: return 'C';
    case Shape::S: return 'S';
    default: return '?';
  }
}

std::optional<Shape> shape_from_letter(char c) {
  switch (c) {
    case 'R': return Shape::R;
    case 'P': return Shape::P;
    case 'H': return Shape::H;
    case 'C': return Shape::C;
    case 'S': return Shape::S;
    default: return std::nullopt;
  }
}

double Tile::area() const { return twice_area.to_double() * 0.5 * kSin36; }

PointSet::PointSet(std::vector<ModuleVector> pts) : pts_(std::move(pts)) {
  std::sort(pts_.begin(), pts_.end(), ModuleVectorLess{});
  pts_.erase(std::unique(pts_.begin(), pts_.end()), pts_.end());
  index_.reserve(pts_.size() * 2);
  for (int i = 0; i < static_cast<int>(pts_.size()); ++i) index_.emplace(pts_[i], i);
}

std::vector<Edge> unit_pairs(const PointSet& pts) {
  std::vector<Edge> out;
  for (int i = 0; i < pts.size(); ++i) {
    for (int d = 0; d < 5; ++d) {
      const int j = pts.find(pts[i] + unit(d));
      if (j >= 0) out.emplace_back(i, j);
    }
  }
  return out;
}

std::vector<std::pair<int, int>> crossing_segments(const PointSet& pts, const std::vector<Edge>& segs) {
  std::vector<std::pair<std::int64_t, int>> cells;
  std::vector<Point2> mid(segs.size());
  cells.reserve(segs.size());
  for (int s = 0; s < static_cast<int>(segs.size()); ++s) {
    mid[s] = 0.5 * (to_physical(pts[segs[s].first]) + to_physical(pts[segs[s].second]));
    cells.emplace_back(cell_key(mid[s].x(), mid[s].y()), s);
  }
  std::sort(cells.begin(), cells.end());
  std::vector<std::pair<int, int>> out;
  for (int s = 0; s < static_cast<int>(segs.size()); ++s) {
    const double cx = std::floor(mid[s].x()), cy = std::floor(mid[s].y());
    for (int dx = -1; dx <= 1; ++dx) {
      for (int dy = -1; dy <= 1; ++dy) {
        const std::int64_t key = cell_key(cx + dx + 0.5, cy + dy + 0.5);
        auto lo = std::lower_bound(cells.begin(), cells.end(), std::make_pair(key, -1));
        for (auto it = lo; it != cells.end() && it->first == key; ++it) {
          const int o = it->second;
          if (o <= s) continue;
          // unit segments can only meet if their midpoints are within distance 1
          if ((mid[o] - mid[s]).squaredNorm() > 1.0 + 1e-9) continue;
          const auto& [a, b] = segs[s];
          const auto& [c, d] = segs[o];
          if (segments_meet(pts[a], pts[b], pts[c], pts[d])) out.emplace_back(s, o);
        }
      }
    }
  }
  std::sort(out.begin(), out.end());
  return out;
}

EdgeBuild build_edges(const PointSet& pts) {
  const std::vector<Edge> pairs = unit_pairs(pts);
  std::vector<char> crossed(pairs.size(), 0);
  for (const auto& [s, o] : crossing_segments(pts, pairs)) crossed[s] = crossed[o] = 1;
  EdgeBuild eb;
  for (std::size_t i = 0; i < pairs.size(); ++i) (crossed[i] ? eb.crossed : eb.edges).push_back(pairs[i]);
  return eb;
}

FaceSet extract_faces(const PointSet& pts, const std::vector<Edge>& edges) {
  return walk_faces(pts, build_incidence(pts, edges)).faces;
}

std::vector<int> turn_word(const std::vector<int>& w) {
  const int n = static_cast<int>(w.size());
  std::vector<int> t(n);
  for (int i = 0; i < n; ++i) t[i] = ((w[i] - w[(i + n - 1) % n] + 15) % 10) - 5;
  return t;
}

std::vector<int> canonical_word(const std::vector<int>& direction_word) {
  const std::vector<int> t = turn_word(direction_word);
  const int n = static_cast<int>(t.size());
  std::vector<int> best, cand(n);
  for (int rev = 0; rev < 2; ++rev) {
    for (int s = 0; s < n; ++s) {
      for (int i = 0; i < n; ++i) cand[i] = rev ? t[((s - i) % n + n) % n] : t[(s + i) % n];
      if (best.empty() || cand < best) best = cand;
    }
  }
  return best;
}

Shape classify_tile(const std::vector<int>& direction_word) {
  auto it = shape_table().find(canonical_word(direction_word));
  return it == shape_table().end() ? Shape::Unknown : it->second;
}

std::vector<int> prototile_word(Shape s) {
  const std::vector<int> t = prototile_turns(s);
  std::vector<int> w(t.size(), 0);
  for (std::size_t i = 1; i < t.size(); ++i) w[i] = (w[i - 1] + t[i] + 10) % 10;
  return w;
}

GoldenInt twice_area_over_sin36(const std::vector<ModuleVector>& loop) {
  GoldenInt twice;
  for (std::size_t i = 1; i + 1 < loop.size(); ++i) twice += cross_over_sin36(loop[i] - loop[0], loop[i + 1] - loop[0]);
  return twice;
}

GoldenNum tile_area(Shape s) {
  if (s == Shape::Unknown) throw std::invalid_argument("tile_area: unknown shape");
  std::vector<ModuleVector> loop{ModuleVector::Zero()};
  for (int d : prototile_word(s)) loop.push_back(loop.back() + unit(d));
  loop.pop_back();
  const GoldenInt t = twice_area_over_sin36(loop);
  return GoldenNum(Rational(t.p(), 2), Rational(t.q(), 2));
}

UcReport check_unit_connectivity(const PointSet& pts, const std::vector<Edge>& edges) {
  UcReport rep;
  for (const auto& [i, j] : edges) {
    if (twice_norm_squared(pts[j] - pts[i]) != GoldenInt(2, 0)) {
      rep.ok = false;
      rep.message = "non-unit edge " + to_string(pts[i]) + " " + to_string(pts[j]);
      return rep;
    }
  }
  for (const auto& [s, o] : crossing_segments(pts, edges)) rep.crossings.emplace_back(edges[s], edges[o]);
  if (!rep.crossings.empty()) {
    rep.ok = false;
    rep.message = std::to_string(rep.crossings.size()) + " crossing edge pairs";
    return rep;
  }
  try {
    const FaceSet fs = extract_faces(pts, edges);
    for (int f = 0; f < static_cast<int>(fs.bounded.size()); ++f) {
      if (!is_simple(fs.bounded[f])) rep.non_simple_faces.push_back(f);
    }
  } catch (const std::runtime_error& e) {
    rep.ok = false;
    rep.message = e.what();
    return rep;
  }
  if (!rep.non_simple_faces.empty()) {
    rep.ok = false;
    rep.message = std::to_string(rep.non_simple_faces.size()) + " non-simple faces";
  }
  return rep;
}

Tiling Tiling::from_points(std::vector<ModuleVector> pts, int peripheral_depth) {
  Tiling t;
  t.pts_ = PointSet(std::move(pts));
  EdgeBuild eb = build_edges(t.pts_);
  t.edges_ = std::move(eb.edges);
  t.crossed_ = std::move(eb.crossed);
  const int n = t.pts_.size();

  Incidence inc = build_incidence(t.pts_, t.edges_);
  Walk w = walk_faces(t.pts_, inc);
  t.faces_ = std::move(w.faces.bounded);
  t.outer_ = std::move(w.faces.outer);

  t.adj_.assign(n, 0);
  for (int v = 0; v < n; ++v) {
    for (int k = inc.offset[v]; k < inc.offset[v + 1]; ++k) t.adj_[v] |= static_cast<std::uint16_t>(1u << inc.dir[k]);
  }
  t.edge_face_[0].assign(t.edges_.size(), -1);
  t.edge_face_[1].assign(t.edges_.size(), -1);
  for (int v = 0; v < n; ++v) {
    for (int k = inc.offset[v]; k < inc.offset[v + 1]; ++k) {
      const int side = t.edges_[inc.edge[k]].first == v ? 0 : 1;
      t.edge_face_[side][inc.edge[k]] = std::max(-1, w.half_edge_face[k]);
    }
  }
  t.inc_offset_ = std::move(inc.offset);
  t.inc_nbr_ = std::move(inc.nbr);
  t.inc_edge_ = std::move(inc.edge);
  t.inc_dir_ = std::move(inc.dir);

  t.vf_offset_.assign(n + 1, 0);
  for (const Tile& f : t.faces_) {
    for (int v : f.boundary) ++t.vf_offset_[v + 1];
  }
  for (int v = 0; v < n; ++v) t.vf_offset_[v + 1] += t.vf_offset_[v];
  t.vf_data_.resize(t.vf_offset_[n]);
  {
    std::vector<int> fill(t.vf_offset_.begin(), t.vf_offset_.end() - 1);
    for (int f = 0; f < static_cast<int>(t.faces_.size()); ++f) {
      for (int v : t.faces_[f].boundary) t.vf_data_[fill[v]++] = f;
    }
  }

  // UC: edges never cross by construction; faces must be simple and every dropped
  // (crossed) unit pair must be a chord of a single face.
  for (int f = 0; f < static_cast<int>(t.faces_.size()); ++f) {
    if (!is_simple(t.faces_[f])) t.uc_.non_simple_faces.push_back(f);
  }
  std::unordered_map<int, std::vector<int>> outer_at;
  for (int o = 0; o < static_cast<int>(t.outer_.size()); ++o) {
    for (int v : t.outer_[o].boundary) outer_at[v].push_back(-1 - o);
  }
  auto incident = [&](int v) {
    std::vector<int> fs(t.faces_at(v).begin(), t.faces_at(v).end());
    if (auto it = outer_at.find(v); it != outer_at.end()) fs.insert(fs.end(), it->second.begin(), it->second.end());
    std::sort(fs.begin(), fs.end());
    return fs;
  };
  for (const auto& [a, b] : t.crossed_) {
    const auto fa = incident(a), fb = incident(b);
    std::vector<int> common;
    std::set_intersection(fa.begin(), fa.end(), fb.begin(), fb.end(), std::back_inserter(common));
    if (common.empty()) t.uc_.stray_crossed_pairs.emplace_back(a, b);
  }
  t.uc_.ok = t.uc_.non_simple_faces.empty() && t.uc_.stray_crossed_pairs.empty();
  if (!t.uc_.ok) {
    t.uc_.message = std::to_string(t.uc_.non_simple_faces.size()) + " non-simple faces, " +
                    std::to_string(t.uc_.stray_crossed_pairs.size()) + " crossed pairs outside a single face";
  }
  t.mark_peripheral(peripheral_depth);
  return t;
}

int Tiling::neighbor(int v, int d) const {
  for (int k = inc_offset_[v]; k < inc_offset_[v + 1]; ++k) {
    if (inc_dir_[k] == d) return inc_nbr_[k];
  }
  return -1;
}

int Tiling::edge_id(int v, int d) const {
  for (int k = inc_offset_[v]; k < inc_offset_[v + 1]; ++k) {
    if (inc_dir_[k] == d) return inc_edge_[k];
  }
  return -1;
}

int Tiling::face_left_of(int v, int d) const {
  const int e = edge_id(v, d);
  if (e < 0) return -1;
  return edge_face_[edges_[e].first == v ? 0 : 1][e];
}

std::array<long, 6> Tiling::shape_counts(bool only_interior) const {
  std::array<long, 6> c{};
  for (const Tile& f : faces_) {
    if (only_interior && f.peripheral) continue;
    ++c[static_cast<int>(f.shape)];
  }
  return c;
}

void Tiling::mark_peripheral(int depth) {
  peripheral_depth_ = depth;
  for (Tile& f : faces_) f.peripheral = f.tainted;
  std::vector<char> hot(pts_.size(), 0);
  for (const Tile& o : outer_) {
    for (int v : o.boundary) hot[v] = 1;
  }
  for (int level = 0; level < depth; ++level) {
    std::vector<int> fresh;
    for (int f = 0; f < static_cast<int>(faces_.size()); ++f) {
      if (faces_[f].peripheral) continue;
      for (int v : faces_[f].boundary) {
        if (hot[v]) {
          fresh.push_back(f);
          break;
        }
      }
    }
    for (int f : fresh) {
      faces_[f].peripheral = true;
      for (int v : faces_[f].boundary) hot[v] = 1;
    }
  }
}

void Tiling::inherit_taint(const Tiling& parent, int sigma_exponent, double margin, int depth) {
  const double scale = std::pow(kTau, sigma_exponent);
  // Footprints of the suspicious parent faces, bucketed on a grid of the child's coordinates.
  struct Footprint {
    std::vector<Point2> poly;
  };
  std::vector<Footprint> prints;
  for (const Tile& f : parent.faces_) {
    if (f.shape != Shape::Unknown) continue;
    Footprint fp;
    for (int v : f.boundary) fp.poly.push_back(scale * to_physical(parent.pts_[v]));
    prints.push_back(std::move(fp));
  }
  for (Tile& f : faces_) f.tainted = false;
  if (!prints.empty()) {
    const double cell = 8.0;
    std::unordered_map<std::int64_t, std::vector<int>> grid;
    for (int i = 0; i < static_cast<int>(prints.size()); ++i) {
      Eigen::AlignedBox2d box;
      for (const auto& p : prints[i].poly) box.extend(p);
      const auto lo = ((box.min().array() - margin) / cell).floor().cast<std::int64_t>();
      const auto hi = ((box.max().array() + margin) / cell).floor().cast<std::int64_t>();
      for (std::int64_t x = lo.x(); x <= hi.x(); ++x) {
        for (std::int64_t y = lo.y(); y <= hi.y(); ++y) grid[(x << 32) ^ (y & 0xffffffffLL)].push_back(i);
      }
    }
    auto dist_to_poly = [](const Point2& p, const std::vector<Point2>& poly) {
      bool in = false;
      double best = std::numeric_limits<double>::infinity();
      for (std::size_t i = 0, j = poly.size() - 1; i < poly.size(); j = i++) {
        const Point2 a = poly[j], b = poly[i];
        if ((a.y() > p.y()) != (b.y() > p.y()) && p.x() < (b.x() - a.x()) * (p.y() - a.y()) / (b.y() - a.y()) + a.x()) in = !in;
        const Point2 ab = b - a;
        const double t = std::clamp((p - a).dot(ab) / ab.squaredNorm(), 0.0, 1.0);
        best = std::min(best, (a + t * ab - p).norm());
      }
      return in ? 0.0 : best;
    };
    for (Tile& f : faces_) {
      Point2 c = Point2::Zero();
      for (int v : f.boundary) c += to_physical(pts_[v]);
      c /= static_cast<double>(f.size());
      const auto key = (c.array() / cell).floor().cast<std::int64_t>();
      auto it = grid.find((key.x() << 32) ^ (key.y() & 0xffffffffLL));
      if (it == grid.end()) continue;
      for (int i : it->second) {
        if (dist_to_poly(c, prints[i].poly) <= margin) {
          f.tainted = true;
          break;
        }
      }
    }
  }
  mark_peripheral(depth);
}

int Tiling::euler_characteristic() const {
  return pts_.size() - static_cast<int>(edges_.size()) + static_cast<int>(faces_.size()) + 1;
}

int Tiling::components() const {
  const int n = pts_.size();
  std::vector<int> parent(n);
  for (int i = 0; i < n; ++i) parent[i] = i;
  auto find = [&](int x) {
    while (parent[x] != x) x = parent[x] = parent[parent[x]];
    return x;
  };
  int comps = n;
  for (const auto& [a, b] : edges_) {
    const int ra = find(a), rb = find(b);
    if (ra != rb) {
      parent[ra] = rb;
      --comps;
    }
  }
  return comps;
}

}  // namespace qtile
