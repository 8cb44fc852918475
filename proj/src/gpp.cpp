#include "qtile/gpp.hpp"

#include <nlohmann/json.hpp>

#include <algorithm>
#include <cmath>
#include <set>
#include <sstream>

namespace qtile {

using nlohmann::json;

namespace {

// A defect's influence reaches one child edge past the expanded footprint of its parent face.
constexpr double kTaintMargin = 1.0;

ModuleVector parse_vec(const json& j) {
  if (!j.is_array() || j.size() != 4) throw std::invalid_argument("module vector must be 4 integers: " + j.dump());
  return mv(j[0].get<std::int64_t>(), j[1].get<std::int64_t>(), j[2].get<std::int64_t>(), j[3].get<std::int64_t>());
}

std::vector<Shape> parse_shapes(const json& j) {
  std::vector<Shape> out;
  for (const auto& s : j) {
    const std::string t = s.get<std::string>();
    auto sh = t.size() == 1 ? shape_from_letter(t[0]) : std::nullopt;
    if (!sh) throw std::invalid_argument("unknown shape letter: " + t);
    out.push_back(*sh);
  }
  return out;
}

// Acute (36 degree) corners have turn 4; the crown's middle tip is the one flanked by two -2 turns.
bool is_crown_middle_tip(const std::vector<int>& t, int i) {
  const int n = static_cast<int>(t.size());
  return t[i] == 4 && t[(i + n - 1) % n] == -2 && t[(i + 1) % n] == -2;
}

bool subset_of(const std::string& have, const std::string& allowed) {
  return std::all_of(have.begin(), have.end(), [&](char c) { return allowed.find(c) != std::string::npos; });
}

std::string shape_multiset(const std::map<Shape, int>& m) {
  std::ostringstream os;
  bool first = true;
  for (Shape s : {Shape::C, Shape::H, Shape::P, Shape::R, Shape::S, Shape::Unknown}) {
    auto it = m.find(s);
    if (it == m.end()) continue;
    if (!first) os << ' ';
    os << shape_letter(s) << it->second;
    first = false;
  }
  return os.str();
}

bool point_in_polygon(const Point2& p, const std::vector<Point2>& poly) {
  bool in = false;
  for (std::size_t i = 0, j = poly.size() - 1; i < poly.size(); j = i++) {
    if ((poly[i].y() > p.y()) != (poly[j].y() > p.y()) &&
        p.x() < (poly[j].x() - poly[i].x()) * (p.y() - poly[i].y()) / (poly[j].y() - poly[i].y()) + poly[i].x()) {
      in = !in;
    }
  }
  return in;
}

Point2 centroid(const Tiling& t, const Tile& f) {
  Point2 c = Point2::Zero();
  for (int v : f.boundary) c += to_physical(t.vertices()[v]);
  return c / static_cast<double>(f.size());
}

std::vector<Point2> expanded_polygon(const Tiling& t, const Tile& f, int sigma) {
  std::vector<Point2> poly;
  for (int v : f.boundary) poly.push_back(to_physical(tau_scale(t.vertices()[v], sigma)));
  return poly;
}

}  // namespace

std::string to_string(Chirality c) {
  switch (c) {
    case Chirality::Left: return "left";
    case Chirality::Right: return "right";
    default: return "none";
  }
}

Chirality chirality_from_string(const std::string& s) {
  if (s == "left") return Chirality::Left;
  if (s == "right") return Chirality::Right;
  if (s == "none") return Chirality::None;
  throw std::invalid_argument("unknown chirality: " + s);
}

std::vector<ModuleVector> Motif::points() const {
  std::vector<ModuleVector> out;
  for (const auto& s : shells) {
    const auto o = orbit(s);
    out.insert(out.end(), o.begin(), o.end());
  }
  std::sort(out.begin(), out.end(), ModuleVectorLess{});
  out.erase(std::unique(out.begin(), out.end()), out.end());
  return out;
}

RuleCatalog RuleCatalog::from_json(const std::string& text) {
  const json j = json::parse(text);
  RuleCatalog cat;
  std::map<ComplexKind, std::vector<Shape>> anchors;
  const auto& cx = j.at("complexes");
  anchors[ComplexKind::G] = parse_shapes(cx.at("G").at("anchor_shapes"));
  anchors[ComplexKind::T] = parse_shapes(cx.at("T").at("anchor_shapes"));
  for (const auto& v : cx.at("G").at("internal_vertices")) cat.g_internal_.push_back(parse_vec(v));
  cat.t_left_ = parse_vec(cx.at("T").at("inner_vertices").at("left"));
  cat.t_right_ = parse_vec(cx.at("T").at("inner_vertices").at("right"));

  for (const auto& r : j.at("rules")) {
    GppRule rule;
    rule.id = r.at("id").get<std::string>();
    rule.family = r.at("family").get<std::string>();
    rule.chirality = chirality_from_string(r.at("chirality").get<std::string>());
    rule.sigma_exponent = r.at("sigma_exponent").get<int>();
    for (const auto& s : r.at("motif")) rule.motif.shells.push_back(parse_vec(s));
    rule.accepts = r.at("accepts").get<std::string>();
    rule.produces = r.at("produces").get<std::string>();
    rule.g_vertices = r.value("g_vertices", std::vector<int>{});
    rule.mirror = r.value("mirror", std::string{});
    for (const auto& t : r.at("templates")) {
      EliminationTemplate et;
      const std::string kind = t.at("kind").get<std::string>();
      if (kind == "G") et.kind = ComplexKind::G;
      else if (kind == "T") et.kind = ComplexKind::T;
      else throw std::invalid_argument("unknown complex kind: " + kind);
      et.anchor_shapes = anchors[et.kind];
      for (const auto& v : t.at("removals")) et.removals.push_back(parse_vec(v));
      rule.templates.push_back(std::move(et));
    }
    if (cat.index_.count(rule.id)) throw std::invalid_argument("duplicate rule id: " + rule.id);
    cat.index_[rule.id] = static_cast<int>(cat.rules_.size());
    cat.rules_.push_back(std::move(rule));
  }
  return cat;
}

const RuleCatalog& RuleCatalog::builtin() {
  static const RuleCatalog cat = from_json(builtin_catalog_json());
  return cat;
}

const GppRule& RuleCatalog::get(const std::string& id) const {
  auto it = index_.find(id);
  if (it == index_.end()) throw std::invalid_argument("unknown rule id: " + id);
  return rules_[it->second];
}

std::vector<std::string> parse_sequence(const std::string& text) {
  std::vector<std::string> out;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) {
    item.erase(std::remove_if(item.begin(), item.end(), ::isspace), item.end());
    if (item.empty()) continue;
    int reps = 1;
    if (auto star = item.find('*'); star != std::string::npos) {
      reps = std::stoi(item.substr(star + 1));
      item = item.substr(0, star);
    }
    for (int i = 0; i < reps; ++i) out.push_back(item);
  }
  return out;
}

void validate_sequence(const RuleSequence& seq, const RuleCatalog& cat) {
  std::string current;
  for (const Tile& f : seed_tiling(seq.seed).faces()) {
    const char c = shape_letter(f.shape);
    if (current.find(c) == std::string::npos) current += c;
  }
  for (std::size_t i = 0; i < seq.rule_ids.size(); ++i) {
    const GppRule& r = cat.get(seq.rule_ids[i]);
    if (!subset_of(current, r.accepts)) {
      throw std::invalid_argument("rule " + r.id + " at position " + std::to_string(i) + " cannot act on prototiles " +
                                  current);
    }
    current = r.produces;
  }
}

std::vector<ModuleVector> seed_points(const std::string& id) {
  auto walk = [](std::initializer_list<int> dirs) {
    std::vector<ModuleVector> pts{ModuleVector::Zero()};
    for (int d : dirs) pts.push_back(pts.back() + unit(d));
    return pts;
  };
  if (id == "P") return walk({0, 2, 4, 6});
  if (id == "P-mirror") {
    auto pts = walk({0, 2, 4, 6});
    for (auto& p : pts) p = apply_symmetry(D10Element::reflection(), p);
    return pts;
  }
  if (id == "R") return walk({0, 1, 5});
  if (id == "H") return walk({0, 1, 3, 5, 6});
  if (id == "origin") return {ModuleVector::Zero()};
  throw std::invalid_argument("unknown seed: " + id);
}

Tiling seed_tiling(const std::string& id) { return Tiling::from_points(seed_points(id), 0); }

std::vector<ModuleVector> decorate(const std::vector<ModuleVector>& points, const GppRule& rule) {
  const std::vector<ModuleVector> motif = rule.motif.points();
  const ModuleMatrix scale = tau_matrix(rule.sigma_exponent);
  std::vector<ModuleVector> out;
  out.reserve(points.size() * motif.size());
  for (const auto& p : points) {
    const ModuleVector s = scale * p;
    for (const auto& m : motif) out.push_back(s + m);
  }
  std::sort(out.begin(), out.end(), ModuleVectorLess{});
  out.erase(std::unique(out.begin(), out.end()), out.end());
  return out;
}

std::vector<Frame> locate_complexes(const Tiling& tiling, ComplexKind kind, int sigma_exponent) {
  std::vector<Frame> frames;
  const ModuleMatrix scale = tau_matrix(sigma_exponent);
  for (int f = 0; f < static_cast<int>(tiling.faces().size()); ++f) {
    const Tile& tile = tiling.faces()[f];
    const bool wanted = kind == ComplexKind::G ? tile.shape == Shape::C
                                               : (tile.shape == Shape::R || tile.shape == Shape::C);
    if (!wanted) continue;
    const std::vector<int> t = turn_word(tile.direction_word);
    for (int i = 0; i < tile.size(); ++i) {
      const bool hit = kind == ComplexKind::G ? is_crown_middle_tip(t, i) : t[i] == 4;
      if (!hit) continue;
      Frame fr;
      fr.kind = kind;
      fr.tile = f;
      fr.vertex_index = i;
      fr.anchor = scale * tiling.vertices()[tile.boundary[i]];
      fr.orientation = D10Element::rotation_by(tile.direction_word[i]);
      frames.push_back(fr);
    }
  }
  return frames;
}

Elimination eliminate(const std::vector<ModuleVector>& candidates, const std::vector<Frame>& frames,
                      const GppRule& rule, const Tiling& source, const RuleOverride& override_rule) {
  Elimination el;
  std::vector<ModuleVector> targets;
  for (const Frame& fr : frames) {
    const GppRule* r = &rule;
    if (override_rule) {
      if (const GppRule* o = override_rule(source, fr.tile)) r = o;
    }
    const Shape shape = source.faces()[fr.tile].shape;
    bool used = false;
    for (const auto& et : r->templates) {
      if (et.kind != fr.kind) continue;
      if (std::find(et.anchor_shapes.begin(), et.anchor_shapes.end(), shape) == et.anchor_shapes.end()) continue;
      used = true;
      for (const auto& off : et.removals) {
        targets.push_back(fr.map(off));
        ++el.removal_requests;
      }
    }
    if (used) ++el.frames;
  }
  std::sort(targets.begin(), targets.end(), ModuleVectorLess{});
  targets.erase(std::unique(targets.begin(), targets.end()), targets.end());
  for (const auto& t : targets) {
    if (!std::binary_search(candidates.begin(), candidates.end(), t, ModuleVectorLess{})) {
      throw MissingRemoval("removal target " + to_string(t) + " is not a candidate point");
    }
  }
  el.removed = targets;
  el.points.reserve(candidates.size() - targets.size());
  std::set_difference(candidates.begin(), candidates.end(), targets.begin(), targets.end(),
                      std::back_inserter(el.points), ModuleVectorLess{});
  return el;
}

Tiling iterate(const Tiling& tiling, const GppRule& rule, const RuleOverride& override_rule, int peripheral_depth) {
  std::vector<ModuleVector> cand = decorate(tiling.vertices().points(), rule);
  std::vector<Frame> frames = locate_complexes(tiling, ComplexKind::G, rule.sigma_exponent);
  std::vector<Frame> tframes = locate_complexes(tiling, ComplexKind::T, rule.sigma_exponent);
  frames.insert(frames.end(), tframes.begin(), tframes.end());
  Elimination el = eliminate(cand, frames, rule, tiling, override_rule);
  cand.clear();
  cand.shrink_to_fit();
  Tiling next = Tiling::from_points(std::move(el.points), peripheral_depth);
  next.generation = tiling.generation + 1;
  next.rule_history = tiling.rule_history;
  next.rule_history.push_back(rule.id);
  next.inherit_taint(tiling, rule.sigma_exponent, kTaintMargin, peripheral_depth);
  if (!next.uc().ok) throw UcViolation(next.generation, next.uc().message);
  return next;
}

Tiling run_sequence(const RuleSequence& seq, const RuleCatalog& cat, const std::function<void(const Tiling&)>& observer,
                    int peripheral_depth) {
  validate_sequence(seq, cat);
  Tiling t = Tiling::from_points(seed_points(seq.seed), peripheral_depth);
  if (observer) observer(t);
  for (const auto& id : seq.rule_ids) {
    t = iterate(t, cat.get(id), {}, peripheral_depth);
    if (observer) observer(t);
  }
  return t;
}

DerivedTemplates derive_templates(int reference_generation) {
  const RuleCatalog& cat = RuleCatalog::builtin();
  DerivedTemplates out;
  const int sigma = 2;

  // G-complex: the star lying inside every expanded crown of a para-Penrose patch.
  std::vector<Tiling> pp{seed_tiling("P")};
  for (int g = 0; g < reference_generation; ++g) pp.push_back(iterate(pp.back(), cat.get("para-penrose")));
  const Tiling& old = pp[reference_generation - 1];
  const Tiling& cur = pp[reference_generation];

  std::vector<int> stars;
  for (int f = 0; f < static_cast<int>(cur.faces().size()); ++f) {
    if (cur.faces()[f].shape == Shape::S && !cur.faces()[f].peripheral) stars.push_back(f);
  }
  struct GHit {
    Frame frame;
    int star;
  };
  std::vector<GHit> hits;
  std::set<std::vector<std::int64_t>> offset_sets;
  std::vector<ModuleVector> canonical;
  for (const Frame& fr : locate_complexes(old, ComplexKind::G, sigma)) {
    if (old.faces()[fr.tile].peripheral) continue;
    const auto poly = expanded_polygon(old, old.faces()[fr.tile], sigma);
    int found = -1;
    for (int s : stars) {
      if (point_in_polygon(centroid(cur, cur.faces()[s]), poly)) {
        if (found >= 0) throw std::runtime_error("expanded crown contains more than one star");
        found = s;
      }
    }
    if (found < 0) throw std::runtime_error("expanded crown without a star");
    const Tile& star = cur.faces()[found];
    const std::vector<int> t = turn_word(star.direction_word);
    std::vector<ModuleVector> local;
    const D10Element inv = fr.orientation.inverse();
    for (int i = 0; i < star.size(); ++i) {
      if (t[i] == -2) local.push_back(apply_symmetry(inv, cur.vertices()[star.boundary[i]] - fr.anchor));
    }
    if (local.size() != 5) throw std::runtime_error("star without five concave vertices");
    // order counter-clockwise around the star centre, starting with the vertex facing the tip
    Point2 c = Point2::Zero();
    for (const auto& v : local) c += to_physical(v);
    c /= 5.0;
    const double facing = std::atan2(-c.y(), -c.x());
    std::vector<ModuleVector> ordered(5, ModuleVector::Zero());
    for (const auto& v : local) {
      const Point2 p = to_physical(v) - c;
      double a = std::atan2(p.y(), p.x()) - facing;
      const int k = static_cast<int>(std::lround(a / (2.0 * M_PI / 5.0)));
      ordered[((k % 5) + 5) % 5] = v;
    }
    std::vector<std::int64_t> key;
    for (const auto& v : ordered) key.insert(key.end(), v.data(), v.data() + 4);
    offset_sets.insert(key);
    canonical = ordered;
    hits.push_back({fr, found});
  }
  if (hits.empty()) throw std::runtime_error("reference patch has no interior expanded crowns");
  if (offset_sets.size() != 1) throw std::runtime_error("G-complex offsets differ between crowns");
  out.g_internal = canonical;
  out.g_complexes_checked = static_cast<long>(hits.size());

  // Catalog ids of the ten variants as index sets on the internal vertices.
  const std::vector<std::pair<std::string, std::vector<int>>> variants = {
      {"rphc-1", {0}},    {"rphc-2", {1}},    {"rphc-3", {2}},    {"rphc-4", {4}},    {"rphc-5", {3}},
      {"rphc-6", {4, 1}}, {"rphc-7", {0, 2}}, {"rphc-8", {1, 3}}, {"rphc-9", {0, 3}}, {"rphc-10", {4, 2}}};
  for (const auto& [id, idx] : variants) {
    std::vector<ModuleVector> offs;
    for (int i : idx) offs.push_back(out.g_internal[i]);
    out.rphc_removals[id] = offs;
  }

  // Division of a G-complex (star plus its five edge-adjacent pentagons) after removing vertices.
  auto complex_vertices = [&](int star) {
    std::set<int> vs(cur.faces()[star].boundary.begin(), cur.faces()[star].boundary.end());
    const Tile& s = cur.faces()[star];
    std::set<int> pentagons;
    for (int i = 0; i < s.size(); ++i) {
      const int other = cur.face_left_of(s.boundary[(i + 1) % s.size()], (s.direction_word[i] + 5) % 10);
      if (other >= 0 && cur.faces()[other].shape == Shape::P) pentagons.insert(other);
    }
    for (int p : pentagons) vs.insert(cur.faces()[p].boundary.begin(), cur.faces()[p].boundary.end());
    if (pentagons.size() != 5) throw std::runtime_error("G-complex is not a star with five pentagons");
    std::set<ModuleVector, ModuleVectorLess> pts;
    for (int v : vs) pts.insert(cur.vertices()[v]);
    return pts;
  };
  auto division = [&](const std::vector<int>& idx) {
    std::vector<ModuleVector> removed;
    for (const auto& h : hits) {
      for (int i : idx) removed.push_back(h.frame.map(out.g_internal[i]));
    }
    std::sort(removed.begin(), removed.end(), ModuleVectorLess{});
    std::vector<ModuleVector> kept;
    std::set_difference(cur.vertices().points().begin(), cur.vertices().points().end(), removed.begin(), removed.end(),
                        std::back_inserter(kept), ModuleVectorLess{});
    const Tiling after = Tiling::from_points(kept);
    std::set<std::string> seen;
    for (const auto& h : hits) {
      const auto region = complex_vertices(h.star);
      std::map<Shape, int> m;
      for (const Tile& f : after.faces()) {
        const bool inside = std::all_of(f.boundary.begin(), f.boundary.end(),
                                        [&](int v) { return region.count(after.vertices()[v]) != 0; });
        if (inside) ++m[f.shape];
      }
      seen.insert(shape_multiset(m));
    }
    if (seen.size() != 1) throw std::runtime_error("G-complex divisions differ between crowns");
    return *seen.begin();
  };
  out.g_one_vertex_division = division({0});
  out.g_two_vertex_division = division({4, 1});
  if (out.g_one_vertex_division != "C1 H1 P4") {
    throw std::runtime_error("one-vertex G division is " + out.g_one_vertex_division);
  }
  if (out.g_two_vertex_division != "H2 P3 R1") {
    throw std::runtime_error("two-vertex G division is " + out.g_two_vertex_division);
  }

  // T-complex: at each acute corner of an expanded R or C tile of an RPHC patch the crown
  // near the corner has two inner vertices next to the anchor, one on each expanded edge.
  std::vector<Tiling> rc{seed_tiling("P")};
  for (int g = 0; g < reference_generation; ++g) rc.push_back(iterate(rc.back(), cat.get("rphc-1")));
  const Tiling& rold = rc[reference_generation - 1];
  const Tiling& rcur = rc[reference_generation];
  std::set<std::vector<std::int64_t>> t_keys;
  std::vector<Frame> tframes;
  for (const Frame& fr : locate_complexes(rold, ComplexKind::T, sigma)) {
    if (rold.faces()[fr.tile].peripheral) continue;
    const Tile& tile = rold.faces()[fr.tile];
    const int n = tile.size();
    const ModuleVector prev = tau_scale(rold.vertices()[tile.boundary[(fr.vertex_index + n - 1) % n]], sigma);
    const ModuleVector next = tau_scale(rold.vertices()[tile.boundary[(fr.vertex_index + 1) % n]], sigma);
    // inner vertices: candidate points at unit distance from the anchor on the two expanded edges
    ModuleVector first = ModuleVector::Zero(), second = ModuleVector::Zero();
    int found = 0;
    for (int d = 0; d < 10; ++d) {
      const ModuleVector p = fr.anchor + unit(d);
      if (rcur.vertices().find(p) < 0) continue;
      if (orientation(prev, fr.anchor, p) == 0 && twice_dot(p - fr.anchor, prev - fr.anchor).sign() > 0) {
        first = p;
        ++found;
      } else if (orientation(fr.anchor, next, p) == 0 && twice_dot(p - fr.anchor, next - fr.anchor).sign() > 0) {
        second = p;
        ++found;
      }
    }
    if (found != 2) throw std::runtime_error("T-complex inner vertices not found at an acute corner");
    // both must be vertices of one crown
    const int a = rcur.vertices().find(first), b = rcur.vertices().find(second);
    bool crown = false;
    for (int f : rcur.faces_at(a)) {
      const auto& bd = rcur.faces()[f].boundary;
      if (rcur.faces()[f].shape == Shape::C && std::find(bd.begin(), bd.end(), b) != bd.end()) crown = true;
    }
    if (!crown) throw std::runtime_error("T-complex inner vertices do not lie on a crown");
    const D10Element inv = fr.orientation.inverse();
    const ModuleVector l = apply_symmetry(inv, first - fr.anchor), r = apply_symmetry(inv, second - fr.anchor);
    std::vector<std::int64_t> key(l.data(), l.data() + 4);
    key.insert(key.end(), r.data(), r.data() + 4);
    t_keys.insert(key);
    out.t_left = l;
    out.t_right = r;
    tframes.push_back(fr);
  }
  if (tframes.empty()) throw std::runtime_error("reference RPHC patch has no interior acute corners");
  if (t_keys.size() != 1) throw std::runtime_error("T-complex offsets differ between corners");
  out.t_complexes_checked = static_cast<long>(tframes.size());

  // Division of a T-complex: the crown and its two pentagons re-tile as R + P + H once the
  // left inner vertex is removed.
  {
    const Tiling after = iterate(rold, cat.get("rph-l"));
    std::set<std::string> seen;
    for (const Frame& fr : tframes) {
      const ModuleVector lp = fr.map(out.t_left), rp = fr.map(out.t_right);
      const int a = rcur.vertices().find(lp), b = rcur.vertices().find(rp);
      int crown = -1;
      for (int f : rcur.faces_at(a)) {
        const auto& bd = rcur.faces()[f].boundary;
        if (rcur.faces()[f].shape == Shape::C && std::find(bd.begin(), bd.end(), b) != bd.end()) crown = f;
      }
      std::set<ModuleVector, ModuleVectorLess> region;
      const Tile& c = rcur.faces()[crown];
      for (int v : c.boundary) region.insert(rcur.vertices()[v]);
      std::set<int> pentagons;
      for (int i = 0; i < c.size(); ++i) {
        const int other = rcur.face_left_of(c.boundary[(i + 1) % c.size()], (c.direction_word[i] + 5) % 10);
        if (other < 0 || rcur.faces()[other].shape != Shape::P) continue;
        const auto& bd = rcur.faces()[other].boundary;
        // the two pentagons of the complex hold the inner vertices
        if (std::find(bd.begin(), bd.end(), a) == bd.end() && std::find(bd.begin(), bd.end(), b) == bd.end()) continue;
        pentagons.insert(other);
      }
      for (int p : pentagons) {
        for (int v : rcur.faces()[p].boundary) region.insert(rcur.vertices()[v]);
      }
      if (pentagons.size() != 2) throw std::runtime_error("T-complex is not a crown with two pentagons");
      std::map<Shape, int> m;
      for (const Tile& f : after.faces()) {
        const bool inside = std::all_of(f.boundary.begin(), f.boundary.end(),
                                        [&](int v) { return region.count(after.vertices()[v]) != 0; });
        if (inside) ++m[f.shape];
      }
      seen.insert(shape_multiset(m));
    }
    if (seen.size() != 1) throw std::runtime_error("T-complex divisions differ between corners");
    out.t_division = *seen.begin();
    if (out.t_division != "H1 P1 R1") throw std::runtime_error("T division is " + out.t_division);
  }
  return out;
}

}  // namespace qtile
