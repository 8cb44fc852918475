#pragma once

#include "qtile/zmodule.hpp"

#include <array>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <unordered_map>
#include <utility>
#include <vector>

namespace qtile {

enum class Shape : std::uint8_t { R, P, H, C, S, Unknown };

char shape_letter(Shape s);
std::optional<Shape> shape_from_letter(char c);

using Edge = std::pair<int, int>;

/// A bounded face. boundary is counter-clockwise; direction_word[i] is the
/// direction index of the edge boundary[i] -> boundary[i + 1].
struct Tile {
  std::vector<int> boundary;
  std::vector<int> direction_word;
  Shape shape = Shape::Unknown;
  std::vector<int> canonical;   // canonical turn word
  GoldenInt twice_area;         // 2 * area / sin(36 deg)
  bool peripheral = false;
  bool tainted = false;  // descends from an unclassified face of an earlier generation

  double area() const;
  int size() const { return static_cast<int>(boundary.size()); }
};

/// Indexed vertex set with exact lookup.
class PointSet {
 public:
  PointSet() = default;
  /// Sorts and deduplicates.
  explicit PointSet(std::vector<ModuleVector> pts);

  const std::vector<ModuleVector>& points() const { return pts_; }
  int size() const { return static_cast<int>(pts_.size()); }
  const ModuleVector& operator[](int i) const { return pts_[i]; }
  int find(const ModuleVector& v) const {
    auto it = index_.find(v);
    return it == index_.end() ? -1 : it->second;
  }
  bool contains(const ModuleVector& v) const { return index_.count(v) != 0; }

 private:
  std::vector<ModuleVector> pts_;
  std::unordered_map<ModuleVector, int, ModuleVectorHash> index_;
};

/// Unit-distance pairs split into the accepted edges and those that cross another unit pair.
struct EdgeBuild {
  std::vector<Edge> edges;
  std::vector<Edge> crossed;
};

/// All pairs at exact unit distance, as (i, j) with point j = point i + e_d for d in 0..4.
std::vector<Edge> unit_pairs(const PointSet& pts);
/// Pairs (a, b) of segments that meet anywhere except at a shared endpoint.
std::vector<std::pair<int, int>> crossing_segments(const PointSet& pts, const std::vector<Edge>& segs);
/// Unit pairs not crossed by any other unit pair.
EdgeBuild build_edges(const PointSet& pts);

struct FaceSet {
  std::vector<Tile> bounded;
  std::vector<Tile> outer;  // clockwise loops around each component
};

/// Faces by minimal counter-clockwise traversal. Throws std::runtime_error if a walk does not close.
FaceSet extract_faces(const PointSet& pts, const std::vector<Edge>& edges);

/// Turn word of a direction word; turn i is taken at boundary vertex i.
std::vector<int> turn_word(const std::vector<int>& direction_word);
/// Lexicographic minimum over cyclic shifts and reversal of the turn word.
std::vector<int> canonical_word(const std::vector<int>& direction_word);
Shape classify_tile(const std::vector<int>& direction_word);
/// Canonical direction word (starting with direction 0) of a prototile.
std::vector<int> prototile_word(Shape s);
/// Exact area / sin(36 deg) of a prototile.
GoldenNum tile_area(Shape s);
GoldenInt twice_area_over_sin36(const std::vector<ModuleVector>& loop);

struct UcReport {
  bool ok = true;
  std::vector<std::pair<Edge, Edge>> crossings;
  std::vector<int> non_simple_faces;
  std::vector<Edge> stray_crossed_pairs;  // crossed unit pairs not spanning a single face
  std::string message;
};

/// True iff no two edges meet outside shared endpoints, every edge is a unit edge, and every
/// bounded face is a simple polygon.
UcReport check_unit_connectivity(const PointSet& pts, const std::vector<Edge>& edges);

class Tiling {
 public:
  Tiling() = default;
  /// Builds edges and faces from a point set; the UC outcome is recorded in uc().
  static Tiling from_points(std::vector<ModuleVector> pts, int peripheral_depth = 2);

  const PointSet& vertices() const { return pts_; }
  const std::vector<Edge>& edges() const { return edges_; }
  const std::vector<Edge>& crossed_pairs() const { return crossed_; }
  const std::vector<Tile>& faces() const { return faces_; }
  const std::vector<Tile>& outer_loops() const { return outer_; }
  const UcReport& uc() const { return uc_; }

  int generation = 0;
  std::vector<std::string> rule_history;

  /// Direction bit mask of the edges at vertex v.
  std::uint16_t adjacency(int v) const { return adj_[v]; }
  /// Bounded faces incident to vertex v.
  std::span<const int> faces_at(int v) const {
    return {vf_data_.data() + vf_offset_[v], vf_data_.data() + vf_offset_[v + 1]};
  }
  /// Neighbour of v in direction d, or -1.
  int neighbor(int v, int d) const;
  /// Index of the edge leaving v in direction d, or -1.
  int edge_id(int v, int d) const;
  /// Bounded face lying to the left of the directed edge leaving v in direction d, or -1.
  int face_left_of(int v, int d) const;

  /// Face counts by shape; with only_interior set, peripheral faces are skipped.
  std::array<long, 6> shape_counts(bool only_interior = false) const;
  /// Re-flags peripheral faces: tainted faces and those within depth face-rings of an outer loop.
  void mark_peripheral(int depth);
  /// Marks faces lying within margin of the sigma-expanded footprint of any unclassified face
  /// of parent, then re-flags peripheral faces.
  void inherit_taint(const Tiling& parent, int sigma_exponent, double margin, int depth);
  int peripheral_depth() const { return peripheral_depth_; }
  int euler_characteristic() const;
  /// Number of connected components of the edge graph (isolated vertices included).
  int components() const;

 private:
  PointSet pts_;
  std::vector<Edge> edges_;
  std::vector<Edge> crossed_;
  std::vector<Tile> faces_;
  std::vector<Tile> outer_;
  std::vector<std::uint16_t> adj_;
  // Incidence lists sorted by direction: for vertex v, entries inc_offset_[v] .. inc_offset_[v+1].
  std::vector<int> inc_offset_;
  std::vector<int> inc_nbr_;
  std::vector<int> inc_edge_;
  std::vector<std::int8_t> inc_dir_;
  std::vector<int> vf_offset_;
  std::vector<int> vf_data_;
  std::vector<int> edge_face_[2];  // face left of the edge i->j, and left of j->i

  friend struct TilingBuilder;
  UcReport uc_;
  int peripheral_depth_ = 0;
};

}  // namespace qtile
