#pragma once

#include "qtile/tiling.hpp"

#include <functional>
#include <map>
#include <stdexcept>
#include <string>
#include <vector>

namespace qtile {

enum class Chirality { None, Left, Right };
enum class ComplexKind { G, T };

std::string to_string(Chirality c);
Chirality chirality_from_string(const std::string& s);

/// Union of D10 orbits of its shell representatives.
struct Motif {
  std::vector<ModuleVector> shells;
  std::vector<ModuleVector> points() const;
};

/// Removal offsets expressed in the frame of an anchored complex.
struct EliminationTemplate {
  ComplexKind kind = ComplexKind::G;
  std::vector<Shape> anchor_shapes;
  std::vector<ModuleVector> removals;
};

/// Placement of a complex: anchor point in the expanded tiling and the symmetry
/// taking template coordinates to the tiling.
struct Frame {
  ComplexKind kind = ComplexKind::G;
  int tile = -1;          // face index in the unexpanded tiling
  int vertex_index = -1;  // position on that face's boundary
  ModuleVector anchor = ModuleVector::Zero();
  D10Element orientation;

  ModuleVector map(const ModuleVector& offset) const { return anchor + apply_symmetry(orientation, offset); }
};

struct GppRule {
  std::string id;
  std::string family;
  Chirality chirality = Chirality::None;
  int sigma_exponent = 2;
  Motif motif;
  std::vector<EliminationTemplate> templates;
  std::string accepts;   // prototile letters the rule may be applied to
  std::string produces;  // prototile letters of its output
  std::vector<int> g_vertices;
  std::string mirror;
};

class RuleCatalog {
 public:
  /// The catalog compiled into the library from data/rules.json.
  static const RuleCatalog& builtin();
  static RuleCatalog from_json(const std::string& text);

  const GppRule& get(const std::string& id) const;
  bool has(const std::string& id) const { return index_.count(id) != 0; }
  const std::vector<GppRule>& rules() const { return rules_; }
  /// The G-complex internal vertices in template frame, indexed counter-clockwise from the one facing the tip.
  const std::vector<ModuleVector>& g_internal_vertices() const { return g_internal_; }
  const ModuleVector& t_inner_vertex(Chirality c) const { return c == Chirality::Left ? t_left_ : t_right_; }

 private:
  std::vector<GppRule> rules_;
  std::map<std::string, int> index_;
  std::vector<ModuleVector> g_internal_;
  ModuleVector t_left_ = ModuleVector::Zero(), t_right_ = ModuleVector::Zero();
};

/// The JSON text of the builtin catalog.
const std::string& builtin_catalog_json();

struct RuleSequence {
  std::vector<std::string> rule_ids;
  std::string seed = "P";
};

/// Throws std::invalid_argument for unknown ids or a rule applied outside its accepted prototiles.
void validate_sequence(const RuleSequence& seq, const RuleCatalog& cat);
/// Parses "rph-r,rph-l" or "rph-l*3,rph-r" into ids.
std::vector<std::string> parse_sequence(const std::string& text);

/// Seed patches: "P" (unit pentagon with a vertex at the origin and one edge along e0),
/// "P-mirror", "R", "H", and "origin".
std::vector<ModuleVector> seed_points(const std::string& id);
Tiling seed_tiling(const std::string& id);

/// sigma * points + motif, deduplicated and sorted.
std::vector<ModuleVector> decorate(const std::vector<ModuleVector>& points, const GppRule& rule);

/// Complex frames of the expanded tiling, read off the unexpanded tiling's faces.
std::vector<Frame> locate_complexes(const Tiling& tiling, ComplexKind kind, int sigma_exponent = 2);

struct Elimination {
  std::vector<ModuleVector> points;
  std::vector<ModuleVector> removed;  // distinct removed points
  long frames = 0;
  long removal_requests = 0;
};

struct MissingRemoval : std::runtime_error {
  using std::runtime_error::runtime_error;
};

/// Picks the rule whose templates apply inside a given unexpanded face (mixed-location application).
using RuleOverride = std::function<const GppRule*(const Tiling&, int face)>;

/// Removes each template offset mapped through every matching frame.
/// Throws MissingRemoval if a target is absent from candidates.
Elimination eliminate(const std::vector<ModuleVector>& candidates, const std::vector<Frame>& frames,
                      const GppRule& rule, const Tiling& source, const RuleOverride& override_rule = {});

struct UcViolation : std::runtime_error {
  UcViolation(int iteration, const std::string& msg)
      : std::runtime_error("UC violation at iteration " + std::to_string(iteration) + ": " + msg),
        iteration(iteration) {}
  int iteration;
};

/// One GPP step: decorate, eliminate, re-tile, verify UC, classify.
Tiling iterate(const Tiling& tiling, const GppRule& rule, const RuleOverride& override_rule = {},
               int peripheral_depth = 2);

/// Runs every rule of the sequence in order from its seed. Observer sees each generation.
Tiling run_sequence(const RuleSequence& seq, const RuleCatalog& cat = RuleCatalog::builtin(),
                    const std::function<void(const Tiling&)>& observer = {}, int peripheral_depth = 2);

/// Templates regenerated from a reference para-Penrose patch.
struct DerivedTemplates {
  std::vector<ModuleVector> g_internal;  // ordered as in the catalog
  ModuleVector t_left = ModuleVector::Zero();
  ModuleVector t_right = ModuleVector::Zero();
  std::map<std::string, std::vector<ModuleVector>> rphc_removals;  // id -> offsets
  /// Shape multisets of the re-divided complexes, e.g. "C1 H1 P4".
  std::string g_one_vertex_division;
  std::string g_two_vertex_division;
  std::string t_division;
  long g_complexes_checked = 0;
  long t_complexes_checked = 0;
};

/// Fails with std::runtime_error if a complex does not have the expected composition.
DerivedTemplates derive_templates(int reference_generation = 3);

}  // namespace qtile
