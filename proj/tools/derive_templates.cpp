// Regenerates the complex templates from reference patches and compares them with the catalog.
#include "qtile/gpp.hpp"

#include "CLI11.hpp"
#include <nlohmann/json.hpp>

#include <iostream>

int main(int argc, char** argv) {
  CLI::App app{"Derive G and T complex templates from reference patches"};
  int generation = 3;
  bool as_json = false;
  app.add_option("-g,--generation", generation, "reference generation")->check(CLI::Range(2, 6));
  app.add_flag("--json", as_json, "print the derived templates as JSON");
  CLI11_PARSE(app, argc, argv);

  using namespace qtile;
  DerivedTemplates d;
  try {
    d = derive_templates(generation);
  } catch (const std::exception& e) {
    std::cerr << "derivation failed: " << e.what() << '\n';
    return 3;
  }
  const RuleCatalog& cat = RuleCatalog::builtin();
  auto vec = [](const ModuleVector& v) { return nlohmann::json{v[0], v[1], v[2], v[3]}; };
  nlohmann::json j;
  for (const auto& v : d.g_internal) j["G"]["internal_vertices"].push_back(vec(v));
  j["T"]["inner_vertices"] = {{"left", vec(d.t_left)}, {"right", vec(d.t_right)}};
  for (const auto& [id, offs] : d.rphc_removals) {
    for (const auto& v : offs) j["removals"][id].push_back(vec(v));
  }
  j["checked"] = {{"G", d.g_complexes_checked}, {"T", d.t_complexes_checked}};
  j["divisions"] = {{"G_one", d.g_one_vertex_division}, {"G_two", d.g_two_vertex_division}, {"T", d.t_division}};

  bool match = d.g_internal == cat.g_internal_vertices() && d.t_left == cat.t_inner_vertex(Chirality::Left) &&
               d.t_right == cat.t_inner_vertex(Chirality::Right);
  for (const auto& [id, offs] : d.rphc_removals) {
    const auto& tpl = cat.get(id).templates;
    match = match && tpl.size() == 1 && tpl[0].removals == offs;
  }
  j["matches_catalog"] = match;
  if (as_json) {
    std::cout << j.dump(2) << '\n';
  } else {
    std::cout << "G complexes checked: " << d.g_complexes_checked << "\nT complexes checked: " << d.t_complexes_checked
              << "\nG one-vertex division: " << d.g_one_vertex_division
              << "\nG two-vertex division: " << d.g_two_vertex_division << "\nT division: " << d.t_division
              << "\ncatalog " << (match ? "matches" : "DIFFERS") << '\n';
  }
  return match ? 0 : 1;
}
