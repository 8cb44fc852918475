#include "qtile/job.hpp"

#include <algorithm>
#include <cstdio>
#include <sstream>

namespace qtile {

namespace {

std::string fmt(double x, int digits = 6) {
  char buf[48];
  std::snprintf(buf, sizeof buf, "%.*g", digits, x);
  return buf;
}

template <typename T>
void take(const Json& j, const char* key, T& field) {
  if (!j.contains(key)) return;
  try {
    field = j.at(key).get<T>();
  } catch (const nlohmann::json::exception& e) {
    throw ConfigError(std::string("config field '") + key + "': " + e.what());
  }
}

PairCase pair_case(const GppRule& a, const GppRule& b) {
  return a.chirality == b.chirality ? PairCase::Same : PairCase::Opposite;
}

}  // namespace

std::vector<std::string> JobConfig::resolved_sequence() const {
  if (!sequence.empty()) return sequence;
  if (rule.empty()) return {};
  return std::vector<std::string>(static_cast<std::size_t>(std::max(iters, 0)), rule);
}

Json to_json(const JobConfig& c) {
  return Json{{"sequence", c.resolved_sequence()},
              {"seed", c.seed},
              {"peripheral_depth", c.peripheral_depth},
              {"exports", {{"svg", c.svg}, {"json", c.json}, {"csv", c.csv}, {"png", c.png}}},
              {"analyses", {{"perp", c.perp}, {"stats", c.stats}, {"diffraction", c.diffraction}}},
              {"thresholds",
               {{"svg_half_width", c.svg_half_width},
                {"histogram_bins", c.histogram_bins},
                {"mirror_threshold", c.mirror_threshold},
                {"surface_iterations", c.surface_iterations},
                {"max_index", c.max_index},
                {"kperp_cutoff", c.kperp_cutoff},
                {"strong_fraction", c.strong_fraction},
                {"window_shift", c.window_shift},
                {"control_rule", c.control_rule}}}};
}

void merge_json(JobConfig& c, const Json& j) {
  if (!j.is_object()) throw ConfigError("config must be a JSON object");
  static const std::vector<std::string> top = {"sequence", "rule", "iters", "seed", "out", "peripheral_depth",
                                               "exports", "analyses", "thresholds"};
  for (const auto& [k, v] : j.items())
    if (std::find(top.begin(), top.end(), k) == top.end()) throw ConfigError("unknown config field '" + k + "'");
  if (j.contains("sequence")) {
    const Json& s = j.at("sequence");
    if (s.is_string()) c.sequence = parse_sequence(s.get<std::string>());
    else take(j, "sequence", c.sequence);
  }
  take(j, "rule", c.rule);
  take(j, "iters", c.iters);
  take(j, "seed", c.seed);
  take(j, "out", c.out);
  take(j, "peripheral_depth", c.peripheral_depth);
  auto section = [&](const char* name, const std::vector<std::string>& keys) -> const Json* {
    if (!j.contains(name)) return nullptr;
    const Json& s = j.at(name);
    if (!s.is_object()) throw ConfigError(std::string("config field '") + name + "' must be an object");
    for (const auto& [k, v] : s.items())
      if (std::find(keys.begin(), keys.end(), k) == keys.end())
        throw ConfigError(std::string("unknown field '") + name + "." + k + "'");
    return &s;
  };
  if (const Json* e = section("exports", {"svg", "json", "csv", "png"})) {
    take(*e, "svg", c.svg);
    take(*e, "json", c.json);
    take(*e, "csv", c.csv);
    take(*e, "png", c.png);
  }
  if (const Json* a = section("analyses", {"perp", "stats", "diffraction"})) {
    take(*a, "perp", c.perp);
    take(*a, "stats", c.stats);
    take(*a, "diffraction", c.diffraction);
  }
  if (const Json* t = section("thresholds", {"svg_half_width", "histogram_bins", "mirror_threshold", "surface_iterations",
                                             "max_index", "kperp_cutoff", "strong_fraction", "window_shift",
                                             "control_rule"})) {
    take(*t, "svg_half_width", c.svg_half_width);
    take(*t, "histogram_bins", c.histogram_bins);
    take(*t, "mirror_threshold", c.mirror_threshold);
    take(*t, "surface_iterations", c.surface_iterations);
    take(*t, "max_index", c.max_index);
    take(*t, "kperp_cutoff", c.kperp_cutoff);
    take(*t, "strong_fraction", c.strong_fraction);
    take(*t, "window_shift", c.window_shift);
    take(*t, "control_rule", c.control_rule);
  }
}

void validate(const JobConfig& c, const RuleCatalog& cat) {
  const auto seq = c.resolved_sequence();
  if (seq.empty()) throw ConfigError("no rules to run: give --rule with --iters, or --sequence");
  if (!c.sequence.empty() && !c.rule.empty()) throw ConfigError("--rule and --sequence are mutually exclusive");
  try {
    validate_sequence(RuleSequence{seq, c.seed}, cat);
    (void)seed_points(c.seed);
  } catch (const std::exception& e) {
    throw ConfigError(e.what());
  }
  if (c.peripheral_depth < 0) throw ConfigError("peripheral_depth must be non-negative");
  if (c.histogram_bins < 2) throw ConfigError("histogram_bins must be at least 2");
  if (c.max_index < 1) throw ConfigError("max_index must be at least 1");
  if (c.kperp_cutoff <= 0) throw ConfigError("kperp_cutoff must be positive");
  if (c.window_shift < 0 || c.window_shift >= 1) throw ConfigError("window_shift must lie in [0, 1)");
  if (c.strong_fraction <= 0 || c.strong_fraction >= 1) throw ConfigError("strong_fraction must lie in (0, 1)");
  if (!c.control_rule.empty() && !cat.has(c.control_rule)) throw ConfigError("unknown control rule " + c.control_rule);
  if (c.stats) {
    for (const auto& id : seq)
      if (cat.get(id).family != "rph") throw ConfigError("stats needs a sequence of RPH rules, got " + id);
    if (seq.size() < 3) throw ConfigError("stats needs at least 3 iterations");
  }
}

Json list_rules(const RuleCatalog& cat) {
  Json out = Json::array();
  for (const GppRule& r : cat.rules()) {
    Json t = Json::array();
    for (const auto& tpl : r.templates)
      t.push_back({{"kind", tpl.kind == ComplexKind::G ? "G" : "T"}, {"removals", tpl.removals.size()}});
    out.push_back({{"id", r.id},
                   {"family", r.family},
                   {"chirality", to_string(r.chirality)},
                   {"mirror", r.mirror},
                   {"shells", r.motif.shells.size()},
                   {"motif_points", r.motif.points().size()},
                   {"templates", t}});
  }
  return out;
}

JobResult run_job(const JobConfig& c) {
  const RuleCatalog& cat = RuleCatalog::builtin();
  validate(c, cat);
  const auto seq = c.resolved_sequence();
  JobResult res;
  Json artifacts = Json::array();
  Json summary;
  std::ostringstream rep;

  // Keep the last three generations for the statistics.
  std::vector<Tiling> tail;
  const Tiling last = run_sequence(
      RuleSequence{seq, c.seed}, cat,
      [&](const Tiling& t) {
        if (!c.stats) return;
        tail.push_back(t);
        if (tail.size() > 3) tail.erase(tail.begin());
      },
      c.peripheral_depth);

  const auto counts = last.shape_counts(false);
  rep << "generation " << last.generation << ": " << last.vertices().size() << " vertices, " << last.faces().size()
      << " faces (";
  for (Shape s : {Shape::R, Shape::P, Shape::H, Shape::C, Shape::S, Shape::Unknown})
    if (counts[static_cast<int>(s)]) rep << ' ' << shape_letter(s) << '=' << counts[static_cast<int>(s)];
  rep << " )\n";
  summary["vertices"] = last.vertices().size();
  summary["faces"] = last.faces().size();
  for (Shape s : {Shape::R, Shape::P, Shape::H, Shape::C, Shape::S, Shape::Unknown})
    summary["face_counts"][std::string(1, shape_letter(s))] = counts[static_cast<int>(s)];

  if (c.json) artifacts.push_back(write_artifact(c.out, "tiling.json", tiling_json(last).dump(1)));
  if (c.csv) artifacts.push_back(write_artifact(c.out, "vertices.csv", vertices_csv(last)));
  if (c.svg) {
    SvgStyle st;
    st.half_width = c.svg_half_width;
    st.center = inscribed_disc(last).center;
    artifacts.push_back(write_artifact(c.out, "tiling.svg", tiling_svg(last, st)));
  }

  if (c.perp) {
    Json pj;
    const PerpCloud cloud = project_cloud(last);
    pj["points"] = cloud.points.size();
    pj["hull_containment"] = hull_containment(cloud.points);
    const double rot = symmetry_mismatch(cloud, D10Element::rotation_by(1), c.histogram_bins);
    const double mir = symmetry_mismatch(cloud, D10Element::reflection(), c.histogram_bins);
    pj["rotation_mismatch"] = rot;
    pj["mirror_mismatch"] = mir;
    pj["histogram_bins"] = c.histogram_bins;
    pj["mirror_symmetric"] = mir < c.mirror_threshold;
    rep << "perp: hull containment " << fmt(pj["hull_containment"].get<double>()) << ", rotation mismatch " << fmt(rot)
        << ", mirror mismatch " << fmt(mir) << (mir < c.mirror_threshold ? " (mirror symmetric)\n" : " (chiral)\n");

    // Atomic-surface boundaries are constructed for RPH sequences only.
    const bool rph = std::all_of(seq.begin(), seq.end(), [&](const std::string& id) { return cat.get(id).family == "rph"; });
    std::vector<PerpRegion> iterates;
    if (rph) {
      const int n = c.surface_iterations >= 0 ? c.surface_iterations : static_cast<int>(seq.size());
      iterates.push_back(star_decagon());
      Json dist = Json::array();
      for (int i = 0; i < n; ++i) {
        const DualMapConfig dm = DualMapConfig::for_rule(cat.get(seq[std::min<std::size_t>(i, seq.size() - 1)]), cat);
        iterates.push_back(clean(carve_step(dual_map_step(iterates.back(), dm), iterates.back(), dm)));
        dist.push_back(hausdorff(iterates.back(), iterates[iterates.size() - 2]));
      }
      // Vertices of peripheral faces come from an incomplete neighbourhood and may sit outside the surface.
      const SurfaceReport sr = validate_surface(project_cloud(last, true), iterates.back());
      const SurfaceReport sr_all = validate_surface(cloud, iterates.back());
      const Occupancy occ = edge_triangle_occupancy(iterates.back(), 0);
      pj["surface"] = {{"iterations", n},
                       {"area", area(iterates.back())},
                       {"hausdorff_steps", dist},
                       {"outside_fraction", sr.outside_fraction},
                       {"outside_fraction_all_vertices", sr_all.outside_fraction},
                       {"uncovered_fraction", sr.uncovered_fraction},
                       {"occupancy", {{"pentagon", occ.pentagon}, {"triangles", occ.triangles}}}};
      rep << "perp: X_" << n << " area " << fmt(area(iterates.back())) << ", cloud outside " << fmt(100 * sr.outside_fraction)
          << "%, occupancy pentagon " << fmt(occ.pentagon, 4) << " triangles " << fmt(occ.triangles, 4) << '\n';
      if (c.json) artifacts.push_back(write_artifact(c.out, "surface.json", region_json(iterates.back()).dump(1)));
      if (c.svg) artifacts.push_back(write_artifact(c.out, "surface.svg", region_svg(iterates)));
    }
    if (c.csv) artifacts.push_back(write_artifact(c.out, "cloud.csv", cloud_csv(cloud)));
    if (c.png) artifacts.push_back(write_artifact(c.out, "cloud.png", cloud_png(cloud)));
    if (c.svg) {
      std::vector<PerpRegion> outline = {hull_decagon()};
      if (!iterates.empty()) outline.push_back(iterates.back());
      artifacts.push_back(write_artifact(c.out, "cloud.svg", cloud_svg(cloud, outline)));
    }
    artifacts.push_back(write_artifact(c.out, "perp.json", pj.dump(1)));
    summary["perp"] = pj;
  }

  if (c.stats) {
    const GppRule& r_prev = cat.get(seq[seq.size() - 2]);
    const GppRule& r_last = cat.get(seq.back());
    const PairCase pc = pair_case(r_prev, r_last);
    Json sj;
    const auto [m1, m2] = build_matrices();
    const CrossRelations cr = verify_cross_relations();
    sj["matrices"] = {{"M1", golden_matrix_json(m1.m)}, {"M2", golden_matrix_json(m2.m)}};
    Json pj = Json::array();
    for (const InflationMatrix* m : {&m1, &m2}) {
      const PerronResult p = perron(m->to_double());
      pj.push_back({{"case", to_string(m->label)},
                    {"eigenvalue", p.eigenvalue},
                    {"right", {p.right(0), p.right(1), p.right(2), p.right(3), p.right(4), p.right(5)}},
                    {"left", {p.left(0), p.left(1), p.left(2), p.left(3), p.left(4), p.left(5)}},
                    {"left_residual", p.left_residual}});
    }
    sj["perron"] = pj;
    sj["cross_relations_exact"] = cr.all();

    // The last tiling has no known next rule, so classes are read on the one before it.
    const Tiling& t0 = tail[0];
    const Tiling& t1 = tail[1];
    const Tiling& t2 = tail[2];
    const Census cen = census(t1, t2);
    const PrototileRatios ratios = prototile_ratios(census(t2));
    const EmpiricalMatrix em = empirical_matrix(t0, t1, t2);
    const Tiling mirror_next = iterate(t1, cat.get(r_last.mirror), {}, c.peripheral_depth);
    const SymmetryCenters sc = symmetry_center_census(t1, t2, mirror_next);
    const Matrix6 expected = (pc == PairCase::Same ? m1 : m2).to_double();
    double max_dev = 0.0;
    for (int i = 0; i < 6; ++i)
      if (em.samples[i]) max_dev = std::max(max_dev, (em.m.row(i) - expected.row(i)).cwiseAbs().maxCoeff());

    sj["final_pair"] = to_string(pc);
    sj["census"] = census_json(cen);
    sj["ratios"] = {{"generation", t2.generation},
                    {"R_over_H", ratios.r_over_h},
                    {"R_over_H_error", ratios.r_over_h_error},
                    {"P_over_H", ratios.p_over_h},
                    {"P_over_H_error", ratios.p_over_h_error},
                    {"mean_area_over_H", ratios.mean_area_over_h},
                    {"expected", {{"R_over_H", kTau}, {"P_over_H", 2 * kTau}, {"mean_area_over_H", 1 / kTau}}}};
    Json samples = Json::array();
    for (long s : em.samples) samples.push_back(s);
    sj["empirical_matrix"] = {{"rows", matrix_json(em.m)}, {"samples", samples}, {"max_deviation", max_dev}};
    sj["symmetry_centres"] = {{"fivefold", sc.fivefold},
                              {"twofold_R", sc.twofold_r},
                              {"twofold_H", sc.twofold_h},
                              {"twofold_PP", sc.twofold_pp},
                              {"classified_tiles", sc.classified_tiles},
                              {"fivefold_per_tile", sc.fivefold_per_tile()},
                              {"twofold_per_tile", sc.twofold_per_tile()},
                              {"B_fraction_of_P", sc.classified_p ? double(sc.fivefold) / sc.classified_p : 0.0},
                              {"B_fraction_of_P_predicted", predicted_b_fraction_of_p(pc)}};
    artifacts.push_back(write_artifact(c.out, "stats.json", sj.dump(1)));
    summary["stats"] = sj;

    rep << "stats: generation " << t2.generation << " interior ratio R:P:H = 1 : " << fmt(ratios.p_over_h / ratios.r_over_h, 5)
        << " : " << fmt(1 / ratios.r_over_h, 5) << "  (R/H " << fmt(ratios.r_over_h, 5) << " +- "
        << fmt(ratios.r_over_h_error, 2) << ", P/H " << fmt(ratios.p_over_h, 5) << " +- " << fmt(ratios.p_over_h_error, 2)
        << ")\n"
        << "stats: mean tile area / H = " << fmt(ratios.mean_area_over_h, 5) << " (1/tau = " << fmt(1 / kTau, 5) << ")\n"
        << "stats: classes on generation " << t1.generation << " (" << to_string(pc) << " chirality pair):";
    for (int i = 0; i < 6; ++i) rep << ' ' << class_letter(static_cast<TileClass>(i)) << '=' << cen.class_counts[i];
    rep << "\nstats: empirical matrix, max deviation from " << (pc == PairCase::Same ? "M1" : "M2") << " = "
        << fmt(max_dev, 3) << "\n"
        << "stats: five-fold centres " << sc.fivefold << ", B share of P " << fmt(double(sc.fivefold) / std::max(1L, sc.classified_p), 4)
        << " (predicted " << fmt(predicted_b_fraction_of_p(pc), 4) << ")\n";
  }

  if (c.diffraction) {
    Json dj;
    Disc disc = inscribed_disc(last);
    Tiling control;
    if (!c.control_rule.empty()) {
      control = run_sequence(RuleSequence{std::vector<std::string>(seq.size(), c.control_rule), c.seed}, cat, {},
                             c.peripheral_depth);
      disc.radius = std::min(disc.radius, inscribed_disc(control).radius);
    }
    disc.radius *= 0.9;
    const Disc window = off_centre(disc, c.window_shift);
    const auto base = reciprocal_points(c.max_index, c.kperp_cutoff);
    auto peaks = base;
    const auto pts = circular_window(last, window);
    if (pts.empty()) throw AnalysisError("diffraction window contains no vertices");
    compute_intensities(pts, peaks);
    const ChiralityReport cr = chirality_report(peaks, c.strong_fraction);
    dj["window"] = {{"center", {window.center.x(), window.center.y()}}, {"radius", window.radius}, {"vertices", pts.size()}};
    dj["peaks"] = peaks.size();
    dj["max_intensity"] = cr.max_intensity;
    dj["strong_pairs"] = cr.strong.size();
    dj["weak_pairs"] = cr.weak.size();
    dj["strong_max_asymmetry"] = cr.strong_max;
    dj["weak_median_asymmetry"] = quantile(cr.weak, 0.5);
    rep << "diffraction: " << pts.size() << " scatterers, " << peaks.size() << " peaks, strong-peak max asymmetry "
        << fmt(cr.strong_max, 4) << ", weak-peak median " << fmt(quantile(cr.weak, 0.5), 4) << '\n';
    if (!c.control_rule.empty()) {
      auto cpeaks = base;
      const auto cpts = circular_window(control, off_centre(Disc{inscribed_disc(control).center, disc.radius}, c.window_shift));
      compute_intensities(cpts, cpeaks);
      const ChiralityReport cc = chirality_report(cpeaks, c.strong_fraction);
      std::vector<double> all = cc.strong;
      all.insert(all.end(), cc.weak.begin(), cc.weak.end());
      const RankTest t = mann_whitney_greater(cr.weak, cc.weak);
      dj["control"] = {{"rule", c.control_rule},
                       {"vertices", cpts.size()},
                       {"asymmetry_p99", quantile(all, 0.99)},
                       {"weak_median_asymmetry", quantile(cc.weak, 0.5)},
                       {"weak_dominance", {{"u", t.u}, {"z", t.z}, {"p_value", t.p_value}, {"effect", t.effect}}}};
      rep << "diffraction: control " << c.control_rule << " asymmetry p99 " << fmt(quantile(all, 0.99), 4)
          << ", weak-peak dominance p = " << fmt(t.p_value, 3) << '\n';
    }
    if (c.csv) artifacts.push_back(write_artifact(c.out, "peaks.csv", peaks_csv(peaks)));
    if (c.svg) artifacts.push_back(write_artifact(c.out, "peaks.svg", peaks_svg(peaks)));
    artifacts.push_back(write_artifact(c.out, "diffraction.json", dj.dump(1)));
    summary["diffraction"] = dj;
  }

  res.manifest = Json{{"config", to_json(c)},
                      {"generation", last.generation},
                      {"rule_history", last.rule_history},
                      {"artifacts", artifacts},
                      {"summary", summary}};
  write_artifact(c.out, "manifest.json", res.manifest.dump(1));
  res.report = rep.str();
  return res;
}

}  // namespace qtile
