#include "qtile/job.hpp"

#include "CLI11.hpp"

#include <fstream>
#include <iostream>

namespace {

using namespace qtile;

// Options shared by generate, analyze and stats. Values already in cfg (from --config) are the defaults.
void add_job_options(CLI::App* app, JobConfig& cfg, std::string& config_path, std::string& sequence_text) {
  app->add_option("--config", config_path, "JSON job file; flags given on the command line override it");
  app->add_option("--rule", cfg.rule, "Rule id to repeat, see list-rules");
  app->add_option("--sequence", sequence_text, "Comma-separated rule ids, e.g. rph-l*4,rph-r");
  app->add_option("--iters", cfg.iters, "Number of iterations of --rule");
  app->add_option("--seed", cfg.seed, "Seed patch: P, P-mirror, R, H or origin");
  app->add_option("--out", cfg.out, "Output directory");
  app->add_option("--peripheral-depth", cfg.peripheral_depth, "Face rings treated as the patch rim");
  app->add_flag("--svg", cfg.svg, "Write SVG renderings");
  app->add_flag("--json", cfg.json, "Write JSON data");
  app->add_flag("--csv", cfg.csv, "Write CSV tables");
  app->add_flag("--png", cfg.png, "Write the perpendicular-space density as PNG");
  app->add_flag("--perp", cfg.perp, "Perpendicular-space analysis");
  app->add_flag("--stats", cfg.stats, "Tile statistics (RPH sequences)");
  app->add_flag("--diffraction", cfg.diffraction, "Structure factor and mirror asymmetry");
  app->add_option("--max-index", cfg.max_index, "Largest |m_j| of the reciprocal indices");
  app->add_option("--kperp-cutoff", cfg.kperp_cutoff, "Largest perpendicular wavevector kept");
  app->add_option("--control", cfg.control_rule, "Mirror-symmetric control rule for diffraction ('' for none)");
  app->add_option("--window-shift", cfg.window_shift, "Off-centre shift of the diffraction window, fraction of its radius");
  app->add_option("--bins", cfg.histogram_bins, "Histogram bins per axis for symmetry mismatch");
  app->add_option("--surface-iterations", cfg.surface_iterations, "Dual-map iterations for the atomic surface");
  app->add_option("--svg-half-width", cfg.svg_half_width, "Half width of the rendered tiling window");
}

// The config file is loaded before parsing so that explicit flags win.
std::string find_config(int argc, char** argv) {
  for (int i = 1; i < argc; ++i) {
    const std::string a = argv[i];
    if (a == "--config" && i + 1 < argc) return argv[i + 1];
    if (a.rfind("--config=", 0) == 0) return a.substr(9);
  }
  return {};
}

}  // namespace

int main(int argc, char** argv) {
  JobConfig cfg;
  std::string config_path, sequence_text, analysis;
  try {
    if (const std::string path = find_config(argc, argv); !path.empty()) {
      std::ifstream f(path);
      if (!f) throw ConfigError("cannot read config " + path);
      merge_json(cfg, Json::parse(f));
    }
  } catch (const ConfigError& e) {
    std::cerr << "config error: " << e.what() << '\n';
    return kExitConfig;
  } catch (const nlohmann::json::exception& e) {
    std::cerr << "config error: " << e.what() << '\n';
    return kExitConfig;
  }

  CLI::App app{"Decagonal quasiperiodic tilings from generalized point processes"};
  app.require_subcommand(1);
  bool list_json = false;
  auto* list = app.add_subcommand("list-rules", "Print the rule catalog");
  list->add_flag("--json", list_json, "Print as JSON");
  auto* gen = app.add_subcommand("generate", "Generate a tiling and optional analyses");
  add_job_options(gen, cfg, config_path, sequence_text);
  auto* analyze = app.add_subcommand("analyze", "Generate and run one analysis: perp, stats or diffraction");
  analyze->add_option("analysis", analysis, "perp | stats | diffraction")->required()->check(CLI::IsMember({"perp", "stats", "diffraction"}));
  add_job_options(analyze, cfg, config_path, sequence_text);
  auto* stats = app.add_subcommand("stats", "Tile statistics of an RPH sequence");
  add_job_options(stats, cfg, config_path, sequence_text);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kExitOk : kExitConfig;
  }

  if (list->parsed()) {
    const Json rules = list_rules();
    if (list_json) {
      std::cout << rules.dump(2) << '\n';
      return kExitOk;
    }
    for (const auto& r : rules) {
      std::cout << r["id"].get<std::string>() << "  family=" << r["family"].get<std::string>()
                << "  chirality=" << r["chirality"].get<std::string>() << "  shells=" << r["shells"]
                << "  motif=" << r["motif_points"];
      for (const auto& t : r["templates"]) std::cout << "  " << t["kind"].get<std::string>() << ':' << t["removals"];
      std::cout << '\n';
    }
    return kExitOk;
  }

  try {
    if (!sequence_text.empty()) cfg.sequence = parse_sequence(sequence_text);
    if (analyze->parsed()) {
      cfg.perp = analysis == "perp" || cfg.perp;
      cfg.stats = analysis == "stats" || cfg.stats;
      cfg.diffraction = analysis == "diffraction" || cfg.diffraction;
    }
    if (stats->parsed()) cfg.stats = true;
    const JobResult r = run_job(cfg);
    std::cout << r.report << "wrote " << r.manifest["artifacts"].size() + 1 << " files to " << cfg.out << '\n';
    return kExitOk;
  } catch (const ConfigError& e) {
    std::cerr << "config error: " << e.what() << '\n';
    return kExitConfig;
  } catch (const std::invalid_argument& e) {
    std::cerr << "config error: " << e.what() << '\n';
    return kExitConfig;
  } catch (const UcViolation& e) {
    std::cerr << e.what() << '\n';
    return kExitUcViolation;
  } catch (const MissingRemoval& e) {
    std::cerr << "generation failed: " << e.what() << '\n';
    return kExitUcViolation;
  } catch (const AnalysisError& e) {
    std::cerr << "analysis failed: " << e.what() << '\n';
    return kExitAnalysis;
  } catch (const IoError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitIo;
  } catch (const std::filesystem::filesystem_error& e) {
    std::cerr << "i/o error: " << e.what() << '\n';
    return kExitIo;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitInternal;
  }
}
