#include "doctest.h"
#include "qtile/job.hpp"

#include <sys/wait.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>

using namespace qtile;
namespace fs = std::filesystem;

namespace {

fs::path scratch(const std::string& name) {
  const fs::path p = fs::temp_directory_path() / ("qtile_test_" + name);
  fs::remove_all(p);
  return p;
}

int cli(const std::string& args) {
  const std::string cmd = std::string(QTILE_CLI) + " " + args + " >/dev/null 2>&1";
  const int status = std::system(cmd.c_str());
  return WIFEXITED(status) ? WEXITSTATUS(status) : -1;
}

std::string slurp(const fs::path& p) {
  std::ifstream f(p, std::ios::binary);
  std::ostringstream s;
  s << f.rdbuf();
  return s.str();
}

JobConfig small_job(const fs::path& out) {
  JobConfig c;
  c.rule = "rph-l";
  c.iters = 3;
  c.out = out.string();
  c.svg = c.json = c.csv = c.png = true;
  c.perp = c.stats = c.diffraction = true;
  c.max_index = 3;
  c.kperp_cutoff = 5;
  return c;
}

}  // namespace

TEST_CASE("hashing") {
  CHECK(sha256_hex("abc") == "ba7816bf8f01cfea414140de5dae2223b00361a396177a9cb410ff61f20015ad");
  CHECK(sha256_hex("") == "e3b0c44298fc1c149afbf4c8996fb92427ae41e4649b934ca495991b7852b855");
}

TEST_CASE("golden values in JSON") {
  const Json j = golden_json(GoldenNum(Rational(1, 2), Rational(3)));
  CHECK(j["exact"] == "1/2+3*tau");
  CHECK(j["value"].get<double>() == doctest::Approx(0.5 + 3 * kTau));
}

TEST_CASE("config merging") {
  JobConfig c;
  merge_json(c, Json::parse(R"({"rule": "rph-r", "iters": 4, "exports": {"svg": true},
                               "thresholds": {"max_index": 5, "control_rule": ""}})"));
  CHECK(c.rule == "rph-r");
  CHECK(c.iters == 4);
  CHECK(c.svg);
  CHECK_FALSE(c.json);
  CHECK(c.max_index == 5);
  CHECK(c.control_rule.empty());
  CHECK(c.resolved_sequence() == std::vector<std::string>(4, "rph-r"));

  merge_json(c, Json::parse(R"({"sequence": "rph-l*2,rph-r", "rule": ""})"));
  CHECK(c.resolved_sequence() == std::vector<std::string>{"rph-l", "rph-l", "rph-r"});

  CHECK_THROWS_AS(merge_json(c, Json::parse(R"({"colour": "red"})")), ConfigError);
  CHECK_THROWS_AS(merge_json(c, Json::parse(R"({"exports": {"pdf": true}})")), ConfigError);
  CHECK_THROWS_AS(merge_json(c, Json::parse(R"({"iters": "many"})")), ConfigError);
  CHECK_THROWS_AS(merge_json(c, Json::parse("[1, 2]")), ConfigError);

  // Round trip through the serialized form.
  JobConfig d;
  merge_json(d, to_json(c));
  CHECK(to_json(d) == to_json(c));
}

TEST_CASE("validation") {
  JobConfig c;
  CHECK_THROWS_AS(validate(c), ConfigError);
  c.rule = "rph-l";
  c.iters = 2;
  CHECK_NOTHROW(validate(c));
  c.stats = true;
  CHECK_THROWS_AS(validate(c), ConfigError);  // too few iterations
  c.iters = 3;
  CHECK_NOTHROW(validate(c));
  c.rule = "rphc-1";
  CHECK_THROWS_AS(validate(c), ConfigError);  // stats needs RPH rules
  c.stats = false;
  c.rule = "bogus";
  CHECK_THROWS_AS(validate(c), ConfigError);
  c.rule = "rph-l";
  c.seed = "Q";
  CHECK_THROWS_AS(validate(c), ConfigError);
  c.seed = "P";
  c.max_index = 0;
  CHECK_THROWS_AS(validate(c), ConfigError);
  c.max_index = 6;
  c.sequence = {"rph-l"};
  CHECK_THROWS_AS(validate(c), ConfigError);  // rule and sequence together
}

TEST_CASE("rule listing") {
  const Json rules = list_rules();
  int rphc = 0, rph = 0;
  for (const auto& r : rules) {
    if (r["id"] == "para-penrose") CHECK(r["shells"] == 2);
    rphc += r["family"] == "rphc";
    rph += r["family"] == "rph";
  }
  CHECK(rphc == 10);
  CHECK(rph == 2);
}

TEST_CASE("jobs are deterministic") {
  const fs::path a = scratch("a"), b = scratch("b");
  const JobResult ra = run_job(small_job(a));
  const JobResult rb = run_job(small_job(b));
  REQUIRE(ra.manifest["artifacts"].size() >= 12);
  CHECK(ra.manifest["artifacts"] == rb.manifest["artifacts"]);
  for (const auto& art : ra.manifest["artifacts"]) {
    const std::string name = art["path"];
    CAPTURE(name);
    const std::string bytes = slurp(a / name);
    CHECK(bytes.size() == art["bytes"].get<std::size_t>());
    CHECK(sha256_hex(bytes) == art["sha256"]);
    CHECK(bytes == slurp(b / name));
  }
  CHECK(slurp(a / "manifest.json") == slurp(b / "manifest.json"));
  const Json stats = Json::parse(slurp(a / "stats.json"));
  CHECK(stats.contains("perron"));
  const Json tiling = Json::parse(slurp(a / "tiling.json"));
  CHECK(tiling["vertices"].size() == ra.manifest["summary"]["vertices"].get<std::size_t>());
  CHECK(slurp(a / "cloud.png").substr(1, 3) == "PNG");
  CHECK(slurp(a / "tiling.svg").find("<svg") != std::string::npos);
  fs::remove_all(a);
  fs::remove_all(b);
}

TEST_CASE("command line exit codes") {
  const fs::path out = scratch("cli");
  CHECK(cli("list-rules") == 0);
  CHECK(cli("list-rules --json") == 0);
  CHECK(cli("generate --rule rph-l --iters 2 --svg --out " + out.string()) == 0);
  CHECK(fs::exists(out / "tiling.svg"));
  CHECK(fs::exists(out / "manifest.json"));
  CHECK(cli("generate --rule nonexistent --iters 2 --out " + out.string()) == 2);
  CHECK(cli("generate --iters 2 --out " + out.string()) == 2);
  CHECK(cli("stats --rule rphc-1 --iters 4 --out " + out.string()) == 2);
  CHECK(cli("generate --no-such-flag") == 2);

  const fs::path cfg = out / "job.json";
  std::ofstream(cfg) << R"({"rule": "rph-r", "iters": 2, "exports": {"json": true}})";
  CHECK(cli("generate --config " + cfg.string() + " --out " + (out / "from_config").string()) == 0);
  CHECK(fs::exists(out / "from_config" / "tiling.json"));
  std::ofstream(out / "bad.json") << R"({"rule": "rph-r", "unknown": 1})";
  CHECK(cli("generate --config " + (out / "bad.json").string()) == 2);
  std::ofstream(out / "broken.json") << "{ not json";
  CHECK(cli("generate --config " + (out / "broken.json").string()) == 2);

  // Output path blocked by a regular file.
  std::ofstream(out / "blocker") << "x";
  CHECK(cli("generate --rule rph-l --iters 1 --json --out " + (out / "blocker").string()) == 5);
  fs::remove_all(out);
}
