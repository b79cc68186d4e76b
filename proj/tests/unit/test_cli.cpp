#include <catch_amalgamated.hpp>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "cli_app.hpp"

using namespace fuzzyeval;
namespace fs = std::filesystem;

namespace {

struct Run {
  int code;
  std::string out, err;
};

Run run(std::vector<std::string> args) {
  std::ostringstream out, err;
  const int code = cli::run(args, out, err);
  return {code, out.str(), err.str()};
}

std::string fixture(const std::string& name) { return std::string(FUZZYEVAL_FIXTURES) + "/" + name; }

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

struct TempDir {
  fs::path path;
  TempDir() {
    path = fs::temp_directory_path() / ("fuzzyeval-cli-" + std::to_string(std::rand()) + std::to_string(reinterpret_cast<std::uintptr_t>(this)));
    fs::create_directories(path);
  }
  ~TempDir() {
    std::error_code ec;
    fs::remove_all(path, ec);
  }
};

fs::path write_rubric(const TempDir& dir, const std::string& name, const nlohmann::json& doc) {
  const auto p = dir.path / name;
  std::ofstream(p) << doc.dump(2);
  return p;
}

nlohmann::json reference_doc() { return nlohmann::json::parse(kReferenceRubricJson); }

}  // namespace

TEST_CASE("metrics subcommand on the tiny fixture", "[cli]") {
  const auto r = run({"metrics", "--project", fixture("tiny")});
  REQUIRE(r.code == cli::kOk);
  const auto j = nlohmann::json::parse(r.out);
  CHECK(j["class_count"] == 3);
  CHECK(j["method_count"] == 12);
  CHECK(j["total_lines"] == 96);

  const auto md = run({"metrics", "-p", fixture("tiny"), "--format", "markdown"});
  CHECK(md.code == cli::kOk);
  CHECK(md.out.find("| class_count | 3 |") != std::string::npos);
}

TEST_CASE("metrics on an empty directory is all zeros", "[cli]") {
  TempDir dir;
  const auto r = run({"metrics", "--project", dir.path.string()});
  REQUIRE(r.code == cli::kOk);
  const auto j = nlohmann::json::parse(r.out);
  for (const auto& [k, v] : j.items()) {
    if (k == "metrics_version" || k == "warnings") continue;
    CHECK(v.get<double>() == 0.0);
  }
}

TEST_CASE("missing project exits with the I/O code", "[cli]") {
  const auto r = run({"metrics", "--project", "/nonexistent/fuzzyeval/project"});
  CHECK(r.code == cli::kIo);
  CHECK_FALSE(r.err.empty());
  CHECK(run({"evaluate", "--project", "/nonexistent/fuzzyeval/project"}).code == cli::kIo);
}

TEST_CASE("what-if evaluates criterion scores directly", "[cli]") {
  auto score = [](std::vector<std::string> args) {
    args.insert(args.begin(), "what-if");
    const auto r = run(args);
    REQUIRE(r.code == cli::kOk);
    return nlohmann::json::parse(r.out);
  };
  CHECK(score({"100", "100", "100"})["label"] == "Very Good");
  CHECK(score({"0", "0", "0"})["label"] == "Very Poor");
  const auto j = score({"61", "74", "68"});
  CHECK(j["success_score"].get<double>() == Catch::Approx(63.27).margin(2.0));
  CHECK(j["label"] == "Average");
  CHECK(j["project"] == nlohmann::json::object());
}

TEST_CASE("what-if argument errors are usage errors", "[cli]") {
  CHECK(run({"what-if", "61", "74", "101"}).code == cli::kUsage);
  CHECK(run({"what-if", "61", "74"}).code == cli::kUsage);
  CHECK(run({"what-if", "61", "-1", "5"}).code == cli::kUsage);
  CHECK(run({"what-if", "61", "74", "68", "--resolution", "100"}).code == cli::kUsage);
  CHECK(run({"what-if", "61", "74", "68", "--resolution", "51"}).code == cli::kUsage);
  CHECK(run({"what-if", "61", "74", "68", "--format", "yaml"}).code == cli::kUsage);
  CHECK(run({}).code == cli::kUsage);
  CHECK(run({"bogus"}).code == cli::kUsage);
}

TEST_CASE("resolution flag changes sampling", "[cli]") {
  const auto a = run({"what-if", "61", "74", "68", "--resolution", "2001"});
  REQUIRE(a.code == cli::kOk);
  const auto j = nlohmann::json::parse(a.out);
  CHECK(j["aggregate"]["membership"].size() == 2001);
  CHECK(j["success_score"].get<double>() == Catch::Approx(63.27).margin(2.0));
}

TEST_CASE("incomplete rubric is a configuration error", "[cli]") {
  TempDir dir;
  auto doc = reference_doc();
  doc["rules"].erase(doc["rules"].begin() + 4);
  const auto p = write_rubric(dir, "holes.json", doc);
  const auto r = run({"what-if", "50", "50", "50", "--rubric", p.string()});
  CHECK(r.code == cli::kConfig);
  CHECK(r.err.find("no rule covers") != std::string::npos);

  std::ofstream(dir.path / "broken.json") << "{ \"rubric_version\": 1,";
  const auto b = run({"what-if", "50", "50", "50", "-r", (dir.path / "broken.json").string()});
  CHECK(b.code == cli::kConfig);
  CHECK(b.err.find("line") != std::string::npos);

  CHECK(run({"what-if", "50", "50", "50", "-r", (dir.path / "missing.json").string()}).code == cli::kIo);
}

TEST_CASE("no fired rule reports the criterion scores", "[cli]") {
  TempDir dir;
  auto doc = reference_doc();
  doc["exhaustive"] = false;
  doc["rules"] = nlohmann::json::array({doc["rules"][0]});
  const auto p = write_rubric(dir, "sparse.json", doc);
  const auto r = run({"what-if", "0", "0", "0", "--rubric", p.string()});
  CHECK(r.code == cli::kConfig);
  CHECK(r.err.find("clean_code=0") != std::string::npos);
  CHECK(r.out.empty());
}

TEST_CASE("rubric comes from the environment when no flag is given", "[cli]") {
  TempDir dir;
  auto doc = reference_doc();
  doc["name"] = "from-env";
  const auto p = write_rubric(dir, "env.json", doc);
  ::setenv(cli::kRubricEnv, p.string().c_str(), 1);
  const auto r = run({"what-if", "61", "74", "68"});
  ::unsetenv(cli::kRubricEnv);
  REQUIRE(r.code == cli::kOk);
  CHECK(nlohmann::json::parse(r.out)["rubric"] == "from-env");

  ::setenv(cli::kRubricEnv, (dir.path / "nope.json").string().c_str(), 1);
  const auto flagged = run({"what-if", "61", "74", "68", "--rubric", p.string()});
  ::unsetenv(cli::kRubricEnv);
  CHECK(flagged.code == cli::kOk);
}

TEST_CASE("evaluate on tiny matches the golden report", "[cli][golden]") {
  TempDir dir;
  const auto out = dir.path / "report.json";
  const auto r = run({"evaluate", "--project", fixture("tiny"), "--output", out.string()});
  REQUIRE(r.code == cli::kOk);
  CHECK(r.out.empty());
  const auto golden = std::string(FUZZYEVAL_SOURCE_DIR) + "/tests/golden/tiny_report.json";
  CHECK(slurp(out) == slurp(golden));

  const auto md = run({"evaluate", "-p", fixture("tiny"), "-f", "markdown", "--threads", "1"});
  REQUIRE(md.code == cli::kOk);
  CHECK(md.out == slurp(std::string(FUZZYEVAL_SOURCE_DIR) + "/tests/golden/tiny_report.md"));
}

TEST_CASE("evaluate output parses back into the same report", "[cli]") {
  const auto r = run({"evaluate", "--project", fixture("tiny")});
  REQUIRE(r.code == cli::kOk);
  const auto rep = report::from_json(nlohmann::json::parse(r.out));
  CHECK(report::dump(rep, &rubric::load_reference_rubric()) == r.out);
  CHECK(rep.project["name"] == "tiny");
  REQUIRE(rep.metrics);
  CHECK(rep.metrics->class_count == 3);
}

TEST_CASE("help exits cleanly", "[cli]") {
  const auto r = run({"--help"});
  CHECK(r.code == cli::kOk);
  CHECK(r.out.find("what-if") != std::string::npos);
}
