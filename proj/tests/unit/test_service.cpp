#include <catch_amalgamated.hpp>

#include <set>
#include <thread>

#include "archive_builder.hpp"
#include "fuzzyeval/service/http.hpp"

using namespace fuzzyeval;
using namespace fuzzyeval::service;
namespace fs = std::filesystem;
namespace ts = testsupport;

namespace {

std::string fixture(const std::string& name) { return std::string(FUZZYEVAL_FIXTURES) + "/" + name; }

nlohmann::json body(const Response& r) { return nlohmann::json::parse(r.body); }

std::string scores_request(double c, double f, double i, const std::string& id = "reference") {
  return nlohmann::json{{"rubric_id", id}, {"scores", {{"clean_code", c}, {"functionality", f}, {"inheritance", i}}}}.dump();
}

std::set<std::string> sandboxes() {
  std::set<std::string> out;
  for (const auto& e : fs::directory_iterator(fs::temp_directory_path())) {
    const auto n = e.path().filename().string();
    if (n.rfind("fuzzyeval-", 0) == 0 && n.size() > 10 && std::isdigit(static_cast<unsigned char>(n[10]))) out.insert(n);
  }
  return out;
}

struct StoreDir {
  fs::path path = fs::temp_directory_path() / ("fuzzyeval-store-test-" + std::to_string(::getpid()));
  StoreDir() { fs::remove_all(path); }
  ~StoreDir() {
    std::error_code ec;
    fs::remove_all(path, ec);
  }
};

}  // namespace

TEST_CASE("evaluate with criterion scores", "[service]") {
  EvalService svc;
  auto r = svc.evaluate(scores_request(61, 74, 68));
  REQUIRE(r.status == 200);
  auto j = body(r);
  CHECK(j["success_score"].get<double>() == Catch::Approx(63.27).margin(2.0));
  CHECK(j["label"] == "Average");
  CHECK(j["rubric"] == "reference");
  CHECK(j["rubric_revision"] == 1);
  CHECK(j["project"] == nlohmann::json::object());

  r = svc.evaluate(scores_request(100, 82, 84));
  REQUIRE(r.status == 200);
  CHECK(body(r)["success_score"].get<double>() == Catch::Approx(92.0).margin(5.0));
}

TEST_CASE("project form data passes through untouched", "[service]") {
  EvalService svc;
  auto req = nlohmann::json::parse(scores_request(50, 50, 50));
  req["project"] = {{"student", "anon"}, {"course", "OOP 2"}, {"tags", {1, 2}}};
  const auto r = svc.evaluate(req.dump());
  REQUIRE(r.status == 200);
  CHECK(body(r)["project"] == req["project"]);
}

TEST_CASE("evaluate request validation", "[service]") {
  EvalService svc;
  CHECK(svc.evaluate(R"({"scores": {}})").status == 404);
  CHECK(svc.evaluate(scores_request(1, 2, 3, "nope")).status == 404);
  CHECK(svc.evaluate("{not json").status == 400);
  CHECK(svc.evaluate("[1]").status == 422);
  CHECK(svc.evaluate(R"({"rubric_id": "reference"})").status == 422);
  CHECK(svc.evaluate(R"({"rubric_id": "reference", "scores": {}, "archive": ""})").status == 422);

  auto bad = nlohmann::json::parse(scores_request(61, 74, 68));
  bad["scores"]["inheritance"] = 101;
  auto r = svc.evaluate(bad.dump());
  CHECK(r.status == 422);
  CHECK(body(r)["path"] == "/scores/inheritance");

  bad["scores"]["inheritance"] = "high";
  CHECK(svc.evaluate(bad.dump()).status == 422);
  bad["scores"].erase("inheritance");
  CHECK(body(svc.evaluate(bad.dump()))["path"] == "/scores/inheritance");
  bad["scores"]["inheritance"] = 5;
  bad["scores"]["style"] = 5;
  CHECK(body(svc.evaluate(bad.dump()))["path"] == "/scores/style");

  auto res = nlohmann::json::parse(scores_request(61, 74, 68));
  res["resolution"] = 1000;
  CHECK(svc.evaluate(res.dump()).status == 422);
  res["resolution"] = 2001;
  r = svc.evaluate(res.dump());
  REQUIRE(r.status == 200);
  CHECK(body(r)["aggregate"]["membership"].size() == 2001);
}

TEST_CASE("evaluate with an uploaded archive", "[service]") {
  EvalService svc;
  const auto before = sandboxes();
  const auto tarball = ts::tar_tree(fixture("tiny"), "tiny/");
  for (const auto& payload : {tarball, ts::gzip(tarball)}) {
    const auto req = nlohmann::json{{"rubric_id", "reference"}, {"project", {{"name", "tiny"}}}, {"archive", ts::base64(payload)}};
    const auto r = svc.evaluate(req.dump());
    REQUIRE(r.status == 200);
    const auto j = body(r);
    CHECK(j["metrics"]["class_count"] == 3);
    CHECK(j["metrics"]["total_lines"] == 96);

    // Same numbers as the CLI golden report.
    const auto golden = nlohmann::json::parse(ts::read_file(std::string(FUZZYEVAL_SOURCE_DIR) + "/tests/golden/tiny_report.json"));
    CHECK(j["criterion_scores"] == golden["criterion_scores"]);
    CHECK(j["success_score"] == golden["success_score"]);
    CHECK(j["label"] == golden["label"]);
  }
  CHECK(sandboxes() == before);

  auto bad = nlohmann::json{{"rubric_id", "reference"}, {"archive", "@@not base64@@"}};
  CHECK(svc.evaluate(bad.dump()).status == 400);
  bad["archive"] = ts::base64(std::string(700, 'x'));
  CHECK(svc.evaluate(bad.dump()).status == 400);
  CHECK(sandboxes() == before);
}

TEST_CASE("metrics endpoint", "[service]") {
  ServiceOptions opt;
  opt.max_upload_bytes = 64 * 1024;
  opt.max_unpacked_bytes = 128 * 1024;
  EvalService svc(opt);
  const auto before = sandboxes();

  auto r = svc.metrics(ts::tar_tree(fixture("tiny")));
  REQUIRE(r.status == 200);
  CHECK(body(r)["class_count"] == 3);
  CHECK(svc.metrics(ts::gzip(ts::tar_tree(fixture("tiny")))).body == r.body);

  for (const auto& empty : {std::string(), ts::tar({})}) {
    r = svc.metrics(empty);
    REQUIRE(r.status == 200);
    const auto zeros = body(r);
    for (const auto& [k, v] : zeros.items()) {
      if (k == "metrics_version" || k == "warnings") continue;
      CHECK(v.get<double>() == 0.0);
    }
  }

  CHECK(svc.metrics(std::string(1500, 'z')).status == 400);
  auto corrupt = ts::tar({{"A.java", "class A {}"}});
  corrupt[10] ^= 0x55;
  CHECK(svc.metrics(corrupt).status == 400);
  CHECK(svc.metrics(ts::gzip("garbage")).status == 400);
  CHECK(svc.metrics(ts::tar({{"../evil.java", "class E {}"}})).status == 400);
  CHECK(svc.metrics(ts::tar({{"/abs/evil.java", "class E {}"}})).status == 400);

  CHECK(svc.metrics(std::string(opt.max_upload_bytes + 1, '\0')).status == 413);
  // Small on the wire, large once inflated.
  const auto bomb = ts::gzip(ts::tar({{"Big.java", std::string(512 * 1024, ' ')}}));
  REQUIRE(bomb.size() < opt.max_upload_bytes);
  CHECK(svc.metrics(bomb).status == 413);

  // A file the tokenizer rejects becomes a warning without a sandbox path.
  r = svc.metrics(ts::tar({{"src/Bad.java", "class Bad { /* open"}, {"src/Ok.java", "class Ok {}"}}));
  REQUIRE(r.status == 200);
  const auto j = body(r);
  CHECK(j["class_count"] == 1);
  REQUIRE(j["warnings"].size() == 1);
  CHECK(j["warnings"][0].get<std::string>().find(fs::temp_directory_path().string()) == std::string::npos);

  CHECK(sandboxes() == before);
}

TEST_CASE("identical requests give identical bodies", "[service]") {
  EvalService svc;
  const auto req = nlohmann::json{{"rubric_id", "reference"}, {"archive", ts::base64(ts::tar_tree(fixture("tiny")))}}.dump();
  const auto a = svc.evaluate(req);
  const auto b = svc.evaluate(req);
  REQUIRE(a.status == 200);
  CHECK(a.body == b.body);
  CHECK(svc.evaluate(scores_request(61, 74, 68)).body == svc.evaluate(scores_request(61, 74, 68)).body);
}

TEST_CASE("no fired rule is reported with the criterion scores", "[service]") {
  EvalService svc;
  auto doc = nlohmann::json::parse(kReferenceRubricJson);
  doc["name"] = "sparse";
  doc["exhaustive"] = false;
  doc["rules"] = nlohmann::json::array({doc["rules"][0]});
  auto r = svc.post_rubric(doc.dump());
  REQUIRE(r.status == 201);
  const auto id = body(r)["id"].get<std::string>();
  r = svc.evaluate(scores_request(0, 0, 0, id));
  CHECK(r.status == 422);
  CHECK(body(r)["criterion_scores"]["clean_code"] == 0.0);
}

TEST_CASE("rubric CRUD with revisions", "[service]") {
  EvalService svc;
  auto doc = nlohmann::json::parse(kReferenceRubricJson);
  doc["name"] = "course 2";

  auto r = svc.post_rubric(doc.dump());
  REQUIRE(r.status == 201);
  auto j = body(r);
  CHECK(j["id"] == "course-2");
  CHECK(j["revision"] == 1);
  CHECK(j["document"] == doc);
  CHECK(body(svc.post_rubric(doc.dump()))["id"] == "course-2-2");
  CHECK(body(svc.list_rubrics())["rubrics"] == nlohmann::json({"course-2", "course-2-2", "reference"}));

  auto dup = doc;
  dup["rules"][1]["id"] = dup["rules"][0]["id"];
  r = svc.put_rubric("course-2", nlohmann::json{{"revision", 1}, {"document", dup}}.dump());
  CHECK(r.status == 422);
  CHECK(body(r)["path"].get<std::string>().rfind("/document/rules", 0) == 0);

  auto edited = doc;
  edited["description"] = "second edit";
  r = svc.put_rubric("course-2", nlohmann::json{{"revision", 1}, {"document", edited}}.dump());
  REQUIRE(r.status == 200);
  CHECK(body(r)["revision"] == 2);

  r = svc.put_rubric("course-2", nlohmann::json{{"revision", 1}, {"document", doc}}.dump());
  CHECK(r.status == 409);
  CHECK(svc.put_rubric("nope", nlohmann::json{{"revision", 1}, {"document", doc}}.dump()).status == 404);
  CHECK(svc.put_rubric("course-2", R"({"document": {}})").status == 422);

  r = svc.get_rubric("course-2");
  REQUIRE(r.status == 200);
  CHECK(body(r)["document"] == edited);
  CHECK(body(r)["revision"] == 2);
  CHECK(svc.get_rubric("missing").status == 404);

  auto invalid = doc;
  invalid["rules"].erase(invalid["rules"].begin());
  CHECK(svc.post_rubric(invalid.dump()).status == 422);
  CHECK(svc.post_rubric("{").status == 400);

  // Evaluation reports the revision that scored it.
  CHECK(body(svc.evaluate(scores_request(61, 74, 68, "course-2")))["rubric_revision"] == 2);
}

TEST_CASE("rubric store persists across instances", "[service]") {
  StoreDir dir;
  auto doc = nlohmann::json::parse(kReferenceRubricJson);
  doc["name"] = "kept";
  {
    RubricStore store(dir.path);
    store.create(doc);
    doc["description"] = "edited";
    store.update("kept", 1, doc);
  }
  RubricStore again(dir.path);
  CHECK(again.ids() == std::vector<std::string>{"kept", "reference"});
  const auto s = again.get("kept");
  CHECK(s.revision == 2);
  CHECK(s.document == doc);
  CHECK_THROWS_AS(again.update("kept", 1, doc), Conflict);
  for (const auto& e : fs::directory_iterator(dir.path)) CHECK(e.path().extension() == ".json");
}

TEST_CASE("plagiarism endpoint is not configured", "[service]") {
  EvalService svc;
  const auto r = svc.plagiarism("{}");
  CHECK(r.status == 501);
  CHECK(body(r)["status"] == "not configured");
}

TEST_CASE("HTTP binding over localhost", "[service][http]") {
  EvalService svc;
  httplib::Server srv;
  bind(srv, svc);
  const int port = srv.bind_to_any_port("127.0.0.1");
  REQUIRE(port > 0);
  std::jthread th([&] { srv.listen_after_bind(); });
  srv.wait_until_ready();

  httplib::Client cli("127.0.0.1", port);
  auto res = cli.Get("/health");
  REQUIRE(res);
  CHECK(res->status == 200);
  CHECK(res->get_header_value("Access-Control-Allow-Origin") == "*");

  res = cli.Post("/evaluate", scores_request(61, 74, 68), "application/json");
  REQUIRE(res);
  CHECK(res->status == 200);
  CHECK(nlohmann::json::parse(res->body)["label"] == "Average");

  res = cli.Post("/metrics", ts::tar_tree(fixture("tiny")), "application/x-tar");
  REQUIRE(res);
  CHECK(nlohmann::json::parse(res->body)["class_count"] == 3);

  res = cli.Options("/evaluate");
  REQUIRE(res);
  CHECK(res->status == 204);
  CHECK(res->get_header_value("Access-Control-Allow-Methods").find("PUT") != std::string::npos);

  res = cli.Get("/rubrics/reference");
  REQUIRE(res);
  CHECK(nlohmann::json::parse(res->body)["revision"] == 1);
  res = cli.Get("/rubrics/none");
  REQUIRE(res);
  CHECK(res->status == 404);
  res = cli.Get("/nowhere");
  REQUIRE(res);
  CHECK(res->status == 404);
  CHECK(nlohmann::json::parse(res->body).contains("error"));
  res = cli.Post("/plagiarism", "{}", "application/json");
  REQUIRE(res);
  CHECK(res->status == 501);

  srv.stop();
}
