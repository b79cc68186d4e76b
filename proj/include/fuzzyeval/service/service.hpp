#pragma once

#include <nlohmann/json.hpp>

#include <filesystem>
#include <memory>
#include <string>

#include "fuzzyeval/pipeline.hpp"
#include "fuzzyeval/report/report.hpp"
#include "fuzzyeval/service/archive.hpp"
#include "fuzzyeval/service/rubric_store.hpp"

namespace fuzzyeval::service {

struct ServiceOptions {
  std::filesystem::path store_dir;              // empty: in-memory store
  std::size_t max_upload_bytes = 16u << 20;     // archive as sent
  std::size_t max_unpacked_bytes = 64u << 20;   // archive contents
  std::string cors_origin = "*";
  metrics::ExtractorOptions extractor;
};

struct Response {
  int status = 200;
  std::string body;
  std::string content_type = "application/json";
};

/// Anti-plagiarism client seam. The shipped implementation is not wired to any service.
class PlagiarismChecker {
 public:
  virtual ~PlagiarismChecker() = default;
  virtual nlohmann::json check(const nlohmann::json& request) = 0;
  virtual bool configured() const = 0;
};

class UnconfiguredPlagiarismChecker : public PlagiarismChecker {
 public:
  nlohmann::json check(const nlohmann::json&) override { return {{"status", "not configured"}}; }
  bool configured() const override { return false; }
};

inline Response json_response(int status, const nlohmann::json& body) { return {status, body.dump() + "\n"}; }

inline Response error_response(int status, const std::string& message, const std::string& path = {}) {
  nlohmann::json j{{"error", message}};
  if (!path.empty()) j["path"] = path;
  return json_response(status, j);
}

/// Transport-independent request handlers.
class EvalService {
 public:
  explicit EvalService(ServiceOptions opt = {})
      : opt_(std::move(opt)), store_(opt_.store_dir), plagiarism_(std::make_unique<UnconfiguredPlagiarismChecker>()) {}

  const ServiceOptions& options() const { return opt_; }
  RubricStore& store() { return store_; }
  void set_plagiarism_checker(std::unique_ptr<PlagiarismChecker> c) { plagiarism_ = std::move(c); }

  Response evaluate(const std::string& body) {
    nlohmann::json req;
    try {
      req = nlohmann::json::parse(body);
    } catch (const nlohmann::json::parse_error&) {
      return error_response(400, "request body is not valid JSON");
    }
    if (!req.is_object()) return error_response(422, "request must be a JSON object");
    if (!req.contains("rubric_id") || !req["rubric_id"].is_string()) {
      return error_response(404, "missing rubric_id", "/rubric_id");
    }
    const auto id = req["rubric_id"].get<std::string>();
    std::shared_ptr<const rubric::Rubric> rub;
    std::int64_t revision = 0;
    try {
      rub = store_.rubric(id);
      revision = store_.get(id).revision;
    } catch (const NotFound& e) {
      return error_response(404, e.what(), "/rubric_id");
    }

    const bool has_scores = req.contains("scores");
    const bool has_archive = req.contains("archive");
    if (has_scores == has_archive) return error_response(422, "give exactly one of 'scores' or 'archive'");

    std::size_t resolution = 0;
    if (req.contains("resolution")) {
      const auto& r = req["resolution"];
      if (!r.is_number_integer() || r.get<long long>() < 101 || r.get<long long>() % 2 == 0) {
        return error_response(422, "resolution must be an odd integer >= 101", "/resolution");
      }
      resolution = r.get<std::size_t>();
    }

    report::EvaluationReport rep;
    rep.project = req.contains("project") ? req["project"] : nlohmann::json::object();
    rep.rubric = id;
    fuzzy::CrispInputs scores;
    if (has_scores) {
      const auto& s = req["scores"];
      if (!s.is_object()) return error_response(422, "'scores' must be an object", "/scores");
      for (const auto& [k, v] : s.items()) {
        if (!rub->find_criterion(k)) return error_response(422, "unknown criterion '" + k + "'", "/scores/" + k);
      }
      for (const auto& c : rub->criteria) {
        const std::string where = "/scores/" + c.name;
        if (!s.contains(c.name) || !s[c.name].is_number()) return error_response(422, "missing score for '" + c.name + "'", where);
        const double v = s[c.name].get<double>();
        const auto dom = c.variable.domain();
        if (!(v >= dom.lo && v <= dom.hi)) return error_response(422, "score for '" + c.name + "' is out of range", where);
        scores[c.name] = v;
      }
    } else {
      if (!req["archive"].is_string()) return error_response(400, "'archive' must be a base64 string", "/archive");
      try {
        const auto bytes = base64_decode(req["archive"].get<std::string>());
        if (bytes.size() > opt_.max_upload_bytes) return error_response(413, "archive exceeds the upload limit");
        Sandbox box;
        unpack(bytes, box.path(), opt_.max_unpacked_bytes);
        auto scored = score_tree(box.path(), *rub, opt_.extractor);
        scored.metrics.warnings = strip_sandbox(scored.metrics.warnings, box.path());
        rep.metrics = std::move(scored.metrics);
        scores = std::move(scored.scores);
      } catch (const ArchiveTooLarge& e) {
        return error_response(413, e.what());
      } catch (const ArchiveError& e) {
        return error_response(400, e.what(), "/archive");
      } catch (const ConfigError& e) {
        return error_response(422, e.what(), e.path());
      }
    }

    try {
      rep.result = rubric::evaluate(*rub, scores, resolution);
    } catch (const InferenceError& e) {
      nlohmann::json j{{"error", e.what()}, {"criterion_scores", scores}};
      return json_response(422, j);
    }
    auto j = report::to_json(rep, rub.get());
    j["rubric_revision"] = revision;
    return {200, j.dump() + "\n"};
  }

  Response metrics(const std::string& body) {
    if (body.size() > opt_.max_upload_bytes) return error_response(413, "archive exceeds the upload limit");
    try {
      Sandbox box;
      unpack(body, box.path(), opt_.max_unpacked_bytes);
      auto r = metrics::analyze_project(box.path(), opt_.extractor);
      r.warnings = strip_sandbox(r.warnings, box.path());
      return {200, metrics::report_to_json(r).dump() + "\n"};
    } catch (const ArchiveTooLarge& e) {
      return error_response(413, e.what());
    } catch (const ArchiveError& e) {
      return error_response(400, e.what());
    }
  }

  Response get_rubric(const std::string& id) {
    try {
      return json_response(200, to_json(store_.get(id)));
    } catch (const NotFound& e) {
      return error_response(404, e.what());
    }
  }

  Response list_rubrics() { return json_response(200, {{"rubrics", store_.ids()}}); }

  /// Body: the rubric document itself.
  Response post_rubric(const std::string& body) {
    nlohmann::json doc;
    try {
      doc = nlohmann::json::parse(body);
    } catch (const nlohmann::json::parse_error& e) {
      return error_response(400, std::string("request body is not valid JSON: ") + e.what());
    }
    try {
      return json_response(201, to_json(store_.create(doc)));
    } catch (const ConfigError& e) {
      return error_response(422, e.what(), e.path());
    } catch (const ContractError& e) {
      return error_response(422, e.what());
    }
  }

  /// Body: {"revision": current revision, "document": rubric document}.
  Response put_rubric(const std::string& id, const std::string& body) {
    nlohmann::json req;
    try {
      req = nlohmann::json::parse(body);
    } catch (const nlohmann::json::parse_error& e) {
      return error_response(400, std::string("request body is not valid JSON: ") + e.what());
    }
    if (!req.is_object() || !req.contains("revision") || !req["revision"].is_number_integer()) {
      return error_response(422, "missing integer 'revision'", "/revision");
    }
    if (!req.contains("document")) return error_response(422, "missing 'document'", "/document");
    try {
      return json_response(200, to_json(store_.update(id, req["revision"].get<std::int64_t>(), req["document"])));
    } catch (const NotFound& e) {
      return error_response(404, e.what());
    } catch (const Conflict& e) {
      return error_response(409, e.what(), "/revision");
    } catch (const ConfigError& e) {
      return error_response(422, e.what(), "/document" + e.path());
    } catch (const ContractError& e) {
      return error_response(422, e.what(), "/document");
    }
  }

  Response plagiarism(const std::string& body) {
    if (!plagiarism_->configured()) return json_response(501, {{"status", "not configured"}});
    try {
      return json_response(200, plagiarism_->check(nlohmann::json::parse(body)));
    } catch (const nlohmann::json::parse_error&) {
      return error_response(400, "request body is not valid JSON");
    }
  }

 private:
  ServiceOptions opt_;
  RubricStore store_;
  std::unique_ptr<PlagiarismChecker> plagiarism_;

  static std::vector<std::string> strip_sandbox(std::vector<std::string> warnings, const std::filesystem::path& box) {
    const auto prefix = box.string();
    for (auto& w : warnings) {
      for (auto pos = w.find(prefix); pos != std::string::npos; pos = w.find(prefix)) w.replace(pos, prefix.size(), "<upload>");
    }
    return warnings;
  }
};

}  // namespace fuzzyeval::service
