#pragma once

#include <CLI11.hpp>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include "fuzzyeval/metrics/json.hpp"
#include "fuzzyeval/pipeline.hpp"
#include "fuzzyeval/report/report.hpp"
#include "fuzzyeval/rubric/config.hpp"
#include "fuzzyeval/service/http.hpp"

namespace fuzzyeval::cli {

enum Exit : int { kOk = 0, kUsage = 1, kConfig = 2, kIo = 3 };

inline constexpr const char* kRubricEnv = "FUZZYEVAL_RUBRIC";

class UsageError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct Options {
  std::string project;
  std::string rubric;
  std::string output;
  std::string format = "json";
  std::size_t resolution = 0;
  unsigned threads = 0;
  std::vector<double> what_if;
  int port = 8080;
  std::string host = "127.0.0.1";
  std::string store = "rubric-store";
  std::size_t max_upload_mb = 16;
};

/// --rubric, then $FUZZYEVAL_RUBRIC, then the bundled rubric.
inline rubric::Rubric load_rubric(const std::string& flag) {
  std::string path = flag;
  if (path.empty()) {
    if (const char* env = std::getenv(kRubricEnv); env && *env) path = env;
  }
  if (path.empty()) return rubric::load_reference_rubric();
  return rubric::load_rubric_file(path);
}

inline void emit(const Options& o, const std::string& text, std::ostream& out) {
  if (o.output.empty()) {
    out << text;
    return;
  }
  std::ofstream f(o.output, std::ios::binary | std::ios::trunc);
  f << text;
  if (!f) throw IoError("cannot write '" + o.output + "'");
}

inline std::string metrics_markdown(const metrics::MetricsReport& r) {
  std::ostringstream md;
  md << "# Metrics report\n\n| Metric | Value |\n|---|---|\n";
  const auto j = metrics::report_to_json(r);
  for (const auto& [k, v] : j.items()) {
    if (k == "warnings") continue;
    md << "| " << k << " | " << v.dump() << " |\n";
  }
  if (!r.warnings.empty()) {
    md << "\n## Warnings\n\n";
    for (const auto& w : r.warnings) md << "- " << w << "\n";
  }
  return md.str();
}

inline metrics::ExtractorOptions extractor_options(const Options& o) {
  metrics::ExtractorOptions x;
  x.scan.threads = o.threads;
  return x;
}

inline std::string render(const Options& o, const report::EvaluationReport& rep, const rubric::Rubric& rub) {
  return o.format == "markdown" ? report::to_markdown(rep, &rub) : report::dump(rep, &rub);
}

inline std::string scores_text(const fuzzy::CrispInputs& s) {
  std::string t;
  for (const auto& [k, v] : s) t += (t.empty() ? "" : ", ") + k + "=" + report::detail::fmt(v, 4);
  return t;
}

inline int cmd_metrics(const Options& o, std::ostream& out) {
  const auto r = metrics::analyze_project(o.project, extractor_options(o));
  emit(o, o.format == "markdown" ? metrics_markdown(r) : metrics::report_to_json(r).dump(2) + "\n", out);
  return kOk;
}

inline int run_evaluation(const Options& o, const rubric::Rubric& rub, report::EvaluationReport rep,
                          const fuzzy::CrispInputs& scores, std::ostream& out, std::ostream& err) {
  try {
    rep.result = rubric::evaluate(rub, scores, o.resolution);
  } catch (const InferenceError& e) {
    err << "error: " << e.what() << "; criterion scores: " << scores_text(scores) << "\n";
    return kConfig;
  }
  emit(o, render(o, rep, rub), out);
  return kOk;
}

inline int cmd_evaluate(const Options& o, std::ostream& out, std::ostream& err) {
  const auto rub = load_rubric(o.rubric);
  auto scored = score_tree(o.project, rub, extractor_options(o));
  report::EvaluationReport rep;
  rep.project = {{"name", std::filesystem::path(o.project).lexically_normal().filename().string()}};
  if (rep.project["name"] == "") rep.project["name"] = std::filesystem::path(o.project).lexically_normal().parent_path().filename().string();
  rep.rubric = rub.name;
  rep.metrics = std::move(scored.metrics);
  return run_evaluation(o, rub, std::move(rep), scored.scores, out, err);
}

inline int cmd_what_if(const Options& o, std::ostream& out, std::ostream& err) {
  const auto rub = load_rubric(o.rubric);
  if (o.what_if.size() != rub.criteria.size()) {
    throw UsageError("what-if needs " + std::to_string(rub.criteria.size()) + " scores, one per criterion");
  }
  fuzzy::CrispInputs scores;
  for (std::size_t k = 0; k < rub.criteria.size(); ++k) {
    const auto& c = rub.criteria[k];
    const double v = o.what_if[k];
    if (!(v >= c.variable.domain().lo && v <= c.variable.domain().hi)) {
      throw UsageError(c.name + " score " + report::detail::fmt(v, 4) + " is outside [" +
                       report::detail::fmt(c.variable.domain().lo, 0) + ", " + report::detail::fmt(c.variable.domain().hi, 0) + "]");
    }
    scores[c.name] = v;
  }
  report::EvaluationReport rep;
  rep.rubric = rub.name;
  return run_evaluation(o, rub, std::move(rep), scores, out, err);
}

inline int cmd_serve(const Options& o, std::ostream& out) {
  service::ServiceOptions so;
  so.store_dir = o.store;
  so.max_upload_bytes = o.max_upload_mb << 20;
  so.max_unpacked_bytes = so.max_upload_bytes * 4;
  so.extractor = extractor_options(o);
  service::EvalService svc(so);
  httplib::Server srv;
  service::bind(srv, svc);
  out << "listening on http://" << o.host << ":" << o.port << " (store: " << o.store << ")" << std::endl;
  if (!srv.listen(o.host, o.port)) throw IoError("cannot listen on " + o.host + ":" + std::to_string(o.port));
  return kOk;
}

/// Parses arguments and runs one subcommand. Never throws.
inline int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Fuzzy rubric evaluation of source-code projects", "fuzzyeval"};
  app.require_subcommand(1);
  Options o;

  auto add_output = [&](CLI::App* sub) {
    sub->add_option("--output,-o", o.output, "Write the report to this file instead of stdout");
    sub->add_option("--format,-f", o.format, "Report format")->check(CLI::IsMember({"json", "markdown"}));
  };
  auto add_rubric = [&](CLI::App* sub) {
    sub->add_option("--rubric,-r", o.rubric, std::string("Rubric JSON file (default: $") + kRubricEnv + ", then the bundled rubric)");
    sub->add_option("--resolution", o.resolution, "Samples over the output domain; odd, >= 101 (default: rubric setting)");
  };

  auto* m = app.add_subcommand("metrics", "Extract raw code metrics from a source tree");
  m->add_option("--project,-p", o.project, "Project root")->required();
  m->add_option("--threads", o.threads, "Extractor threads (0: all cores)");
  add_output(m);

  auto* ev = app.add_subcommand("evaluate", "Extract, normalize and evaluate a source tree");
  ev->add_option("--project,-p", o.project, "Project root")->required();
  ev->add_option("--threads", o.threads, "Extractor threads (0: all cores)");
  add_rubric(ev);
  add_output(ev);

  auto* wi = app.add_subcommand("what-if", "Evaluate criterion scores directly");
  wi->add_option("scores", o.what_if, "One score per criterion, in rubric order (clean_code functionality inheritance)")
      ->required();
  add_rubric(wi);
  add_output(wi);

  auto* sv = app.add_subcommand("serve", "Run the HTTP evaluation service");
  sv->add_option("--port", o.port, "TCP port")->check(CLI::Range(1, 65535));
  sv->add_option("--host", o.host, "Bind address");
  sv->add_option("--store", o.store, "Rubric store directory");
  sv->add_option("--max-upload-mb", o.max_upload_mb, "Upload size cap in MiB");
  sv->add_option("--threads", o.threads, "Extractor threads (0: all cores)");

  std::vector<const char*> argv{"fuzzyeval"};
  for (const auto& a : args) argv.push_back(a.c_str());
  try {
    app.parse(static_cast<int>(argv.size()), argv.data());
  } catch (const CLI::CallForHelp& e) {
    out << app.help();
    return kOk;
  } catch (const CLI::CallForAllHelp& e) {
    out << app.help("", CLI::AppFormatMode::All);
    return kOk;
  } catch (const CLI::ParseError& e) {
    err << "error: " << e.what() << "\n" << "run 'fuzzyeval --help' for usage\n";
    return kUsage;
  }

  try {
    if (o.resolution != 0 && (o.resolution < 101 || o.resolution % 2 == 0)) {
      throw UsageError("--resolution must be odd and at least 101");
    }
    if (m->parsed()) return cmd_metrics(o, out);
    if (ev->parsed()) return cmd_evaluate(o, out, err);
    if (wi->parsed()) return cmd_what_if(o, out, err);
    if (sv->parsed()) return cmd_serve(o, out);
  } catch (const UsageError& e) {
    err << "error: " << e.what() << "\n";
    return kUsage;
  } catch (const ContractError& e) {
    err << "error: " << e.what() << "\n";
    return kUsage;
  } catch (const ConfigError& e) {
    err << "config error: " << e.what() << "\n";
    return kConfig;
  } catch (const InferenceError& e) {
    err << "error: " << e.what() << "\n";
    return kConfig;
  } catch (const IoError& e) {
    err << "I/O error: " << e.what() << "\n";
    return kIo;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return kIo;
  }
  return kUsage;
}

}  // namespace fuzzyeval::cli
