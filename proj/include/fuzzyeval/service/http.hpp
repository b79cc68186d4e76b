#pragma once

#include <httplib.h>

#include <string>

#include "fuzzyeval/service/service.hpp"

namespace fuzzyeval::service {

/// Routes:
///   POST /evaluate           scores or base64 archive -> evaluation report
///   POST /metrics            tar or tar.gz body -> metrics report
///   GET  /rubrics            list ids
///   GET  /rubrics/{id}       stored rubric
///   POST /rubrics            rubric document -> 201 stored rubric
///   PUT  /rubrics/{id}       {revision, document} -> stored rubric
///   POST /plagiarism         501 unless a checker is configured
///   GET  /health
inline void bind(httplib::Server& srv, EvalService& svc) {
  auto send = [](httplib::Response& res, const Response& r) {
    res.status = r.status;
    res.set_content(r.body, r.content_type);
  };
  const auto origin = svc.options().cors_origin;
  srv.set_post_routing_handler([origin](const httplib::Request&, httplib::Response& res) {
    res.set_header("Access-Control-Allow-Origin", origin);
    res.set_header("Access-Control-Allow-Methods", "GET, POST, PUT, OPTIONS");
    res.set_header("Access-Control-Allow-Headers", "Content-Type");
  });
  srv.Options(".*", [](const httplib::Request&, httplib::Response& res) { res.status = 204; });
  srv.set_payload_max_length(svc.options().max_upload_bytes * 4 / 3 + (1u << 20));

  srv.Get("/health", [](const httplib::Request&, httplib::Response& res) {
    res.set_content("{\"status\":\"ok\"}\n", "application/json");
  });
  srv.Post("/evaluate", [&svc, send](const httplib::Request& req, httplib::Response& res) { send(res, svc.evaluate(req.body)); });
  srv.Post("/metrics", [&svc, send](const httplib::Request& req, httplib::Response& res) { send(res, svc.metrics(req.body)); });
  srv.Get("/rubrics", [&svc, send](const httplib::Request&, httplib::Response& res) { send(res, svc.list_rubrics()); });
  srv.Get(R"(/rubrics/([A-Za-z0-9_-]+))", [&svc, send](const httplib::Request& req, httplib::Response& res) {
    send(res, svc.get_rubric(req.matches[1]));
  });
  srv.Post("/rubrics", [&svc, send](const httplib::Request& req, httplib::Response& res) { send(res, svc.post_rubric(req.body)); });
  srv.Put(R"(/rubrics/([A-Za-z0-9_-]+))", [&svc, send](const httplib::Request& req, httplib::Response& res) {
    send(res, svc.put_rubric(req.matches[1], req.body));
  });
  srv.Post("/plagiarism", [&svc, send](const httplib::Request& req, httplib::Response& res) { send(res, svc.plagiarism(req.body)); });
  srv.set_error_handler([](const httplib::Request&, httplib::Response& res) {
    if (res.body.empty()) {
      const std::string msg = res.status == 413 ? "request too large" : res.status == 404 ? "not found" : "request failed";
      res.set_content("{\"error\":\"" + msg + "\"}\n", "application/json");
    }
  });
  srv.set_exception_handler([](const httplib::Request&, httplib::Response& res, std::exception_ptr ep) {
    std::string msg = "internal error";
    try {
      std::rethrow_exception(ep);
    } catch (const std::exception& e) {
      msg = e.what();
    } catch (...) {
    }
    res.status = 500;
    res.set_content(nlohmann::json{{"error", msg}}.dump() + "\n", "application/json");
  });
}

}  // namespace fuzzyeval::service
