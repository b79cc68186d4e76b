#pragma once

#include <nlohmann/json.hpp>

#include <ctime>
#include <filesystem>
#include <fstream>
#include <map>
#include <memory>
#include <mutex>
#include <optional>
#include <shared_mutex>
#include <sstream>
#include <stdexcept>
#include <string>

#include "fuzzyeval/errors.hpp"
#include "fuzzyeval/reference_rubric_data.hpp"
#include "fuzzyeval/rubric/config.hpp"

namespace fuzzyeval::service {

class NotFound : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// PUT carried a revision other than the stored one.
class Conflict : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct StoredRubric {
  std::string id;
  std::int64_t revision = 0;
  std::string created;
  std::string modified;
  nlohmann::json document;

  bool operator==(const StoredRubric&) const = default;
};

inline nlohmann::json to_json(const StoredRubric& s) {
  return {{"id", s.id}, {"revision", s.revision}, {"created", s.created}, {"modified", s.modified}, {"document", s.document}};
}

inline std::string utc_now() {
  const std::time_t t = std::time(nullptr);
  std::tm tm{};
  gmtime_r(&t, &tm);
  char buf[32];
  std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm);
  return buf;
}

inline bool valid_rubric_id(std::string_view id) {
  if (id.empty() || id.size() > 64) return false;
  for (char c : id) {
    const bool ok = (c >= 'a' && c <= 'z') || (c >= 'A' && c <= 'Z') || (c >= '0' && c <= '9') || c == '-' || c == '_';
    if (!ok) return false;
  }
  return true;
}

/// One JSON file per rubric under `dir`. Reads run concurrently, writes are
/// serialized. The bundled "reference" rubric is seeded when missing. With an
/// empty `dir` the store lives in memory only.
class RubricStore {
 public:
  explicit RubricStore(std::filesystem::path dir = {}) : dir_(std::move(dir)) {
    if (!dir_.empty()) {
      std::error_code ec;
      std::filesystem::create_directories(dir_, ec);
      if (ec) throw IoError("cannot create rubric store '" + dir_.string() + "': " + ec.message());
      for (const auto& e : std::filesystem::directory_iterator(dir_)) {
        if (e.path().extension() != ".json") continue;
        std::ifstream in(e.path());
        std::stringstream ss;
        ss << in.rdbuf();
        try {
          const auto j = nlohmann::json::parse(ss.str());
          Entry entry;
          entry.stored = StoredRubric{j.at("id").get<std::string>(), j.at("revision").get<std::int64_t>(),
                                      j.at("created").get<std::string>(), j.at("modified").get<std::string>(),
                                      j.at("document")};
          entry.rubric = std::make_shared<const rubric::Rubric>(rubric::parse_rubric(entry.stored.document));
          entries_[entry.stored.id] = std::move(entry);
        } catch (const std::exception& ex) {
          throw IoError("unreadable rubric store entry '" + e.path().string() + "': " + ex.what());
        }
      }
    }
    if (!entries_.count("reference")) {
      const auto now = utc_now();
      Entry entry;
      entry.stored = StoredRubric{"reference", 1, now, now, nlohmann::json::parse(kReferenceRubricJson)};
      entry.rubric = std::make_shared<const rubric::Rubric>(rubric::load_reference_rubric());
      persist(entry.stored);
      entries_["reference"] = std::move(entry);
    }
  }

  StoredRubric get(const std::string& id) const {
    std::shared_lock lock(mu_);
    return find(id).stored;
  }

  std::shared_ptr<const rubric::Rubric> rubric(const std::string& id) const {
    std::shared_lock lock(mu_);
    return find(id).rubric;
  }

  std::vector<std::string> ids() const {
    std::shared_lock lock(mu_);
    std::vector<std::string> out;
    for (const auto& [id, e] : entries_) out.push_back(id);
    return out;
  }

  /// New rubric at revision 1. The id derives from the document name.
  /// Throws ConfigError when the document is invalid.
  StoredRubric create(const nlohmann::json& document) {
    auto parsed = std::make_shared<const rubric::Rubric>(rubric::parse_rubric(document));
    std::unique_lock lock(mu_);
    std::string base;
    for (char c : parsed->name) {
      const bool ok = (c >= 'a' && c <= 'z') || (c >= 'A' && c <= 'Z') || (c >= '0' && c <= '9') || c == '-' || c == '_';
      base += ok ? c : '-';
    }
    if (base.empty()) base = "rubric";
    base = base.substr(0, 56);
    std::string id = base;
    for (int n = 2; entries_.count(id); ++n) id = base + "-" + std::to_string(n);
    const auto now = utc_now();
    Entry entry{StoredRubric{id, 1, now, now, document}, std::move(parsed)};
    persist(entry.stored);
    entries_[id] = entry;
    return entry.stored;
  }

  /// Replaces the document when `revision` is current; bumps the revision.
  StoredRubric update(const std::string& id, std::int64_t revision, const nlohmann::json& document) {
    auto parsed = std::make_shared<const rubric::Rubric>(rubric::parse_rubric(document));
    std::unique_lock lock(mu_);
    auto& entry = find(id);
    if (revision != entry.stored.revision) {
      throw Conflict("rubric '" + id + "' is at revision " + std::to_string(entry.stored.revision) + ", not " +
                     std::to_string(revision));
    }
    StoredRubric next = entry.stored;
    next.revision += 1;
    next.modified = utc_now();
    next.document = document;
    persist(next);
    entry.stored = std::move(next);
    entry.rubric = std::move(parsed);
    return entry.stored;
  }

 private:
  struct Entry {
    StoredRubric stored;
    std::shared_ptr<const rubric::Rubric> rubric;
  };

  std::filesystem::path dir_;
  mutable std::shared_mutex mu_;
  std::map<std::string, Entry> entries_;

  const Entry& find(const std::string& id) const {
    auto it = entries_.find(id);
    if (it == entries_.end()) throw NotFound("unknown rubric '" + id + "'");
    return it->second;
  }
  Entry& find(const std::string& id) {
    auto it = entries_.find(id);
    if (it == entries_.end()) throw NotFound("unknown rubric '" + id + "'");
    return it->second;
  }

  void persist(const StoredRubric& s) const {
    if (dir_.empty()) return;
    const auto target = dir_ / (s.id + ".json");
    const auto tmp = dir_ / (s.id + ".json.tmp");
    {
      std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
      out << to_json(s).dump(2) << "\n";
      if (!out) throw IoError("cannot write '" + tmp.string() + "'");
    }
    std::error_code ec;
    std::filesystem::rename(tmp, target, ec);
    if (ec) throw IoError("cannot replace '" + target.string() + "': " + ec.message());
  }
};

}  // namespace fuzzyeval::service
