#pragma once

#include <fnmatch.h>

#include <algorithm>
#include <atomic>
#include <filesystem>
#include <fstream>
#include <optional>
#include <sstream>
#include <string>
#include <system_error>
#include <thread>
#include <vector>

#include "fuzzyeval/errors.hpp"
#include "fuzzyeval/metrics/tokenizer.hpp"

namespace fuzzyeval::metrics {

struct SourceUnit {
  std::string path;  // relative to the scanned root, '/'-separated
  std::string text;
  std::vector<Token> tokens;
  std::size_t line_count = 0;
  std::size_t comment_line_count = 0;

  bool operator==(const SourceUnit&) const = default;
};

struct ScanOptions {
  std::vector<std::string> extensions{".java"};
  std::vector<std::string> ignore{"target/", "build/", ".git/"};
  unsigned threads = 0;  // 0: hardware concurrency
};

struct ScanResult {
  std::vector<SourceUnit> units;
  std::vector<std::string> warnings;
};

/// Tokenizes and line-counts one file. Throws TokenizeError.
inline SourceUnit make_unit(std::string path, std::string text) {
  SourceUnit u;
  u.path = std::move(path);
  u.text = std::move(text);
  u.tokens = tokenize(u.text);
  u.line_count = count_lines(u.text);
  u.comment_line_count = count_comment_lines(u.text, u.tokens);
  return u;
}

/// "dir/" matches any directory component (glob allowed); other patterns
/// match the whole relative path or the file name.
inline bool ignored(const std::string& rel, const std::vector<std::string>& patterns) {
  for (const auto& p : patterns) {
    if (p.empty()) continue;
    if (p.back() == '/') {
      const std::string dir = p.substr(0, p.size() - 1);
      std::size_t start = 0;
      while (true) {
        const auto slash = rel.find('/', start);
        if (slash == std::string::npos) break;
        if (fnmatch(dir.c_str(), rel.substr(start, slash - start).c_str(), 0) == 0) return true;
        start = slash + 1;
      }
    } else {
      if (fnmatch(p.c_str(), rel.c_str(), 0) == 0) return true;
      const auto slash = rel.rfind('/');
      const std::string base = slash == std::string::npos ? rel : rel.substr(slash + 1);
      if (fnmatch(p.c_str(), base.c_str(), 0) == 0) return true;
    }
  }
  return false;
}

inline bool has_extension(const std::string& rel, const std::vector<std::string>& exts) {
  return std::any_of(exts.begin(), exts.end(), [&](const std::string& e) {
    return rel.size() >= e.size() && rel.compare(rel.size() - e.size(), e.size(), e) == 0;
  });
}

/// Collects, reads and tokenizes source files under `root`, sorted by
/// relative path. Per-file failures become warnings; an unreadable root throws IoError.
inline ScanResult scan_tree(const std::filesystem::path& root, const ScanOptions& opt = {}) {
  namespace fs = std::filesystem;
  std::error_code ec;
  if (!fs::is_directory(root, ec)) throw IoError("cannot read project directory '" + root.string() + "'");

  ScanResult result;
  std::vector<std::string> files;
  fs::recursive_directory_iterator it(root, fs::directory_options::skip_permission_denied, ec);
  if (ec) throw IoError("cannot read project directory '" + root.string() + "': " + ec.message());
  for (const fs::recursive_directory_iterator end; it != end; it.increment(ec)) {
    if (ec) {
      result.warnings.push_back("directory walk: " + ec.message());
      break;
    }
    std::error_code fe;
    if (!it->is_regular_file(fe)) continue;
    const std::string rel = fs::relative(it->path(), root, fe).generic_string();
    if (fe || !has_extension(rel, opt.extensions) || ignored(rel, opt.ignore)) continue;
    files.push_back(rel);
  }
  std::sort(files.begin(), files.end());

  std::vector<std::optional<SourceUnit>> units(files.size());
  std::vector<std::string> errors(files.size());
  std::atomic<std::size_t> next{0};
  auto work = [&] {
    for (std::size_t k = next++; k < files.size(); k = next++) {
      std::ifstream in(root / files[k], std::ios::binary);
      if (!in) {
        errors[k] = files[k] + ": cannot read file";
        continue;
      }
      std::ostringstream ss;
      ss << in.rdbuf();
      try {
        units[k] = make_unit(files[k], std::move(ss).str());
      } catch (const TokenizeError& e) {
        errors[k] = files[k] + ": " + e.what() + "; skipped";
      }
    }
  };
  unsigned threads = opt.threads != 0 ? opt.threads : std::max(1u, std::thread::hardware_concurrency());
  threads = static_cast<unsigned>(std::min<std::size_t>(threads, std::max<std::size_t>(files.size(), 1)));
  if (threads <= 1) {
    work();
  } else {
    std::vector<std::jthread> pool;
    for (unsigned t = 0; t < threads; ++t) pool.emplace_back(work);
  }

  for (std::size_t k = 0; k < files.size(); ++k) {
    if (units[k]) {
      result.units.push_back(std::move(*units[k]));
    } else {
      result.warnings.push_back(std::move(errors[k]));
    }
  }
  return result;
}

}  // namespace fuzzyeval::metrics
