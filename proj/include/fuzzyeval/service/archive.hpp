#pragma once

#include <zlib.h>

#include <atomic>
#include <chrono>
#include <cstdint>
#include <filesystem>
#include <fstream>
#include <stdexcept>
#include <string>
#include <string_view>
#include <system_error>
#include <vector>

namespace fuzzyeval::service {

/// Malformed upload: bad base64, gzip or tar framing, unsafe member paths.
class ArchiveError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Upload (or its unpacked contents) over the configured cap.
class ArchiveTooLarge : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

inline std::string base64_decode(std::string_view in) {
  auto value = [](char c) -> int {
    if (c >= 'A' && c <= 'Z') return c - 'A';
    if (c >= 'a' && c <= 'z') return c - 'a' + 26;
    if (c >= '0' && c <= '9') return c - '0' + 52;
    if (c == '+' || c == '-') return 62;
    if (c == '/' || c == '_') return 63;
    return -1;
  };
  std::string out;
  std::uint32_t acc = 0;
  int bits = 0;
  std::size_t pad = 0;
  for (char c : in) {
    if (c == ' ' || c == '\n' || c == '\r' || c == '\t') continue;
    if (c == '=') {
      ++pad;
      continue;
    }
    if (pad) throw ArchiveError("invalid base64: data after padding");
    const int v = value(c);
    if (v < 0) throw ArchiveError("invalid base64 character");
    acc = (acc << 6) | static_cast<std::uint32_t>(v);
    bits += 6;
    if (bits >= 8) {
      bits -= 8;
      out.push_back(static_cast<char>((acc >> bits) & 0xff));
    }
  }
  if (bits >= 6 || pad > 2) throw ArchiveError("invalid base64 length");
  return out;
}

inline bool is_gzip(std::string_view data) {
  return data.size() >= 2 && static_cast<unsigned char>(data[0]) == 0x1f && static_cast<unsigned char>(data[1]) == 0x8b;
}

inline std::string gunzip(std::string_view data, std::size_t limit) {
  z_stream zs{};
  if (inflateInit2(&zs, 15 + 32) != Z_OK) throw ArchiveError("cannot initialise gzip decoder");
  zs.next_in = reinterpret_cast<Bytef*>(const_cast<char*>(data.data()));
  zs.avail_in = static_cast<uInt>(data.size());
  std::string out;
  char buf[1 << 15];
  int rc = Z_OK;
  while (rc != Z_STREAM_END) {
    zs.next_out = reinterpret_cast<Bytef*>(buf);
    zs.avail_out = sizeof buf;
    rc = inflate(&zs, Z_NO_FLUSH);
    if (rc != Z_OK && rc != Z_STREAM_END) {
      inflateEnd(&zs);
      throw ArchiveError("corrupt gzip stream");
    }
    out.append(buf, sizeof buf - zs.avail_out);
    if (out.size() > limit) {
      inflateEnd(&zs);
      throw ArchiveTooLarge("unpacked archive exceeds the size limit");
    }
    if (rc == Z_OK && zs.avail_in == 0 && zs.avail_out != 0) {
      inflateEnd(&zs);
      throw ArchiveError("truncated gzip stream");
    }
  }
  inflateEnd(&zs);
  return out;
}

struct TarEntry {
  std::string path;
  std::string data;
};

namespace detail {

inline std::uint64_t tar_number(std::string_view field) {
  if (!field.empty() && (static_cast<unsigned char>(field[0]) & 0x80)) {
    std::uint64_t v = static_cast<unsigned char>(field[0]) & 0x7f;
    for (std::size_t k = 1; k < field.size(); ++k) v = (v << 8) | static_cast<unsigned char>(field[k]);
    return v;
  }
  std::uint64_t v = 0;
  bool digits = false;
  for (char c : field) {
    if (c == '\0' || c == ' ') {
      if (digits) break;
      continue;
    }
    if (c < '0' || c > '7') throw ArchiveError("corrupt tar header: bad octal field");
    v = v * 8 + static_cast<std::uint64_t>(c - '0');
    digits = true;
  }
  return v;
}

inline std::string tar_string(std::string_view field) {
  const auto nul = field.find('\0');
  return std::string(field.substr(0, nul));
}

/// Rejects absolute paths and `..` components; strips leading "./".
inline std::string safe_member_path(const std::string& p) {
  if (p.empty() || p.front() == '/' || p.find('\\') != std::string::npos) {
    throw ArchiveError("unsafe path in archive: '" + p + "'");
  }
  std::string out;
  std::size_t start = 0;
  while (start <= p.size()) {
    auto slash = p.find('/', start);
    if (slash == std::string::npos) slash = p.size();
    const auto part = p.substr(start, slash - start);
    if (part == "..") throw ArchiveError("unsafe path in archive: '" + p + "'");
    if (!part.empty() && part != ".") out += (out.empty() ? "" : "/") + part;
    start = slash + 1;
  }
  return out;
}

}  // namespace detail

/// Regular files of a ustar/pax/GNU tar image. Links and devices are
/// skipped. `limit` caps the total unpacked size.
inline std::vector<TarEntry> read_tar(std::string_view tar, std::size_t limit) {
  std::vector<TarEntry> out;
  std::size_t pos = 0;
  std::size_t total = 0;
  std::string long_name;
  while (true) {
    if (pos == tar.size()) break;  // tolerate a missing end-of-archive marker
    if (pos + 512 > tar.size()) throw ArchiveError("truncated tar archive");
    const auto h = tar.substr(pos, 512);
    if (h.find_first_not_of('\0') == std::string_view::npos) break;

    std::uint64_t sum = 0;
    for (std::size_t k = 0; k < 512; ++k) {
      sum += (k >= 148 && k < 156) ? static_cast<unsigned char>(' ') : static_cast<unsigned char>(h[k]);
    }
    if (sum != detail::tar_number(h.substr(148, 8))) throw ArchiveError("corrupt tar header: checksum mismatch");

    const std::uint64_t size = detail::tar_number(h.substr(124, 12));
    const char type = h[156];
    std::string name = detail::tar_string(h.substr(0, 100));
    if (h.substr(257, 5) == "ustar") {
      const auto prefix = detail::tar_string(h.substr(345, 155));
      if (!prefix.empty()) name = prefix + "/" + name;
    }
    pos += 512;
    if (size > tar.size() - pos) throw ArchiveError("truncated tar member");
    const auto data = tar.substr(pos, size);
    pos += (size + 511) / 512 * 512;
    if (pos > tar.size()) pos = tar.size();

    if (type == 'L') {
      long_name = detail::tar_string(data);
      continue;
    }
    if (type == 'x') {
      std::size_t k = 0;
      while (k < data.size()) {
        const auto sp = data.find(' ', k);
        if (sp == std::string_view::npos) throw ArchiveError("corrupt pax header");
        const auto len = std::stoull(std::string(data.substr(k, sp - k)));
        if (len == 0 || k + len > data.size()) throw ArchiveError("corrupt pax header");
        const auto rec = data.substr(sp + 1, k + len - sp - 2);
        if (rec.starts_with("path=")) long_name = std::string(rec.substr(5));
        k += len;
      }
      continue;
    }
    if (type == 'g') continue;
    if (!long_name.empty()) {
      name = long_name;
      long_name.clear();
    }
    if (type != '0' && type != '\0' && type != '7') continue;
    const auto path = detail::safe_member_path(name);
    if (path.empty()) continue;
    total += data.size();
    if (total > limit) throw ArchiveTooLarge("unpacked archive exceeds the size limit");
    out.push_back({path, std::string(data)});
  }
  return out;
}

/// Temporary directory removed on destruction, whatever happened inside.
class Sandbox {
 public:
  Sandbox() {
    static std::atomic<unsigned> counter{0};
    const auto stamp = std::chrono::steady_clock::now().time_since_epoch().count();
    path_ = std::filesystem::temp_directory_path() /
            ("fuzzyeval-" + std::to_string(stamp) + "-" + std::to_string(counter++));
    std::filesystem::create_directories(path_);
  }
  ~Sandbox() {
    std::error_code ec;
    std::filesystem::remove_all(path_, ec);
  }
  Sandbox(const Sandbox&) = delete;
  Sandbox& operator=(const Sandbox&) = delete;

  const std::filesystem::path& path() const { return path_; }

 private:
  std::filesystem::path path_;
};

/// Unpacks a (possibly gzipped) tar image into `dir`. An empty body is an empty archive.
inline void unpack(std::string_view bytes, const std::filesystem::path& dir, std::size_t limit) {
  std::string plain;
  if (is_gzip(bytes)) {
    plain = gunzip(bytes, limit + 1024 * 1024);
    bytes = plain;
  }
  for (const auto& e : read_tar(bytes, limit)) {
    const auto target = dir / e.path;
    std::filesystem::create_directories(target.parent_path());
    std::ofstream f(target, std::ios::binary);
    f.write(e.data.data(), static_cast<std::streamsize>(e.data.size()));
    if (!f) throw std::runtime_error("cannot write '" + e.path + "' into the sandbox");
  }
}

}  // namespace fuzzyeval::service
