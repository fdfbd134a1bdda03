#pragma once

#include <cstdlib>
#include <iostream>
#include <optional>
#include <string>

#include <json.hpp>

#include "bushy/bigness.hpp"
#include "bushy/io.hpp"

namespace bushy::cli {

using nlohmann::json;

struct Globals {
  std::string space_text;
  std::optional<std::uint64_t> seed;
  std::string dot_path;
  bool as_json = false;

  std::optional<BoundedSpace> space() const {
    if (space_text.empty()) return std::nullopt;
    return BoundedSpace::parse(space_text);
  }
  const BoundedSpace& need_space(std::optional<BoundedSpace>& cache, const char* verb) const {
    if (!cache) cache = space();
    if (!cache) throw ParseError(std::string(verb) + ": --space is required");
    return *cache;
  }
};

inline std::size_t max_nodes() {
  if (const char* env = std::getenv("BUSHY_MAX_NODES")) {
    char* end = nullptr;
    const auto v = std::strtoull(env, &end, 10);
    if (end && *end == '\0' && v > 0) return static_cast<std::size_t>(v);
    throw ParseError("BUSHY_MAX_NODES must be a positive integer");
  }
  return 10'000'000;
}

/// Rejects spaces whose string count exceeds the node cap.
inline void guard_space(const BoundedSpace& space) {
  std::size_t total = 0;
  const std::size_t cap = max_nodes();
  for (std::size_t l = 0; l <= space.depth(); ++l) {
    std::size_t c = 1;
    for (std::size_t i = 0; i < l; ++i) {
      if (space.width(i) > cap || c > cap / space.width(i)) throw DomainError("space exceeds BUSHY_MAX_NODES");
      c *= space.width(i);
    }
    total += c;
    if (total > cap) throw DomainError("space exceeds BUSHY_MAX_NODES (" + std::to_string(cap) + ")");
  }
}

inline StringSet load_set(const std::string& path, const std::optional<BoundedSpace>& space) {
  return io::parse_set(io::read_file(path), space);
}
inline io::TreeFile load_tree(const std::string& path, const std::optional<BoundedSpace>& space) {
  return io::parse_tree(io::read_file(path), space);
}
inline TTFunctional load_functional(const std::string& path) {
  auto f = io::parse_functional(io::read_file(path));
  guard_space(f.domain());
  return f;
}
inline splitting::DyadicOrderFn load_order_fn(const std::string& path) {
  const auto text = io::read_file(path);
  std::size_t pos = 0;
  while (pos < text.size()) {
    auto nl = text.find('\n', pos);
    auto line = text.substr(pos, nl == std::string::npos ? std::string::npos : nl - pos);
    pos = nl == std::string::npos ? text.size() : nl + 1;
    auto first = line.find_first_not_of(" \t\r");
    if (first == std::string::npos || line[first] == '#') continue;
    return splitting::DyadicOrderFn::parse(line.substr(first));
  }
  throw ParseError(path + ": no 'exp:' line");
}

inline json strings_json(const std::vector<FString>& v) {
  json out = json::array();
  for (const auto& s : v) out.push_back(s.to_string());
  return out;
}
inline json tree_json(const BushyTree& t) {
  return {{"stem", t.stem().to_string()},
          {"width", t.width().to_string()},
          {"exact", t.exact()},
          {"nodes", strings_json({t.nodes().begin(), t.nodes().end()})},
          {"leaves", strings_json(t.leaves())}};
}
inline json report_json(const ValidationReport& r) {
  json out = json::array();
  for (const auto& v : r.items()) out.push_back({{"what", v.what}, {"at", v.at.to_string()}});
  return out;
}

/// Writes `contents` to `path` unless the path is empty.
inline void maybe_write(const std::string& path, const std::string& contents) {
  if (!path.empty()) io::write_file(path, contents);
}

inline void emit_dot(const Globals& g, const BushyTree& t, const TTFunctional* gamma = nullptr) {
  maybe_write(g.dot_path, io::to_dot(t, gamma));
}

/// Text mode prints `text`; json mode prints the record.
inline void emit(const Globals& g, const json& record, const std::string& text) {
  if (g.as_json) {
    std::cout << record.dump(2) << "\n";
  } else {
    std::cout << text;
  }
}

}  // namespace bushy::cli
