#pragma once

// Naive reference code used only by the tests. Nothing here calls into the
// bigness or splitting implementations.

#include <functional>
#include <set>
#include <vector>

#include "bushy/core.hpp"
#include "bushy/functional.hpp"

namespace oracle {

using bushy::BoundedSpace;
using bushy::FString;
using bushy::Width;

using Pred = std::function<bool(const FString&)>;

/// Recursive definition: some width-bushy tree above tau inside the space has
/// every leaf satisfying `in`.
inline bool big(const Pred& in, const FString& tau, const std::function<Width(std::size_t)>& width,
                const BoundedSpace& space) {
  if (in(tau)) return true;
  if (tau.size() >= space.depth()) return false;
  Width hits = 0;
  const Width need = width(tau.size());
  for (bushy::Symbol c = 0; c < space.width(tau.size()); ++c) {
    if (big(in, tau.child(c), width, space) && ++hits >= need) return true;
  }
  return false;
}

inline bool big(const Pred& in, const FString& tau, Width n, const BoundedSpace& space) {
  return big(in, tau, [n](std::size_t) { return n; }, space);
}

/// Leaves get the given status; every internal node needs at least width
/// children in the tree.
inline bool valid_bushy(const std::set<FString>& nodes, const FString& stem,
                        const std::function<Width(std::size_t)>& width) {
  if (!nodes.count(stem)) return false;
  for (const auto& n : nodes) {
    if (!stem.is_prefix_of(n)) return false;
    if (n != stem && !nodes.count(n.prefix(n.size() - 1))) return false;
    Width kids = 0;
    for (const auto& m : nodes) kids += m.size() == n.size() + 1 && n.is_prefix_of(m);
    if (kids != 0 && kids < width(n.size())) return false;
  }
  return true;
}

inline std::vector<FString> leaves(const std::set<FString>& nodes) {
  std::vector<FString> out;
  for (const auto& n : nodes) {
    bool leaf = true;
    for (const auto& m : nodes) {
      if (n.is_proper_prefix_of(m)) {
        leaf = false;
        break;
      }
    }
    if (leaf) out.push_back(n);
  }
  return out;
}

/// Fraction of length-`depth` binary strings extending one of `cyl`.
inline bushy::Rational measure(const std::vector<FString>& cyl, std::size_t depth) {
  std::size_t hit = 0;
  for (std::size_t x = 0; x < (std::size_t{1} << depth); ++x) {
    std::vector<bushy::Symbol> bits(depth);
    for (std::size_t i = 0; i < depth; ++i) bits[i] = (x >> (depth - 1 - i)) & 1;
    const FString s(bits);
    for (const auto& c : cyl) {
      if (c.is_prefix_of(s)) {
        ++hit;
        break;
      }
    }
  }
  return bushy::Rational(hit, std::size_t{1} << depth);
}

/// Every maximal path of a tree given by its node set, as the leaf it ends in.
inline std::vector<FString> maximal_paths(const std::set<FString>& nodes) { return leaves(nodes); }

}  // namespace oracle
