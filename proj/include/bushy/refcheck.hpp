#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include "bushy/core.hpp"
#include "bushy/functional.hpp"

// Brute-force reference implementations. Slow on purpose; the test suite uses
// them to cross-check the fast decision procedures on small universes.
namespace bushy::refcheck {

struct EnumBudget {
  std::size_t max_nodes = 1u << 20;
  std::size_t max_depth = 64;
};

/// Every n-bushy tree above `stem` inside `space` and `budget`, each once,
/// ordered by node count and then by the sorted node list.
std::vector<BushyTree> enumerate_bushy(const BoundedSpace& space, const FString& stem, Width n,
                                       const EnumBudget& budget = {});

/// Whether some tree of the catalog has every leaf in B.
bool is_big_oracle(const StringSet& b, const std::vector<BushyTree>& catalog);
bool is_big_oracle(const StringSet& b, const FString& stem, Width n, const BoundedSpace& space,
                   const EnumBudget& budget = {});

/// (number of length-`depth` binary strings with a prefix among the
/// cylinders) / 2^depth. Explicit enumeration for small depths, otherwise a
/// per-leaf count over a binary trie of the raw cylinders.
Rational measure_oracle(std::span<const FString> cylinders, std::size_t depth);
Rational measure_oracle(const MeasuredClass& c, std::size_t depth);

}  // namespace bushy::refcheck
