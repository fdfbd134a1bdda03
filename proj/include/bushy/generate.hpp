#pragma once

#include <cstdint>
#include <random>

#include "bushy/core.hpp"
#include "bushy/functional.hpp"
#include "bushy/splitting.hpp"

// Seeded instance generators. Draws use raw mt19937_64 output so that a seed
// yields the same instance under any standard library.
namespace bushy::generate {

class Rng {
 public:
  explicit Rng(std::uint64_t seed) : eng_(seed) {}
  /// Uniform-ish in [0, n); n must be positive.
  std::uint64_t below(std::uint64_t n) { return eng_() % n; }
  /// In [lo, hi].
  std::uint64_t between(std::uint64_t lo, std::uint64_t hi) { return lo + below(hi - lo + 1); }
  bool coin() { return (eng_() >> 17) & 1; }

 private:
  std::mt19937_64 eng_;
};

struct FunctionalParams {
  std::size_t root_min = 0;
  std::size_t root_max = 0;
  std::size_t step_min = 0;  // symbols appended per level
  std::size_t step_max = 2;
};

/// Random monotone total table: every node extends its parent's output by a
/// random number of random symbols.
TTFunctional random_functional(const BoundedSpace& space, Symbol out_arity, std::uint64_t seed,
                               const FunctionalParams& p = {});

/// Binary outputs in which siblings append distinct fixed-length codes, so
/// any two same-level nodes have incomparable outputs.
TTFunctional injective_functional(const BoundedSpace& space);

/// Binary outputs growing one bit per level; at every node a random half of
/// the children (rounded down) append 1 and the rest append 0.
TTFunctional balanced_functional(const BoundedSpace& space, std::uint64_t seed);

/// Random (h, g) with up to `level_count` splitting levels (at most 4 are
/// representable) that satisfies all three allowance conditions.
splitting::SplitAllowance random_allowance(std::uint64_t seed, std::size_t level_count = 4);

}  // namespace bushy::generate
