#include "bushy/generate.hpp"

#include <algorithm>

namespace bushy::generate {

TTFunctional random_functional(const BoundedSpace& space, Symbol out_arity, std::uint64_t seed,
                               const FunctionalParams& p) {
  if (p.root_min > p.root_max || p.step_min > p.step_max) {
    throw DomainError("random_functional: empty length range");
  }
  Rng rng(seed);
  std::map<FString, FString> table;
  for (const auto& s : space.all_strings()) {
    FString out = s.empty() ? FString{} : table.at(s.prefix(s.size() - 1));
    const auto n = s.empty() ? rng.between(p.root_min, p.root_max) : rng.between(p.step_min, p.step_max);
    for (std::uint64_t i = 0; i < n; ++i) out = out.child(static_cast<Symbol>(rng.below(out_arity)));
    table.emplace(s, std::move(out));
  }
  return TTFunctional(space, out_arity, std::move(table));
}

TTFunctional injective_functional(const BoundedSpace& space) {
  std::map<FString, FString> table;
  for (const auto& s : space.all_strings()) {
    if (s.empty()) {
      table.emplace(s, FString{});
      continue;
    }
    FString out = table.at(s.prefix(s.size() - 1));
    const Width w = space.width(s.size() - 1);
    unsigned bits = 0;
    while ((Width{1} << bits) < w) ++bits;
    for (unsigned b = bits; b-- > 0;) out = out.child((s.back() >> b) & 1);
    table.emplace(s, std::move(out));
  }
  return TTFunctional(space, 2, std::move(table));
}

TTFunctional balanced_functional(const BoundedSpace& space, std::uint64_t seed) {
  Rng rng(seed);
  std::map<FString, FString> table;
  table.emplace(FString{}, FString{});
  for (std::size_t l = 0; l < space.depth(); ++l) {
    for (const auto& s : space.strings(l)) {
      const Width w = space.width(l);
      std::vector<Symbol> ones(w, 0);
      for (Width i = 0; i < w / 2; ++i) ones[i] = 1;
      for (Width i = w; i-- > 1;) std::swap(ones[i], ones[rng.below(i + 1)]);
      const FString& out = table.at(s);
      for (Symbol c = 0; c < w; ++c) table.emplace(s.child(c), out.child(ones[c]));
    }
  }
  return TTFunctional(space, 2, std::move(table));
}

splitting::SplitAllowance random_allowance(std::uint64_t seed, std::size_t level_count) {
  level_count = std::clamp<std::size_t>(level_count, 1, 4);
  Rng rng(seed);
  splitting::SplitAllowance a;
  // From three levels on, the requirement at l_i is exponential in the
  // exponent sum below it, so levels start at 0 and the prefix below l_2 is
  // fixed. Left random, exponents reach millions of bits.
  const bool compact = level_count >= 3;
  a.n = compact ? 0 : rng.below(2);
  std::size_t l = compact ? 0 : a.n + rng.below(2);
  for (std::size_t i = 0; i < level_count; ++i) {
    a.levels.push_back(l);
    l += 1 + (compact ? 0 : rng.below(2));
  }
  const std::size_t length = a.levels.back() + 1 + rng.below(2);

  std::vector<BigInt> eg(length), eh(length);
  BigInt diff = 0, sum = 0;
  std::uint64_t g = compact ? 1 : 1 + rng.below(3);
  std::size_t next = 0;
  for (std::size_t n = 0; n < length; ++n) {
    const bool flat = compact && n < a.levels[2];
    if (n > 0 && !flat) g += rng.below(2);
    eg[n] = g;
    if (next < a.levels.size() && a.levels[next] == n) {
      // diff >= i * (3 + 3 * 2^(sum of e_h below n))
      const BigInt need = BigInt(next) * (3 + 3 * (BigInt(1) << sum.convert_to<unsigned>()));
      diff = std::max(diff, need);
      ++next;
    }
    if (!flat) diff += rng.below(4);
    eh[n] = eg[n] + diff;
    sum += eh[n];
  }
  a.h = splitting::DyadicOrderFn(std::move(eh));
  a.g = splitting::DyadicOrderFn(std::move(eg));
  return a;
}

}  // namespace bushy::generate
