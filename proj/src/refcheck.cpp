#include "bushy/refcheck.hpp"

#include <algorithm>
#include <array>
#include <memory>

namespace bushy::refcheck {
namespace {

using NodeList = std::vector<FString>;

// All trees (as node lists) rooted at v, including the bare leaf.
std::vector<NodeList> trees_at(const BoundedSpace& space, const FString& v, Width n,
                               const EnumBudget& budget) {
  std::vector<NodeList> out{{v}};
  if (v.size() >= space.depth() || v.size() >= budget.max_depth) return out;
  const Width w = space.width(v.size());
  if (n > w) return out;

  std::vector<std::vector<NodeList>> sub(w);
  for (Width i = 0; i < w; ++i) sub[i] = trees_at(space, v.child(static_cast<Symbol>(i)), n, budget);

  for (std::uint64_t mask = 1; mask < (std::uint64_t{1} << w); ++mask) {
    if (static_cast<Width>(__builtin_popcountll(mask)) < n) continue;
    std::vector<NodeList> partial{{v}};
    for (Width i = 0; i < w; ++i) {
      if (!(mask >> i & 1)) continue;
      std::vector<NodeList> next;
      for (const auto& p : partial) {
        for (const auto& s : sub[i]) {
          if (p.size() + s.size() > budget.max_nodes) continue;
          NodeList q = p;
          q.insert(q.end(), s.begin(), s.end());
          next.push_back(std::move(q));
        }
      }
      partial = std::move(next);
    }
    for (auto& p : partial) out.push_back(std::move(p));
  }
  return out;
}

}  // namespace

std::vector<BushyTree> enumerate_bushy(const BoundedSpace& space, const FString& stem, Width n,
                                       const EnumBudget& budget) {
  if (budget.max_nodes < 1) throw DomainError("enumerate_bushy: budget admits no tree");
  if (!space.contains(stem)) throw DomainError("enumerate_bushy: stem outside space");
  auto lists = trees_at(space, stem, n, budget);
  for (auto& l : lists) std::sort(l.begin(), l.end());
  std::sort(lists.begin(), lists.end(), [](const NodeList& a, const NodeList& b) {
    if (a.size() != b.size()) return a.size() < b.size();
    return a < b;
  });
  std::vector<BushyTree> out;
  out.reserve(lists.size());
  for (auto& l : lists) {
    out.emplace_back(stem, std::set<FString>(l.begin(), l.end()), WidthSpec::constant(n));
  }
  return out;
}

bool is_big_oracle(const StringSet& b, const std::vector<BushyTree>& catalog) {
  for (const auto& t : catalog) {
    bool all = true;
    for (const auto& leaf : t.leaves()) {
      if (!b.contains(leaf)) {
        all = false;
        break;
      }
    }
    if (all) return true;
  }
  return false;
}

bool is_big_oracle(const StringSet& b, const FString& stem, Width n, const BoundedSpace& space,
                   const EnumBudget& budget) {
  return is_big_oracle(b, enumerate_bushy(space, stem, n, budget));
}

namespace {

struct Trie {
  bool end = false;
  std::array<std::unique_ptr<Trie>, 2> kid;
};

BigInt count_leaves(const Trie& t, std::size_t remaining) {
  if (t.end) return BigInt(1) << remaining;
  BigInt total = 0;
  for (const auto& k : t.kid) {
    if (k) total += count_leaves(*k, remaining - 1);
  }
  return total;
}

}  // namespace

Rational measure_oracle(std::span<const FString> cylinders, std::size_t depth) {
  for (const auto& w : cylinders) {
    if (w.size() > depth) throw DomainError("measure_oracle: depth below cylinder length");
    for (auto s : w.symbols()) {
      if (s > 1) throw DomainError("measure_oracle: non-binary cylinder");
    }
  }
  if (depth <= 16) {
    std::uint64_t hits = 0;
    for (std::uint64_t x = 0; x < (std::uint64_t{1} << depth); ++x) {
      for (const auto& w : cylinders) {
        bool match = true;
        for (std::size_t i = 0; i < w.size() && match; ++i) {
          match = ((x >> (depth - 1 - i)) & 1) == w[i];
        }
        if (match) {
          ++hits;
          break;
        }
      }
    }
    return Rational(BigInt(hits), BigInt(1) << depth);
  }
  Trie root;
  for (const auto& w : cylinders) {
    Trie* t = &root;
    for (auto s : w.symbols()) {
      if (!t->kid[s]) t->kid[s] = std::make_unique<Trie>();
      t = t->kid[s].get();
    }
    t->end = true;
  }
  return Rational(count_leaves(root, depth), BigInt(1) << depth);
}

Rational measure_oracle(const MeasuredClass& c, std::size_t depth) {
  std::vector<FString> cyl(c.cylinders().begin(), c.cylinders().end());
  return measure_oracle(cyl, depth);
}

}  // namespace bushy::refcheck
