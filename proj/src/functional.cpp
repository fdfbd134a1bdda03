#include "bushy/functional.hpp"

#include <algorithm>

namespace bushy {

TTFunctional::TTFunctional(BoundedSpace domain, Symbol out_arity, std::map<FString, FString> table)
    : domain_(std::move(domain)), out_arity_(out_arity), table_(std::move(table)) {
  if (out_arity_ < 2) throw DomainError("functional: output arity must be >= 2");
  for (const auto& [node, out] : table_) {
    if (!domain_.contains(node)) {
      throw DomainError("functional: node " + node.to_string() + " outside the domain space");
    }
    for (auto s : out.symbols()) {
      if (s >= out_arity_) {
        throw DomainError("functional: output symbol " + std::to_string(s) + " at " +
                          node.to_string() + " exceeds arity");
      }
    }
  }
  std::size_t expected = 0;
  for (std::size_t l = 0; l <= domain_.depth(); ++l) expected += domain_.count(l);
  if (table_.size() != expected) {
    throw DomainError("functional: table covers " + std::to_string(table_.size()) + " of " +
                      std::to_string(expected) + " domain strings");
  }
}

TTFunctional TTFunctional::from_partial(BoundedSpace domain, Symbol out_arity,
                                        const std::map<FString, FString>& assigned) {
  std::map<FString, FString> table;
  for (const auto& s : domain.all_strings()) {
    if (auto it = assigned.find(s); it != assigned.end()) {
      table.emplace(s, it->second);
    } else if (s.empty()) {
      table.emplace(s, FString{});
    } else {
      table.emplace(s, table.at(s.prefix(s.size() - 1)));
    }
  }
  for (const auto& [node, out] : assigned) {
    if (!domain.contains(node)) {
      throw DomainError("functional: node " + node.to_string() + " outside the domain space");
    }
  }
  return TTFunctional(std::move(domain), out_arity, std::move(table));
}

const FString& TTFunctional::at(const FString& sigma) const {
  auto it = table_.find(sigma);
  if (it == table_.end()) {
    throw DomainError("functional: " + sigma.to_string() + " outside the domain space");
  }
  return it->second;
}

std::optional<Symbol> TTFunctional::bit(const FString& sigma, std::size_t x) const {
  const auto& out = at(sigma);
  if (out.size() <= x) return std::nullopt;
  return out[x];
}

MeasuredClass::MeasuredClass(std::span<const FString> cylinders) {
  std::set<FString> raw;
  for (const auto& w : cylinders) {
    for (auto s : w.symbols()) {
      if (s > 1) throw DomainError("measured class: non-binary cylinder " + w.to_string());
    }
    raw.insert(w);
  }
  for (const auto& w : raw) {
    if (!cylinders_.empty() && cylinders_.rbegin()->is_prefix_of(w)) continue;
    cylinders_.insert(cylinders_.end(), w);
  }
  bool changed = true;
  while (changed) {
    changed = false;
    for (auto it = cylinders_.begin(); it != cylinders_.end(); ++it) {
      if (it->empty() || it->back() != 0) continue;
      auto parent = it->prefix(it->size() - 1);
      auto sibling = parent.child(1);
      if (auto jt = cylinders_.find(sibling); jt != cylinders_.end()) {
        cylinders_.erase(jt);
        cylinders_.erase(it);
        cylinders_.insert(parent);
        changed = true;
        break;
      }
    }
  }
}

bool MeasuredClass::covers(const FString& w) const {
  for (std::size_t n = 0; n <= w.size(); ++n) {
    if (cylinders_.count(w.prefix(n))) return true;
  }
  return false;
}

Rational MeasuredClass::measure() const {
  if (cylinders_.empty()) return Rational(0);
  std::size_t longest = 0;
  for (const auto& w : cylinders_) longest = std::max(longest, w.size());
  BigInt num = 0;
  for (const auto& w : cylinders_) num += BigInt(1) << (longest - w.size());
  return Rational(num, BigInt(1) << longest);
}

namespace functional {

const FString& evaluate(const TTFunctional& gamma, const FString& sigma) { return gamma.at(sigma); }

ValidationReport check_monotone(const TTFunctional& gamma) {
  ValidationReport r;
  for (const auto& [node, out] : gamma.table()) {
    if (node.empty()) continue;
    const auto& parent = gamma.at(node.prefix(node.size() - 1));
    if (!parent.is_prefix_of(out)) {
      r.add("output " + out.to_string() + " does not extend parent output " + parent.to_string(),
            node);
    }
  }
  return r;
}

std::optional<std::size_t> convergence_level(const TTFunctional& gamma, std::size_t bits) {
  for (std::size_t l = 0; l <= gamma.domain().depth(); ++l) {
    bool all = true;
    for (const auto& s : gamma.domain().strings(l)) {
      if (gamma.at(s).size() < bits) {
        all = false;
        break;
      }
    }
    if (all) return l;
  }
  return std::nullopt;
}

MeasuredClass image_class(const TTFunctional& gamma, std::span<const FString> leaves) {
  if (gamma.out_arity() != 2) throw DomainError("image_class: measure needs binary outputs");
  std::vector<FString> outs;
  outs.reserve(leaves.size());
  for (const auto& l : leaves) outs.push_back(gamma.at(l));
  return MeasuredClass(outs);
}

Rational measure(const MeasuredClass& c) { return c.measure(); }

Rational measure_with_bits(const MeasuredClass& c,
                           std::span<const std::pair<std::size_t, Symbol>> fixed) {
  Rational total = 0;
  for (const auto& w : c.cylinders()) {
    Rational part(BigInt(1), BigInt(1) << w.size());
    for (const auto& [pos, value] : fixed) {
      if (pos < w.size()) {
        if (w[pos] != value) {
          part = 0;
          break;
        }
      } else {
        part /= 2;
      }
    }
    total += part;
  }
  return total;
}

}  // namespace functional
}  // namespace bushy
