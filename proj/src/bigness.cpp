#include "bushy/bigness.hpp"

#include <algorithm>

namespace bushy::bigness {

BigTable::BigTable(std::vector<FString> universe, const FString& stem, const Membership& member,
                   const WidthSpec& width)
    : width_(width) {
  std::erase_if(universe, [&](const FString& s) { return !stem.is_prefix_of(s); });
  universe.push_back(stem);
  std::sort(universe.begin(), universe.end());
  universe.erase(std::unique(universe.begin(), universe.end()), universe.end());
  nodes_ = std::move(universe);

  const auto n = nodes_.size();
  big_.assign(n, 0);
  member_.assign(n, 0);
  kids_.assign(n, {});
  std::vector<std::ptrdiff_t> parent(n, -1);
  for (std::size_t i = 1; i < n; ++i) {
    parent[i] = index_of(nodes_[i].prefix(nodes_[i].size() - 1));
    if (parent[i] >= 0) kids_[parent[i]].push_back(i);
  }
  std::vector<Width> count(n, 0);
  for (std::size_t i = n; i-- > 0;) {
    member_[i] = member(nodes_[i]) ? 1 : 0;
    bool b = member_[i];
    if (!b && count[i] > 0) b = count[i] >= width_.at(nodes_[i].size());
    big_[i] = b;
    if (b && parent[i] >= 0) ++count[parent[i]];
  }
}

std::ptrdiff_t BigTable::index_of(const FString& s) const {
  auto it = std::lower_bound(nodes_.begin(), nodes_.end(), s);
  if (it == nodes_.end() || *it != s) return -1;
  return it - nodes_.begin();
}

bool BigTable::big(const FString& node) const {
  auto i = index_of(node);
  return i >= 0 && big_[i];
}

std::vector<FString> BigTable::big_nodes() const {
  std::vector<FString> out;
  for (std::size_t i = 0; i < nodes_.size(); ++i) {
    if (big_[i]) out.push_back(nodes_[i]);
  }
  return out;
}

std::optional<BushyTree> BigTable::witness(const FString& node) const {
  auto root = index_of(node);
  if (root < 0 || !big_[root]) return std::nullopt;
  std::set<FString> out;
  std::vector<std::size_t> stack{static_cast<std::size_t>(root)};
  while (!stack.empty()) {
    auto i = stack.back();
    stack.pop_back();
    out.insert(nodes_[i]);
    if (member_[i]) continue;
    auto need = width_.at(nodes_[i].size());
    Width taken = 0;
    for (auto k : kids_[i]) {
      if (taken == need) break;
      if (big_[k]) {
        stack.push_back(k);
        ++taken;
      }
    }
  }
  return BushyTree(node, std::move(out), width_);
}

std::vector<FString> prefix_closure_above(const std::set<FString>& members, const FString& stem) {
  std::set<FString> out{stem};
  for (const auto& m : members) {
    if (!stem.is_prefix_of(m)) continue;
    for (auto n = m.size(); n > stem.size(); --n) {
      if (!out.insert(m.prefix(n)).second) break;
    }
  }
  return {out.begin(), out.end()};
}

std::optional<BushyTree> big_within(const std::set<FString>& universe, const FString& stem,
                                    const Membership& member, const WidthSpec& width) {
  std::vector<FString> nodes;
  for (auto it = universe.lower_bound(stem); it != universe.end() && stem.is_prefix_of(*it); ++it) {
    nodes.push_back(*it);
  }
  if (nodes.empty() || nodes.front() != stem) {
    throw DomainError("stem " + stem.to_string() + " is not in the search universe");
  }
  return BigTable(std::move(nodes), stem, member, width).witness(stem);
}

std::optional<BushyTree> big_within(const BushyTree& universe, const FString& stem,
                                    const Membership& member, const WidthSpec& width) {
  if (!universe.contains(stem)) {
    throw DomainError("stem " + stem.to_string() + " is not on the tree");
  }
  std::vector<FString> nodes;
  if (stem.is_proper_prefix_of(universe.stem())) {
    for (auto n = stem.size(); n < universe.stem().size(); ++n) nodes.push_back(universe.stem().prefix(n));
    nodes.insert(nodes.end(), universe.nodes().begin(), universe.nodes().end());
  } else {
    nodes = universe.nodes_above(stem);
  }
  return BigTable(std::move(nodes), stem, member, width).witness(stem);
}

std::optional<BushyTree> big_among(const std::set<FString>& members, const FString& stem,
                                   const WidthSpec& width) {
  auto member = [&](const FString& s) { return members.count(s) > 0; };
  return BigTable(prefix_closure_above(members, stem), stem, member, width).witness(stem);
}

std::optional<BigWitness> is_big(const StringSet& b, const FString& stem, const WidthSpec& width,
                                 const std::optional<BoundedSpace>& space) {
  if (space && !space->contains(stem)) {
    throw DomainError("stem " + stem.to_string() + " is not in the space");
  }
  std::set<FString> generators;
  for (const auto& e : b.elements()) {
    if (space && !space->contains(e)) continue;
    if (b.upward() && e.is_prefix_of(stem)) {
      return BigWitness{BushyTree::singleton(stem, width), b};
    }
    generators.insert(e);
  }
  auto member = [&](const FString& s) { return b.contains(s); };
  BigTable table(prefix_closure_above(generators, stem), stem, member, width);
  auto tree = table.witness(stem);
  if (!tree) return std::nullopt;
  return BigWitness{std::move(*tree), b};
}

StringSet k_closure(const StringSet& b, Width k, const BoundedSpace& space) {
  if (k == 0) throw DomainError("k_closure: k must be positive");
  for (const auto& e : b.elements()) {
    if (!space.contains(e)) {
      throw DomainError("k_closure: element " + e.to_string() + " lies outside the space");
    }
  }
  auto member = [&](const FString& s) { return b.contains(s); };
  BigTable table(space.all_strings(), FString{}, member, WidthSpec::constant(k));
  auto big = table.big_nodes();
  std::set<FString> c(big.begin(), big.end());

  bool closed = true;
  for (const auto& s : c) {
    if (s.size() == space.depth()) continue;
    for (Width i = 0; i < space.width(s.size()) && closed; ++i) {
      closed = c.count(s.child(static_cast<Symbol>(i))) > 0;
    }
    if (!closed) break;
  }
  return closed ? StringSet::upward_closed(c) : StringSet::explicit_set(std::move(c));
}

LabelSplit union_label_split(const BushyTree& t, const std::set<FString>& label_b,
                             const std::set<FString>& label_c, Width m, Width n) {
  if (m == 0 || n == 0) throw DomainError("union_label_split: m and n must be positive");
  auto report = validate_tree(t.with_width(WidthSpec::constant(m + n - 1)));
  if (!report.ok()) throw DomainError("union_label_split: width violation: " + report.to_string());

  std::vector<FString> nodes(t.nodes().begin(), t.nodes().end());
  std::map<FString, bool> is_b;  // true = "B", false = "C"
  for (auto it = nodes.rbegin(); it != nodes.rend(); ++it) {
    auto kids = t.children(*it);
    if (kids.empty()) {
      if (label_b.count(*it)) {
        is_b[*it] = true;
      } else if (label_c.count(*it)) {
        is_b[*it] = false;
      } else {
        throw DomainError("union_label_split: unlabeled leaf " + it->to_string());
      }
      continue;
    }
    Width bs = 0;
    for (const auto& k : kids) bs += is_b.at(k) ? 1 : 0;
    is_b[*it] = bs >= m;
  }

  const bool side_b = is_b.at(t.stem());
  const Width need = side_b ? m : n;
  std::set<FString> out;
  std::vector<FString> stack{t.stem()};
  while (!stack.empty()) {
    auto v = std::move(stack.back());
    stack.pop_back();
    auto kids = t.children(v);
    out.insert(v);
    Width taken = 0;
    for (const auto& k : kids) {
      if (taken == need) break;
      if (is_b.at(k) == side_b) {
        stack.push_back(k);
        ++taken;
      }
    }
    if (!kids.empty() && taken < need) {
      throw InvariantError("union_label_split: label count underflow at " + v.to_string());
    }
  }
  std::set<FString> target;
  for (const auto& leaf : t.leaves()) {
    if (is_b.at(leaf) == side_b) target.insert(leaf);
  }
  return {side_b ? LabelSplit::Side::B : LabelSplit::Side::C,
          BigWitness{BushyTree(t.stem(), std::move(out), WidthSpec::constant(need)),
                     StringSet::explicit_set(std::move(target))}};
}

BigWitness concatenate(const BigWitness& base, const std::map<FString, BigWitness>& extensions) {
  std::set<FString> nodes = base.tree.nodes();
  std::optional<StringSet> target;
  bool mixed = false;
  for (const auto& leaf : base.tree.leaves()) {
    auto it = extensions.find(leaf);
    if (it == extensions.end()) {
      throw DomainError("concatenate: no extension for leaf " + leaf.to_string());
    }
    const auto& ext = it->second;
    if (ext.tree.stem() != leaf) {
      throw DomainError("concatenate: extension stem " + ext.tree.stem().to_string() +
                        " does not match leaf " + leaf.to_string());
    }
    if (!(ext.tree.width() == base.tree.width())) {
      throw DomainError("concatenate: width mismatch above " + leaf.to_string());
    }
    nodes.insert(ext.tree.nodes().begin(), ext.tree.nodes().end());
    if (!target) {
      target = ext.target;
    } else if (target->mode() == ext.target.mode()) {
      target = target->unite(ext.target);
    } else {
      mixed = true;
    }
  }
  BushyTree glued(base.tree.stem(), std::move(nodes), base.tree.width());
  if (mixed || !target) {
    auto leaves = glued.leaves();
    target = StringSet::explicit_set({leaves.begin(), leaves.end()});
  }
  return BigWitness{std::move(glued), std::move(*target)};
}

ValidationReport check_witness(const BigWitness& w) {
  auto r = validate_tree(w.tree);
  for (const auto& leaf : w.tree.leaves()) {
    if (!w.target.contains(leaf)) r.add("leaf not in target", leaf);
  }
  return r;
}

}  // namespace bushy::bigness
