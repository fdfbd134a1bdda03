#include "bushy/splitting.hpp"

#include <algorithm>

namespace bushy::splitting {

using bigness::big_among;
using bigness::big_within;

namespace {

std::set<FString> leaf_set(const BushyTree& t) {
  auto l = t.leaves();
  return {l.begin(), l.end()};
}

BigWitness witness_of(BushyTree tree, std::set<FString> target) {
  return BigWitness{std::move(tree), StringSet::explicit_set(std::move(target))};
}

std::string level_str(std::size_t l) { return std::to_string(l); }

}  // namespace

bool is_splitting_pair(const std::vector<FString>& a0, const std::vector<FString>& a1,
                       const TTFunctional& gamma) {
  for (const auto& x : a0) {
    const auto& gx = gamma.at(x);
    for (const auto& y : a1) {
      if (gx.comparable(gamma.at(y))) return false;
    }
  }
  return true;
}

bool is_splitting_pair(const BushyTree& a0, const BushyTree& a1, const TTFunctional& gamma) {
  return is_splitting_pair(a0.leaves(), a1.leaves(), gamma);
}

ValidationReport verify_family(const SplitFamily& f, const TTFunctional& gamma,
                               const WidthSpec& width) {
  ValidationReport r;
  if (f.roots.size() != f.witnesses.size()) {
    r.add("family has " + std::to_string(f.roots.size()) + " roots but " +
          std::to_string(f.witnesses.size()) + " witnesses");
    return r;
  }
  for (std::size_t i = 0; i < f.roots.size(); ++i) {
    if (f.witnesses[i].stem() != f.roots[i]) r.add("witness stem differs from its root", f.roots[i]);
    r.merge(validate_tree(f.witnesses[i].with_width(width)));
    for (std::size_t j = i + 1; j < f.roots.size(); ++j) {
      if (!is_splitting_pair(f.witnesses[i], f.witnesses[j], gamma)) {
        r.add("members " + std::to_string(i) + " and " + std::to_string(j) + " do not split",
              f.roots[j]);
      }
    }
  }
  return r;
}

FoundSplitting find_splitting(const BushyTree& a,
                              const std::map<FString, std::pair<BushyTree, BushyTree>>& pairs,
                              const BushyTree& b, const TTFunctional& gamma, const WidthSpec& g,
                              const WidthSpec& h, bool check_widths) {
  const auto& alpha = a.stem();
  const auto& beta = b.stem();
  const auto a_leaves = a.leaves();
  if (check_widths) {
    const auto g4 = g.scaled(4, 0);
    const auto h4 = h.scaled(4, 0);
    auto ra = validate_tree(a.with_width(g4));
    if (!ra.ok()) throw DomainError("find_splitting: A is not 4g-bushy: " + ra.to_string());
    auto rb = validate_tree(b.with_width(h4));
    if (!rb.ok()) throw DomainError("find_splitting: B is not 4h-bushy: " + rb.to_string());
    for (const auto& [leaf, d] : pairs) {
      if (!validate_tree(d.first.with_width(g4)).ok() || !validate_tree(d.second.with_width(g4)).ok()) {
        throw DomainError("find_splitting: splitting above " + leaf.to_string() + " is not 4g-bushy");
      }
    }
  }

  std::vector<std::pair<std::set<FString>, std::set<FString>>> delta;
  std::set<FString> aprime;
  for (const auto& leaf : a_leaves) {
    auto it = pairs.find(leaf);
    if (it == pairs.end()) throw DomainError("find_splitting: no splitting above leaf " + leaf.to_string());
    if (it->second.first.stem() != leaf || it->second.second.stem() != leaf) {
      throw DomainError("find_splitting: splitting above " + leaf.to_string() + " has the wrong stem");
    }
    if (!is_splitting_pair(it->second.first, it->second.second, gamma)) {
      throw DomainError("find_splitting: pair above " + leaf.to_string() + " is not splitting");
    }
    delta.emplace_back(leaf_set(it->second.first), leaf_set(it->second.second));
    aprime.insert(delta.back().first.begin(), delta.back().first.end());
    aprime.insert(delta.back().second.begin(), delta.back().second.end());
  }
  std::size_t v = 0;
  for (const auto& rho : aprime) v = std::max(v, gamma.at(rho).size());
  const auto b_leaves = leaf_set(b);
  for (const auto& s : b_leaves) {
    if (gamma.at(s).size() <= v) {
      throw DomainError("find_splitting: B leaf " + s.to_string() + " outputs " +
                        std::to_string(gamma.at(s).size()) + " symbols, need more than " +
                        std::to_string(v));
    }
  }

  auto select = [&](const std::set<FString>& from, auto pred) {
    std::set<FString> out;
    for (const auto& x : from) {
      if (pred(gamma.at(x))) out.insert(x);
    }
    return out;
  };
  auto must_be_big = [&](const std::set<FString>& set, const FString& stem, const WidthSpec& w,
                         const char* what) {
    auto t = big_among(set, stem, w);
    if (!t) throw InvariantError(std::string("find_splitting: ") + what + " is not big");
    return witness_of(std::move(*t), set);
  };

  FString sig;
  std::set<FString> bs = b_leaves;
  for (std::size_t s = 0;; ++s) {
    if (s > v) throw InvariantError("find_splitting: sigma_s extended more than v times");
    auto inc = select(aprime, [&](const FString& y) { return !y.comparable(sig); });
    if (auto w = big_among(inc, alpha, g)) {
      return {witness_of(std::move(*w), inc), must_be_big(bs, beta, h, "B_s"), s, 1};
    }
    auto a1 = select(aprime, [&](const FString& y) { return y.is_prefix_of(sig); });
    if (big_among(a1, alpha, g)) {
      std::set<FString> other;
      for (const auto& [d0, d1] : delta) {
        bool in0 = std::any_of(d0.begin(), d0.end(), [&](const FString& x) { return a1.count(x); });
        bool in1 = std::any_of(d1.begin(), d1.end(), [&](const FString& x) { return a1.count(x); });
        if (in0 && in1) throw InvariantError("find_splitting: A_1 meets both sides of a splitting");
        if (in0) other.insert(d1.begin(), d1.end());
        if (in1) other.insert(d0.begin(), d0.end());
      }
      return {must_be_big(other, alpha, g, "the opposite splitting members"),
              must_be_big(bs, beta, h, "B_s"), s, 2};
    }
    auto a2 = select(aprime, [&](const FString& y) { return sig.is_proper_prefix_of(y); });
    auto wa2 = must_be_big(a2, alpha, g, "A_2 (case exhaustion)");
    auto xb = select(b_leaves, [&](const FString& y) { return !y.comparable(sig); });
    if (auto w = big_among(xb, beta, h)) return {std::move(wa2), witness_of(std::move(*w), xb), s, 3};
    bool moved = false;
    for (Symbol j = 0; j < gamma.out_arity() && !moved; ++j) {
      const auto next = sig.child(j);
      auto dj = select(b_leaves, [&](const FString& y) { return next.is_prefix_of(y); });
      if (big_among(dj, beta, h)) {
        bs = std::move(dj);
        sig = next;
        moved = true;
      }
    }
    if (!moved) throw InvariantError("find_splitting: no D_j is h-big");
  }
}

std::optional<std::pair<BushyTree, BushyTree>> local_splitting(const BushyTree& t,
                                                               const StringSet& b,
                                                               const TTFunctional& gamma,
                                                               const FString& rho,
                                                               const WidthSpec& width) {
  std::vector<FString> good;
  std::set<FString> candidates;
  for (const auto& nu : t.nodes_above(rho)) {
    if (b.contains(nu)) continue;
    good.push_back(nu);
    const auto& out = gamma.at(nu);
    for (std::size_t n = 0; n < out.size(); ++n) candidates.insert(out.prefix(n));
  }
  std::vector<FString> ys(candidates.begin(), candidates.end());
  std::stable_sort(ys.begin(), ys.end(),
                   [](const FString& x, const FString& y) { return x.size() < y.size(); });
  for (const auto& y : ys) {
    std::vector<std::set<FString>> by_next(gamma.out_arity());
    for (const auto& nu : good) {
      const auto& out = gamma.at(nu);
      if (out.size() > y.size() && y.is_prefix_of(out)) by_next[out[y.size()]].insert(nu);
    }
    std::vector<std::pair<Symbol, BushyTree>> big;
    for (Symbol i = 0; i < gamma.out_arity() && big.size() < 2; ++i) {
      if (by_next[i].empty()) continue;
      if (auto w = big_among(by_next[i], rho, width)) big.emplace_back(i, std::move(*w));
    }
    if (big.size() == 2) return std::pair{std::move(big[0].second), std::move(big[1].second)};
  }
  return std::nullopt;
}

ExtendedFamily extend_family(const SplitFamily& family, const FString& tau_new,
                             const BushyTree& t, const StringSet& b, const TTFunctional& gamma,
                             const DyadicOrderFn& h_m, std::size_t l,
                             const std::optional<DyadicOrderFn>& h_b, bool strict) {
  if (family.roots.empty()) throw DomainError("extend_family: empty family");
  if (family.roots.size() != family.witnesses.size()) throw DomainError("extend_family: malformed family");
  const auto k = family.roots.size() - 1;
  ExtendedFamily out;
  auto note = [&](const std::string& s) {
    if (strict) throw DomainError("extend_family: " + s);
    out.notes.push_back(s);
  };
  auto roots = family.roots;
  roots.push_back(tau_new);
  for (const auto& r : roots) {
    if (r.size() != l) throw DomainError("extend_family: node " + r.to_string() + " not at length " + level_str(l));
    if (!t.contains(r)) throw DomainError("extend_family: node " + r.to_string() + " is not on T");
    if (b.contains(r)) throw DomainError("extend_family: node " + r.to_string() + " lies in B");
  }
  const auto gr = growth(h_m, l);
  if (gr.log2_w < 64 && BigInt(k + 1) >= BigInt(1) << gr.log2_w.convert_to<unsigned>()) {
    note("k + 1 = " + std::to_string(k + 1) + " is not below w(h_M, l)");
  }
  if (h_b && !exponent_at_least(h_m.exponent(l) - h_b->exponent(l), BigInt(1), gr.log2_w)) {
    note("h_M(l)/h_B(l) < r(h_M, l) at level " + level_str(l));
  }

  const auto kk = static_cast<unsigned>(k);
  const auto wq = to_width(h_m, 3);
  const auto wpi = to_width(h_m, 3 + 3 * kk + 1);
  const auto wg = to_width(h_m, 3 + 3 * kk + 3);
  out.member_width = wg;

  std::vector<BushyTree> pis;
  std::vector<std::map<FString, std::pair<BushyTree, BushyTree>>> pairs(k + 1);
  std::size_t m = 0;
  for (std::size_t j = 0; j <= k; ++j) {
    std::set<FString> keep;
    for (const auto& leaf : family.witnesses[j].leaves()) {
      if (!b.contains(leaf)) keep.insert(leaf);
    }
    auto pi = big_among(keep, roots[j], wpi);
    if (!pi) throw DomainError("extend_family: stage " + std::to_string(j) + ": refinement avoiding B is too thin");
    for (const auto& rho : pi->leaves()) {
      auto sp = local_splitting(t, b, gamma, rho, wpi);
      if (!sp) throw DomainError("extend_family: no splitting above " + rho.to_string());
      for (const auto* d : {&sp->first, &sp->second}) {
        for (const auto& x : d->leaves()) m = std::max(m, gamma.at(x).size());
      }
      pairs[j].emplace(rho, std::move(*sp));
    }
    pis.push_back(std::move(*pi));
  }
  auto long_enough = [&](const FString& nu) { return !b.contains(nu) && gamma.at(nu).size() >= m + 1; };
  auto delta = big_within(t, tau_new, long_enough, wq);
  if (!delta) throw DomainError("extend_family: no h_M/8-big set above the new node converges past " + std::to_string(m));

  BushyTree current = std::move(*delta);
  for (std::size_t j = 0; j <= k; ++j) {
    const auto wh = to_width(h_m, 3 + 2 * static_cast<unsigned>(j + 1));
    if (!validate_tree(pis[j].with_width(wg.scaled(4, 0))).ok()) {
      note("stage " + std::to_string(j) + ": refined member is not 4g-bushy after flooring");
    }
    if (!validate_tree(current.with_width(wh.scaled(4, 0))).ok()) {
      note("stage " + std::to_string(j) + ": Delta is not 4h-bushy after flooring");
    }
    auto fs = find_splitting(pis[j], pairs[j], current, gamma, wg, wh, false);
    out.family.roots.push_back(roots[j]);
    out.family.witnesses.push_back(std::move(fs.a.tree));
    current = std::move(fs.b.tree);
  }
  out.family.roots.push_back(tau_new);
  out.family.witnesses.push_back(std::move(current));
  return out;
}

TraceOutcome build_trace(const BushyTree& t, const StringSet& b, const FString& tau,
                         const TTFunctional& gamma, const DyadicOrderFn& h_m, std::size_t nbits) {
  if (!t.contains(tau)) throw DomainError("build_trace: " + tau.to_string() + " is not on T");
  if (b.contains(tau)) throw DomainError("build_trace: " + tau.to_string() + " lies in B");
  const auto w2 = to_width(h_m, 1);
  const auto w4 = to_width(h_m, 2);
  const auto w8 = to_width(h_m, 3);
  const auto w16 = to_width(h_m, 4);

  Trace tr;
  tr.y = gamma.at(tau);
  tr.y0_length = tr.y.size();
  tr.s.push_back(BushyTree::singleton(tau, w4));
  const auto above = t.nodes_above(tau);
  for (std::size_t i = 0; i < nbits; ++i) {
    const auto pos = tr.y.size();
    auto conv = [&](const FString& nu) { return !b.contains(nu) && gamma.at(nu).size() > pos; };
    std::map<FString, Symbol> c;
    std::map<FString, BushyTree> thinned;
    for (const auto& rho : tr.s.back().leaves()) {
      if (!big_within(t, rho, conv, w2)) {
        tr.note = "no h_M/2-big convergence at position " + std::to_string(pos) + " above " + rho.to_string();
        return tr;
      }
      bool found = false;
      for (Symbol v = 0; v < gamma.out_arity() && !found; ++v) {
        auto same = [&](const FString& nu) { return conv(nu) && gamma.at(nu)[pos] == v; };
        if (auto w = big_within(t, rho, same, w4)) {
          c[rho] = v;
          thinned.emplace(rho, std::move(*w));
          found = true;
        }
      }
      if (!found) {
        tr.note = "no single value is h_M/4-big at position " + std::to_string(pos) + " above " + rho.to_string();
        return tr;
      }
    }
    std::optional<Symbol> j;
    for (Symbol v = 0; v < gamma.out_arity() && !j; ++v) {
      std::set<FString> vs;
      for (const auto& [rho, cv] : c) {
        if (cv == v) vs.insert(rho);
      }
      if (big_among(vs, tau, w8)) j = v;
    }
    if (!j) {
      tr.note = "no value is shared by an h_M/8-big set of leaves at step " + std::to_string(i);
      return tr;
    }
    const auto y1 = tr.y.child(*j);
    std::set<FString> vprime;
    for (const auto& [rho, w] : thinned) {
      if (c[rho] != *j) continue;
      for (const auto& x : w.leaves()) vprime.insert(x);
    }
    std::set<FString> agree, disagree;
    for (const auto& nu : above) {
      if (b.contains(nu)) continue;
      const auto& out = gamma.at(nu);
      if (out.size() < y1.size()) continue;
      (y1.is_prefix_of(out) ? agree : disagree).insert(nu);
    }
    if (auto w = big_among(disagree, tau, w16)) {
      auto wv = big_among(vprime, tau, w16);
      if (!wv) throw InvariantError("build_trace: V' is not h_M/16-big");
      return SplittingPair{witness_of(std::move(*w), disagree), witness_of(std::move(*wv), vprime), i};
    }
    auto next = big_among(agree, tau, w4);
    if (!next) {
      tr.note = "agreement set is not h_M/4-big at step " + std::to_string(i);
      return tr;
    }
    tr.y = y1;
    tr.s.push_back(std::move(*next));
  }
  tr.complete = true;
  return tr;
}

bool union_big(const StringSet& d, const StringSet& b, const FString& sigma, const WidthSpec& width) {
  std::set<FString> gens = d.elements();
  gens.insert(b.elements().begin(), b.elements().end());
  auto member = [&](const FString& s) { return d.contains(s) || b.contains(s); };
  bigness::BigTable table(bigness::prefix_closure_above(gens, sigma), sigma, member, width);
  return table.stem_big();
}

namespace {

struct Builder {
  const BushyTree& t;
  const StringSet& b;
  const TTFunctional& gamma;
  const WidthSpec& h_s;
  const WidthSpec& h_b;
  std::vector<std::size_t> levels;
  std::size_t budget;
  std::set<FString> nodes;
  std::set<FString> dead;
  std::vector<std::string> notes;

  std::optional<std::size_t> level_at_least(std::size_t m) const {
    for (auto l : levels) {
      if (l >= m) return l;
    }
    return std::nullopt;
  }

  // Reaches level L above rho h_S-bushily; short leaves are terminal.
  std::optional<std::vector<FString>> reach(const FString& rho, std::size_t level, bool allow_short) {
    auto member = [&](const FString& nu) {
      if (nu.size() == level) return !b.contains(nu);
      if (!allow_short) return false;
      return b.contains(nu) || t.is_leaf(nu);
    };
    auto w = big_within(t, rho, member, h_s);
    if (!w) return std::nullopt;
    nodes.insert(w->nodes().begin(), w->nodes().end());
    std::vector<FString> kids;
    std::set<FString> short_leaves;
    for (const auto& leaf : w->leaves()) {
      if (leaf.size() == level) {
        kids.push_back(leaf);
      } else if (!b.contains(leaf)) {
        short_leaves.insert(leaf);
      }
    }
    if (big_among(short_leaves, rho, h_b)) notes.push_back("terminal leaves are h_B-big above " + rho.to_string());
    dead.insert(short_leaves.begin(), short_leaves.end());
    return kids;
  }

  // The longest output prefix y, incomparable with every code so far, whose
  // extension set is h_S-big above rho.
  std::optional<std::pair<FString, BushyTree>> coded(const FString& rho, const std::vector<FString>& codes) {
    std::vector<FString> good;
    std::set<FString> candidates;
    for (const auto& nu : t.nodes_above(rho)) {
      if (nu.size() > budget || b.contains(nu)) continue;
      good.push_back(nu);
      const auto& out = gamma.at(nu);
      for (std::size_t n = 0; n <= out.size(); ++n) candidates.insert(out.prefix(n));
    }
    std::vector<FString> ys(candidates.begin(), candidates.end());
    std::stable_sort(ys.begin(), ys.end(),
                     [](const FString& x, const FString& y) { return x.size() > y.size(); });
    for (const auto& y : ys) {
      if (std::any_of(codes.begin(), codes.end(), [&](const FString& c) { return c.comparable(y); })) continue;
      std::set<FString> members;
      for (const auto& nu : good) {
        if (y.is_prefix_of(gamma.at(nu))) members.insert(nu);
      }
      if (auto w = big_among(members, rho, h_s)) return std::pair{y, std::move(*w)};
    }
    return std::nullopt;
  }
};

}  // namespace

SplitTree build_splitting_tree(const BushyTree& t, const StringSet& b, const FString& sigma,
                               const TTFunctional& gamma, const WidthSpec& h_s,
                               const WidthSpec& h_b, const std::vector<std::size_t>& levels,
                               std::size_t depth_budget, std::size_t blocks) {
  if (!t.contains(sigma)) throw DomainError("build_splitting_tree: stem not on T");
  if (b.contains(sigma)) throw DomainError("build_splitting_tree: stem lies in B");
  for (std::size_t i = 1; i < levels.size(); ++i) {
    if (levels[i] <= levels[i - 1]) throw DomainError("build_splitting_tree: levels not increasing");
  }
  Builder bd{t, b, gamma, h_s, h_b, {}, depth_budget, {sigma}, {}, {}};
  for (auto l : levels) {
    if (l > sigma.size() && l <= depth_budget) bd.levels.push_back(l);
  }

  SplitTree out;
  out.h_s = h_s;
  auto finish = [&](bool exhausted, std::string note) {
    out.tree = BushyTree(sigma, bd.nodes, h_s);
    out.d = StringSet::upward_closed(bd.dead);
    out.exhausted = exhausted;
    for (const auto& n : bd.notes) note += (note.empty() ? "" : "; ") + n;
    out.note = std::move(note);
    return out;
  };

  auto first = bd.level_at_least(sigma.size() + 1);
  if (!first) return finish(true, "no splitting level above the stem within budget");
  auto kids = bd.reach(sigma, *first, true);
  if (!kids) return finish(true, "stem cannot reach the first splitting level");

  struct Parent {
    FString node;
    std::vector<FString> children;
    std::size_t level;
  };
  std::vector<Parent> parents{{sigma, std::move(*kids), *first}};
  for (std::size_t blk = 0; blk < blocks; ++blk) {
    std::vector<Parent> next_parents;
    for (const auto& p : parents) {
      std::vector<FString> codes;
      std::vector<std::pair<FString, BushyTree>> accepted;
      std::set<FString> rejected;
      for (const auto& rho : p.children) {
        if (b.contains(rho)) continue;
        if (auto c = bd.coded(rho, codes)) {
          codes.push_back(c->first);
          accepted.emplace_back(rho, std::move(c->second));
        } else {
          rejected.insert(rho);
        }
      }
      if (big_among(rejected, p.node, h_b)) {
        bd.notes.push_back("discarded children are h_B-big above " + p.node.to_string());
      }
      bd.dead.insert(rejected.begin(), rejected.end());

      std::size_t m = p.level + 1;
      for (const auto& [rho, a] : accepted) m = std::max(m, a.height());
      auto l2 = bd.level_at_least(m);
      if (!l2) return finish(true, "splitting levels exhausted above " + p.node.to_string());
      for (const auto& [rho, a] : accepted) {
        bd.nodes.insert(a.nodes().begin(), a.nodes().end());
        std::vector<FString> grand;
        std::set<FString> lost;
        for (const auto& nu : a.leaves()) {
          if (auto g = bd.reach(nu, *l2, false)) {
            grand.insert(grand.end(), g->begin(), g->end());
          } else {
            lost.insert(nu);
          }
        }
        if (big_among(lost, rho, h_b)) bd.notes.push_back("unextended leaves are h_B-big above " + rho.to_string());
        bd.dead.insert(lost.begin(), lost.end());
        next_parents.push_back({rho, std::move(grand), *l2});
      }
      out.blocks.push_back({p.node, p.level, *l2});
    }
    parents = std::move(next_parents);
  }
  return finish(false, "");
}

SplitTree build_splitting_tree(const BushyTree& t, const StringSet& b, const FString& sigma,
                               const TTFunctional& gamma, const DyadicOrderFn& h_m,
                               const DyadicOrderFn& h_b, const std::vector<std::size_t>& levels,
                               std::size_t depth_budget, std::size_t blocks) {
  auto hs = derive_hS(h_m, h_b, levels);
  if (!hs.chain.ok()) throw DomainError("build_splitting_tree: allowance invalid: " + hs.chain.to_string());
  return build_splitting_tree(t, b, sigma, gamma, to_width(hs.h_s), to_width(h_b), levels,
                              depth_budget, blocks);
}

ValidationReport check_delayed_splitting(const SplitTree& s, const TTFunctional& gamma) {
  ValidationReport r;
  for (const auto& blk : s.blocks) {
    if (!(blk.next_level > blk.level && blk.level > blk.parent.size())) {
      r.add("block levels out of order", blk.parent);
      continue;
    }
    std::vector<std::vector<FString>> groups;
    for (const auto& rho : s.tree.nodes_above(blk.parent)) {
      if (rho.size() != blk.level) continue;
      std::vector<FString> desc;
      for (const auto& x : s.tree.nodes_above(rho)) {
        if (x.size() == blk.next_level) desc.push_back(x);
      }
      groups.push_back(std::move(desc));
    }
    for (std::size_t i = 0; i < groups.size(); ++i) {
      for (std::size_t j = i + 1; j < groups.size(); ++j) {
        if (!is_splitting_pair(groups[i], groups[j], gamma)) {
          r.add("level-" + std::to_string(blk.next_level) + " descendants do not split", blk.parent);
        }
      }
    }
  }
  return r;
}

}  // namespace bushy::splitting
