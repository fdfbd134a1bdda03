#include "bushy/forcing.hpp"

#include <algorithm>
#include <functional>

namespace bushy::forcing {

using bigness::big_among;
using bigness::big_within;

ValidationReport check_condition(const BasicCondition& c) {
  ValidationReport r;
  if (c.k == 0) r.add("k must be positive");
  if (c.bad.contains(c.sigma)) r.add("stem lies in the bad set", c.sigma);
  if (c.k > 0 && bigness::is_big(c.bad, c.sigma, WidthSpec::constant(c.k))) {
    r.add("bad set is " + std::to_string(c.k) + "-big above the stem", c.sigma);
  }
  return r;
}

ValidationReport check_condition(const TreeCondition& c) {
  ValidationReport r;
  const auto& t = c.tree;
  if (!t.contains(c.sigma)) r.add("stem not on the tree", c.sigma);
  if (!t.stem().is_prefix_of(c.sigma)) r.add("tree stem does not lie below the condition stem", c.sigma);
  r.merge(validate_tree(t.with_width(c.j, true)));
  if (c.bad.contains(c.sigma)) r.add("stem lies in the bad set", c.sigma);
  for (const auto& node : t.nodes()) {
    if (!c.bad.contains(node)) continue;
    for (const auto& kid : t.children(node)) {
      if (!c.bad.contains(kid)) r.add("bad set not upward closed within the tree", kid);
    }
  }
  if (c.bound.defined_at(c.sigma.size())) {
    const auto w = c.bound.at(c.sigma.size());
    if (bigness::is_big(c.bad, c.sigma, WidthSpec::constant(w))) {
      r.add("bad set is " + std::to_string(w) + "-big above the stem", c.sigma);
    }
  } else {
    r.add("bound undefined at the stem level", c.sigma);
  }
  return r;
}

bool extends(const BasicCondition& c1, const BasicCondition& c2) {
  return c2.sigma.is_prefix_of(c1.sigma) && c2.bad.subset_of(c1.bad);
}

namespace {

using ValueFn = std::function<std::optional<Symbol>(const FString&)>;

std::optional<ForcedValue> force_value_by(const ValueFn& value, Symbol arity,
                                          const std::vector<FString>& above, const FString& stem,
                                          Width k, const StringSet& avoid) {
  std::vector<std::set<FString>> lambda(arity);
  for (const auto& tau : above) {
    if (avoid.contains(tau)) continue;
    if (auto v = value(tau); v && *v < arity) lambda[*v].insert(tau);
  }
  for (Symbol i = 0; i < arity; ++i) {
    if (auto w = big_among(lambda[i], stem, WidthSpec::constant(k))) {
      return ForcedValue{i, BigWitness{std::move(*w), StringSet::explicit_set(std::move(lambda[i]))}};
    }
  }
  return std::nullopt;
}

}  // namespace

std::optional<ForcedValue> force_value(const TTFunctional& gamma, const FString& stem,
                                       std::size_t m, Width k, const StringSet& avoid) {
  if (k == 0) throw DomainError("force_value: k must be positive");
  if (!gamma.domain().contains(stem)) throw DomainError("force_value: stem outside the domain");
  if (avoid.contains(stem)) throw DomainError("force_value: stem " + stem.to_string() + " lies in avoid");
  if (!functional::convergence_level(gamma, m + 1)) {
    throw DomainError("force_value: functional never converges at input " + std::to_string(m));
  }
  auto value = [&](const FString& tau) { return gamma.bit(tau, m); };
  return force_value_by(value, gamma.out_arity(), gamma.domain().strings_above(stem), stem, k, avoid);
}

std::optional<std::pair<std::size_t, Symbol>> first_convergence(
    const std::vector<const TTFunctional*>& family, const FString& tau, std::size_t x) {
  for (std::size_t n = 0; n <= tau.size(); ++n) {
    const auto p = tau.prefix(n);
    for (std::size_t j = 0; j < family.size(); ++j) {
      if (auto v = family[j]->bit(p, x)) return std::pair{j, *v};
    }
  }
  return std::nullopt;
}

std::vector<DiagRound> diagonalize_family(const std::vector<TTFunctional>& family,
                                          const std::vector<Trap>& traps, Width k,
                                          const FString& stem) {
  if (family.empty()) return {};
  if (traps.size() < family.size()) {
    throw DomainError("diagonalize_family: " + std::to_string(traps.size()) + " traps for " +
                      std::to_string(family.size()) + " functionals");
  }
  Symbol arity = 0;
  for (const auto& g : family) {
    if (!(g.domain() == family.front().domain())) {
      throw DomainError("diagonalize_family: functionals do not share a domain");
    }
    arity = std::max(arity, g.out_arity());
  }
  const auto& domain = family.front().domain();
  if (!domain.contains(stem)) throw DomainError("diagonalize_family: stem outside the domain");

  std::vector<std::size_t> active(family.size());
  for (std::size_t j = 0; j < active.size(); ++j) active[j] = j;
  std::vector<DiagRound> out;
  FString sigma = stem;
  for (std::size_t round = 0; round < family.size(); ++round) {
    std::vector<const TTFunctional*> live;
    for (auto j : active) live.push_back(&family[j]);
    const auto e = traps[round].input;
    auto xi = [&](const FString& tau) -> std::optional<Symbol> {
      if (auto fc = first_convergence(live, tau, e)) return fc->second;
      return std::nullopt;
    };
    auto forced = force_value_by(xi, arity, domain.strings_above(sigma), sigma, k, StringSet{});
    if (!forced) {
      throw DomainError("diagonalize_family: round " + std::to_string(round + 1) +
                        ": no value can be forced at input " + std::to_string(e));
    }
    if (traps[round].value && *traps[round].value != forced->value) {
      throw DomainError("diagonalize_family: round " + std::to_string(round + 1) + ": forced " +
                        std::to_string(forced->value) + " but the trap holds " +
                        std::to_string(*traps[round].value));
    }
    auto leaves = forced->witness.tree.leaves();
    FString next = leaves.front();
    auto fc = first_convergence(live, next, e);
    if (!fc) throw InvariantError("diagonalize_family: witness leaf does not converge");
    const auto defeated = active[fc->first];
    out.push_back({round + 1, defeated, next, forced->value, std::move(forced->witness)});
    active.erase(active.begin() + static_cast<std::ptrdiff_t>(fc->first));
    sigma = std::move(next);
  }
  return out;
}

namespace {

bool converges(const TTFunctional& gamma, const FString& rho, std::size_t x) {
  return gamma.at(rho).size() > x;
}

StringSet union_with(const StringSet& b, const std::set<FString>& extra) {
  if (b.upward()) {
    std::set<FString> gens = b.elements();
    gens.insert(extra.begin(), extra.end());
    return StringSet::upward_closed(gens);
  }
  std::set<FString> all = b.elements();
  all.insert(extra.begin(), extra.end());
  return StringSet::explicit_set(std::move(all));
}

}  // namespace

PartialityOutcome partiality_split(const TTFunctional& gamma, const BushyTree& t,
                                   const StringSet& b, const FString& tau, std::size_t x,
                                   const WidthSpec& w_small, const std::optional<WidthSpec>& w_big) {
  if (!t.contains(tau)) throw DomainError("partiality_split: " + tau.to_string() + " is not on T");
  if (b.contains(tau)) throw DomainError("partiality_split: " + tau.to_string() + " lies in B");

  auto in_c_or_b = [&](const FString& rho) { return b.contains(rho) || converges(gamma, rho, x); };
  if (!big_within(t, tau, in_c_or_b, w_small)) {
    std::set<FString> cx;
    for (const auto& rho : t.nodes()) {
      if (converges(gamma, rho, x)) cx.insert(rho);
    }
    return DivergenceCondition{tau, union_with(b, cx), w_small};
  }
  const WidthSpec wb = w_big ? *w_big : w_small.halved();
  auto in_c_not_b = [&](const FString& rho) { return !b.contains(rho) && converges(gamma, rho, x); };
  auto w = big_within(t, tau, in_c_not_b, wb);
  if (!w) {
    throw DomainError("partiality_split: C_x \\ B is " + wb.to_string() + "-small above " +
                      tau.to_string() + " although C_x u B is " + w_small.to_string() + "-big");
  }
  std::set<FString> target;
  for (const auto& rho : t.nodes_above(tau)) {
    if (in_c_not_b(rho)) target.insert(rho);
  }
  return BigWitness{std::move(*w), StringSet::explicit_set(std::move(target))};
}

namespace {

// Extends `from` inside T to `level` taking the first `w` children at every
// step; collects the nodes and the level-`level` leaves.
void regularize(const BushyTree& t, const FString& from, std::size_t level, Width w,
                std::set<FString>& nodes, std::vector<FString>& leaves) {
  std::vector<FString> layer{from};
  nodes.insert(from);
  for (auto l = from.size(); l < level; ++l) {
    std::vector<FString> next;
    for (const auto& v : layer) {
      auto kids = t.children(v);
      if (kids.size() < w) {
        throw DomainError("T has " + std::to_string(kids.size()) + " children at " + v.to_string() +
                          ", need " + std::to_string(w));
      }
      for (Width i = 0; i < w; ++i) {
        nodes.insert(kids[i]);
        next.push_back(std::move(kids[i]));
      }
    }
    layer = std::move(next);
  }
  leaves.insert(leaves.end(), layer.begin(), layer.end());
}

}  // namespace

TotalityOutcome build_total_subtree(const BushyTree& t, const StringSet& b,
                                    const TTFunctional& gamma, const FString& sigma,
                                    std::size_t rounds) {
  if (!t.contains(sigma)) throw DomainError("build_total_subtree: stem not on T");
  const StringSet bad = b.upward() ? b : StringSet::upward_closed(b.elements());
  const auto& j = t.width();

  std::set<FString> nodes{sigma};
  std::vector<FString> frontier{sigma};
  std::vector<std::size_t> levels{sigma.size()};
  for (std::size_t i = 0; i < rounds; ++i) {
    const auto l = levels.back();
    const Width w = j.at(l);
    auto member = [&](const FString& rho) { return bad.contains(rho) || converges(gamma, rho, i); };

    std::vector<BushyTree> parts;
    std::size_t top = l;
    for (const auto& tau : frontier) {
      if (bad.contains(tau)) {
        parts.push_back(BushyTree::singleton(tau, WidthSpec::constant(w)));
        continue;
      }
      auto wt = big_within(t, tau, member, WidthSpec::constant(w));
      if (!wt) {
        std::set<FString> gens;
        for (const auto& rho : t.nodes_above(tau)) {
          if (member(rho)) gens.insert(rho);
        }
        return PartialityWitness{tau, i, StringSet::upward_closed(gens)};
      }
      top = std::max(top, wt->height());
      parts.push_back(std::move(*wt));
    }
    std::vector<FString> next;
    for (const auto& p : parts) {
      nodes.insert(p.nodes().begin(), p.nodes().end());
      for (const auto& leaf : p.leaves()) regularize(t, leaf, top, w, nodes, next);
    }
    frontier = std::move(next);
    levels.push_back(top);
  }

  std::vector<Width> jp;
  for (std::size_t x = 0; x < levels.front(); ++x) jp.push_back(j.at(x));
  for (std::size_t i = 0; i + 1 < levels.size(); ++i) {
    for (auto x = levels[i]; x < levels[i + 1]; ++x) jp.push_back(j.at(levels[i]));
  }
  jp.push_back(rounds == 0 ? j.at(levels.front()) : j.at(levels[levels.size() - 2]));
  auto width = WidthSpec::leveled(std::move(jp));
  return TotalSubtree{BushyTree(sigma, std::move(nodes), width, true), width, std::move(levels)};
}

KurtzStep kurtz_step(const TTFunctional& gamma, const BushyTree& s_i) {
  if (gamma.out_arity() != 2) throw DomainError("kurtz_step: functional must have binary outputs");
  const auto& dom = gamma.domain();
  const auto two = WidthSpec::constant(2);
  auto report = validate_tree(s_i.with_width(two));
  if (!report.ok()) throw DomainError("kurtz_step: S_i is not 2-bushy: " + report.to_string());
  const auto leaves0 = s_i.leaves();
  const auto q0 = leaves0.front().size();
  for (const auto& leaf : leaves0) {
    if (leaf.size() != q0) throw DomainError("kurtz_step: S_i is not regular");
    if (!dom.contains(leaf)) throw DomainError("kurtz_step: S_i leaves outside the domain");
  }

  KurtzStep out;
  const auto before = functional::image_class(gamma, leaves0);
  out.mu_before = before.measure();

  auto q = q0;
  while (q < dom.depth() && dom.width(q) < 3) ++q;
  if (q >= dom.depth()) throw DomainError("kurtz_step: insufficient depth to pad S_i");
  out.pad_level = q;

  std::set<FString> nodes = s_i.nodes();
  std::vector<FString> padded;
  const auto full = BushyTree::full(dom, FString{});
  for (const auto& leaf : leaves0) regularize(full, leaf, q, 2, nodes, padded);

  if (padded.size() > 20) throw DomainError("kurtz_step: too many leaves for the pigeonhole window");
  std::size_t m = 0;
  for (const auto& p : padded) m = std::max(m, gamma.at(p).size());
  out.m = m;
  const std::size_t window = (std::size_t{1} << padded.size()) + 1;
  const std::size_t need = m + window;

  std::vector<std::vector<FString>> above(padded.size());
  std::optional<std::size_t> level;
  for (auto l = q + 1; l <= dom.depth() && !level; ++l) {
    bool all = true;
    for (std::size_t j = 0; j < padded.size() && all; ++j) {
      above[j].clear();
      for (const auto& tau : dom.strings_above(padded[j])) {
        if (tau.size() != l) continue;
        if (gamma.at(tau).size() < need) {
          all = false;
          break;
        }
        above[j].push_back(tau);
      }
    }
    if (all) level = l;
  }
  if (!level) {
    throw DomainError("kurtz_step: no level grants " + std::to_string(window) +
                      " output bits beyond " + std::to_string(m));
  }
  out.force_level = *level;

  auto forcing_set = [&](std::size_t j, std::size_t k, Symbol v) {
    std::set<FString> members;
    for (const auto& tau : above[j]) {
      if (gamma.at(tau)[k] == v) members.insert(tau);
    }
    return members;
  };
  out.rho.assign(window, std::vector<char>(padded.size(), 0));
  for (std::size_t k = 0; k < window; ++k) {
    for (std::size_t j = 0; j < padded.size(); ++j) {
      out.rho[k][j] = big_among(forcing_set(j, m + k, 1), padded[j], two) ? 1 : 0;
    }
  }
  bool found = false;
  for (std::size_t r = 0; r < window && !found; ++r) {
    for (std::size_t s = r + 1; s < window && !found; ++s) {
      if (out.rho[r] == out.rho[s]) {
        out.r = m + r;
        out.s = m + s;
        found = true;
      }
    }
  }
  if (!found) throw InvariantError("kurtz_step: pigeonhole produced no pair");

  for (std::size_t j = 0; j < padded.size(); ++j) {
    std::optional<BushyTree> w;
    if (out.rho[out.r - m][j]) {
      w = big_among(forcing_set(j, out.r, 1), padded[j], two);
    } else {
      w = big_among(forcing_set(j, out.s, 0), padded[j], two);
    }
    if (!w) throw InvariantError("kurtz_step: neither bit can be forced above " + padded[j].to_string());
    nodes.insert(w->nodes().begin(), w->nodes().end());
  }
  out.next = BushyTree(s_i.stem(), std::move(nodes), two, true);

  const auto leaves1 = out.next.leaves();
  out.mu_after = functional::image_class(gamma, leaves1).measure();
  const std::pair<std::size_t, Symbol> fixed[] = {{out.r, 0}, {out.s, 1}};
  out.mu_excluded = functional::measure_with_bits(before, fixed);
  return out;
}

KurtzTrace kurtz_run(const TTFunctional& gamma, std::size_t rounds, const FString& stem) {
  if (!gamma.domain().contains(stem)) throw DomainError("kurtz_run: stem outside the domain");
  KurtzTrace trace;
  auto s = BushyTree::singleton(stem, WidthSpec::constant(2));
  const FString leaf[] = {stem};
  trace.records.push_back({0, s, std::nullopt, std::nullopt, functional::image_class(gamma, leaf).measure()});
  for (std::size_t i = 1; i <= rounds; ++i) {
    try {
      auto step = kurtz_step(gamma, s);
      s = step.next;
      trace.records.push_back({i, s, step.r, step.s, step.mu_after});
    } catch (const DomainError& e) {
      trace.truncated = true;
      trace.note = "round " + std::to_string(i) + ": " + e.what();
      break;
    }
  }
  return trace;
}

std::optional<Symbol> patched_value(const TTFunctional& xi, const StringSet& b,
                                    const FString& tau, std::size_t i) {
  if (auto v = xi.bit(tau, i)) return v;
  if (b.contains(tau)) return Symbol{0};
  return std::nullopt;
}

Majorant majorize(const BushyTree& t, const StringSet& b, const TTFunctional& xi, std::size_t i) {
  auto defined = [&](const FString& tau) { return patched_value(xi, b, tau, i).has_value(); };
  auto w = big_within(t, t.stem(), defined, t.width());
  if (!w) {
    throw DomainError("majorize: no " + t.width().to_string() + "-bushy subtree converges at " +
                      std::to_string(i));
  }
  Symbol best = 0;
  for (const auto& leaf : w->leaves()) best = std::max(best, *patched_value(xi, b, leaf, i));
  return Majorant{best, std::move(*w)};
}

std::optional<std::uint64_t> PartialFnTable::value(std::size_t n, std::uint64_t m,
                                                   std::uint64_t stage) const {
  if (n >= fns.size()) return std::nullopt;
  auto it = fns[n].find(m);
  if (it == fns[n].end() || it->second.second > stage) return std::nullopt;
  return it->second.first;
}

ValidationReport ReductionTable::check_consistency() const {
  ValidationReport r;
  std::map<std::uint64_t, std::vector<std::pair<FString, std::uint64_t>>> by_input;
  for (const auto& [key, v] : entries) by_input[key.second].push_back({key.first, v});
  for (const auto& [m, list] : by_input) {
    for (std::size_t a = 0; a < list.size(); ++a) {
      for (std::size_t c = a + 1; c < list.size(); ++c) {
        if (list[a].first.comparable(list[c].first) && list[a].second != list[c].second) {
          r.add("comparable nodes disagree at input " + std::to_string(m), list[c].first);
        }
      }
      if (m < defaults.size() && list[a].second != 0) {
        const auto& tm = defaults[m];
        bool covered = std::any_of(tm.begin(), tm.end(),
                                   [&](const FString& h) { return h.is_prefix_of(list[a].first); });
        if (!covered) r.add("entry conflicts with the default at input " + std::to_string(m), list[a].first);
      }
    }
  }
  return r;
}

std::optional<std::uint64_t> ReductionTable::eval(const FString& g, std::uint64_t m) const {
  for (std::size_t n = 1; n <= g.size(); ++n) {
    const auto p = g.prefix(n);
    auto it = reservations.find(p);
    if (it == reservations.end() || it->second != m) continue;
    auto e = entries.find({p, m});
    if (e == entries.end()) return std::nullopt;
    return e->second;
  }
  if (m >= defaults.size()) return std::nullopt;
  for (const auto& h : defaults[m]) {
    if (h.comparable(g)) return std::nullopt;
  }
  return 0;
}

PsiResult psi_simulate(const PartialFnTable& phis, std::uint64_t stages,
                       const std::vector<FString>& probes) {
  struct Sub {
    FString tau;
    Symbol child = 0;
    std::optional<std::uint64_t> m;
  };
  std::set<FString> taus;
  for (const auto& g : probes) {
    for (std::size_t n = 0; n < g.size(); ++n) taus.insert(g.prefix(n));
  }
  std::vector<Sub> subs;
  for (const auto& t : taus) subs.push_back({t, 0, std::nullopt});

  PsiResult res;
  auto& psi = res.psi;
  psi.defaults.resize(stages);
  std::map<std::uint64_t, FString> holder;
  std::uint64_t next = 0;
  for (std::uint64_t s = 0; s < stages; ++s) {
    for (auto& sub : subs) {
      const auto node = sub.tau.child(sub.child);
      if (!sub.m) {
        const auto m = std::max(next, s);
        next = m + 1;
        sub.m = m;
        psi.reservations[node] = m;
        holder.emplace(m, node);
      }
      if (auto v = phis.value(sub.tau.size(), *sub.m, s)) {
        psi.entries[{node, *sub.m}] = *v + 1;
        ++sub.child;
        sub.m.reset();
      }
    }
    if (auto it = holder.find(s); it != holder.end()) psi.defaults[s].insert(it->second);
  }

  if (stages == 0) return res;
  for (const auto& sub : subs) {
    if (sub.m) ++res.report.waiting;
  }
  for (const auto& g : probes) {
    ProbeReport pr;
    pr.probe = g;
    for (const auto& sub : subs) {
      if (!sub.m || !sub.tau.is_proper_prefix_of(g)) continue;
      const auto node = sub.tau.child(sub.child);
      if (node.is_prefix_of(g)) pr.halted.push_back(node);
    }
    pr.values.reserve(stages);
    for (std::uint64_t m = 0; m < stages; ++m) pr.values.push_back(psi.eval(g, m));
    for (std::size_t n = 1; n <= g.size(); ++n) {
      const auto p = g.prefix(n);
      auto it = psi.reservations.find(p);
      if (it == psi.reservations.end()) continue;
      const auto phi = phis.value(n - 1, it->second, stages - 1);
      if (!phi) continue;
      auto psi_v = psi.eval(g, it->second);
      pr.identities.push_back({p, n - 1, it->second, *phi, psi_v ? *psi_v : 0});
    }
    res.report.probes.push_back(std::move(pr));
  }
  return res;
}

}  // namespace bushy::forcing
