#include <CLI11.hpp>

#include "bushy/generate.hpp"
#include "bushy/splitting.hpp"
#include "cli_support.hpp"

namespace bushy::cli {

namespace {

using splitting::DyadicOrderFn;

std::string opt_big(const std::optional<BigInt>& v) { return v ? v->str() : std::string("-"); }

StringSet optional_set(const std::string& path, const std::optional<BoundedSpace>& space) {
  return path.empty() ? StringSet::explicit_set({}) : load_set(path, space);
}

void write_family(const std::string& prefix, const splitting::SplitFamily& f) {
  if (prefix.empty()) return;
  for (std::size_t i = 0; i < f.witnesses.size(); ++i) {
    io::write_file(prefix + std::to_string(i) + ".tree", io::format_tree(f.witnesses[i]));
  }
}

json family_json(const splitting::SplitFamily& f) {
  json out = json::array();
  for (const auto& w : f.witnesses) out.push_back(tree_json(w));
  return out;
}

}  // namespace

void register_splitting(CLI::App& app, Globals& g) {
  {
    auto* cmd = app.add_subcommand("middle", "pointwise floor mean of two exponent sequences");
    auto h = std::make_shared<std::string>();
    auto gg = std::make_shared<std::string>();
    auto out = std::make_shared<std::string>();
    cmd->add_option("--h", *h, "order function file")->required();
    cmd->add_option("--g", *gg, "order function file")->required();
    cmd->add_option("--out", *out, "write the middle here");
    cmd->callback([=, &g] {
      const auto m = splitting::middle(load_order_fn(*h), load_order_fn(*gg));
      maybe_write(*out, m.to_string() + "\n");
      emit(g, {{"verb", "middle"}, {"middle", m.to_string()}}, m.to_string() + "\n");
    });
  }
  {
    auto* cmd = app.add_subcommand("growth", "w(g, l) and the exponent of r(g, l)");
    auto gg = std::make_shared<std::string>();
    auto l = std::make_shared<std::size_t>(0);
    cmd->add_option("--g", *gg, "order function file")->required();
    cmd->add_option("--l", *l, "level")->required();
    cmd->callback([=, &g] {
      const auto gr = splitting::growth(load_order_fn(*gg), *l);
      emit(g,
           {{"verb", "growth"}, {"log2_w", gr.log2_w.str()}, {"w", opt_big(gr.w)},
            {"r_exponent", opt_big(gr.r_exponent)}},
           "log2_w " + gr.log2_w.str() + "\nw " + opt_big(gr.w) + "\nr_exponent " + opt_big(gr.r_exponent) +
               "\n");
    });
  }
  {
    auto* cmd = app.add_subcommand("allow-check", "check that (h, g) allows splitting");
    auto path = std::make_shared<std::string>();
    cmd->add_option("--allowance", *path, "allowance file")->required();
    cmd->callback([=, &g] {
      const auto rep = splitting::check_allows_splitting(io::parse_allowance(io::read_file(*path)));
      emit(g, {{"verb", "allow-check"}, {"valid", rep.ok()}, {"violations", report_json(rep)}},
           rep.ok() ? "valid\n" : rep.to_string() + "\n");
      if (!rep.ok()) throw DomainError("allowance does not allow splitting");
    });
  }
  {
    auto* cmd = app.add_subcommand("derive-hs", "derive h_S from h_M (h:) and h_B (g:)");
    auto path = std::make_shared<std::string>();
    auto out = std::make_shared<std::string>();
    cmd->add_option("--allowance", *path, "allowance file")->required();
    cmd->add_option("--out", *out, "write h_S here");
    cmd->callback([=, &g] {
      const auto a = io::parse_allowance(io::read_file(*path));
      const auto d = splitting::derive_hS(a.h, a.g, a.levels);
      maybe_write(*out, d.h_s.to_string() + "\n");
      std::string text = d.h_s.to_string() + "\nchain " + (d.chain.ok() ? "ok" : d.chain.to_string()) + "\n";
      for (const auto& n : d.notes) text += "note " + n + "\n";
      emit(g,
           {{"verb", "derive-hs"}, {"h_s", d.h_s.to_string()}, {"chain_ok", d.chain.ok()},
            {"chain", report_json(d.chain)}, {"notes", d.notes}},
           text);
      if (!d.chain.ok()) throw DomainError("derived h_S fails the chain inequality");
    });
  }
  {
    auto* cmd = app.add_subcommand("find-split", "splitting lemma loop");
    auto a = std::make_shared<std::string>();
    auto pairs = std::make_shared<std::vector<std::string>>();
    auto b = std::make_shared<std::string>();
    auto fn = std::make_shared<std::string>();
    auto gw = std::make_shared<std::string>();
    auto hw = std::make_shared<std::string>();
    auto loose = std::make_shared<bool>(false);
    auto out_a = std::make_shared<std::string>();
    auto out_b = std::make_shared<std::string>();
    cmd->add_option("--a", *a, "tree A")->required();
    cmd->add_option("--pair", *pairs, "two splitting trees per leaf of A, in order")->required();
    cmd->add_option("--b", *b, "tree B")->required();
    cmd->add_option("--functional", *fn, "functional file")->required();
    cmd->add_option("--g", *gw, "width g")->required();
    cmd->add_option("--h", *hw, "width h")->required();
    cmd->add_flag("--no-check-widths", *loose, "skip the 4g / 4h hypotheses");
    cmd->add_option("--out-a", *out_a, "write A'' here");
    cmd->add_option("--out-b", *out_b, "write B' here");
    cmd->callback([=, &g] {
      const auto gamma = load_functional(*fn);
      const auto& sp = gamma.domain();
      std::map<FString, std::vector<BushyTree>> by_stem;
      for (const auto& p : *pairs) {
        auto t = load_tree(p, sp).tree;
        by_stem[t.stem()].push_back(std::move(t));
      }
      std::map<FString, std::pair<BushyTree, BushyTree>> pm;
      for (auto& [stem, v] : by_stem) {
        if (v.size() != 2) throw DomainError("find-split: need exactly two pair trees above " + stem.to_string());
        pm.emplace(stem, std::pair{v[0], v[1]});
      }
      const auto res = splitting::find_splitting(load_tree(*a, sp).tree, pm, load_tree(*b, sp).tree, gamma,
                                                 WidthSpec::parse(*gw), WidthSpec::parse(*hw), !*loose);
      maybe_write(*out_a, io::format_tree(res.a.tree));
      maybe_write(*out_b, io::format_tree(res.b.tree));
      emit(g,
           {{"verb", "find-split"}, {"case", res.which}, {"rounds", res.rounds}, {"a", tree_json(res.a.tree)},
            {"b", tree_json(res.b.tree)}},
           "case " + std::to_string(res.which) + " rounds " + std::to_string(res.rounds) + "\n");
    });
  }
  {
    auto* cmd = app.add_subcommand("extend-family", "add a member to a pairwise splitting family");
    auto members = std::make_shared<std::vector<std::string>>();
    auto tau = std::make_shared<std::string>();
    auto tree = std::make_shared<std::string>();
    auto bad = std::make_shared<std::string>();
    auto fn = std::make_shared<std::string>();
    auto hm = std::make_shared<std::string>();
    auto hb = std::make_shared<std::string>();
    auto l = std::make_shared<std::size_t>(0);
    auto strict = std::make_shared<bool>(false);
    auto prefix = std::make_shared<std::string>();
    cmd->add_option("--member", *members, "member witness trees (roots are their stems)")->required();
    cmd->add_option("--tau-new", *tau, "new root")->required();
    cmd->add_option("--tree", *tree, "ambient tree T")->required();
    cmd->add_option("--bad", *bad, "bad set file");
    cmd->add_option("--functional", *fn, "functional file")->required();
    cmd->add_option("--hm", *hm, "h_M order function file")->required();
    cmd->add_option("--hb", *hb, "h_B order function file");
    cmd->add_option("--l", *l, "root length")->required();
    cmd->add_flag("--strict", *strict, "unmet hypotheses are errors");
    cmd->add_option("--out-prefix", *prefix, "write members to PREFIX<i>.tree");
    cmd->callback([=, &g] {
      const auto gamma = load_functional(*fn);
      const auto& sp = gamma.domain();
      splitting::SplitFamily fam;
      for (const auto& p : *members) {
        auto t = load_tree(p, sp).tree;
        fam.roots.push_back(t.stem());
        fam.witnesses.push_back(std::move(t));
      }
      std::optional<DyadicOrderFn> h_b;
      if (!hb->empty()) h_b = load_order_fn(*hb);
      const auto res = splitting::extend_family(fam, FString::parse(*tau), load_tree(*tree, sp).tree,
                                                optional_set(*bad, sp), gamma, load_order_fn(*hm), *l, h_b,
                                                *strict);
      write_family(*prefix, res.family);
      std::string text = "members " + std::to_string(res.family.witnesses.size()) + " width " +
                         res.member_width.to_string() + "\n";
      for (const auto& n : res.notes) text += "note " + n + "\n";
      emit(g,
           {{"verb", "extend-family"}, {"member_width", res.member_width.to_string()},
            {"members", family_json(res.family)}, {"notes", res.notes}},
           text);
    });
  }
  {
    auto* cmd = app.add_subcommand("trace", "splitting or trace dichotomy above tau");
    auto tree = std::make_shared<std::string>();
    auto bad = std::make_shared<std::string>();
    auto tau = std::make_shared<std::string>("e");
    auto fn = std::make_shared<std::string>();
    auto hm = std::make_shared<std::string>();
    auto nbits = std::make_shared<std::size_t>(1);
    auto prefix = std::make_shared<std::string>();
    cmd->add_option("--tree", *tree, "ambient tree T")->required();
    cmd->add_option("--bad", *bad, "bad set file");
    cmd->add_option("--tau", *tau, "node of T");
    cmd->add_option("--functional", *fn, "functional file")->required();
    cmd->add_option("--hm", *hm, "h_M order function file")->required();
    cmd->add_option("--nbits", *nbits, "number of trace bits");
    cmd->add_option("--out-prefix", *prefix, "write result trees to PREFIX<i>.tree");
    cmd->callback([=, &g] {
      const auto gamma = load_functional(*fn);
      const auto& sp = gamma.domain();
      const auto res = splitting::build_trace(load_tree(*tree, sp).tree, optional_set(*bad, sp),
                                              FString::parse(*tau), gamma, load_order_fn(*hm), *nbits);
      if (const auto* p = std::get_if<splitting::SplittingPair>(&res)) {
        write_family(*prefix, {{p->a0.tree.stem(), p->a1.tree.stem()}, {p->a0.tree, p->a1.tree}});
        emit(g,
             {{"verb", "trace"}, {"branch", "splitting"}, {"step", p->step}, {"a0", tree_json(p->a0.tree)},
              {"a1", tree_json(p->a1.tree)}},
             "splitting step " + std::to_string(p->step) + "\n");
        return;
      }
      const auto& t = std::get<splitting::Trace>(res);
      write_family(*prefix, {std::vector<FString>(t.s.size()), t.s});
      json sj = json::array();
      for (const auto& s : t.s) sj.push_back(tree_json(s));
      std::string text = "trace " + t.y.to_string() + " complete " + (t.complete ? "yes" : "no") + "\n";
      if (!t.note.empty()) text += "note " + t.note + "\n";
      emit(g,
           {{"verb", "trace"}, {"branch", "trace"}, {"y", t.y.to_string()}, {"y0_length", t.y0_length},
            {"complete", t.complete}, {"note", t.note}, {"s", sj}},
           text);
    });
  }
  {
    auto* cmd = app.add_subcommand("split-tree", "delayed-splitting subtree builder");
    auto tree = std::make_shared<std::string>();
    auto bad = std::make_shared<std::string>();
    auto sigma = std::make_shared<std::string>("e");
    auto fn = std::make_shared<std::string>();
    auto hs = std::make_shared<std::string>();
    auto hbw = std::make_shared<std::string>();
    auto hm = std::make_shared<std::string>();
    auto hb = std::make_shared<std::string>();
    auto levels = std::make_shared<std::vector<std::size_t>>();
    auto budget = std::make_shared<std::size_t>(0);
    auto blocks = std::make_shared<std::size_t>(1);
    auto out = std::make_shared<std::string>();
    auto dout = std::make_shared<std::string>();
    cmd->add_option("--tree", *tree, "ambient tree T")->required();
    cmd->add_option("--bad", *bad, "bad set file");
    cmd->add_option("--sigma", *sigma, "stem");
    cmd->add_option("--functional", *fn, "functional file")->required();
    cmd->add_option("--hs", *hs, "h_S width spec");
    cmd->add_option("--hb-width", *hbw, "h_B width spec");
    cmd->add_option("--hm", *hm, "h_M order function file");
    cmd->add_option("--hb", *hb, "h_B order function file");
    cmd->add_option("--levels", *levels, "splitting levels")->required();
    cmd->add_option("--depth-budget", *budget, "deepest level searched")->required();
    cmd->add_option("--blocks", *blocks, "splitting blocks to build");
    cmd->add_option("--out", *out, "write S here");
    cmd->add_option("--d-out", *dout, "write D here");
    cmd->callback([=, &g] {
      const bool widths = !hs->empty() || !hbw->empty();
      const bool fns = !hm->empty() || !hb->empty();
      if (widths == fns) throw ParseError("split-tree: give either --hs/--hb-width or --hm/--hb");
      const auto gamma = load_functional(*fn);
      const auto& sp = gamma.domain();
      const auto t = load_tree(*tree, sp).tree;
      const auto b = optional_set(*bad, sp);
      const auto s = FString::parse(*sigma);
      const auto res =
          widths ? splitting::build_splitting_tree(t, b, s, gamma, WidthSpec::parse(*hs), WidthSpec::parse(*hbw),
                                                   *levels, *budget, *blocks)
                 : splitting::build_splitting_tree(t, b, s, gamma, load_order_fn(*hm), load_order_fn(*hb),
                                                   *levels, *budget, *blocks);
      maybe_write(*out, io::format_tree(res.tree));
      maybe_write(*dout, io::format_set(res.d));
      emit_dot(g, res.tree, &gamma);
      const auto delayed = splitting::check_delayed_splitting(res, gamma);
      std::string text = "blocks " + std::to_string(res.blocks.size()) + " leaves " +
                         std::to_string(res.tree.leaves().size()) + " dead " +
                         std::to_string(res.d.elements().size()) + "\ndelayed " +
                         (delayed.ok() ? "ok" : delayed.to_string()) + "\n";
      if (res.exhausted) text += "exhausted " + res.note + "\n";
      emit(g,
           {{"verb", "split-tree"}, {"tree", tree_json(res.tree)},
            {"d", strings_json({res.d.elements().begin(), res.d.elements().end()})},
            {"h_s", res.h_s.to_string()}, {"blocks", res.blocks.size()}, {"exhausted", res.exhausted},
            {"note", res.note}, {"delayed_ok", delayed.ok()}},
           text);
    });
  }
  {
    auto* cmd = app.add_subcommand("gen-functional", "seeded monotone functional over --space");
    auto arity = std::make_shared<Symbol>(2);
    auto params = std::make_shared<generate::FunctionalParams>();
    auto injective = std::make_shared<bool>(false);
    auto out = std::make_shared<std::string>();
    cmd->add_option("--out-arity", *arity, "output alphabet size");
    cmd->add_option("--root-min", params->root_min, "fewest root symbols");
    cmd->add_option("--root-max", params->root_max, "most root symbols");
    cmd->add_option("--step-min", params->step_min, "fewest symbols added per level");
    cmd->add_option("--step-max", params->step_max, "most symbols added per level");
    cmd->add_flag("--injective", *injective, "sibling-distinct binary codes (ignores --seed)");
    cmd->add_option("--out", *out, "write the functional here");
    cmd->callback([=, &g] {
      std::optional<BoundedSpace> space;
      const auto& sp = g.need_space(space, "gen-functional");
      guard_space(sp);
      if (!*injective && !g.seed) throw ParseError("gen-functional: --seed is required");
      const auto f = *injective ? generate::injective_functional(sp)
                                : generate::random_functional(sp, *arity, *g.seed, *params);
      const auto text = io::format_functional(f);
      maybe_write(*out, text);
      emit(g, {{"verb", "gen-functional"}, {"functional", text}}, out->empty() ? text : "");
    });
  }
  {
    auto* cmd = app.add_subcommand("gen-allowance", "seeded valid splitting allowance");
    auto count = std::make_shared<std::size_t>(4);
    auto out = std::make_shared<std::string>();
    cmd->add_option("--levels", *count, "number of splitting levels (1..4)");
    cmd->add_option("--out", *out, "write the allowance here");
    cmd->callback([=, &g] {
      if (!g.seed) throw ParseError("gen-allowance: --seed is required");
      const auto text = io::format_allowance(generate::random_allowance(*g.seed, *count));
      maybe_write(*out, text);
      emit(g, {{"verb", "gen-allowance"}, {"allowance", text}}, out->empty() ? text : "");
    });
  }
}

}  // namespace bushy::cli
