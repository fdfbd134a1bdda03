#include <CLI11.hpp>

#include "bushy/forcing.hpp"
#include "cli_support.hpp"

namespace bushy::cli {

namespace {

StringSet optional_set(const std::string& path, const std::optional<BoundedSpace>& space) {
  return path.empty() ? StringSet::upward_closed({}) : load_set(path, space);
}

forcing::Trap parse_trap(const std::string& text) {
  forcing::Trap t;
  auto colon = text.find(':');
  auto num = [&](const std::string& s) {
    if (s.empty() || s.find_first_not_of("0123456789") != std::string::npos) {
      throw ParseError("trap must look like E or E:V, got '" + text + "'");
    }
    return std::stoull(s);
  };
  t.input = num(text.substr(0, colon));
  if (colon != std::string::npos) t.value = static_cast<Symbol>(num(text.substr(colon + 1)));
  return t;
}

std::string kurtz_row(const forcing::KurtzRecord& r) {
  auto opt = [](const std::optional<std::size_t>& v) { return v ? std::to_string(*v) : std::string("-"); };
  return std::to_string(r.round) + " " + opt(r.r) + " " + opt(r.s) + " " + io::format_rational(r.mu) + "\n";
}

std::string format_reduction(const forcing::ReductionTable& t) {
  std::string out;
  for (const auto& [key, v] : t.entries) {
    out += "entry " + key.first.to_string() + " " + std::to_string(key.second) + " " + std::to_string(v) + "\n";
  }
  for (const auto& [node, m] : t.reservations) out += "reserve " + node.to_string() + " " + std::to_string(m) + "\n";
  for (std::size_t s = 0; s < t.defaults.size(); ++s) {
    for (const auto& node : t.defaults[s]) out += "hold " + std::to_string(s) + " " + node.to_string() + "\n";
  }
  return out;
}

}  // namespace

void register_forcing(CLI::App& app, Globals& g) {
  {
    auto* cmd = app.add_subcommand("force-value", "force the m-th output symbol on a k-bushy tree");
    auto fn = std::make_shared<std::string>();
    auto stem = std::make_shared<std::string>("e");
    auto m = std::make_shared<std::size_t>(0);
    auto k = std::make_shared<Width>(2);
    auto avoid = std::make_shared<std::string>();
    auto out = std::make_shared<std::string>();
    cmd->add_option("--functional", *fn, "functional file")->required();
    cmd->add_option("--stem", *stem, "stem string");
    cmd->add_option("--input", *m, "output position m");
    cmd->add_option("--k", *k, "bushiness");
    cmd->add_option("--avoid", *avoid, "set file of strings to avoid");
    cmd->add_option("--witness", *out, "write the witness tree here");
    cmd->callback([=, &g] {
      const auto gamma = load_functional(*fn);
      const auto res = forcing::force_value(gamma, FString::parse(*stem), *m, *k,
                                            optional_set(*avoid, gamma.domain()));
      json rec = {{"verb", "force-value"}, {"forced", res.has_value()}};
      if (!res) return emit(g, rec, "none\n");
      rec["value"] = res->value;
      rec["witness"] = tree_json(res->witness.tree);
      maybe_write(*out, io::format_tree(res->witness.tree));
      emit_dot(g, res->witness.tree, &gamma);
      emit(g, rec, "value " + std::to_string(res->value) + "\n");
    });
  }
  {
    auto* cmd = app.add_subcommand("diag", "iterated diagonalization against a family");
    auto fns = std::make_shared<std::vector<std::string>>();
    auto traps = std::make_shared<std::vector<std::string>>();
    auto k = std::make_shared<Width>(2);
    auto stem = std::make_shared<std::string>("e");
    auto prefix = std::make_shared<std::string>();
    cmd->add_option("--functional", *fns, "functional files, in family order")->required();
    cmd->add_option("--trap", *traps, "per round: E or E:V")->required();
    cmd->add_option("--k", *k, "bushiness");
    cmd->add_option("--stem", *stem, "starting stem");
    cmd->add_option("--tree-prefix", *prefix, "write round witnesses to PREFIX<round>.tree");
    cmd->callback([=, &g] {
      std::vector<TTFunctional> family;
      for (const auto& p : *fns) family.push_back(load_functional(p));
      std::vector<forcing::Trap> tv;
      for (const auto& t : *traps) tv.push_back(parse_trap(t));
      const auto rounds = forcing::diagonalize_family(family, tv, *k, FString::parse(*stem));
      json rec = {{"verb", "diag"}, {"rounds", json::array()}};
      std::string text;
      for (const auto& r : rounds) {
        rec["rounds"].push_back({{"round", r.round},
                                 {"defeated", r.defeated},
                                 {"stem", r.stem.to_string()},
                                 {"value", r.value},
                                 {"witness", tree_json(r.witness.tree)}});
        text += "round " + std::to_string(r.round) + " defeated " + std::to_string(r.defeated) + " stem " +
                r.stem.to_string() + " value " + std::to_string(r.value) + "\n";
        if (!prefix->empty()) {
          io::write_file(*prefix + std::to_string(r.round) + ".tree", io::format_tree(r.witness.tree));
        }
      }
      if (!rounds.empty()) emit_dot(g, rounds.back().witness.tree);
      emit(g, rec, text);
    });
  }
  {
    auto* cmd = app.add_subcommand("partiality", "divergence or convergence case split at tau");
    auto fn = std::make_shared<std::string>();
    auto tree = std::make_shared<std::string>();
    auto bad = std::make_shared<std::string>();
    auto tau = std::make_shared<std::string>("e");
    auto x = std::make_shared<std::size_t>(0);
    auto ws = std::make_shared<std::string>();
    auto wb = std::make_shared<std::string>();
    auto out = std::make_shared<std::string>();
    cmd->add_option("--functional", *fn, "functional file")->required();
    cmd->add_option("--tree", *tree, "tree file")->required();
    cmd->add_option("--bad", *bad, "bad set file");
    cmd->add_option("--tau", *tau, "node of the tree");
    cmd->add_option("--x", *x, "output position");
    cmd->add_option("--w-small", *ws, "width for the smallness test")->required();
    cmd->add_option("--w-big", *wb, "width of the convergence witness (default half)");
    cmd->add_option("--out", *out, "write the new bad set or the witness here");
    cmd->callback([=, &g] {
      const auto gamma = load_functional(*fn);
      const auto t = load_tree(*tree, gamma.domain()).tree;
      std::optional<WidthSpec> big_w;
      if (!wb->empty()) big_w = WidthSpec::parse(*wb);
      const auto res = forcing::partiality_split(gamma, t, optional_set(*bad, gamma.domain()),
                                                 FString::parse(*tau), *x, WidthSpec::parse(*ws), big_w);
      if (const auto* d = std::get_if<forcing::DivergenceCondition>(&res)) {
        maybe_write(*out, io::format_set(d->bad));
        emit(g,
             {{"verb", "partiality"},
              {"branch", "diverge"},
              {"tau", d->tau.to_string()},
              {"bad", strings_json({d->bad.elements().begin(), d->bad.elements().end()})}},
             "diverge\n");
        return;
      }
      const auto& w = std::get<BigWitness>(res);
      maybe_write(*out, io::format_tree(w.tree));
      emit_dot(g, w.tree, &gamma);
      emit(g, {{"verb", "partiality"}, {"branch", "converge"}, {"witness", tree_json(w.tree)}}, "converge\n");
    });
  }
  {
    auto* cmd = app.add_subcommand("totalize", "regular subtree on which the functional keeps converging");
    auto fn = std::make_shared<std::string>();
    auto tree = std::make_shared<std::string>();
    auto bad = std::make_shared<std::string>();
    auto sigma = std::make_shared<std::string>("e");
    auto rounds = std::make_shared<std::size_t>(1);
    auto out = std::make_shared<std::string>();
    cmd->add_option("--functional", *fn, "functional file")->required();
    cmd->add_option("--tree", *tree, "exactly bushy tree file")->required();
    cmd->add_option("--bad", *bad, "bad set file");
    cmd->add_option("--sigma", *sigma, "stem of the new tree");
    cmd->add_option("--rounds", *rounds, "number of output symbols to secure");
    cmd->add_option("--out", *out, "write the subtree here");
    cmd->callback([=, &g] {
      const auto gamma = load_functional(*fn);
      const auto t = load_tree(*tree, gamma.domain()).tree;
      const auto res = forcing::build_total_subtree(t, optional_set(*bad, gamma.domain()), gamma,
                                                    FString::parse(*sigma), *rounds);
      if (const auto* p = std::get_if<forcing::PartialityWitness>(&res)) {
        emit(g, {{"verb", "totalize"}, {"total", false}, {"tau", p->tau.to_string()}, {"x", p->x}},
             "partial " + p->tau.to_string() + " " + std::to_string(p->x) + "\n");
        return;
      }
      const auto& s = std::get<forcing::TotalSubtree>(res);
      maybe_write(*out, io::format_tree(s.tree));
      emit_dot(g, s.tree, &gamma);
      std::string lv;
      for (auto l : s.levels) lv += " " + std::to_string(l);
      emit(g,
           {{"verb", "totalize"}, {"total", true}, {"levels", s.levels}, {"width", s.width.to_string()},
            {"tree", tree_json(s.tree)}},
           "total levels" + lv + " width " + s.width.to_string() + "\n");
    });
  }
  {
    auto* cmd = app.add_subcommand("kurtz-step", "one measure-reduction round");
    auto fn = std::make_shared<std::string>();
    auto tree = std::make_shared<std::string>();
    auto out = std::make_shared<std::string>();
    cmd->add_option("--functional", *fn, "binary-output functional file")->required();
    cmd->add_option("--tree", *tree, "regular 2-bushy tree file");
    cmd->add_option("--out", *out, "write the next tree here");
    cmd->callback([=, &g] {
      const auto gamma = load_functional(*fn);
      const auto s = tree->empty() ? BushyTree::singleton({}, WidthSpec::constant(2))
                                   : load_tree(*tree, gamma.domain()).tree;
      const auto st = forcing::kurtz_step(gamma, s);
      maybe_write(*out, io::format_tree(st.next));
      emit_dot(g, st.next, &gamma);
      emit(g,
           {{"verb", "kurtz-step"}, {"r", st.r}, {"s", st.s}, {"m", st.m},
            {"pad_level", st.pad_level}, {"force_level", st.force_level},
            {"mu_before", io::format_rational(st.mu_before)},
            {"mu_after", io::format_rational(st.mu_after)},
            {"mu_excluded", io::format_rational(st.mu_excluded)}, {"tree", tree_json(st.next)}},
           "r " + std::to_string(st.r) + " s " + std::to_string(st.s) + " m " + std::to_string(st.m) +
               "\nmu_before " + io::format_rational(st.mu_before) + "\nmu_after " +
               io::format_rational(st.mu_after) + "\nmu_excluded " + io::format_rational(st.mu_excluded) + "\n");
    });
  }
  {
    auto* cmd = app.add_subcommand("kurtz-run", "iterate the measure-reduction round");
    auto fn = std::make_shared<std::string>();
    auto rounds = std::make_shared<std::size_t>(1);
    auto stem = std::make_shared<std::string>("e");
    auto trace = std::make_shared<std::string>();
    auto prefix = std::make_shared<std::string>();
    cmd->add_option("--functional", *fn, "binary-output functional file")->required();
    cmd->add_option("--rounds", *rounds, "number of rounds");
    cmd->add_option("--stem", *stem, "starting stem");
    cmd->add_option("--trace", *trace, "write 'round r s mu' rows here");
    cmd->add_option("--tree-prefix", *prefix, "write S_i to PREFIX<i>.tree");
    cmd->callback([=, &g] {
      const auto gamma = load_functional(*fn);
      const auto tr = forcing::kurtz_run(gamma, *rounds, FString::parse(*stem));
      std::string rows;
      json rec = {{"verb", "kurtz-run"}, {"truncated", tr.truncated}, {"records", json::array()}};
      for (const auto& r : tr.records) {
        rows += kurtz_row(r);
        rec["records"].push_back({{"round", r.round},
                                  {"r", r.r ? json(*r.r) : json()},
                                  {"s", r.s ? json(*r.s) : json()},
                                  {"mu", io::format_rational(r.mu)}});
        if (!prefix->empty()) io::write_file(*prefix + std::to_string(r.round) + ".tree", io::format_tree(r.tree));
      }
      if (tr.truncated) rec["note"] = tr.note;
      maybe_write(*trace, rows);
      if (!tr.records.empty()) emit_dot(g, tr.records.back().tree, &gamma);
      std::string text = trace->empty() ? rows : "rounds " + std::to_string(tr.records.size() - 1) + "\n";
      if (tr.truncated) text += "truncated " + tr.note + "\n";
      emit(g, rec, text);
    });
  }
  {
    auto* cmd = app.add_subcommand("majorize", "bound the i-th output on a bushy subtree");
    auto fn = std::make_shared<std::string>();
    auto tree = std::make_shared<std::string>();
    auto bad = std::make_shared<std::string>();
    auto i = std::make_shared<std::size_t>(0);
    auto out = std::make_shared<std::string>();
    cmd->add_option("--functional", *fn, "functional file")->required();
    cmd->add_option("--tree", *tree, "exactly bushy tree file")->required();
    cmd->add_option("--bad", *bad, "bad set file");
    cmd->add_option("--i", *i, "output position");
    cmd->add_option("--witness", *out, "write the witness here");
    cmd->callback([=, &g] {
      const auto xi = load_functional(*fn);
      const auto t = load_tree(*tree, xi.domain()).tree;
      const auto res = forcing::majorize(t, optional_set(*bad, xi.domain()), xi, *i);
      maybe_write(*out, io::format_tree(res.witness));
      emit_dot(g, res.witness, &xi);
      emit(g, {{"verb", "majorize"}, {"max", res.value}, {"witness", tree_json(res.witness)}},
           "max " + std::to_string(res.value) + "\n");
    });
  }
  {
    auto* cmd = app.add_subcommand("psi", "stage simulation of the reduction construction");
    auto phis = std::make_shared<std::string>();
    auto stages = std::make_shared<std::uint64_t>(0);
    auto probes = std::make_shared<std::vector<std::string>>();
    auto out = std::make_shared<std::string>();
    cmd->add_option("--phis", *phis, "partial function table file")->required();
    cmd->add_option("--stages", *stages, "stage budget")->required();
    cmd->add_option("--probe", *probes, "probe strings")->required();
    cmd->add_option("--out", *out, "write the reduction table here");
    cmd->callback([=, &g] {
      const auto table = io::parse_phis(io::read_file(*phis));
      std::vector<FString> pv;
      for (const auto& p : *probes) pv.push_back(FString::parse(p));
      const auto res = forcing::psi_simulate(table, *stages, pv);
      maybe_write(*out, format_reduction(res.psi));
      const auto consistency = res.psi.check_consistency();
      json rec = {{"verb", "psi"}, {"consistent", consistency.ok()}, {"waiting", res.report.waiting},
                  {"probes", json::array()}};
      std::string text = std::string("consistent ") + (consistency.ok() ? "yes" : "no") + "\n";
      for (const auto& p : res.report.probes) {
        std::size_t defined = 0;
        for (const auto& v : p.values) defined += v.has_value();
        json ids = json::array();
        for (const auto& id : p.identities) {
          ids.push_back({{"node", id.node.to_string()}, {"n", id.n}, {"m", id.m}, {"phi", id.phi}, {"psi", id.psi}});
        }
        rec["probes"].push_back({{"probe", p.probe.to_string()},
                                 {"halted", strings_json(p.halted)},
                                 {"defined", defined},
                                 {"identities", ids}});
        text += "probe " + p.probe.to_string() + " halted " + std::to_string(p.halted.size()) + " defined " +
                std::to_string(defined) + "/" + std::to_string(p.values.size()) + " identities " +
                std::to_string(p.identities.size()) + "\n";
      }
      emit(g, rec, text);
    });
  }
}

}  // namespace bushy::cli
