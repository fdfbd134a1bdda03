#include <map>

#include <CLI11.hpp>

#include "bushy/refcheck.hpp"
#include "cli_support.hpp"

namespace bushy::cli {

namespace {

WidthSpec width_of(std::optional<Width> n, const std::string& spec) {
  if (n && !spec.empty()) throw ParseError("--n and --width are mutually exclusive");
  if (n) return WidthSpec::constant(*n);
  if (!spec.empty()) return WidthSpec::parse(spec);
  throw ParseError("one of --n or --width is required");
}

}  // namespace

void register_bigness(CLI::App& app, Globals& g) {
  {
    auto* cmd = app.add_subcommand("big", "decide width-bigness of a set above a stem");
    auto set_path = std::make_shared<std::string>();
    auto stem = std::make_shared<std::string>("e");
    auto n = std::make_shared<std::optional<Width>>();
    auto width = std::make_shared<std::string>();
    auto out = std::make_shared<std::string>();
    cmd->add_option("--set", *set_path, "set file")->required();
    cmd->add_option("--stem", *stem, "stem string");
    cmd->add_option("--n", *n, "constant width");
    cmd->add_option("--width", *width, "width spec, e.g. 3 or [2,3,3]");
    cmd->add_option("--witness", *out, "write the witness tree here");
    cmd->callback([=, &g] {
      auto space = g.space();
      if (space) guard_space(*space);
      const auto b = load_set(*set_path, space);
      const auto s = FString::parse(*stem);
      const auto w = width_of(*n, *width);
      auto res = bigness::is_big(b, s, w, space);
      json rec = {{"verb", "big"}, {"big", res.has_value()}};
      std::string text = res ? "big\n" : "small\n";
      if (res) {
        rec["witness"] = tree_json(res->tree);
        maybe_write(*out, io::format_tree(res->tree, *set_path));
        emit_dot(g, res->tree);
        text += "leaves " + std::to_string(res->tree.leaves().size()) + "\n";
      }
      emit(g, rec, text);
    });
  }
  {
    auto* cmd = app.add_subcommand("closure", "k-closure of a set inside --space");
    auto set_path = std::make_shared<std::string>();
    auto k = std::make_shared<Width>(2);
    auto out = std::make_shared<std::string>();
    cmd->add_option("--set", *set_path, "set file")->required();
    cmd->add_option("--k", *k, "closure width")->required();
    cmd->add_option("--out", *out, "write the closure here");
    cmd->callback([=, &g] {
      std::optional<BoundedSpace> space;
      const auto& sp = g.need_space(space, "closure");
      guard_space(sp);
      const auto c = bigness::k_closure(load_set(*set_path, space), *k, sp);
      const auto text = io::format_set(c);
      maybe_write(*out, text);
      json rec = {{"verb", "closure"},
                  {"mode", c.upward() ? "upclosed" : "explicit"},
                  {"elements", strings_json({c.elements().begin(), c.elements().end()})}};
      emit(g, rec, out->empty() ? text : "elements " + std::to_string(c.elements().size()) + "\n");
    });
  }
  {
    auto* cmd = app.add_subcommand("concat", "glue extension witnesses onto the leaves of a base");
    auto base = std::make_shared<std::string>();
    auto exts = std::make_shared<std::vector<std::string>>();
    auto out = std::make_shared<std::string>();
    cmd->add_option("--base", *base, "base tree file")->required();
    cmd->add_option("--ext", *exts, "extension tree files (one per base leaf)")->required();
    cmd->add_option("--out", *out, "write the glued tree here");
    cmd->callback([=, &g] {
      auto space = g.space();
      const auto bt = load_tree(*base, space).tree;
      const auto leaves = bt.leaves();
      BigWitness bw{bt, StringSet::explicit_set({leaves.begin(), leaves.end()})};
      std::map<FString, BigWitness> ext;
      for (const auto& path : *exts) {
        auto tf = load_tree(path, space);
        auto el = tf.tree.leaves();
        StringSet target = tf.leaves_in ? load_set(*tf.leaves_in, space)
                                        : StringSet::explicit_set({el.begin(), el.end()});
        const auto stem = tf.tree.stem();
        if (!ext.emplace(stem, BigWitness{std::move(tf.tree), std::move(target)}).second) {
          throw DomainError("concat: two extensions above " + stem.to_string());
        }
      }
      const auto glued = bigness::concatenate(bw, ext);
      maybe_write(*out, io::format_tree(glued.tree));
      emit_dot(g, glued.tree);
      emit(g, {{"verb", "concat"}, {"tree", tree_json(glued.tree)}},
           out->empty() ? io::format_tree(glued.tree)
                        : "leaves " + std::to_string(glued.tree.leaves().size()) + "\n");
    });
  }
  {
    auto* cmd = app.add_subcommand("split-union", "backward labelling on an (m+n-1)-bushy tree");
    auto tree = std::make_shared<std::string>();
    auto lb = std::make_shared<std::string>();
    auto lc = std::make_shared<std::string>();
    auto m = std::make_shared<Width>(1);
    auto n = std::make_shared<Width>(1);
    auto out = std::make_shared<std::string>();
    cmd->add_option("--tree", *tree, "tree file")->required();
    cmd->add_option("--label-b", *lb, "set file of B-labelled leaves")->required();
    cmd->add_option("--label-c", *lc, "set file of C-labelled leaves")->required();
    cmd->add_option("--m", *m, "B width")->required();
    cmd->add_option("--n", *n, "C width")->required();
    cmd->add_option("--out", *out, "write the winning witness here");
    cmd->callback([=, &g] {
      auto space = g.space();
      const auto t = load_tree(*tree, space).tree;
      const auto b = load_set(*lb, space);
      const auto c = load_set(*lc, space);
      const auto res = bigness::union_label_split(t, b.elements(), c.elements(), *m, *n);
      const char* side = res.side == bigness::LabelSplit::Side::B ? "B" : "C";
      maybe_write(*out, io::format_tree(res.witness.tree, side[0] == 'B' ? *lb : *lc));
      emit_dot(g, res.witness.tree);
      emit(g, {{"verb", "split-union"}, {"side", side}, {"witness", tree_json(res.witness.tree)}},
           std::string(side) + "\n");
    });
  }
  {
    auto* cmd = app.add_subcommand("oracle", "brute-force reference checks");
    cmd->group("");  // hidden
    auto set_path = std::make_shared<std::string>();
    auto stem = std::make_shared<std::string>("e");
    auto n = std::make_shared<Width>(2);
    auto cyl = std::make_shared<std::string>();
    auto depth = std::make_shared<std::size_t>(0);
    cmd->add_option("--set", *set_path, "set file for the bigness oracle");
    cmd->add_option("--stem", *stem, "stem string");
    cmd->add_option("--n", *n, "constant width");
    cmd->add_option("--cylinders", *cyl, "set file of binary cylinders for the measure oracle");
    cmd->add_option("--depth", *depth, "refinement depth for the measure oracle");
    cmd->callback([=, &g] {
      if (set_path->empty() == cyl->empty()) throw ParseError("oracle: give exactly one of --set or --cylinders");
      refcheck::EnumBudget budget;
      budget.max_nodes = max_nodes();
      if (!cyl->empty()) {
        const auto c = load_set(*cyl, std::nullopt);
        std::vector<FString> v(c.elements().begin(), c.elements().end());
        const auto mu = refcheck::measure_oracle(v, *depth);
        emit(g, {{"verb", "oracle"}, {"measure", io::format_rational(mu)}}, io::format_rational(mu) + "\n");
        return;
      }
      std::optional<BoundedSpace> space;
      const auto& sp = g.need_space(space, "oracle");
      guard_space(sp);
      const auto b = load_set(*set_path, space);
      const auto catalog = refcheck::enumerate_bushy(sp, FString::parse(*stem), *n, budget);
      const bool big = refcheck::is_big_oracle(b, catalog);
      emit(g, {{"verb", "oracle"}, {"big", big}, {"trees", catalog.size()}},
           std::string(big ? "big" : "small") + "\ntrees " + std::to_string(catalog.size()) + "\n");
    });
  }
}

}  // namespace bushy::cli
