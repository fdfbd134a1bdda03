#include <doctest.h>

#include "bushy/bigness.hpp"
#include "bushy/generate.hpp"
#include "bushy/io.hpp"
#include "bushy/splitting.hpp"
#include "oracle.hpp"

using namespace bushy;
using namespace bushy::splitting;

namespace {

DyadicOrderFn fn(std::vector<int> e) {
  std::vector<BigInt> v(e.begin(), e.end());
  return DyadicOrderFn(std::move(v));
}

const StringSet kNone = StringSet::upward_closed({});

bool leaves_satisfy(const BushyTree& t, const std::function<bool(const FString&)>& p) {
  for (const auto& l : t.leaves()) {
    if (!p(l)) return false;
  }
  return true;
}

bool bushy_at(const BushyTree& t, const WidthSpec& w) { return validate_tree(t.with_width(w)).ok(); }

}  // namespace

TEST_CASE("growth of an order function") {
  const auto g = fn({1, 1, 2, 2});
  auto gr = growth(g, 3);
  CHECK(gr.log2_w == 4);
  CHECK(*gr.w == 16);
  CHECK(*gr.r_exponent == 51);
  gr = growth(g, 0);
  CHECK(*gr.w == 1);
  CHECK(*gr.r_exponent == 6);
  gr = growth(DyadicOrderFn::constant(1, 11), 10);
  CHECK(*gr.w == 1024);
  CHECK(*gr.r_exponent == 3075);
}

TEST_CASE("order function shape and parsing") {
  CHECK_THROWS_AS(fn({2, 1}), DomainError);
  CHECK_THROWS_AS(fn({0, 1}), DomainError);
  const auto h = fn({1, 3, 3, 7});
  CHECK(DyadicOrderFn::parse(h.to_string()) == h);
  CHECK_THROWS_AS(DyadicOrderFn::parse("exp: 1 x"), ParseError);
}

TEST_CASE("tower comparison") {
  // x >= i * (3 + 3 * 2^k)
  CHECK(exponent_at_least(51, 1, 4));
  CHECK_FALSE(exponent_at_least(50, 1, 4));
  CHECK(exponent_at_least(102, 2, 4));
  CHECK_FALSE(exponent_at_least(101, 2, 4));
  CHECK(exponent_at_least(0, 0, 1000000000));
  CHECK_FALSE(exponent_at_least(BigInt(1) << 200, 1, 1000000000));
  for (int x = 0; x < 80; ++x) {
    for (int i = 0; i < 4; ++i) {
      for (int k = 0; k < 4; ++k) CHECK(exponent_at_least(x, i, k) == (x >= i * (3 + 3 * (1 << k))));
    }
  }
}

TEST_CASE("middle and scale") {
  CHECK(middle(fn({6}), fn({2})) == fn({4}));
  CHECK(middle(fn({5}), fn({2})) == fn({3}));
  const auto h = fn({2, 4, 9});
  CHECK(middle(h, h) == h);

  CHECK(scale(h, 0) == h);
  CHECK(scale(fn({2}), -4) == fn({1}));
  CHECK(to_width(scale(fn({2}), -4)).at(0) == 2);
  for (int c = 0; c < 12; ++c) {
    const auto back = scale(scale(h, -c), c);
    for (std::size_t n = 0; n < h.length(); ++n) CHECK(back.exponent(n) >= h.exponent(n));
  }

  const auto w = to_width(fn({3, 5}), 2);
  CHECK(w.at(0) == 2);
  CHECK(w.at(1) == 8);
  CHECK(to_width(fn({3}), 7).at(0) == 1);
}

TEST_CASE("allowance conditions") {
  for (std::uint64_t seed = 0; seed < 20; ++seed) {
    for (std::size_t count = 1; count <= 4; ++count) {
      const auto a = generate::random_allowance(seed, count);
      INFO("seed " << seed << " levels " << count);
      CHECK(check_allows_splitting(a).ok());
      CHECK(a.levels.size() == count);
    }
  }
  auto a = generate::random_allowance(3, 2);
  auto same = a;
  same.h = same.g;
  CHECK_FALSE(check_allows_splitting(same).ok());

  auto low = a;
  auto e = low.h.exponents();
  e[low.n] = low.g.exponent(low.n) - 1;
  low.h = DyadicOrderFn::unchecked(e);
  CHECK_FALSE(check_allows_splitting(low).ok());
}

TEST_CASE("allowance middle function") {
  for (std::uint64_t seed = 0; seed < 20; ++seed) {
    const auto a = generate::random_allowance(seed, 4);
    const auto m = middle(a.h, a.g);
    std::vector<std::size_t> even;
    for (std::size_t i = 2; i < a.levels.size(); i += 2) even.push_back(a.levels[i]);
    INFO("seed " << seed);
    CHECK(check_allows_splitting(SplitAllowance{a.h, m, a.n, even}).ok());
    CHECK(check_allows_splitting(SplitAllowance{m, a.g, a.n, even}).ok());
  }
}

TEST_CASE("derived subtree width") {
  const auto hm = fn({4, 4, 9, 9});
  const auto d0 = derive_hS(hm, fn({1, 1, 1, 1}), {});
  CHECK(d0.h_s == hm);
  CHECK(d0.chain.ok());

  for (std::uint64_t seed = 0; seed < 20; ++seed) {
    const auto a = generate::random_allowance(seed, 3);
    INFO("seed " << seed);
    const auto d = derive_hS(a.h, a.g, a.levels);
    CHECK(d.chain.ok());
    CHECK(d.h_s.length() == a.h.length());
    // Below the first level nothing changes.
    for (std::size_t n = 0; n < a.levels.front(); ++n) CHECK(d.h_s.exponent(n) == a.h.exponent(n));

    bool rejected = false;
    try {
      rejected = !derive_hS(a.h, a.h, a.levels).chain.ok();
    } catch (const DomainError&) {
      rejected = true;
    }
    CHECK(rejected);
  }
}

TEST_CASE("splitting pairs") {
  const auto sp = BoundedSpace::parse("4/2");
  const auto inj = generate::injective_functional(sp);
  CHECK(is_splitting_pair({FString{0}}, {FString{1}}, inj));
  CHECK(is_splitting_pair({FString{0, 1}, FString{0, 2}}, {FString{2, 0}, FString{3}}, inj));
  CHECK_FALSE(is_splitting_pair({FString{0}}, {FString{0, 1}}, inj));
  CHECK_FALSE(is_splitting_pair({FString{1}, FString{2}}, {FString{}}, inj));
  CHECK(is_splitting_pair(std::vector<FString>{}, {FString{}}, inj));
}

namespace {

struct FindInstance {
  BoundedSpace space;
  TTFunctional gamma;
  BushyTree t;
  BushyTree a;
  std::map<FString, std::pair<BushyTree, BushyTree>> pairs;
  std::size_t v = 0;
  FString alpha, beta;
};

// A 4-bushy above alpha to level 2, 4-bushy splitting pairs above its leaves,
// and leaves of B at depth b_depth above beta.
FindInstance find_instance(std::uint64_t seed) {
  auto space = BoundedSpace::parse("8/4");
  auto gamma = generate::balanced_functional(space, seed);
  const auto t = BushyTree::full(space, FString{});
  generate::Rng rng(seed);
  const auto a0 = static_cast<Symbol>(rng.below(8));
  const auto b0 = static_cast<Symbol>((a0 + 1 + rng.below(7)) % 8);
  FindInstance in{space, gamma, t, BushyTree::singleton(FString{a0}, WidthSpec::constant(4)), {}, 0,
                  FString{a0}, FString{b0}};
  in.a = *bigness::big_within(t, in.alpha, [](const FString& s) { return s.size() == 2; },
                              WidthSpec::constant(4));
  for (const auto& l : in.a.leaves()) {
    auto p = local_splitting(t, kNone, gamma, l, WidthSpec::constant(4));
    REQUIRE(p);
    for (const auto* side : {&p->first, &p->second}) {
      for (const auto& x : side->leaves()) in.v = std::max(in.v, gamma.at(x).size());
    }
    in.pairs.emplace(l, std::move(*p));
  }
  return in;
}

}  // namespace

TEST_CASE("find a splitting") {
  const WidthSpec g = WidthSpec::constant(1), h = WidthSpec::constant(2);
  for (std::uint64_t seed = 0; seed < 12; ++seed) {
    INFO("seed " << seed);
    auto in = find_instance(seed);
    const auto b = *bigness::big_within(in.t, in.beta, [](const FString& s) { return s.size() == 4; },
                                        WidthSpec::constant(8));
    const auto res = find_splitting(in.a, in.pairs, b, in.gamma, g, h);
    CHECK(res.rounds <= in.v);
    CHECK(res.which >= 1);
    CHECK(res.which <= 3);
    CHECK(is_splitting_pair(res.a.tree, res.b.tree, in.gamma));
    CHECK(res.a.tree.stem() == in.alpha);
    CHECK(res.b.tree.stem() == in.beta);
    CHECK(bushy_at(res.a.tree, g));
    CHECK(bushy_at(res.b.tree, h));
    std::set<FString> aprime;
    for (const auto& [leaf, p] : in.pairs) {
      for (const auto& x : p.first.leaves()) aprime.insert(x);
      for (const auto& x : p.second.leaves()) aprime.insert(x);
    }
    const auto bl = b.leaves();
    CHECK(leaves_satisfy(res.a.tree, [&](const FString& s) { return aprime.count(s) > 0; }));
    CHECK(leaves_satisfy(res.b.tree, [&](const FString& s) {
      return std::find(bl.begin(), bl.end(), s) != bl.end();
    }));
    CHECK(bigness::is_big(res.a.target, in.alpha, g, in.space));
    CHECK(bigness::is_big(res.b.target, in.beta, h, in.space));
  }

  auto in = find_instance(0);
  const auto shallow = *bigness::big_within(in.t, in.beta, [](const FString& s) { return s.size() == 3; },
                                            WidthSpec::constant(8));
  CHECK_THROWS_AS(find_splitting(in.a, in.pairs, shallow, in.gamma, g, h), DomainError);
  auto missing = in.pairs;
  missing.erase(missing.begin());
  const auto b = *bigness::big_within(in.t, in.beta, [](const FString& s) { return s.size() == 4; },
                                      WidthSpec::constant(8));
  CHECK_THROWS_AS(find_splitting(in.a, missing, b, in.gamma, g, h), DomainError);
  CHECK_THROWS_AS(find_splitting(in.a, in.pairs, b, in.gamma, WidthSpec::constant(2), h), DomainError);
}

TEST_CASE("local splitting") {
  const auto sp = BoundedSpace::parse("4/3");
  const auto t = BushyTree::full(sp, FString{});
  const auto bal = generate::balanced_functional(sp, 9);
  const auto p = local_splitting(t, kNone, bal, FString{1}, WidthSpec::constant(2));
  REQUIRE(p);
  CHECK(is_splitting_pair(p->first, p->second, bal));
  CHECK_FALSE(local_splitting(t, kNone, bal, FString{1}, WidthSpec::constant(3)));
  std::map<FString, FString> flat;
  for (const auto& s : sp.all_strings()) flat.emplace(s, FString{});
  CHECK_FALSE(local_splitting(t, kNone, TTFunctional(sp, 2, flat), FString{}, WidthSpec::constant(1)));
}

TEST_CASE("extend a splitting family") {
  const auto sp = BoundedSpace::parse("16/3");
  const auto t = BushyTree::full(sp, FString{});
  const auto hm = DyadicOrderFn::constant(7, 4);
  for (std::uint64_t seed = 0; seed < 3; ++seed) {
    INFO("seed " << seed);
    const auto gamma = generate::balanced_functional(sp, seed);
    SplitFamily f0{{FString{0}}, {BushyTree::singleton(FString{0}, WidthSpec::constant(1))}};
    const auto e1 = extend_family(f0, FString{5}, t, kNone, gamma, hm, 1);
    CHECK(e1.member_width == to_width(hm, 6));
    CHECK(e1.family.roots.size() == 2);
    CHECK(verify_family(e1.family, gamma, e1.member_width).ok());

    // Two singleton members with disagreeing outputs, then a third root.
    std::vector<FString> roots;
    for (Symbol c = 0; c < 16 && roots.size() < 2; ++c) {
      if (roots.empty() || gamma.at(FString{c}) != gamma.at(roots[0])) roots.push_back(FString{c});
    }
    const FString third{static_cast<Symbol>(roots[1].back() + 1)};
    SplitFamily f1{roots,
                   {BushyTree::singleton(roots[0], WidthSpec::constant(1)),
                    BushyTree::singleton(roots[1], WidthSpec::constant(1))}};
    REQUIRE(verify_family(f1, gamma, WidthSpec::constant(1)).ok());
    const auto e2 = extend_family(f1, third, t, kNone, gamma, hm, 1);
    CHECK(e2.family.roots.size() == 3);
    CHECK(e2.member_width == to_width(hm, 9));
    CHECK(verify_family(e2.family, gamma, e2.member_width).ok());
    for (std::size_t i = 0; i < 3; ++i) {
      for (std::size_t j = i + 1; j < 3; ++j) {
        CHECK(is_splitting_pair(e2.family.witnesses[i], e2.family.witnesses[j], gamma));
      }
    }
  }
  const auto gamma = generate::balanced_functional(sp, 0);
  SplitFamily f0{{FString{0}}, {BushyTree::singleton(FString{0}, WidthSpec::constant(1))}};
  CHECK_THROWS_AS(extend_family(f0, FString{5, 1}, t, kNone, gamma, hm, 1), DomainError);
  CHECK_THROWS_AS(extend_family(f0, FString{5}, t, StringSet::upward_closed({FString{5}}), gamma, hm, 1),
                  DomainError);
  CHECK_THROWS(extend_family(f0, FString{5}, t, kNone, gamma, hm, 1, DyadicOrderFn::constant(1, 4), true));
  CHECK_FALSE(extend_family(f0, FString{5}, t, kNone, gamma, hm, 1, DyadicOrderFn::constant(1, 4)).notes.empty());
}

TEST_CASE("trace or splitting") {
  const auto sp = BoundedSpace::parse("8/3");
  const auto t = BushyTree::full(sp, FString{});
  const auto hm = DyadicOrderFn::constant(4, 4);
  const auto inj = generate::injective_functional(sp);
  auto out = build_trace(t, kNone, FString{}, inj, hm, 2);
  REQUIRE(std::holds_alternative<SplittingPair>(out));
  const auto& pair = std::get<SplittingPair>(out);
  CHECK(pair.step == 0);
  CHECK(is_splitting_pair(pair.a0.tree, pair.a1.tree, inj));

  std::map<FString, FString> z;
  for (const auto& s : sp.all_strings()) z.emplace(s, FString(std::vector<Symbol>(s.size(), 0)));
  const TTFunctional zeros(sp, 2, z);
  out = build_trace(t, kNone, FString{}, zeros, hm, 2);
  REQUIRE(std::holds_alternative<Trace>(out));
  const auto& tr = std::get<Trace>(out);
  CHECK(tr.complete);
  CHECK(tr.y == FString{0, 0});
  REQUIRE(tr.s.size() == 3);
  CHECK(tr.s[0].nodes().size() == 1);
  for (std::size_t i = 1; i < tr.s.size(); ++i) {
    const auto want = tr.y.prefix(tr.y0_length + i);
    CHECK(leaves_satisfy(tr.s[i], [&](const FString& x) { return want.is_prefix_of(zeros.at(x)); }));
  }
  // Outputs never reach the requested length.
  out = build_trace(t, kNone, FString{}, zeros, hm, 5);
  REQUIRE(std::holds_alternative<Trace>(out));
  CHECK_FALSE(std::get<Trace>(out).complete);
}

TEST_CASE("delayed splitting tree") {
  const auto sp = BoundedSpace::parse("4/4");
  const auto t = BushyTree::full(sp, FString{});
  const auto inj = generate::injective_functional(sp);
  const auto w2 = WidthSpec::constant(2);
  auto st = build_splitting_tree(t, kNone, FString{}, inj, w2, w2, {1, 2}, 4);
  CHECK(st.blocks.size() == 1);
  CHECK(st.d.elements().empty());
  CHECK(bushy_at(st.tree, w2));
  CHECK(check_delayed_splitting(st, inj).ok());
  CHECK_FALSE(union_big(st.d, kNone, FString{}, WidthSpec::constant(4)));

  std::set<FString> blocked;
  for (Symbol c = 0; c < 4; ++c) blocked.insert(FString{0, c});
  const auto b = StringSet::upward_closed(blocked);
  st = build_splitting_tree(t, b, FString{}, inj, w2, w2, {1, 2}, 4);
  CHECK(st.d.contains(FString{0}));
  CHECK(check_delayed_splitting(st, inj).ok());
  CHECK_FALSE(union_big(st.d, b, FString{}, WidthSpec::constant(4)));

  CHECK_THROWS_AS(build_splitting_tree(t, kNone, FString{}, inj, w2, w2, {2, 1}, 4), DomainError);
  CHECK_THROWS_AS(build_splitting_tree(t, b, FString{0, 1}, inj, w2, w2, {3}, 4), DomainError);

  // A tree that breaks delayed splitting is caught by the scan.
  std::map<FString, FString> z;
  for (const auto& s : sp.all_strings()) z.emplace(s, FString{});
  SplitTree fake{BushyTree::full(BoundedSpace::parse("2/2"), FString{}), kNone, w2, {{FString{}, 1, 2}}};
  CHECK_FALSE(check_delayed_splitting(fake, TTFunctional(sp, 2, z)).ok());
}

TEST_CASE("io round trips") {
  const auto sp = BoundedSpace::parse("3/2");
  const auto f = generate::random_functional(sp, 2, 4);
  CHECK(io::parse_functional(io::format_functional(f)).table() == f.table());
  const auto s = StringSet::upward_closed({FString{0, 1}, FString{2}});
  CHECK(io::parse_set(io::format_set(s)).elements() == s.elements());
  CHECK(io::parse_set(io::format_set(s)).upward());
  const auto tr = BushyTree::full(sp, FString{1});
  const auto back = io::parse_tree(io::format_tree(tr, std::string("x.set")));
  CHECK(back.tree.nodes() == tr.nodes());
  CHECK(back.leaves_in == std::optional<std::string>("x.set"));
  const auto a = generate::random_allowance(2, 3);
  const auto a2 = io::parse_allowance(io::format_allowance(a));
  CHECK(a2.h == a.h);
  CHECK(a2.g == a.g);
  CHECK(a2.levels == a.levels);
  CHECK(a2.n == a.n);
  CHECK_THROWS_AS(io::parse_set("upclosed\n0.x\n"), ParseError);
}
