#include <doctest.h>

#include <random>

#include "bushy/bigness.hpp"
#include "bushy/refcheck.hpp"
#include "oracle.hpp"

using namespace bushy;
using bigness::is_big;

namespace {

const BoundedSpace kS33(2, {3, 3});

StringSet random_explicit(std::mt19937_64& rng, const BoundedSpace& sp, unsigned keep_in_8) {
  std::set<FString> e;
  for (const auto& s : sp.all_strings()) {
    if (rng() % 8 < keep_in_8) e.insert(s);
  }
  return StringSet::explicit_set(std::move(e));
}

}  // namespace

TEST_CASE("is_big examples") {
  const FString sigma{1, 0};
  for (Width n = 1; n <= 5; ++n) {
    auto w = is_big(StringSet::explicit_set({sigma}), sigma, WidthSpec::constant(n));
    REQUIRE(w);
    CHECK(w->tree.nodes() == std::set<FString>{sigma});
  }

  const auto b01 = StringSet::explicit_set({FString{0}, FString{1}});
  auto w2 = is_big(b01, FString{}, WidthSpec::constant(2));
  REQUIRE(w2);
  CHECK(w2->tree.leaves() == std::vector<FString>{FString{0}, FString{1}});
  CHECK_FALSE(is_big(b01, FString{}, WidthSpec::constant(3)));

  const auto l2 = kS33.strings(2);
  auto wf = is_big(StringSet::explicit_set({l2.begin(), l2.end()}), FString{}, WidthSpec::constant(3), kS33);
  REQUIRE(wf);
  auto all = kS33.all_strings();
  CHECK(wf->tree.nodes() == std::set<FString>(all.begin(), all.end()));
}

TEST_CASE("is_big errors") {
  CHECK_THROWS_AS(is_big(StringSet::explicit_set({}), FString{5}, WidthSpec::constant(2), kS33), DomainError);
  // Leveled width not defined at level 1 while a level-1 node must branch.
  const auto deep = StringSet::explicit_set({FString{0, 0}, FString{0, 1}});
  CHECK_THROWS_AS(is_big(deep, FString{}, WidthSpec::leveled({1}), kS33), DomainError);
}

TEST_CASE("witness choice is lexicographically least") {
  const auto b = StringSet::explicit_set({FString{0}, FString{1}, FString{2}});
  auto w = is_big(b, FString{}, WidthSpec::constant(2), kS33);
  REQUIRE(w);
  CHECK(w->tree.leaves() == std::vector<FString>{FString{0}, FString{1}});
}

TEST_CASE("is_big agrees with both oracles on random sets") {
  std::mt19937_64 rng(17);
  const BoundedSpace sp(3, {3, 3, 3});
  for (int trial = 0; trial < 300; ++trial) {
    const auto b = random_explicit(rng, sp, 1 + trial % 6);
    const auto up = StringSet::upward_closed(b.elements());
    const Width n = 1 + rng() % 3;
    for (const FString stem : {FString{}, FString{1}}) {
      for (const auto& set : {b, up}) {
        auto w = is_big(set, stem, WidthSpec::constant(n), sp);
        const bool naive = oracle::big([&](const FString& s) { return set.contains(s); }, stem, n, sp);
        CHECK(w.has_value() == naive);
        if (w) {
          CHECK(bigness::check_witness(*w).ok());
          for (const auto& leaf : w->tree.leaves()) CHECK(set.contains(leaf));
        }
      }
    }
    if (trial % 10 == 0) {
      const auto small = random_explicit(rng, kS33, 3);
      CHECK(is_big(small, FString{}, WidthSpec::constant(n), kS33).has_value() ==
            refcheck::is_big_oracle(small, FString{}, n, kS33));
    }
  }
}

TEST_CASE("explicit sets without a space are decided over their prefix closure") {
  const auto b = StringSet::explicit_set({FString{7, 9}, FString{7, 12}, FString{3}});
  auto w = is_big(b, FString{7}, WidthSpec::constant(2));
  REQUIRE(w);
  CHECK(w->tree.leaves() == std::vector<FString>{FString{7, 9}, FString{7, 12}});
  CHECK(is_big(b, FString{}, WidthSpec::constant(2)));
  CHECK_FALSE(is_big(b, FString{}, WidthSpec::constant(3)));
}

TEST_CASE("monotonicity in the set and in the width") {
  std::mt19937_64 rng(23);
  for (int trial = 0; trial < 200; ++trial) {
    const auto b = random_explicit(rng, kS33, 3);
    auto more = b.elements();
    for (const auto& s : kS33.all_strings()) {
      if (rng() % 4 == 0) more.insert(s);
    }
    const auto bigger = StringSet::explicit_set(more);
    for (Width n = 1; n <= 4; ++n) {
      const bool bn = is_big(b, FString{}, WidthSpec::constant(n), kS33).has_value();
      if (bn) CHECK(is_big(bigger, FString{}, WidthSpec::constant(n), kS33));
      if (bn && n > 1) CHECK(is_big(b, FString{}, WidthSpec::constant(n - 1), kS33));
    }
  }
}

TEST_CASE("k_closure examples and properties") {
  const BoundedSpace s22(2, {2, 2});
  const auto c = bigness::k_closure(StringSet::explicit_set({FString{0, 0}, FString{0, 1}}), 2, s22);
  CHECK(c.contains(FString{0}));
  CHECK(c.contains(FString{0, 0}));
  CHECK(c.contains(FString{0, 1}));
  CHECK_FALSE(c.contains(FString{}));
  CHECK(bigness::k_closure(StringSet::explicit_set({}), 2, s22).empty());
  CHECK_THROWS_AS(bigness::k_closure(StringSet::explicit_set({}), 0, s22), DomainError);
  CHECK_THROWS_AS(bigness::k_closure(StringSet::explicit_set({FString{0, 0, 0}}), 2, s22), DomainError);

  std::mt19937_64 rng(29);
  const BoundedSpace sp(3, {3, 3, 3});
  for (int trial = 0; trial < 60; ++trial) {
    const auto b = random_explicit(rng, sp, 2);
    const Width k = 1 + rng() % 3;
    const auto cl = bigness::k_closure(b, k, sp);
    // Exactly the nodes above which B is k-big.
    for (const auto& tau : sp.all_strings()) {
      CHECK(cl.contains(tau) ==
            oracle::big([&](const FString& s) { return b.contains(s); }, tau, k, sp));
    }
    CHECK(bigness::k_closure(cl, k, sp) == cl);
    for (const auto& rho : sp.all_strings()) {
      if (is_big(cl, rho, WidthSpec::constant(k), sp)) CHECK(cl.contains(rho));
    }
    if (!is_big(b, FString{}, WidthSpec::constant(k), sp)) {
      CHECK_FALSE(is_big(cl, FString{}, WidthSpec::constant(k), sp));
    }
  }
}

TEST_CASE("union_label_split examples") {
  const BushyTree t(FString{}, {FString{}, FString{0}, FString{1}, FString{2}}, WidthSpec::constant(3));
  auto res = bigness::union_label_split(t, {FString{0}, FString{1}}, {FString{2}}, 2, 2);
  CHECK(res.side == bigness::LabelSplit::Side::B);
  CHECK(res.witness.tree.leaves() == std::vector<FString>{FString{0}, FString{1}});
  CHECK(bigness::check_witness(res.witness).ok());

  auto all_c = bigness::union_label_split(t, {}, {FString{0}, FString{1}, FString{2}}, 2, 2);
  CHECK(all_c.side == bigness::LabelSplit::Side::C);
  CHECK(validate_tree(all_c.witness.tree.with_width(WidthSpec::constant(2))).ok());
  CHECK(all_c.witness.tree.leaves().size() == 2);

  // Doubly labelled leaves count as B.
  auto both = bigness::union_label_split(t, {FString{0}, FString{1}}, {FString{0}, FString{1}, FString{2}}, 2, 2);
  CHECK(both.side == bigness::LabelSplit::Side::B);

  CHECK_THROWS_AS(bigness::union_label_split(t, {FString{0}}, {FString{1}}, 2, 2), DomainError);
  CHECK_THROWS_AS(bigness::union_label_split(t, {FString{0}, FString{1}, FString{2}}, {}, 2, 3), DomainError);
}

TEST_CASE("the m+n-1 bound is sharp") {
  const BoundedSpace s3(1, {3});
  const auto b = StringSet::explicit_set({FString{0}});
  const auto c = StringSet::explicit_set({FString{1}});
  CHECK_FALSE(is_big(b, FString{}, WidthSpec::constant(2), s3));
  CHECK_FALSE(is_big(c, FString{}, WidthSpec::constant(2), s3));
  CHECK(is_big(b.unite(c), FString{}, WidthSpec::constant(2), s3));
  CHECK_FALSE(is_big(b.unite(c), FString{}, WidthSpec::constant(3), s3));
}

TEST_CASE("union smallness on random pairs") {
  std::mt19937_64 rng(31);
  for (int trial = 0; trial < 2000; ++trial) {
    const auto b = random_explicit(rng, kS33, 2);
    const auto c = random_explicit(rng, kS33, 2);
    const Width m = 1 + rng() % 3, n = 1 + rng() % 3;
    if (!is_big(b, FString{}, WidthSpec::constant(m), kS33) && !is_big(c, FString{}, WidthSpec::constant(n), kS33)) {
      CHECK_FALSE(is_big(b.unite(c), FString{}, WidthSpec::constant(m + n - 1), kS33));
    }
  }
}

TEST_CASE("disjoint extension smallness with a leveled width") {
  std::mt19937_64 rng(37);
  const BoundedSpace sp(3, {3, 3, 3});
  const auto g = WidthSpec::leveled({2, 2, 3});
  const FString tau{1};
  for (int trial = 0; trial < 300; ++trial) {
    std::set<FString> a, bp;
    for (const auto& s : sp.all_strings()) {
      if (tau.is_prefix_of(s)) {
        if (rng() % 3 == 0) bp.insert(s);
      } else if (rng() % 4 == 0) {
        a.insert(s);
      }
    }
    const auto as = StringSet::explicit_set(a), bs = StringSet::explicit_set(bp);
    if (is_big(as, FString{}, g, sp) || is_big(bs, tau, g, sp)) continue;
    CHECK_FALSE(is_big(as.unite(bs), FString{}, g, sp));
  }
}

TEST_CASE("concatenate") {
  const auto two = WidthSpec::constant(2);
  const FString sigma{0};
  const BushyTree w(sigma, {sigma, FString{0, 0}, FString{0, 1}}, two);
  const BigWitness wb{w, StringSet::explicit_set({FString{0, 0}, FString{0, 1}})};
  const BigWitness base{BushyTree::singleton(sigma, two), StringSet::explicit_set({sigma})};
  auto id = bigness::concatenate(base, {{sigma, wb}});
  CHECK(id.tree.nodes() == w.nodes());

  const BigWitness root{BushyTree(FString{}, {FString{}, FString{0}, FString{1}}, two),
                        StringSet::explicit_set({FString{0}, FString{1}})};
  std::map<FString, BigWitness> ext;
  for (Symbol x : {0u, 1u}) {
    const FString l{x};
    ext.emplace(l, BigWitness{BushyTree(l, {l, l.child(0), l.child(1)}, two),
                              StringSet::explicit_set({l.child(0), l.child(1)})});
  }
  auto glued = bigness::concatenate(root, ext);
  CHECK(glued.tree.leaves().size() == 4);
  CHECK(bigness::check_witness(glued).ok());

  ext.erase(FString{1});
  CHECK_THROWS_AS(bigness::concatenate(root, ext), DomainError);
  std::map<FString, BigWitness> wrong{{FString{0}, BigWitness{BushyTree::singleton(FString{0}, WidthSpec::constant(3)),
                                                             StringSet::explicit_set({FString{0}})}},
                                      {FString{1}, BigWitness{BushyTree::singleton(FString{1}, two),
                                                             StringSet::explicit_set({FString{1}})}}};
  CHECK_THROWS_AS(bigness::concatenate(root, wrong), DomainError);
}

TEST_CASE("random concatenations re-validate") {
  std::mt19937_64 rng(41);
  const BoundedSpace sp(4, {3, 3, 3, 3});
  const auto two = WidthSpec::constant(2);
  for (int trial = 0; trial < 100; ++trial) {
    auto b0 = random_explicit(rng, BoundedSpace(2, {3, 3}), 5);
    auto base = is_big(b0, FString{}, two, sp);
    if (!base) continue;
    std::map<FString, BigWitness> ext;
    std::set<FString> target;
    bool ok = true;
    for (const auto& leaf : base->tree.leaves()) {
      std::set<FString> above;
      for (const auto& s : sp.strings_above(leaf)) {
        if (s.size() == leaf.size() + 2 && rng() % 3) above.insert(s);
      }
      auto w = is_big(StringSet::explicit_set(above), leaf, two, sp);
      if (!w) {
        ok = false;
        break;
      }
      target.insert(above.begin(), above.end());
      ext.emplace(leaf, *w);
    }
    if (!ok) continue;
    auto glued = bigness::concatenate(*base, ext);
    CHECK(bigness::check_witness(glued).ok());
    CHECK(oracle::big([&](const FString& s) { return target.count(s) > 0; }, FString{}, 2, sp));
  }
}
