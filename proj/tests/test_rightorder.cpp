#include <gtest/gtest.h>

#include <random>

#include "ordcalc/calculus.hpp"
#include "ordcalc/decide.hpp"
#include "ordcalc/rightorder.hpp"
#include "oracles.hpp"

using namespace ordcalc;

namespace {

std::vector<ReducedWord> words(std::initializer_list<const char*> l) {
  std::vector<ReducedWord> out;
  for (auto s : l) out.push_back(parse_word(s));
  return out;
}

std::vector<ReducedWord> sorted(std::vector<ReducedWord> v) {
  std::sort(v.begin(), v.end());
  return v;
}

// Nonempty subsets of size <= 3 of the nonidentity words of length <= 2 over two generators.
std::vector<std::vector<ReducedWord>> corpus() {
  std::vector<ReducedWord> pool;
  for (auto& w : ball(2, 2))
    if (!w.is_identity()) pool.push_back(w);
  std::vector<std::vector<ReducedWord>> out;
  for (std::size_t i = 0; i < pool.size(); ++i) {
    out.push_back({pool[i]});
    for (std::size_t j = i + 1; j < pool.size(); ++j) {
      out.push_back({pool[i], pool[j]});
      for (std::size_t k = j + 1; k < pool.size(); ++k) out.push_back({pool[i], pool[j], pool[k]});
    }
  }
  return out;
}

const auto kS = words({"x x", "y y", "x' y'"});
const auto kT = words({"x x", "x y", "y x'"});

}  // namespace

TEST(CloseTruncated, Examples) {
  EXPECT_EQ(close_truncated(kS, 2), sorted(words({"x x", "y y", "x' y'", "x y'", "x' y", "x y"})));
  EXPECT_EQ(close_truncated(kT, 2), sorted(words({"x x", "x y", "y x'", "y x", "y y"})));
  EXPECT_EQ(close_truncated(words({"x"}), 1), words({"x"}));
}

TEST(CloseTruncated, ClosedAndLeast) {
  std::mt19937_64 rng(40);
  for (int trial = 0; trial < 300; ++trial) {
    std::vector<ReducedWord> s;
    for (int i = 0; i < 3; ++i) {
      auto w = oracle::random_word(rng, 2, 3);
      if (!w.is_identity()) s.push_back(w);
    }
    if (s.empty()) continue;
    auto c = close_truncated(s, 3);
    if (std::binary_search(c.begin(), c.end(), ReducedWord{})) continue;
    for (const auto& a : c)
      for (const auto& b : c) {
        auto p = mul(a, b);
        if (p.length() <= 3) { EXPECT_TRUE(std::binary_search(c.begin(), c.end(), p)); }
      }
    for (const auto& w : s) EXPECT_TRUE(std::binary_search(c.begin(), c.end(), w));
  }
}

TEST(ExtendRightOrder, ExampleSRefutes) {
  auto r = extend_right_order(kS, 2);
  ASSERT_TRUE(std::holds_alternative<LgRefutationPtr>(r));
  EXPECT_FALSE(verify_refutation(kS, *std::get<LgRefutationPtr>(r)).has_value());
}

TEST(ExtendRightOrder, ExampleTWitness) {
  auto r = extend_right_order(kT, 2);
  ASSERT_TRUE(std::holds_alternative<TruncatedRightOrder>(r));
  const auto& o = std::get<TruncatedRightOrder>(r);
  EXPECT_EQ(o.level, 2u);
  EXPECT_EQ(o.elements, sorted(words({"x x", "x y", "y x'", "y x", "y y", "x", "y"})));
  EXPECT_FALSE(verify_truncated(o).has_value());
}

TEST(ExtendRightOrder, SingletonAndIdentity) {
  auto r = extend_right_order(words({"x"}), 2);
  ASSERT_TRUE(std::holds_alternative<TruncatedRightOrder>(r));
  EXPECT_EQ(std::get<TruncatedRightOrder>(r).elements, words({"x"}));
  EXPECT_EQ(std::get<TruncatedRightOrder>(r).level, 1u);

  auto e = extend_right_order(words({"x", "e"}), 2);
  ASSERT_TRUE(std::holds_alternative<LgRefutationPtr>(e));
  const auto& leaf = *std::get<LgRefutationPtr>(e);
  ASSERT_TRUE(leaf.is_leaf());
  EXPECT_EQ(leaf.leaf->factors, std::vector<std::size_t>{1});
}

TEST(ExtendRightOrder, DeeperLevelKeepsVerdict) {
  auto all = corpus();
  for (std::size_t i = 0; i < all.size(); i += 7) {
    auto base = extend_right_order(all[i], 2);
    auto deeper = extend_right_order(all[i], 2, 3);
    EXPECT_EQ(base.index(), deeper.index()) << format_hypersequent(goal_of(all[i]));
  }
}

TEST(VerifyTruncated, DetectsEachViolation) {
  TruncatedRightOrder good{2, 2, sorted(words({"x x", "x y", "y x'", "y x", "y y", "x", "y"}))};
  ASSERT_FALSE(verify_truncated(good).has_value());
  auto with_e = good;
  with_e.elements.insert(with_e.elements.begin(), ReducedWord{});
  EXPECT_TRUE(verify_truncated(with_e).has_value());
  auto not_closed = good;
  not_closed.elements.erase(std::find(not_closed.elements.begin(), not_closed.elements.end(), parse_word("y y")));
  EXPECT_TRUE(verify_truncated(not_closed).has_value());
  TruncatedRightOrder not_total{2, 2, words({"x", "x x"})};
  EXPECT_TRUE(verify_truncated(not_total).has_value());
  TruncatedRightOrder too_long{1, 1, words({"x", "x x"})};
  EXPECT_TRUE(verify_truncated(too_long).has_value());
}

TEST(DecideLgCs, Examples) {
  auto s = decide_lg_cs(kS, 2);
  EXPECT_EQ(s.status, Status::Valid);
  EXPECT_TRUE(check(Calculus::GLGstar, *s.derivation(), goal_of(kS)).accepted());
  EXPECT_EQ(decide_lg_cs(kT, 2).status, Status::Invalid);
  auto e = decide_lg_cs(words({"x y", "e"}), 2);
  EXPECT_EQ(e.status, Status::Valid);
  EXPECT_TRUE(check(Calculus::GLGstar, *e.derivation(), goal_of(words({"x y", "e"}))).accepted());
}

TEST(DecideLgCs, SingleWordsAreInvalid) {
  for (const auto& w : ball(2, 3)) {
    if (w.is_identity()) continue;
    std::vector<ReducedWord> one{w};
    EXPECT_EQ(decide_lg_cs(one, 2).status, Status::Invalid) << format_word(w);
  }
}

TEST(Cis, Examples) {
  auto xx = words({"x x"});
  EXPECT_EQ(initial_subterms(xx), words({"e", "x", "x x"}));
  EXPECT_EQ(cis(xx), sorted(words({"x", "x'", "x x", "x' x'"})));
  EXPECT_EQ(cis(words({"x"})), words({"x", "x'"}));
}

TEST(Cis, ClosedUnderInversion) {
  std::mt19937_64 rng(41);
  for (int trial = 0; trial < 300; ++trial) {
    std::vector<ReducedWord> s{oracle::random_word(rng, 3, 4), oracle::random_word(rng, 3, 4)};
    auto c = cis(s);
    for (const auto& w : c) {
      EXPECT_FALSE(w.is_identity());
      EXPECT_TRUE(std::binary_search(c.begin(), c.end(), inv(w)));
    }
  }
}

TEST(DecideLgHm, Examples) {
  auto s = decide_lg_hm(kS, 2);
  EXPECT_EQ(s.status, Status::Valid);
  EXPECT_TRUE(check(Calculus::GLGstar, *s.derivation(), goal_of(kS)).accepted());

  auto t = decide_lg_hm(kT, 2);
  ASSERT_EQ(t.status, Status::Invalid);
  const auto& signs = std::get<SignAssignment>(t.certificate);
  ASSERT_GE(signs.size(), 2u);
  EXPECT_EQ(signs[0].pivot, parse_word("x"));
  EXPECT_EQ(signs[0].sign, 1);
  EXPECT_EQ(signs[1].pivot, parse_word("y"));
  EXPECT_EQ(signs[1].sign, 1);
  std::vector<ReducedWord> gens = kT;
  for (const auto& p : signs) gens.push_back(p.value());
  EXPECT_FALSE(contains_identity(gens).contains);

  EXPECT_EQ(decide_lg_hm(words({"e"}), 1).status, Status::Valid);
}

TEST(Corpus, ProceduresAgreeAndEvidenceChecks) {
  auto all = corpus();
  ASSERT_EQ(all.size(), 696u);
  std::mt19937_64 rng(42);
  std::uniform_int_distribution<std::int64_t> val(-9, 9);
  for (const auto& s : all) {
    auto cs = decide_lg_cs(s, 2);
    auto hm = decide_lg_hm(s, 2);
    const auto name = format_hypersequent(goal_of(s));
    ASSERT_EQ(cs.status, hm.status) << name;
    auto r = extend_right_order(s, 2);
    EXPECT_EQ(std::holds_alternative<TruncatedRightOrder>(r), cs.status == Status::Invalid) << name;
    if (auto* o = std::get_if<TruncatedRightOrder>(&r)) {
      EXPECT_FALSE(verify_truncated(*o).has_value()) << name;
      for (const auto& w : s) EXPECT_TRUE(o->contains(w));
      // No pivot is chosen with both signs.
      for (const auto& w : o->elements) EXPECT_FALSE(o->contains(inv(w))) << name;
    } else {
      EXPECT_FALSE(verify_refutation(s, *std::get<LgRefutationPtr>(r)).has_value()) << name;
    }
    if (cs.status == Status::Valid) {
      EXPECT_TRUE(check(Calculus::GLGstar, *cs.derivation(), goal_of(s)).accepted()) << name;
      EXPECT_TRUE(check(Calculus::GLGstar, *hm.derivation(), goal_of(s)).accepted()) << name;
      std::vector<std::int64_t> y(2);
      for (int i = 0; i < 1000; ++i) {
        for (auto& x : y) x = val(rng);
        ASSERT_GE(evaluate_join(s, y), 0) << name;
      }
    }
  }
}

TEST(VerifyRefutation, RejectsMalformedTrees) {
  auto leaf = LgRefutation::make_leaf(Factorization{{0, 1}});
  auto pair = words({"x", "x'"});
  EXPECT_FALSE(verify_refutation(pair, *leaf).has_value());
  EXPECT_TRUE(verify_refutation(words({"x", "x"}), *leaf).has_value());
  auto empty_pivot = LgRefutation::make_branch(ReducedWord{}, leaf, leaf);
  EXPECT_TRUE(verify_refutation(pair, *empty_pivot).has_value());
  auto inner = LgRefutation::make_branch(parse_word("y'"), leaf, leaf);
  auto repeated = LgRefutation::make_branch(parse_word("y"), inner, leaf);
  EXPECT_TRUE(verify_refutation(pair, *repeated).has_value());
  auto out_of_range = LgRefutation::make_leaf(Factorization{{0, 5}});
  EXPECT_TRUE(verify_refutation(pair, *out_of_range).has_value());
}

TEST(RgRefuteBounded, Examples) {
  RgBounds l0;
  l0.conjugator_length = 0;
  auto pair = words({"x", "x'"});
  auto r = rg_refute_bounded(pair, 1, l0);
  ASSERT_TRUE(r.has_value());
  ASSERT_TRUE((*r)->is_leaf());
  EXPECT_EQ((*r)->leaf->factors.size(), 2u);
  for (const auto& f : (*r)->leaf->factors) EXPECT_TRUE(f.conjugator.is_identity());
  EXPECT_FALSE(verify_refutation(pair, **r).has_value());

  auto with_e = words({"x y x' y y' y'", "y y'"});
  auto e = rg_refute_bounded(with_e, 2, l0);
  ASSERT_TRUE(e.has_value());
  EXPECT_TRUE((*e)->is_leaf());

  RgBounds l1;
  l1.conjugator_length = 1;
  auto conj = words({"x y x'", "y'"});
  auto c = rg_refute_bounded(conj, 2, l1);
  ASSERT_TRUE(c.has_value());
  EXPECT_FALSE(verify_refutation(conj, **c).has_value());
  // Without conjugation the pair is not refuted at the root.
  EXPECT_FALSE(contains_identity(conj).contains);
}

TEST(RgRefuteBounded, ConjugateLeafChecks) {
  auto conj = words({"x y x'", "y'"});
  ConjugateProduct good{{ConjugateFactor{parse_word("x'"), 0, 1}, ConjugateFactor{ReducedWord{}, 1, 1}}};
  EXPECT_FALSE(verify_refutation(conj, *RgRefutation::make_leaf(good)).has_value());
  ConjugateProduct negative_root{{ConjugateFactor{parse_word("x'"), 0, -1}, ConjugateFactor{ReducedWord{}, 1, -1}}};
  EXPECT_TRUE(verify_refutation(conj, *RgRefutation::make_leaf(negative_root)).has_value());
  ConjugateProduct wrong{{ConjugateFactor{parse_word("x"), 0, 1}, ConjugateFactor{ReducedWord{}, 1, 1}}};
  EXPECT_TRUE(verify_refutation(conj, *RgRefutation::make_leaf(wrong)).has_value());
}

TEST(DecideRg, ThreeOutcomes) {
  RgBounds l0;
  l0.conjugator_length = 0;
  auto pair = words({"x", "x'"});
  auto v = decide_rg(pair, 1, l0);
  ASSERT_EQ(v.status, Status::Valid);
  EXPECT_TRUE(check(Calculus::GRGstar, *v.derivation(), goal_of(pair)).accepted());

  auto single = decide_rg(words({"x"}), 1);
  ASSERT_EQ(single.status, Status::Invalid);
  EXPECT_EQ(std::get<Separator>(single.certificate).y, (std::vector<std::int64_t>{-1}));

  auto comm = decide_rg(words({"x' y' x y"}), 2);
  EXPECT_EQ(comm.status, Status::Unknown);
  EXPECT_EQ(std::get<BoundsReport>(comm.certificate).conjugator_length, 3u);
}

TEST(DecideRg, ValidImpliesLgInvalidityIsConsistent) {
  auto all = corpus();
  for (std::size_t i = 0; i < all.size(); i += 5) {
    auto lg = decide_lg_cs(all[i], 2);
    if (lg.status != Status::Valid) continue;
    auto rg = decide_rg(all[i], 2);
    ASSERT_EQ(rg.status, Status::Valid) << format_hypersequent(goal_of(all[i]));
    EXPECT_TRUE(check(Calculus::GRGstar, *rg.derivation(), goal_of(all[i])).accepted());
  }
}
