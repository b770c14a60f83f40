#include <gtest/gtest.h>

#include <random>

#include "ordcalc/membership.hpp"
#include "oracles.hpp"

using namespace ordcalc;

namespace {

std::vector<ReducedWord> words(std::initializer_list<const char*> l) {
  std::vector<ReducedWord> out;
  for (auto s : l) out.push_back(parse_word(s));
  return out;
}

bool base_pair(const WordAutomaton& a) { return a.has_epsilon(WordAutomaton::kBase, WordAutomaton::kBase); }

std::vector<oracle::Raw> raws(const std::vector<ReducedWord>& s) {
  std::vector<oracle::Raw> out;
  for (const auto& w : s) out.push_back(oracle::raw_of(w));
  return out;
}

}  // namespace

TEST(Flower, Shapes) {
  auto single = build_flower(words({"x"}));
  EXPECT_EQ(single.state_count(), 1u);
  ASSERT_EQ(single.transitions().size(), 1u);
  EXPECT_EQ(single.transitions()[0].from, WordAutomaton::kBase);
  EXPECT_EQ(single.transitions()[0].to, WordAutomaton::kBase);

  auto two = build_flower(words({"x y", "y'"}));
  EXPECT_EQ(two.petal_count(), 2u);
  EXPECT_EQ(two.transitions().size(), 3u);
  EXPECT_EQ(two.state_count(), 2u);
  for (const auto& t : two.transitions())
    if (t.petal == 1) { EXPECT_EQ(t.from, t.to); }

  auto none = build_flower({});
  EXPECT_EQ(none.state_count(), 1u);
  EXPECT_TRUE(none.transitions().empty());
  EXPECT_FALSE(base_pair(saturate(none)));

  EXPECT_THROW(build_flower(words({"x", "e"})), std::invalid_argument);
}

TEST(Flower, EveryPetalIsACycleThroughBase) {
  auto s = words({"x y z", "y' y'", "x"});
  auto a = build_flower(s);
  for (std::size_t p = 0; p < s.size(); ++p) {
    LiteralSeq spelled;
    std::uint32_t at = WordAutomaton::kBase;
    do {
      bool moved = false;
      for (const auto& t : a.transitions())
        if (t.petal == p && t.from == at) {
          spelled.push_back(t.label);
          at = t.to;
          moved = true;
          break;
        }
      ASSERT_TRUE(moved);
    } while (at != WordAutomaton::kBase);
    EXPECT_EQ(spelled, s[p].literals());
  }
}

TEST(Saturate, Examples) {
  EXPECT_TRUE(base_pair(saturate(build_flower(words({"x", "x'"})))));
  auto only_x = saturate(build_flower(words({"x"})));
  EXPECT_TRUE(only_x.epsilon().empty());
  EXPECT_TRUE(base_pair(saturate(build_flower(words({"x x y", "y' x'", "x'"})))));
  EXPECT_TRUE(oracle::bounded_identity_product(raws(words({"x x y", "y' x'", "x'"})), 4).has_value());
}

TEST(Saturate, IsAFixpoint) {
  std::mt19937_64 rng(20);
  for (int trial = 0; trial < 200; ++trial) {
    std::vector<ReducedWord> s;
    for (int i = 0; i < 3; ++i) {
      auto w = oracle::random_word(rng, 2, 4);
      if (!w.is_identity()) s.push_back(w);
    }
    auto once = saturate(build_flower(s));
    auto twice = saturate(once);
    EXPECT_EQ(once.epsilon().size(), twice.epsilon().size());
  }
}

TEST(Saturate, ProvenanceExpandsToCancellingPaths) {
  auto a = saturate(build_flower(words({"x x y", "y' x'", "x'", "y x y'"})));
  for (std::uint32_t id = 0; id < a.epsilon().size(); ++id) {
    const auto& p = a.epsilon()[id];
    auto path = a.expand(id);
    ASSERT_FALSE(path.empty());
    EXPECT_EQ(a.transitions()[path.front()].from, p.from);
    EXPECT_EQ(a.transitions()[path.back()].to, p.to);
    LiteralSeq spelled;
    for (std::size_t i = 0; i < path.size(); ++i) {
      if (i) { EXPECT_EQ(a.transitions()[path[i - 1]].to, a.transitions()[path[i]].from); }
      spelled.push_back(a.transitions()[path[i]].label);
    }
    EXPECT_TRUE(free_reduce(spelled).empty());
  }
}

TEST(ContainsIdentity, Examples) {
  auto inverse_pair = words({"x y", "y' x'"});
  auto r = contains_identity(inverse_pair);
  ASSERT_TRUE(r.contains);
  EXPECT_TRUE(verify_factorization(inverse_pair, *r.witness));
  EXPECT_FALSE(contains_identity(words({"x"})).contains);
  auto example = words({"x x", "y y", "x' y'", "x y'", "x' y", "x y", "x'"});
  auto e = contains_identity(example);
  ASSERT_TRUE(e.contains);
  EXPECT_TRUE(verify_factorization(example, *e.witness));
}

TEST(ContainsIdentity, IdentityElementIsItsOwnWitness) {
  auto s = words({"x", "e", "y"});
  auto r = contains_identity(s);
  ASSERT_TRUE(r.contains);
  EXPECT_EQ(r.witness->factors, std::vector<std::size_t>{1});
}

TEST(ContainsIdentity, AgreesWithBoundedProductsOnSmallSets) {
  auto pool = ball(2, 2);
  std::size_t sets = 0, positives = 0;
  std::vector<ReducedWord> s;
  auto check = [&] {
    ++sets;
    auto r = contains_identity(s);
    auto brute = oracle::bounded_identity_product(raws(s), 6);
    if (brute) { EXPECT_TRUE(r.contains); }
    if (r.contains) {
      ++positives;
      EXPECT_TRUE(verify_factorization(s, *r.witness));
    }
  };
  for (std::size_t i = 0; i < pool.size(); ++i) {
    s = {pool[i]};
    check();
    for (std::size_t j = i + 1; j < pool.size(); ++j) {
      s = {pool[i], pool[j]};
      check();
      for (std::size_t k = j + 1; k < pool.size(); ++k) {
        s = {pool[i], pool[j], pool[k]};
        check();
      }
    }
  }
  EXPECT_EQ(sets, 17u + 136u + 680u);
  EXPECT_GT(positives, 0u);
}

TEST(ContainsIdentity, WitnessesBeyondSmallBounds) {
  // e needs eight factors.
  auto s = words({"x x x x x", "x' x' x'"});
  auto r = contains_identity(s);
  ASSERT_TRUE(r.contains);
  EXPECT_TRUE(verify_factorization(s, *r.witness));
  EXPECT_FALSE(oracle::bounded_identity_product(raws(s), 5).has_value());
}

TEST(ContainsIdentity, Monotone) {
  std::mt19937_64 rng(21);
  for (int trial = 0; trial < 500; ++trial) {
    std::vector<ReducedWord> s;
    for (int i = 0; i < 3; ++i) s.push_back(oracle::random_word(rng, 2, 3));
    auto bigger = s;
    bigger.push_back(oracle::random_word(rng, 2, 3));
    if (contains_identity(s).contains) { EXPECT_TRUE(contains_identity(bigger).contains); }
  }
}

TEST(ContainsIdentity, CompactAutomatonAgreesWithFlower) {
  std::mt19937_64 rng(22);
  for (int trial = 0; trial < 500; ++trial) {
    std::vector<ReducedWord> s;
    for (int i = 0; i < 4; ++i) {
      auto w = oracle::random_word(rng, 2, 5);
      if (!w.is_identity()) s.push_back(w);
    }
    if (s.empty()) continue;
    bool flower = base_pair(saturate(build_flower(s)));
    bool compact = base_pair(saturate(build_compact(s)));
    EXPECT_EQ(flower, compact);
    EXPECT_EQ(contains_identity(s).contains, flower);
  }
}
