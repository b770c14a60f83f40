#include <gtest/gtest.h>

#include <functional>
#include <random>
#include <set>

#include "ordcalc/calculus.hpp"
#include "ordcalc/decide.hpp"
#include "oracles.hpp"

using namespace ordcalc;

namespace {

std::vector<ReducedWord> words(std::initializer_list<const char*> l) {
  std::vector<ReducedWord> out;
  for (auto s : l) out.push_back(parse_word(s));
  return out;
}

Hypersequent hs(std::initializer_list<const char*> l) { return Hypersequent(words(l)); }

LiteralSeq seq(const char* s) { return parse_seq(s); }

Derivation node(Hypersequent h, Rule r, std::vector<LiteralSeq> blocks, std::vector<Derivation> premises = {}) {
  return Derivation{std::move(h), make_instance(r, std::move(blocks)), std::move(premises)};
}

// Id on x, then split into x | x'.
Derivation ga_pair() { return node(hs({"x", "x'"}), Rule::Split, {seq("x"), seq("x'")}, {node(hs({"e"}), Rule::Id, {seq("x")})}); }

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

void for_each_node(const Derivation& d, const std::function<void(const Derivation&)>& f) {
  f(d);
  for (const auto& p : d.premises) for_each_node(p, f);
}

void for_each_node_mut(Derivation& d, const std::function<void(Derivation&, const std::string&)>& f, const std::string& path = "root") {
  f(d, path);
  for (std::size_t i = 0; i < d.premises.size(); ++i) for_each_node_mut(d.premises[i], f, path + "." + std::to_string(i));
}

bool sampled_valid(const Hypersequent& h, int k, std::mt19937_64& rng, int samples) {
  std::uniform_int_distribution<std::int64_t> val(-9, 9);
  std::vector<std::int64_t> y(static_cast<std::size_t>(k));
  for (int i = 0; i < samples; ++i) {
    for (auto& x : y) x = val(rng);
    if (evaluate_join(h.words(), y) < 0) return false;
  }
  return true;
}

}  // namespace

TEST(GroupValid, Examples) {
  EXPECT_TRUE(group_valid(Sequent{ReducedWord{}, seq("x y y' x'")}));
  EXPECT_FALSE(group_valid(Sequent{ReducedWord{}, seq("x y x' y'")}));
  EXPECT_TRUE(group_valid(sequent_of(ReducedWord{})));
  EXPECT_FALSE(group_valid(sequent_of(parse_word("x"))));
}

TEST(Hypersequent, IsASet) {
  auto h = hs({"y", "x", "y", "x x'"});
  EXPECT_EQ(h.size(), 3u);
  EXPECT_EQ(format_hypersequent(h), "e | x | y");
  EXPECT_EQ(h.with(parse_word("x")), h);
  EXPECT_EQ(hs({"x"}).united(hs({"y"})), hs({"y", "x"}));
}

TEST(Check, GaPair) {
  auto d = ga_pair();
  EXPECT_TRUE(check(Calculus::GA, d, hs({"x", "x'"})).accepted());
  auto analytic = check(Calculus::GLGanalytic, d, hs({"x", "x'"}));
  ASSERT_EQ(analytic.errors.size(), 2u);
  EXPECT_EQ(analytic.errors[0].path, "root");
  EXPECT_EQ(analytic.errors[0].kind, NodeError::Kind::CalculusMismatch);
  EXPECT_EQ(analytic.errors[1].path, "root.0");
}

TEST(Check, EmInGlg) {
  auto d = node(hs({"x", "x'"}), Rule::Em, {seq("x")});
  EXPECT_TRUE(check(Calculus::GLG, d, hs({"x", "x'"})).accepted());
  EXPECT_TRUE(check(Calculus::GRG, d, hs({"x", "x'"})).accepted());
  EXPECT_FALSE(check(Calculus::GA, d, hs({"x", "x'"})).accepted());
  EXPECT_FALSE(check(Calculus::GLGstar, d, hs({"x", "x'"})).accepted());
}

TEST(Check, CutInGlg) {
  // Gamma = x, Delta = y, Sigma = x'.
  auto em = node(hs({"x y", "y' x'"}), Rule::Em, {seq("x y")});
  auto cut = node(hs({"e", "x y", "y' x'"}), Rule::Cut, {seq("x"), seq("y"), seq("x'")}, {em, em});
  EXPECT_TRUE(check(Calculus::GLG, cut, hs({"e", "x y", "y' x'"})).accepted());
  EXPECT_FALSE(check(Calculus::GLGstar, cut, hs({"e", "x y", "y' x'"})).accepted());

  auto bad = cut;
  bad.premises[1] = node(hs({"x x"}), Rule::Gv, {seq("x y y' x")});
  auto r = check(Calculus::GLG, bad, hs({"e", "x y", "y' x'"}));
  bool side = false;
  for (const auto& e : r.errors) side |= e.path == "root.1" && e.kind == NodeError::Kind::SideCondition;
  EXPECT_TRUE(side);
}

TEST(Check, AnalyticCommunication) {
  auto com = node(hs({"x x", "x' x'"}), Rule::Com, {seq("x"), seq("x"), seq("x'"), seq("x'")},
                  {node(hs({"e"}), Rule::Gv, {seq("x x'")}), node(hs({"e"}), Rule::Gv, {seq("x' x")})});
  EXPECT_TRUE(check(Calculus::GLGanalytic, com, hs({"x x", "x' x'"})).accepted());
  EXPECT_FALSE(check(Calculus::GLG, com, hs({"x x", "x' x'"})).accepted());

  auto mix = node(hs({"x' x'", "x x x x"}), Rule::Mix, {seq("x x"), seq("x x")}, {com, com});
  EXPECT_TRUE(check(Calculus::GLGanalytic, mix, hs({"x' x'", "x x x x"})).accepted());
}

TEST(Check, LocatedErrors) {
  auto d = ga_pair();
  auto goal = check(Calculus::GA, d, hs({"x"}));
  ASSERT_EQ(goal.errors.size(), 1u);
  EXPECT_EQ(goal.errors[0].kind, NodeError::Kind::GoalMismatch);
  EXPECT_EQ(goal.errors[0].path, "root");

  auto missing = d;
  missing.premises.clear();
  auto pc = check(Calculus::GA, missing, hs({"x", "x'"}));
  ASSERT_EQ(pc.errors.size(), 1u);
  EXPECT_EQ(pc.errors[0].kind, NodeError::Kind::PremiseCount);

  auto gv = node(hs({"x"}), Rule::Gv, {seq("x")});
  auto sc = check(Calculus::GLGstar, gv, hs({"x"}));
  ASSERT_EQ(sc.errors.size(), 1u);
  EXPECT_EQ(sc.errors[0].kind, NodeError::Kind::SideCondition);

  auto star = node(hs({"x"}), Rule::Star, {seq("y y'")}, {gv, gv});
  bool side = false;
  for (const auto& e : check(Calculus::GLGstar, star, hs({"x"})).errors)
    if (e.path == "root" && e.kind == NodeError::Kind::SideCondition) side = true;
  EXPECT_TRUE(side);

  auto context = d;
  context.premises[0].conclusion = hs({"e", "y"});
  auto cx = check(Calculus::GA, context, hs({"x", "x'"}));
  ASSERT_FALSE(cx.accepted());
  EXPECT_EQ(cx.errors[0].kind, NodeError::Kind::CertificateMismatch);
}

TEST(Check, ActiveListMustMatchBlocks) {
  auto d = ga_pair();
  d.premises[0].instance.active[0] = seq("x' x");
  auto r = check(Calculus::GA, d, hs({"x", "x'"}));
  ASSERT_EQ(r.errors.size(), 1u);
  EXPECT_EQ(r.errors[0].path, "root.0");
  EXPECT_EQ(r.errors[0].kind, NodeError::Kind::CertificateMismatch);
}

TEST(Extract, GlgStarOnS) {
  auto s = words({"x x", "y y", "x' y'"});
  auto v = decide_lg_cs(s, 2);
  ASSERT_EQ(v.status, Status::Valid);
  const auto& d = *v.derivation();
  EXPECT_TRUE(check(Calculus::GLGstar, d, goal_of(s)).accepted());
  EXPECT_FALSE(check(Calculus::GLG, d, goal_of(s)).accepted());
  EXPECT_EQ(d.instance.rule, Rule::Star);
}

TEST(Extract, MalformedTreesThrow) {
  auto s = words({"x", "x'"});
  auto leaf = LgRefutation::make_leaf(Factorization{{0, 1}});
  auto bad = LgRefutation::make_branch(ReducedWord{}, leaf, leaf);
  EXPECT_THROW(derive_glgstar(s, *bad), ExtractionError);
  auto wrong = LgRefutation::make_leaf(Factorization{{0, 0}});
  EXPECT_THROW(derive_glgstar(s, *wrong), ExtractionError);
  EXPECT_THROW(derive_ga(s, Combination{{1, 2}}), ExtractionError);
}

TEST(Extract, GrgStarUsesCycle) {
  auto s = words({"x y x'", "y'"});
  RgBounds b;
  b.conjugator_length = 1;
  auto v = decide_rg(s, 2, b);
  ASSERT_EQ(v.status, Status::Valid);
  const auto& d = *v.derivation();
  EXPECT_TRUE(check(Calculus::GRGstar, d, goal_of(s)).accepted());
  bool cycle = false;
  for_each_node(d, [&](const Derivation& n) { cycle |= n.instance.rule == Rule::Cycle; });
  EXPECT_TRUE(cycle);
  auto as_lg = check(Calculus::GLGstar, d, goal_of(s));
  ASSERT_FALSE(as_lg.accepted());
  for (const auto& e : as_lg.errors) EXPECT_EQ(e.kind, NodeError::Kind::CalculusMismatch);
}

TEST(Extract, GaExamples) {
  auto s = words({"x x", "y y", "x' y'"});
  auto v = validity_abelian(s, 2);
  ASSERT_EQ(v.status, Status::Valid);
  EXPECT_TRUE(check(Calculus::GA, *v.derivation(), goal_of(s)).accepted());
  // A zero coefficient leaves the word in the context.
  auto z = words({"x", "x'", "y"});
  auto vz = validity_abelian(z, 2);
  ASSERT_EQ(vz.status, Status::Valid);
  EXPECT_TRUE(check(Calculus::GA, *vz.derivation(), goal_of(z)).accepted());
}

TEST(Extract, GaOnAllBalancedSequences) {
  std::set<ReducedWord> seen;
  std::size_t checked = 0;
  const Literal lits[] = {Literal(1, 1), Literal(1, -1), Literal(2, 1), Literal(2, -1)};
  for (int n = 0; n <= 6; ++n) {
    std::vector<int> digits(static_cast<std::size_t>(n), 0);
    while (true) {
      LiteralSeq raw;
      int ex = 0, ey = 0;
      for (int d : digits) {
        raw.push_back(lits[d]);
        (d < 2 ? ex : ey) += d % 2 == 0 ? 1 : -1;
      }
      if (ex == 0 && ey == 0 && seen.insert(ReducedWord(raw)).second) {
        std::vector<ReducedWord> one{ReducedWord(raw)};
        auto v = validity_abelian(one, 2);
        ASSERT_EQ(v.status, Status::Valid);
        ASSERT_TRUE(check(Calculus::GA, *v.derivation(), goal_of(one)).accepted()) << format_word(one[0]);
        ++checked;
      }
      std::size_t i = 0;
      while (i < digits.size() && ++digits[i] == 4) digits[i++] = 0;
      if (i == digits.size()) break;
    }
  }
  EXPECT_GT(checked, 40u);
}

TEST(Extract, CorpusAndRandomInstancesCheck) {
  std::mt19937_64 rng(50);
  auto instances = corpus();
  for (int i = 0; i < 500; ++i) {
    std::uniform_int_distribution<int> n(1, 3);
    std::vector<ReducedWord> s;
    for (int j = n(rng); j > 0; --j) s.push_back(oracle::random_word(rng, 2, 4));
    instances.push_back(s);
  }
  std::size_t valid = 0;
  for (const auto& s : instances) {
    auto lg = decide_lg_cs(s, 2);
    auto ab = validity_abelian(s, 2);
    const auto goal = goal_of(s);
    if (lg.status == Status::Valid) {
      ++valid;
      ASSERT_TRUE(check(Calculus::GLGstar, *lg.derivation(), goal).accepted()) << format_hypersequent(goal);
      // Every l-group valid hypersequent is abelian valid.
      EXPECT_EQ(ab.status, Status::Valid) << format_hypersequent(goal);
    }
    if (ab.status == Status::Valid) {
      ASSERT_TRUE(check(Calculus::GA, *ab.derivation(), goal).accepted()) << format_hypersequent(goal);
    }
  }
  EXPECT_GT(valid, 100u);
}

TEST(Extract, EveryNodeIsSoundInZ) {
  std::mt19937_64 rng(51);
  auto all = corpus();
  for (std::size_t i = 0; i < all.size(); i += 3) {
    auto v = decide_lg_cs(all[i], 2);
    if (v.status != Status::Valid) continue;
    for_each_node(*v.derivation(), [&](const Derivation& n) {
      EXPECT_TRUE(sampled_valid(n.conclusion, 2, rng, 50)) << format_hypersequent(n.conclusion);
    });
  }
}

TEST(Check, SingleCorruptedBlockGivesOneError) {
  auto s = words({"x x", "y y", "x' y'"});
  auto d = *decide_lg_cs(s, 2).derivation();
  std::size_t mutated = 0;
  std::vector<std::string> paths;
  for_each_node_mut(d, [&](Derivation&, const std::string& p) { paths.push_back(p); });
  for (const auto& target : paths) {
    auto copy = d;
    bool done = false;
    for_each_node_mut(copy, [&](Derivation& n, const std::string& p) {
      if (p != target || done) return;
      for (auto& b : n.instance.blocks)
        if (!b.empty()) {
          b[0] = b[0].inverse();
          done = true;
          break;
        }
    });
    if (!done) continue;
    ++mutated;
    auto r = check(Calculus::GLGstar, copy, goal_of(s));
    ASSERT_EQ(r.errors.size(), 1u) << target;
    EXPECT_EQ(r.errors[0].path, target);
  }
  EXPECT_EQ(mutated, d.size());
}

TEST(TrimContexts, KeepsPaddedDerivationsValid) {
  // Pad every node of the GA pair with y; trimming brings the premise back to e.
  auto d = ga_pair();
  d.conclusion = hs({"x", "x'", "y"});
  d.premises[0].conclusion = hs({"e", "y", "x"});
  ASSERT_TRUE(check(Calculus::GA, d, hs({"x", "x'", "y"})).accepted());
  trim_contexts(d);
  EXPECT_TRUE(check(Calculus::GA, d, hs({"x", "x'", "y"})).accepted());
  EXPECT_EQ(d.premises[0].conclusion, hs({"e", "y"}));
  auto again = d;
  trim_contexts(again);
  EXPECT_EQ(again.premises[0].conclusion, d.premises[0].conclusion);
}

TEST(TrimContexts, EveryConclusionLiteralMatters) {
  auto all = corpus();
  std::size_t flips = 0;
  for (std::size_t i = 0; i < all.size(); i += 4) {
    for (int variety = 0; variety < 2; ++variety) {
      auto v = variety == 0 ? decide_lg_cs(all[i], 2) : validity_abelian(all[i], 2);
      if (v.status != Status::Valid) continue;
      const Calculus calc = *v.calculus;
      auto d = *v.derivation();
      const auto goal = goal_of(all[i]);
      for_each_node_mut(d, [&](Derivation& n, const std::string& path) {
        if (path == "root") return;
        const auto original = n.conclusion;
        for (std::size_t w = 0; w < original.size(); ++w)
          for (std::size_t l = 0; l < original.words()[w].length(); ++l) {
            auto lits = original.words()[w].literals();
            lits[l] = lits[l].inverse();
            auto ws = original.words();
            ws[w] = ReducedWord(lits);
            n.conclusion = Hypersequent(ws);
            ++flips;
            EXPECT_FALSE(check(calc, d, goal).accepted()) << format_hypersequent(goal) << " at " << path;
          }
        n.conclusion = original;
      });
    }
  }
  EXPECT_GT(flips, 1000u);
}

TEST(AdmissibleEw, Expand) {
  auto d = node(hs({"x", "x'"}), Rule::Em, {seq("x")});
  auto w = admissible_ew_expand(Calculus::GLG, d, hs({"y y"}));
  EXPECT_TRUE(check(Calculus::GLG, w, hs({"x", "x'", "y y"})).accepted());
  auto same = admissible_ew_expand(Calculus::GLG, d, Hypersequent{});
  EXPECT_EQ(same.conclusion, d.conclusion);
  EXPECT_TRUE(check(Calculus::GLG, same, hs({"x", "x'"})).accepted());
  EXPECT_THROW(admissible_ew_expand(Calculus::GA, ga_pair(), hs({"y"})), std::invalid_argument);
}
