#pragma once

// One-sided hypersequent calculi for l-groups and their varieties.
//
// A hypersequent is a finite set of sequents; a sequent is identified with the group term it
// spells, so hypersequents hold canonical reduced words. Each rule instance carries the raw
// (unreduced) literal blocks that instantiate the rule schema, plus the raw principal
// sequents they produce. The checker verifies syntactically that the principal sequents are
// the schema instantiated with the blocks, and modulo free reduction that they occur in the
// premises/conclusion with a common context.
//
//   (id)    G | D,D'                      (gv)    G | C          C group valid
//   (ex)    G | P,D,C   => G | P,C,D      (em)    G | D | D'
//   (split) G | C,D     => G | C | D      (cut)   G | C,D ; G | D',S  => G | C,S
//   (*)     G | D ; G | D'  => G          D not group valid
//   (cycle) G | D,C     => G | C,D
//   (mix)   G | C ; G | D   => G | C,D
//   (com)   G | C,S ; G | P,D  => G | C,D | P,S

#include <algorithm>
#include <cstdint>
#include <optional>
#include <set>
#include <span>
#include <stdexcept>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

#include "ordcalc/abelian.hpp"
#include "ordcalc/freegroup.hpp"
#include "ordcalc/refutation.hpp"

namespace ordcalc {

struct Sequent {
  ReducedWord word;
  std::optional<LiteralSeq> raw;
};

inline Sequent sequent_of(const ReducedWord& w) { return Sequent{w, w.literals()}; }

/// A sequent is group valid when it reduces to the empty word.
inline bool group_valid(const Sequent& s) {
  if (s.raw) return free_reduce(*s.raw).empty();
  return s.word.is_identity();
}

/// Finite set of sequents, kept as a ShortLex-sorted set of canonical words.
class Hypersequent {
 public:
  Hypersequent() = default;
  explicit Hypersequent(std::vector<ReducedWord> words) : words_(std::move(words)) { canonicalize(); }
  Hypersequent(std::initializer_list<ReducedWord> words) : words_(words) { canonicalize(); }

  const std::vector<ReducedWord>& words() const { return words_; }
  std::size_t size() const { return words_.size(); }
  bool empty() const { return words_.empty(); }
  bool contains(const ReducedWord& w) const { return std::binary_search(words_.begin(), words_.end(), w); }

  Hypersequent with(const ReducedWord& w) const {
    Hypersequent h = *this;
    h.words_.push_back(w);
    h.canonicalize();
    return h;
  }
  Hypersequent united(const Hypersequent& other) const {
    Hypersequent h = *this;
    h.words_.insert(h.words_.end(), other.words_.begin(), other.words_.end());
    h.canonicalize();
    return h;
  }

  friend bool operator==(const Hypersequent&, const Hypersequent&) = default;

 private:
  void canonicalize() {
    std::sort(words_.begin(), words_.end());
    words_.erase(std::unique(words_.begin(), words_.end()), words_.end());
  }
  std::vector<ReducedWord> words_;
};

inline std::string format_hypersequent(const Hypersequent& h) {
  std::string s;
  for (std::size_t i = 0; i < h.size(); ++i) {
    if (i) s += " | ";
    s += format_word(h.words()[i]);
  }
  return s;
}

enum class Rule { Id, Ex, Split, Gv, Em, Cut, Star, Cycle, Mix, Com };

inline constexpr Rule kAllRules[] = {Rule::Id,   Rule::Ex,    Rule::Split, Rule::Gv,  Rule::Em,
                                     Rule::Cut,  Rule::Star,  Rule::Cycle, Rule::Mix, Rule::Com};

enum class Calculus { GA, GLG, GLGstar, GRG, GRGstar, GLGanalytic };

inline constexpr Calculus kAllCalculi[] = {Calculus::GA,  Calculus::GLG,     Calculus::GLGstar,
                                           Calculus::GRG, Calculus::GRGstar, Calculus::GLGanalytic};

inline std::string_view rule_name(Rule r) {
  switch (r) {
    case Rule::Id: return "id";
    case Rule::Ex: return "ex";
    case Rule::Split: return "split";
    case Rule::Gv: return "gv";
    case Rule::Em: return "em";
    case Rule::Cut: return "cut";
    case Rule::Star: return "star";
    case Rule::Cycle: return "cycle";
    case Rule::Mix: return "mix";
    case Rule::Com: return "com";
  }
  return "?";
}

inline std::optional<Rule> rule_from_name(std::string_view s) {
  for (Rule r : kAllRules)
    if (rule_name(r) == s) return r;
  return std::nullopt;
}

inline std::string_view calculus_name(Calculus c) {
  switch (c) {
    case Calculus::GA: return "GA";
    case Calculus::GLG: return "GLG";
    case Calculus::GLGstar: return "GLG*";
    case Calculus::GRG: return "GRG";
    case Calculus::GRGstar: return "GRG*";
    case Calculus::GLGanalytic: return "GLG-analytic";
  }
  return "?";
}

inline std::optional<Calculus> calculus_from_name(std::string_view s) {
  for (Calculus c : kAllCalculi)
    if (calculus_name(c) == s) return c;
  if (s == "GLGstar") return Calculus::GLGstar;
  if (s == "GRGstar") return Calculus::GRGstar;
  if (s == "GLGanalytic") return Calculus::GLGanalytic;
  return std::nullopt;
}

inline bool rule_allowed(Calculus c, Rule r) {
  switch (c) {
    case Calculus::GA: return r == Rule::Id || r == Rule::Ex || r == Rule::Split;
    case Calculus::GLGstar: return r == Rule::Gv || r == Rule::Split || r == Rule::Star;
    case Calculus::GLG: return r == Rule::Gv || r == Rule::Em || r == Rule::Cut;
    case Calculus::GRGstar: return r == Rule::Gv || r == Rule::Split || r == Rule::Star || r == Rule::Cycle;
    case Calculus::GRG: return r == Rule::Gv || r == Rule::Em || r == Rule::Cut || r == Rule::Cycle;
    case Calculus::GLGanalytic: return r == Rule::Gv || r == Rule::Mix || r == Rule::Com;
  }
  return false;
}

/// Schema block names, in the order RuleInstance::blocks stores them.
inline std::vector<std::string_view> block_names(Rule r) {
  switch (r) {
    case Rule::Id: return {"Delta"};
    case Rule::Ex: return {"Pi", "Delta", "Gamma"};
    case Rule::Split: return {"Gamma", "Delta"};
    case Rule::Gv: return {"Gamma"};
    case Rule::Em: return {"Delta"};
    case Rule::Cut: return {"Gamma", "Delta", "Sigma"};
    case Rule::Star: return {"Delta"};
    case Rule::Cycle: return {"Gamma", "Delta"};
    case Rule::Mix: return {"Gamma", "Delta"};
    case Rule::Com: return {"Gamma", "Delta", "Pi", "Sigma"};
  }
  return {};
}

inline std::size_t premise_count(Rule r) {
  switch (r) {
    case Rule::Id:
    case Rule::Gv:
    case Rule::Em: return 0;
    case Rule::Ex:
    case Rule::Split:
    case Rule::Cycle: return 1;
    case Rule::Cut:
    case Rule::Star:
    case Rule::Mix:
    case Rule::Com: return 2;
  }
  return 0;
}

struct RuleInstance {
  Rule rule = Rule::Gv;
  std::vector<LiteralSeq> blocks;  // per block_names(rule)
  // Principal sequents: those of each premise in order, then those of the conclusion.
  std::vector<LiteralSeq> active;
};

struct Derivation {
  Hypersequent conclusion;
  RuleInstance instance;
  std::vector<Derivation> premises;

  std::size_t size() const {
    std::size_t n = 1;
    for (const auto& p : premises) n += p.size();
    return n;
  }
};

/// Principal sequents of a rule instantiated with `blocks`.
struct Instantiation {
  std::vector<std::vector<LiteralSeq>> premises;
  std::vector<LiteralSeq> conclusion;

  std::vector<LiteralSeq> flat() const {
    std::vector<LiteralSeq> out;
    for (const auto& p : premises) out.insert(out.end(), p.begin(), p.end());
    out.insert(out.end(), conclusion.begin(), conclusion.end());
    return out;
  }
};

inline Instantiation instantiate(Rule r, std::span<const LiteralSeq> b) {
  auto cat = [](std::initializer_list<const LiteralSeq*> parts) {
    LiteralSeq out;
    for (auto* p : parts) out.insert(out.end(), p->begin(), p->end());
    return out;
  };
  switch (r) {
    case Rule::Id: {
      LiteralSeq di = inverse_seq(b[0]);
      return {{}, {cat({&b[0], &di})}};
    }
    case Rule::Gv: return {{}, {b[0]}};
    case Rule::Em: return {{}, {b[0], inverse_seq(b[0])}};
    case Rule::Ex: return {{{cat({&b[0], &b[1], &b[2]})}}, {cat({&b[0], &b[2], &b[1]})}};
    case Rule::Split: return {{{cat({&b[0], &b[1]})}}, {b[0], b[1]}};
    case Rule::Cut: {
      LiteralSeq di = inverse_seq(b[1]);
      return {{{cat({&b[0], &b[1]})}, {cat({&di, &b[2]})}}, {cat({&b[0], &b[2]})}};
    }
    case Rule::Star: return {{{b[0]}, {inverse_seq(b[0])}}, {}};
    case Rule::Cycle: return {{{cat({&b[1], &b[0]})}}, {cat({&b[0], &b[1]})}};
    case Rule::Mix: return {{{b[0]}, {b[1]}}, {cat({&b[0], &b[1]})}};
    case Rule::Com: return {{{cat({&b[0], &b[3]})}, {cat({&b[2], &b[1]})}}, {cat({&b[0], &b[1]}), cat({&b[2], &b[3]})}};
  }
  return {};
}

inline RuleInstance make_instance(Rule r, std::vector<LiteralSeq> blocks) {
  RuleInstance ri{r, std::move(blocks), {}};
  ri.active = instantiate(r, ri.blocks).flat();
  return ri;
}

// ---------------------------------------------------------------------------
// Checking

struct NodeError {
  enum class Kind { CalculusMismatch, PremiseCount, CertificateMismatch, SideCondition, GoalMismatch, Malformed };
  std::string path;  // "root", "root.0", "root.1.0", ...
  Kind kind;
  std::string message;
};

inline std::string_view error_kind_name(NodeError::Kind k) {
  switch (k) {
    case NodeError::Kind::CalculusMismatch: return "calculus mismatch";
    case NodeError::Kind::PremiseCount: return "wrong premise count";
    case NodeError::Kind::CertificateMismatch: return "certificate mismatch";
    case NodeError::Kind::SideCondition: return "side-condition violation";
    case NodeError::Kind::GoalMismatch: return "goal mismatch";
    case NodeError::Kind::Malformed: return "malformed node";
  }
  return "?";
}

struct CheckReport {
  std::vector<NodeError> errors;
  std::size_t nodes = 0;
  bool accepted() const { return errors.empty(); }
};

namespace detail {

inline std::optional<NodeError> check_node(Calculus calc, const Derivation& d, const std::string& path) {
  using K = NodeError::Kind;
  const RuleInstance& ri = d.instance;
  auto fail = [&](K k, std::string msg) { return NodeError{path, k, std::move(msg)}; };
  if (!rule_allowed(calc, ri.rule))
    return fail(K::CalculusMismatch,
                "rule (" + std::string(rule_name(ri.rule)) + ") is not in " + std::string(calculus_name(calc)));
  if (d.conclusion.empty()) return fail(K::Malformed, "empty hypersequent");
  if (d.premises.size() != premise_count(ri.rule))
    return fail(K::PremiseCount, "(" + std::string(rule_name(ri.rule)) + ") expects " +
                                     std::to_string(premise_count(ri.rule)) + " premises, found " +
                                     std::to_string(d.premises.size()));
  if (ri.blocks.size() != block_names(ri.rule).size())
    return fail(K::CertificateMismatch, "wrong number of certificate blocks");
  Instantiation inst = instantiate(ri.rule, ri.blocks);
  if (inst.flat() != ri.active) return fail(K::CertificateMismatch, "principal sequents do not instantiate the schema");

  // Side conditions.
  if (ri.rule == Rule::Gv && !free_reduce(ri.blocks[0]).empty())
    return fail(K::SideCondition, "(gv) sequent is not group valid");
  if (ri.rule == Rule::Star && free_reduce(ri.blocks[0]).empty())
    return fail(K::SideCondition, "(*) pivot is group valid");

  // Common context: conclusion = G u A_c and premise_i = G u A_i for one G. The smallest
  // candidate is everything outside the principal sequents; it must fit inside every side.
  auto reduced_set = [](const std::vector<LiteralSeq>& seqs) {
    std::vector<ReducedWord> out;
    for (const auto& s : seqs) out.emplace_back(s);
    return Hypersequent(std::move(out));
  };
  std::vector<const Hypersequent*> sides{&d.conclusion};
  std::vector<Hypersequent> actives{reduced_set(inst.conclusion)};
  for (std::size_t i = 0; i < d.premises.size(); ++i) {
    sides.push_back(&d.premises[i].conclusion);
    actives.push_back(reduced_set(inst.premises[i]));
  }
  std::vector<ReducedWord> context;
  for (std::size_t s = 0; s < sides.size(); ++s) {
    for (const auto& w : actives[s].words())
      if (!sides[s]->contains(w))
        return fail(K::CertificateMismatch, std::string(s == 0 ? "conclusion" : "premise " + std::to_string(s - 1)) +
                                                " lacks principal sequent " + format_word(w));
    for (const auto& w : sides[s]->words())
      if (!actives[s].contains(w)) context.push_back(w);
  }
  Hypersequent ctx(std::move(context));
  for (std::size_t s = 0; s < sides.size(); ++s)
    for (const auto& w : ctx.words())
      if (!sides[s]->contains(w))
        return fail(K::CertificateMismatch, "context sequent " + format_word(w) + " missing from " +
                                                (s == 0 ? std::string("conclusion") : "premise " + std::to_string(s - 1)));
  return std::nullopt;
}

inline void check_tree(Calculus calc, const Derivation& d, const std::string& path, CheckReport& report) {
  // Explicit stack: derivations from long certificates can be thousands of nodes deep.
  std::vector<std::pair<const Derivation*, std::string>> stack{{&d, path}};
  while (!stack.empty()) {
    auto [node, p] = std::move(stack.back());
    stack.pop_back();
    ++report.nodes;
    if (auto err = check_node(calc, *node, p)) report.errors.push_back(std::move(*err));
    for (std::size_t i = node->premises.size(); i-- > 0;)
      stack.emplace_back(&node->premises[i], p + "." + std::to_string(i));
  }
}

}  // namespace detail

/// Accepts iff the root concludes `goal` and every node is a correct instance of a rule of
/// `calc`. All failing nodes are reported.
inline CheckReport check(Calculus calc, const Derivation& d, const Hypersequent& goal) {
  CheckReport report;
  if (!(d.conclusion == goal))
    report.errors.push_back({"root", NodeError::Kind::GoalMismatch,
                             "derivation concludes " + format_hypersequent(d.conclusion) + " instead of " +
                                 format_hypersequent(goal)});
  detail::check_tree(calc, d, "root", report);
  return report;
}

// ---------------------------------------------------------------------------
// Extraction

class ExtractionError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Shrinks each premise to what its subtree needs plus the context its conclusion forces on it.
/// A sequent the subtree needs is either principal somewhere above or shared context.
inline void trim_contexts(Derivation& d) {
  auto reduced = [](const std::vector<LiteralSeq>& seqs) {
    std::vector<ReducedWord> out;
    for (const auto& s : seqs) out.emplace_back(s);
    return Hypersequent(std::move(out));
  };
  std::vector<Derivation*> order{&d};
  for (std::size_t i = 0; i < order.size(); ++i)
    for (auto& p : order[i]->premises) order.push_back(&p);
  for (auto* n : order)
    if (n->instance.blocks.size() != block_names(n->instance.rule).size() ||
        n->premises.size() != premise_count(n->instance.rule))
      return;

  std::unordered_map<const Derivation*, Hypersequent> need, above;  // above: needed by premises, as context
  for (auto it = order.rbegin(); it != order.rend(); ++it) {
    const Derivation* n = *it;
    Instantiation inst = instantiate(n->instance.rule, n->instance.blocks);
    Hypersequent ctx;
    for (std::size_t i = 0; i < n->premises.size(); ++i) {
      const Hypersequent principal = reduced(inst.premises[i]);
      for (const auto& w : need[&n->premises[i]].words())
        if (!principal.contains(w)) ctx = ctx.with(w);
    }
    need[n] = ctx.united(reduced(inst.conclusion));
    above[n] = std::move(ctx);
  }
  for (auto* n : order) {
    Instantiation inst = instantiate(n->instance.rule, n->instance.blocks);
    const Hypersequent principal = reduced(inst.conclusion);
    std::vector<ReducedWord> shared;
    for (const auto& w : n->conclusion.words())
      if (!principal.contains(w) || above[n].contains(w)) shared.push_back(w);
    for (std::size_t i = 0; i < n->premises.size(); ++i)
      n->premises[i].conclusion = Hypersequent(shared).united(reduced(inst.premises[i]));
  }
}

namespace detail {

/// Builds a linear derivation upward from an axiom. Each step replaces one item of the
/// running hypersequent; `fixed` words stay present throughout.
class Chain {
 public:
  explicit Chain(Hypersequent fixed) : fixed_(std::move(fixed)) {}

  void axiom(std::vector<ReducedWord> items, RuleInstance ri) {
    items_ = std::move(items);
    node_ = Derivation{current(), std::move(ri), {}};
  }
  void step(std::vector<ReducedWord> items, RuleInstance ri) {
    items_ = std::move(items);
    Derivation next{current(), std::move(ri), {}};
    next.premises.push_back(std::move(node_));
    node_ = std::move(next);
  }
  const std::vector<ReducedWord>& items() const { return items_; }
  Derivation take() { return std::move(node_); }

 private:
  Hypersequent current() const { return fixed_.united(Hypersequent(items_)); }

  Hypersequent fixed_;
  std::vector<ReducedWord> items_;
  Derivation node_;
};

inline LiteralSeq concat_range(std::span<const LiteralSeq> blocks) {
  LiteralSeq out;
  for (const auto& b : blocks) out.insert(out.end(), b.begin(), b.end());
  return out;
}

/// From `fixed | B_0 ... B_{m-1}` (one sequent) split off every block in turn.
inline void split_blocks(Chain& chain, std::vector<ReducedWord> done, std::span<const LiteralSeq> blocks) {
  for (std::size_t j = 0; j + 1 < blocks.size(); ++j) {
    LiteralSeq head = blocks[j];
    LiteralSeq rest = concat_range(blocks.subspan(j + 1));
    done.emplace_back(head);
    std::vector<ReducedWord> items = done;
    items.emplace_back(rest);
    chain.step(std::move(items), make_instance(Rule::Split, {head, rest}));
  }
}

}  // namespace detail

/// GA derivation of the hypersequent `words` from a balancing combination: (id) on a
/// balanced sequent, (ex) moves to reach t_1^l_1 ... t_n^l_n, then (split) at each block.
inline Derivation derive_ga(std::span<const ReducedWord> words, const Combination& lambda) {
  int k = 1;
  for (const auto& w : words) k = std::max(k, w.max_generator());
  std::vector<ExponentVector> vecs;
  for (const auto& w : words) vecs.push_back(abelianize(w, k));
  if (!verify(lambda, vecs)) throw ExtractionError("derive_ga: combination does not balance the words");

  std::vector<ReducedWord> unused;
  std::vector<LiteralSeq> blocks;
  for (std::size_t i = 0; i < words.size(); ++i) {
    if (lambda.lambda[i] == 0) unused.push_back(words[i]);
    for (std::int64_t c = 0; c < lambda.lambda[i]; ++c) blocks.push_back(words[i].literals());
  }
  const LiteralSeq target = detail::concat_range(blocks);

  LiteralSeq delta;
  for (Literal l : target)
    if (l.sign() > 0) delta.push_back(l);
  LiteralSeq cur = delta;
  for (Literal l : inverse_seq(delta)) cur.push_back(l);

  detail::Chain chain{Hypersequent(unused)};
  chain.axiom({ReducedWord(cur)}, make_instance(Rule::Id, {delta}));

  // Move literals to the end one at a time, in target order.
  const std::size_t n = target.size();
  for (std::size_t j = 0; j < n && cur != target; ++j) {
    std::size_t p = 0;
    while (cur[p] != target[j]) ++p;  // present: cur is a permutation of target
    if (p + 1 == n) continue;
    LiteralSeq pi(cur.begin(), cur.begin() + static_cast<std::ptrdiff_t>(p));
    LiteralSeq d{cur[p]};
    LiteralSeq g(cur.begin() + static_cast<std::ptrdiff_t>(p) + 1, cur.end());
    cur = pi;
    cur.insert(cur.end(), g.begin(), g.end());
    cur.push_back(d[0]);
    chain.step({ReducedWord(cur)}, make_instance(Rule::Ex, {pi, d, g}));
  }
  detail::split_blocks(chain, {}, blocks);
  Derivation d = chain.take();
  trim_contexts(d);
  return d;
}

namespace detail {

inline Derivation glg_node(std::span<const ReducedWord> roots, std::vector<SignedPivot>& path,
                           const LgRefutation& t) {
  std::vector<ReducedWord> gens(roots.begin(), roots.end());
  for (const auto& p : path) gens.push_back(p.value());
  Hypersequent h(gens);
  if (t.is_leaf()) {
    if (!verify_factorization(gens, *t.leaf)) throw ExtractionError("leaf factorization does not reduce to e");
    std::vector<LiteralSeq> blocks;
    for (auto f : t.leaf->factors) blocks.push_back(gens[f].literals());
    Chain chain{h};
    LiteralSeq all = concat_range(blocks);
    chain.axiom({ReducedWord(all)}, make_instance(Rule::Gv, {all}));
    split_blocks(chain, {}, blocks);
    return chain.take();
  }
  if (auto err = check_path_pivot(path, t.pivot)) throw ExtractionError(*err);
  Derivation d{h, make_instance(Rule::Star, {t.pivot.literals()}), {}};
  for (int sign : {1, -1}) {
    path.push_back({t.pivot, sign});
    d.premises.push_back(glg_node(roots, path, sign > 0 ? *t.positive : *t.negative));
    path.pop_back();
  }
  return d;
}

inline Derivation grg_node(std::span<const ReducedWord> roots, std::vector<SignedPivot>& path,
                           const RgRefutation& t) {
  std::vector<ReducedWord> gens(roots.begin(), roots.end());
  for (const auto& p : path) gens.push_back(p.value());
  Hypersequent h(gens);
  if (t.is_leaf()) {
    if (auto err = check_leaf(roots, path, *t.leaf)) throw ExtractionError(*err);
    // Blocks q, b, q^-1 for each conjugate r = q b q^-1.
    std::vector<LiteralSeq> conj_raw;
    std::vector<ReducedWord> bases;
    std::vector<LiteralSeq> qs;
    for (const auto& c : t.leaf->factors) {
      const ReducedWord& base = c.base < roots.size() ? roots[c.base] : path[c.base - roots.size()].pivot;
      ReducedWord b = c.sign > 0 ? base : inv(base);
      LiteralSeq raw = c.conjugator.literals();
      raw.insert(raw.end(), b.begin(), b.end());
      for (Literal l : inverse_seq(c.conjugator.literals())) raw.push_back(l);
      conj_raw.push_back(std::move(raw));
      bases.push_back(b);
      qs.push_back(c.conjugator.literals());
    }
    Chain chain{h};
    LiteralSeq all = concat_range(conj_raw);
    chain.axiom({ReducedWord(all)}, make_instance(Rule::Gv, {all}));
    std::vector<ReducedWord> done;
    const std::size_t l = conj_raw.size();
    for (std::size_t j = 0; j < l; ++j) {
      if (j + 1 < l) {
        LiteralSeq rest = concat_range(std::span<const LiteralSeq>(conj_raw).subspan(j + 1));
        std::vector<ReducedWord> items = done;
        items.emplace_back(conj_raw[j]);
        items.emplace_back(rest);
        chain.step(std::move(items), make_instance(Rule::Split, {conj_raw[j], rest}));
      }
      std::vector<ReducedWord> tail;
      if (j + 1 < l) tail.emplace_back(concat_range(std::span<const LiteralSeq>(conj_raw).subspan(j + 1)));
      if (!qs[j].empty()) {
        // q, (b q^-1)  ->  (b q^-1), q  which reduces to b.
        LiteralSeq bq(conj_raw[j].begin() + static_cast<std::ptrdiff_t>(qs[j].size()), conj_raw[j].end());
        std::vector<ReducedWord> items = done;
        items.push_back(bases[j]);
        items.insert(items.end(), tail.begin(), tail.end());
        chain.step(std::move(items), make_instance(Rule::Cycle, {bq, qs[j]}));
      }
      done.push_back(bases[j]);
    }
    return chain.take();
  }
  if (auto err = check_path_pivot(path, t.pivot)) throw ExtractionError(*err);
  Derivation d{h, make_instance(Rule::Star, {t.pivot.literals()}), {}};
  for (int sign : {1, -1}) {
    path.push_back({t.pivot, sign});
    d.premises.push_back(grg_node(roots, path, sign > 0 ? *t.positive : *t.negative));
    path.pop_back();
  }
  return d;
}

}  // namespace detail

/// GLG* derivation of `words` from a refutation tree: leaves become (gv) plus (split),
/// branches become (*) on the pivot.
inline Derivation derive_glgstar(std::span<const ReducedWord> words, const LgRefutation& tree) {
  std::vector<SignedPivot> path;
  Derivation d = detail::glg_node(words, path, tree);
  trim_contexts(d);
  return d;
}

/// GRG* derivation: leaves are (gv) on a product of conjugates, split into blocks and rotated
/// back to the base words with (cycle).
inline Derivation derive_grgstar(std::span<const ReducedWord> words, const RgRefutation& tree) {
  std::vector<SignedPivot> path;
  Derivation d = detail::grg_node(words, path, tree);
  trim_contexts(d);
  return d;
}

/// Weakens every node by `extra`; the result concludes d.conclusion | extra in the same calculus.
inline Derivation admissible_ew_expand(Calculus calc, const Derivation& d, const Hypersequent& extra) {
  if (calc != Calculus::GLG && calc != Calculus::GRG)
    throw std::invalid_argument("external weakening is only provided for GLG and GRG");
  Derivation out{d.conclusion.united(extra), d.instance, {}};
  for (const auto& p : d.premises) out.premises.push_back(admissible_ew_expand(calc, p, extra));
  return out;
}

}  // namespace ordcalc
