#pragma once

// Deciding e in <S> (the subsemigroup generated by a finite S in F(k)) by saturating the
// flower automaton of S with cancellation pairs, and extracting an explicit factorization.

#include <cstdint>
#include <deque>
#include <map>
#include <optional>
#include <span>
#include <stdexcept>
#include <unordered_map>
#include <utility>
#include <vector>

#include "ordcalc/freegroup.hpp"

namespace ordcalc {

/// Indices into a generating list whose product (in order) reduces to e. Never empty.
struct Factorization {
  std::vector<std::size_t> factors;
  friend bool operator==(const Factorization&, const Factorization&) = default;
};

inline ReducedWord evaluate_factorization(std::span<const ReducedWord> gens, const Factorization& f) {
  ReducedWord acc;
  for (std::size_t i : f.factors) {
    if (i >= gens.size()) throw std::out_of_range("factorization index out of range");
    acc = mul(acc, gens[i]);
  }
  return acc;
}

inline bool verify_factorization(std::span<const ReducedWord> gens, const Factorization& f) {
  if (f.factors.empty()) return false;
  for (std::size_t i : f.factors)
    if (i >= gens.size()) return false;
  return evaluate_factorization(gens, f).is_identity();
}

struct Transition {
  std::uint32_t from;
  std::uint32_t to;
  Literal label;
  std::uint32_t petal;  // index of the generating word this edge belongs to
};

/// Why an epsilon pair (p, s) holds: a path p -> s whose label freely reduces to e.
struct EpsilonPair {
  enum class Rule : std::uint8_t {
    Cancel,   // p -l-> q, q =>* r, r -l'-> s
    Compose,  // p => r, r => s
  };
  static constexpr std::uint32_t kNone = 0xffffffffu;

  std::uint32_t from;
  std::uint32_t to;
  Rule rule;
  // Cancel: first/last are transition ids, middle a pair id or kNone (empty middle).
  // Compose: first/last are pair ids.
  std::uint32_t first;
  std::uint32_t middle;
  std::uint32_t last;
};

class WordAutomaton {
 public:
  static constexpr std::uint32_t kBase = 0;

  std::uint32_t state_count() const { return static_cast<std::uint32_t>(out_.size()); }
  const std::vector<Transition>& transitions() const { return transitions_; }
  const std::vector<EpsilonPair>& epsilon() const { return epsilon_; }
  std::size_t petal_count() const { return petals_; }

  bool has_epsilon(std::uint32_t from, std::uint32_t to) const { return pair_index_.count(key(from, to)) != 0; }
  std::optional<std::uint32_t> epsilon_id(std::uint32_t from, std::uint32_t to) const {
    auto it = pair_index_.find(key(from, to));
    if (it == pair_index_.end()) return std::nullopt;
    return it->second;
  }

  /// Transition ids along the path certified by epsilon pair `id`.
  std::vector<std::uint32_t> expand(std::uint32_t id, std::size_t limit = 50'000'000) const {
    std::vector<std::uint32_t> path;
    // Frames: (is_transition, id).
    std::vector<std::pair<bool, std::uint32_t>> stack{{false, id}};
    while (!stack.empty()) {
      auto [is_edge, cur] = stack.back();
      stack.pop_back();
      if (is_edge) {
        path.push_back(cur);
        if (path.size() > limit) throw std::length_error("witness path exceeds limit");
        continue;
      }
      const EpsilonPair& p = epsilon_[cur];
      if (p.rule == EpsilonPair::Rule::Cancel) {
        stack.emplace_back(true, p.last);
        if (p.middle != EpsilonPair::kNone) stack.emplace_back(false, p.middle);
        stack.emplace_back(true, p.first);
      } else {
        stack.emplace_back(false, p.last);
        stack.emplace_back(false, p.first);
      }
    }
    return path;
  }

 private:
  friend WordAutomaton build_flower(std::span<const ReducedWord> words);
  friend WordAutomaton build_compact(std::span<const ReducedWord> words);
  friend class Saturator;

  static std::uint64_t key(std::uint32_t a, std::uint32_t b) { return (std::uint64_t{a} << 32) | b; }

  std::uint32_t add_state() {
    out_.emplace_back();
    in_.emplace_back();
    return state_count() - 1;
  }
  void add_transition(std::uint32_t from, std::uint32_t to, Literal l, std::uint32_t petal) {
    auto id = static_cast<std::uint32_t>(transitions_.size());
    transitions_.push_back({from, to, l, petal});
    out_[from].push_back(id);
    in_[to].push_back(id);
  }

  std::size_t petals_ = 0;
  std::vector<Transition> transitions_;
  std::vector<std::vector<std::uint32_t>> out_;
  std::vector<std::vector<std::uint32_t>> in_;
  std::vector<EpsilonPair> epsilon_;
  std::unordered_map<std::uint64_t, std::uint32_t> pair_index_;
  std::vector<std::vector<std::uint32_t>> eps_out_;  // targets
  std::vector<std::vector<std::uint32_t>> eps_in_;   // sources
};

/// One cycle through the base state per element of `words`, spelling that element.
inline WordAutomaton build_flower(std::span<const ReducedWord> words) {
  WordAutomaton a;
  a.add_state();
  for (std::size_t i = 0; i < words.size(); ++i) {
    const auto& w = words[i];
    if (w.is_identity()) throw std::invalid_argument("build_flower: the identity cannot label a petal");
    auto petal = static_cast<std::uint32_t>(i);
    std::uint32_t prev = WordAutomaton::kBase;
    for (std::size_t j = 0; j < w.length(); ++j) {
      std::uint32_t next = (j + 1 == w.length()) ? WordAutomaton::kBase : a.add_state();
      a.add_transition(prev, next, w[j], petal);
      prev = next;
    }
  }
  a.petals_ = words.size();
  return a;
}

class Saturator {
 public:
  explicit Saturator(WordAutomaton& a) : a_(a) {
    a_.eps_out_.assign(a_.state_count(), {});
    a_.eps_in_.assign(a_.state_count(), {});
    for (std::uint32_t id = 0; id < a_.epsilon_.size(); ++id) {
      a_.eps_out_[a_.epsilon_[id].from].push_back(a_.epsilon_[id].to);
      a_.eps_in_[a_.epsilon_[id].to].push_back(a_.epsilon_[id].from);
      queue_.push_back(id);
    }
  }

  /// Runs to fixpoint, or until the pair (stop, stop) appears when `stop` is set.
  void run(std::optional<std::uint32_t> stop) {
    stop_ = stop;
    for (std::uint32_t q = 0; q < a_.state_count(); ++q)
      for (auto tin : a_.in_[q])
        for (auto tout : a_.out_[q])
          if (cancels(a_.transitions_[tin].label, a_.transitions_[tout].label)) {
            add(a_.transitions_[tin].from, a_.transitions_[tout].to,
                {0, 0, EpsilonPair::Rule::Cancel, tin, EpsilonPair::kNone, tout});
            if (done_) return;
          }
    while (!queue_.empty() && !done_) {
      std::uint32_t id = queue_.front();
      queue_.pop_front();
      process(id);
    }
  }

 private:
  void process(std::uint32_t id) {
    const std::uint32_t a = a_.epsilon_[id].from;
    const std::uint32_t b = a_.epsilon_[id].to;
    for (auto tin : a_.in_[a])
      for (auto tout : a_.out_[b])
        if (cancels(a_.transitions_[tin].label, a_.transitions_[tout].label)) {
          add(a_.transitions_[tin].from, a_.transitions_[tout].to, {0, 0, EpsilonPair::Rule::Cancel, tin, id, tout});
          if (done_) return;
        }
    for (std::size_t i = 0; i < a_.eps_out_[b].size(); ++i) {
      std::uint32_t c = a_.eps_out_[b][i];
      add(a, c, {0, 0, EpsilonPair::Rule::Compose, id, 0, *a_.epsilon_id(b, c)});
      if (done_) return;
    }
    for (std::size_t i = 0; i < a_.eps_in_[a].size(); ++i) {
      std::uint32_t z = a_.eps_in_[a][i];
      add(z, b, {0, 0, EpsilonPair::Rule::Compose, *a_.epsilon_id(z, a), 0, id});
      if (done_) return;
    }
  }

  void add(std::uint32_t from, std::uint32_t to, EpsilonPair p) {
    auto [it, inserted] = a_.pair_index_.try_emplace(WordAutomaton::key(from, to),
                                                     static_cast<std::uint32_t>(a_.epsilon_.size()));
    if (!inserted) return;
    p.from = from;
    p.to = to;
    a_.epsilon_.push_back(p);
    a_.eps_out_[from].push_back(to);
    a_.eps_in_[to].push_back(from);
    queue_.push_back(it->second);
    if (stop_ && from == *stop_ && to == *stop_) done_ = true;
  }

  WordAutomaton& a_;
  std::deque<std::uint32_t> queue_;
  std::optional<std::uint32_t> stop_;
  bool done_ = false;
};

/// Closes the epsilon relation under cancellation and composition.
inline WordAutomaton saturate(WordAutomaton a) {
  Saturator(a).run(std::nullopt);
  return a;
}

/// Same base-to-base cycles as the flower, with common prefixes shared (a trie rooted at the
/// base) and states with identical continuations merged. Petal ids are not meaningful here.
inline WordAutomaton build_compact(std::span<const ReducedWord> words) {
  constexpr std::int64_t kFinal = -1;
  struct Node {
    std::vector<std::pair<Literal, std::int64_t>> edges;
  };
  std::vector<Node> trie(1);
  for (const auto& w : words) {
    if (w.is_identity()) throw std::invalid_argument("build_compact: the identity cannot label a cycle");
    std::size_t cur = 0;
    for (std::size_t j = 0; j + 1 < w.length(); ++j) {
      std::int64_t next = -2;
      for (const auto& [l, t] : trie[cur].edges)
        if (l == w[j] && t != kFinal) next = t;
      if (next < 0) {
        next = static_cast<std::int64_t>(trie.size());
        trie[cur].edges.emplace_back(w[j], next);
        trie.emplace_back();
      }
      cur = static_cast<std::size_t>(next);
    }
    auto fin = std::make_pair(w[w.length() - 1], kFinal);
    auto& e = trie[cur].edges;
    if (std::find(e.begin(), e.end(), fin) == e.end()) e.push_back(fin);
  }

  // Children always have larger trie indices, so a reverse sweep is a post-order.
  WordAutomaton a;
  a.add_state();
  std::vector<std::uint32_t> canon(trie.size(), WordAutomaton::kBase);
  std::map<std::vector<std::pair<int, std::uint32_t>>, std::uint32_t> by_signature;
  auto signature = [&](std::size_t n) {
    std::vector<std::pair<int, std::uint32_t>> sig;
    for (const auto& [l, t] : trie[n].edges)
      sig.emplace_back(l.signed_index(), t == kFinal ? WordAutomaton::kBase : canon[static_cast<std::size_t>(t)]);
    std::sort(sig.begin(), sig.end());
    sig.erase(std::unique(sig.begin(), sig.end()), sig.end());
    return sig;
  };
  for (std::size_t n = trie.size(); n-- > 1;) {
    auto sig = signature(n);
    auto [it, inserted] = by_signature.try_emplace(sig, 0);
    if (inserted) {
      it->second = a.add_state();
      for (const auto& [l, t] : sig) a.add_transition(it->second, t, Literal::from_signed(l), 0);
    }
    canon[n] = it->second;
  }
  for (const auto& [l, t] : signature(0)) a.add_transition(WordAutomaton::kBase, t, Literal::from_signed(l), 0);
  a.petals_ = words.size();
  return a;
}

struct MembershipResult {
  bool contains = false;
  std::optional<Factorization> witness;
};

/// Decides whether some nonempty product of elements of `words` equals e in F(k).
inline MembershipResult contains_identity(std::span<const ReducedWord> words) {
  for (std::size_t i = 0; i < words.size(); ++i)
    if (words[i].is_identity()) return {true, Factorization{{i}}};
  if (words.empty()) return {};
  WordAutomaton a = build_compact(words);
  Saturator(a).run(WordAutomaton::kBase);
  auto id = a.epsilon_id(WordAutomaton::kBase, WordAutomaton::kBase);
  if (!id) return {};
  // A base-to-base path is a sequence of whole cycles; each one spells an element of `words`.
  std::map<LiteralSeq, std::size_t> index;
  for (std::size_t i = words.size(); i-- > 0;) index[words[i].literals()] = i;
  Factorization f;
  LiteralSeq segment;
  for (auto t : a.expand(*id)) {
    const Transition& tr = a.transitions()[t];
    segment.push_back(tr.label);
    if (tr.to == WordAutomaton::kBase) {
      f.factors.push_back(index.at(segment));
      segment.clear();
    }
  }
  return {true, std::move(f)};
}

}  // namespace ordcalc
