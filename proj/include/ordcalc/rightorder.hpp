#pragma once

// Order-extension engines on free groups:
//  * truncated right orders with sign branching (decides right-order extension),
//  * the initial-subterm pivot procedure (second, independent decision for the same question),
//  * bounded conjugate-closed refutation (semi-decides extension to a bi-order).

#include <algorithm>
#include <cstdint>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <unordered_map>
#include <unordered_set>
#include <utility>
#include <variant>
#include <vector>

#include "ordcalc/freegroup.hpp"
#include "ordcalc/membership.hpp"
#include "ordcalc/refutation.hpp"

namespace ordcalc {

/// Positive-cone fragment of a right order inside the ball F_N(k).
struct TruncatedRightOrder {
  int arity = 1;
  std::size_t level = 0;
  std::vector<ReducedWord> elements;  // ShortLex sorted

  bool contains(const ReducedWord& w) const { return std::binary_search(elements.begin(), elements.end(), w); }
};

/// Checks the defining invariants; returns the first violation found.
inline std::optional<std::string> verify_truncated(const TruncatedRightOrder& order) {
  const auto& el = order.elements;
  if (!std::is_sorted(el.begin(), el.end()) || std::adjacent_find(el.begin(), el.end()) != el.end())
    return "elements are not a sorted set";
  for (const auto& w : el) {
    if (w.is_identity()) return "the identity is an element";
    if (w.length() > order.level) return "element " + format_word(w) + " is longer than N";
    if (w.max_generator() > order.arity) return "element " + format_word(w) + " exceeds the arity";
  }
  for (const auto& s : el)
    for (const auto& t : el) {
      ReducedWord st = mul(s, t);
      if (st.length() <= order.level && !order.contains(st))
        return "not closed: " + format_word(s) + " * " + format_word(t) + " = " + format_word(st) + " missing";
    }
  if (order.level >= 1)
    for (const auto& w : ball(order.arity, static_cast<int>(order.level) - 1))
      if (!w.is_identity() && !order.contains(w) && !order.contains(inv(w)))
        return "not total: neither " + format_word(w) + " nor its inverse is an element";
  return std::nullopt;
}

namespace detail {

/// A product-closed subset of F_N(k) that remembers how every element arose.
class TruncatedClosure {
 public:
  explicit TruncatedClosure(std::size_t level) : level_(level) {}

  /// Adds generator number `gen` (an index into the caller's generating list) and closes.
  void add_generator(const ReducedWord& w, std::size_t gen) {
    if (contradiction_) return;
    if (w.is_identity()) {
      contradiction_ = Factorization{{gen}};
      return;
    }
    insert(w, Origin{static_cast<std::int64_t>(gen), -1});
    close();
  }

  bool contains(const ReducedWord& w) const { return index_.count(w) != 0; }
  const std::optional<Factorization>& contradiction() const { return contradiction_; }
  const std::vector<ReducedWord>& elements() const { return elems_; }

 private:
  struct Origin {
    std::int64_t left;   // generator index when right < 0, else element index
    std::int64_t right;  // element index, or -1
  };

  void insert(const ReducedWord& w, Origin o) {
    if (index_.count(w)) return;
    index_.emplace(w, elems_.size());
    elems_.push_back(w);
    origin_.push_back(o);
  }

  void expand(std::size_t i, std::vector<std::size_t>& out) const {
    // Iterative to survive long product chains.
    std::vector<std::size_t> stack{i};
    while (!stack.empty()) {
      std::size_t cur = stack.back();
      stack.pop_back();
      const Origin& o = origin_[cur];
      if (o.right < 0) {
        out.push_back(static_cast<std::size_t>(o.left));
      } else {
        stack.push_back(static_cast<std::size_t>(o.right));
        stack.push_back(static_cast<std::size_t>(o.left));
      }
    }
  }

  bool try_product(std::size_t i, std::size_t j) {
    ReducedWord p = mul(elems_[i], elems_[j]);
    if (p.length() > level_) return false;
    if (p.is_identity()) {
      Factorization f;
      expand(i, f.factors);
      expand(j, f.factors);
      contradiction_ = std::move(f);
      return true;
    }
    insert(p, Origin{static_cast<std::int64_t>(i), static_cast<std::int64_t>(j)});
    return false;
  }

  void close() {
    while (processed_ < elems_.size()) {
      std::size_t i = processed_;
      for (std::size_t j = 0; j <= i; ++j) {
        if (try_product(i, j)) return;
        if (j != i && try_product(j, i)) return;
      }
      ++processed_;
    }
  }

  std::size_t level_;
  std::vector<ReducedWord> elems_;
  std::vector<Origin> origin_;
  std::unordered_map<ReducedWord, std::size_t> index_;
  std::size_t processed_ = 0;
  std::optional<Factorization> contradiction_;
};

}  // namespace detail

/// Least superset of S closed under products of length <= N. Contains e when S generates e
/// within the ball.
inline std::vector<ReducedWord> close_truncated(std::span<const ReducedWord> words, std::size_t level) {
  detail::TruncatedClosure c(level);
  for (std::size_t i = 0; i < words.size(); ++i) {
    if (words[i].length() > level) throw std::invalid_argument("close_truncated: element longer than N");
    c.add_generator(words[i], i);
  }
  std::vector<ReducedWord> out = c.elements();
  if (c.contradiction()) out.push_back(ReducedWord{});
  std::sort(out.begin(), out.end());
  out.erase(std::unique(out.begin(), out.end()), out.end());
  return out;
}

using RightOrderResult = std::variant<TruncatedRightOrder, LgRefutationPtr>;

namespace detail {

class TruncatedSearch {
 public:
  TruncatedSearch(std::size_t roots, int arity, std::size_t level) : roots_(roots), arity_(arity), level_(level) {
    if (level >= 1)
      for (auto& w : ball(arity, static_cast<int>(level) - 1))
        if (!w.is_identity()) pool_.push_back(std::move(w));
  }

  RightOrderResult run(const TruncatedClosure& state, std::size_t depth) {
    if (state.contradiction()) return LgRefutation::make_leaf(*state.contradiction());
    const ReducedWord* pivot = nullptr;
    for (const auto& t : pool_)
      if (!state.contains(t) && !state.contains(inv(t))) {
        pivot = &t;
        break;
      }
    if (!pivot) {
      TruncatedRightOrder order{arity_, level_, state.elements()};
      std::sort(order.elements.begin(), order.elements.end());
      return order;
    }
    LgRefutationPtr sub[2];
    for (int b = 0; b < 2; ++b) {
      TruncatedClosure next = state;
      next.add_generator(b == 0 ? *pivot : inv(*pivot), roots_ + depth);
      auto r = run(next, depth + 1);
      if (std::holds_alternative<TruncatedRightOrder>(r)) return r;
      sub[b] = std::get<LgRefutationPtr>(r);
    }
    return LgRefutation::make_branch(*pivot, sub[0], sub[1]);
  }

 private:
  std::size_t roots_;
  int arity_;
  std::size_t level_;
  std::vector<ReducedWord> pool_;
};

}  // namespace detail

/// Either a truncated right order containing `words` (so they extend to a right order of F(k))
/// or a refutation tree. N defaults to the maximal input length; a larger level may be
/// requested for diagnostics.
inline RightOrderResult extend_right_order(std::span<const ReducedWord> words, int arity,
                                           std::optional<std::size_t> level = std::nullopt) {
  if (arity < 1) throw std::invalid_argument("extend_right_order: arity must be >= 1");
  std::size_t n = 0;
  for (const auto& w : words) {
    n = std::max(n, w.length());
    if (w.max_generator() > arity) throw std::invalid_argument("extend_right_order: word exceeds arity");
  }
  if (level) {
    if (*level < n) throw std::invalid_argument("extend_right_order: level below maximal input length");
    n = *level;
  }
  for (std::size_t i = 0; i < words.size(); ++i)
    if (words[i].is_identity()) return LgRefutation::make_leaf(Factorization{{i}});
  detail::TruncatedClosure root(n);
  for (std::size_t i = 0; i < words.size(); ++i) root.add_generator(words[i], i);
  return detail::TruncatedSearch(words.size(), arity, n).run(root, 0);
}

// ---------------------------------------------------------------------------
// Initial subterms

/// All prefixes of the given reduced words, including the empty prefix. ShortLex sorted.
inline std::vector<ReducedWord> initial_subterms(std::span<const ReducedWord> words) {
  std::vector<ReducedWord> out{ReducedWord{}};
  for (const auto& w : words)
    for (std::size_t len = 1; len <= w.length(); ++len)
      out.emplace_back(std::span<const Literal>(w.literals().data(), len));
  std::sort(out.begin(), out.end());
  out.erase(std::unique(out.begin(), out.end()), out.end());
  return out;
}

/// Nonidentity reduced words s^-1 t with s, t initial subterms. Closed under inversion.
inline std::vector<ReducedWord> cis(std::span<const ReducedWord> words) {
  auto is = initial_subterms(words);
  std::vector<ReducedWord> out;
  for (const auto& s : is) {
    ReducedWord si = inv(s);
    for (const auto& t : is) {
      ReducedWord w = mul(si, t);
      if (!w.is_identity()) out.push_back(std::move(w));
    }
  }
  std::sort(out.begin(), out.end());
  out.erase(std::unique(out.begin(), out.end()), out.end());
  return out;
}

/// ShortLex-least member of each {w, w^-1} pair, sorted.
inline std::vector<ReducedWord> inverse_pair_representatives(std::span<const ReducedWord> words) {
  std::vector<ReducedWord> out;
  for (const auto& w : words) {
    if (w.is_identity()) continue;
    out.push_back(std::min(w, inv(w)));
  }
  std::sort(out.begin(), out.end());
  out.erase(std::unique(out.begin(), out.end()), out.end());
  return out;
}

using SignAssignment = std::vector<SignedPivot>;

using PivotSearchResult = std::variant<LgRefutationPtr, SignAssignment>;

/// For every sign assignment on `pivots`, looks for e in <words, pivots^signs>. Returns a
/// refutation tree when all assignments hit e, otherwise a full assignment where none does.
/// Subtrees are cut as soon as e is generated (supersets generate e too).
inline PivotSearchResult sign_search(std::span<const ReducedWord> words, std::span<const ReducedWord> pivots) {
  std::vector<ReducedWord> gens(words.begin(), words.end());
  SignAssignment path;
  std::optional<SignAssignment> failure;
  auto rec = [&](auto&& self, std::size_t i) -> LgRefutationPtr {
    auto m = contains_identity(gens);
    if (m.contains) return LgRefutation::make_leaf(*m.witness);
    if (i == pivots.size()) {
      failure = path;
      return nullptr;
    }
    LgRefutationPtr sub[2];
    for (int b = 0; b < 2; ++b) {
      int sign = b == 0 ? 1 : -1;
      path.push_back({pivots[i], sign});
      gens.push_back(path.back().value());
      sub[b] = self(self, i + 1);
      gens.pop_back();
      path.pop_back();
      if (!sub[b]) return nullptr;
    }
    return LgRefutation::make_branch(pivots[i], sub[0], sub[1]);
  };
  auto tree = rec(rec, 0);
  if (tree) return tree;
  return *failure;
}

// ---------------------------------------------------------------------------
// Bounded conjugate-closed refutation

struct RgBounds {
  std::size_t conjugator_length = 3;
  std::optional<std::vector<ReducedWord>> pivots;  // default: cis(words)
};

namespace detail {

struct ConjugateEntry {
  ReducedWord value;
  ConjugateFactor factor;
};

inline void add_conjugates(std::vector<ConjugateEntry>& entries, std::unordered_set<ReducedWord>& seen,
                           const std::vector<ReducedWord>& conjugators, const ReducedWord& base, std::size_t index,
                           int sign) {
  ReducedWord b = sign > 0 ? base : inv(base);
  for (const auto& q : conjugators) {
    ReducedWord c = conjugate(q, b);
    if (seen.insert(c).second) entries.push_back({c, ConjugateFactor{q, index, sign}});
  }
}

}  // namespace detail

/// Searches for a refutation using conjugates by words of length <= L. A result proves that
/// the words do not extend to a bi-order; no result proves nothing.
inline std::optional<RgRefutationPtr> rg_refute_bounded(std::span<const ReducedWord> words, int arity,
                                                        const RgBounds& bounds = {}) {
  for (std::size_t i = 0; i < words.size(); ++i)
    if (words[i].is_identity())
      return RgRefutation::make_leaf(ConjugateProduct{{ConjugateFactor{ReducedWord{}, i, 1}}});
  const std::vector<ReducedWord> pivots =
      bounds.pivots ? inverse_pair_representatives(*bounds.pivots) : inverse_pair_representatives(cis(words));
  const auto conjugators = ball(arity, static_cast<int>(bounds.conjugator_length));

  std::vector<detail::ConjugateEntry> entries;
  std::unordered_set<ReducedWord> seen;
  for (std::size_t i = 0; i < words.size(); ++i) detail::add_conjugates(entries, seen, conjugators, words[i], i, 1);

  auto rec = [&](auto&& self, std::size_t i) -> RgRefutationPtr {
    std::vector<ReducedWord> values;
    values.reserve(entries.size());
    for (const auto& e : entries) values.push_back(e.value);
    auto m = contains_identity(values);
    if (m.contains) {
      ConjugateProduct cp;
      for (auto f : m.witness->factors) cp.factors.push_back(entries[f].factor);
      return RgRefutation::make_leaf(std::move(cp));
    }
    if (i == pivots.size()) return nullptr;
    RgRefutationPtr sub[2];
    for (int b = 0; b < 2; ++b) {
      const std::size_t mark = entries.size();
      auto saved_seen = seen;
      detail::add_conjugates(entries, seen, conjugators, pivots[i], words.size() + i, b == 0 ? 1 : -1);
      sub[b] = self(self, i + 1);
      entries.resize(mark);
      seen = std::move(saved_seen);
      if (!sub[b]) return nullptr;
    }
    return RgRefutation::make_branch(pivots[i], sub[0], sub[1]);
  };
  auto tree = rec(rec, 0);
  if (!tree) return std::nullopt;
  return tree;
}

}  // namespace ordcalc
