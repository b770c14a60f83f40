#pragma once

// Evidence trees that branch on the sign of auxiliary elements. Along a root-to-leaf path
// the generating list is the root words followed by the pivots chosen so far.

#include <cstddef>
#include <memory>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "ordcalc/freegroup.hpp"
#include "ordcalc/membership.hpp"

namespace ordcalc {

/// A Leaf, or a Branch on a nonidentity pivot s with subtrees for s and s^-1 added.
template <class LeafData>
struct RefutationTree {
  std::optional<LeafData> leaf;
  ReducedWord pivot;
  std::shared_ptr<const RefutationTree> positive;
  std::shared_ptr<const RefutationTree> negative;

  bool is_leaf() const { return leaf.has_value(); }

  static std::shared_ptr<const RefutationTree> make_leaf(LeafData d) {
    auto t = std::make_shared<RefutationTree>();
    t->leaf = std::move(d);
    return t;
  }
  static std::shared_ptr<const RefutationTree> make_branch(ReducedWord s, std::shared_ptr<const RefutationTree> pos,
                                                           std::shared_ptr<const RefutationTree> neg) {
    auto t = std::make_shared<RefutationTree>();
    t->pivot = std::move(s);
    t->positive = std::move(pos);
    t->negative = std::move(neg);
    return t;
  }

  std::size_t leaf_count() const { return is_leaf() ? 1 : positive->leaf_count() + negative->leaf_count(); }
  std::size_t depth() const { return is_leaf() ? 0 : 1 + std::max(positive->depth(), negative->depth()); }
};

/// Leaf data for right orders: a factorization over roots ++ signed path pivots.
using LgRefutation = RefutationTree<Factorization>;
using LgRefutationPtr = std::shared_ptr<const LgRefutation>;

/// q * base^sign * q^-1, where `base` indexes roots ++ (unsigned) path pivots.
struct ConjugateFactor {
  ReducedWord conjugator;
  std::size_t base = 0;
  int sign = 1;
  friend bool operator==(const ConjugateFactor&, const ConjugateFactor&) = default;
};

/// Conjugates whose product reduces to e.
struct ConjugateProduct {
  std::vector<ConjugateFactor> factors;
  friend bool operator==(const ConjugateProduct&, const ConjugateProduct&) = default;
};

using RgRefutation = RefutationTree<ConjugateProduct>;
using RgRefutationPtr = std::shared_ptr<const RgRefutation>;

/// One pivot on a root-to-leaf path together with its chosen sign.
struct SignedPivot {
  ReducedWord pivot;
  int sign;
  ReducedWord value() const { return sign > 0 ? pivot : inv(pivot); }
};

namespace detail {

inline std::optional<std::string> check_path_pivot(const std::vector<SignedPivot>& path, const ReducedWord& s) {
  if (s.is_identity()) return "pivot is the identity";
  ReducedWord si = inv(s);
  for (const auto& p : path)
    if (p.pivot == s || p.pivot == si) return "pivot " + format_word(s) + " repeated on one path";
  return std::nullopt;
}

inline std::optional<std::string> check_leaf(std::span<const ReducedWord> roots, const std::vector<SignedPivot>& path,
                                             const Factorization& f) {
  std::vector<ReducedWord> gens(roots.begin(), roots.end());
  for (const auto& p : path) gens.push_back(p.value());
  if (!verify_factorization(gens, f)) return "leaf factorization does not reduce to e";
  return std::nullopt;
}

inline ReducedWord conjugate_factor_value(std::span<const ReducedWord> roots, const std::vector<SignedPivot>& path,
                                          const ConjugateFactor& c) {
  const ReducedWord& base = c.base < roots.size() ? roots[c.base] : path.at(c.base - roots.size()).pivot;
  return conjugate(c.conjugator, c.sign > 0 ? base : inv(base));
}

inline std::optional<std::string> check_leaf(std::span<const ReducedWord> roots, const std::vector<SignedPivot>& path,
                                             const ConjugateProduct& cp) {
  if (cp.factors.empty()) return "empty conjugate product";
  ReducedWord acc;
  for (const auto& c : cp.factors) {
    if (c.sign != 1 && c.sign != -1) return "conjugate factor sign must be +1 or -1";
    if (c.base < roots.size()) {
      if (c.sign != 1) return "root words may only occur positively";
    } else if (c.base - roots.size() < path.size()) {
      if (c.sign != path[c.base - roots.size()].sign) return "conjugate factor sign disagrees with the branch";
    } else {
      return "conjugate factor base index out of range";
    }
    acc = mul(acc, conjugate_factor_value(roots, path, c));
  }
  if (!acc.is_identity()) return "conjugate product does not reduce to e";
  return std::nullopt;
}

template <class LeafData>
std::optional<std::string> verify_tree(std::span<const ReducedWord> roots, std::vector<SignedPivot>& path,
                                       const RefutationTree<LeafData>& t) {
  if (t.is_leaf()) return check_leaf(roots, path, *t.leaf);
  if (!t.positive || !t.negative) return "branch is missing a subtree";
  if (auto err = check_path_pivot(path, t.pivot)) return err;
  for (int sign : {1, -1}) {
    path.push_back({t.pivot, sign});
    auto err = verify_tree(roots, path, sign > 0 ? *t.positive : *t.negative);
    path.pop_back();
    if (err) return err;
  }
  return std::nullopt;
}

}  // namespace detail

/// Returns an error description, or nullopt when every leaf witness checks out.
template <class LeafData>
std::optional<std::string> verify_refutation(std::span<const ReducedWord> roots, const RefutationTree<LeafData>& t) {
  std::vector<SignedPivot> path;
  return detail::verify_tree(roots, path, t);
}

}  // namespace ordcalc
