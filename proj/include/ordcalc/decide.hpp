#pragma once

// Validity of e <= t_1 v ... v t_n in abelian l-groups, l-groups and representable l-groups.

#include <algorithm>
#include <optional>
#include <span>
#include <string_view>
#include <variant>
#include <vector>

#include "ordcalc/abelian.hpp"
#include "ordcalc/calculus.hpp"
#include "ordcalc/freegroup.hpp"
#include "ordcalc/refutation.hpp"
#include "ordcalc/rightorder.hpp"

namespace ordcalc {

enum class Status { Valid, Invalid, Unknown };

inline std::string_view status_name(Status s) {
  switch (s) {
    case Status::Valid: return "VALID";
    case Status::Invalid: return "INVALID";
    case Status::Unknown: return "UNKNOWN";
  }
  return "?";
}

enum class Variety { Abelian, LGroup, Representable };

inline std::optional<Variety> variety_from_name(std::string_view s) {
  if (s == "abelian") return Variety::Abelian;
  if (s == "lgroup") return Variety::LGroup;
  if (s == "representable") return Variety::Representable;
  return std::nullopt;
}

/// What the bounded representable search tried before giving up.
struct BoundsReport {
  std::size_t conjugator_length = 0;
  std::size_t pivot_count = 0;
};

using Certificate = std::variant<std::monostate, Derivation, TruncatedRightOrder, Separator, SignAssignment, BoundsReport>;

// Raw decision evidence behind a VALID derivation.
using Evidence = std::variant<std::monostate, Combination, LgRefutationPtr, RgRefutationPtr>;

struct Verdict {
  Status status = Status::Unknown;
  std::optional<Calculus> calculus;  // set when VALID
  Certificate certificate;
  Evidence evidence;

  const Derivation* derivation() const { return std::get_if<Derivation>(&certificate); }
};

inline int effective_arity(std::span<const ReducedWord> words, int arity) {
  int k = std::max(arity, 1);
  for (const auto& w : words) k = std::max(k, w.max_generator());
  return k;
}

inline Hypersequent goal_of(std::span<const ReducedWord> words) {
  return Hypersequent(std::vector<ReducedWord>(words.begin(), words.end()));
}

inline Verdict validity_abelian(std::span<const ReducedWord> words, int arity) {
  if (words.empty()) throw std::invalid_argument("validity_abelian: empty hypersequent");
  const int k = effective_arity(words, arity);
  std::vector<ExponentVector> vecs;
  for (const auto& w : words) vecs.push_back(abelianize(w, k));
  auto cert = decide_abelian(vecs);
  if (auto* sep = std::get_if<Separator>(&cert)) return {Status::Invalid, std::nullopt, *sep, {}};
  const auto& comb = std::get<Combination>(cert);
  return {Status::Valid, Calculus::GA, derive_ga(words, comb), comb};
}

/// l-group validity by truncated right orders.
inline Verdict decide_lg_cs(std::span<const ReducedWord> words, int arity) {
  if (words.empty()) throw std::invalid_argument("decide_lg_cs: empty hypersequent");
  auto r = extend_right_order(words, effective_arity(words, arity));
  if (auto* order = std::get_if<TruncatedRightOrder>(&r)) return {Status::Invalid, std::nullopt, std::move(*order), {}};
  auto tree = std::get<LgRefutationPtr>(r);
  return {Status::Valid, Calculus::GLGstar, derive_glgstar(words, *tree), tree};
}

/// l-group validity by sign choices over initial-subterm quotients.
inline Verdict decide_lg_hm(std::span<const ReducedWord> words, int /*arity*/) {
  if (words.empty()) throw std::invalid_argument("decide_lg_hm: empty hypersequent");
  const auto pivots = inverse_pair_representatives(cis(words));
  auto r = sign_search(words, pivots);
  if (auto* signs = std::get_if<SignAssignment>(&r)) return {Status::Invalid, std::nullopt, std::move(*signs), {}};
  auto tree = std::get<LgRefutationPtr>(r);
  return {Status::Valid, Calculus::GLGstar, derive_glgstar(words, *tree), tree};
}

/// Three-valued: a bounded refutation proves validity, an abelian countermodel disproves it.
inline Verdict decide_rg(std::span<const ReducedWord> words, int arity, const RgBounds& bounds = {}) {
  if (words.empty()) throw std::invalid_argument("decide_rg: empty hypersequent");
  const int k = effective_arity(words, arity);
  std::vector<ExponentVector> vecs;
  for (const auto& w : words) vecs.push_back(abelianize(w, k));
  auto cert = decide_abelian(vecs);
  if (auto* sep = std::get_if<Separator>(&cert)) return {Status::Invalid, std::nullopt, *sep, {}};
  if (auto tree = rg_refute_bounded(words, k, bounds))
    return {Status::Valid, Calculus::GRGstar, derive_grgstar(words, **tree), *tree};
  std::size_t pivots =
      bounds.pivots ? inverse_pair_representatives(*bounds.pivots).size() : inverse_pair_representatives(cis(words)).size();
  return {Status::Unknown, std::nullopt, BoundsReport{bounds.conjugator_length, pivots}, {}};
}

}  // namespace ordcalc
