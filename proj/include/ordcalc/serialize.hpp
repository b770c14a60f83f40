#pragma once

// JSON certificate files. Words are written in the text syntax of freegroup.hpp; raw
// certificate blocks keep their unreduced literals.

#include <cstdint>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include <json.hpp>

#include "ordcalc/calculus.hpp"
#include "ordcalc/decide.hpp"
#include "ordcalc/refutation.hpp"
#include "ordcalc/rightorder.hpp"

namespace ordcalc {

using Json = nlohmann::ordered_json;

inline constexpr const char* kSchema = "ordcalc/1";

class SchemaError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

inline std::string dump(const Json& j) { return j.dump(2) + "\n"; }

inline Json words_to_json(std::span<const ReducedWord> words) {
  Json a = Json::array();
  for (const auto& w : words) a.push_back(format_word(w));
  return a;
}

namespace detail {

inline const Json& field(const Json& j, const char* key) {
  if (!j.is_object() || !j.contains(key)) throw SchemaError(std::string("missing field '") + key + "'");
  return j.at(key);
}

inline std::string string_field(const Json& j, const char* key) {
  const Json& v = field(j, key);
  if (!v.is_string()) throw SchemaError(std::string("field '") + key + "' must be a string");
  return v.get<std::string>();
}

inline const Json& array_field(const Json& j, const char* key) {
  const Json& v = field(j, key);
  if (!v.is_array()) throw SchemaError(std::string("field '") + key + "' must be an array");
  return v;
}

inline std::int64_t int_field(const Json& j, const char* key) {
  const Json& v = field(j, key);
  if (!v.is_number_integer()) throw SchemaError(std::string("field '") + key + "' must be an integer");
  return v.get<std::int64_t>();
}

inline LiteralSeq seq_from(const Json& v, int arity) {
  if (!v.is_string()) throw SchemaError("literal sequence must be a string");
  try {
    return parse_seq(v.get<std::string>(), arity);
  } catch (const ParseError& e) {
    throw SchemaError(std::string("bad literal sequence: ") + e.what());
  }
}

inline ReducedWord word_from(const Json& v, int arity) { return ReducedWord(seq_from(v, arity)); }

}  // namespace detail

inline std::vector<ReducedWord> words_from_json(const Json& a, int arity = 0) {
  if (!a.is_array()) throw SchemaError("word list must be an array");
  std::vector<ReducedWord> out;
  for (const auto& v : a) out.push_back(detail::word_from(v, arity));
  return out;
}

inline void check_schema(const Json& j, const char* kind) {
  if (detail::string_field(j, "schema") != kSchema) throw SchemaError("unsupported schema version");
  if (detail::string_field(j, "kind") != kind) throw SchemaError(std::string("expected a '") + kind + "' file");
}

// ---------------------------------------------------------------------------
// Derivations

inline Json to_json(const Derivation& d) {
  Json node;
  node["rule"] = std::string(rule_name(d.instance.rule));
  Json cert = Json::object();
  auto names = block_names(d.instance.rule);
  for (std::size_t i = 0; i < d.instance.blocks.size(); ++i)
    cert[i < names.size() ? std::string(names[i]) : "extra" + std::to_string(i)] = format_seq(d.instance.blocks[i]);
  node["cert"] = cert;
  Json active = Json::array();
  for (const auto& a : d.instance.active) active.push_back(format_seq(a));
  node["active"] = active;
  node["conclusion"] = words_to_json(d.conclusion.words());
  Json prem = Json::array();
  for (const auto& p : d.premises) prem.push_back(to_json(p));
  node["premises"] = prem;
  return node;
}

inline Derivation derivation_from_json(const Json& node, int arity = 0) {
  using detail::array_field;
  const std::string tag = detail::string_field(node, "rule");
  auto rule = rule_from_name(tag);
  if (!rule) throw SchemaError("unknown rule '" + tag + "'");
  Derivation d;
  d.instance.rule = *rule;
  const Json& cert = detail::field(node, "cert");
  if (!cert.is_object()) throw SchemaError("field 'cert' must be an object");
  const auto names = block_names(*rule);
  bool named = cert.size() == names.size();
  for (auto name : names) named = named && cert.contains(std::string(name));
  if (named) {
    for (auto name : names) d.instance.blocks.push_back(detail::seq_from(cert.at(std::string(name)), arity));
  } else {
    // Blocks not matching the rule's schema are kept in file order; the checker rejects the node.
    for (const auto& [key, v] : cert.items()) d.instance.blocks.push_back(detail::seq_from(v, arity));
  }
  for (const auto& a : array_field(node, "active")) d.instance.active.push_back(detail::seq_from(a, arity));
  d.conclusion = Hypersequent(words_from_json(array_field(node, "conclusion"), arity));
  for (const auto& p : array_field(node, "premises")) d.premises.push_back(derivation_from_json(p, arity));
  return d;
}

struct ProofConjunct {
  Hypersequent goal;
  Derivation derivation;
};

struct ProofFile {
  Calculus calculus = Calculus::GLGstar;
  int arity = 1;
  std::vector<ProofConjunct> conjuncts;
};

inline Json to_json(const ProofFile& f) {
  Json j;
  j["schema"] = kSchema;
  j["kind"] = "proof";
  j["calculus"] = std::string(calculus_name(f.calculus));
  j["arity"] = f.arity;
  Json cs = Json::array();
  for (const auto& c : f.conjuncts) {
    Json e;
    e["goal"] = words_to_json(c.goal.words());
    e["derivation"] = to_json(c.derivation);
    cs.push_back(std::move(e));
  }
  j["conjuncts"] = cs;
  return j;
}

inline ProofFile proof_from_json(const Json& j) {
  check_schema(j, "proof");
  ProofFile f;
  const std::string name = detail::string_field(j, "calculus");
  auto calc = calculus_from_name(name);
  if (!calc) throw SchemaError("unknown calculus '" + name + "'");
  f.calculus = *calc;
  f.arity = static_cast<int>(detail::int_field(j, "arity"));
  for (const auto& c : detail::array_field(j, "conjuncts"))
    f.conjuncts.push_back({Hypersequent(words_from_json(detail::array_field(c, "goal"), f.arity)),
                           derivation_from_json(detail::field(c, "derivation"), f.arity)});
  return f;
}

// ---------------------------------------------------------------------------
// Witnesses

inline Json to_json(const TruncatedRightOrder& o) {
  Json j;
  j["kind"] = "truncated-right-order";
  j["arity"] = o.arity;
  j["N"] = o.level;
  j["elements"] = words_to_json(o.elements);
  return j;
}

inline Json to_json(const Separator& s) {
  Json j;
  j["kind"] = "countermodel";
  j["assignment"] = s.y;
  return j;
}

inline Json to_json(const SignAssignment& a) {
  Json j;
  j["kind"] = "sign-assignment";
  Json signs = Json::array();
  for (const auto& p : a) signs.push_back(Json{{"pivot", format_word(p.pivot)}, {"sign", p.sign}});
  j["signs"] = signs;
  return j;
}

inline Json to_json(const BoundsReport& b) {
  Json j;
  j["kind"] = "bounds";
  j["L"] = b.conjugator_length;
  j["pivots"] = b.pivot_count;
  return j;
}

inline Json leaf_to_json(const Factorization& f) { return Json{{"factors", f.factors}}; }

inline Json leaf_to_json(const ConjugateProduct& cp) {
  Json a = Json::array();
  for (const auto& c : cp.factors)
    a.push_back(Json{{"conjugator", format_word(c.conjugator)}, {"base", c.base}, {"sign", c.sign}});
  return Json{{"conjugates", a}};
}

template <class LeafData>
Json tree_to_json(const RefutationTree<LeafData>& t) {
  if (t.is_leaf()) return Json{{"leaf", leaf_to_json(*t.leaf)}};
  return Json{{"pivot", format_word(t.pivot)}, {"positive", tree_to_json(*t.positive)}, {"negative", tree_to_json(*t.negative)}};
}

inline Json refutation_to_json(std::span<const ReducedWord> roots, const Evidence& ev) {
  Json j;
  j["kind"] = "refutation";
  j["roots"] = words_to_json(roots);
  if (auto* lg = std::get_if<LgRefutationPtr>(&ev)) {
    j["leaves"] = "factorization";
    j["tree"] = tree_to_json(**lg);
  } else if (auto* rg = std::get_if<RgRefutationPtr>(&ev)) {
    j["leaves"] = "conjugate-product";
    j["tree"] = tree_to_json(**rg);
  } else if (auto* c = std::get_if<Combination>(&ev)) {
    j["kind"] = "combination";
    j["lambda"] = c->lambda;
  }
  return j;
}

namespace detail {

inline Factorization factorization_from(const Json& j) {
  Factorization f;
  for (const auto& v : array_field(j, "factors")) {
    if (!v.is_number_unsigned()) throw SchemaError("factor index must be a nonnegative integer");
    f.factors.push_back(v.get<std::size_t>());
  }
  return f;
}

inline ConjugateProduct conjugates_from(const Json& j, int arity) {
  ConjugateProduct cp;
  for (const auto& c : array_field(j, "conjugates")) {
    ConjugateFactor f;
    f.conjugator = word_from(field(c, "conjugator"), arity);
    f.base = static_cast<std::size_t>(int_field(c, "base"));
    f.sign = static_cast<int>(int_field(c, "sign"));
    cp.factors.push_back(std::move(f));
  }
  return cp;
}

template <class LeafData, class LeafReader>
std::shared_ptr<const RefutationTree<LeafData>> tree_from(const Json& j, const LeafReader& read) {
  using Tree = RefutationTree<LeafData>;
  if (j.is_object() && j.contains("leaf")) return Tree::make_leaf(read(j.at("leaf")));
  return Tree::make_branch(word_from(field(j, "pivot"), 0), tree_from<LeafData>(field(j, "positive"), read),
                           tree_from<LeafData>(field(j, "negative"), read));
}

}  // namespace detail

inline TruncatedRightOrder truncated_from_json(const Json& j) {
  TruncatedRightOrder o;
  o.arity = static_cast<int>(detail::int_field(j, "arity"));
  o.level = static_cast<std::size_t>(detail::int_field(j, "N"));
  o.elements = words_from_json(detail::array_field(j, "elements"), o.arity);
  return o;
}

/// Re-checks a witness entry against the goal words. Returns an error description on failure.
inline std::optional<std::string> verify_witness(const Json& w, std::span<const ReducedWord> goal) {
  try {
    const std::string kind = detail::string_field(w, "kind");
    if (kind == "truncated-right-order") {
      auto o = truncated_from_json(w);
      if (auto err = verify_truncated(o)) return err;
      for (const auto& g : goal)
        if (!o.contains(g)) return "goal word " + format_word(g) + " is not in the order";
      return std::nullopt;
    }
    if (kind == "countermodel") {
      std::vector<std::int64_t> y;
      for (const auto& v : detail::array_field(w, "assignment")) y.push_back(v.get<std::int64_t>());
      for (const auto& g : goal) {
        if (g.max_generator() > static_cast<int>(y.size())) return "assignment too short";
        std::int64_t val = 0;
        for (Literal l : g) val += l.sign() * y[static_cast<std::size_t>(l.generator() - 1)];
        if (val >= 0) return "goal word " + format_word(g) + " is not negative under the assignment";
      }
      return std::nullopt;
    }
    if (kind == "sign-assignment") {
      std::vector<ReducedWord> gens(goal.begin(), goal.end());
      for (const auto& s : detail::array_field(w, "signs")) {
        ReducedWord p = detail::word_from(detail::field(s, "pivot"), 0);
        gens.push_back(detail::int_field(s, "sign") > 0 ? p : inv(p));
      }
      if (contains_identity(gens).contains) return "the signed set generates e";
      return std::nullopt;
    }
    if (kind == "refutation") {
      auto roots = words_from_json(detail::array_field(w, "roots"));
      if (!(Hypersequent(roots) == Hypersequent(std::vector<ReducedWord>(goal.begin(), goal.end()))))
        return "refutation roots differ from the goal";
      const std::string leaves = detail::string_field(w, "leaves");
      if (leaves == "factorization")
        return verify_refutation(roots, *detail::tree_from<Factorization>(detail::field(w, "tree"),
                                                                         detail::factorization_from));
      if (leaves == "conjugate-product")
        return verify_refutation(roots, *detail::tree_from<ConjugateProduct>(
                                            detail::field(w, "tree"),
                                            [](const Json& j) { return detail::conjugates_from(j, 0); }));
      return "unknown leaf kind '" + leaves + "'";
    }
    if (kind == "combination") {
      std::vector<std::int64_t> l;
      for (const auto& v : detail::array_field(w, "lambda")) l.push_back(v.get<std::int64_t>());
      int k = effective_arity(goal, 1);
      std::vector<ExponentVector> vecs;
      for (const auto& g : goal) vecs.push_back(abelianize(g, k));
      if (!verify(Combination{l}, vecs)) return "combination does not balance the goal";
      return std::nullopt;
    }
    if (kind == "bounds") return std::nullopt;
    return "unknown witness kind '" + kind + "'";
  } catch (const std::exception& e) {
    return std::string("malformed witness: ") + e.what();
  }
}

}  // namespace ordcalc
