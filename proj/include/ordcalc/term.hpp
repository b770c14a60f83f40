#pragma once

// l-group terms: parsing, inverse pushing and meet-of-joins normal form.
//
//   term := meet ; meet := join ("/\" join)* ; join := prod ("\/" prod)* ;
//   prod := atom ("*" atom)* ; atom := "e" | lit | "(" term ")" | atom "'"

#include <algorithm>
#include <cctype>
#include <cstdint>
#include <limits>
#include <memory>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "ordcalc/freegroup.hpp"

namespace ordcalc {

class Term;
using TermPtr = std::shared_ptr<const Term>;

class Term {
 public:
  enum class Kind { Identity, Lit, Product, Meet, Join, Inverse };

  static TermPtr identity() { return TermPtr(new Term(Kind::Identity, {}, nullptr, nullptr)); }
  static TermPtr literal(int generator, int sign) {
    return TermPtr(new Term(Kind::Lit, Literal(generator, sign), nullptr, nullptr));
  }
  static TermPtr literal(Literal l) { return TermPtr(new Term(Kind::Lit, l, nullptr, nullptr)); }
  static TermPtr product(TermPtr a, TermPtr b) { return binary(Kind::Product, std::move(a), std::move(b)); }
  static TermPtr meet(TermPtr a, TermPtr b) { return binary(Kind::Meet, std::move(a), std::move(b)); }
  static TermPtr join(TermPtr a, TermPtr b) { return binary(Kind::Join, std::move(a), std::move(b)); }
  static TermPtr inverse(TermPtr a) { return TermPtr(new Term(Kind::Inverse, {}, std::move(a), nullptr)); }

  Kind kind() const { return kind_; }
  Literal lit() const { return lit_; }
  const TermPtr& left() const { return left_; }
  const TermPtr& right() const { return right_; }
  const TermPtr& child() const { return left_; }

  int max_generator() const {
    switch (kind_) {
      case Kind::Identity: return 0;
      case Kind::Lit: return lit_.generator();
      case Kind::Inverse: return left_->max_generator();
      default: return std::max(left_->max_generator(), right_->max_generator());
    }
  }

 private:
  Term(Kind k, Literal l, TermPtr a, TermPtr b) : kind_(k), lit_(l), left_(std::move(a)), right_(std::move(b)) {}
  static TermPtr binary(Kind k, TermPtr a, TermPtr b) { return TermPtr(new Term(k, {}, std::move(a), std::move(b))); }

  Kind kind_;
  Literal lit_;
  TermPtr left_;
  TermPtr right_;
};

inline bool structurally_equal(const Term& a, const Term& b) {
  if (a.kind() != b.kind()) return false;
  switch (a.kind()) {
    case Term::Kind::Identity: return true;
    case Term::Kind::Lit: return a.lit() == b.lit();
    case Term::Kind::Inverse: return structurally_equal(*a.child(), *b.child());
    default:
      return structurally_equal(*a.left(), *b.left()) && structurally_equal(*a.right(), *b.right());
  }
}

namespace detail {

class TermParser {
 public:
  TermParser(std::string_view text, int arity) : text_(text), arity_(arity) {}

  TermPtr parse() {
    TermPtr t = meet();
    skip_ws();
    if (pos_ != text_.size()) throw ParseError("unexpected input", pos_);
    return t;
  }

 private:
  void skip_ws() {
    while (pos_ < text_.size() && std::isspace(static_cast<unsigned char>(text_[pos_]))) ++pos_;
  }
  bool accept(std::string_view tok) {
    skip_ws();
    if (text_.substr(pos_, tok.size()) == tok) {
      pos_ += tok.size();
      return true;
    }
    return false;
  }

  TermPtr meet() {
    TermPtr t = join();
    while (accept("/\\")) t = Term::meet(t, join());
    return t;
  }
  TermPtr join() {
    TermPtr t = prod();
    while (accept("\\/")) t = Term::join(t, prod());
    return t;
  }
  TermPtr prod() {
    TermPtr t = atom();
    while (accept("*")) t = Term::product(t, atom());
    return t;
  }
  TermPtr atom() {
    skip_ws();
    if (pos_ >= text_.size()) throw ParseError("unexpected end of input", pos_);
    TermPtr t;
    char c = text_[pos_];
    if (c == '(') {
      ++pos_;
      t = meet();
      if (!accept(")")) throw ParseError("expected ')'", pos_);
      while (accept("'")) {
        // Inverses of atoms fold immediately, so "(x)'" and "x'" parse alike.
        if (t->kind() == Term::Kind::Lit)
          t = Term::literal(t->lit().inverse());
        else if (t->kind() != Term::Kind::Identity)
          t = Term::inverse(t);
      }
      return t;
    }
    if (c == 'e' && (pos_ + 1 >= text_.size() || !std::isalnum(static_cast<unsigned char>(text_[pos_ + 1])))) {
      ++pos_;
      while (accept("'")) {
      }
      return Term::identity();
    }
    if (!std::isalpha(static_cast<unsigned char>(c))) throw ParseError("expected atom", pos_);
    std::size_t start = pos_;
    int g = read_generator(text_, pos_);
    if (arity_ > 0 && g > arity_)
      throw ParseError("generator index exceeds arity " + std::to_string(arity_), start);
    int sign = 1;
    while (accept("'")) sign = -sign;
    return Term::literal(g, sign);
  }

  std::string_view text_;
  int arity_;
  std::size_t pos_ = 0;
};

}  // namespace detail

/// Parses a term; `arity` <= 0 disables the generator bound.
inline TermPtr parse_term(std::string_view text, int arity = 0) {
  return detail::TermParser(text, arity).parse();
}

namespace detail {

inline TermPtr push(const TermPtr& t, bool negate) {
  switch (t->kind()) {
    case Term::Kind::Identity: return t;
    case Term::Kind::Lit: return negate ? Term::literal(t->lit().inverse()) : t;
    case Term::Kind::Inverse: return push(t->child(), !negate);
    case Term::Kind::Product:
      return negate ? Term::product(push(t->right(), true), push(t->left(), true))
                    : Term::product(push(t->left(), false), push(t->right(), false));
    case Term::Kind::Meet:
      return negate ? Term::join(push(t->left(), true), push(t->right(), true))
                    : Term::meet(push(t->left(), false), push(t->right(), false));
    case Term::Kind::Join:
      return negate ? Term::meet(push(t->left(), true), push(t->right(), true))
                    : Term::join(push(t->left(), false), push(t->right(), false));
  }
  return t;
}

}  // namespace detail

/// Rewrites with the bar duality until no Inverse node remains; negation lives on literals.
inline TermPtr push_inverses(const TermPtr& t) { return detail::push(t, false); }

/// Meet of joins of reduced group words. Each conjunct is nonempty and duplicate-free.
struct NormalForm {
  std::vector<std::vector<ReducedWord>> conjuncts;
};

namespace detail {

inline void append_unique(std::vector<ReducedWord>& out, ReducedWord w) {
  if (std::find(out.begin(), out.end(), w) == out.end()) out.push_back(std::move(w));
}

inline std::vector<std::vector<ReducedWord>> distribute(const TermPtr& t) {
  using Conj = std::vector<std::vector<ReducedWord>>;
  switch (t->kind()) {
    case Term::Kind::Identity: return Conj{{ReducedWord{}}};
    case Term::Kind::Lit: return Conj{{ReducedWord{t->lit()}}};
    case Term::Kind::Meet: {
      Conj a = distribute(t->left());
      Conj b = distribute(t->right());
      a.insert(a.end(), b.begin(), b.end());
      return a;
    }
    case Term::Kind::Join: {
      Conj a = distribute(t->left());
      Conj b = distribute(t->right());
      Conj out;
      for (const auto& ca : a)
        for (const auto& cb : b) {
          std::vector<ReducedWord> j;
          for (const auto& w : ca) append_unique(j, w);
          for (const auto& w : cb) append_unique(j, w);
          out.push_back(std::move(j));
        }
      return out;
    }
    case Term::Kind::Product: {
      // (/\_i \/_j a_ij)(/\_k \/_l b_kl) = /\_{i,k} \/_{j,l} a_ij b_kl
      Conj a = distribute(t->left());
      Conj b = distribute(t->right());
      Conj out;
      for (const auto& ca : a)
        for (const auto& cb : b) {
          std::vector<ReducedWord> j;
          for (const auto& u : ca)
            for (const auto& v : cb) append_unique(j, mul(u, v));
          out.push_back(std::move(j));
        }
      return out;
    }
    case Term::Kind::Inverse: return distribute(push_inverses(t));
  }
  return {};
}

}  // namespace detail

inline NormalForm normalize(const TermPtr& t) { return NormalForm{detail::distribute(push_inverses(t))}; }

// ---------------------------------------------------------------------------
// Formatting

namespace detail {

inline int precedence(const Term& t) {
  switch (t.kind()) {
    case Term::Kind::Meet: return 0;
    case Term::Kind::Join: return 1;
    case Term::Kind::Product: return 2;
    default: return 3;
  }
}

inline std::string format_term(const Term& t);

inline std::string wrap(const Term& t, bool parens) {
  std::string s = format_term(t);
  return parens ? "(" + s + ")" : s;
}

inline std::string format_term(const Term& t) {
  switch (t.kind()) {
    case Term::Kind::Identity: return "e";
    case Term::Kind::Lit: return format_literal(t.lit());
    case Term::Kind::Inverse: return wrap(*t.child(), precedence(*t.child()) < 3) + "'";
    default: break;
  }
  int p = precedence(t);
  const char* op = t.kind() == Term::Kind::Meet ? " /\\ " : t.kind() == Term::Kind::Join ? " \\/ " : " * ";
  // Joins under a meet are parenthesized for readability even though the grammar does not need it.
  auto needs = [&](const Term& c, bool right) {
    int pc = precedence(c);
    if (pc < p) return true;
    if (right && pc == p) return true;
    return t.kind() == Term::Kind::Meet && c.kind() == Term::Kind::Join;
  };
  return wrap(*t.left(), needs(*t.left(), false)) + op + wrap(*t.right(), needs(*t.right(), true));
}

}  // namespace detail

inline std::string format(const Term& t) { return detail::format_term(t); }
inline std::string format(const TermPtr& t) { return detail::format_term(*t); }

// ---------------------------------------------------------------------------
// Evaluation in the l-group Z = (Z, min, max, +, -, 0).

inline std::int64_t evaluate(std::span<const Literal> seq, std::span<const std::int64_t> assignment) {
  std::int64_t v = 0;
  for (Literal l : seq) v += l.sign() * assignment[static_cast<std::size_t>(l.generator() - 1)];
  return v;
}

inline std::int64_t evaluate(const ReducedWord& w, std::span<const std::int64_t> assignment) {
  return evaluate(std::span<const Literal>(w.literals()), assignment);
}

inline std::int64_t evaluate(const Term& t, std::span<const std::int64_t> assignment) {
  switch (t.kind()) {
    case Term::Kind::Identity: return 0;
    case Term::Kind::Lit: return t.lit().sign() * assignment[static_cast<std::size_t>(t.lit().generator() - 1)];
    case Term::Kind::Inverse: return -evaluate(*t.child(), assignment);
    case Term::Kind::Product: return evaluate(*t.left(), assignment) + evaluate(*t.right(), assignment);
    case Term::Kind::Meet: return std::min(evaluate(*t.left(), assignment), evaluate(*t.right(), assignment));
    case Term::Kind::Join: return std::max(evaluate(*t.left(), assignment), evaluate(*t.right(), assignment));
  }
  return 0;
}

/// Value of the join of `words` in Z.
inline std::int64_t evaluate_join(std::span<const ReducedWord> words, std::span<const std::int64_t> assignment) {
  std::int64_t best = std::numeric_limits<std::int64_t>::min();
  for (const auto& w : words) best = std::max(best, evaluate(w, assignment));
  return best;
}

inline std::int64_t evaluate(const NormalForm& nf, std::span<const std::int64_t> assignment) {
  std::int64_t best = std::numeric_limits<std::int64_t>::max();
  for (const auto& c : nf.conjuncts) best = std::min(best, evaluate_join(c, assignment));
  return best;
}

}  // namespace ordcalc
