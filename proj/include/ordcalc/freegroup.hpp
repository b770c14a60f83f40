#pragma once

// Exact arithmetic in the free group F(k) on generators x1..xk.

#include <algorithm>
#include <cctype>
#include <compare>
#include <cstdint>
#include <cstdlib>
#include <functional>
#include <initializer_list>
#include <span>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace ordcalc {

/// A generator or its inverse. Stored as a signed generator index (never 0).
class Literal {
 public:
  constexpr Literal() = default;
  constexpr Literal(int generator, int sign) : value_(sign < 0 ? -generator : generator) {
    if (generator < 1) throw std::invalid_argument("generator index must be >= 1");
  }

  constexpr int generator() const { return value_ < 0 ? -value_ : value_; }
  constexpr int sign() const { return value_ < 0 ? -1 : 1; }
  constexpr Literal inverse() const { return from_signed(-value_); }
  constexpr int signed_index() const { return value_; }

  static constexpr Literal from_signed(int v) {
    Literal l;
    l.value_ = v;
    return l;
  }

  // ShortLex key: generator index first, then + before -.
  constexpr int order_key() const { return 2 * generator() + (value_ < 0 ? 1 : 0); }

  friend constexpr bool operator==(Literal a, Literal b) { return a.value_ == b.value_; }
  friend constexpr std::strong_ordering operator<=>(Literal a, Literal b) {
    return a.order_key() <=> b.order_key();
  }

 private:
  int value_ = 1;
};

using LiteralSeq = std::vector<Literal>;

inline bool cancels(Literal a, Literal b) { return a.signed_index() == -b.signed_index(); }

/// Free reduction of an arbitrary literal sequence (stack based, linear time).
inline LiteralSeq free_reduce(std::span<const Literal> seq) {
  LiteralSeq out;
  out.reserve(seq.size());
  for (Literal l : seq) {
    if (!out.empty() && cancels(out.back(), l))
      out.pop_back();
    else
      out.push_back(l);
  }
  return out;
}

inline LiteralSeq inverse_seq(std::span<const Literal> seq) {
  LiteralSeq out;
  out.reserve(seq.size());
  for (auto it = seq.rbegin(); it != seq.rend(); ++it) out.push_back(it->inverse());
  return out;
}

inline LiteralSeq concat(std::initializer_list<std::span<const Literal>> parts) {
  LiteralSeq out;
  for (auto p : parts) out.insert(out.end(), p.begin(), p.end());
  return out;
}

/// An element of F(k), always held in cancellation-free form. The empty word is e.
class ReducedWord {
 public:
  ReducedWord() = default;
  explicit ReducedWord(std::span<const Literal> seq) : lits_(free_reduce(seq)) {}
  ReducedWord(std::initializer_list<Literal> seq)
      : lits_(free_reduce(std::span<const Literal>(seq.begin(), seq.size()))) {}

  static ReducedWord identity() { return {}; }
  static ReducedWord generator(int g, int sign = 1) { return ReducedWord{Literal(g, sign)}; }

  const LiteralSeq& literals() const { return lits_; }
  std::size_t length() const { return lits_.size(); }
  bool is_identity() const { return lits_.empty(); }
  int max_generator() const {
    int m = 0;
    for (Literal l : lits_) m = std::max(m, l.generator());
    return m;
  }

  auto begin() const { return lits_.begin(); }
  auto end() const { return lits_.end(); }
  Literal operator[](std::size_t i) const { return lits_[i]; }

  friend bool operator==(const ReducedWord&, const ReducedWord&) = default;
  // ShortLex: length, then literal-wise by generator index with + before -.
  friend std::strong_ordering operator<=>(const ReducedWord& a, const ReducedWord& b) {
    if (auto c = a.length() <=> b.length(); c != 0) return c;
    return std::lexicographical_compare_three_way(a.lits_.begin(), a.lits_.end(),
                                                  b.lits_.begin(), b.lits_.end());
  }

 private:
  LiteralSeq lits_;
};

inline ReducedWord mul(const ReducedWord& a, const ReducedWord& b) {
  LiteralSeq out(a.literals());
  for (Literal l : b) {
    if (!out.empty() && cancels(out.back(), l))
      out.pop_back();
    else
      out.push_back(l);
  }
  return ReducedWord(out);
}

inline ReducedWord inv(const ReducedWord& a) { return ReducedWord(inverse_seq(a.literals())); }

/// q t q^-1, reduced.
inline ReducedWord conjugate(const ReducedWord& q, const ReducedWord& t) {
  return mul(mul(q, t), inv(q));
}

inline std::size_t length(const ReducedWord& a) { return a.length(); }

inline ReducedWord power(const ReducedWord& a, int n) {
  ReducedWord base = n < 0 ? inv(a) : a;
  ReducedWord out;
  for (int i = 0; i < std::abs(n); ++i) out = mul(out, base);
  return out;
}

/// All reduced words of length <= n over k generators, in ShortLex order.
inline std::vector<ReducedWord> ball(int k, int n) {
  if (k < 1) throw std::invalid_argument("ball: arity must be >= 1");
  std::vector<Literal> alphabet;
  for (int g = 1; g <= k; ++g) {
    alphabet.emplace_back(g, 1);
    alphabet.emplace_back(g, -1);
  }
  std::vector<ReducedWord> out{ReducedWord{}};
  std::vector<LiteralSeq> layer{LiteralSeq{}};
  for (int len = 1; len <= n; ++len) {
    std::vector<LiteralSeq> next;
    for (const auto& w : layer)
      for (Literal l : alphabet) {
        if (!w.empty() && cancels(w.back(), l)) continue;
        LiteralSeq ext(w);
        ext.push_back(l);
        next.push_back(std::move(ext));
      }
    // Extending a ShortLex-sorted layer by a sorted alphabet keeps it sorted.
    for (const auto& w : next) out.emplace_back(w);
    layer = std::move(next);
  }
  return out;
}

using ExponentVector = std::vector<std::int64_t>;

/// Signed generator counts; the image of a word in the free abelian group Z^k.
inline ExponentVector abelianize(std::span<const Literal> seq, int k) {
  ExponentVector v(static_cast<std::size_t>(k), 0);
  for (Literal l : seq) {
    if (l.generator() > k) throw std::out_of_range("abelianize: generator exceeds arity");
    v[static_cast<std::size_t>(l.generator() - 1)] += l.sign();
  }
  return v;
}

inline ExponentVector abelianize(const ReducedWord& w, int k) {
  return abelianize(std::span<const Literal>(w.literals()), k);
}

// ---------------------------------------------------------------------------
// Text format. Generators 1..6 print as x y z w v u; higher ones as x7, x8, ...
// Inverse is a postfix apostrophe; the identity prints as "e".

inline constexpr std::string_view kGeneratorLetters = "xyzwvu";

inline std::string format_literal(Literal l) {
  std::string s;
  int g = l.generator();
  if (g <= static_cast<int>(kGeneratorLetters.size()))
    s += kGeneratorLetters[static_cast<std::size_t>(g - 1)];
  else
    s += "x" + std::to_string(g);
  if (l.sign() < 0) s += '\'';
  return s;
}

/// Space-separated literals, "e" when empty.
inline std::string format_seq(std::span<const Literal> seq) {
  if (seq.empty()) return "e";
  std::string s;
  for (std::size_t i = 0; i < seq.size(); ++i) {
    if (i) s += ' ';
    s += format_literal(seq[i]);
  }
  return s;
}

inline std::string format_word(const ReducedWord& w) {
  return format_seq(std::span<const Literal>(w.literals()));
}

class ParseError : public std::runtime_error {
 public:
  ParseError(const std::string& what, std::size_t pos)
      : std::runtime_error(what + " at position " + std::to_string(pos)), position_(pos) {}
  std::size_t position() const { return position_; }

 private:
  std::size_t position_;
};

/// Reads a generator name (letter digit*) at `pos`; returns its index. Advances pos.
inline int read_generator(std::string_view text, std::size_t& pos) {
  std::size_t start = pos;
  char c = text[pos];
  if (!std::isalpha(static_cast<unsigned char>(c))) throw ParseError("expected generator", pos);
  ++pos;
  std::size_t digits_start = pos;
  while (pos < text.size() && std::isdigit(static_cast<unsigned char>(text[pos]))) ++pos;
  if (pos > digits_start) {
    if (c != 'x') throw ParseError("indexed generators must be written x<n>", start);
    int g = std::stoi(std::string(text.substr(digits_start, pos - digits_start)));
    if (g < 1) throw ParseError("generator index must be >= 1", start);
    return g;
  }
  auto idx = kGeneratorLetters.find(c);
  if (idx == std::string_view::npos) throw ParseError(std::string("unknown generator '") + c + "'", start);
  return static_cast<int>(idx) + 1;
}

/// Parses a raw (unreduced) literal sequence. Literals may be juxtaposed or separated by
/// whitespace, ',' or '*'. "e" denotes the empty sequence. Generators above `arity` are
/// rejected when arity > 0.
inline LiteralSeq parse_seq(std::string_view text, int arity = 0) {
  LiteralSeq out;
  std::size_t pos = 0;
  while (pos < text.size()) {
    char c = text[pos];
    if (std::isspace(static_cast<unsigned char>(c)) || c == ',' || c == '*') {
      ++pos;
      continue;
    }
    if (c == 'e' && (pos + 1 >= text.size() || !std::isalnum(static_cast<unsigned char>(text[pos + 1])))) {
      ++pos;
      while (pos < text.size() && text[pos] == '\'') ++pos;
      continue;
    }
    std::size_t start = pos;
    int g = read_generator(text, pos);
    if (arity > 0 && g > arity) throw ParseError("generator index exceeds arity " + std::to_string(arity), start);
    int sign = 1;
    while (pos < text.size() && text[pos] == '\'') {
      sign = -sign;
      ++pos;
    }
    out.emplace_back(g, sign);
  }
  return out;
}

inline ReducedWord parse_word(std::string_view text, int arity = 0) {
  return ReducedWord(parse_seq(text, arity));
}

}  // namespace ordcalc

template <>
struct std::hash<ordcalc::ReducedWord> {
  std::size_t operator()(const ordcalc::ReducedWord& w) const noexcept {
    std::size_t h = 1469598103934665603ull;
    for (auto l : w) {
      h ^= static_cast<std::size_t>(l.signed_index() + 0x9e3779b9);
      h *= 1099511628211ull;
    }
    return h;
  }
};
