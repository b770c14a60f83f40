#pragma once

// Gordan alternative over the integers: for vectors v_1..v_n in Z^k exactly one holds
//   (a) some y in Z^k has y . v_i < 0 for every i               -> Separator
//   (b) some lambda in N^n, lambda != 0, has sum lambda_i v_i = 0  -> Combination
// Decided by exact Fourier-Motzkin elimination on the system { y : v_i . y <= -1 }.
// Every derived row remembers its nonnegative multipliers over the input rows, so an
// infeasibility row 0 <= -c directly yields (b); otherwise back-substitution yields (a).

#include <algorithm>
#include <cstdint>
#include <limits>
#include <numeric>
#include <span>
#include <stdexcept>
#include <variant>
#include <vector>

#include <boost/multiprecision/cpp_int.hpp>

#include "ordcalc/freegroup.hpp"

namespace ordcalc {

struct Combination {
  std::vector<std::int64_t> lambda;
  friend bool operator==(const Combination&, const Combination&) = default;
};

struct Separator {
  std::vector<std::int64_t> y;
  friend bool operator==(const Separator&, const Separator&) = default;
};

using GordanCertificate = std::variant<Combination, Separator>;

inline bool verify(const Combination& c, std::span<const ExponentVector> vectors) {
  if (c.lambda.size() != vectors.size()) return false;
  bool positive = false;
  for (auto l : c.lambda) {
    if (l < 0) return false;
    positive = positive || l > 0;
  }
  if (!positive) return false;
  if (vectors.empty()) return false;
  std::size_t k = vectors[0].size();
  for (std::size_t j = 0; j < k; ++j) {
    std::int64_t sum = 0;
    for (std::size_t i = 0; i < vectors.size(); ++i) sum += c.lambda[i] * vectors[i].at(j);
    if (sum != 0) return false;
  }
  return true;
}

inline bool verify(const Separator& s, std::span<const ExponentVector> vectors) {
  for (const auto& v : vectors) {
    if (v.size() != s.y.size()) return false;
    std::int64_t dot = 0;
    for (std::size_t j = 0; j < v.size(); ++j) dot += s.y[j] * v[j];
    if (dot >= 0) return false;
  }
  return true;
}

inline bool verify(const GordanCertificate& cert, std::span<const ExponentVector> vectors) {
  return std::visit([&](const auto& c) { return verify(c, vectors); }, cert);
}

namespace detail {

using BigInt = boost::multiprecision::cpp_int;
using BigRational = boost::multiprecision::cpp_rational;

struct FmRow {
  std::vector<BigInt> coef;  // coef . y <= rhs
  BigInt rhs;
  std::vector<BigInt> mult;  // nonnegative multipliers over the input rows

  bool zero_coefs() const {
    return std::all_of(coef.begin(), coef.end(), [](const BigInt& c) { return c == 0; });
  }
  void normalize() {
    BigInt g = boost::multiprecision::abs(rhs);
    for (const auto& c : coef) g = boost::multiprecision::gcd(g, boost::multiprecision::abs(c));
    for (const auto& m : mult) g = boost::multiprecision::gcd(g, m);
    if (g > 1) {
      for (auto& c : coef) c /= g;
      rhs /= g;
      for (auto& m : mult) m /= g;
    }
  }
};

inline std::int64_t to_int64(const BigInt& v) {
  if (v > std::numeric_limits<std::int64_t>::max() || v < std::numeric_limits<std::int64_t>::min())
    throw std::overflow_error("certificate entry exceeds 64-bit range");
  return static_cast<std::int64_t>(v);
}

inline Combination combination_from(const FmRow& row) {
  BigInt g = 0;
  for (const auto& m : row.mult) g = boost::multiprecision::gcd(g, m);
  Combination c;
  for (const auto& m : row.mult) c.lambda.push_back(to_int64(g > 0 ? BigInt(m / g) : m));
  return c;
}

inline BigInt floor_of(const BigRational& q) {
  BigInt n = boost::multiprecision::numerator(q);
  BigInt d = boost::multiprecision::denominator(q);
  BigInt f = n / d;
  if (n % d != 0 && n < 0) f -= 1;
  return f;
}

inline BigInt ceil_of(const BigRational& q) { return -floor_of(-q); }

}  // namespace detail

/// Returns the side of the Gordan alternative that holds, with a verified certificate.
inline GordanCertificate decide_abelian(std::span<const ExponentVector> vectors) {
  using detail::BigInt;
  using detail::BigRational;
  using detail::FmRow;
  if (vectors.empty()) throw std::invalid_argument("decide_abelian: empty vector list");
  const std::size_t n = vectors.size();
  const std::size_t k = vectors[0].size();
  for (const auto& v : vectors)
    if (v.size() != k) throw std::invalid_argument("decide_abelian: mixed arities");

  // A zero vector is trivially balanced on its own.
  for (std::size_t i = 0; i < n; ++i)
    if (std::all_of(vectors[i].begin(), vectors[i].end(), [](auto x) { return x == 0; })) {
      Combination c{std::vector<std::int64_t>(n, 0)};
      c.lambda[i] = 1;
      return c;
    }

  std::vector<std::vector<FmRow>> stages(1);
  for (std::size_t i = 0; i < n; ++i) {
    FmRow r;
    for (auto x : vectors[i]) r.coef.emplace_back(x);
    r.rhs = -1;
    r.mult.assign(n, 0);
    r.mult[i] = 1;
    stages[0].push_back(std::move(r));
  }

  for (std::size_t j = 0; j < k; ++j) {
    const auto& cur = stages.back();
    std::vector<FmRow> next;
    std::vector<const FmRow*> pos, neg;
    for (const auto& r : cur) {
      if (r.coef[j] > 0)
        pos.push_back(&r);
      else if (r.coef[j] < 0)
        neg.push_back(&r);
      else
        next.push_back(r);
    }
    for (const FmRow* p : pos)
      for (const FmRow* q : neg) {
        BigInt a = p->coef[j];
        BigInt b = -q->coef[j];
        FmRow r;
        r.coef.resize(k);
        for (std::size_t c = 0; c < k; ++c) r.coef[c] = b * p->coef[c] + a * q->coef[c];
        r.rhs = b * p->rhs + a * q->rhs;
        r.mult.resize(n);
        for (std::size_t c = 0; c < n; ++c) r.mult[c] = b * p->mult[c] + a * q->mult[c];
        r.normalize();
        next.push_back(std::move(r));
      }
    // Drop exact duplicates (same constraint and multipliers add nothing).
    std::vector<FmRow> dedup;
    for (auto& r : next) {
      bool dup = std::any_of(dedup.begin(), dedup.end(),
                             [&](const FmRow& d) { return d.coef == r.coef && d.rhs == r.rhs; });
      if (!dup) dedup.push_back(std::move(r));
    }
    for (const auto& r : dedup)
      if (r.zero_coefs() && r.rhs < 0) return detail::combination_from(r);
    stages.push_back(std::move(dedup));
  }

  // Feasible: back-substitute from the last eliminated variable.
  std::vector<BigRational> y(k, BigRational(0));
  for (std::size_t jj = k; jj-- > 0;) {
    const auto& rows = stages[jj];
    bool has_lo = false, has_hi = false;
    BigRational lo, hi;
    for (const auto& r : rows) {
      if (r.coef[jj] == 0) continue;
      BigRational s(r.rhs);
      for (std::size_t c = jj + 1; c < k; ++c) s -= BigRational(r.coef[c]) * y[c];
      BigRational bound = s / BigRational(r.coef[jj]);
      if (r.coef[jj] > 0) {
        if (!has_hi || bound < hi) hi = bound;
        has_hi = true;
      } else {
        if (!has_lo || bound > lo) lo = bound;
        has_lo = true;
      }
    }
    BigRational v(0);
    if (has_lo && has_hi) {
      BigInt cl = detail::ceil_of(lo), fh = detail::floor_of(hi);
      if (cl <= fh)
        v = BigRational(cl > 0 ? cl : (fh < 0 ? fh : BigInt(0)));
      else
        v = (lo + hi) / 2;
    } else if (has_hi) {
      BigInt fh = detail::floor_of(hi);
      v = BigRational(fh < 0 ? fh : BigInt(0));
    } else if (has_lo) {
      BigInt cl = detail::ceil_of(lo);
      v = BigRational(cl > 0 ? cl : BigInt(0));
    }
    y[jj] = v;
  }
  BigInt scale = 1;
  for (const auto& q : y) scale = boost::multiprecision::lcm(scale, BigInt(boost::multiprecision::denominator(q)));
  std::vector<BigInt> yi;
  BigInt g = 0;
  for (const auto& q : y) {
    yi.push_back(boost::multiprecision::numerator(q) * (scale / boost::multiprecision::denominator(q)));
    g = boost::multiprecision::gcd(g, boost::multiprecision::abs(yi.back()));
  }
  Separator sep;
  for (auto& v : yi) sep.y.push_back(detail::to_int64(g > 1 ? BigInt(v / g) : v));
  if (!verify(sep, vectors)) throw std::logic_error("decide_abelian: reconstructed separator failed verification");
  return sep;
}

}  // namespace ordcalc
