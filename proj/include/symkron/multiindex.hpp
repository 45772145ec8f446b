#pragma once

// Multi-index combinatorics for the symmetric subspace machinery.
//
// A multi-index is a d-tuple of non-negative integers k = (k_1,...,k_d)
// with modulus |k| = k_1 + ... + k_d.  Two enumerations of the set
// {k : |k| = n} are maintained side by side:
//
//   * the duplicate-free enumeration (length L_n = binomial(n+d-1, n)),
//     ordered so that each multi-index appears at the position of its
//     first occurrence in the redundant enumeration below; this coincides
//     with decreasing lexicographic order on the tuples, starting at
//     (n,0,...,0) and ending at (0,...,0,n);
//
//   * the redundant enumeration (virtual length d^n), whose j-th entry is
//     obtained by counting the base-d digits of j-1: entry a of the
//     multi-index is the number of digits equal to a-1.  It is never
//     materialized; entries are computed positionally.
//
// sigma(i) collects the redundant positions carrying the i-th distinct
// multi-index; its cardinality is the multinomial coefficient.
//
// All indices crossing the public API are 1-based.

#include <algorithm>
#include <cstdint>
#include <cstdlib>
#include <cmath>
#include <string>
#include <vector>

#include "symkron/errors.hpp"

namespace symkron {

using MultiIndex = std::vector<int>;

inline std::int64_t modulus(const MultiIndex& k) {
  std::int64_t s = 0;
  for (int e : k) s += e;
  return s;
}

namespace detail {

inline std::int64_t checked_mul(std::int64_t a, std::int64_t b,
                                const char* ctx) {
  __int128 p = static_cast<__int128>(a) * static_cast<__int128>(b);
  if (p > INT64_MAX || p < INT64_MIN)
    throw SizeError(std::string(ctx) + ": result exceeds 64-bit range");
  return static_cast<std::int64_t>(p);
}

}  // namespace detail

// Exact binomial coefficient; 0 outside the triangle, SizeError if the
// value does not fit a signed 64-bit integer.
inline std::int64_t binomial(std::int64_t n, std::int64_t r) {
  if (r < 0 || n < 0 || r > n) return 0;
  r = std::min(r, n - r);
  std::int64_t result = 1;
  for (std::int64_t i = 1; i <= r; ++i) {
    // result * (n-r+i) is divisible by i at every step
    __int128 p = static_cast<__int128>(result) * (n - r + i);
    p /= i;
    if (p > INT64_MAX) throw SizeError("binomial: result exceeds 64-bit range");
    result = static_cast<std::int64_t>(p);
  }
  return result;
}

// Number of multi-indices of modulus `order` in dimension `dim`,
// L_n = binomial(n+d-1, n).
inline std::int64_t level_size(int dim, int order) {
  if (dim < 1) throw ShapeError("level_size: dimension must be positive");
  if (order < 0) throw ShapeError("level_size: order must be non-negative");
  return binomial(static_cast<std::int64_t>(order) + dim - 1, order);
}

// d^n guarded against 64-bit overflow.
inline std::int64_t full_size(int dim, int order) {
  if (dim < 1) throw ShapeError("full_size: dimension must be positive");
  if (order < 0) throw ShapeError("full_size: order must be non-negative");
  std::int64_t r = 1;
  for (int i = 0; i < order; ++i) r = detail::checked_mul(r, dim, "full_size");
  return r;
}

// Cap on materializing objects of length d^n.  Overridable through the
// environment variable SYMKRON_MAX_FULL, clamped to [1, 2^24].
inline std::int64_t default_full_cap() {
  static const std::int64_t cap = [] {
    std::int64_t v = std::int64_t{1} << 20;
    if (const char* env = std::getenv("SYMKRON_MAX_FULL")) {
      char* end = nullptr;
      long long parsed = std::strtoll(env, &end, 10);
      if (end != env && parsed > 0) v = parsed;
    }
    return std::min<std::int64_t>(std::max<std::int64_t>(v, 1),
                                  std::int64_t{1} << 24);
  }();
  return cap;
}

// d^n checked against a materialization cap.
inline std::int64_t full_size_checked(int dim, int order,
                                      std::int64_t cap = default_full_cap()) {
  std::int64_t dn = full_size(dim, order);
  if (dn > cap)
    throw SizeError("full-size object of length " + std::to_string(dn) +
                    " exceeds cap " + std::to_string(cap));
  return dn;
}

// Multinomial coefficient top! / (k_1! ... k_d!).  Total on integer tuples:
// returns 0 whenever an entry is negative or the entries do not sum to top.
inline std::int64_t multinomial(int top, const MultiIndex& k) {
  std::int64_t sum = 0;
  for (int e : k) {
    if (e < 0) return 0;
    sum += e;
  }
  if (sum != top) return 0;
  std::int64_t result = 1;
  std::int64_t partial = 0;
  for (int e : k) {
    partial += e;
    result = detail::checked_mul(result, binomial(partial, e), "multinomial");
  }
  return result;
}

// Multinomial as double, falling back to lgamma when the exact value
// overflows 64 bits.
inline double multinomial_double(int top, const MultiIndex& k) {
  std::int64_t sum = 0;
  for (int e : k) {
    if (e < 0) return 0.0;
    sum += e;
  }
  if (sum != top) return 0.0;
  try {
    return static_cast<double>(multinomial(top, k));
  } catch (const SizeError&) {
    double lg = std::lgamma(static_cast<double>(top) + 1.0);
    for (int e : k) lg -= std::lgamma(static_cast<double>(e) + 1.0);
    return std::exp(lg);
  }
}

// All multi-indices of modulus `order`, duplicate-free canonical order.
inline std::vector<MultiIndex> lex_enumerate(int dim, int order) {
  std::int64_t count = level_size(dim, order);
  std::vector<MultiIndex> out;
  out.reserve(static_cast<std::size_t>(count));
  MultiIndex k(static_cast<std::size_t>(dim), 0);
  k[0] = order;
  out.push_back(k);
  while (true) {
    // successor in decreasing lexicographic order: decrement the last
    // positive entry before position d and collapse the tail after it
    int t = -1;
    for (int j = dim - 2; j >= 0; --j)
      if (k[static_cast<std::size_t>(j)] > 0) {
        t = j;
        break;
      }
    if (t < 0) break;
    int tail = k[static_cast<std::size_t>(dim - 1)];
    k[static_cast<std::size_t>(t)] -= 1;
    k[static_cast<std::size_t>(t + 1)] = tail + 1;
    for (int j = t + 2; j < dim; ++j) k[static_cast<std::size_t>(j)] = 0;
    out.push_back(k);
  }
  return out;
}

// j-th entry (1-based, j in [1, d^n]) of the redundant enumeration,
// computed positionally from the base-d digits of j-1.
inline MultiIndex redundant_entry(int dim, int order, std::int64_t j) {
  std::int64_t dn = full_size(dim, order);
  if (j < 1 || j > dn)
    throw ShapeError("redundant_entry: index " + std::to_string(j) +
                     " outside [1, " + std::to_string(dn) + "]");
  MultiIndex k(static_cast<std::size_t>(dim), 0);
  std::int64_t rest = j - 1;
  for (int pos = 0; pos < order; ++pos) {
    k[static_cast<std::size_t>(rest % dim)] += 1;
    rest /= dim;
  }
  return k;
}

// 1-based position of k in the canonical enumeration of its level.
inline std::int64_t lex_rank(int dim, int order, const MultiIndex& k) {
  if (static_cast<int>(k.size()) != dim)
    throw ShapeError("lex_rank: multi-index has wrong dimension");
  for (int e : k)
    if (e < 0) throw ShapeError("lex_rank: negative entry");
  if (modulus(k) != order)
    throw ShapeError("lex_rank: modulus " + std::to_string(modulus(k)) +
                     " does not match order " + std::to_string(order));
  // entries preceding k at coordinate j are those with a larger j-th entry
  // and matching prefix; their count telescopes to a single binomial
  std::int64_t rank = 1;
  std::int64_t remaining = order;
  for (int j = 0; j < dim - 1; ++j) {
    std::int64_t kj = k[static_cast<std::size_t>(j)];
    rank += binomial(remaining - kj - 1 + (dim - 1 - j), dim - 1 - j);
    remaining -= kj;
  }
  return rank;
}

// Inverse of lex_rank: the multi-index at 1-based position i of its level.
inline MultiIndex lex_entry(int dim, int order, std::int64_t i) {
  std::int64_t ln = level_size(dim, order);
  if (i < 1 || i > ln)
    throw ShapeError("lex_entry: index " + std::to_string(i) +
                     " outside [1, " + std::to_string(ln) + "]");
  MultiIndex k(static_cast<std::size_t>(dim), 0);
  std::int64_t rest = i - 1;
  std::int64_t remaining = order;
  for (int j = 0; j < dim - 1; ++j) {
    // blocks of fixed j-th entry appear in decreasing entry order; walk
    // past whole blocks until the residual rank falls inside one
    std::int64_t v = remaining;
    for (; v >= 0; --v) {
      std::int64_t block = level_size(dim - 1 - j,
                                      static_cast<int>(remaining - v));
      if (rest < block) break;
      rest -= block;
    }
    k[static_cast<std::size_t>(j)] = static_cast<int>(v);
    remaining -= v;
  }
  k[static_cast<std::size_t>(dim - 1)] = static_cast<int>(remaining);
  return k;
}

// #sigma(i): how often the i-th distinct multi-index occurs redundantly.
inline std::int64_t sigma_cardinality(int dim, int order, std::int64_t i) {
  return multinomial(order, lex_entry(dim, order, i));
}

namespace detail {

// digits of the redundant position carrying k earliest: sorted ascending
inline std::vector<int> sorted_digits(int dim, const MultiIndex& k) {
  std::vector<int> digits;
  digits.reserve(static_cast<std::size_t>(modulus(k)));
  for (int a = 0; a < dim; ++a)
    for (int c = 0; c < k[static_cast<std::size_t>(a)]; ++c)
      digits.push_back(a);
  return digits;
}

inline std::int64_t digits_to_position(int dim, const std::vector<int>& dg) {
  std::int64_t v = 0;
  for (int d : dg) v = v * dim + d;
  return v + 1;
}

}  // namespace detail

// Smallest redundant position whose entry equals k (1-based).
inline std::int64_t sigma_first(int dim, int order, const MultiIndex& k) {
  if (static_cast<int>(k.size()) != dim || modulus(k) != order)
    throw ShapeError("sigma_first: multi-index does not match (dim, order)");
  return detail::digits_to_position(dim, detail::sorted_digits(dim, k));
}

// The full set sigma(i) = { j : redundant_entry(j) = lex_entry(i) },
// ascending, 1-based.  Materialization requires d^n within the cap.
inline std::vector<std::int64_t> sigma_set(
    int dim, int order, std::int64_t i,
    std::int64_t cap = default_full_cap()) {
  full_size_checked(dim, order, cap);
  MultiIndex k = lex_entry(dim, order, i);
  std::vector<int> digits = detail::sorted_digits(dim, k);
  std::vector<std::int64_t> out;
  out.reserve(static_cast<std::size_t>(sigma_cardinality(dim, order, i)));
  do {
    out.push_back(detail::digits_to_position(dim, digits));
  } while (std::next_permutation(digits.begin(), digits.end()));
  return out;
}

}  // namespace symkron
