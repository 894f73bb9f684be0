#pragma once

#include <Eigen/Dense>
#include <Eigen/SVD>

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>
#include <numeric>
#include <utility>
#include <vector>

#include "slocc/errors.hpp"
#include "slocc/exact_matrix.hpp"
#include "slocc/scalar.hpp"

namespace slocc {

enum class RankMethod { exact, numeric };

struct RankResult {
  std::size_t rank = 0;
  RankMethod method = RankMethod::exact;
  /// (row, column) of every pivot in elimination order, row in the input
  /// numbering. Empty for the numeric path.
  std::vector<std::pair<std::size_t, std::size_t>> pivots;
};

namespace detail {

class ArithmeticOverflow {};

/// int64 ring with overflow trapping; the caller retries in BigInt on trap.
struct CheckedInt64Ring {
  using value_type = std::int64_t;
  static bool zero(value_type a) { return a == 0; }
  static bool one(value_type a) { return a == 1; }
  static value_type mul(value_type a, value_type b) {
    value_type r;
    if (__builtin_mul_overflow(a, b, &r)) throw ArithmeticOverflow{};
    return r;
  }
  static value_type sub(value_type a, value_type b) {
    value_type r;
    if (__builtin_sub_overflow(a, b, &r)) throw ArithmeticOverflow{};
    return r;
  }
  static value_type add(value_type a, value_type b) {
    value_type r;
    if (__builtin_add_overflow(a, b, &r)) throw ArithmeticOverflow{};
    return r;
  }
  static value_type div_exact(value_type a, value_type b) {
    if (b == -1 && a == std::numeric_limits<value_type>::min()) throw ArithmeticOverflow{};
    return a / b;
  }
};

struct BigIntRing {
  using value_type = BigInt;
  static bool zero(const value_type& a) { return a.is_zero(); }
  static bool one(const value_type& a) { return a == 1; }
  static value_type mul(const value_type& a, const value_type& b) { return a * b; }
  static value_type sub(const value_type& a, const value_type& b) { return a - b; }
  static value_type add(const value_type& a, const value_type& b) { return a + b; }
  static value_type div_exact(const value_type& a, const value_type& b) { return a / b; }
};

template <class T>
struct Gaussian {
  T re{};
  T im{};
};

/// Z[i] over an integer ring. Division is exact whenever the quotient is a
/// Gaussian integer, which Bareiss guarantees.
template <class Ring>
struct GaussianRing {
  using base = typename Ring::value_type;
  using value_type = Gaussian<base>;
  static bool zero(const value_type& a) { return Ring::zero(a.re) && Ring::zero(a.im); }
  static bool one(const value_type& a) { return Ring::one(a.re) && Ring::zero(a.im); }
  static value_type mul(const value_type& a, const value_type& b) {
    if (Ring::zero(a.im) && Ring::zero(b.im)) return {Ring::mul(a.re, b.re), base{}};
    return {Ring::sub(Ring::mul(a.re, b.re), Ring::mul(a.im, b.im)),
            Ring::add(Ring::mul(a.re, b.im), Ring::mul(a.im, b.re))};
  }
  static value_type add(const value_type& a, const value_type& b) {
    return {Ring::add(a.re, b.re), Ring::add(a.im, b.im)};
  }
  static value_type sub(const value_type& a, const value_type& b) {
    return {Ring::sub(a.re, b.re), Ring::sub(a.im, b.im)};
  }
  static value_type div_exact(const value_type& a, const value_type& b) {
    if (Ring::zero(b.im)) return {Ring::div_exact(a.re, b.re), Ring::div_exact(a.im, b.re)};
    const base norm = Ring::add(Ring::mul(b.re, b.re), Ring::mul(b.im, b.im));
    const base re = Ring::add(Ring::mul(a.re, b.re), Ring::mul(a.im, b.im));
    const base im = Ring::sub(Ring::mul(a.im, b.re), Ring::mul(a.re, b.im));
    return {Ring::div_exact(re, norm), Ring::div_exact(im, norm)};
  }
};

/// Fraction-free (Bareiss) row echelon reduction; returns rank and pivots.
///
/// Columns are scanned left to right and the first remaining row with a
/// nonzero entry becomes the pivot. After step k every live entry equals a
/// (k+1)x(k+1) minor of the input, so the division by the previous pivot is
/// exact and entries never leave the ring.
template <class Ring>
RankResult bareiss_rank(std::vector<typename Ring::value_type> a, std::size_t rows, std::size_t cols) {
  using V = typename Ring::value_type;
  RankResult result;
  result.method = RankMethod::exact;
  std::vector<std::size_t> row_id(rows);
  std::iota(row_id.begin(), row_id.end(), std::size_t{0});
  auto at = [&](std::size_t r, std::size_t c) -> V& { return a[r * cols + c]; };

  V prev{};
  bool have_prev = false;
  std::size_t r = 0;
  for (std::size_t c = 0; c < cols && r < rows; ++c) {
    std::size_t p = r;
    while (p < rows && Ring::zero(at(p, c))) ++p;
    if (p == rows) continue;
    if (p != r) {
      for (std::size_t j = c; j < cols; ++j) std::swap(at(p, j), at(r, j));
      std::swap(row_id[p], row_id[r]);
    }
    result.pivots.emplace_back(row_id[r], c);
    const V pivot = at(r, c);
    const bool divide = have_prev && !Ring::one(prev);
    for (std::size_t i = r + 1; i < rows; ++i) {
      const V factor = at(i, c);
      const bool has_factor = !Ring::zero(factor);
      for (std::size_t j = c + 1; j < cols; ++j) {
        V& x = at(i, j);
        const bool x_zero = Ring::zero(x);
        const bool y_zero = !has_factor || Ring::zero(at(r, j));
        if (x_zero && y_zero) continue;
        V next = x_zero ? V{} : Ring::mul(pivot, x);
        if (!y_zero) next = Ring::sub(next, Ring::mul(factor, at(r, j)));
        x = divide ? Ring::div_exact(next, prev) : std::move(next);
      }
      at(i, c) = V{};
    }
    prev = pivot;
    have_prev = true;
    ++r;
  }
  result.rank = r;
  return result;
}

inline bool fits_int64(const BigInt& v) {
  static const BigInt limit = BigInt(1) << 62;
  return v < limit && v > -limit;
}

}  // namespace detail

/// Rank over Q(i), tolerance free.
///
/// Each row is scaled by the lcm of its denominators (a rank-preserving row
/// operation) so elimination runs over Gaussian integers. The checked int64
/// path is tried first; any overflow restarts the same elimination in BigInt,
/// so the result never depends on which path finished.
inline RankResult rank_exact(const ExactMatrix& m) {
  if (m.empty()) throw InvalidArgument("rank_exact: empty matrix");
  const std::size_t rows = m.rows(), cols = m.cols();
  using detail::Gaussian;

  std::vector<Gaussian<BigInt>> ints(rows * cols);
  bool real = true;
  bool small = true;
  for (std::size_t r = 0; r < rows; ++r) {
    BigInt lcm = 1;
    for (std::size_t c = 0; c < cols; ++c) {
      const ExactScalar& z = m(r, c);
      if (z.is_zero()) continue;
      if (!z.im().is_zero()) real = false;
      for (const Rational* q : {&z.re(), &z.im()}) {
        const BigInt& den = boost::multiprecision::denominator(*q);
        if (den != 1) lcm = boost::multiprecision::lcm(lcm, den);
      }
    }
    for (std::size_t c = 0; c < cols; ++c) {
      const ExactScalar& z = m(r, c);
      if (z.is_zero()) continue;
      auto& g = ints[r * cols + c];
      if (lcm == 1) {
        g.re = boost::multiprecision::numerator(z.re());
        g.im = boost::multiprecision::numerator(z.im());
      } else {
        g.re = boost::multiprecision::numerator(z.re()) * (lcm / boost::multiprecision::denominator(z.re()));
        g.im = boost::multiprecision::numerator(z.im()) * (lcm / boost::multiprecision::denominator(z.im()));
      }
      small = small && detail::fits_int64(g.re) && detail::fits_int64(g.im);
    }
  }

  if (small) {
    try {
      if (real) {
        std::vector<std::int64_t> v(rows * cols);
        for (std::size_t i = 0; i < v.size(); ++i)
          if (!ints[i].re.is_zero()) v[i] = ints[i].re.convert_to<std::int64_t>();
        return detail::bareiss_rank<detail::CheckedInt64Ring>(std::move(v), rows, cols);
      }
      std::vector<Gaussian<std::int64_t>> v(rows * cols);
      for (std::size_t i = 0; i < v.size(); ++i) {
        if (ints[i].re.is_zero() && ints[i].im.is_zero()) continue;
        v[i] = {ints[i].re.convert_to<std::int64_t>(), ints[i].im.convert_to<std::int64_t>()};
      }
      return detail::bareiss_rank<detail::GaussianRing<detail::CheckedInt64Ring>>(std::move(v), rows, cols);
    } catch (const detail::ArithmeticOverflow&) {
      // fall through to the BigInt path
    }
  }
  if (real) {
    std::vector<BigInt> v(rows * cols);
    for (std::size_t i = 0; i < v.size(); ++i) v[i] = std::move(ints[i].re);
    return detail::bareiss_rank<detail::BigIntRing>(std::move(v), rows, cols);
  }
  return detail::bareiss_rank<detail::GaussianRing<detail::BigIntRing>>(std::move(ints), rows, cols);
}

/// Threshold policy for the floating-point cross-check.
struct NumericTolerance {
  /// Multiplies sigma_max * max(rows, cols) * epsilon.
  double safety_factor = 100.0;
};

inline RankResult rank_numeric(const Eigen::MatrixXcd& m, NumericTolerance tol = {}) {
  if (m.size() == 0) throw InvalidArgument("rank_numeric: empty matrix");
  if (!m.allFinite()) throw Overflow("rank_numeric: matrix has non-finite entries");
  Eigen::JacobiSVD<Eigen::MatrixXcd> svd(m);
  const auto& sv = svd.singularValues();
  RankResult result;
  result.method = RankMethod::numeric;
  if (sv.size() == 0 || sv(0) == 0.0) return result;
  const double threshold = sv(0) * static_cast<double>(std::max(m.rows(), m.cols())) *
                           std::numeric_limits<double>::epsilon() * tol.safety_factor;
  for (Eigen::Index i = 0; i < sv.size(); ++i)
    if (sv(i) > threshold) ++result.rank;
  return result;
}

inline Eigen::MatrixXcd to_complex_double(const ExactMatrix& m) {
  Eigen::MatrixXcd out(static_cast<Eigen::Index>(m.rows()), static_cast<Eigen::Index>(m.cols()));
  for (std::size_t r = 0; r < m.rows(); ++r)
    for (std::size_t c = 0; c < m.cols(); ++c) {
      const double re = m(r, c).re().convert_to<double>();
      const double im = m(r, c).im().convert_to<double>();
      if (!std::isfinite(re) || !std::isfinite(im)) {
        throw Overflow("rank_numeric: entry (" + std::to_string(r) + "," + std::to_string(c) +
                       ") does not fit a double");
      }
      out(static_cast<Eigen::Index>(r), static_cast<Eigen::Index>(c)) = {re, im};
    }
  return out;
}

inline RankResult rank_numeric(const ExactMatrix& m, NumericTolerance tol = {}) {
  if (m.empty()) throw InvalidArgument("rank_numeric: empty matrix");
  return rank_numeric(to_complex_double(m), tol);
}

}  // namespace slocc
