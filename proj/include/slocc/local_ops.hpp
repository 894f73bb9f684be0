#pragma once

#include <cstdint>
#include <optional>
#include <random>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "slocc/errors.hpp"
#include "slocc/exact_matrix.hpp"
#include "slocc/matricize.hpp"
#include "slocc/rank.hpp"
#include "slocc/state.hpp"

namespace slocc {

/// A d x d operator acting on one 1-based site.
struct LocalOperator {
  int site = 0;
  ExactMatrix matrix;
};

/// One operator per site, F_(1) x ... x F_(n).
class LocalOperatorSet {
 public:
  LocalOperatorSet(const Dims& dims, std::vector<ExactMatrix> factors) : dims_(dims) {
    if (factors.size() != dims.size()) {
      throw InvalidArgument("LocalOperatorSet: expected " + std::to_string(dims.size()) + " factors, got " +
                            std::to_string(factors.size()));
    }
    invertible_ = true;
    for (std::size_t k = 0; k < factors.size(); ++k) {
      const auto d = static_cast<std::size_t>(dims[k]);
      if (factors[k].rows() != d || factors[k].cols() != d) {
        throw InvalidArgument("LocalOperatorSet: factor for site " + std::to_string(k + 1) + " is " +
                              std::to_string(factors[k].rows()) + "x" + std::to_string(factors[k].cols()) +
                              ", site dimension is " + std::to_string(d));
      }
      if (determinant(factors[k]).is_zero()) invertible_ = false;
      ops_.push_back({static_cast<int>(k + 1), std::move(factors[k])});
    }
  }

  static LocalOperatorSet identity(const Dims& dims) {
    std::vector<ExactMatrix> f;
    for (int d : dims.sizes()) f.push_back(ExactMatrix::identity(static_cast<std::size_t>(d)));
    return {dims, std::move(f)};
  }

  const Dims& dims() const { return dims_; }
  std::size_t size() const { return ops_.size(); }
  bool invertible() const { return invertible_; }
  /// 1-based site access.
  const ExactMatrix& factor(int site) const { return ops_.at(static_cast<std::size_t>(site - 1)).matrix; }
  const std::vector<LocalOperator>& operators() const { return ops_; }

  /// Factor-wise exact inverses; throws if any factor is singular.
  LocalOperatorSet inverse() const {
    std::vector<ExactMatrix> f;
    for (const auto& op : ops_) f.push_back(slocc::inverse(op.matrix));
    return {dims_, std::move(f)};
  }

 private:
  Dims dims_;
  std::vector<LocalOperator> ops_;
  bool invertible_ = true;
};

namespace detail {

/// Applies the operators site by site to a dense vector. The result may be zero.
inline std::vector<ExactScalar> apply_local_dense(const Dims& dims, std::vector<ExactScalar> amps,
                                                  const LocalOperatorSet& ops) {
  if (!(ops.dims() == dims)) throw InvalidArgument("apply_local: operator dims do not match the state");
  std::uint64_t stride = dims.total();
  for (std::size_t k = 0; k < dims.size(); ++k) {
    const auto d = static_cast<std::uint64_t>(dims[k]);
    stride /= d;
    const ExactMatrix& f = ops.factor(static_cast<int>(k + 1));
    std::vector<ExactScalar> out(amps.size());
    for (std::uint64_t i = 0; i < amps.size(); ++i) {
      if (amps[i].is_zero()) continue;
      const std::uint64_t s = (i / stride) % d;
      const std::uint64_t base = i - s * stride;
      for (std::uint64_t t = 0; t < d; ++t) {
        const ExactScalar& ft = f(t, s);
        if (ft.is_zero()) continue;
        out[base + t * stride] += ft * amps[i];
      }
    }
    amps = std::move(out);
  }
  return amps;
}

inline bool all_zero(std::span<const ExactScalar> v) {
  for (const auto& z : v)
    if (!z.is_zero()) return false;
  return true;
}

inline ExactMatrix kron_of(const LocalOperatorSet& ops, std::span<const int> sites) {
  ExactMatrix out = ExactMatrix::identity(1);
  for (int s : sites) out = kron(out, ops.factor(s));
  return out;
}

}  // namespace detail

/// Output amplitude at t is sum_s (prod_k F_(k)[t_k, s_k]) a_s. Throws
/// ZeroState when singular factors annihilate the state.
inline QuditState apply_local(const QuditState& state, const LocalOperatorSet& ops) {
  auto out = detail::apply_local_dense(state.dims(), state.dense(), ops);
  if (detail::all_zero(out)) throw ZeroState("apply_local: local operators annihilate the state");
  return QuditState::from_dense(state.dims(), out);
}

namespace detail {

using GaussianI64 = Gaussian<std::int64_t>;
using CheckedGaussianRing = GaussianRing<CheckedInt64Ring>;

/// Entries as checked int64 Gaussian integers, or nothing when some entry is
/// not integral or too large.
inline std::optional<std::vector<GaussianI64>> gaussian_i64(const ExactMatrix& m) {
  std::vector<GaussianI64> out(m.data().size());
  for (std::size_t i = 0; i < out.size(); ++i) {
    const ExactScalar& z = m.data()[i];
    if (z.is_zero()) continue;
    for (const Rational* q : {&z.re(), &z.im()})
      if (boost::multiprecision::denominator(*q) != 1 || !fits_int64(boost::multiprecision::numerator(*q)))
        return std::nullopt;
    out[i] = {boost::multiprecision::numerator(z.re()).convert_to<std::int64_t>(),
              boost::multiprecision::numerator(z.im()).convert_to<std::int64_t>()};
  }
  return out;
}

/// a (n x k) times b (k x m); throws ArithmeticOverflow.
inline std::vector<GaussianI64> gaussian_product(const std::vector<GaussianI64>& a, const std::vector<GaussianI64>& b,
                                                 std::size_t n, std::size_t k, std::size_t m) {
  std::vector<GaussianI64> out(n * m);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t t = 0; t < k; ++t) {
      const GaussianI64& x = a[i * k + t];
      if (CheckedGaussianRing::zero(x)) continue;
      for (std::size_t j = 0; j < m; ++j) {
        const GaussianI64& y = b[t * m + j];
        if (CheckedGaussianRing::zero(y)) continue;
        GaussianI64& o = out[i * m + j];
        o = CheckedGaussianRing::add(o, CheckedGaussianRing::mul(x, y));
      }
    }
  return out;
}

/// R * M * C^T over int64 Gaussian integers when everything is integral and
/// nothing overflows.
inline std::optional<std::vector<GaussianI64>> sandwich_i64(const ExactMatrix& r, const ExactMatrix& m,
                                                            const ExactMatrix& ct) {
  const auto ri = gaussian_i64(r), mi = gaussian_i64(m), ci = gaussian_i64(ct);
  if (!ri || !mi || !ci) return std::nullopt;
  try {
    const auto rm = gaussian_product(*ri, *mi, r.rows(), r.cols(), m.cols());
    return gaussian_product(rm, *ci, r.rows(), m.cols(), ct.cols());
  } catch (const ArithmeticOverflow&) {
    return std::nullopt;
  }
}

/// Identity check against an already transformed amplitude vector.
inline bool theorem1_identity(const QuditState& state, std::span<const ExactScalar> transformed,
                              const LocalOperatorSet& ops, int l, const QuditPermutation& sigma) {
  const Dims& dims = state.dims();
  const ExactMatrix lhs = matricize_dense(dims, transformed, l, sigma).matrix;
  const std::vector<int> order = sigma.site_order(dims.size());
  const auto split = static_cast<std::ptrdiff_t>(l);
  const std::vector<int> row_sites(order.begin(), order.begin() + split);
  const std::vector<int> col_sites(order.begin() + split, order.end());
  const ExactMatrix row_factor = kron_of(ops, row_sites);
  const ExactMatrix col_factor = kron_of(ops, col_sites);
  const ExactMatrix m = coefficient_matrix(state, l, sigma).matrix;
  const ExactMatrix col_t = col_factor.transpose();
  if (const auto fast = sandwich_i64(row_factor, m, col_t)) {
    if (const auto want = gaussian_i64(lhs)) {
      for (std::size_t i = 0; i < fast->size(); ++i)
        if ((*fast)[i].re != (*want)[i].re || (*fast)[i].im != (*want)[i].im) return false;
      return true;
    }
  }
  return lhs == row_factor * m * col_t;
}

}  // namespace detail

/// Checks M^sigma(F|phi>) == (F^sigma rows) M^sigma(|phi>) (F^sigma cols)^T exactly,
/// each factor travelling with its qudit. Holds for singular factors too.
inline bool verify_theorem1(const QuditState& state, const LocalOperatorSet& ops, int l,
                            const QuditPermutation& sigma) {
  if (!(ops.dims() == state.dims())) throw InvalidArgument("verify_theorem1: operator dims do not match the state");
  sigma.validate(state.num_sites(), l);
  const auto transformed = detail::apply_local_dense(state.dims(), state.dense(), ops);
  return detail::theorem1_identity(state, transformed, ops, l, sigma);
}

inline constexpr int kDefaultEntryBound = 3;

namespace detail {

inline ExactMatrix random_gaussian_matrix(std::size_t rows, std::size_t cols, std::mt19937_64& rng, int bound) {
  std::uniform_int_distribution<int> dist(-bound, bound);
  ExactMatrix m(rows, cols);
  for (std::size_t r = 0; r < rows; ++r)
    for (std::size_t c = 0; c < cols; ++c) {
      const int re = dist(rng);
      const int im = dist(rng);
      m(r, c) = ExactScalar(re, im);
    }
  return m;
}

}  // namespace detail

/// Random d x d Gaussian-integer matrix with entries in [-bound, bound] (real
/// and imaginary parts), resampled until its exact determinant is nonzero.
inline ExactMatrix random_ilo(int d, std::mt19937_64& rng, int entry_bound = kDefaultEntryBound) {
  if (d < 2) throw InvalidArgument("random_ilo: need d >= 2");
  if (entry_bound < 1) throw InvalidArgument("random_ilo: entry bound must be >= 1");
  for (int attempt = 0; attempt < 1000; ++attempt) {
    ExactMatrix m = detail::random_gaussian_matrix(static_cast<std::size_t>(d), static_cast<std::size_t>(d), rng, entry_bound);
    if (!determinant(m).is_zero()) return m;
  }
  throw Error("random_ilo: no invertible sample in 1000 attempts");
}

inline ExactMatrix random_ilo(int d, std::uint64_t seed, int entry_bound = kDefaultEntryBound) {
  std::mt19937_64 rng(seed);
  return random_ilo(d, rng, entry_bound);
}

/// Random local operator. With force_singular the result is U V with U of
/// shape d x (d-1), so its rank is at most d-1 and the determinant is 0.
inline ExactMatrix random_local_possibly_singular(int d, std::mt19937_64& rng, int entry_bound, bool force_singular) {
  if (d < 2) throw InvalidArgument("random_local_possibly_singular: need d >= 2");
  if (entry_bound < 1) throw InvalidArgument("random_local_possibly_singular: entry bound must be >= 1");
  const auto n = static_cast<std::size_t>(d);
  if (!force_singular) return detail::random_gaussian_matrix(n, n, rng, entry_bound);
  const ExactMatrix u = detail::random_gaussian_matrix(n, n - 1, rng, entry_bound);
  const ExactMatrix v = detail::random_gaussian_matrix(n - 1, n, rng, entry_bound);
  return u * v;
}

inline ExactMatrix random_local_possibly_singular(int d, std::uint64_t seed, int entry_bound, bool force_singular) {
  std::mt19937_64 rng(seed);
  return random_local_possibly_singular(d, rng, entry_bound, force_singular);
}

/// Random state with Gaussian-integer amplitudes; about half of the entries are
/// zero so that low-rank matricizations show up.
inline QuditState random_state(const Dims& dims, std::mt19937_64& rng, int entry_bound = kDefaultEntryBound) {
  std::uniform_int_distribution<int> dist(-entry_bound, entry_bound);
  std::bernoulli_distribution keep(0.5);
  std::vector<ExactScalar> amps(dims.total());
  bool any = false;
  for (auto& a : amps) {
    if (!keep(rng)) continue;
    const int re = dist(rng);
    const int im = dist(rng);
    a = ExactScalar(re, im);
    any = any || !a.is_zero();
  }
  if (!any) amps[0] = ExactScalar(1);
  return QuditState::from_dense(dims, amps);
}

/// n uniform in [2, max_sites], each d uniform in [2, max_dim].
inline Dims random_dims(std::mt19937_64& rng, int max_sites, int max_dim) {
  std::uniform_int_distribution<int> sites(2, max_sites);
  std::uniform_int_distribution<int> dim(2, max_dim);
  std::vector<int> sizes(static_cast<std::size_t>(sites(rng)));
  for (auto& d : sizes) d = dim(rng);
  return Dims(std::move(sizes));
}

inline LocalOperatorSet random_ilo_set(const Dims& dims, std::mt19937_64& rng, int entry_bound = kDefaultEntryBound) {
  std::vector<ExactMatrix> f;
  for (int d : dims.sizes()) f.push_back(random_ilo(d, rng, entry_bound));
  return {dims, std::move(f)};
}

/// Ranks of one matricization before and after a local map.
struct RankComparison {
  int split = 0;
  QuditPermutation sigma;
  std::size_t before = 0;
  std::size_t after = 0;
};

struct MonotoneCheck {
  enum class Status { holds, violated, skipped };
  Status status = Status::holds;
  std::vector<RankComparison> ranks;
};

/// Compares every coefficient-matrix rank (all l, all canonical sigma) before
/// and after the operators. A zero output is reported as skipped.
inline MonotoneCheck check_monotone_nonincrease(const QuditState& state, const LocalOperatorSet& ops) {
  MonotoneCheck out;
  const auto transformed = detail::apply_local_dense(state.dims(), state.dense(), ops);
  if (detail::all_zero(transformed)) {
    out.status = MonotoneCheck::Status::skipped;
    return out;
  }
  const QuditState after = QuditState::from_dense(state.dims(), transformed);
  const std::size_t n = state.num_sites();
  for (int l = 1; static_cast<std::size_t>(l) < n; ++l) {
    for (const auto& sigma : permutation_set(n, l)) {
      RankComparison rc{l, sigma, rank_exact(coefficient_matrix(state, l, sigma).matrix).rank,
                        rank_exact(coefficient_matrix(after, l, sigma).matrix).rank};
      if (rc.after > rc.before) out.status = MonotoneCheck::Status::violated;
      out.ranks.push_back(std::move(rc));
    }
  }
  return out;
}

}  // namespace slocc
