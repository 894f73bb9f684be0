#pragma once

#include <algorithm>
#include <cstdint>
#include <map>
#include <numeric>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "slocc/errors.hpp"
#include "slocc/scalar.hpp"

namespace slocc {

/// Local dimensions (d_1, ..., d_n) of an n-qudit system. n >= 2, every d_k >= 2.
class Dims {
 public:
  Dims() = default;
  explicit Dims(std::vector<int> sizes) : sizes_(std::move(sizes)) {
    if (sizes_.size() < 2) throw InvalidArgument("Dims: need at least 2 sites");
    total_ = 1;
    for (int d : sizes_) {
      if (d < 2) throw InvalidArgument("Dims: every local dimension must be >= 2");
      if (total_ > (std::uint64_t{1} << 40) / static_cast<std::uint64_t>(d)) {
        throw InvalidArgument("Dims: total dimension too large");
      }
      total_ *= static_cast<std::uint64_t>(d);
    }
  }
  Dims(std::initializer_list<int> sizes) : Dims(std::vector<int>(sizes)) {}

  std::size_t size() const { return sizes_.size(); }
  int operator[](std::size_t k) const { return sizes_[k]; }
  /// 1-based site access.
  int site(int label) const { return sizes_.at(static_cast<std::size_t>(label - 1)); }
  std::uint64_t total() const { return total_; }
  std::span<const int> sizes() const { return sizes_; }

  std::string str() const {
    std::string out;
    for (std::size_t k = 0; k < sizes_.size(); ++k) {
      if (k) out += ",";
      out += std::to_string(sizes_[k]);
    }
    return out;
  }

  friend bool operator==(const Dims&, const Dims&) = default;
  friend auto operator<=>(const Dims& a, const Dims& b) { return a.sizes_ <=> b.sizes_; }

 private:
  std::vector<int> sizes_;
  std::uint64_t total_ = 0;
};

using MultiIndex = std::vector<int>;

/// Mixed-radix encoding with s_1 most significant: i = sum_k s_k * prod_{j>k} d_j.
inline std::uint64_t flat_index(std::span<const int> digits, const Dims& dims) {
  if (digits.size() != dims.size()) {
    throw InvalidIndex("flat_index: multi-index length " + std::to_string(digits.size()) +
                       " does not match " + std::to_string(dims.size()) + " sites");
  }
  std::uint64_t i = 0;
  for (std::size_t k = 0; k < digits.size(); ++k) {
    if (digits[k] < 0 || digits[k] >= dims[k]) {
      throw InvalidIndex("flat_index: digit " + std::to_string(digits[k]) + " at site " +
                         std::to_string(k + 1) + " outside [0," + std::to_string(dims[k] - 1) +
                         "]");
    }
    i = i * static_cast<std::uint64_t>(dims[k]) + static_cast<std::uint64_t>(digits[k]);
  }
  return i;
}

inline MultiIndex multiindex_of(std::uint64_t i, const Dims& dims) {
  if (i >= dims.total()) {
    throw InvalidIndex("multiindex_of: index " + std::to_string(i) + " outside [0," +
                       std::to_string(dims.total() - 1) + "]");
  }
  MultiIndex digits(dims.size());
  for (std::size_t k = dims.size(); k-- > 0;) {
    const auto d = static_cast<std::uint64_t>(dims[k]);
    digits[k] = static_cast<int>(i % d);
    i /= d;
  }
  return digits;
}

/// Relabeling of sites. Entry k (0-based) holds the 1-based position that the
/// qudit at site k+1 moves to.
using SitePermutation = std::vector<int>;

inline void validate_site_permutation(const SitePermutation& perm, std::size_t n) {
  if (perm.size() != n) {
    throw InvalidArgument("site permutation has length " + std::to_string(perm.size()) +
                          ", expected " + std::to_string(n));
  }
  std::vector<bool> seen(n, false);
  for (int p : perm) {
    if (p < 1 || static_cast<std::size_t>(p) > n || seen[static_cast<std::size_t>(p - 1)]) {
      throw InvalidArgument("site permutation is not a bijection on 1.." + std::to_string(n));
    }
    seen[static_cast<std::size_t>(p - 1)] = true;
  }
}

/// (p o q)(k) = p(q(k)): apply q first, then p.
inline SitePermutation compose(const SitePermutation& p, const SitePermutation& q) {
  validate_site_permutation(p, q.size());
  validate_site_permutation(q, q.size());
  SitePermutation out(q.size());
  for (std::size_t k = 0; k < q.size(); ++k) out[k] = p[static_cast<std::size_t>(q[k] - 1)];
  return out;
}

inline SitePermutation inverse(const SitePermutation& p) {
  validate_site_permutation(p, p.size());
  SitePermutation out(p.size());
  for (std::size_t k = 0; k < p.size(); ++k) out[static_cast<std::size_t>(p[k] - 1)] = static_cast<int>(k + 1);
  return out;
}

/// Pure n-qudit state as a sparse map flat index -> nonzero amplitude.
///
/// Amplitudes are not normalized; every classification quantity is invariant
/// under global scaling. The zero vector is rejected.
class QuditState {
 public:
  using AmplitudeMap = std::map<std::uint64_t, ExactScalar>;

  QuditState(Dims dims, AmplitudeMap amplitudes) : dims_(std::move(dims)) {
    for (auto& [i, a] : amplitudes) {
      if (i >= dims_.total()) {
        throw InvalidIndex("QuditState: flat index " + std::to_string(i) + " out of range");
      }
      if (!a.is_zero()) amplitudes_.emplace(i, std::move(a));
    }
    if (amplitudes_.empty()) throw ZeroState("QuditState: the zero vector is not a state");
  }

  /// Builds from (multi-index, amplitude) terms; repeated multi-indices are summed.
  static QuditState from_terms(Dims dims,
                               const std::vector<std::pair<MultiIndex, ExactScalar>>& terms) {
    AmplitudeMap amps;
    for (const auto& [digits, a] : terms) amps[flat_index(digits, dims)] += a;
    return QuditState(std::move(dims), std::move(amps));
  }

  static QuditState from_dense(Dims dims, std::span<const ExactScalar> dense) {
    if (dense.size() != dims.total()) {
      throw InvalidArgument("QuditState::from_dense: vector length does not match dims");
    }
    AmplitudeMap amps;
    for (std::size_t i = 0; i < dense.size(); ++i) {
      if (!dense[i].is_zero()) amps.emplace(i, dense[i]);
    }
    return QuditState(std::move(dims), std::move(amps));
  }

  const Dims& dims() const { return dims_; }
  std::size_t num_sites() const { return dims_.size(); }
  const AmplitudeMap& amplitudes() const { return amplitudes_; }
  std::size_t support_size() const { return amplitudes_.size(); }

  ExactScalar amplitude(std::uint64_t i) const {
    auto it = amplitudes_.find(i);
    return it == amplitudes_.end() ? ExactScalar{} : it->second;
  }
  ExactScalar amplitude(std::span<const int> digits) const {
    return amplitude(flat_index(digits, dims_));
  }

  std::vector<ExactScalar> dense() const {
    std::vector<ExactScalar> out(dims_.total());
    for (const auto& [i, a] : amplitudes_) out[i] = a;
    return out;
  }

  friend bool operator==(const QuditState&, const QuditState&) = default;

 private:
  Dims dims_;
  AmplitudeMap amplitudes_;
};

/// Moves the qudit at site k to position perm[k-1]; amplitudes travel with it.
inline QuditState permute_qudits(const QuditState& state, const SitePermutation& perm) {
  const std::size_t n = state.num_sites();
  validate_site_permutation(perm, n);
  std::vector<int> sizes(n);
  for (std::size_t k = 0; k < n; ++k) sizes[static_cast<std::size_t>(perm[k] - 1)] = state.dims()[k];
  Dims out_dims(std::move(sizes));
  QuditState::AmplitudeMap amps;
  MultiIndex moved(n);
  for (const auto& [i, a] : state.amplitudes()) {
    const MultiIndex digits = multiindex_of(i, state.dims());
    for (std::size_t k = 0; k < n; ++k) moved[static_cast<std::size_t>(perm[k] - 1)] = digits[k];
    amps.emplace(flat_index(moved, out_dims), a);
  }
  return QuditState(std::move(out_dims), std::move(amps));
}

/// Swaps two 1-based sites.
inline SitePermutation transposition(std::size_t n, int a, int b) {
  SitePermutation p(n);
  std::iota(p.begin(), p.end(), 1);
  std::swap(p.at(static_cast<std::size_t>(a - 1)), p.at(static_cast<std::size_t>(b - 1)));
  return p;
}

// Generators. Every term carries amplitude 1 (no 1/sqrt normalization).

inline QuditState gen_ghz(int n, int d) {
  if (n < 2 || d < 2) throw InvalidArgument("gen_ghz: need n >= 2 and d >= 2");
  Dims dims(std::vector<int>(static_cast<std::size_t>(n), d));
  QuditState::AmplitudeMap amps;
  for (int j = 0; j < d; ++j) {
    amps.emplace(flat_index(MultiIndex(static_cast<std::size_t>(n), j), dims), ExactScalar(1));
  }
  return QuditState(std::move(dims), std::move(amps));
}

inline QuditState gen_w(int n) {
  if (n < 2) throw InvalidArgument("gen_w: need n >= 2");
  Dims dims(std::vector<int>(static_cast<std::size_t>(n), 2));
  QuditState::AmplitudeMap amps;
  for (int k = 0; k < n; ++k) {
    MultiIndex digits(static_cast<std::size_t>(n), 0);
    digits[static_cast<std::size_t>(k)] = 1;
    amps.emplace(flat_index(digits, dims), ExactScalar(1));
  }
  return QuditState(std::move(dims), std::move(amps));
}

/// Symmetric state over dims (levels,...,levels) with `excitations[j-1]` sites in
/// level j (j >= 1) and the rest in level 0. At least one site stays in level 0.
inline QuditState gen_dicke(int n, std::span<const int> excitations) {
  const int levels = static_cast<int>(excitations.size()) + 1;
  if (n < 2) throw InvalidArgument("gen_dicke: need n >= 2");
  int excited = 0;
  for (int l : excitations) {
    if (l < 0) throw InvalidArgument("gen_dicke: occupation numbers must be nonnegative");
    excited += l;
  }
  if (excited > n - 1) {
    throw InvalidArgument("gen_dicke: excitation count " + std::to_string(excited) +
                          " exceeds n-1 = " + std::to_string(n - 1));
  }
  Dims dims(std::vector<int>(static_cast<std::size_t>(n), levels));
  MultiIndex digits;
  digits.reserve(static_cast<std::size_t>(n));
  digits.insert(digits.end(), static_cast<std::size_t>(n - excited), 0);
  for (int j = 1; j < levels; ++j) {
    digits.insert(digits.end(), static_cast<std::size_t>(excitations[static_cast<std::size_t>(j - 1)]), j);
  }
  QuditState::AmplitudeMap amps;
  do {
    amps.emplace(flat_index(digits, dims), ExactScalar(1));
  } while (std::next_permutation(digits.begin(), digits.end()));
  return QuditState(std::move(dims), std::move(amps));
}

inline QuditState gen_dicke3(int n, int l1, int l2) {
  const int ex[] = {l1, l2};
  return gen_dicke(n, ex);
}

inline QuditState gen_dicke4(int n, int l1, int l2, int l3) {
  const int ex[] = {l1, l2, l3};
  return gen_dicke(n, ex);
}

}  // namespace slocc
