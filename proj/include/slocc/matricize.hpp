#pragma once

#include <algorithm>
#include <cctype>
#include <compare>
#include <cstdint>
#include <numeric>
#include <span>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "slocc/errors.hpp"
#include "slocc/exact_matrix.hpp"
#include "slocc/scalar.hpp"
#include "slocc/state.hpp"

namespace slocc {

/// Swap of a row-side site with a column-side site (1-based labels).
struct Transposition {
  int row = 0;
  int col = 0;
  friend auto operator<=>(const Transposition&, const Transposition&) = default;
};

/// Product of disjoint row<->column transpositions (r_1,c_1)...(r_k,c_k) with
/// r ascending on the row side and c ascending on the column side. The empty
/// product is the identity.
class QuditPermutation {
 public:
  QuditPermutation() = default;
  explicit QuditPermutation(std::vector<Transposition> swaps) : swaps_(std::move(swaps)) {}

  static QuditPermutation identity() { return {}; }

  const std::vector<Transposition>& swaps() const { return swaps_; }
  std::size_t size() const { return swaps_.size(); }
  bool is_identity() const { return swaps_.empty(); }

  /// Throws unless 1 <= r_1 < ... < r_k <= l < c_1 < ... < c_k <= n.
  void validate(std::size_t n, int l) const {
    if (l < 1 || static_cast<std::size_t>(l) >= n) {
      throw InvalidArgument("split l=" + std::to_string(l) + " outside [1," + std::to_string(n - 1) + "]");
    }
    for (std::size_t i = 0; i < swaps_.size(); ++i) {
      const auto [r, c] = swaps_[i];
      const bool ok = r >= 1 && r <= l && c > l && static_cast<std::size_t>(c) <= n &&
                      (i == 0 || (r > swaps_[i - 1].row && c > swaps_[i - 1].col));
      if (!ok) throw InvalidArgument("permutation " + str() + " is not valid for n=" + std::to_string(n) +
                                     ", l=" + std::to_string(l));
    }
  }

  /// Site label found at each position after the swaps (0-based positions).
  std::vector<int> site_order(std::size_t n) const {
    std::vector<int> order(n);
    std::iota(order.begin(), order.end(), 1);
    for (const auto& [r, c] : swaps_) std::swap(order.at(static_cast<std::size_t>(r - 1)), order.at(static_cast<std::size_t>(c - 1)));
    return order;
  }

  /// Same permutation in the form accepted by permute_qudits. Disjoint
  /// transpositions are involutions, so this equals site_order.
  SitePermutation as_site_permutation(std::size_t n) const { return site_order(n); }

  std::string str() const {
    if (swaps_.empty()) return "I";
    std::string out;
    for (const auto& [r, c] : swaps_) out += "(" + std::to_string(r) + "," + std::to_string(c) + ")";
    return out;
  }

  /// Accepts "I" or a concatenation like "(1,3)(2,4)"; whitespace ignored.
  static QuditPermutation parse(std::string_view text) {
    std::string s;
    for (char ch : text)
      if (!std::isspace(static_cast<unsigned char>(ch))) s += ch;
    if (s == "I" || s.empty()) return {};
    std::vector<Transposition> swaps;
    std::size_t pos = 0;
    auto read_int = [&](std::size_t& p) {
      std::size_t start = p;
      while (p < s.size() && std::isdigit(static_cast<unsigned char>(s[p]))) ++p;
      if (start == p) throw ParseError("permutation '" + std::string(text) + "': expected integer");
      return std::stoi(s.substr(start, p - start));
    };
    while (pos < s.size()) {
      if (s[pos] != '(') throw ParseError("permutation '" + std::string(text) + "': expected '('");
      ++pos;
      const int r = read_int(pos);
      if (pos >= s.size() || s[pos] != ',') throw ParseError("permutation '" + std::string(text) + "': expected ','");
      ++pos;
      const int c = read_int(pos);
      if (pos >= s.size() || s[pos] != ')') throw ParseError("permutation '" + std::string(text) + "': expected ')'");
      ++pos;
      swaps.push_back({r, c});
    }
    return QuditPermutation(std::move(swaps));
  }

  friend bool operator==(const QuditPermutation&, const QuditPermutation&) = default;

 private:
  std::vector<Transposition> swaps_;
};

/// The canonical permutations for a split: identity first, then ascending
/// number of transpositions, then lexicographic on rows, then on columns.
class PermutationSet {
 public:
  PermutationSet(std::size_t n, int l, std::vector<QuditPermutation> perms)
      : n_(n), l_(l), perms_(std::move(perms)) {}

  std::size_t num_sites() const { return n_; }
  int split() const { return l_; }
  std::size_t size() const { return perms_.size(); }
  const QuditPermutation& operator[](std::size_t i) const { return perms_[i]; }
  auto begin() const { return perms_.begin(); }
  auto end() const { return perms_.end(); }

  std::string str() const {
    std::string out = "{";
    for (std::size_t i = 0; i < perms_.size(); ++i) {
      if (i) out += ",";
      out += perms_[i].str();
    }
    return out + "}";
  }

  friend bool operator==(const PermutationSet&, const PermutationSet&) = default;

 private:
  std::size_t n_;
  int l_;
  std::vector<QuditPermutation> perms_;
};

namespace detail {

/// All k-subsets of pool in lexicographic order.
inline std::vector<std::vector<int>> combinations(const std::vector<int>& pool, std::size_t k) {
  std::vector<std::vector<int>> out;
  if (k > pool.size()) return out;
  std::vector<std::size_t> idx(k);
  std::iota(idx.begin(), idx.end(), std::size_t{0});
  while (true) {
    std::vector<int> pick(k);
    for (std::size_t i = 0; i < k; ++i) pick[i] = pool[idx[i]];
    out.push_back(std::move(pick));
    std::size_t i = k;
    while (i > 0 && idx[i - 1] == pool.size() - k + i - 1) --i;
    if (i == 0) break;
    ++idx[i - 1];
    for (std::size_t j = i; j < k; ++j) idx[j] = idx[j - 1] + 1;
  }
  return out;
}

}  // namespace detail

/// For l = 1: sigma_k = (1,k+1), k = 0..n-1, with sigma_0 = I.
/// For l >= 2: rows drawn from {1,...,l+(n mod 2)-1}, columns from {l+1,...,n},
/// the i-th smallest row paired with the i-th smallest column, and
/// k <= min(l-(n mod 2), |row pool|, |column pool|).
inline PermutationSet permutation_set(std::size_t n, int l) {
  if (n < 2) throw InvalidArgument("permutation_set: need n >= 2");
  if (l < 1 || static_cast<std::size_t>(l) >= n) {
    throw InvalidArgument("permutation_set: split l=" + std::to_string(l) + " outside [1," +
                          std::to_string(n - 1) + "]");
  }
  std::vector<QuditPermutation> perms;
  perms.push_back(QuditPermutation::identity());
  const int ni = static_cast<int>(n);
  if (l == 1) {
    for (int k = 1; k < ni; ++k) perms.emplace_back(std::vector<Transposition>{{1, k + 1}});
    return {n, l, std::move(perms)};
  }
  const int parity = ni % 2;
  std::vector<int> row_pool, col_pool;
  for (int r = 1; r <= l + parity - 1; ++r) row_pool.push_back(r);
  for (int c = l + 1; c <= ni; ++c) col_pool.push_back(c);
  const std::size_t kmax = std::min({static_cast<std::size_t>(l - parity), row_pool.size(), col_pool.size()});
  for (std::size_t k = 1; k <= kmax; ++k) {
    const auto row_sets = detail::combinations(row_pool, k);
    const auto col_sets = detail::combinations(col_pool, k);
    for (const auto& rows : row_sets)
      for (const auto& cols : col_sets) {
        std::vector<Transposition> swaps(k);
        for (std::size_t i = 0; i < k; ++i) swaps[i] = {rows[i], cols[i]};
        perms.emplace_back(std::move(swaps));
      }
  }
  return {n, l, std::move(perms)};
}

inline PermutationSet permutation_set(const Dims& dims, int l) { return permutation_set(dims.size(), l); }

/// Matricized state with its provenance.
struct CoefficientMatrix {
  ExactMatrix matrix;
  int split = 0;
  QuditPermutation sigma;
  std::vector<int> row_dims;
  std::vector<int> col_dims;

  std::size_t rows() const { return matrix.rows(); }
  std::size_t cols() const { return matrix.cols(); }
};

namespace detail {

struct Layout {
  std::vector<int> order;     // site label at each position
  std::vector<int> row_dims;  // dims of positions [0, l)
  std::vector<int> col_dims;  // dims of positions [l, n)
  std::uint64_t rows = 1;
  std::uint64_t cols = 1;
};

inline Layout layout_for(const Dims& dims, int l, const QuditPermutation& sigma) {
  sigma.validate(dims.size(), l);
  Layout out;
  out.order = sigma.site_order(dims.size());
  for (std::size_t p = 0; p < dims.size(); ++p) {
    const int d = dims.site(out.order[p]);
    if (p < static_cast<std::size_t>(l)) {
      out.row_dims.push_back(d);
      out.rows *= static_cast<std::uint64_t>(d);
    } else {
      out.col_dims.push_back(d);
      out.cols *= static_cast<std::uint64_t>(d);
    }
  }
  return out;
}

/// (row, column) of the flat index i under a layout.
inline std::pair<std::uint64_t, std::uint64_t> cell_of(const MultiIndex& digits, const Layout& lay) {
  std::uint64_t row = 0, col = 0;
  const std::size_t l = lay.row_dims.size();
  for (std::size_t p = 0; p < lay.order.size(); ++p) {
    const int s = digits[static_cast<std::size_t>(lay.order[p] - 1)];
    if (p < l) {
      row = row * static_cast<std::uint64_t>(lay.row_dims[p]) + static_cast<std::uint64_t>(s);
    } else {
      col = col * static_cast<std::uint64_t>(lay.col_dims[p - l]) + static_cast<std::uint64_t>(s);
    }
  }
  return {row, col};
}

/// Matricizes a dense amplitude vector, which may be zero.
inline CoefficientMatrix matricize_dense(const Dims& dims, std::span<const ExactScalar> amps, int l,
                                         const QuditPermutation& sigma) {
  if (amps.size() != dims.total()) throw InvalidArgument("matricize: amplitude vector length mismatch");
  const Layout lay = layout_for(dims, l, sigma);
  CoefficientMatrix out{ExactMatrix(lay.rows, lay.cols), l, sigma, lay.row_dims, lay.col_dims};
  for (std::uint64_t i = 0; i < amps.size(); ++i) {
    if (amps[i].is_zero()) continue;
    const auto [r, c] = cell_of(multiindex_of(i, dims), lay);
    out.matrix(r, c) = amps[i];
  }
  return out;
}

}  // namespace detail

/// Coefficient matrix of the state after applying sigma: the first l permuted
/// sites index rows, the rest index columns, both in lexicographic order.
inline CoefficientMatrix coefficient_matrix(const QuditState& state, int l, const QuditPermutation& sigma) {
  const detail::Layout lay = detail::layout_for(state.dims(), l, sigma);
  CoefficientMatrix out{ExactMatrix(lay.rows, lay.cols), l, sigma, lay.row_dims, lay.col_dims};
  for (const auto& [i, a] : state.amplitudes()) {
    const auto [r, c] = detail::cell_of(multiindex_of(i, state.dims()), lay);
    out.matrix(r, c) = a;
  }
  return out;
}

/// Product over the canonical permutation set of min(row size, column size).
inline BigInt split_capacity(const Dims& dims, int l) {
  BigInt product = 1;
  for (const auto& sigma : permutation_set(dims, l)) {
    const detail::Layout lay = detail::layout_for(dims, l, sigma);
    product *= std::min(lay.rows, lay.cols);
  }
  return product;
}

/// argmax_l split_capacity(dims, l); ties go to the smallest l.
inline int optimal_split(const Dims& dims) {
  int best = 1;
  BigInt best_value = split_capacity(dims, 1);
  for (int l = 2; static_cast<std::size_t>(l) < dims.size(); ++l) {
    BigInt v = split_capacity(dims, l);
    if (v > best_value) {
      best_value = std::move(v);
      best = l;
    }
  }
  return best;
}

/// Unnormalized reduced density matrix M M^dagger, where the state is permuted
/// so `row_sites` (1-based, in the given order) come first and the remaining
/// sites follow in ascending order.
inline ExactMatrix reduced_density(const QuditState& state, std::span<const int> row_sites) {
  const std::size_t n = state.num_sites();
  if (row_sites.empty() || row_sites.size() >= n) {
    throw InvalidArgument("reduced_density: subset must be nonempty and proper");
  }
  SitePermutation perm(n, 0);
  int next = 1;
  for (int site : row_sites) {
    if (site < 1 || static_cast<std::size_t>(site) > n || perm[static_cast<std::size_t>(site - 1)] != 0) {
      throw InvalidArgument("reduced_density: invalid or repeated site " + std::to_string(site));
    }
    perm[static_cast<std::size_t>(site - 1)] = next++;
  }
  for (auto& p : perm)
    if (p == 0) p = next++;
  const QuditState moved = permute_qudits(state, perm);
  const ExactMatrix m =
      coefficient_matrix(moved, static_cast<int>(row_sites.size()), QuditPermutation::identity()).matrix;
  return m * m.adjoint();
}

inline ExactMatrix reduced_density(const QuditState& state, std::initializer_list<int> row_sites) {
  return reduced_density(state, std::span<const int>(row_sites.begin(), row_sites.size()));
}

}  // namespace slocc
