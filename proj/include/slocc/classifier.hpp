#pragma once

#include <compare>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "slocc/errors.hpp"
#include "slocc/matricize.hpp"
#include "slocc/rank.hpp"
#include "slocc/state.hpp"

namespace slocc {

/// Ranks of the coefficient matrices over the canonical permutation set of one split.
struct RankSignature {
  Dims dims;
  PermutationSet sigmas;
  std::vector<std::size_t> ranks;

  int split() const { return sigmas.split(); }
  friend bool operator==(const RankSignature&, const RankSignature&) = default;
};

/// Canonical rendering of a signature, e.g. `F{4,4,3}@{I,(1,3),(1,4)}`.
class FamilyLabel {
 public:
  FamilyLabel() = default;
  explicit FamilyLabel(std::string text) : text_(std::move(text)) {}
  const std::string& str() const { return text_; }
  friend auto operator<=>(const FamilyLabel&, const FamilyLabel&) = default;

 private:
  std::string text_;
};

inline FamilyLabel family_label(std::span<const std::size_t> ranks, const PermutationSet& sigmas) {
  if (ranks.size() != sigmas.size()) throw InvalidArgument("family_label: rank count does not match permutation set");
  std::string out = "F{";
  for (std::size_t i = 0; i < ranks.size(); ++i) {
    if (i) out += ",";
    out += std::to_string(ranks[i]);
  }
  out += "}@" + sigmas.str();
  return FamilyLabel(std::move(out));
}

inline FamilyLabel family_label(const RankSignature& sig) { return family_label(sig.ranks, sig.sigmas); }

/// Resolves an optional split: nullopt means optimal_split(dims).
inline int resolve_split(const Dims& dims, std::optional<int> l) {
  if (!l) return optimal_split(dims);
  if (*l < 1 || static_cast<std::size_t>(*l) >= dims.size()) {
    throw InvalidArgument("split l=" + std::to_string(*l) + " outside [1," + std::to_string(dims.size() - 1) + "]");
  }
  return *l;
}

inline RankSignature signature(const QuditState& state, std::optional<int> l = std::nullopt) {
  const int split = resolve_split(state.dims(), l);
  RankSignature sig{state.dims(), permutation_set(state.dims(), split), {}};
  sig.ranks.reserve(sig.sigmas.size());
  for (const auto& sigma : sig.sigmas) sig.ranks.push_back(rank_exact(coefficient_matrix(state, split, sigma).matrix).rank);
  return sig;
}

/// Groups states (by position) under equal signatures. All states must share dims.
inline std::map<FamilyLabel, std::vector<std::size_t>> classify(std::span<const QuditState> states,
                                                               std::optional<int> l = std::nullopt) {
  std::map<FamilyLabel, std::vector<std::size_t>> groups;
  if (states.empty()) return groups;
  const Dims& dims = states.front().dims();
  for (std::size_t i = 0; i < states.size(); ++i) {
    if (!(states[i].dims() == dims)) {
      throw InvalidArgument("classify: state " + std::to_string(i) + " has dims (" + states[i].dims().str() +
                            "), expected (" + dims.str() + ")");
    }
  }
  const int split = resolve_split(dims, l);
  for (std::size_t i = 0; i < states.size(); ++i) groups[family_label(signature(states[i], split))].push_back(i);
  return groups;
}

/// True iff the state is a product across all sites, tested through the l = 1
/// signature being all ones.
inline bool fully_separable(const QuditState& state) {
  const RankSignature sig = signature(state, 1);
  for (std::size_t r : sig.ranks)
    if (r != 1) return false;
  return true;
}

/// One row of a Dicke scan.
struct DickeScanRow {
  std::vector<int> occupations;  // (l0, l1, ..., l_{levels-1})
  Rational variance;             // population variance of the occupations
  RankSignature signature;
  FamilyLabel label;
};

inline int dicke_scan_limit(int levels) { return levels == 3 ? 10 : 8; }

inline Rational occupation_variance(std::span<const int> occupations) {
  Rational mean = 0;
  for (int v : occupations) mean += v;
  mean /= static_cast<long long>(occupations.size());
  Rational var = 0;
  for (int v : occupations) var += (Rational(v) - mean) * (Rational(v) - mean);
  return var / static_cast<long long>(occupations.size());
}

/// Every occupation tuple with l1 + ... + l_{levels-1} <= n - 1, in ascending
/// lexicographic order of (l1, l2, ...), classified at l = floor(n/2).
inline std::vector<DickeScanRow> dicke_scan(int levels, int n) {
  if (levels != 3 && levels != 4) throw InvalidArgument("dicke_scan: levels must be 3 or 4");
  if (n < 2) throw InvalidArgument("dicke_scan: need n >= 2");
  if (n > dicke_scan_limit(levels)) {
    throw InvalidArgument("dicke_scan: n=" + std::to_string(n) + " exceeds the supported size for " +
                          std::to_string(levels) + " levels (n <= " + std::to_string(dicke_scan_limit(levels)) +
                          "); the scan is exhaustive over occupations and permutations");
  }
  const int split = n / 2;
  std::vector<DickeScanRow> rows;
  std::vector<int> ex(static_cast<std::size_t>(levels - 1), 0);
  auto emit = [&] {
    int excited = 0;
    for (int e : ex) excited += e;
    std::vector<int> occ{n - excited};
    occ.insert(occ.end(), ex.begin(), ex.end());
    const QuditState state = gen_dicke(n, ex);
    RankSignature sig = signature(state, split);
    FamilyLabel label = family_label(sig);
    rows.push_back({occ, occupation_variance(occ), std::move(sig), std::move(label)});
  };
  // odometer over ex with sum <= n-1
  while (true) {
    emit();
    std::size_t k = ex.size();
    while (k > 0) {
      --k;
      ++ex[k];
      int sum = 0;
      for (int e : ex) sum += e;
      if (sum <= n - 1) break;
      ex[k] = 0;
      if (k == 0) return rows;
    }
  }
}

}  // namespace slocc
