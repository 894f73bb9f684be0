#pragma once

#include <cstdint>
#include <optional>
#include <random>
#include <string>
#include <vector>

#include "slocc/local_ops.hpp"
#include "slocc/matricize.hpp"
#include "slocc/rank.hpp"
#include "slocc/state.hpp"

namespace slocc {

enum class TrialResult { pass, fail, skip };

inline const char* to_string(TrialResult r) {
  switch (r) {
    case TrialResult::pass: return "pass";
    case TrialResult::fail: return "fail";
    case TrialResult::skip: return "skip";
  }
  return "?";
}

struct TrialRecord {
  std::uint64_t seed = 0;
  Dims dims;
  TrialResult result = TrialResult::pass;
  bool invertible = true;
  std::vector<RankComparison> ranks;
};

/// Independent per-trial seed derived from a run seed (splitmix64 finalizer).
inline std::uint64_t trial_seed(std::uint64_t run_seed, std::uint64_t trial) {
  std::uint64_t z = run_seed + (trial + 1) * 0x9e3779b97f4a7c15ULL;
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

struct TrialOptions {
  std::optional<Dims> dims;  // random dims when empty
  int max_sites = 5;
  int max_dim = 4;
  int entry_bound = kDefaultEntryBound;
};

/// Random state, random invertible local operators: the matrix identity must
/// hold at every (l, sigma) and every rank must be unchanged.
inline TrialRecord run_theorem1_trial(std::uint64_t seed, const TrialOptions& opt = {}) {
  std::mt19937_64 rng(seed);
  TrialRecord rec;
  rec.seed = seed;
  rec.dims = opt.dims ? *opt.dims : random_dims(rng, opt.max_sites, opt.max_dim);
  const QuditState state = random_state(rec.dims, rng, opt.entry_bound);
  const LocalOperatorSet ops = random_ilo_set(rec.dims, rng, opt.entry_bound);
  rec.invertible = ops.invertible();
  const auto transformed = detail::apply_local_dense(rec.dims, state.dense(), ops);
  const QuditState after = QuditState::from_dense(rec.dims, transformed);
  const std::size_t n = rec.dims.size();
  for (int l = 1; static_cast<std::size_t>(l) < n; ++l) {
    for (const auto& sigma : permutation_set(n, l)) {
      if (!detail::theorem1_identity(state, transformed, ops, l, sigma)) rec.result = TrialResult::fail;
      RankComparison rc{l, sigma, rank_exact(coefficient_matrix(state, l, sigma).matrix).rank,
                        rank_exact(coefficient_matrix(after, l, sigma).matrix).rank};
      if (rc.before != rc.after) rec.result = TrialResult::fail;
      rec.ranks.push_back(std::move(rc));
    }
  }
  return rec;
}

/// Random state, possibly singular local operators: no rank may increase, and
/// when every factor happens to be invertible all ranks must be equal.
inline TrialRecord run_monotone_trial(std::uint64_t seed, const TrialOptions& opt = {}) {
  std::mt19937_64 rng(seed);
  TrialRecord rec;
  rec.seed = seed;
  rec.dims = opt.dims ? *opt.dims : random_dims(rng, opt.max_sites, opt.max_dim);
  const QuditState state = random_state(rec.dims, rng, opt.entry_bound);
  std::bernoulli_distribution all_invertible(0.25);
  std::bernoulli_distribution singular_site(0.5);
  std::vector<ExactMatrix> factors;
  if (all_invertible(rng)) {
    for (int d : rec.dims.sizes()) factors.push_back(random_ilo(d, rng, opt.entry_bound));
  } else {
    for (int d : rec.dims.sizes()) {
      const bool force = singular_site(rng);
      factors.push_back(random_local_possibly_singular(d, rng, opt.entry_bound, force));
    }
  }
  const LocalOperatorSet ops(rec.dims, std::move(factors));
  rec.invertible = ops.invertible();
  MonotoneCheck check = check_monotone_nonincrease(state, ops);
  rec.ranks = std::move(check.ranks);
  switch (check.status) {
    case MonotoneCheck::Status::skipped: rec.result = TrialResult::skip; break;
    case MonotoneCheck::Status::violated: rec.result = TrialResult::fail; break;
    case MonotoneCheck::Status::holds:
      rec.result = TrialResult::pass;
      if (rec.invertible) {
        for (const auto& rc : rec.ranks)
          if (rc.before != rc.after) rec.result = TrialResult::fail;
      }
      break;
  }
  return rec;
}

struct TrialSummary {
  std::size_t passed = 0;
  std::size_t failed = 0;
  std::size_t skipped = 0;
  std::size_t invertible = 0;
  std::vector<TrialRecord> records;
};

template <class TrialFn>
TrialSummary run_trials(TrialFn&& fn, std::uint64_t run_seed, std::size_t trials, const TrialOptions& opt = {}) {
  TrialSummary s;
  for (std::size_t i = 0; i < trials; ++i) {
    TrialRecord rec = fn(trial_seed(run_seed, i), opt);
    switch (rec.result) {
      case TrialResult::pass: ++s.passed; break;
      case TrialResult::fail: ++s.failed; break;
      case TrialResult::skip: ++s.skipped; break;
    }
    if (rec.invertible) ++s.invertible;
    s.records.push_back(std::move(rec));
  }
  return s;
}

}  // namespace slocc
