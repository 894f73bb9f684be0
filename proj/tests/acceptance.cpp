// Acceptance gate: one PASS/FAIL line per criterion, exit status 1 if any fail.

#include <algorithm>
#include <array>
#include <chrono>
#include <cstdio>
#include <functional>
#include <iostream>
#include <map>
#include <memory>
#include <random>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "oracles.hpp"
#include "slocc/classifier.hpp"
#include "slocc/io.hpp"
#include "slocc/local_ops.hpp"
#include "slocc/rank.hpp"
#include "slocc/table1.hpp"
#include "slocc/trials.hpp"

#ifndef SLOCC_CLI_PATH
#error "SLOCC_CLI_PATH must point at the slocc executable"
#endif

using namespace slocc;

namespace {

constexpr double kTable1Seconds = 5.0;
constexpr double kTheorem1Seconds = 60.0;
constexpr double kScanSeconds = 300.0;
constexpr std::size_t kTrials = 200;
constexpr std::uint64_t kTrialSeed = 7;
constexpr int kEntryBound = 3;
constexpr int kMaxSites = 5;
constexpr int kMaxDim = 4;
constexpr std::size_t kDensityStates = 50;
constexpr std::size_t kNumericMatrices = 100;
constexpr std::size_t kNumericMaxSide = 12;
constexpr int kNumericEntryBound = 5;

// Pinned D3^9 ranks at sigma_0 = I, l = 4, keyed by (l1, l2, l0).
constexpr std::size_t kRankD333 = 12;
constexpr std::size_t kRankD117 = 4;
constexpr std::size_t kRankD018 = 2;

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point t0) {
  return std::chrono::duration<double>(Clock::now() - t0).count();
}

struct Outcome {
  bool pass = true;
  std::string detail;
};

int failures = 0;

void report(int id, const std::string& name, const std::function<Outcome()>& body) {
  Outcome o;
  try {
    o = body();
  } catch (const std::exception& e) {
    o = {false, std::string("exception: ") + e.what()};
  }
  if (!o.pass) ++failures;
  std::cout << (o.pass ? "PASS" : "FAIL") << " [" << id << "] " << name << ": " << o.detail << std::endl;
}

std::string triple(const std::vector<std::size_t>& r) { return "(" + join_ranks(r, ',') + ")"; }

Outcome table1() {
  const auto t0 = Clock::now();
  std::set<std::string> labels;
  std::size_t matches = 0;
  std::string bad;
  for (const auto& e : table1_suite()) {
    const RankSignature sig = signature(e.state, 2);
    labels.insert(family_label(sig).str());
    const std::vector<std::size_t> want(e.expected_ranks.begin(), e.expected_ranks.end());
    if (sig.ranks == want) {
      ++matches;
    } else {
      bad += " listed" + triple(want) + "->computed" + triple(sig.ranks);
    }
  }
  const double dt = seconds_since(t0);
  const bool ok = matches == 24 && labels.size() == 22 && dt < kTable1Seconds;
  std::ostringstream s;
  s << matches << "/24 rank triples match, " << labels.size() << " distinct labels, " << dt << " s";
  if (!bad.empty()) s << ";" << bad;
  return {ok, s.str()};
}

Outcome ghz() {
  std::size_t checked = 0;
  for (int n = 3; n <= 6; ++n)
    for (int d = 2; d <= 4; ++d) {
      const QuditState g = gen_ghz(n, d);
      for (int l = 1; l < n; ++l)
        for (const auto& sigma : permutation_set(static_cast<std::size_t>(n), l)) {
          const std::size_t r = rank_exact(coefficient_matrix(g, l, sigma).matrix).rank;
          ++checked;
          if (r != static_cast<std::size_t>(d)) {
            return {false, "n=" + std::to_string(n) + " d=" + std::to_string(d) + " l=" + std::to_string(l) +
                               " sigma=" + sigma.str() + " rank=" + std::to_string(r)};
          }
        }
    }
  return {true, std::to_string(checked) + " coefficient matrices, all rank d"};
}

Outcome capacity() {
  const Dims dims{2, 2, 2, 4};
  const std::array<long long, 3> listed{4, 64, 4};
  std::string got;
  bool ok = true;
  for (int l = 1; l <= 3; ++l) {
    const BigInt p = split_capacity(dims, l);
    got += (l > 1 ? "," : "") + p.str();
    ok = ok && p == listed[static_cast<std::size_t>(l - 1)];
  }
  const int best = optimal_split(dims);
  ok = ok && best == 2;
  std::string uniform_bad;
  for (int d = 2; d <= 4; ++d)
    for (int n = 2; n <= 6; ++n) {
      const int l = optimal_split(Dims(std::vector<int>(static_cast<std::size_t>(n), d)));
      if (l != n / 2) uniform_bad += " n=" + std::to_string(n) + ",d=" + std::to_string(d) + "->" + std::to_string(l);
    }
  ok = ok && uniform_bad.empty();
  return {ok, "P(2,2,2,4)=(" + got + ") expected (4,64,4), optimal l=" + std::to_string(best) +
                  (uniform_bad.empty() ? ", uniform dims optimal l=floor(n/2) for n=2..6" : ";" + uniform_bad)};
}

Outcome permutation_sets() {
  const std::string four = permutation_set(4, 2).str();
  bool ok = four == "{I,(1,3),(1,4)}";
  for (int n = 2; n <= 6; ++n) {
    std::string want = "{I";
    for (int k = 2; k <= n; ++k) want += ",(1," + std::to_string(k) + ")";
    want += "}";
    if (permutation_set(static_cast<std::size_t>(n), 1).str() != want) {
      return {false, "n=" + std::to_string(n) + " l=1 gives " + permutation_set(static_cast<std::size_t>(n), 1).str()};
    }
  }
  return {ok, "(4,2) -> " + four + "; (n,1) -> {I,(1,2),...,(1,n)} for n=2..6"};
}

TrialOptions trial_options() {
  TrialOptions opt;
  opt.max_sites = kMaxSites;
  opt.max_dim = kMaxDim;
  opt.entry_bound = kEntryBound;
  return opt;
}

Outcome theorem1() {
  const auto t0 = Clock::now();
  const TrialSummary s = run_trials(run_theorem1_trial, kTrialSeed, kTrials, trial_options());
  const double dt = seconds_since(t0);
  std::size_t matrices = 0;
  for (const auto& r : s.records) matrices += r.ranks.size();
  std::ostringstream d;
  d << s.passed << "/" << kTrials << " trials pass, " << s.failed << " fail, " << matrices
    << " (l, sigma) identities checked, " << dt << " s";
  return {s.failed == 0 && s.passed == kTrials && dt < kTheorem1Seconds, d.str()};
}

Outcome monotone() {
  const TrialSummary s = run_trials(run_monotone_trial, kTrialSeed, kTrials, trial_options());
  std::size_t invertible_checked = 0;
  for (const auto& r : s.records)
    if (r.invertible && r.result == TrialResult::pass) ++invertible_checked;
  std::ostringstream d;
  d << s.passed << " pass, " << s.failed << " fail, " << s.skipped << " skipped (zero output); "
    << invertible_checked << " invertible trials with equal ranks";
  return {s.failed == 0 && s.passed + s.skipped == kTrials && s.passed > 0, d.str()};
}

Outcome density() {
  std::mt19937_64 rng(kTrialSeed);
  std::size_t sites = 0;
  for (std::size_t t = 0; t < kDensityStates; ++t) {
    const Dims dims = random_dims(rng, 4, 3);
    const QuditState s = random_state(dims, rng);
    const int n = static_cast<int>(dims.size());
    const PermutationSet l1 = permutation_set(dims, 1);
    for (int k = 1; k <= n; ++k) {
      const ExactMatrix rho = reduced_density(s, {k});
      if (!(rho == oracle::partial_trace(s, {k}))) return {false, "partial trace mismatch, state " + std::to_string(t)};
      if (!(rho == rho.adjoint())) return {false, "not Hermitian, state " + std::to_string(t)};
      // site k is the row qudit under sigma_{k-1} = (1,k)
      const ExactMatrix m = coefficient_matrix(s, 1, l1[static_cast<std::size_t>(k - 1)]).matrix;
      if (rank_exact(rho).rank != rank_exact(m).rank) {
        return {false, "rank(rho) != rank(M), state " + std::to_string(t) + " site " + std::to_string(k)};
      }
      ++sites;
    }
  }
  return {true, std::to_string(kDensityStates) + " states, " + std::to_string(sites) +
                    " single-site reductions equal the brute-force trace, Hermitian, rank(rho)=rank(M)"};
}

Outcome numeric_agreement() {
  std::mt19937_64 rng(kTrialSeed);
  std::uniform_int_distribution<std::size_t> side(1, kNumericMaxSide);
  std::uniform_int_distribution<int> entry(-kNumericEntryBound, kNumericEntryBound);
  std::bernoulli_distribution make_deficient(0.5);
  std::map<std::size_t, std::size_t> deficit_histogram;
  for (std::size_t t = 0; t < kNumericMatrices; ++t) {
    const std::size_t rows = side(rng), cols = side(rng);
    ExactMatrix m(rows, cols);
    for (std::size_t r = 0; r < rows; ++r)
      for (std::size_t c = 0; c < cols; ++c) m(r, c) = ExactScalar(entry(rng));
    if (make_deficient(rng) && rows > 1) {
      // overwrite some rows with copies or negations of others (entries stay in range)
      std::uniform_int_distribution<std::size_t> pick(0, rows - 1);
      const std::size_t copies = std::uniform_int_distribution<std::size_t>(1, rows - 1)(rng);
      for (std::size_t k = 0; k < copies; ++k) {
        const std::size_t dst = pick(rng), src = pick(rng);
        const ExactScalar sign((rng() & 1) ? 1 : -1);
        for (std::size_t c = 0; c < cols; ++c) m(dst, c) = m(src, c) * sign;
      }
    }
    const std::size_t exact = rank_exact(m).rank;
    const std::size_t numeric = rank_numeric(m).rank;
    if (exact != numeric) {
      return {false, "instance " + std::to_string(t) + " (" + std::to_string(rows) + "x" + std::to_string(cols) +
                         "): exact " + std::to_string(exact) + " numeric " + std::to_string(numeric)};
    }
    ++deficit_histogram[std::min(rows, cols) - exact];
  }
  std::string hist;
  for (const auto& [k, v] : deficit_histogram) hist += " " + std::to_string(k) + ":" + std::to_string(v);
  return {true, std::to_string(kNumericMatrices) + " matrices agree; rank deficit histogram" + hist};
}

Outcome dicke() {
  const int n = 9, l = 4;
  const auto t0 = Clock::now();
  // every composition (l0, l1, l2) of 9, including l0 = 0 arrangements
  std::map<std::vector<int>, std::set<std::string>> labels_by_multiset;
  std::map<std::vector<int>, std::size_t> rank0;
  for (int a = 0; a <= n; ++a)
    for (int b = 0; a + b <= n; ++b) {
      const std::vector<int> occ{n - a - b, a, b};
      const QuditState s = oracle::dicke(occ);
      if (occ[0] >= 1 && !(s == gen_dicke3(n, a, b))) return {false, "generator differs from enumeration"};
      const RankSignature sig = signature(s, l);
      auto key = occ;
      std::sort(key.begin(), key.end());
      labels_by_multiset[key].insert(family_label(sig).str());
      rank0[occ] = sig.ranks[0];
    }
  for (const auto& [k, labels] : labels_by_multiset)
    if (labels.size() != 1) return {false, "arrangements of " + triple({k.begin(), k.end()}) + " split into families"};

  // (l1, l2, l0) = (3,3,3), (1,1,7), (0,1,8) with the dual oracle
  struct Probe {
    std::vector<int> occ;  // (l0, l1, l2)
    std::size_t pinned;
  };
  const std::vector<Probe> probes{{{3, 3, 3}, kRankD333}, {{7, 1, 1}, kRankD117}, {{8, 0, 1}, kRankD018}};
  std::ostringstream d;
  for (const auto& p : probes) {
    const ExactMatrix m = coefficient_matrix(oracle::dicke(p.occ), l, QuditPermutation::identity()).matrix;
    const std::size_t mod = oracle::modular_rank(m), svd = oracle::svd_rank(m);
    const std::size_t lib = rank0.at(p.occ);
    d << "a(" << p.occ[1] << "," << p.occ[2] << "," << p.occ[0] << ")=" << lib << " ";
    if (lib != p.pinned || mod != p.pinned || svd != p.pinned)
      return {false, d.str() + "disagrees: modular " + std::to_string(mod) + " svd " + std::to_string(svd)};
  }
  if (!(kRankD333 > kRankD117 && kRankD333 > kRankD018)) return {false, "ordering"};
  const double t_arr = seconds_since(t0);

  const auto t1 = Clock::now();
  std::ostringstream fig1, fig2;
  write_scan_csv(fig1, 3, dicke_scan(3, 9));
  const double t_fig1 = seconds_since(t1);
  const auto t2 = Clock::now();
  write_scan_csv(fig2, 4, dicke_scan(4, 8));
  const double t_fig2 = seconds_since(t2);
  const bool fast = t_fig1 < kScanSeconds && t_fig2 < kScanSeconds;
  d << "(modular and SVD agree); " << labels_by_multiset.size() << " multisets, arrangements share labels ("
    << t_arr << " s); scans n=9/levels 3 " << t_fig1 << " s, n=8/levels 4 " << t_fig2 << " s";
  return {fast, d.str()};
}

struct Capture {
  int status;
  std::string out;
};

Capture shell(const std::string& cmd) {
  Capture c{0, {}};
  std::unique_ptr<FILE, int (*)(FILE*)> pipe(popen((cmd + " 2>&1").c_str(), "r"), pclose);
  if (!pipe) throw Error("popen failed");
  std::array<char, 4096> buf;
  std::size_t got;
  while ((got = fread(buf.data(), 1, buf.size(), pipe.get())) > 0) c.out.append(buf.data(), got);
  c.status = pclose(pipe.release());
  return c;
}

Outcome determinism() {
  const std::string cli = SLOCC_CLI_PATH;
  const std::vector<std::string> commands{
      cli + " verify theorem1 --trials 40 --seed 7",
      cli + " verify monotone --trials 40 --seed 7",
      cli + " verify theorem1 --dims 2,2,2,4 --trials 20 --seed 11",
      cli + " scan --levels 3 --n 6",
      cli + " table1",
  };
  for (const auto& cmd : commands) {
    const Capture a = shell(cmd), b = shell(cmd);
    if (a.out != b.out || a.status != b.status) return {false, "outputs differ for: " + cmd};
    if (a.out.empty()) return {false, "no output from: " + cmd};
  }
  const Capture x = shell(cli + " verify monotone --trials 10 --seed 1");
  const Capture y = shell(cli + " verify monotone --trials 10 --seed 2");
  if (x.out == y.out) return {false, "different seeds gave identical reports"};
  return {true, std::to_string(commands.size()) + " commands run twice in fresh processes, byte-identical"};
}

}  // namespace

int main() {
  report(1, "2x2x2x4 classification table", table1);
  report(2, "GHZ ranks", ghz);
  report(3, "Split capacity", capacity);
  report(4, "Permutation sets", permutation_sets);
  report(5, "Local-operator matrix identity", theorem1);
  report(6, "Rank monotonicity, weak form", monotone);
  report(7, "Reduced density consistency", density);
  report(8, "Exact/numeric agreement", numeric_agreement);
  report(9, "Dicke family structure", dicke);
  report(10, "Determinism", determinism);
  std::cout << (failures ? "FAILED " : "ALL PASSED ") << failures << " of 10 criteria failed" << std::endl;
  return failures ? 1 : 0;
}
