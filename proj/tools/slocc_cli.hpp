#pragma once

#include <CLI11.hpp>

#include <fstream>
#include <functional>
#include <iostream>
#include <optional>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "slocc/classifier.hpp"
#include "slocc/io.hpp"
#include "slocc/local_ops.hpp"
#include "slocc/matricize.hpp"
#include "slocc/rank.hpp"
#include "slocc/state.hpp"
#include "slocc/table1.hpp"
#include "slocc/trials.hpp"

namespace slocc::cli {

inline constexpr int kExitOk = 0;
inline constexpr int kExitVerificationFailed = 1;
inline constexpr int kExitUsage = 2;

struct RunConfig {
  std::uint64_t seed = 0;
  std::size_t trials = 200;
  std::string out_path;
  std::string format = "csv";
  double safety_factor = NumericTolerance{}.safety_factor;
};

inline std::vector<int> parse_dims_list(const std::string& text) {
  std::vector<int> out;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) {
    try {
      std::size_t used = 0;
      out.push_back(std::stoi(item, &used));
      if (used != item.size()) throw std::invalid_argument("trailing");
    } catch (const std::exception&) {
      throw InvalidArgument("--dims: '" + item + "' is not an integer");
    }
  }
  return out;
}

inline std::optional<int> parse_split(const std::string& text) {
  if (text == "auto") return std::nullopt;
  try {
    std::size_t used = 0;
    const int l = std::stoi(text, &used);
    if (used == text.size()) return l;
  } catch (const std::exception&) {
  }
  throw InvalidArgument("--split: expected an integer or 'auto', got '" + text + "'");
}

/// Runs one command line. Reports go to `out` (or --out), diagnostics to `err`.
inline int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Rank-of-coefficient-matrix SLOCC classifier for n-qudit pure states", "slocc"};
  app.require_subcommand(1, 1);
  RunConfig cfg;

  // rank
  auto* rank_cmd = app.add_subcommand("rank", "Rank of one coefficient matrix");
  std::string rank_state, rank_split = "auto", rank_sigma = "I";
  bool rank_numeric_flag = false;
  rank_cmd->add_option("--state", rank_state, "State JSON file")->required();
  rank_cmd->add_option("--split", rank_split, "Row qudit count l, or 'auto'");
  rank_cmd->add_option("--sigma", rank_sigma, "Permutation, e.g. I or (1,3)(2,4)");
  rank_cmd->add_flag("--numeric", rank_numeric_flag, "Use the floating-point SVD path");
  rank_cmd->add_option("--safety", cfg.safety_factor, "Numeric threshold safety factor")->check(CLI::PositiveNumber);

  // signature
  auto* sig_cmd = app.add_subcommand("signature", "Rank signature of one state");
  std::string sig_state, sig_split = "auto";
  sig_cmd->add_option("--state", sig_state, "State JSON file")->required();
  sig_cmd->add_option("--split", sig_split, "Row qudit count l, or 'auto'");
  sig_cmd->add_option("--format", cfg.format, "csv or json")->check(CLI::IsMember({"csv", "json"}));
  sig_cmd->add_option("--out", cfg.out_path, "Output file");

  // classify
  auto* cls_cmd = app.add_subcommand("classify", "Group states by rank signature");
  std::vector<std::string> cls_states;
  std::string cls_split = "auto";
  cls_cmd->add_option("--state", cls_states, "State JSON files (repeatable)")->required();
  cls_cmd->add_option("--split", cls_split, "Row qudit count l, or 'auto'");
  cls_cmd->add_option("--format", cfg.format, "csv or json")->check(CLI::IsMember({"csv", "json"}));
  cls_cmd->add_option("--out", cfg.out_path, "Output file");

  // gen
  auto* gen_cmd = app.add_subcommand("gen", "Emit a canonical state as JSON");
  std::string gen_kind;
  int gen_n = 0, gen_d = 2, gen_l1 = 0, gen_l2 = 0, gen_l3 = 0;
  gen_cmd->add_option("kind", gen_kind, "ghz, w, dicke3 or dicke4")
      ->required()
      ->check(CLI::IsMember({"ghz", "w", "dicke3", "dicke4"}));
  gen_cmd->add_option("--n", gen_n, "Number of qudits")->required();
  gen_cmd->add_option("--d", gen_d, "Local dimension (ghz)");
  gen_cmd->add_option("--l1", gen_l1, "Sites in level 1 (dicke)");
  gen_cmd->add_option("--l2", gen_l2, "Sites in level 2 (dicke)");
  gen_cmd->add_option("--l3", gen_l3, "Sites in level 3 (dicke4)");
  gen_cmd->add_option("--out", cfg.out_path, "Output file");

  // matrix
  auto* mat_cmd = app.add_subcommand("matrix", "Dump a coefficient matrix as CSV");
  std::string mat_state, mat_sigma = "I";
  int mat_split = 0;
  mat_cmd->add_option("--state", mat_state, "State JSON file")->required();
  mat_cmd->add_option("--split", mat_split, "Row qudit count l")->required();
  mat_cmd->add_option("--sigma", mat_sigma, "Permutation, e.g. I or (1,3)");
  mat_cmd->add_option("--out", cfg.out_path, "Output file");

  // verify
  auto* ver_cmd = app.add_subcommand("verify", "Randomized rank-invariance trials");
  std::string ver_kind, ver_dims;
  TrialOptions trial_opt;
  ver_cmd->add_option("kind", ver_kind, "theorem1 or monotone")
      ->required()
      ->check(CLI::IsMember({"theorem1", "monotone"}));
  ver_cmd->add_option("--dims", ver_dims, "Fixed dims, e.g. 2,2,2,4 (random when omitted)");
  ver_cmd->add_option("--trials", cfg.trials, "Number of trials")->check(CLI::PositiveNumber);
  ver_cmd->add_option("--seed", cfg.seed, "Run seed")->required();
  ver_cmd->add_option("--entry-bound", trial_opt.entry_bound, "Operator entry bound")->check(CLI::PositiveNumber);
  ver_cmd->add_option("--max-sites", trial_opt.max_sites, "Largest n for random dims")->check(CLI::Range(2, 6));
  ver_cmd->add_option("--max-dim", trial_opt.max_dim, "Largest d for random dims")->check(CLI::Range(2, 5));
  ver_cmd->add_option("--out", cfg.out_path, "Trial report file (JSON lines)");

  // table1
  auto* t1_cmd = app.add_subcommand("table1", "Reproduce the 2x2x2x4 classification table");

  // scan
  auto* scan_cmd = app.add_subcommand("scan", "Dicke occupation scan (plot-ready)");
  int scan_levels = 3, scan_n = 0;
  scan_cmd->add_option("--levels", scan_levels, "3 or 4")->check(CLI::IsMember({3, 4}));
  scan_cmd->add_option("--n", scan_n, "Number of qudits")->required();
  scan_cmd->add_option("--format", cfg.format, "csv or json")->check(CLI::IsMember({"csv", "json"}));
  scan_cmd->add_option("--out", cfg.out_path, "Output file");

  // capacity
  auto* cap_cmd = app.add_subcommand("capacity", "Split capacity P(l) for every l");
  std::string cap_dims;
  cap_cmd->add_option("--dims", cap_dims, "Dims, e.g. 2,2,2,4")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kExitOk : kExitUsage;
  }

  std::ofstream file;
  auto sink = [&]() -> std::ostream& {
    if (cfg.out_path.empty()) return out;
    file.open(cfg.out_path);
    if (!file) throw InvalidArgument("cannot open output file " + cfg.out_path);
    return file;
  };

  try {
    if (*rank_cmd) {
      const QuditState state = parse_state_file(rank_state);
      const int l = resolve_split(state.dims(), parse_split(rank_split));
      const QuditPermutation sigma = QuditPermutation::parse(rank_sigma);
      const CoefficientMatrix m = coefficient_matrix(state, l, sigma);
      const RankResult r = rank_numeric_flag ? rank_numeric(m.matrix, NumericTolerance{cfg.safety_factor})
                                             : rank_exact(m.matrix);
      out << "rank=" << r.rank << " method=" << (rank_numeric_flag ? "numeric" : "exact") << " rows=" << m.rows()
          << " cols=" << m.cols() << " split=" << l << " sigma=" << sigma.str() << "\n";
      return kExitOk;
    }
    if (*sig_cmd || *cls_cmd) {
      const bool single = sig_cmd->parsed();
      const std::vector<std::string> paths = single ? std::vector<std::string>{sig_state} : cls_states;
      std::vector<QuditState> states;
      for (const auto& p : paths) states.push_back(parse_state_file(p));
      for (std::size_t i = 1; i < states.size(); ++i) {
        if (!(states[i].dims() == states[0].dims())) {
          throw InvalidArgument("classify: " + paths[i] + " has dims (" + states[i].dims().str() + "), expected (" +
                                states[0].dims().str() + ")");
        }
      }
      const int l = resolve_split(states[0].dims(), parse_split(single ? sig_split : cls_split));
      std::vector<NamedSignature> rows;
      for (std::size_t i = 0; i < states.size(); ++i) rows.push_back({paths[i], signature(states[i], l)});
      std::ostream& os = sink();
      if (cfg.format == "json") {
        write_classify_json(os, rows);
      } else {
        write_classify_csv(os, rows);
      }
      if (!single) {
        std::set<std::string> labels;
        for (const auto& r : rows) labels.insert(family_label(r.signature).str());
        err << states.size() << " states in " << labels.size() << " families\n";
      }
      return kExitOk;
    }
    if (*gen_cmd) {
      std::optional<QuditState> state;
      if (gen_kind == "ghz") state = gen_ghz(gen_n, gen_d);
      if (gen_kind == "w") state = gen_w(gen_n);
      if (gen_kind == "dicke3") state = gen_dicke3(gen_n, gen_l1, gen_l2);
      if (gen_kind == "dicke4") state = gen_dicke4(gen_n, gen_l1, gen_l2, gen_l3);
      sink() << serialize_state(*state);
      return kExitOk;
    }
    if (*mat_cmd) {
      const QuditState state = parse_state_file(mat_state);
      write_matrix_csv(sink(), coefficient_matrix(state, mat_split, QuditPermutation::parse(mat_sigma)));
      return kExitOk;
    }
    if (*ver_cmd) {
      if (!ver_dims.empty()) trial_opt.dims = Dims(parse_dims_list(ver_dims));
      const TrialSummary summary = ver_kind == "theorem1"
                                       ? run_trials(run_theorem1_trial, cfg.seed, cfg.trials, trial_opt)
                                       : run_trials(run_monotone_trial, cfg.seed, cfg.trials, trial_opt);
      write_trials_jsonl(sink(), summary);
      const std::size_t done = summary.passed + summary.failed;
      err << ver_kind << ": " << summary.passed << "/" << done << " pass, " << summary.failed << " fail, "
          << summary.skipped << " skipped (zero output), " << summary.invertible << " invertible operator sets\n";
      return summary.failed == 0 ? kExitOk : kExitVerificationFailed;
    }
    if (*t1_cmd) {
      const auto suite = table1_suite();
      std::set<std::string> labels;
      std::size_t matches = 0;
      out << "# schema: listed_family,computed_ranks,match,representative\n";
      out << "# dims=2,2,2,4 split=2 sigma_list=" << sigma_list(table1_sigmas()) << "\n";
      for (const auto& e : suite) {
        const RankSignature sig = signature(e.state, 2);
        const bool ok = family_label(sig) == expected_label(e);
        matches += ok ? 1 : 0;
        labels.insert(family_label(sig).str());
        out << "F{" << e.expected_ranks[0] << "," << e.expected_ranks[1] << "," << e.expected_ranks[2] << "}  ("
            << join_ranks(sig.ranks, ',') << ")  " << (ok ? "ok      " : "MISMATCH") << "  " << e.kets << "\n";
      }
      out << "# " << suite.size() << " states, " << labels.size() << " distinct computed families, " << matches << "/"
          << suite.size() << " match the listed family\n";
      return matches == suite.size() ? kExitOk : kExitVerificationFailed;
    }
    if (*scan_cmd) {
      const auto rows = dicke_scan(scan_levels, scan_n);
      std::ostream& os = sink();
      if (cfg.format == "json") {
        write_scan_json(os, rows);
      } else {
        write_scan_csv(os, scan_levels, rows);
      }
      return kExitOk;
    }
    if (*cap_cmd) {
      const Dims dims(parse_dims_list(cap_dims));
      for (int l = 1; static_cast<std::size_t>(l) < dims.size(); ++l) {
        out << "P(" << l << ")=" << split_capacity(dims, l).str() << "\n";
      }
      out << "optimal l=" << optimal_split(dims) << "\n";
      return kExitOk;
    }
  } catch (const Error& e) {
    err << "error: " << e.what() << "\n";
    return kExitUsage;
  }
  return kExitUsage;
}

inline int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  std::vector<const char*> argv{"slocc"};
  for (const auto& a : args) argv.push_back(a.c_str());
  return run(static_cast<int>(argv.size()), argv.data(), out, err);
}

}  // namespace slocc::cli
