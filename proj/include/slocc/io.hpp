#pragma once

#include <nlohmann/json.hpp>

#include <cctype>
#include <cstdint>
#include <fstream>
#include <iomanip>
#include <map>
#include <ostream>
#include <set>
#include <sstream>
#include <string>
#include <string_view>
#include <vector>

#include "slocc/classifier.hpp"
#include "slocc/errors.hpp"
#include "slocc/matricize.hpp"
#include "slocc/scalar.hpp"
#include "slocc/state.hpp"
#include "slocc/trials.hpp"

namespace slocc {

using json = nlohmann::json;

/// Parses "p/q" or "p" (optional leading sign, q > 0) into a reduced rational.
inline Rational parse_rational(std::string_view text) {
  auto bad = [&](const std::string& why) {
    return ParseError("malformed rational \"" + std::string(text) + "\": " + why);
  };
  auto digits_ok = [](std::string_view s, bool allow_sign) {
    std::size_t i = 0;
    if (allow_sign && !s.empty() && (s[0] == '-' || s[0] == '+')) i = 1;
    if (i == s.size()) return false;
    for (; i < s.size(); ++i)
      if (!std::isdigit(static_cast<unsigned char>(s[i]))) return false;
    return true;
  };
  const std::size_t slash = text.find('/');
  const std::string_view num = text.substr(0, slash);
  if (!digits_ok(num, true)) throw bad("numerator is not an integer");
  BigInt p(std::string(num[0] == '+' ? num.substr(1) : num));
  if (slash == std::string_view::npos) return Rational(p);
  const std::string_view den = text.substr(slash + 1);
  if (!digits_ok(den, false)) throw bad("denominator is not a positive integer");
  BigInt q{std::string(den)};
  if (q.is_zero()) throw bad("zero denominator");
  return Rational(p, q);
}

namespace detail {

/// 1-based starting line of each element of the top-level array under `key`.
inline std::vector<std::size_t> array_element_lines(std::string_view text, std::string_view key) {
  std::vector<std::size_t> lines;
  std::size_t depth = 0, line = 1;
  bool in_string = false, escape = false;
  std::string current;
  std::string last_string;
  int array_depth = -1;  // depth of the target array once found
  bool expect_value = false;
  bool pending_key = false;
  for (std::size_t i = 0; i < text.size(); ++i) {
    const char ch = text[i];
    if (ch == '\n') ++line;
    if (in_string) {
      if (escape) {
        escape = false;
      } else if (ch == '\\') {
        escape = true;
      } else if (ch == '"') {
        in_string = false;
        last_string = current;
      } else {
        current += ch;
      }
      continue;
    }
    if (array_depth >= 0 && static_cast<int>(depth) == array_depth && expect_value &&
        !std::isspace(static_cast<unsigned char>(ch)) && ch != ',' && ch != ']') {
      lines.push_back(line);
      expect_value = false;
    }
    switch (ch) {
      case '"':
        in_string = true;
        current.clear();
        break;
      case ':':
        pending_key = depth == 1 && last_string == key;
        break;
      case '{':
        ++depth;
        break;
      case '[':
        ++depth;
        if (pending_key && array_depth < 0) {
          array_depth = static_cast<int>(depth);
          expect_value = true;
        }
        break;
      case '}':
      case ']':
        if (array_depth >= 0 && static_cast<int>(depth) == array_depth && ch == ']') return lines;
        --depth;
        break;
      case ',':
        if (array_depth >= 0 && static_cast<int>(depth) == array_depth) expect_value = true;
        break;
      default:
        break;
    }
    if (ch != ':' && !std::isspace(static_cast<unsigned char>(ch)) && ch != '[') pending_key = false;
  }
  return lines;
}

inline Rational rational_field(const json& v, const std::string& where) {
  if (v.is_string()) return parse_rational(v.get<std::string>());
  if (v.is_number_integer()) return Rational(v.get<long long>());
  throw ParseError(where + ": rational must be a string \"p/q\" or an integer");
}

}  // namespace detail

/// Parses the state JSON schema:
///   {"dims": [d1,...], "amplitudes": [{"index": [s1,...], "re": "p/q", "im": "p/q"}, ...]}
/// `im` defaults to 0. Unknown fields, duplicate indices, out-of-range digits
/// and the zero vector are rejected.
inline QuditState parse_state_text(std::string_view text, const std::string& source = "<input>") {
  json doc;
  try {
    doc = json::parse(text);
  } catch (const json::parse_error& e) {
    throw ParseError(source + ": invalid JSON: " + e.what());
  }
  if (!doc.is_object()) throw ParseError(source + ": top level must be an object");
  for (const auto& [k, v] : doc.items()) {
    if (k != "dims" && k != "amplitudes") throw ParseError(source + ": unknown field \"" + k + "\"");
  }
  if (!doc.contains("dims") || !doc["dims"].is_array()) throw ParseError(source + ": missing array \"dims\"");
  if (!doc.contains("amplitudes") || !doc["amplitudes"].is_array()) {
    throw ParseError(source + ": missing array \"amplitudes\"");
  }
  std::vector<int> sizes;
  for (const auto& d : doc["dims"]) {
    if (!d.is_number_integer()) throw ParseError(source + ": dims entries must be integers");
    sizes.push_back(d.get<int>());
  }
  Dims dims = [&] {
    try {
      return Dims(sizes);
    } catch (const InvalidArgument& e) {
      throw ParseError(source + ": " + e.what());
    }
  }();

  QuditState::AmplitudeMap amps;
  const auto& list = doc["amplitudes"];
  const std::vector<std::size_t> lines = detail::array_element_lines(text, "amplitudes");
  for (std::size_t n = 0; n < list.size(); ++n) {
    const std::size_t line = n < lines.size() ? lines[n] : 0;
    const std::string where =
        source + ": amplitudes[" + std::to_string(n) + "]" + (line ? " (line " + std::to_string(line) + ")" : "");
    const json& entry = list[n];
    if (!entry.is_object()) throw ParseError(where + ": entry must be an object");
    for (const auto& [k, v] : entry.items()) {
      if (k != "index" && k != "re" && k != "im") throw ParseError(where + ": unknown field \"" + k + "\"");
    }
    if (!entry.contains("index") || !entry["index"].is_array()) throw ParseError(where + ": missing array \"index\"");
    if (!entry.contains("re")) throw ParseError(where + ": missing field \"re\"");
    MultiIndex digits;
    for (const auto& s : entry["index"]) {
      if (!s.is_number_integer()) throw ParseError(where + ": index entries must be integers");
      digits.push_back(s.get<int>());
    }
    std::uint64_t flat = 0;
    try {
      flat = flat_index(digits, dims);
    } catch (const InvalidIndex& e) {
      throw ParseError(where + ": out-of-range index: " + e.what());
    }
    Rational re, im;
    try {
      re = detail::rational_field(entry["re"], where);
      im = entry.contains("im") ? detail::rational_field(entry["im"], where) : Rational(0);
    } catch (const ParseError& e) {
      throw ParseError(std::string(e.what()).find(where) == 0 ? e.what() : where + ": " + e.what());
    }
    if (amps.count(flat)) {
      std::string idx = "[";
      for (std::size_t k = 0; k < digits.size(); ++k) idx += (k ? "," : "") + std::to_string(digits[k]);
      throw ParseError(where + ": duplicate index " + idx + "]");
    }
    amps.emplace(flat, ExactScalar(std::move(re), std::move(im)));
  }
  try {
    return QuditState(std::move(dims), std::move(amps));
  } catch (const ZeroState&) {
    throw ParseError(source + ": zero state (no nonzero amplitude)");
  }
}

inline QuditState parse_state_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ParseError(path + ": cannot open file");
  std::stringstream buf;
  buf << in.rdbuf();
  return parse_state_text(buf.str(), path);
}

inline nlohmann::ordered_json state_to_json(const QuditState& state) {
  nlohmann::ordered_json out;
  out["dims"] = std::vector<int>(state.dims().sizes().begin(), state.dims().sizes().end());
  out["amplitudes"] = nlohmann::ordered_json::array();
  for (const auto& [i, a] : state.amplitudes()) {
    out["amplitudes"].push_back(
        {{"index", multiindex_of(i, state.dims())}, {"re", to_string(a.re())}, {"im", to_string(a.im())}});
  }
  return out;
}

/// One amplitude per line, sorted by flat index.
inline std::string serialize_state(const QuditState& state) {
  const auto doc = state_to_json(state);
  std::string out = "{\n  \"dims\": " + doc["dims"].dump() + ",\n  \"amplitudes\": [";
  const auto& amps = doc["amplitudes"];
  for (std::size_t k = 0; k < amps.size(); ++k) out += (k ? ",\n    " : "\n    ") + amps[k].dump();
  return out + "\n  ]\n}\n";
}

// ---------------------------------------------------------------------------
// CSV / JSON-lines reports. Every artifact starts with a `# schema:` comment.

inline std::string csv_field(const std::string& s) {
  if (s.find_first_of(",\"\n") == std::string::npos) return s;
  std::string out = "\"";
  for (char ch : s) {
    if (ch == '"') out += '"';
    out += ch;
  }
  return out + "\"";
}

inline std::string join_ranks(const std::vector<std::size_t>& ranks, char sep = ';') {
  std::string out;
  for (std::size_t i = 0; i < ranks.size(); ++i) {
    if (i) out += sep;
    out += std::to_string(ranks[i]);
  }
  return out;
}

inline std::string sigma_list(const PermutationSet& sigmas) {
  std::string out;
  for (std::size_t i = 0; i < sigmas.size(); ++i) {
    if (i) out += ";";
    out += sigmas[i].str();
  }
  return out;
}

inline void write_matrix_csv(std::ostream& os, const CoefficientMatrix& m) {
  os << "# schema: row-major entries a+bi; rows=" << m.rows() << " cols=" << m.cols() << " split=" << m.split << " sigma=" << m.sigma.str() << "\n";
  for (std::size_t r = 0; r < m.rows(); ++r) {
    for (std::size_t c = 0; c < m.cols(); ++c) {
      if (c) os << ",";
      os << m.matrix(r, c).str();
    }
    os << "\n";
  }
}

struct NamedSignature {
  std::string state_id;
  RankSignature signature;
};

inline void write_classify_csv(std::ostream& os, const std::vector<NamedSignature>& rows) {
  os << "# schema: state_id,l,sigma_list,ranks,family_label\n";
  os << "state_id,l,sigma_list,ranks,family_label\n";
  for (const auto& [id, sig] : rows) {
    os << csv_field(id) << "," << sig.split() << "," << csv_field(sigma_list(sig.sigmas)) << ","
       << join_ranks(sig.ranks) << "," << csv_field(family_label(sig).str()) << "\n";
  }
}

inline void write_classify_json(std::ostream& os, const std::vector<NamedSignature>& rows) {
  os << "# schema: {state_id, l, sigma_list[], ranks[], family_label}\n";
  for (const auto& [id, sig] : rows) {
    json sigmas = json::array();
    for (const auto& s : sig.sigmas) sigmas.push_back(s.str());
    json line{{"state_id", id}, {"l", sig.split()}, {"sigma_list", sigmas}, {"ranks", sig.ranks},
              {"family_label", family_label(sig).str()}};
    os << line.dump() << "\n";
  }
}

/// Variance printed with six decimals; the exact value is a rational with a
/// denominator dividing levels^2.
inline std::string format_variance(const Rational& v) {
  std::ostringstream s;
  s << std::fixed << std::setprecision(6) << v.convert_to<double>();
  return s.str();
}

inline void write_scan_csv(std::ostream& os, int levels, const std::vector<DickeScanRow>& rows) {
  std::string header;
  for (int j = 0; j < levels; ++j) header += "l" + std::to_string(j) + ",";
  header += "variance";
  const std::size_t nsig = rows.empty() ? 0 : rows.front().signature.ranks.size();
  for (std::size_t k = 0; k < nsig; ++k) header += ",rank_sigma" + std::to_string(k);
  header += ",family_label";
  os << "# schema: " << header << "\n";
  if (!rows.empty()) {
    os << "# split=" << rows.front().signature.split() << " sigma_list=" << sigma_list(rows.front().signature.sigmas)
       << "\n";
  }
  os << header << "\n";
  for (const auto& row : rows) {
    for (int v : row.occupations) os << v << ",";
    os << format_variance(row.variance);
    for (std::size_t r : row.signature.ranks) os << "," << r;
    os << "," << csv_field(row.label.str()) << "\n";
  }
}

inline void write_scan_json(std::ostream& os, const std::vector<DickeScanRow>& rows) {
  os << "# schema: {occupations[], variance, variance_exact, split, ranks[], family_label}\n";
  for (const auto& row : rows) {
    json line{{"occupations", row.occupations},
              {"variance", format_variance(row.variance)},
              {"variance_exact", to_string(row.variance)},
              {"split", row.signature.split()},
              {"ranks", row.signature.ranks},
              {"family_label", row.label.str()}};
    os << line.dump() << "\n";
  }
}

inline json trial_to_json(const TrialRecord& rec) {
  json ranks = json::array();
  for (const auto& rc : rec.ranks) {
    ranks.push_back({{"l", rc.split}, {"sigma", rc.sigma.str()}, {"before", rc.before}, {"after", rc.after}});
  }
  return {{"seed", rec.seed},
          {"dims", std::vector<int>(rec.dims.sizes().begin(), rec.dims.sizes().end())},
          {"result", to_string(rec.result)},
          {"invertible", rec.invertible},
          {"ranks", std::move(ranks)}};
}

inline void write_trials_jsonl(std::ostream& os, const TrialSummary& summary) {
  os << "# schema: {seed, dims[], result, invertible, ranks[{l, sigma, before, after}]}\n";
  for (const auto& rec : summary.records) os << trial_to_json(rec).dump() << "\n";
}

}  // namespace slocc
