#pragma once

#include <array>
#include <cstdint>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "slocc/classifier.hpp"
#include "slocc/state.hpp"

namespace slocc {

/// A representative state of the 2x2x2x4 classification with the family it is
/// listed under. All amplitudes are 1.
struct Table1Entry {
  std::array<std::size_t, 3> expected_ranks;
  std::string kets;  // e.g. "|0000>+|1111>"
  QuditState state;
};

namespace detail {

struct Table1Row {
  std::array<std::size_t, 3> ranks;
  std::string_view kets;
};

// Transcribed verbatim, in listing order, from the published 2x2x2x4 table.
inline constexpr std::array<Table1Row, 24> kTable1Rows{{
    {{4, 4, 4}, "|0000>+|0010>+|0101>+|0111>+|1002>+|1012>+|1103>+|1113>"},
    {{4, 4, 3}, "|0000>+|1010>+|1001>+|0102>+|1113>"},
    {{4, 3, 4}, "|0000>+|0110>+|1100>+|1002>+|1113>"},
    {{3, 4, 4}, "|0000>+|0110>+|1100>+|0012>+|1113>"},
    {{4, 3, 3}, "|0000>+|0111>+|1012>+|1113>"},
    {{3, 4, 3}, "|0000>+|1101>+|1012>+|1113>"},
    {{3, 3, 4}, "|0000>+|0111>+|1102>+|1113>"},
    {{4, 4, 2}, "|0000>+|1010>+|0102>+|1113>"},
    {{4, 2, 4}, "|0000>+|0110>+|1002>+|1113>"},
    {{2, 4, 4}, "|0000>+|1100>+|0012>+|1113>"},
    {{3, 3, 3}, "|0000>+|1010>+|1001>+|1113>"},
    {{3, 3, 2}, "|0000>+|1010>+|1112>"},
    {{3, 2, 3}, "|0000>+|1001>+|1112>"},
    {{2, 3, 3}, "|0000>+|1100>+|1112>"},
    {{2, 2, 2}, "|1010>+|1100>+|1001>"},
    {{2, 2, 2}, "|0001>+|0010>+|0100>+|1000>"},
    {{2, 2, 2}, "|0000>+|1111>"},
    {{4, 4, 1}, "|0000>+|0011>+|1100>+|1111>"},
    {{4, 1, 4}, "|0000>+|1001>+|0110>+|1111>"},
    {{1, 4, 4}, "|0000>+|1010>+|0101>+|1111>"},
    {{2, 2, 1}, "|1100>+|1001>"},
    {{2, 1, 2}, "|1100>+|1010>"},
    {{1, 2, 2}, "|1010>+|1001>"},
    {{1, 1, 1}, "|0000>"},
}};

}  // namespace detail

inline const Dims& table1_dims() {
  static const Dims dims{2, 2, 2, 4};
  return dims;
}

/// Parses a sum of single-digit kets such as "|0102>+|1113>" (unit amplitudes).
inline QuditState parse_ket_sum(std::string_view kets, const Dims& dims) {
  std::vector<std::pair<MultiIndex, ExactScalar>> terms;
  std::size_t pos = 0;
  while (pos < kets.size()) {
    if (kets[pos] == '+' || kets[pos] == ' ') {
      ++pos;
      continue;
    }
    if (kets[pos] != '|') throw ParseError("ket sum: expected '|' at offset " + std::to_string(pos));
    const std::size_t close = kets.find('>', pos);
    if (close == std::string_view::npos) throw ParseError("ket sum: unterminated ket");
    MultiIndex digits;
    for (std::size_t i = pos + 1; i < close; ++i) {
      if (kets[i] < '0' || kets[i] > '9') throw ParseError("ket sum: non-digit in ket");
      digits.push_back(kets[i] - '0');
    }
    for (const auto& [seen, a] : terms)
      if (seen == digits) throw ParseError("ket sum: repeated ket " + std::string(kets.substr(pos, close - pos + 1)));
    terms.emplace_back(std::move(digits), ExactScalar(1));
    pos = close + 1;
  }
  return QuditState::from_terms(dims, terms);
}

inline std::vector<Table1Entry> table1_suite() {
  std::vector<Table1Entry> out;
  out.reserve(detail::kTable1Rows.size());
  for (const auto& row : detail::kTable1Rows) {
    out.push_back({row.ranks, std::string(row.kets), parse_ket_sum(row.kets, table1_dims())});
  }
  return out;
}

inline const PermutationSet& table1_sigmas() {
  static const PermutationSet sigmas = permutation_set(table1_dims(), 2);
  return sigmas;
}

inline FamilyLabel expected_label(const Table1Entry& entry) {
  return family_label(entry.expected_ranks, table1_sigmas());
}

/// FNV-1a 64 over "r1,r2,r3:kets\n" for every row; pins the transcription.
inline std::uint64_t table1_checksum() {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  auto feed = [&](std::string_view s) {
    for (unsigned char ch : s) {
      h ^= ch;
      h *= 0x100000001b3ULL;
    }
  };
  for (const auto& row : detail::kTable1Rows) {
    feed(std::to_string(row.ranks[0]) + "," + std::to_string(row.ranks[1]) + "," + std::to_string(row.ranks[2]) + ":");
    feed(row.kets);
    feed("\n");
  }
  return h;
}

}  // namespace slocc
