// Copyright 2026 The cafold Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

/**
 * \file rule.hpp
 * \brief Two-color local rules of arbitrary radius and their Wolfram numbers.
 *
 * A rule of radius r maps a neighborhood of 2r+1 cells to one cell. The
 * neighborhood is read left to right as a binary number (leftmost cell is the
 * most significant bit) and that number indexes the output table. Bit i of the
 * Wolfram rule number is the output for neighborhood i, so Rule 30 is
 * literally the integer 30.
 */

#pragma once

#include <gmpxx.h>

#include <algorithm>
#include <cstdint>
#include <cstdio>
#include <span>
#include <sstream>
#include <stdexcept>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

namespace cafold {

/// Cell color. Only two colors exist; anything else is rejected on conversion.
enum class Color : std::uint8_t { white = 0, black = 1 };

inline Color to_color(int value) {
  if (value != 0 && value != 1)
    throw std::invalid_argument("color must be 0 or 1, got " +
                                std::to_string(value));
  return static_cast<Color>(value);
}

constexpr int bit(Color c) noexcept { return static_cast<int>(c); }

/// Largest radius whose neighborhood index fits a 64-bit word.
inline constexpr std::uint32_t kMaxRadius = 31;

constexpr std::uint32_t neighborhood_size(std::uint32_t radius) noexcept {
  return 2 * radius + 1;
}

constexpr std::uint64_t entry_count(std::uint32_t radius) noexcept {
  return std::uint64_t{1} << neighborhood_size(radius);
}

constexpr std::uint64_t words_for_bits(std::uint64_t bits) noexcept {
  return (bits + 63) / 64;
}

inline void check_radius(std::uint32_t radius) {
  if (radius == 0 || radius > kMaxRadius)
    throw std::out_of_range("radius must be in [1, " +
                            std::to_string(kMaxRadius) + "], got " +
                            std::to_string(radius));
}

class RuleTable {
 public:
  /// All-white table of the given radius.
  explicit RuleTable(std::uint32_t radius)
      : radius_((check_radius(radius), radius)),
        words_(words_for_bits(entry_count(radius)), 0) {}

  RuleTable(std::uint32_t radius, std::vector<std::uint64_t> words)
      : radius_((check_radius(radius), radius)), words_(std::move(words)) {
    if (words_.size() != words_for_bits(entry_count(radius_)))
      throw std::invalid_argument("table for radius " +
                                  std::to_string(radius_) + " needs " +
                                  std::to_string(words_for_bits(
                                      entry_count(radius_))) +
                                  " words, got " +
                                  std::to_string(words_.size()));
    if (entry_count(radius_) < 64)
      words_[0] &= (std::uint64_t{1} << entry_count(radius_)) - 1;
  }

  std::uint32_t radius() const noexcept { return radius_; }
  std::uint32_t width() const noexcept { return neighborhood_size(radius_); }
  std::uint64_t size() const noexcept { return entry_count(radius_); }

  /// Output bit (0 or 1) for neighborhood index `index`.
  std::uint64_t output_bit(std::uint64_t index) const noexcept {
    return (words_[index >> 6] >> (index & 63)) & 1u;
  }
  Color output(std::uint64_t index) const noexcept {
    return static_cast<Color>(output_bit(index));
  }

  std::span<const std::uint64_t> words() const noexcept { return words_; }

  /// Table bytes as stored, ceil(2^(2r+1) / 8).
  std::uint64_t table_bytes() const noexcept { return (size() + 7) / 8; }

  friend bool operator==(const RuleTable&, const RuleTable&) = default;

 private:
  std::uint32_t radius_;
  std::vector<std::uint64_t> words_;
};

/// A rule number together with the radius it is interpreted at.
struct RuleNumber {
  mpz_class digits;
  std::uint32_t radius = 1;
};

inline RuleTable rule_from_number(const RuleNumber& number) {
  check_radius(number.radius);
  if (sgn(number.digits) < 0)
    throw std::out_of_range("rule number must be non-negative");
  const std::uint64_t bits = entry_count(number.radius);
  if (mpz_sizeinbase(number.digits.get_mpz_t(), 2) > bits &&
      sgn(number.digits) != 0)
    throw std::out_of_range("rule number " + number.digits.get_str() +
                            " does not fit radius " +
                            std::to_string(number.radius) + " (" +
                            std::to_string(bits) + " output bits)");
  std::vector<std::uint64_t> words(words_for_bits(bits), 0);
  std::size_t count = 0;
  mpz_export(words.data(), &count, -1, sizeof(std::uint64_t), 0, 0,
             number.digits.get_mpz_t());
  return RuleTable(number.radius, std::move(words));
}

inline RuleTable rule_from_number(std::uint64_t number, std::uint32_t radius) {
  mpz_class digits;
  mpz_import(digits.get_mpz_t(), 1, -1, sizeof(number), 0, 0, &number);
  return rule_from_number(RuleNumber{digits, radius});
}

inline RuleNumber rule_to_number(const RuleTable& table) {
  RuleNumber number;
  number.radius = table.radius();
  const auto words = table.words();
  mpz_import(number.digits.get_mpz_t(), words.size(), -1,
             sizeof(std::uint64_t), 0, 0, words.data());
  return number;
}

/// Decimal rendering. Quadratic-ish in the table size for large radii.
inline std::string to_decimal(const RuleTable& table) {
  return rule_to_number(table).digits.get_str(10);
}

inline std::uint64_t neighborhood_index(std::span<const Color> cells) {
  std::uint64_t index = 0;
  for (Color c : cells) index = (index << 1) | static_cast<std::uint64_t>(c);
  return index;
}

inline Color apply_local(const RuleTable& table,
                         std::span<const Color> neighborhood) {
  if (neighborhood.size() != table.width())
    throw std::invalid_argument("neighborhood has " +
                                std::to_string(neighborhood.size()) +
                                " cells, rule needs " +
                                std::to_string(table.width()));
  return table.output(neighborhood_index(neighborhood));
}

/// x_{i-1} XOR (x_i OR x_{i+1})
constexpr Color rule30_algebraic(Color left, Color center,
                                 Color right) noexcept {
  return static_cast<Color>(bit(left) ^ (bit(center) | bit(right)));
}

/// x_{i-1} + x_i + x_{i+1} mod 2
constexpr Color rule150_algebraic(Color left, Color center,
                                  Color right) noexcept {
  return static_cast<Color>((bit(left) + bit(center) + bit(right)) % 2);
}

/// Rule 150 plus the product term x_i * x_{i+1}, mod 2. Same function as
/// rule30_algebraic, written as a polynomial over GF(2).
constexpr Color rule30_polynomial(Color left, Color center,
                                  Color right) noexcept {
  return static_cast<Color>(
      (bit(left) + bit(center) + bit(right) + bit(center) * bit(right)) % 2);
}

namespace detail {

/// Applies `table` to every full window of a `width`-cell row packed into
/// `cells` (bit 0 = rightmost cell). Returns the `width - 2r` interior cells
/// packed the same way.
inline std::uint64_t apply_row_bits(const RuleTable& table, std::uint64_t cells,
                                    std::uint32_t width) {
  const std::uint32_t w = table.width();
  const std::uint64_t mask = (std::uint64_t{1} << w) - 1;
  std::uint64_t out = 0;
  for (std::uint32_t p = 0; p + w <= width; ++p)
    out |= table.output_bit((cells >> p) & mask) << p;
  return out;
}

}  // namespace detail

/// 16-hex-digit FNV-1a digest of radius and output bits.
inline std::string digest(const RuleTable& table) {
  std::uint64_t h = 0xcbf29ce484222325ull;
  auto mix = [&h](std::uint64_t v) {
    for (int i = 0; i < 8; ++i) {
      h ^= (v >> (8 * i)) & 0xffu;
      h *= 0x100000001b3ull;
    }
  };
  mix(table.radius());
  for (std::uint64_t w : table.words()) mix(w);
  char buf[17];
  std::snprintf(buf, sizeof(buf), "%016llx", static_cast<unsigned long long>(h));
  return buf;
}

/// `r=<radius>;hex=<lowercase hex>`, bytes little-endian by neighborhood index.
inline std::string serialize(const RuleTable& table) {
  static constexpr char kHex[] = "0123456789abcdef";
  std::string out = "r=" + std::to_string(table.radius()) + ";hex=";
  const std::uint64_t bytes = table.table_bytes();
  out.reserve(out.size() + 2 * bytes);
  for (std::uint64_t b = 0; b < bytes; ++b) {
    const auto byte =
        static_cast<unsigned>((table.words()[b / 8] >> (8 * (b % 8))) & 0xffu);
    out.push_back(kHex[byte >> 4]);
    out.push_back(kHex[byte & 0xf]);
  }
  return out;
}

inline RuleTable deserialize(std::string_view line) {
  while (!line.empty() && (line.back() == '\n' || line.back() == '\r' ||
                           line.back() == ' '))
    line.remove_suffix(1);
  const auto bad = [&](const std::string& why) {
    return std::invalid_argument("malformed rule line (" + why + "): " +
                                 std::string(line.substr(0, 64)));
  };
  if (!line.starts_with("r=")) throw bad("missing r=");
  const auto semi = line.find(";hex=");
  if (semi == std::string_view::npos) throw bad("missing ;hex=");
  std::uint32_t radius = 0;
  const auto radius_text = line.substr(2, semi - 2);
  if (radius_text.empty() || radius_text.size() > 3) throw bad("radius");
  for (char c : radius_text) {
    if (c < '0' || c > '9') throw bad("radius");
    radius = radius * 10 + static_cast<std::uint32_t>(c - '0');
  }
  check_radius(radius);
  const auto hex = line.substr(semi + 5);
  const std::uint64_t bytes = (entry_count(radius) + 7) / 8;
  if (hex.size() != 2 * bytes)
    throw bad("expected " + std::to_string(2 * bytes) + " hex digits");
  std::vector<std::uint64_t> words(words_for_bits(entry_count(radius)), 0);
  const auto nibble = [&](char c) -> std::uint64_t {
    if (c >= '0' && c <= '9') return static_cast<std::uint64_t>(c - '0');
    if (c >= 'a' && c <= 'f') return static_cast<std::uint64_t>(c - 'a' + 10);
    throw bad("hex digit");
  };
  for (std::uint64_t b = 0; b < bytes; ++b) {
    const std::uint64_t byte = (nibble(hex[2 * b]) << 4) | nibble(hex[2 * b + 1]);
    words[b / 8] |= byte << (8 * (b % 8));
  }
  return RuleTable(radius, std::move(words));
}

/// Accepts either a serialized rule line or a (possibly huge) decimal number.
inline RuleTable parse_rule(std::string_view text, std::uint32_t radius) {
  if (text.starts_with("r=")) {
    RuleTable table = deserialize(text);
    if (table.radius() != radius)
      throw std::invalid_argument("rule line has radius " +
                                  std::to_string(table.radius()) +
                                  ", expected " + std::to_string(radius));
    return table;
  }
  if (text.empty() ||
      !std::all_of(text.begin(), text.end(),
                   [](char c) { return c >= '0' && c <= '9'; }))
    throw std::invalid_argument("rule must be a decimal number or r=..;hex=..: " +
                                std::string(text.substr(0, 64)));
  return rule_from_number(RuleNumber{mpz_class(std::string(text), 10), radius});
}

}  // namespace cafold
