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

#pragma once

#include <algorithm>
#include <cstdint>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "cafold/rule.hpp"

namespace cafold {

/// A finite window of a bi-infinite row; everything outside is white.
///
/// Cells are bit-packed, cell j at bit j % 64 of word j / 64. `origin` is the
/// window index of spatial position 0, so cell j sits at spatial j - origin.
/// Generations count from 1 (the initial row) in base-rule time.
class Configuration {
 public:
  Configuration() : Configuration(1, 0, 1) {}

  /// All-white window of `size` cells.
  Configuration(std::size_t size, std::int64_t origin, std::uint64_t generation)
      : words_(words_for_bits(size), 0),
        size_(size),
        origin_(origin),
        generation_(generation) {
    if (generation_ < 1) throw std::invalid_argument("generation must be >= 1");
  }

  Configuration(std::vector<std::uint64_t> words, std::size_t size,
                std::int64_t origin, std::uint64_t generation)
      : words_(std::move(words)),
        size_(size),
        origin_(origin),
        generation_(generation) {
    if (generation_ < 1) throw std::invalid_argument("generation must be >= 1");
    if (words_.size() < words_for_bits(size_))
      throw std::invalid_argument("too few words for window size");
    clear_tail();
  }

  static Configuration from_cells(std::span<const Color> cells,
                                  std::int64_t origin,
                                  std::uint64_t generation = 1) {
    Configuration c(cells.size(), origin, generation);
    for (std::size_t j = 0; j < cells.size(); ++j)
      if (cells[j] == Color::black) c.set(j, Color::black);
    return c;
  }

  /// Parses '.' (white) and '#' (black).
  static Configuration from_text(std::string_view text, std::int64_t origin,
                                 std::uint64_t generation = 1) {
    Configuration c(text.size(), origin, generation);
    for (std::size_t j = 0; j < text.size(); ++j) {
      if (text[j] == '#')
        c.set(j, Color::black);
      else if (text[j] != '.')
        throw std::invalid_argument(std::string("unexpected row character '") +
                                    text[j] + "'");
    }
    return c;
  }

  std::size_t size() const noexcept { return size_; }
  std::int64_t origin() const noexcept { return origin_; }
  std::uint64_t generation() const noexcept { return generation_; }
  std::int64_t leftmost() const noexcept { return -origin_; }
  std::int64_t rightmost() const noexcept {
    return static_cast<std::int64_t>(size_) - 1 - origin_;
  }

  Color cell(std::size_t j) const noexcept {
    return static_cast<Color>((words_[j >> 6] >> (j & 63)) & 1u);
  }

  /// Color at spatial index i; white outside the window.
  Color at(std::int64_t i) const noexcept {
    const std::int64_t j = i + origin_;
    if (j < 0 || j >= static_cast<std::int64_t>(size_)) return Color::white;
    return cell(static_cast<std::size_t>(j));
  }

  void set(std::size_t j, Color c) {
    if (j >= size_) throw std::out_of_range("cell index outside window");
    const std::uint64_t m = std::uint64_t{1} << (j & 63);
    if (c == Color::black)
      words_[j >> 6] |= m;
    else
      words_[j >> 6] &= ~m;
  }

  std::span<const std::uint64_t> words() const noexcept {
    return {words_.data(), words_for_bits(size_)};
  }

  std::size_t popcount() const noexcept {
    std::size_t n = 0;
    for (std::uint64_t w : words()) n += static_cast<std::size_t>(__builtin_popcountll(w));
    return n;
  }

  std::string to_text() const {
    std::string s(size_, '.');
    for (std::size_t j = 0; j < size_; ++j)
      if (cell(j) == Color::black) s[j] = '#';
    return s;
  }

  std::vector<Color> cells() const {
    std::vector<Color> out(size_);
    for (std::size_t j = 0; j < size_; ++j) out[j] = cell(j);
    return out;
  }

  /// Spatial span of the black cells; empty for an all-white row.
  std::optional<std::pair<std::int64_t, std::int64_t>> black_extent() const {
    std::optional<std::pair<std::int64_t, std::int64_t>> ext;
    for (std::size_t j = 0; j < size_; ++j) {
      if (cell(j) != Color::black) continue;
      const auto i = static_cast<std::int64_t>(j) - origin_;
      if (!ext)
        ext.emplace(i, i);
      else
        ext->second = i;
    }
    return ext;
  }

  /// Same generation and same colors at every spatial index, regardless of
  /// how much white padding either window carries.
  friend bool operator==(const Configuration& a, const Configuration& b) {
    if (a.generation_ != b.generation_) return false;
    return same_cells(a, b);
  }

  friend bool same_cells(const Configuration& a, const Configuration& b) {
    const std::int64_t lo = std::min(a.leftmost(), b.leftmost());
    const std::int64_t hi = std::max(a.rightmost(), b.rightmost());
    for (std::int64_t i = lo; i <= hi; ++i)
      if (a.at(i) != b.at(i)) return false;
    return true;
  }

 private:
  void clear_tail() {
    if (size_ % 64 != 0)
      words_[size_ / 64] &= (std::uint64_t{1} << (size_ % 64)) - 1;
    for (std::size_t w = words_for_bits(size_); w < words_.size(); ++w)
      words_[w] = 0;
  }

  std::vector<std::uint64_t> words_;
  std::size_t size_;
  std::int64_t origin_;
  std::uint64_t generation_;
};

/// Correspondence between composite and base time for a k-fold rule: composite
/// generation m is base generation k(m-1)+1.
struct GenerationMap {
  std::uint64_t k = 1;
  std::uint64_t composite = 1;
  std::uint64_t base = 1;

  static GenerationMap from_composite(std::uint64_t k, std::uint64_t m) {
    if (k == 0 || m == 0)
      throw std::invalid_argument("fold count and generation must be >= 1");
    return {k, m, k * (m - 1) + 1};
  }

  /// Empty if `n` is not on the composite lattice.
  static std::optional<GenerationMap> from_base(std::uint64_t k,
                                                std::uint64_t n) {
    if (k == 0 || n == 0)
      throw std::invalid_argument("fold count and generation must be >= 1");
    if ((n - 1) % k != 0) return std::nullopt;
    return GenerationMap{k, (n - 1) / k + 1, n};
  }
};

}  // namespace cafold
