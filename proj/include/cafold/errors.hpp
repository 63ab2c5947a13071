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

#include <cstdint>
#include <stdexcept>
#include <string>

namespace cafold {

/// A table (or plan) needs more memory than the configured budget allows.
class BudgetExceeded : public std::runtime_error {
 public:
  BudgetExceeded(std::uint64_t required_bytes, std::uint64_t budget_bytes)
      : std::runtime_error("table needs " + std::to_string(required_bytes) +
                           " bytes, budget is " + std::to_string(budget_bytes) +
                           " bytes"),
        required_bytes_(required_bytes),
        budget_bytes_(budget_bytes) {}

  std::uint64_t required_bytes() const noexcept { return required_bytes_; }
  std::uint64_t budget_bytes() const noexcept { return budget_bytes_; }

 private:
  std::uint64_t required_bytes_;
  std::uint64_t budget_bytes_;
};

/// The requested base generation is not on the composite time lattice.
class UnreachableGeneration : public std::domain_error {
 public:
  UnreachableGeneration(std::uint64_t requested, std::uint64_t below,
                        std::uint64_t above)
      : std::domain_error("generation " + std::to_string(requested) +
                          " is not reachable; nearest reachable are " +
                          std::to_string(below) + " and " +
                          std::to_string(above)),
        requested_(requested),
        below_(below),
        above_(above) {}

  std::uint64_t requested() const noexcept { return requested_; }
  std::uint64_t below() const noexcept { return below_; }
  std::uint64_t above() const noexcept { return above_; }

 private:
  std::uint64_t requested_;
  std::uint64_t below_;
  std::uint64_t above_;
};

/// The rule maps the all-white neighborhood to black, so a finite window in a
/// white row is not closed under the update.
class NonQuiescentRule : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

}  // namespace cafold
