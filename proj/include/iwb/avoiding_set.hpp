// Copyright 2026 The Intersective Workbench Authors
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#ifndef IWB_AVOIDING_SET_HPP
#define IWB_AVOIDING_SET_HPP

#include <cstdint>
#include <vector>

#include "json.hpp"

namespace iwb {

/// Subset of [1, X] stored as a bitset; bit n represents the integer n.
class AvoidingSet {
 public:
  AvoidingSet() = default;
  explicit AvoidingSet(std::uint64_t X);
  static AvoidingSet from_members(std::uint64_t X, const std::vector<std::uint64_t>& members);

  std::uint64_t X() const { return X_; }
  std::uint64_t size() const { return size_; }
  double alpha() const { return X_ == 0 ? 0.0 : static_cast<double>(size_) / static_cast<double>(X_); }
  bool contains(std::uint64_t n) const {
    return n >= 1 && n <= X_ && ((words_[n >> 6] >> (n & 63)) & 1U) != 0;
  }
  void insert(std::uint64_t n);
  std::vector<std::uint64_t> members() const;
  const std::vector<std::uint64_t>& words() const { return words_; }

  nlohmann::json to_json() const;
  static AvoidingSet from_json(std::uint64_t X, const nlohmann::json& j);

  friend bool operator==(const AvoidingSet& a, const AvoidingSet& b) {
    return a.X_ == b.X_ && a.words_ == b.words_;
  }

 private:
  std::uint64_t X_ = 0;
  std::uint64_t size_ = 0;
  std::vector<std::uint64_t> words_;
};

}  // namespace iwb

#endif  // IWB_AVOIDING_SET_HPP
