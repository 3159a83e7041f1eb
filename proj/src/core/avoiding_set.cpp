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

#include "iwb/avoiding_set.hpp"

#include <bit>

#include "iwb/errors.hpp"

namespace iwb {

AvoidingSet::AvoidingSet(std::uint64_t X) : X_(X), words_((X >> 6) + 1, 0) {}

AvoidingSet AvoidingSet::from_members(std::uint64_t X, const std::vector<std::uint64_t>& members) {
  AvoidingSet s(X);
  for (std::uint64_t n : members) s.insert(n);
  return s;
}

void AvoidingSet::insert(std::uint64_t n) {
  if (n < 1 || n > X_) fail(ErrorCode::kDomain, "AvoidingSet: member " + std::to_string(n) + " outside [1, X]");
  std::uint64_t& w = words_[n >> 6];
  const std::uint64_t bit = std::uint64_t{1} << (n & 63);
  if ((w & bit) == 0) {
    w |= bit;
    ++size_;
  }
}

std::vector<std::uint64_t> AvoidingSet::members() const {
  std::vector<std::uint64_t> out;
  out.reserve(size_);
  for (std::size_t i = 0; i < words_.size(); ++i) {
    std::uint64_t w = words_[i];
    while (w != 0) {
      out.push_back(i * 64 + static_cast<std::uint64_t>(std::countr_zero(w)));
      w &= w - 1;
    }
  }
  return out;
}

nlohmann::json AvoidingSet::to_json() const { return members(); }

AvoidingSet AvoidingSet::from_json(std::uint64_t X, const nlohmann::json& j) {
  if (!j.is_array()) fail(ErrorCode::kConfig, "set must be a JSON array of integers");
  AvoidingSet s(X);
  for (const auto& v : j) {
    if (!v.is_number_integer() || v.get<std::int64_t>() < 1) fail(ErrorCode::kConfig, "set member must be a positive integer");
    s.insert(v.get<std::uint64_t>());
  }
  return s;
}

}  // namespace iwb
