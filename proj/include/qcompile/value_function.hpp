// Copyright 2026 The qcompile Authors
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

#include <cstddef>
#include <limits>
#include <span>
#include <vector>

#include "qcompile/linalg.hpp"

namespace qcompile {

/// Value reported for actions the function knows nothing about; search
/// treats it as the lowest possible priority.
inline constexpr double kUnknownValue = -std::numeric_limits<double>::infinity();

/// Anything that maps a state to one action value per action: the trained
/// network or an exact table. Implementations must be safe to call
/// concurrently from several searches.
class ActionValueFunction {
 public:
  virtual ~ActionValueFunction() = default;

  virtual std::size_t num_actions() const = 0;

  /// Writes Q(s, a) for every action a into out (size num_actions()).
  virtual void q_values(const Unitary& s, std::span<double> out) const = 0;

  std::vector<double> q_values(const Unitary& s) const {
    std::vector<double> out(num_actions());
    q_values(s, out);
    return out;
  }
};

}  // namespace qcompile
