// Copyright 2026 The slslab Authors
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


#ifndef SLSLAB_ERRORS_HPP_
#define SLSLAB_ERRORS_HPP_

#include <stdexcept>
#include <string>

namespace slslab {

class SlsError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Malformed input: dimension mismatch, bad CSV, invalid parameter values.
class InputError : public SlsError {
 public:
  using SlsError::SlsError;
};

// Comparison design unusable, e.g. disconnected graph or isolated player.
class DesignError : public SlsError {
 public:
  using SlsError::SlsError;
};

class ConcavityError : public SlsError {
 public:
  using SlsError::SlsError;
};

// Matrix singular beyond the gauge direction.
class RankError : public SlsError {
 public:
  using SlsError::SlsError;
};

class InapplicableError : public SlsError {
 public:
  using SlsError::SlsError;
};

}  // namespace slslab

#endif  // SLSLAB_ERRORS_HPP_
