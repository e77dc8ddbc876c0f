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


#ifndef SLSLAB_RNG_HPP_
#define SLSLAB_RNG_HPP_

#include <cstdint>
#include <random>

#include "slslab/linalg.hpp"

namespace slslab {

using Rng = std::mt19937_64;

// Counter-based sub-seed: splitmix64 finalizer applied to (master, stream, counter).
std::uint64_t SubSeed(std::uint64_t master, std::uint64_t stream,
                      std::uint64_t counter);

// Streams used with SubSeed so that data, pilot noise and direction
// sampling never share random numbers.
inline constexpr std::uint64_t kStreamData = 1;
inline constexpr std::uint64_t kStreamPilot = 2;
inline constexpr std::uint64_t kStreamDirections = 3;

Vector StandardNormal(Index n, Rng& rng);

// Uniform direction z on the D-sphere {|Dz| = 1}, D diagonal with entries d.
Vector SampleDSphere(const Vector& d, Rng& rng);

// Point uniformly distributed in the D-ball of radius r.
Vector SampleDBall(const Vector& d, double r, Rng& rng);

}  // namespace slslab

#endif  // SLSLAB_RNG_HPP_
