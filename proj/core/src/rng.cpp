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


#include "slslab/rng.hpp"

namespace slslab {

namespace {

std::uint64_t SplitMix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

}  // namespace

std::uint64_t SubSeed(std::uint64_t master, std::uint64_t stream,
                      std::uint64_t counter) {
  return SplitMix64(SplitMix64(SplitMix64(master) ^ stream) ^ counter);
}

Vector StandardNormal(Index n, Rng& rng) {
  std::normal_distribution<double> normal(0.0, 1.0);
  Vector out(n);
  for (Index k = 0; k < n; ++k) out(k) = normal(rng);
  return out;
}

Vector SampleDSphere(const Vector& d, Rng& rng) {
  Vector g = StandardNormal(d.size(), rng);
  g /= g.norm();
  return g.cwiseQuotient(d);
}

Vector SampleDBall(const Vector& d, double r, Rng& rng) {
  std::uniform_real_distribution<double> unif(0.0, 1.0);
  Vector z = SampleDSphere(d, rng);
  const double radius =
      r * std::pow(unif(rng), 1.0 / static_cast<double>(d.size()));
  return radius * z;
}

}  // namespace slslab
