// Copyright 2026 The Transit Anon Authors
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

#ifndef TRANSIT_ANON_RNG_H_
#define TRANSIT_ANON_RNG_H_

#include <cstddef>
#include <cstdint>
#include <numeric>
#include <random>
#include <utility>
#include <vector>

namespace transit_anon {

// mt19937_64 output is fixed by the standard; the distributions in <random>
// are not. Everything that feeds a release draws through these helpers so
// the same seed gives the same release on every standard library.
class SeededRng {
 public:
  explicit SeededRng(uint64_t seed) : engine_(seed) {}

  // Uniform on [0, bound), bound > 0. Rejection sampling, no modulo bias.
  uint64_t Below(uint64_t bound) {
    const uint64_t limit = UINT64_MAX - UINT64_MAX % bound;
    uint64_t x;
    do {
      x = engine_();
    } while (x >= limit);
    return x % bound;
  }

  // Uniform on [0, 1) with 53 random bits.
  double Unit() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }

  uint64_t Next() { return engine_(); }

 private:
  std::mt19937_64 engine_;
};

// The first `take` entries of a uniformly random permutation of 0..n-1
// (partial Fisher-Yates). take <= n.
inline std::vector<size_t> SampleIndices(size_t n, size_t take,
                                         SeededRng& rng) {
  std::vector<size_t> pool(n);
  std::iota(pool.begin(), pool.end(), size_t{0});
  for (size_t i = 0; i < take; ++i) {
    const size_t j = i + static_cast<size_t>(rng.Below(n - i));
    std::swap(pool[i], pool[j]);
  }
  pool.resize(take);
  return pool;
}

}  // namespace transit_anon

#endif  // TRANSIT_ANON_RNG_H_
