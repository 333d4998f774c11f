// Copyright 2026 The OAMNet Authors
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

#ifndef OAMNET_RNG_HPP
#define OAMNET_RNG_HPP

#include <cstdint>
#include <random>

namespace oamnet {

// Seeded random stream. All sampling in the library goes through the
// helpers below instead of std distributions, so that a fixed seed
// produces bit-identical output on every platform and standard library.
class Rng {
  public:
    explicit Rng(uint64_t seed) : engine_(seed) {}

    uint64_t next_u64() { return engine_(); }

    // Uniform double in [0, 1), 53 bits of entropy.
    double uniform() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }

    // Uniform double in [lo, hi).
    double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }

    // Uniform integer in [0, n).
    uint64_t uniform_int(uint64_t n) { return engine_() % n; }

    bool coin() { return (engine_() & 1u) != 0; }

  private:
    std::mt19937_64 engine_;
};

// Deterministically derives an independent stream seed from a base seed
// and a sequence of tags (SplitMix64 finalizer per mixing step).
inline uint64_t derive_seed(uint64_t base, std::initializer_list<uint64_t> tags) {
    uint64_t z = base;
    auto mix = [&z](uint64_t v) {
        z += 0x9e3779b97f4a7c15ull + v;
        z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ull;
        z = (z ^ (z >> 27)) * 0x94d049bb133111ebull;
        z = z ^ (z >> 31);
    };
    for (uint64_t t : tags) {
        mix(t);
    }
    return z;
}

}  // namespace oamnet

#endif
