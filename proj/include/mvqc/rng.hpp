// Copyright 2026 The mvqc Authors
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

namespace mvqc {

// SplitMix64 (Steele, Lea & Flood). Splittable 64-bit generator: every
// trajectory gets its own statistically independent stream derived from
// (base_seed, stream_index), so ensembles parallelize without any shared
// generator state. All uniform deviates are produced from raw bits below;
// std::*_distribution is avoided because its output is
// implementation-defined and would break bit-level reproducibility.
class SplitMix64 {
  public:
    explicit SplitMix64(uint64_t seed) : state_(seed) {}

    uint64_t next_u64() {
        uint64_t z = (state_ += 0x9e3779b97f4a7c15ULL);
        z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
        z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
        return z ^ (z >> 31);
    }

    // Uniform in [0, 1) with 53 random bits.
    double next_double() { return static_cast<double>(next_u64() >> 11) * 0x1.0p-53; }

    // Uniform angle in [0, 2*pi).
    double next_angle() { return next_double() * 6.283185307179586476925286766559; }

    bool bernoulli(double p) { return next_double() < p; }

  private:
    uint64_t state_;
};

// Stateless seed derivation for stream k of a base seed. Mixing the index
// through the SplitMix64 finalizer before xor-ing keeps nearby indices
// decorrelated.
inline uint64_t derive_seed(uint64_t base_seed, uint64_t stream_index) {
    SplitMix64 mixer(stream_index ^ 0x6a09e667f3bcc909ULL);
    return base_seed ^ mixer.next_u64();
}

}  // namespace mvqc
