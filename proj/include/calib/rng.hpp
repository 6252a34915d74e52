/*
 * Copyright 2026 The calib Authors.
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 *     https://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */

#ifndef CALIB_RNG_HPP
#define CALIB_RNG_HPP

#include <cmath>
#include <cstdint>
#include <numbers>

namespace calib {

/// Counter-based 64-bit generator: output k (k = 1, 2, ...) of a stream with
/// key `seed` is splitmix64_mix(seed + k * 0x9E3779B97F4A7C15). This is the
/// SplitMix64 sequence, so the first outputs for seed 0 are
/// 0xE220A8397B1DCDAF, 0x6E789E6AA1B965F4, 0x06C45D188009454F.
///
/// Derived values:
///   uniform()  = (next() >> 11) * 2^-53                 in [0, 1)
///   normal()   = sqrt(-2 ln(1 - u1)) * cos(2 pi u2)     (two draws, no cache)
///   index(n)   = floor(next() * n / 2^64)
class CounterRng {
 public:
  static constexpr std::uint64_t kGamma = 0x9E3779B97F4A7C15ULL;

  explicit CounterRng(std::uint64_t seed) : seed_(seed) {}

  static constexpr std::uint64_t mix(std::uint64_t z) {
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
    return z ^ (z >> 31);
  }

  /// Independent stream for a (seed, stream) pair.
  static CounterRng stream(std::uint64_t seed, std::uint64_t stream_id) {
    return CounterRng(mix(seed + kGamma) ^ mix(stream_id * 0xD1B54A32D192ED03ULL + 1));
  }

  std::uint64_t next() { return mix(seed_ + (++counter_) * kGamma); }

  double uniform() { return static_cast<double>(next() >> 11) * 0x1.0p-53; }

  double normal() {
    const double u1 = 1.0 - uniform();
    const double u2 = uniform();
    return std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * std::numbers::pi * u2);
  }

  std::uint64_t index(std::uint64_t n) {
    return static_cast<std::uint64_t>((static_cast<unsigned __int128>(next()) * n) >> 64);
  }

  std::uint64_t counter() const { return counter_; }

 private:
  std::uint64_t seed_;
  std::uint64_t counter_ = 0;
};

}  // namespace calib

#endif  // CALIB_RNG_HPP
