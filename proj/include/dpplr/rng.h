//
// Copyright 2026 The DP-PLR Authors
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
//

#ifndef DPPLR_RNG_H_
#define DPPLR_RNG_H_

#include <cstdint>
#include <initializer_list>
#include <limits>

namespace dpplr {

// Counter-based random stream. The i-th output is a pure function of
// (key, i), so two streams with the same key always agree and a stream can
// be re-derived anywhere without sharing state. The mixing function is the
// SplitMix64 finalizer applied to key + i * golden_gamma.
class CounterRng {
 public:
  using result_type = uint64_t;

  explicit CounterRng(uint64_t key) : key_(key) {}

  static constexpr result_type min() { return 0; }
  static constexpr result_type max() {
    return std::numeric_limits<result_type>::max();
  }

  result_type operator()() { return Next(); }

  uint64_t Next() { return Mix(key_ + (++counter_) * kGamma); }

  // Uniform double in the open interval (0, 1).
  double UniformOpen() {
    return (static_cast<double>(Next() >> 11) + 0.5) * 0x1.0p-53;
  }

  uint64_t key() const { return key_; }
  uint64_t counter() const { return counter_; }

  static uint64_t Mix(uint64_t z) {
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
  }

 private:
  static constexpr uint64_t kGamma = 0x9e3779b97f4a7c15ULL;

  uint64_t key_;
  uint64_t counter_ = 0;
};

// Derives an independent stream key from a root seed and a path of labels,
// e.g. DeriveKey(seed, {trial, method, cell}).
inline uint64_t DeriveKey(uint64_t seed, std::initializer_list<uint64_t> path) {
  uint64_t k = CounterRng::Mix(seed ^ 0x6a09e667f3bcc909ULL);
  for (uint64_t label : path) {
    k = CounterRng::Mix(k + 0x9e3779b97f4a7c15ULL + CounterRng::Mix(label));
  }
  return k;
}

}  // namespace dpplr

#endif  // DPPLR_RNG_H_
