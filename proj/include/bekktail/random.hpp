/*
Copyright 2026 bekktail developers
Licensed under the Apache License, Version 2.0 (the "License");
you may not use this file except in compliance with the License.
You may obtain a copy of the License at

                http://www.apache.org/licenses/LICENSE-2.0

Unless required by applicable law or agreed to in writing, software
distributed under the License is distributed on an "AS IS" BASIS,
WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
See the License for the specific language governing permissions and
limitations under the License.
*/

#pragma once

#include <cstdint>

namespace bekk {

/// Inverse of the standard normal CDF (Wichura's AS241, ~1e-16 relative).
double normal_quantile(double p) noexcept;

/// Counter-based random stream.
///
/// The n-th output is a pure function of (key, n): a SplitMix64 finalizer
/// applied to key + n * golden-gamma. A stream for replica r of a run seeded
/// with s is `CounterStream::derive(s, r)`, so draws never depend on which
/// thread executes the replica or in which order replicas complete.
///
/// Normals are produced by inversion of a 53-bit uniform on (0,1), one
/// uniform per normal. This is slower than Ziggurat but bit-reproducible on
/// any IEEE-754 platform with a correctly rounded log/sqrt.
class CounterStream {
public:
    constexpr CounterStream() noexcept = default;
    constexpr explicit CounterStream(std::uint64_t key) noexcept : key_(key) {}

    static CounterStream derive(std::uint64_t seed, std::uint64_t stream_index) noexcept;

    std::uint64_t next_u64() noexcept;
    /// Uniform on the open interval (0,1).
    double uniform() noexcept;
    double normal() noexcept { return normal_quantile(uniform()); }

    [[nodiscard]] std::uint64_t key() const noexcept { return key_; }
    [[nodiscard]] std::uint64_t position() const noexcept { return counter_; }

private:
    std::uint64_t key_ = 0;
    std::uint64_t counter_ = 0;
};

std::uint64_t mix64(std::uint64_t z) noexcept;

}  // namespace bekk
