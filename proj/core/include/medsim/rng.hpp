/*
 * Copyright 2026 The medsim Authors
 *
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 *     http://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */

#pragma once

#include <cstdint>
#include <initializer_list>
#include <random>
#include <string_view>

namespace medsim {

/// mt19937_64 is specified bit-for-bit by the standard; distributions are
/// not, so draws go through uniform_below().
using Rng = std::mt19937_64;

/// Unbiased draw in [0, bound) by rejection; bound must be positive.
std::uint64_t uniform_below(Rng& rng, std::uint64_t bound);

std::uint64_t fnv1a64(std::string_view s, std::uint64_t h = 0xcbf29ce484222325ull) noexcept;
std::uint64_t splitmix64(std::uint64_t x) noexcept;

/// Seed derived from a base seed and string labels, stable across platforms.
std::uint64_t derive_seed(std::uint64_t base, std::initializer_list<std::string_view> labels) noexcept;

}  // namespace medsim
