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

namespace bekk {

inline constexpr double kEulerGamma = 0.57721566490153286061;
inline constexpr double kLog2 = 0.69314718055994530942;
inline constexpr double kLogPi = 1.14472988584940017414;

/// E log|z| for z ~ N(0,1), equal to -(Euler gamma + log 2)/2.
inline constexpr double kMeanLogAbsNormal = -(kEulerGamma + kLog2) / 2.0;

/// psi(x) = d/dx log Gamma(x) for x > 0.
double digamma(double x) noexcept;

}  // namespace bekk
