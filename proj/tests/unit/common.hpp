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

#include <cmath>
#include <functional>

#include "bekktail/errors.hpp"
#include "doctest.h"

namespace testutil {

// Error code thrown by fn, or nullopt-like sentinel when nothing is thrown.
inline bool throws_code(const std::function<void()>& fn, bekk::ErrorCode code) {
    try {
        fn();
    } catch (const bekk::Error& e) {
        return e.code() == code;
    }
    return false;
}

// Independent root of E|sigma z|^alpha = 1 by plain bisection on lgamma.
inline double oracle_alpha(double sigma) {
    auto f = [sigma](double a) {
        return a * std::log(sigma) + 0.5 * a * std::log(2.0) + std::lgamma(0.5 * (a + 1.0)) - 0.5 * std::log(M_PI);
    };
    double lo = 1e-9, hi = 60.0;
    for (int i = 0; i < 200; ++i) {
        const double mid = 0.5 * (lo + hi);
        (f(mid) < 0.0 ? lo : hi) = mid;
    }
    return 0.5 * (lo + hi);
}

}  // namespace testutil
