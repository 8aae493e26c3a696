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

#include <string>
#include <string_view>
#include <vector>

#include "bekktail/model.hpp"

namespace bekk {

/// A shipped example model. `force_triangular` routes a d = 2 lag-one model
/// through the triangular decomposition even when it is diagonalizable.
struct Fixture {
    std::string id;
    std::string title;
    ModelSpec spec;
    bool force_triangular = false;
};

const std::vector<std::string>& fixture_ids();

/// Throws UnknownExample.
Fixture fixture(std::string_view id);

/// Helpers used by the fixtures and the tests.
ModelSpec make_spec(int d, int q, int l, const std::vector<Matrix>& coefficients, const Matrix& C);
ModelSpec make_spec(int d, int q, int l, const std::vector<Matrix>& coefficients);
ModelSpec scalar_arch(double a, double c = 1.0);
Matrix mat2(double a11, double a12, double a21, double a22);

}  // namespace bekk
