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


#include "bekktail/fixtures.hpp"

#include <algorithm>

namespace bekk {

ModelSpec make_spec(int d, int q, int l, const std::vector<Matrix>& coefficients, const Matrix& C) {
    ModelSpec s;
    s.d = d;
    s.q = q;
    s.l = l;
    s.C = C;
    s.A = coefficients;
    return validate_spec(std::move(s));
}

ModelSpec make_spec(int d, int q, int l, const std::vector<Matrix>& coefficients) {
    return make_spec(d, q, l, coefficients, Matrix::Identity(d, d));
}

ModelSpec scalar_arch(double a, double c) {
    return make_spec(1, 1, 1, {Matrix::Constant(1, 1, a)}, Matrix::Constant(1, 1, c));
}

Matrix mat2(double a11, double a12, double a21, double a22) {
    Matrix m(2, 2);
    m << a11, a12, a21, a22;
    return m;
}

namespace {

Matrix single_entry(int r, int c, double v) {
    Matrix m = Matrix::Zero(2, 2);
    m(r, c) = v;
    return m;
}

Fixture build(std::string_view id) {
    if (id == "5.1") {
        // Stacked univariate ARCH(1) processes.
        return {"5.1", "stacked scalar ARCH, a = (0.7, 1.1)",
                make_spec(2, 1, 2, {single_entry(0, 0, 0.7), single_entry(1, 1, 1.1)})};
    }
    if (id == "5.2") {
        return {"5.2", "upper triangular diagonalizable, a=0.5 b=0.8 c=0.2",
                make_spec(2, 1, 1, {mat2(0.5, 0.2, 0.0, 0.8)})};
    }
    if (id == "5.3") {
        const double a = 0.9, b = 0.3, c = 0.4;
        return {"5.3", "commuting pair, a=0.9 b=0.3 c=0.4",
                make_spec(2, 1, 2, {mat2(a, b, b, a), c * Matrix::Identity(2, 2)})};
    }
    if (id == "5.4") {
        const double a = 0.5, b = 0.9, c = 0.3;
        Matrix m(3, 3);
        m << a, 0, 0, 0, a, 0, 0, c, b;
        return {"5.4", "repeated eigenvalue, a=0.5 b=0.9 c=0.3", make_spec(3, 1, 1, {m})};
    }
    if (id == "5.6") {
        const double a = 0.5, b = 0.2;
        const Matrix m = (a - b) * Matrix::Identity(3, 3) + b * Matrix::Ones(3, 3);
        return {"5.6", "equicorrelated 3x3, a=0.5 b=0.2", make_spec(3, 1, 1, {m})};
    }
    if (id == "6.2") {
        Fixture f{"6.2", "triangular route on the 5.2 model", make_spec(2, 1, 1, {mat2(0.5, 0.2, 0.0, 0.8)})};
        f.force_triangular = true;
        return f;
    }
    if (id == "6.4") {
        const double a = 0.4, b = 1.0, c = 0.5, ct = 1.1;
        return {"6.4", "defective plus diagonal, a=0.4 b=1 c=0.5 c~=1.1",
                make_spec(2, 1, 2, {mat2(a, b, 0.0, a), mat2(c, 0.0, 0.0, ct)})};
    }
    if (id == "6.5") {
        const double a = 0.5, b = 0.9, c = -0.3;
        return {"6.5", "non-triangular triangularizable pair, a=0.5 b=0.9 c=-0.3",
                make_spec(2, 1, 2, {mat2(a, (b - a) / 2.0, (a - b) / 2.0, b), mat2(a, c, a - b + c, b)})};
    }
    if (id == "7.5") {
        std::vector<Matrix> coefs;
        for (int i = 0; i < 2; ++i) {
            coefs.push_back(single_entry(0, 0, 0.4));
            coefs.push_back(single_entry(1, 0, 0.4));
            coefs.push_back(single_entry(0, 1, 0.4));
            coefs.push_back(single_entry(1, 1, 0.4));
        }
        return {"7.5", "ARCH(2) with independent Gaussian entries, a_ij = 0.4", make_spec(2, 2, 4, coefs)};
    }
    if (id == "7.6") {
        const double a = 0.8, b = 0.3;
        return {"7.6", "neither diagonalizable nor triangularizable, a=0.8 b=0.3",
                make_spec(2, 1, 2, {mat2(a, b, b, a), mat2(a, b, -b, -a)})};
    }
    throw Error(ErrorCode::UnknownExample, "unknown example id '" + std::string(id) + "'");
}

}  // namespace

const std::vector<std::string>& fixture_ids() {
    static const std::vector<std::string> ids = {"5.1", "5.2", "5.3", "5.4", "5.6",
                                                 "6.2", "6.4", "6.5", "7.5", "7.6"};
    return ids;
}

Fixture fixture(std::string_view id) { return build(id); }

}  // namespace bekk
