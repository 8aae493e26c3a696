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


#include <cmath>
#include <limits>
#include <string>

#include "bekktail/fixtures.hpp"
#include "bekktail/random.hpp"
#include "bekktail/special.hpp"
#include "bekktail/structure.hpp"
#include "bekktail/tail_solver.hpp"
#include "common.hpp"

using namespace bekk;
using testutil::oracle_alpha;
using testutil::throws_code;

TEST_CASE("Gaussian absolute moments") {
    CHECK(gaussian_abs_moment(2.0, 1.0) == doctest::Approx(1.0).epsilon(1e-13));
    CHECK(gaussian_abs_moment(4.0, 1.0) == doctest::Approx(3.0).epsilon(1e-13));
    CHECK(gaussian_abs_moment(1.0, 1.0) == doctest::Approx(std::sqrt(2.0 / M_PI)).epsilon(1e-13));
    CHECK(gaussian_abs_moment(1.0, 1.0) == doctest::Approx(0.79788).epsilon(1e-5));
    CounterStream rng = CounterStream::derive(21, 0);
    for (int i = 0; i < 20; ++i) {
        const double s = 0.05 + 3.0 * rng.uniform();
        CHECK(gaussian_abs_moment(2.0, s) == doctest::Approx(s * s).epsilon(1e-12));
        CHECK(gaussian_abs_moment(6.0, s) == doctest::Approx(15.0 * std::pow(s, 6)).epsilon(1e-12));
    }
}

TEST_CASE("log derivative") {
    CHECK(moment_log_derivative(2.0, 1.0) == doctest::Approx(0.36482).epsilon(1e-5));
    CHECK(moment_log_derivative(2.0, 1.0) == doctest::Approx((2.0 - kEulerGamma - kLog2) / 2.0).epsilon(1e-13));
    CounterStream rng = CounterStream::derive(22, 0);
    for (int i = 0; i < 20; ++i) {
        const double a = 0.2 + 10.0 * rng.uniform(), s = 0.2 + 2.0 * rng.uniform(), h = 1e-5;
        const double fd = (log_gaussian_abs_moment(a + h, s) - log_gaussian_abs_moment(a - h, s)) / (2 * h);
        CHECK(std::abs(moment_log_derivative(a, s) - fd) < 1e-6);
    }
    CHECK(tail_sigma_boundary() == doctest::Approx(1.8874).epsilon(1e-4));
    CHECK(std::abs(moment_log_derivative(1e-9, tail_sigma_boundary())) < 1e-8);
}

TEST_CASE("component tail index") {
    CHECK(std::abs(solve_component_tail_index(1.0) - 2.0) < 1e-10);
    CHECK(solve_component_tail_index(1.2) == doctest::Approx(oracle_alpha(1.2)).epsilon(1e-9));
    CHECK(solve_component_tail_index(1.2) == doctest::Approx(1.16).epsilon(2e-3));
    CHECK(solve_component_tail_index(0.5) > 6.0);
    CHECK(solve_component_tail_index(0.5) == doctest::Approx(10.1733).epsilon(1e-5));
    CHECK(solve_component_tail_index(0.9) == doctest::Approx(2.642).epsilon(1e-4));
    CHECK(throws_code([] { solve_component_tail_index(1.9); }, ErrorCode::NoRoot));
    CHECK(throws_code([] { solve_component_tail_index(0.0); }, ErrorCode::NoRoot));
    CHECK(throws_code([] { solve_component_tail_index(0.3); }, ErrorCode::NoRoot));
    CHECK(std::isinf(component_tail_index_or_inf(0.3)));
    CHECK(std::isinf(component_tail_index_or_inf(0.0)));
    CHECK(throws_code([] { component_tail_index_or_inf(2.0); }, ErrorCode::NoRoot));
}

TEST_CASE("roots: identity, m_alpha sign, monotonicity") {
    double prev = std::numeric_limits<double>::infinity();
    for (int i = 0; i < 10; ++i) {
        const double s = 0.45 + 0.14 * i;
        const double a = solve_component_tail_index(s);
        CHECK(std::abs(gaussian_abs_moment(a, s) - 1.0) < 1e-10);
        CHECK(moment_log_derivative(a, s) > 0.0);
        CHECK(a < prev);
        CHECK(a == doctest::Approx(oracle_alpha(s)).epsilon(1e-9));
        prev = a;
    }
}

TEST_CASE("log moment is convex in alpha") {
    CounterStream rng = CounterStream::derive(23, 0);
    for (int i = 0; i < 500; ++i) {
        const double s = 0.1 + 3.0 * rng.uniform();
        const double a = 25.0 * rng.uniform(), b = 25.0 * rng.uniform();
        CHECK(log_gaussian_abs_moment(0.5 * (a + b), s) <=
              0.5 * (log_gaussian_abs_moment(a, s) + log_gaussian_abs_moment(b, s)) + 1e-12);
    }
}

TEST_CASE("minimum rule on diagonalizable fixtures") {
    SUBCASE("upper triangular diagonalizable") {
        const ModelSpec s = fixture("5.2").spec;
        const TailReport r = tail_indexes_simdiag(s, simultaneous_diagonalize(s.A));
        const double a2 = oracle_alpha(0.8);
        REQUIRE(r.per_component[0].alpha.has_value());
        CHECK(*r.per_component[0].alpha == doctest::Approx(a2).epsilon(1e-9));
        CHECK(*r.per_component[1].alpha == doctest::Approx(a2).epsilon(1e-9));
        CHECK(r.per_component[1].method == TailMethod::SimDiag);
        CHECK(r.per_component[0].relevant_set.size() == 2);
        CHECK(r.per_component[1].relevant_set.size() == 1);
    }
    SUBCASE("commuting pair") {
        const ModelSpec s = fixture("5.3").spec;
        const TailReport r = tail_indexes_simdiag(s, simultaneous_diagonalize(s.A));
        std::vector<double> sig = r.sigma;
        std::sort(sig.begin(), sig.end());
        CHECK(sig[0] == doctest::Approx(0.72111).epsilon(1e-5));
        CHECK(sig[1] == doctest::Approx(1.26491).epsilon(1e-5));
        for (const ComponentTail& c : r.per_component) CHECK(*c.alpha == doctest::Approx(0.9678).epsilon(1e-4));
    }
    SUBCASE("repeated eigenvalue with the same diagonal entry") {
        const ModelSpec s = fixture("5.4").spec;
        const TailReport r = tail_indexes_simdiag(s, simultaneous_diagonalize(s.A));
        CHECK(*r.per_component[0].alpha == doctest::Approx(oracle_alpha(0.5)).epsilon(1e-9));
        CHECK(*r.per_component[2].alpha == doctest::Approx(oracle_alpha(0.9)).epsilon(1e-9));
    }
    SUBCASE("equicorrelated") {
        const ModelSpec s = fixture("5.6").spec;
        const TailReport r = tail_indexes_simdiag(s, simultaneous_diagonalize(s.A));
        for (const ComponentTail& c : r.per_component) {
            REQUIRE(c.alpha.has_value());
            CHECK(*c.alpha == doctest::Approx(oracle_alpha(0.9)).epsilon(1e-9));
            CHECK(!c.relevant_set.empty());
        }
    }
    SUBCASE("nonstationary direction leaves its components undetermined") {
        const ModelSpec s = make_spec(2, 1, 1, {mat2(0.5, 0, 0, 2.5)});
        const TailReport r = tail_indexes_simdiag(s, simultaneous_diagonalize(s.A));
        CHECK(r.per_component[0].alpha.has_value());
        CHECK(r.per_component[1].method == TailMethod::Undetermined);
    }
}

TEST_CASE("triangular route") {
    SUBCASE("defective plus diagonal") {
        const ModelSpec s = fixture("6.4").spec;
        const TailReport r = tail_indexes_triangular(s, simultaneous_triangularize_2d(s.A));
        CHECK(r.sigma[0] == doctest::Approx(0.64031).epsilon(1e-5));
        CHECK(r.sigma[1] == doctest::Approx(1.17047).epsilon(1e-5));
        const double a2 = oracle_alpha(std::hypot(0.4, 1.1));
        CHECK(*r.per_component[0].alpha == doctest::Approx(a2).epsilon(1e-9));
        CHECK(*r.per_component[1].alpha == doctest::Approx(a2).epsilon(1e-9));
        CHECK(r.per_component[0].method == TailMethod::Triangular2D);
    }
    SUBCASE("equal diagonal refuses") {
        const ModelSpec s = make_spec(2, 1, 1, {mat2(0.4, 1, 0, 0.4)});
        CHECK(throws_code([&] { tail_indexes_triangular(s, simultaneous_triangularize_2d(s.A)); },
                          ErrorCode::TieUndetermined));
    }
    SUBCASE("dependent equal-index components") {
        const ModelSpec s = fixture("6.5").spec;
        const TailReport r = tail_indexes_triangular(s, simultaneous_triangularize_2d(s.A));
        for (const ComponentTail& c : r.per_component) {
            CHECK(c.method == TailMethod::Undetermined);
            CHECK(c.diagnostic == "dependent equal-index Y components");
            CHECK_FALSE(c.alpha.has_value());
        }
    }
}

TEST_CASE("spectral functional matches the scalar closed form") {
    // For a scalar model the functional is exactly log E|a z|^alpha at every horizon.
    for (double alpha : {1.0, 3.0}) {
        const double v = spectral_functional(scalar_arch(1.0), alpha, 100, 2000, 4);
        CHECK(v == doctest::Approx(log_gaussian_abs_moment(alpha, 1.0)).epsilon(0.02).scale(1.0));
    }
}

TEST_CASE("spectral root") {
    const SpectralTailEstimate s = solve_spectral_tail_index(scalar_arch(1.0));
    CHECK(s.alpha == doctest::Approx(2.0).epsilon(0.05));
    CHECK(s.horizons == std::vector<int>{50, 100, 200});
    CHECK(s.horizon_roots.size() == 3);
    const SpectralTailEstimate d = solve_spectral_tail_index(make_spec(2, 1, 1, {mat2(0.6, 0, 0, 1.1)}));
    CHECK(d.alpha == doctest::Approx(oracle_alpha(1.1)).epsilon(0.05));
    const SpectralTailEstimate again = solve_spectral_tail_index(scalar_arch(1.0));
    CHECK(again.alpha == s.alpha);
}

TEST_CASE("spectral root for a general multi-lag model") {
    const SpectralTailEstimate s = solve_spectral_tail_index(fixture("7.5").spec);
    CHECK(s.alpha > 0.0);
    CHECK(s.alpha < kAlphaMax);
}

TEST_CASE("Goldie constant") {
    SUBCASE("degenerate multiplier") {
        const GoldieEstimate g = goldie_constant(ScalarSre{0.0, 1.0}, 2.0, 200000, 3, 0.5);
        // E|B|^2 / (2 * 2 * 0.5) = 0.5
        CHECK(std::abs(g.value - 0.5) < 4.0 * g.stderr_);
        CHECK(g.m_alpha == 0.5);
    }
    SUBCASE("scalar a=1 is positive") {
        const GoldieEstimate g = goldie_constant(ScalarSre{1.0, 1.0}, 2.0, 200000, 3);
        CHECK(g.value > 0.0);
        CHECK_FALSE(g.nonpositive);
        CHECK(g.m_alpha == doctest::Approx(moment_log_derivative(2.0, 1.0)));
    }
    SUBCASE("sigma 1.2") {
        const double a = solve_component_tail_index(1.2);
        CHECK(goldie_constant(ScalarSre{1.2, 1.0}, a, 200000, 3).value > 0.0);
    }
}

TEST_CASE("tilted gamma draws") {
    CounterStream s = CounterStream::derive(31, 0);
    for (double shape : {0.6, 1.5, 4.0}) {
        double m = 0.0;
        const int n = 100000;
        for (int i = 0; i < n; ++i) m += gamma_variate(shape, s);
        CHECK(std::abs(m / n - shape) < 4.0 * std::sqrt(shape / n));
    }
}

TEST_CASE("forward constants on the triangular fixture") {
    const Fixture fx = fixture("6.4");
    const StructureDecomposition dec = simultaneous_triangularize_2d(fx.spec.A);
    const double a2 = solve_component_tail_index(std::hypot(0.4, 1.1));
    const ForwardConstant fc = forward_constant_triangular(fx.spec, dec, a2);
    REQUIRE(fc.w_s.size() == 30);
    // s = 1 is a single Gaussian term with scale sigma_12 = 1.
    CHECK(std::abs(fc.w_s[0] - gaussian_abs_moment(a2, 1.0)) < 3.0 * fc.w_s_stderr[0]);
    CHECK(fc.plateau);
    CHECK(fc.c1_tilde > 0.0);
    CHECK(fc.c1_tilde == doctest::Approx(fc.c2.value * fc.w_s.back()));
    for (std::size_t s = 0; s < fc.w_s.size(); ++s) CHECK(fc.w_s[s] <= fc.envelope + 3.0 * fc.w_s_stderr[s]);

    std::vector<double> se;
    const std::vector<double> plain = forward_series_plain(dec, a2, 4, 400000, 7, &se);
    for (int s = 0; s < 4; ++s)
        CHECK(std::abs(plain[s] - fc.w_s[s]) < 4.0 * std::hypot(se[s], fc.w_s_stderr[s]));
}

TEST_CASE("forward constants vanish without coupling") {
    const ModelSpec s = make_spec(2, 1, 1, {mat2(0.4, 0, 0, 1.1)});
    StructureDecomposition dec;
    dec.kind = StructureKind::SimTriangularizable2D;
    dec.P = Matrix::Identity(2, 2);
    dec.P_inv = Matrix::Identity(2, 2);
    dec.transformed = s.A;
    const ForwardConstant fc = forward_constant_triangular(s, dec, solve_component_tail_index(1.1), 10, 20000);
    for (double w : fc.w_s) CHECK(w == 0.0);
    CHECK(fc.c1_tilde == 0.0);
}

TEST_CASE("forward constants need alpha1 > alpha2") {
    const ModelSpec s = make_spec(2, 1, 1, {mat2(1.1, 1, 0, 0.4)});
    const StructureDecomposition dec = simultaneous_triangularize_2d(s.A);
    CHECK(throws_code([&] { forward_constant_triangular(s, dec, solve_component_tail_index(0.4), 5, 1000); },
                      ErrorCode::NotApplicable));
}
