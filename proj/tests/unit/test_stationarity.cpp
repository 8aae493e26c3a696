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

#include "bekktail/fixtures.hpp"
#include "bekktail/stationarity.hpp"
#include "bekktail/tail_solver.hpp"
#include "common.hpp"

using namespace bekk;

TEST_CASE("Nelson bound") {
    CHECK(nelson_bound() == doctest::Approx(2.0 * std::exp(0.5772156649015329)).epsilon(1e-14));
    CHECK(nelson_bound() == doctest::Approx(3.562).epsilon(1e-4));
}

TEST_CASE("verdict rule") {
    CHECK(lyapunov_verdict(-0.1, 0.01) == StationarityVerdict::Stationary);
    CHECK(lyapunov_verdict(0.1, 0.01) == StationarityVerdict::NonStationary);
    CHECK(lyapunov_verdict(0.01, 0.01) == StationarityVerdict::Inconclusive);
    CHECK(lyapunov_verdict(-0.019, 0.01) == StationarityVerdict::Inconclusive);
}

TEST_CASE("closed forms") {
    CHECK(*lyapunov_closed_form(scalar_arch(1.0)) == doctest::Approx(-0.6351814).epsilon(1e-7));
    CHECK(*lyapunov_closed_form(make_spec(2, 1, 1, {mat2(0.5, 0, 0, 1.5)})) ==
          doctest::Approx(std::log(1.5) - 0.6351814).epsilon(1e-6));
    CHECK(*lyapunov_closed_form(make_spec(2, 1, 1, {mat2(0.5, 0, 0, 1.5)})) == doctest::Approx(-0.2297).epsilon(1e-3));
    CHECK(std::abs(*lyapunov_closed_form(scalar_arch(std::sqrt(nelson_bound())))) < 1e-12);
    CHECK_FALSE(lyapunov_closed_form(fixture("7.6").spec).has_value());
}

TEST_CASE("Monte Carlo agrees with closed forms") {
    for (const char* id : {"5.1", "5.2", "6.4"}) {
        const ModelSpec s = fixture(id).spec;
        const LyapunovReport r = lyapunov_estimate(s, 2000, 100, 5);
        REQUIRE(r.closed_form.has_value());
        CHECK(std::abs(r.gamma_hat - *r.closed_form) <= 3.0 * r.stderr_);
        CHECK(r.verdict == lyapunov_verdict(r.gamma_hat, r.stderr_));
    }
}

TEST_CASE("scalar stationarity verdicts around the bound") {
    CHECK(lyapunov_estimate(scalar_arch(std::sqrt(3.0))).verdict == StationarityVerdict::Stationary);
    CHECK(lyapunov_estimate(scalar_arch(std::sqrt(3.6))).verdict == StationarityVerdict::NonStationary);
    CHECK(lyapunov_estimate(scalar_arch(2.0)).verdict == StationarityVerdict::NonStationary);
}

TEST_CASE("horizon subadditivity") {
    const ModelSpec s = fixture("7.6").spec;
    const LyapunovReport short_ = lyapunov_estimate(s, 25, 200, 8);
    const LyapunovReport long_ = lyapunov_estimate(s, 200, 200, 8);
    CHECK(long_.gamma_hat <= short_.gamma_hat + 3.0 * std::hypot(short_.stderr_, long_.stderr_));
}

TEST_CASE("scaling the coefficients shifts gamma by log s") {
    const ModelSpec s = fixture("5.3").spec;
    std::vector<Matrix> scaled = s.A;
    for (Matrix& m : scaled) m *= 1.7;
    const LyapunovReport a = lyapunov_estimate(s, 500, 20, 3);
    const LyapunovReport b = lyapunov_estimate(make_spec(2, 1, 2, scaled), 500, 20, 3);
    CHECK(b.gamma_hat - a.gamma_hat == doctest::Approx(std::log(1.7)).epsilon(1e-9));

    const ModelSpec q2 = fixture("7.5").spec;
    std::vector<Matrix> q2s = q2.A;
    for (Matrix& m : q2s) m *= 1.5;
    const LyapunovReport c = lyapunov_estimate(q2, 2000, 50, 3);
    const LyapunovReport d = lyapunov_estimate(make_spec(2, 2, 4, q2s), 2000, 50, 3);
    CHECK(d.gamma_hat > c.gamma_hat);
}

TEST_CASE("a closed-form root implies a negative exponent") {
    for (double sigma = 0.2; sigma < 1.88; sigma += 0.05) {
        if (std::isinf(component_tail_index_or_inf(sigma))) continue;
        CHECK(*lyapunov_closed_form(scalar_arch(sigma)) < 0.0);
    }
}

TEST_CASE("Kronecker condition") {
    const KroneckerCondition s = kronecker_condition(scalar_arch(0.9));
    CHECK(s.rho == doctest::Approx(0.81));
    CHECK(s.sufficient);
    const KroneckerCondition d = kronecker_condition(make_spec(2, 1, 1, {mat2(0.5, 0, 0, 0.8)}));
    CHECK(d.rho == doctest::Approx(0.64));
    CHECK(d.sufficient);
    const ModelSpec gap = scalar_arch(std::sqrt(2.0));
    CHECK_FALSE(kronecker_condition(gap).sufficient);
    CHECK(lyapunov_estimate(gap).verdict == StationarityVerdict::Stationary);
}

TEST_CASE("estimates are deterministic in the seed") {
    const ModelSpec s = fixture("7.6").spec;
    const LyapunovReport a = lyapunov_estimate(s, 300, 20, 11);
    const LyapunovReport b = lyapunov_estimate(s, 300, 20, 11);
    CHECK(a.gamma_hat == b.gamma_hat);
    CHECK(a.stderr_ == b.stderr_);
}
