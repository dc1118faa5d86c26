// Copyright (c) 2026 srcmetry contributors
// SPDX-License-Identifier: Apache-2.0

#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>
#include <random>

#include "srcmetry/cocomo.hpp"
#include "srcmetry/types.hpp"
#include "support/fixtures.hpp"

using namespace srcmetry;
using cocomo::Coefficients;
using cocomo::ProjectClass;

TEST_CASE("default coefficients match the model table") {
    const auto organic = Coefficients::defaults(ProjectClass::Organic);
    CHECK(organic.a_b == 2.4);
    CHECK(organic.b_b == 1.05);
    CHECK(organic.c_b == 2.5);
    CHECK(organic.d_b == 0.38);
    const auto semi = Coefficients::defaults(ProjectClass::SemiDetached);
    CHECK(semi.a_b == 3.0);
    CHECK(semi.b_b == 1.12);
    CHECK(semi.c_b == 2.5);
    CHECK(semi.d_b == 0.35);
    const auto embedded = Coefficients::defaults(ProjectClass::Embedded);
    CHECK(embedded.a_b == 3.6);
    CHECK(embedded.b_b == 1.20);
    CHECK(embedded.c_b == 2.5);
    CHECK(embedded.d_b == 0.32);
}

TEST_CASE("organic estimates reproduce the reference samples") {
    const auto organic = Coefficients::defaults(ProjectClass::Organic);
    SUBCASE("61.752 kloc") {
        const auto est = cocomo::estimate(61.752, organic);
        CHECK(est.effort_man_months == doctest::Approx(182.14).epsilon(0.5 / 182.14));
        CHECK(est.duration_months == doctest::Approx(18.07).epsilon(0.05 / 18.07));
        CHECK(est.people == doctest::Approx(10.08).epsilon(0.05 / 10.08));
    }
    SUBCASE("33.170 kloc") {
        const auto est = cocomo::estimate(33.170, organic);
        CHECK(est.effort_man_months == doctest::Approx(94.84).epsilon(0.5 / 94.84));
        CHECK(est.duration_months == doctest::Approx(14.10).epsilon(0.05 / 14.10));
        CHECK(est.people == doctest::Approx(6.73).epsilon(0.05 / 6.73));
    }
    SUBCASE("one kloc collapses effort to a_b") {
        const auto est = cocomo::estimate(1.0, organic);
        CHECK(est.effort_man_months == doctest::Approx(2.4).epsilon(1e-12));
        CHECK(est.duration_months == doctest::Approx(2.5 * std::pow(2.4, 0.38)).epsilon(1e-12));
        CHECK(est.people == doctest::Approx(est.effort_man_months / est.duration_months));
    }
}

TEST_CASE("non-positive kloc is a domain error") {
    const auto organic = Coefficients::defaults(ProjectClass::Organic);
    CHECK_THROWS_AS(cocomo::estimate(0.0, organic), Error);
    CHECK_THROWS_AS(cocomo::estimate(-3.0, organic), Error);
}

TEST_CASE("estimates are monotone and satisfy P*D = E") {
    const auto organic = Coefficients::defaults(ProjectClass::Organic);
    const auto semi = Coefficients::defaults(ProjectClass::SemiDetached);
    const auto embedded = Coefficients::defaults(ProjectClass::Embedded);
    std::mt19937 rng(7);
    std::uniform_real_distribution<double> kloc_dist(0.01, 10000.0);
    double prev_kloc = 0.0, prev_e = 0.0, prev_d = 0.0;
    for (int i = 0; i < 500; ++i) {
        const double kloc = kloc_dist(rng);
        const auto est = cocomo::estimate(kloc, organic);
        CHECK(std::abs(est.people * est.duration_months - est.effort_man_months) <=
              1e-9 * est.effort_man_months);
        if (prev_kloc > 0.0 && kloc > prev_kloc) {
            CHECK(est.effort_man_months > prev_e);
            CHECK(est.duration_months > prev_d);
        }
        prev_kloc = kloc;
        prev_e = est.effort_man_months;
        prev_d = est.duration_months;

        if (kloc >= 1.0) {
            const auto e_semi = cocomo::estimate(kloc, semi).effort_man_months;
            const auto e_embed = cocomo::estimate(kloc, embedded).effort_man_months;
            CHECK(e_embed >= e_semi);
            CHECK(e_semi >= est.effort_man_months);
        }
    }
}

TEST_CASE("coefficient tables load from json") {
    test::TempDir dir("cocomo");
    dir.write("cocomo.json", R"({"organic": {"a": 3.2, "b": 1.05, "c": 2.5, "d": 0.38}})");
    const auto coeffs =
        Coefficients::from_json_file(dir.path() / "cocomo.json", ProjectClass::Organic);
    CHECK(coeffs.a_b == 3.2);
    CHECK_THROWS_AS(
        Coefficients::from_json_file(dir.path() / "cocomo.json", ProjectClass::Embedded), Error);
}

TEST_CASE("project class names round-trip") {
    CHECK(cocomo::project_class_from_name("organic") == ProjectClass::Organic);
    CHECK(cocomo::project_class_from_name("Semi-Detached") == ProjectClass::SemiDetached);
    CHECK(cocomo::project_class_from_name("EMBEDDED") == ProjectClass::Embedded);
    CHECK(!cocomo::project_class_from_name("huge").has_value());
}
