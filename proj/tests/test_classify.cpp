#include <doctest.h>

#include <cmath>

#include "nslab/classify.hpp"
#include "nslab/spectral_ops.hpp"
#include "test_support.hpp"

using namespace nslab;

TEST_SUITE("classifier") {
    TEST_CASE("uniform m-profiles with a uniform l-profile are smooth") {
        AngularTable t = smooth_targets(3);
        const auto c = classify(t);
        CHECK(c.label == DataLabel::Smooth);
        CHECK(c.smooth_discriminant <= 1e-15);
        CHECK(c.strict_discriminant == doctest::Approx(1.0));
    }

    TEST_CASE("the (1, 0, -1)/sqrt(2) pattern at l = 1 is strictly turbulent") {
        AngularTable t;
        t.lmax = 1;
        t.t.assign(lm_count(1), 0.0);
        t.at(1, -1) = 1.0 / std::sqrt(2.0);
        t.at(1, 1) = -1.0 / std::sqrt(2.0);
        const auto c = classify(t);
        CHECK(c.label == DataLabel::StrictlyTurbulent);
        CHECK(c.strict_discriminant <= 1e-15);
        CHECK(c.levels[1].alignment <= 1e-15);
    }

    TEST_CASE("a mixture of the two is turbulent") {
        AngularTable smooth = smooth_targets(2);
        AngularTable t = strict_targets(1, 2);
        for (int i = 0; i < lm_count(2); ++i) t.t[i] += 0.5 * smooth.t[i];
        const auto c = classify(t);
        CHECK(c.label == DataLabel::Turbulent);
        CHECK(c.smooth_discriminant > 1e-2);
        CHECK(c.strict_discriminant > 1e-2);
    }

    TEST_CASE("empty expansions are rejected") {
        AngularTable t;
        t.lmax = 2;
        t.t.assign(lm_count(2), 0.0);
        CHECK_THROWS_WITH_AS(classify(t), doctest::Contains("empty expansion"), Error);
    }

    TEST_CASE("construct-then-classify closure with wide margins") {
        const auto grid = make_grid(16);
        for (int lmax : {1, 2, 4}) {
            for (auto label :
                 {DataLabel::Smooth, DataLabel::Turbulent, DataLabel::StrictlyTurbulent}) {
                const auto u = synthesize_labeled(grid, label, lmax);
                const auto c = classify_initial_data(u, lmax);
                CHECK(c.label == label);
                // margins: discriminants either below tol/1e6 or above tol*1e6
                switch (label) {
                    case DataLabel::Smooth:
                        CHECK(c.smooth_discriminant <= c.tolerance * 1e-6);
                        break;
                    case DataLabel::StrictlyTurbulent:
                        CHECK(c.strict_discriminant <= c.tolerance * 1e-6);
                        break;
                    case DataLabel::Turbulent:
                        CHECK(c.smooth_discriminant >= c.tolerance * 1e6);
                        CHECK(c.strict_discriminant >= c.tolerance * 1e6);
                        break;
                }
            }
        }
    }

    TEST_CASE("constructed fields satisfy the field invariants") {
        const auto grid = make_grid(16);
        for (auto label : {DataLabel::Smooth, DataLabel::StrictlyTurbulent}) {
            const auto u = synthesize_labeled(grid, label, 4);
            CHECK(divergence_residual(u) <= 1e-13);
            CHECK(reality_defect(u) <= 1e-13);
            CHECK(mean_velocity_magnitude(u) == 0.0);
        }
    }

    TEST_CASE("scaling leaves the label unchanged") {
        const auto grid = make_grid(16);
        auto u = synthesize_labeled(grid, DataLabel::StrictlyTurbulent, 2);
        for (int c = 0; c < 3; ++c)
            for (auto& v : u.coeffs[c]) v *= 17.0;
        CHECK(classify_initial_data(u, 2).label == DataLabel::StrictlyTurbulent);
    }

    TEST_CASE("classification from expansion coefficients") {
        // Build coefficients whose radial sum carries the strict pattern.
        HarmonicCoefficients coeffs;
        coeffs.lmax = 1;
        coeffs.ball_radius = 1.0;
        coeffs.radial_k = {kPi, 2.0 * kPi};
        coeffs.f_coeff.assign(2 * lm_count(1), cdouble{0.0, 0.0});
        // real table entry r(1, -1) comes from -sqrt(2) * (-1) * Im f(1,1);
        // pick complex entries whose real conversion is (1, 0, -1)/sqrt(2).
        const double r = 1.0 / std::sqrt(2.0);
        // r(1,1) = -sqrt(2) Re f(1,1); r(1,-1) = +sqrt(2) Im f(1,1)
        coeffs.f_coeff[coeffs.coeff_index(0, 1, 1)] = cdouble{r / std::sqrt(2.0), r / std::sqrt(2.0)};
        const auto c = classify_initial_data(coeffs);
        CHECK(c.label == DataLabel::StrictlyTurbulent);
    }

    TEST_CASE("unrealizable targets are reported") {
        // Content beyond the construction shells cannot be synthesized.
        AngularTable t;
        t.lmax = kMaxConstructionLmax + 1;
        t.t.assign(lm_count(kMaxConstructionLmax + 1), 0.0);
        t.at(kMaxConstructionLmax + 1, 0) = 1.0;
        const auto grid = make_grid(16);
        CHECK_THROWS_AS(synthesize_from_angular_targets(grid, t, 0.1), Error);
    }

    TEST_CASE("generic random band data is turbulent") {
        const auto grid = make_grid(16);
        const auto u = test::random_field(grid, 1234);
        const auto c = classify_initial_data(u, 3);
        CHECK(c.label == DataLabel::Turbulent);
    }
}
