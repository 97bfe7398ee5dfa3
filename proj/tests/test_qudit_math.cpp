#include <cmath>
#include <complex>
#include <numbers>
#include <vector>

#include "doctest.h"

#include "mqpc/errors.hpp"
#include "mqpc/qudit_math.hpp"
#include "mqpc/rng.hpp"
#include "mqpc/stats.hpp"

using namespace mqpc;

namespace {

bool close(cxd a, cxd b, double tol = 1e-12) { return std::abs(a - b) <= tol; }

cxd phase(double turns) {
    return std::exp(cxd{0.0, 2.0 * std::numbers::pi * turns});
}

} // namespace

TEST_SUITE("qudit_math") {

TEST_CASE("mod_add and mod_sub follow modulo-d arithmetic") {
    CHECK(mod_add(mod_add(9, 4, 11), 7, 11) == 9);
    CHECK(mod_add(6, 6, 11) == 1);
    CHECK(mod_sub(8, 9, 11) == 10);
    CHECK(mod_sub(0, 5, 11) == 6);
    for (int d : {2, 3, 11, 16}) {
        for (int a = 0; a < d; ++a) {
            CHECK(mod_add(a, 0, d) == a);
            CHECK(mod_sub(a, a, d) == 0);
            for (int b = 0; b < d; ++b) {
                CHECK(mod_add(a, b, d) == (a + b) % d);
                CHECK(mod_sub(mod_add(a, b, d), b, d) == a);
            }
        }
    }
    CHECK_THROWS_AS(mod_add(0, 0, 1), InvalidDimensionError);
    CHECK_THROWS_AS(mod_add(2, 0, 2), InvalidDigitError);
}

TEST_CASE("input bound h is half the dimension") {
    CHECK(DimensionParams::for_dimension(2).h == 1);
    CHECK(DimensionParams::for_dimension(11).h == 5);
    CHECK(DimensionParams::for_dimension(16).h == 8);
    for (int d = 2; d <= 20; ++d) {
        const auto dims = DimensionParams::for_dimension(d);
        CHECK(dims.h == (d % 2 == 0 ? d / 2 : (d - 1) / 2));
    }
    CHECK_THROWS_AS(DimensionParams::for_dimension(1), InvalidDimensionError);
}

TEST_CASE("fourier_state matches the explicit formula") {
    const double s2 = 1.0 / std::sqrt(2.0);
    const auto f0 = fourier_state(0, 2);
    CHECK(close(f0.amplitudes()[0], s2));
    CHECK(close(f0.amplitudes()[1], s2));
    const auto f1 = fourier_state(1, 2);
    CHECK(close(f1.amplitudes()[0], s2));
    CHECK(close(f1.amplitudes()[1], -s2));
    const double s3 = 1.0 / std::sqrt(3.0);
    const auto g = fourier_state(1, 3);
    CHECK(close(g.amplitudes()[0], s3));
    CHECK(close(g.amplitudes()[1], s3 * phase(1.0 / 3.0)));
    CHECK(close(g.amplitudes()[2], s3 * phase(2.0 / 3.0)));
    CHECK_THROWS_AS(fourier_state(3, 3), InvalidDigitError);
}

TEST_CASE("bell_state places phased amplitudes on the correlated diagonal") {
    const double s2 = 1.0 / std::sqrt(2.0);
    const auto b00 = bell_state(0, 0, 2);
    CHECK(close(b00.amplitudes()[0], s2)); // |00>
    CHECK(close(b00.amplitudes()[3], s2)); // |11>
    CHECK(close(b00.amplitudes()[1], 0.0));
    CHECK(close(b00.amplitudes()[2], 0.0));
    const auto b10 = bell_state(1, 0, 2);
    CHECK(close(b10.amplitudes()[0], s2));
    CHECK(close(b10.amplitudes()[3], -s2));
    const double s3 = 1.0 / std::sqrt(3.0);
    const auto b01 = bell_state(0, 1, 3);
    CHECK(close(b01.amplitudes()[0 * 3 + 1], s3)); // |01>
    CHECK(close(b01.amplitudes()[1 * 3 + 2], s3)); // |12>
    CHECK(close(b01.amplitudes()[2 * 3 + 0], s3)); // |20>
    CHECK(b01.norm_sq() == doctest::Approx(1.0).epsilon(1e-12));
    CHECK_THROWS_AS(bell_state(0, 3, 3), InvalidDigitError);
}

TEST_CASE("state construction enforces normalization and shape") {
    CHECK_THROWS_AS(AmplitudeState({2}, {cxd{1.0, 0.0}, cxd{1.0, 0.0}}), NormalizationError);
    CHECK_THROWS_AS(AmplitudeState({2}, {cxd{1.0, 0.0}}), InvalidDimensionError);
    CHECK_THROWS_AS(AmplitudeState({1}, {cxd{1.0, 0.0}}), InvalidDimensionError);
    const auto ok = AmplitudeState::basis_state(4, 7);
    CHECK(ok.size() == 7);
    CHECK(close(ok.amplitudes()[4], 1.0));
}

TEST_CASE("the two bases are mutually unbiased") {
    for (int d = 2; d <= 16; ++d) {
        for (int tprime = 0; tprime < d; ++tprime) {
            const auto probs = outcome_probabilities(fourier_state(tprime, d), 0,
                                                     BasisChoice::T1);
            for (int t = 0; t < d; ++t)
                CHECK(probs[t] == doctest::Approx(1.0 / d).epsilon(1e-9));
        }
    }
}

TEST_CASE("forward then inverse transform returns the input") {
    for (int d : {2, 5, 11}) {
        for (int value = 0; value < d; ++value) {
            const auto start = AmplitudeState::basis_state(value, d);
            const auto round =
                apply_fourier(apply_fourier(start, 0, false), 0, true);
            CHECK(fidelity(start, round) == doctest::Approx(1.0).epsilon(1e-9));
        }
    }
    // Also through an entangled pair, on one subsystem only.
    const auto pair = bell_state(2, 3, 5);
    const auto round = apply_fourier(apply_fourier(pair, 1, false), 1, true);
    CHECK(fidelity(pair, round) == doctest::Approx(1.0).epsilon(1e-9));
}

TEST_CASE("measuring an eigenstate of its own basis is deterministic") {
    RandomStream rng(101);
    for (int trial = 0; trial < 50; ++trial) {
        const auto rec = measure(fourier_state(3, 7), 0, BasisChoice::T2, rng);
        CHECK(rec.outcome == 3);
        CHECK_FALSE(rec.post_state.has_value());
    }
    for (int trial = 0; trial < 50; ++trial) {
        const auto rec = measure(AmplitudeState::basis_state(2, 5), 0, BasisChoice::T1, rng);
        CHECK(rec.outcome == 2);
    }
}

TEST_CASE("pair measurements obey the correlation m2 = m1 + v") {
    RandomStream rng(202);
    for (int d : {2, 3, 11, 16}) {
        for (int v = 0; v < d; v += (d > 4 ? 3 : 1)) {
            for (int trial = 0; trial < 200; ++trial) {
                const auto first = measure(bell_state(1 % d, v, d), 0, BasisChoice::T1, rng);
                REQUIRE(first.post_state.has_value());
                const auto second = measure(*first.post_state, 0, BasisChoice::T1, rng);
                CHECK(second.outcome == mod_add(first.outcome, v, d));
                CHECK(mod_add(mod_sub(first.outcome, second.outcome, d), v, d) == 0);
            }
        }
    }
}

TEST_CASE("sampled frequencies follow the Born rule") {
    RandomStream rng(303);
    int zeros = 0;
    const int trials = 10000;
    for (int i = 0; i < trials; ++i)
        zeros += measure(fourier_state(0, 2), 0, BasisChoice::T1, rng).outcome == 0;
    // Oracle: the amplitude magnitudes say exactly 1/2.
    const auto probs = outcome_probabilities(fourier_state(0, 2), 0, BasisChoice::T1);
    CHECK(probs[0] == doctest::Approx(0.5).epsilon(1e-12));
    CHECK(std::abs(zeros / static_cast<double>(trials) - probs[0]) < 0.02);
}

TEST_CASE("the pair shortcut matches the exact pair distribution") {
    RandomStream rng(404);
    const int d = 11, v = 3;
    std::vector<long long> m1_counts(d, 0);
    for (int i = 0; i < 100000; ++i) {
        const auto [m1, m2] = measure_pair_computational(0, v, d, rng);
        CHECK(m2 == mod_add(m1, v, d));
        ++m1_counts[m1];
    }
    CHECK(chi_square_uniform_pvalue(m1_counts) > 0.01);
}

TEST_CASE("the phase index u does not affect measurement statistics") {
    const int d = 7, v = 4;
    const auto base = outcome_probabilities(bell_state(0, v, d), 0, BasisChoice::T1);
    for (int u = 1; u < d; ++u) {
        const auto probs = outcome_probabilities(bell_state(u, v, d), 0, BasisChoice::T1);
        for (int t = 0; t < d; ++t)
            CHECK(probs[t] == doctest::Approx(base[t]).epsilon(1e-9));
    }
}

TEST_CASE("projection renormalizes and prices in the outcome probability") {
    const auto pair = bell_state(0, 1, 3);
    const auto [prob, post] = project(pair, 0, BasisChoice::T1, 2);
    CHECK(prob == doctest::Approx(1.0 / 3.0).epsilon(1e-12));
    REQUIRE(post.has_value());
    // Remaining qudit must now be |2 + 1 mod 3> = |0>.
    CHECK(fidelity(*post, AmplitudeState::basis_state(0, 3)) ==
          doctest::Approx(1.0).epsilon(1e-12));
    const auto [p_impossible, none] = project(pair, 1, BasisChoice::T1, 1);
    // Outcome 1 on the second qudit pairs only with 0 on the first.
    CHECK(p_impossible == doctest::Approx(1.0 / 3.0).epsilon(1e-12));
    CHECK(none.has_value());
}

TEST_CASE("tensor products and unitary application agree with direct construction") {
    const auto left = AmplitudeState::basis_state(1, 3);
    const auto right = AmplitudeState::basis_state(2, 3);
    const auto product = left.tensor(right);
    CHECK(product.subsystem_count() == 2);
    CHECK(close(product.amplitudes()[1 * 3 + 2], 1.0));

    // Fourier on the second subsystem of |1>|2> must equal |1> x F|2>.
    const auto transformed = apply_fourier(product, 1, false);
    const auto expected = left.tensor(fourier_state(2, 3));
    CHECK(fidelity(transformed, expected) == doctest::Approx(1.0).epsilon(1e-12));

    // Same through the generic matrix path.
    const int subs[1] = {1};
    const auto via_matrix = apply_unitary(product, fourier_matrix(3), subs);
    CHECK(fidelity(via_matrix, expected) == doctest::Approx(1.0).epsilon(1e-12));
}

TEST_CASE("inner products detect orthogonality") {
    CHECK(std::abs(inner_product(AmplitudeState::basis_state(0, 4),
                                 AmplitudeState::basis_state(3, 4))) < 1e-12);
    CHECK(std::abs(inner_product(fourier_state(1, 5), fourier_state(1, 5)) - cxd{1.0, 0.0}) <
          1e-12);
}

}
