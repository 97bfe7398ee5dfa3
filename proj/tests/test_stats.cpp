#include <cmath>

#include "doctest.h"

#include "mqpc/errors.hpp"
#include "mqpc/stats.hpp"

using namespace mqpc;

TEST_SUITE("stats") {

TEST_CASE("the Pearson statistic against uniform expectations") {
    CHECK(chi_square_statistic({3, 1}) == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(chi_square_statistic({5, 5, 5, 5}) == doctest::Approx(0.0));
    CHECK(chi_square_statistic({8, 0}) == doctest::Approx(8.0).epsilon(1e-12));
    CHECK_THROWS_AS(chi_square_statistic({5}), OutOfDomainError);
    CHECK_THROWS_AS(chi_square_statistic({0, 0}), OutOfDomainError);
}

TEST_CASE("upper-tail p-values match closed forms") {
    // Two degrees of freedom: P(X >= x) = exp(-x/2).
    for (double x : {0.5, 2.0, 7.0})
        CHECK(chi_square_pvalue(x, 2) == doctest::Approx(std::exp(-x / 2.0)).epsilon(1e-10));
    // One degree of freedom: P(Z^2 >= x) = erfc(sqrt(x/2)).
    for (double x : {0.25, 1.0, 3.84})
        CHECK(chi_square_pvalue(x, 1) ==
              doctest::Approx(std::erfc(std::sqrt(x / 2.0))).epsilon(1e-10));
    CHECK(chi_square_pvalue(0.0, 5) == doctest::Approx(1.0));
}

TEST_CASE("the uniformity convenience wires statistic and p-value together") {
    const double p = chi_square_uniform_pvalue({3, 1});
    CHECK(p == doctest::Approx(std::erfc(std::sqrt(0.5))).epsilon(1e-10));
    CHECK(chi_square_uniform_pvalue({100, 100, 100}) == doctest::Approx(1.0));
}

}
