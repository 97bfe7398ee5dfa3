#include "doctest.h"

#include "mqpc/errors.hpp"
#include "mqpc/metrics.hpp"
#include "mqpc/protocol_engine.hpp"

using namespace mqpc;

TEST_SUITE("metrics") {

TEST_CASE("rationals reduce to lowest terms and render compactly") {
    CHECK(Rational(1, 16) == Rational(2, 32));
    CHECK(Rational(4, 8).num == 1);
    CHECK(Rational(4, 8).den == 2);
    CHECK(Rational(0, 5).num == 0);
    CHECK(Rational(0, 5).den == 1);
    CHECK(Rational(1, 16).str() == "1/16");
    CHECK(Rational(6, 3).str() == "2");
    CHECK(Rational(0, 7).str() == "0");
    CHECK_FALSE(Rational(1, 3) == Rational(1, 4));
    CHECK_THROWS_AS(Rational(1, 0), OutOfDomainError);
    CHECK_THROWS_AS(Rational(1, -2), OutOfDomainError);
    CHECK_THROWS_AS(Rational(-1, 2), OutOfDomainError);
}

TEST_CASE("the closed-form efficiency is one secret per 4n transmissions") {
    for (int n = 2; n <= 10; ++n) {
        const auto report = efficiency_closed_form(n);
        CHECK(report.x == 2LL * n);
        CHECK(report.y == 2LL * n);
        CHECK(report.z == 1);
        CHECK(report.eta == Rational(1, 4LL * n));
    }
    CHECK(efficiency_closed_form(4).eta.str() == "1/16");
    CHECK_THROWS_AS(efficiency_closed_form(1), OutOfDomainError);
    CHECK_THROWS_AS(efficiency_closed_form(0), OutOfDomainError);
}

TEST_CASE("transcript counters reproduce the closed form exactly") {
    for (int n : {2, 3, 4, 7}) {
        ProtocolParams params;
        params.dims = DimensionParams::for_dimension(7);
        params.n = n;
        params.L = 2;
        params.seed = 31 + static_cast<std::uint64_t>(n);
        std::vector<UserSecret> secrets(static_cast<std::size_t>(n), UserSecret{1, -1});
        const auto run = run_protocol(params, secrets, Honest{});
        REQUIRE(run.completed());
        const auto measured = efficiency_from_transcript(run.transcript);
        const auto closed = efficiency_closed_form(n);
        CHECK(measured.x == closed.x);
        CHECK(measured.y == closed.y);
        CHECK(measured.z == closed.z);
        CHECK(measured.eta == closed.eta);
    }
}

TEST_CASE("decoy count does not change the efficiency accounting") {
    for (int L : {1, 4, 9}) {
        ProtocolParams params;
        params.dims = DimensionParams::for_dimension(5);
        params.n = 3;
        params.L = L;
        params.seed = 100 + static_cast<std::uint64_t>(L);
        std::vector<UserSecret> secrets{{0, -1}, {1, -1}, {2, -1}};
        const auto run = run_protocol(params, secrets, Honest{});
        REQUIRE(run.completed());
        CHECK(efficiency_from_transcript(run.transcript).eta == Rational(1, 12));
    }
}

TEST_CASE("aborted runs have no defined efficiency") {
    ProtocolParams params;
    params.dims = DimensionParams::for_dimension(3);
    params.n = 2;
    params.L = 4;
    params.seed = 5;
    const auto run =
        run_protocol(params, {{0, -1}, {1, -1}}, InterceptResend{});
    REQUIRE_FALSE(run.completed());
    CHECK_THROWS_AS(efficiency_from_transcript(run.transcript), IncompleteRunError);
    CHECK_THROWS_AS(efficiency_from_transcript(Transcript{}), IncompleteRunError);
}

}
