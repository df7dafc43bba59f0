#include <catch2/catch_amalgamated.hpp>

#include <cmath>

#include "conefix/concavity.hpp"
#include "conefix/errors.hpp"

using namespace conefix;
using Catch::Matchers::WithinRel;
using Catch::Matchers::WithinAbs;

TEST_CASE("phi_eval examples")
{
    CHECK(phi_eval(Profile::power(0.5), 0.25) == 0.5);
    CHECK(phi_eval(Profile::power(0.3), 1.0) == 1.0);
    CHECK(phi_eval(Profile::power(0.3), 0.0) == 0.0);
    CHECK_THAT(phi_eval(Profile::summix(Profile::power(0.5), 1.0), 0.25), WithinRel(0.375, 1e-15));
    CHECK_THROWS_AS(phi_eval(Profile::power(0.5), 1.5), DomainError);
    CHECK_THROWS_AS(Profile::power(1.0), DomainError);
    CHECK_THROWS_AS(Profile::summix(Profile::power(0.5), -1.0), DomainError);
}

TEST_CASE("phi_iterate examples")
{
    const Profile p = Profile::power(0.5);
    CHECK(phi_iterate(p, 0.3, 0) == 0.3);
    CHECK_THAT(phi_iterate(p, 1.0 / 16.0, 2), WithinRel(0.5, 1e-15));
    for (int n = 0; n < 10; ++n) CHECK_THAT(phi_iterate(p, 0.2, n), WithinRel(std::pow(0.2, std::pow(0.5, n)), 1e-14));
}

TEST_CASE("solve_tau examples")
{
    const Profile p = Profile::power(0.5);
    CHECK_THAT(solve_tau(p, 0.5), WithinRel(0.25, 1e-13));
    CHECK_THAT(solve_tau(p, 1.0 / 3.0), WithinRel(1.0 / 9.0, 1e-13));
    CHECK_THAT(solve_tau(Profile::power(0.2), 0.4), WithinRel(std::pow(0.4, 1.25), 1e-12));
    CHECK_THROWS_AS(solve_tau(p, 1.0), DomainError);
    CHECK_THROWS_AS(solve_tau(p, 0.0), DomainError);
}

TEST_CASE("solve_delta examples")
{
    const Profile p = Profile::power(0.5);
    CHECK_THAT(solve_delta(p, 2.0), WithinRel(4.0, 1e-12));
    CHECK_THAT(solve_delta(p, 1.5), WithinRel(2.25, 1e-12));
    CHECK_THAT(solve_delta(Profile::power(0.75), 3.0), WithinRel(81.0, 1e-11));
    CHECK_THROWS_AS(solve_delta(p, 1.0), DomainError);
}

TEST_CASE("rate_k examples")
{
    const Profile p = Profile::power(0.5);
    CHECK_THAT(rate_k(p, 1.0 / 3.0), WithinRel((1.0 - std::sqrt(1.0 / 3.0)) / (2.0 / 3.0), 1e-14));
    CHECK_THAT(rate_k(p, 0.25), WithinRel(2.0 / 3.0, 1e-14));
    CHECK_THAT(rate_k(Profile::power(0.3), 1.0 - 1e-6), WithinAbs(0.3, 1e-4));
}

TEST_CASE("rate_k_general examples")
{
    const Profile p = Profile::power(0.5);
    CHECK_THAT(rate_k_general(p, 0.25, 4.0), WithinRel(2.0 / 3.0, 1e-14));
    CHECK_THAT(rate_k_general(p, 0.81, 2.0), WithinRel((1.0 - std::sqrt(0.5)) / 0.5, 1e-14));
    CHECK_THAT(rate_k_general(p, 1.0 - 1e-6, 1.0 + 1e-6), WithinAbs(0.5, 1e-4));
    CHECK_THROWS_AS(rate_k_general(p, 0.5, 0.9), DomainError);
}

TEST_CASE("shipped profiles validate")
{
    for (const Profile& p : {Profile::power(0.2), Profile::power(0.5), Profile::power(0.75),
                             Profile::summix(Profile::power(0.5), 0.5), Profile::summix(Profile::power(0.3), 2.0)}) {
        const ProfileCheck c = validate_profile(p);
        INFO(to_string(p) << ": " << c.message);
        CHECK(c.ok);
    }
}

TEST_CASE("profile text round trip")
{
    CHECK(parse_profile("power:0.5") == Profile::power(0.5));
    CHECK(parse_profile("summix:0.5:1") == Profile::summix(Profile::power(0.5), 1.0));
    CHECK(parse_profile(to_string(Profile::summix(Profile::power(0.25), 0.5))) ==
          Profile::summix(Profile::power(0.25), 0.5));
    CHECK_THROWS_AS(parse_profile("log:2"), ValidationError);
    CHECK_THROWS_AS(parse_profile("power:1.5"), ValidationError);
}
