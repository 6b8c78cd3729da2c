#include <cmath>
#include <cstdlib>

#include "doctest.h"
#include "gpylab/dist_level.hpp"
#include "gpylab/errors.hpp"
#include "oracles.hpp"

using namespace gpylab;
using namespace gpylab::dist;

TEST_SUITE("dist") {

TEST_CASE("euler phi") {
    for (std::uint64_t q = 1; q <= 500; ++q) {
        std::uint64_t c = 0;
        for (std::uint64_t a = 1; a <= q; ++a) c += oracle::gcd(a, q) == 1;
        CHECK(euler_phi(q) == c);
    }
}

TEST_CASE("progression sums partition theta") {
    const auto is = oracle::naive_sieve(200000);
    const double total = oracle::theta_up_to(200000, is);
    sieve::SieveOptions o;
    o.segment_size = 4096;
    for (std::uint64_t q : {1ULL, 2ULL, 12ULL, 30ULL, 97ULL, 100ULL}) {
        const auto pt = theta_progressions(200000, q, o);
        CHECK(pt.residues.size() == euler_phi(q));
        double s = pt.excluded;
        for (double v : pt.values) s += v;
        CHECK(s == doctest::Approx(total).epsilon(1e-12));
        double a1 = 0.0;
        for (std::uint64_t p = 2; p <= 200000; ++p) {
            if (is[p] && p % q == 1 % q) a1 += std::log(double(p));
        }
        CHECK(pt.values[0] == doctest::Approx(a1).epsilon(1e-12));
    }
}

TEST_CASE("bv sum against brute force") {
    const std::uint64_t x = 20000;
    const auto is = oracle::naive_sieve(x);
    double brute = 0.0;
    for (std::uint64_t q = 1; q <= 20; ++q) {
        double best = 0.0;
        for (std::uint64_t a = 0; a < q; ++a) {
            if (oracle::gcd(a, q) != 1) continue;
            double s = 0.0;
            for (std::uint64_t p = 2; p <= x; ++p) {
                if (is[p] && p % q == a) s += std::log(double(p));
            }
            best = std::max(best, std::abs(s - double(x) / double(euler_phi(q))));
        }
        brute += best;
    }
    CHECK(bv_sum(x, 20) == doctest::Approx(brute).epsilon(1e-10));
}

TEST_CASE("frozen bv values") {
    CHECK(bv_sum(100000, 1) == doctest::Approx(314.610731387449).epsilon(1e-11));
    CHECK(bv_sum(100000, 5) == doctest::Approx(1316.40511248038591).epsilon(1e-11));
    sieve::SieveOptions par;
    par.workers = 4;
    CHECK(bv_sum(100000, 5, par) == bv_sum(100000, 5));
    CHECK_THROWS_AS(bv_sum(1000, 200), BudgetExceeded);
    CHECK_THROWS_AS(bv_sum(1000, 0), PreconditionError);
}

TEST_CASE("Q rule and table") {
    CHECK(q_from_rule(10000, {}) == 1);
    CHECK(q_from_rule(1'000'000'000'000ULL, {0.5, 0.0}) == 1'000'000);
    const std::vector<std::uint64_t> xs{10000, 100000};
    const std::vector<double> powers{1.0, 2.0};
    const auto t = bv_decay_table(xs, {}, powers);
    REQUIRE(t.rows.size() == 2);
    CHECK(t.rows[0].normalized.size() == 2);
    CHECK(t.rows[1].normalized[0] ==
          doctest::Approx(t.rows[1].bv * std::log(1e5) / 1e5));
    const std::vector<std::uint64_t> backwards{100000, 10000};
    CHECK_THROWS_AS(bv_decay_table(backwards, {}, powers), PreconditionError);
}

}  // TEST_SUITE
