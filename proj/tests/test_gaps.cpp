#include <cmath>
#include <sstream>

#include "doctest.h"
#include "gpylab/errors.hpp"
#include "gpylab/gaps.hpp"
#include "oracles.hpp"

using namespace gpylab;
using namespace gpylab::gaps;

namespace {

std::vector<std::uint64_t> primes_to(std::uint64_t n) {
    const auto is = oracle::naive_sieve(n);
    std::vector<std::uint64_t> v;
    for (std::uint64_t i = 2; i <= n; ++i) {
        if (is[i]) v.push_back(i);
    }
    return v;
}

sieve::SieveOptions small_segments() {
    sieve::SieveOptions o;
    o.segment_size = 1000;
    return o;
}

}  // namespace

TEST_SUITE("gaps") {

TEST_CASE("histogram") {
    const auto ps = primes_to(200000);
    const std::vector<double> edges{0.5, 1.0, 2.0};
    std::vector<std::uint64_t> expect(4, 0);
    std::uint64_t total = 0;
    for (std::size_t i = 1; i + 1 < ps.size() && ps[i] <= 100000; ++i) {
        const double g = double(ps[i + 1] - ps[i]) / std::log(double(ps[i]));
        std::size_t b = 0;
        while (b < edges.size() && g > edges[b]) ++b;
        ++expect[b];
        ++total;
    }
    const auto h = gap_histogram(100000, edges, small_segments());
    CHECK(h.counts == expect);
    CHECK(h.total_gaps == total);
    CHECK(gap_histogram(100000, std::vector<double>{}).counts.size() == 1);
    CHECK_THROWS_AS(gap_histogram(100000, std::vector<double>{1.0, 0.5}), PreconditionError);
    CHECK_THROWS_AS(gap_histogram(50, edges), PreconditionError);
}

TEST_CASE("small gaps and exponential table") {
    const auto ps = primes_to(300000);
    const std::uint64_t N = 100000;
    for (double eta : {0.3, 1.0}) {
        std::uint64_t c = 0;
        for (std::size_t i = 0; i + 1 < ps.size(); ++i) {
            if (ps[i] > N && ps[i] <= 2 * N && double(ps[i + 1] - ps[i]) <= eta * std::log(double(N))) ++c;
        }
        CHECK(small_gap_count(N, eta, small_segments()) == c);
    }
    const std::vector<double> etas{0.5, 1.0};
    const auto t = exponential_law_table(100000, etas, small_segments());
    CHECK(t.prime_count == 9592);
    for (const auto& row : t.rows) {
        std::uint64_t c = 0;
        for (std::size_t i = 0; ps[i] <= 100000; ++i) c += double(ps[i + 1] - ps[i]) <= row.eta * std::log(double(ps[i]));
        CHECK(row.count == c);
        CHECK(row.conjectured == doctest::Approx(1.0 - std::exp(-row.eta)));
        CHECK(row.diff == doctest::Approx(row.fraction - row.conjectured));
    }
}

TEST_CASE("q count against direct enumeration") {
    const std::uint64_t N = 20000;
    const auto is = oracle::naive_sieve(2 * N + 200);
    for (std::uint64_t h : {2ULL, 10ULL, 30ULL}) {
        std::uint64_t Q = 0;
        for (std::uint64_t n = N + 1; n <= 2 * N; ++n) {
            int c = 0;
            for (std::uint64_t m = n + 1; m <= n + h; ++m) c += is[m];
            Q += c >= 2;
        }
        const auto r = q_count(N, h, small_segments());
        CHECK(r.Q == Q);
        CHECK(r.check);
        CHECK(r.Q <= h * r.inside_gaps + r.boundary);
    }
}

TEST_CASE("prime pairs") {
    const std::uint64_t N = 30000;
    const auto is = oracle::naive_sieve(2 * N + 10);
    std::uint64_t c = 0;
    for (std::uint64_t n = N + 1; n <= 2 * N; ++n) c += is[n] && is[n + 2];
    const auto r = prime_pair_count(N, 0, 2, small_segments());
    CHECK(r.count == c);
    CHECK(r.singular == doctest::Approx(1.3203237).epsilon(1e-6));
    CHECK(r.theta_sum <= r.sieve_bound);
    CHECK(r.hl_ratio > 0.5);
    CHECK(r.hl_ratio < 2.0);
    const auto odd = prime_pair_count(N, 0, 3);
    CHECK(odd.singular == 0.0);
    CHECK(std::isnan(odd.hl_ratio));
    CHECK_THROWS_AS(prime_pair_count(N, 2, 2), PreconditionError);
}

TEST_CASE("sparsity") {
    const auto ps = primes_to(200000);
    const auto r = sparsity_ratio(100000, 6.0, small_segments());
    std::uint64_t c = 0;
    for (std::size_t i = 0; ps[i] <= 100000; ++i) c += ps[i + 1] - ps[i] <= 6;
    CHECK(r.count == c);
    CHECK(r.prime_count == 9592);
    CHECK(r.ratio == doctest::Approx(double(c) / (6.0 / std::log(1e5) * 9592)));
    CHECK_THROWS_AS(sparsity_ratio(100000, 2.0), PreconditionError);
}

TEST_CASE("csv schemas") {
    std::ostringstream os;
    write_histogram_csv(os, gap_histogram(1000, std::vector<double>{1.0}));
    CHECK(os.str().rfind("# gpylab-csv gap_histogram v1\nx,bin_lo,bin_hi,count\n", 0) == 0);
}

}  // TEST_SUITE
