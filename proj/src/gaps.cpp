// Copyright 2026 The gpylab Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "gpylab/gaps.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <ostream>

#include <fmt/format.h>

#include "gpylab/csv.hpp"
#include "gpylab/errors.hpp"
#include "gpylab/numeric.hpp"
#include "gpylab/tuples.hpp"

namespace gpylab::gaps {

namespace {

// Calls f(acc, p, q) for each prime p in [lo, hi) and its successor q, one
// accumulator per grid segment, returned in ascending order.
template <class Acc, class F>
std::vector<Acc> scan_gaps(std::uint64_t lo, std::uint64_t hi, const sieve::SieveOptions& opts, F&& f) {
    if (lo >= hi) return {};
    return sieve::map_segments<Acc>(lo, hi, opts, [&](const sieve::SieveSegment& seg) {
        Acc acc{};
        std::uint64_t prev = 0;
        seg.for_each_prime([&](std::uint64_t p) {
            if (prev) f(acc, prev, p);
            prev = p;
        });
        if (prev) f(acc, prev, sieve::next_prime(prev));
        return acc;
    });
}

void check_edges(std::span<const double> edges) {
    for (std::size_t i = 0; i < edges.size(); ++i) {
        require(std::isfinite(edges[i]) && edges[i] > 0.0, "histogram edges must be positive and finite");
        require(i == 0 || edges[i - 1] < edges[i], "histogram edges must be strictly increasing");
    }
}

}  // namespace

GapHistogram gap_histogram(std::uint64_t x, std::span<const double> edges, const sieve::SieveOptions& opts) {
    require(x >= 100, "gap_histogram requires x >= 100");
    check_edges(edges);
    GapHistogram hist;
    hist.x = x;
    hist.edges.assign(edges.begin(), edges.end());
    hist.counts.assign(edges.size() + 1, 0);
    using Counts = std::vector<std::uint64_t>;
    auto parts = scan_gaps<Counts>(3, x + 1, opts, [&](Counts& c, std::uint64_t p, std::uint64_t q) {
        if (c.empty()) c.assign(edges.size() + 1, 0);
        const double g = static_cast<double>(q - p) / std::log(static_cast<double>(p));
        ++c[std::lower_bound(edges.begin(), edges.end(), g) - edges.begin()];
    });
    for (const auto& c : parts) {
        for (std::size_t i = 0; i < c.size(); ++i) hist.counts[i] += c[i];
    }
    for (auto c : hist.counts) hist.total_gaps += c;
    return hist;
}

std::uint64_t small_gap_count(std::uint64_t N, double eta, const sieve::SieveOptions& opts) {
    require(N >= 1, "small_gap_count requires N >= 1");
    require(eta > 0.0, "small_gap_count requires eta > 0");
    const double h = eta * std::log(static_cast<double>(N));
    auto parts = scan_gaps<std::uint64_t>(N + 1, 2 * N + 1, opts, [&](std::uint64_t& c, std::uint64_t p,
                                                                      std::uint64_t q) {
        if (static_cast<double>(q - p) <= h) ++c;
    });
    std::uint64_t total = 0;
    for (auto c : parts) total += c;
    return total;
}

ExpLawTable exponential_law_table(std::uint64_t x, std::span<const double> etas, const sieve::SieveOptions& opts) {
    require(x >= 10'000, "exponential_law_table requires x >= 10^4");
    for (double e : etas) require(e > 0.0, "eta values must be positive");
    ExpLawTable table;
    table.x = x;
    struct Acc {
        std::uint64_t primes = 0;
        std::vector<std::uint64_t> counts;
    };
    auto parts = scan_gaps<Acc>(2, x + 1, opts, [&](Acc& a, std::uint64_t p, std::uint64_t q) {
        if (a.counts.empty()) a.counts.assign(etas.size(), 0);
        ++a.primes;
        const double g = static_cast<double>(q - p);
        const double lp = std::log(static_cast<double>(p));
        for (std::size_t i = 0; i < etas.size(); ++i) {
            if (g <= etas[i] * lp) ++a.counts[i];
        }
    });
    std::vector<std::uint64_t> counts(etas.size(), 0);
    for (const auto& a : parts) {
        table.prime_count += a.primes;
        for (std::size_t i = 0; i < a.counts.size(); ++i) counts[i] += a.counts[i];
    }
    for (std::size_t i = 0; i < etas.size(); ++i) {
        ExpLawRow row;
        row.eta = etas[i];
        row.count = counts[i];
        row.fraction = static_cast<double>(counts[i]) / static_cast<double>(table.prime_count);
        row.conjectured = -std::expm1(-etas[i]);
        row.diff = row.fraction - row.conjectured;
        table.rows.push_back(row);
    }
    return table;
}

QCountReport q_count(std::uint64_t N, std::uint64_t h, const sieve::SieveOptions& opts) {
    require(N >= 1, "q_count requires N >= 1");
    require(h >= 1, "q_count requires h >= 1");
    QCountReport rep;
    rep.N = N;
    rep.h = h;
    // flags[i] is n = N + 1 + i, covering (N, 2N + h].
    const std::uint64_t base = N + 1;
    auto flags = sieve::prime_flags(base, 2 * N + h + 1, opts);
    auto prime_at = [&](std::uint64_t n) { return flags[n - base] != 0; };

    // next[i]: first prime > base + i inside the flag range, or 0.
    std::vector<std::uint64_t> next(N, 0);
    std::uint64_t upcoming = 0;
    for (std::uint64_t n = 2 * N + h; n > 2 * N; --n) {
        if (prime_at(n)) upcoming = n;
    }
    for (std::uint64_t n = 2 * N; n >= base; --n) {
        next[n - base] = upcoming;
        if (prime_at(n)) upcoming = n;
    }

    for (std::uint64_t n = base; n <= 2 * N; ++n) {
        const std::uint64_t p = next[n - base];
        if (p == 0 || p > n + h) continue;
        // Second prime in (p, n + h]?
        bool two = false;
        for (std::uint64_t m = p + 1; m <= n + h; ++m) {
            if (prime_at(m)) {
                two = true;
                break;
            }
        }
        if (!two) continue;
        ++rep.Q;
        if (p > 2 * N) ++rep.boundary;
    }
    for (std::uint64_t p = base; p <= 2 * N; ++p) {
        if (!prime_at(p)) continue;
        for (std::uint64_t m = p + 1; m <= p + h; ++m) {
            if (prime_at(m)) {
                ++rep.inside_gaps;
                break;
            }
        }
    }
    rep.check = rep.Q <= h * rep.inside_gaps + rep.boundary;
    return rep;
}

PairReport prime_pair_count(std::uint64_t N, std::int64_t h1, std::int64_t h2, const sieve::SieveOptions& opts) {
    require(N >= 1, "prime_pair_count requires N >= 1");
    require(h1 != h2, "prime_pair_count requires h1 != h2");
    require(h1 >= 0 && h2 >= 0, "prime_pair_count requires non-negative shifts");
    PairReport rep;
    rep.N = N;
    rep.h1 = h1;
    rep.h2 = h2;
    const auto lo_h = static_cast<std::uint64_t>(std::min(h1, h2));
    const auto hi_h = static_cast<std::uint64_t>(std::max(h1, h2));
    const std::uint64_t base = N + 1 + lo_h;
    auto flags = sieve::prime_flags(base, 2 * N + 1 + hi_h, opts);
    const std::uint64_t d = hi_h - lo_h;
    CompensatedSum theta;
    for (std::uint64_t n = N + 1; n <= 2 * N; ++n) {
        const std::uint64_t a = n + lo_h, b = n + hi_h;
        if (flags[a - base] && flags[b - base]) {
            ++rep.count;
            theta.add(std::log(static_cast<double>(a)) * std::log(static_cast<double>(b)));
        }
    }
    rep.theta_sum = theta.value();
    const auto H = tuples::Tuple({0, static_cast<std::int64_t>(d)});
    rep.singular = tuples::singular_series(H, std::max<std::uint64_t>(tuples::kDefaultSingularBound, d)).value;
    const double L = std::log(1.5 * static_cast<double>(N));
    const double Nd = static_cast<double>(N);
    rep.hl_ratio = rep.singular > 0.0 ? static_cast<double>(rep.count) / (rep.singular * Nd / (L * L))
                                      : std::numeric_limits<double>::quiet_NaN();
    rep.sieve_bound = 4.0 * 2.0 * rep.singular * Nd * 1.5;
    if (rep.singular > 0.0 && rep.theta_sum > rep.sieve_bound) {
        throw InvariantViolation(fmt::format("pair sieve bound exceeded: {:.6g} > {:.6g}", rep.theta_sum,
                                             rep.sieve_bound));
    }
    return rep;
}

GapCount gaps_at_most(std::uint64_t x, double h, const sieve::SieveOptions& opts) {
    require(x >= 2, "gaps_at_most requires x >= 2");
    auto parts = scan_gaps<GapCount>(2, x + 1, opts, [&](GapCount& a, std::uint64_t p, std::uint64_t q) {
        ++a.primes;
        if (static_cast<double>(q - p) <= h) ++a.small;
    });
    GapCount total;
    for (const auto& a : parts) {
        total.primes += a.primes;
        total.small += a.small;
    }
    return total;
}

SparsityReport sparsity_ratio(std::uint64_t x, double h, const sieve::SieveOptions& opts) {
    require(h > 2.0, "sparsity_ratio requires h > 2");
    require(x >= 3, "sparsity_ratio requires x >= 3");
    SparsityReport rep;
    rep.x = x;
    rep.h = h;
    const auto c = gaps_at_most(x, h, opts);
    rep.prime_count = c.primes;
    rep.count = c.small;
    const double scale = std::min(h / std::log(static_cast<double>(x)), 1.0);
    rep.ratio = static_cast<double>(rep.count) / (scale * static_cast<double>(rep.prime_count));
    return rep;
}

void write_histogram_csv(std::ostream& out, const GapHistogram& hist) {
    csv::write_preamble(out, "gap_histogram", 1, {"x", "bin_lo", "bin_hi", "count"});
    for (std::size_t i = 0; i < hist.counts.size(); ++i) {
        const double lo = i == 0 ? 0.0 : hist.edges[i - 1];
        const double hi = i < hist.edges.size() ? hist.edges[i] : std::numeric_limits<double>::infinity();
        csv::write_row(out, hist.x, lo, hi, hist.counts[i]);
    }
}

void write_gaps_csv(std::ostream& out, const ExpLawTable& table) {
    csv::write_preamble(out, "gaps", 1, {"x", "eta", "count", "fraction", "conjectured", "diff"});
    for (const auto& r : table.rows) csv::write_row(out, table.x, r.eta, r.count, r.fraction, r.conjectured, r.diff);
}

void write_small_gaps_csv(std::ostream& out, std::uint64_t N, std::span<const double> etas,
                          std::span<const std::uint64_t> counts) {
    csv::write_preamble(out, "small_gaps", 1, {"N", "eta", "h", "count"});
    for (std::size_t i = 0; i < etas.size(); ++i) {
        csv::write_row(out, N, etas[i], etas[i] * std::log(static_cast<double>(N)), counts[i]);
    }
}

void write_sparsity_csv(std::ostream& out, std::span<const SparsityReport> rows) {
    csv::write_preamble(out, "sparsity", 1, {"x", "h", "count", "prime_count", "ratio"});
    for (const auto& r : rows) csv::write_row(out, r.x, r.h, r.count, r.prime_count, r.ratio);
}

void write_qcount_csv(std::ostream& out, std::span<const QCountReport> rows) {
    csv::write_preamble(out, "qcount", 1, {"N", "h", "Q", "inside_gaps", "boundary", "check"});
    for (const auto& r : rows) csv::write_row(out, r.N, r.h, r.Q, r.inside_gaps, r.boundary, r.check);
}

void write_pairs_csv(std::ostream& out, std::span<const PairReport> rows) {
    csv::write_preamble(out, "pairs", 1, {"N", "h1", "h2", "count", "singular", "hl_ratio"});
    for (const auto& r : rows) csv::write_row(out, r.N, r.h1, r.h2, r.count, r.singular, r.hl_ratio);
}

}  // namespace gpylab::gaps
