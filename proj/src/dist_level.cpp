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

#include "gpylab/dist_level.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <ostream>

#include <fmt/format.h>

#include "gpylab/csv.hpp"
#include "gpylab/errors.hpp"
#include "gpylab/numeric.hpp"
#include "gpylab/parallel.hpp"

namespace gpylab::dist {

namespace {

constexpr std::uint64_t kModuliPerBlock = 64;

}  // namespace

std::uint64_t euler_phi(std::uint64_t q) {
    require(q >= 1, "euler_phi requires q >= 1");
    std::vector<std::uint64_t> primes;
    sieve::distinct_primes_trial(q, q, primes);
    std::uint64_t phi = q;
    for (auto p : primes) phi = phi / p * (p - 1);
    return phi;
}

ProgressionTheta theta_progressions(std::uint64_t x, std::uint64_t q, const sieve::SieveOptions& opts) {
    require(q >= 1, "theta_progressions requires q >= 1");
    require(x >= q, "theta_progressions requires x >= q");
    using Sums = std::vector<CompensatedSum>;
    auto parts = sieve::map_segments<Sums>(1, x + 1, opts, [&](const sieve::SieveSegment& seg) {
        Sums s(q);
        seg.for_each_prime([&](std::uint64_t p) { s[p % q].add(std::log(static_cast<double>(p))); });
        return s;
    });
    Sums total(q);
    for (const auto& s : parts) {
        for (std::uint64_t a = 0; a < q; ++a) total[a].add(s[a]);
    }
    ProgressionTheta pt;
    pt.x = x;
    pt.q = q;
    CompensatedSum excluded;
    for (std::uint64_t a = 1; a <= q; ++a) {
        const std::uint64_t r = a % q;
        if (std::gcd(a, q) == 1) {
            pt.residues.push_back(a);
            pt.values.push_back(total[r].value());
        } else {
            // Only a prime dividing q can land here, and only in class p mod q.
            excluded.add(total[r]);
        }
    }
    pt.excluded = excluded.value();
    return pt;
}

double bv_sum(std::uint64_t x, std::uint64_t Q, const sieve::SieveOptions& opts) {
    require(Q >= 1, "bv_sum requires Q >= 1");
    require(x < sieve::kSpfLimit, "bv_sum requires x < 2^32");
    if (static_cast<double>(Q) > std::pow(static_cast<double>(x), 2.0 / 3.0)) {
        throw BudgetExceeded(fmt::format("Q = {} exceeds x^(2/3) for x = {}", Q, x));
    }
    const auto primes = sieve::primes_up_to(x, opts);
    std::vector<double> logs(primes.size());
    for (std::size_t i = 0; i < primes.size(); ++i) logs[i] = std::log(static_cast<double>(primes[i]));
    const double xd = static_cast<double>(x);

    const std::size_t n_blocks = (Q + kModuliPerBlock - 1) / kModuliPerBlock;
    auto blocks = parallel_map<std::vector<double>>(n_blocks, opts.workers, [&](std::size_t b) {
        const std::uint64_t q_lo = 1 + b * kModuliPerBlock;
        const std::uint64_t q_hi = std::min<std::uint64_t>(Q, q_lo + kModuliPerBlock - 1);
        std::vector<std::vector<CompensatedSum>> sums;
        for (std::uint64_t q = q_lo; q <= q_hi; ++q) sums.emplace_back(q);
        for (std::size_t i = 0; i < primes.size(); ++i) {
            for (std::uint64_t q = q_lo; q <= q_hi; ++q) sums[q - q_lo][primes[i] % q].add(logs[i]);
        }
        std::vector<double> err;
        for (std::uint64_t q = q_lo; q <= q_hi; ++q) {
            const double expected = xd / static_cast<double>(euler_phi(q));
            double worst = 0.0;
            for (std::uint64_t a = 0; a < q; ++a) {
                if (std::gcd(a, q) != 1) continue;
                worst = std::max(worst, std::fabs(sums[q - q_lo][a].value() - expected));
            }
            err.push_back(worst);
        }
        return err;
    });
    CompensatedSum total;
    for (const auto& blk : blocks) {
        for (double e : blk) total.add(e);
    }
    return total.value();
}

std::uint64_t q_from_rule(std::uint64_t x, const QRule& rule) {
    const double lx = std::log(static_cast<double>(x));
    const double q = std::pow(static_cast<double>(x), rule.exponent) / std::pow(lx, rule.log_power);
    return q < 1.0 ? 1 : static_cast<std::uint64_t>(std::floor(q));
}

BvTable bv_decay_table(std::span<const std::uint64_t> xs, const QRule& rule, std::span<const double> powers,
                       const sieve::SieveOptions& opts) {
    for (std::size_t i = 1; i < xs.size(); ++i) require(xs[i - 1] < xs[i], "xs must be ascending");
    BvTable table;
    table.rule = rule;
    table.powers.assign(powers.begin(), powers.end());
    for (auto x : xs) {
        require(x >= 2, "bv_decay_table requires x >= 2");
        BvRow row;
        row.x = x;
        row.Q = q_from_rule(x, rule);
        require(static_cast<double>(row.Q) <= std::sqrt(static_cast<double>(x)), "Q rule must give Q <= x^(1/2)");
        row.bv = bv_sum(x, row.Q, opts);
        const double lx = std::log(static_cast<double>(x));
        for (double A : powers) row.normalized.push_back(row.bv * std::pow(lx, A) / static_cast<double>(x));
        table.rows.push_back(std::move(row));
    }
    return table;
}

void write_bv_csv(std::ostream& out, const BvTable& table) {
    std::vector<std::string> columns{"x", "Q", "bv_sum"};
    for (double A : table.powers) columns.push_back(fmt::format("norm_A{}", A));
    csv::write_preamble(out, "bv", 1, columns);
    for (const auto& r : table.rows) {
        out << csv::cell(r.x) << ',' << csv::cell(r.Q) << ',' << csv::cell(r.bv);
        for (double v : r.normalized) out << ',' << csv::cell(v);
        out << '\n';
    }
}

void write_progressions_csv(std::ostream& out, const ProgressionTheta& pt) {
    csv::write_preamble(out, "progressions", 1, {"x", "q", "a", "theta"});
    for (std::size_t i = 0; i < pt.residues.size(); ++i) csv::write_row(out, pt.x, pt.q, pt.residues[i], pt.values[i]);
}

}  // namespace gpylab::dist
