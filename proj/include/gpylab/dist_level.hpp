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

#pragma once

#include <cstdint>
#include <iosfwd>
#include <span>
#include <vector>

#include "gpylab/sieve.hpp"

namespace gpylab::dist {

// theta(x; q, a) for each reduced residue 1 <= a <= q.
struct ProgressionTheta {
    std::uint64_t x = 0;
    std::uint64_t q = 0;
    std::vector<std::uint64_t> residues;
    std::vector<double> values;
    // sum of log p over primes p | q, p <= x; these sit outside reduced classes.
    double excluded = 0.0;
};

ProgressionTheta theta_progressions(std::uint64_t x, std::uint64_t q, const sieve::SieveOptions& opts = {});

std::uint64_t euler_phi(std::uint64_t q);

// sum over q <= Q of max over reduced a of |theta(x; q, a) - x / phi(q)|.
// Requires 1 <= Q <= x^(2/3) and x < 2^32.
double bv_sum(std::uint64_t x, std::uint64_t Q, const sieve::SieveOptions& opts = {});

// Q = floor(x^exponent / (log x)^log_power), clamped to at least 1.
struct QRule {
    double exponent = 0.5;
    double log_power = 3.0;
};

std::uint64_t q_from_rule(std::uint64_t x, const QRule& rule);

struct BvRow {
    std::uint64_t x = 0;
    std::uint64_t Q = 0;
    double bv = 0.0;
    std::vector<double> normalized;  // bv (log x)^A / x, one per A
};

struct BvTable {
    QRule rule;
    std::vector<double> powers;  // the A values
    std::vector<BvRow> rows;
};

BvTable bv_decay_table(std::span<const std::uint64_t> xs, const QRule& rule, std::span<const double> powers,
                       const sieve::SieveOptions& opts = {});

void write_bv_csv(std::ostream& out, const BvTable& table);
void write_progressions_csv(std::ostream& out, const ProgressionTheta& pt);

}  // namespace gpylab::dist
