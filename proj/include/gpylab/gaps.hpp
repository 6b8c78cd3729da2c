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

namespace gpylab::gaps {

// Normalized gaps (p_{n+1} - p_n) / log p_n for primes p_n in (2, x]. The gap
// after the last prime <= x reaches past x and is included.
// Bin i < edges.size() is (edges[i-1], edges[i]] with edges[-1] = 0; the last
// bin is the overflow (edges.back(), inf).
struct GapHistogram {
    std::uint64_t x = 0;
    std::vector<double> edges;
    std::vector<std::uint64_t> counts;
    std::uint64_t total_gaps = 0;
};

GapHistogram gap_histogram(std::uint64_t x, std::span<const double> edges, const sieve::SieveOptions& opts = {});

// #{N < p_j <= 2N : p_{j+1} - p_j <= eta log N}.
std::uint64_t small_gap_count(std::uint64_t N, double eta, const sieve::SieveOptions& opts = {});

struct ExpLawRow {
    double eta = 0.0;
    std::uint64_t count = 0;  // p_n <= x with p_{n+1} - p_n <= eta log p_n
    double fraction = 0.0;    // count / pi(x)
    double conjectured = 0.0; // 1 - e^-eta
    double diff = 0.0;        // fraction - conjectured
};

struct ExpLawTable {
    std::uint64_t x = 0;
    std::uint64_t prime_count = 0;
    std::vector<ExpLawRow> rows;
};

ExpLawTable exponential_law_table(std::uint64_t x, std::span<const double> etas,
                                  const sieve::SieveOptions& opts = {});

// Q = #{N < n <= 2N : (n, n+h] holds at least two primes}. Every such n is
// charged to the first prime p_j > n, whose successor is within h. At most h
// values of n share one p_j, so
//   Q <= h * inside + boundary
// where inside counts gaps <= h with p_j in (N, 2N] and boundary counts the n
// charged to some p_j > 2N.
struct QCountReport {
    std::uint64_t N = 0;
    std::uint64_t h = 0;
    std::uint64_t Q = 0;
    std::uint64_t inside_gaps = 0;
    std::uint64_t boundary = 0;
    bool check = false;
};

QCountReport q_count(std::uint64_t N, std::uint64_t h, const sieve::SieveOptions& opts = {});

struct PairReport {
    std::uint64_t N = 0;
    std::int64_t h1 = 0;
    std::int64_t h2 = 0;
    std::uint64_t count = 0;
    double singular = 0.0;
    // count / (S N / log^2(1.5 N)); NaN when S = 0.
    double hl_ratio = 0.0;
    // sum of theta(n + h1) theta(n + h2) and the bound 2^2 2! S N (1 + 0.5).
    double theta_sum = 0.0;
    double sieve_bound = 0.0;
};

// Throws InvariantViolation if theta_sum exceeds sieve_bound.
PairReport prime_pair_count(std::uint64_t N, std::int64_t h1, std::int64_t h2, const sieve::SieveOptions& opts = {});

struct GapCount {
    std::uint64_t primes = 0;  // pi(x)
    std::uint64_t small = 0;   // p_n <= x with p_{n+1} - p_n <= h
};

GapCount gaps_at_most(std::uint64_t x, double h, const sieve::SieveOptions& opts = {});

struct SparsityReport {
    std::uint64_t x = 0;
    double h = 0.0;
    std::uint64_t count = 0;  // p_n <= x with p_{n+1} - p_n <= h
    std::uint64_t prime_count = 0;
    double ratio = 0.0;  // count / (min(h / log x, 1) pi(x))
};

SparsityReport sparsity_ratio(std::uint64_t x, double h, const sieve::SieveOptions& opts = {});

void write_histogram_csv(std::ostream& out, const GapHistogram& hist);
void write_gaps_csv(std::ostream& out, const ExpLawTable& table);
void write_small_gaps_csv(std::ostream& out, std::uint64_t N, std::span<const double> etas,
                          std::span<const std::uint64_t> counts);
void write_sparsity_csv(std::ostream& out, std::span<const SparsityReport> rows);
void write_qcount_csv(std::ostream& out, std::span<const QCountReport> rows);
void write_pairs_csv(std::ostream& out, std::span<const PairReport> rows);

}  // namespace gpylab::gaps
