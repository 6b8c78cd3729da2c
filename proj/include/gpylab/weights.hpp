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
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "gpylab/sieve.hpp"
#include "gpylab/tuples.hpp"

namespace gpylab::weights {

using tuples::Tuple;

// Parameters of the truncated divisor-sum weight. k is the tuple size, l the
// extra power (0 <= l < k), R the divisor cutoff, delta the rough-number
// exponent (primes <= R^delta are sieved out), h the tuple window [1, h].
struct GpyConfig {
    std::uint64_t N = 0;
    int k = 1;
    int l = 0;
    std::uint64_t R = 2;
    double delta = 0.25;
    std::uint64_t h = 1;

    int M() const { return k + l; }
    double rho() const;
    double log_R() const;
    // R^delta; primes up to this value form the rough-number sieve.
    double rough_limit() const;
    void validate() const;
};

struct Budget {
    std::uint64_t max_R = 10'000'000;
    // Estimated N * (log R)^k work units.
    double max_work = 2e10;
    std::uint64_t max_tuples = 1'000'000;
};

struct WeightArray {
    GpyConfig config;
    Tuple H{std::vector<std::int64_t>{0}};
    // values[i] is the weight at n = N + 1 + i.
    std::vector<double> values;
    // mask[i] == 1 iff no prime <= R^delta divides P_H(N + 1 + i).
    std::optional<std::vector<std::uint8_t>> rough_mask;

    double at(std::uint64_t n) const { return values[n - config.N - 1]; }
};

enum class Method { per_n_oracle, per_d_sieve };
std::string to_string(Method m);

struct ComputeOptions {
    unsigned workers = 1;
    Budget budget;
    sieve::SieveOptions sieve;
};

// (1/(k+l)!) sum over squarefree d | P_H(n), d <= R of mu(d) (log R/d)^(k+l).
// Only the distinct primes of P_H(n) matter: prime powers have mu = 0, and a
// prime shared by two offsets still appears once.
double lambda_point(std::uint64_t n, const Tuple& H, const GpyConfig& cfg);
double lambda_point(std::uint64_t n, const Tuple& H, const GpyConfig& cfg, const sieve::FactorTable& factors);

// Per-d path: each squarefree d <= R adds its weight to the prod nu_p residue
// classes of n mod d for which d | P_H(n). Fills values for n in (N, 2N].
WeightArray build_weight_array(const Tuple& H, const GpyConfig& cfg, bool with_rough_mask = false,
                               const ComputeOptions& opts = {});
// Per-n path: divisor enumeration from the factorization of each n + h_i.
WeightArray build_weight_array_oracle(const Tuple& H, const GpyConfig& cfg, bool with_rough_mask = false,
                                      const ComputeOptions& opts = {});

// mask[i] == 1 iff (P_H(N+1+i), P(R^delta)) = 1. Requires R^delta >= 2.
std::vector<std::uint8_t> rough_mask(const Tuple& H, const GpyConfig& cfg);
// Same, for an explicit sieving limit; a limit below 2 sieves nothing.
std::vector<std::uint8_t> rough_mask_for(const Tuple& H, std::uint64_t N, double limit);

struct MomentReport {
    GpyConfig config;
    std::string tuple;
    bool restricted = false;
    std::optional<std::int64_t> h0;
    double empirical = 0.0;
    double main_term = 0.0;
    double ratio = 0.0;  // empirical / main_term, NaN when main_term == 0
    Method method = Method::per_d_sieve;
    double singular = 0.0;
    double singular_tail_log_bound = 0.0;
    // Size of the unspecified (1 + O(k^3 delta^2)) factor, reported separately.
    double k3_delta2 = 0.0;
    // The rough sieve had no primes to remove (R^delta < 2).
    bool rough_vacuous = false;
};

MomentReport second_moment(const Tuple& H, const GpyConfig& cfg, bool restricted,
                           Method method = Method::per_d_sieve, const ComputeOptions& opts = {});
// Sum of theta(n + h0) Lambda_R(n)^2. h0 ranges over [0, h].
MomentReport twisted_moment(const Tuple& H, std::int64_t h0, const GpyConfig& cfg, bool restricted,
                            Method method = Method::per_d_sieve, const ComputeOptions& opts = {});

struct STildeReport {
    GpyConfig config;
    double value = 0.0;
    // The three pieces of the n-sum, each over the admissible k-subsets of
    // [1, h] with k! multiplicity and the per-tuple rough mask:
    //   log_piece    sum log(3N) Lambda^2
    //   inside_piece sum over h_i in H of theta(n + h_i) Lambda^2
    //   outside_piece sum over h0 in [1,h] \ H of theta(n + h0) Lambda^2
    double log_piece = 0.0;
    double inside_piece = 0.0;
    double outside_piece = 0.0;
    // Main terms of the three pieces, with the singular-series sums evaluated
    // exactly over the same tuples instead of their h^k asymptotics.
    double log_main = 0.0;
    double inside_main = 0.0;
    double outside_main = 0.0;
    std::uint64_t tuples = 0;
    bool rough_vacuous = false;
};

STildeReport s_tilde(const GpyConfig& cfg, const ComputeOptions& opts = {});

struct DivisorBoundReport {
    std::uint64_t checked = 0;
    std::uint64_t violations = 0;
    double max_ratio = 0.0;    // max |Lambda| / bound over masked n
    double log_bound = 0.0;    // natural log of the bound
};

// Bound on rough n: |Lambda| <= 2^(k log 3N / (delta log R)) (log R)^(k+l) / (k+l)!.
// Throws InvariantViolation on any violation.
DivisorBoundReport divisor_bound_check(const WeightArray& array);

struct RoughCountReport {
    std::uint64_t count = 0;
    double selberg_bound = 0.0;
    double ratio = 0.0;
    // sum over non-rough n of Lambda^2 divided by the full sum, next to the
    // k^3 delta^2 / 4 figure it is compared with.
    double sieved_fraction = 0.0;
    double k3_delta2_over_4 = 0.0;
    bool rough_vacuous = false;
};

RoughCountReport rough_count_report(const Tuple& H, const GpyConfig& cfg, const ComputeOptions& opts = {});

struct FourthMomentReport {
    GpyConfig config;
    double value = 0.0;
    double ratio = 0.0;  // value / (N (log N)^(4k + 4l))
    std::uint64_t tuples = 0;
};

// Sum over n of (sum over k-subsets H of [1,h] of Lambda_R(n;H,l))^4, with the
// inner sum counting each set k! times.
FourthMomentReport fourth_moment_probe(const GpyConfig& cfg, const ComputeOptions& opts = {});

void write_moments_csv(std::ostream& out, std::span<const MomentReport> rows);
void write_twisted_csv(std::ostream& out, std::span<const MomentReport> rows);
void write_stilde_csv(std::ostream& out, std::span<const STildeReport> rows);
void write_fourth_csv(std::ostream& out, std::span<const FourthMomentReport> rows);

}  // namespace gpylab::weights
