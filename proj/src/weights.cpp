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

#include "gpylab/weights.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <limits>
#include <ostream>

#include <fmt/format.h>

#include "gpylab/csv.hpp"
#include "gpylab/errors.hpp"
#include "gpylab/numeric.hpp"
#include "gpylab/parallel.hpp"

namespace gpylab::weights {

namespace {

// Fixed chunk grid for array work; independent of the worker count.
constexpr std::uint64_t kChunk = std::uint64_t{1} << 16;
// Relative slack when comparing primes against the real limit R^delta.
constexpr double kLimitSlack = 1e-12;

double nan() { return std::numeric_limits<double>::quiet_NaN(); }

void check_tuple(const Tuple& H, const GpyConfig& cfg) {
    require(H.k() == cfg.k, fmt::format("tuple has {} offsets but k = {}", H.k(), cfg.k));
}

void check_budget(const GpyConfig& cfg, const Budget& budget) {
    if (cfg.R > budget.max_R) {
        throw BudgetExceeded(fmt::format("R = {} exceeds the configured cap {}", cfg.R, budget.max_R));
    }
    double work = static_cast<double>(cfg.N) * std::pow(std::max(1.0, cfg.log_R()), cfg.k);
    if (work > budget.max_work) {
        throw BudgetExceeded(fmt::format("estimated work N (log R)^k = {:.3g} exceeds budget {:.3g}", work,
                                         budget.max_work));
    }
}

std::uint64_t prime_limit(double limit) {
    if (limit < 2.0 * (1.0 - kLimitSlack)) return 1;
    return static_cast<std::uint64_t>(std::floor(limit * (1.0 + kLimitSlack)));
}

// Term mu(d) (log R - log d)^M, shared by both paths.
double divisor_term(int mu, std::uint64_t d, double log_R, int M) {
    return mu * std::pow(log_R - std::log(static_cast<double>(d)), M);
}

// Sums divisor_term over squarefree d <= R built from `primes` (ascending),
// visiting d in depth-first order over the sorted prime list.
double divisor_sum(std::span<const std::uint64_t> primes, std::uint64_t R, double log_R, int M) {
    CompensatedSum acc;
    auto dfs = [&](auto&& self, std::size_t from, std::uint64_t d, int mu) -> void {
        acc.add(divisor_term(mu, d, log_R, M));
        for (std::size_t j = from; j < primes.size(); ++j) {
            if (d * primes[j] > R) break;
            self(self, j + 1, d * primes[j], -mu);
        }
    };
    dfs(dfs, 0, 1, 1);
    return acc.value();
}

// Values this small relative to (log R)^M are tested for exact cancellation.
constexpr double kZeroProbe = 1e-9;

// True when sum_{d in S} mu(d) (log R - log d)^M vanishes identically as a
// polynomial in the log p, with log R written through the factorization of
// R; S is the set of squarefree d <= R built from `primes`. Identity is
// tested by exact evaluation mod 2^61 - 1 at fixed pseudo-random points.
bool structural_zero(std::span<const std::uint64_t> primes, const GpyConfig& cfg) {
    constexpr std::size_t kMaxSet = 1 << 16;
    constexpr std::uint64_t P = (std::uint64_t{1} << 61) - 1;
    constexpr int kPoints = 4;
    auto mulmod = [](std::uint64_t a, std::uint64_t b) {
        return static_cast<std::uint64_t>(static_cast<unsigned __int128>(a) * b % P);
    };
    auto point = [](std::uint64_t p, int t) {
        std::uint64_t z = p * 0x9E3779B97F4A7C15ULL + static_cast<std::uint64_t>(t) * 0xBF58476D1CE4E5B9ULL;
        z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
        z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
        return (z ^ (z >> 31)) % P;
    };

    std::vector<std::uint64_t> masks;
    std::vector<int> mus;
    bool complete = true;
    auto dfs = [&](auto&& self, std::size_t from, std::uint64_t d, std::uint64_t mask, int mu) -> void {
        if (masks.size() >= kMaxSet) {
            complete = false;
            return;
        }
        masks.push_back(mask);
        mus.push_back(mu);
        for (std::size_t j = from; j < primes.size(); ++j) {
            if (d > cfg.R / primes[j]) break;
            self(self, j + 1, d * primes[j], mask | (std::uint64_t{1} << j), -mu);
        }
    };
    if (primes.size() > 64) return false;
    dfs(dfs, 0, 1, 0, 1);
    if (!complete) return false;

    std::vector<std::pair<std::uint64_t, std::uint64_t>> r_factors;  // (p, exponent)
    {
        std::uint64_t m = cfg.R;
        for (std::uint64_t p = 2; p * p <= m; ++p) {
            if (m % p) continue;
            std::uint64_t e = 0;
            while (m % p == 0) m /= p, ++e;
            r_factors.push_back({p, e});
        }
        if (m > 1) r_factors.push_back({m, 1});
    }

    std::vector<std::uint64_t> val(primes.size());
    for (int t = 0; t < kPoints; ++t) {
        std::uint64_t L = 0;
        for (auto [p, e] : r_factors) L = (L + mulmod(e % P, point(p, t))) % P;
        for (std::size_t j = 0; j < primes.size(); ++j) val[j] = point(primes[j], t);
        std::uint64_t total = 0;
        for (std::size_t i = 0; i < masks.size(); ++i) {
            std::uint64_t x = L;
            for (std::uint64_t bits = masks[i]; bits; bits &= bits - 1) x = (x + P - val[std::countr_zero(bits)]) % P;
            std::uint64_t term = 1;
            for (int j = 0; j < cfg.M(); ++j) term = mulmod(term, x);
            total = mus[i] > 0 ? (total + term) % P : (total + P - term) % P;
        }
        if (total != 0) return false;
    }
    return true;
}

double zero_probe_scale(const GpyConfig& cfg) { return kZeroProbe * std::pow(cfg.log_R(), cfg.M()) / factorial(cfg.M()); }

double lambda_from_primes(std::vector<std::uint64_t>& primes, const GpyConfig& cfg) {
    std::sort(primes.begin(), primes.end());
    primes.erase(std::unique(primes.begin(), primes.end()), primes.end());
    const double v = divisor_sum(primes, cfg.R, cfg.log_R(), cfg.M()) / factorial(cfg.M());
    if (std::abs(v) <= zero_probe_scale(cfg) && structural_zero(primes, cfg)) return 0.0;
    return v;
}

std::uint64_t mod_inverse(std::uint64_t a, std::uint64_t p) {
    // p prime, a not divisible by p.
    std::uint64_t result = 1, base = a % p, e = p - 2;
    while (e) {
        if (e & 1) result = static_cast<std::uint64_t>((unsigned __int128)result * base % p);
        base = static_cast<std::uint64_t>((unsigned __int128)base * base % p);
        e >>= 1;
    }
    return result;
}

// Flattened list of (d, weight, residue classes) for squarefree d <= R, in
// depth-first order over ascending primes.
struct DivisorClasses {
    std::vector<std::uint64_t> d;
    std::vector<double> weight;
    std::vector<std::size_t> first;  // residues of entry i: [first[i], first[i+1])
    std::vector<std::uint64_t> residues;
};

DivisorClasses divisor_classes(const Tuple& H, const GpyConfig& cfg) {
    constexpr std::size_t kMaxResidues = 50'000'000;
    DivisorClasses out;
    auto primes32 = cfg.R >= 2 ? sieve::primes_up_to(cfg.R) : std::vector<std::uint32_t>{};
    std::vector<std::uint64_t> primes(primes32.begin(), primes32.end());
    // Classes of n mod p with p | P_H(n): n = -h_i mod p.
    std::vector<std::vector<std::uint64_t>> per_prime(primes.size());
    for (std::size_t j = 0; j < primes.size(); ++j) {
        auto p = primes[j];
        for (auto h : H.offsets()) per_prime[j].push_back((p - static_cast<std::uint64_t>(h) % p) % p);
        std::sort(per_prime[j].begin(), per_prime[j].end());
        per_prime[j].erase(std::unique(per_prime[j].begin(), per_prime[j].end()), per_prime[j].end());
    }

    const double log_R = cfg.log_R();
    const double inv_fact = 1.0 / factorial(cfg.M());
    auto dfs = [&](auto&& self, std::size_t from, std::uint64_t d, int mu,
                   const std::vector<std::uint64_t>& classes) -> void {
        out.d.push_back(d);
        out.weight.push_back(divisor_term(mu, d, log_R, cfg.M()) * inv_fact);
        out.first.push_back(out.residues.size());
        out.residues.insert(out.residues.end(), classes.begin(), classes.end());
        if (out.residues.size() > kMaxResidues) {
            throw BudgetExceeded("residue-class table for the per-d weight path exceeds its budget");
        }
        for (std::size_t j = from; j < primes.size(); ++j) {
            const std::uint64_t p = primes[j];
            if (d * p > cfg.R) break;
            // CRT: x = r (mod d), x = s (mod p)  =>  x = r + d t, t = (s - r) d^-1 (mod p).
            const std::uint64_t inv = mod_inverse(d % p, p);
            std::vector<std::uint64_t> next;
            next.reserve(classes.size() * per_prime[j].size());
            for (auto r : classes) {
                for (auto s : per_prime[j]) {
                    std::uint64_t t = (s + p - r % p) % p * inv % p;
                    next.push_back(r + d * t);
                }
            }
            self(self, j + 1, d * p, -mu, next);
        }
    };
    dfs(dfs, 0, 1, 1, std::vector<std::uint64_t>{0});
    out.first.push_back(out.residues.size());
    return out;
}

std::vector<double> per_d_values(const Tuple& H, const GpyConfig& cfg, unsigned workers) {
    std::vector<double> values(cfg.N, 0.0);
    if (cfg.R < 2) return values;  // only d = 1, whose term is (log 1)^M = 0
    const auto classes = divisor_classes(H, cfg);
    const double probe = zero_probe_scale(cfg);
    const std::uint64_t base = cfg.N + 1;
    const std::size_t n_chunks = (cfg.N + kChunk - 1) / kChunk;
    parallel_for(n_chunks, workers, [&](std::size_t c) {
        const std::uint64_t lo = base + c * kChunk;
        const std::uint64_t hi = std::min(base + cfg.N, lo + kChunk);
        for (std::size_t i = 0; i + 1 < classes.first.size(); ++i) {
            const std::uint64_t d = classes.d[i];
            const double w = classes.weight[i];
            for (std::size_t j = classes.first[i]; j < classes.first[i + 1]; ++j) {
                const std::uint64_t r = classes.residues[j];
                std::uint64_t n = lo + (r + d - lo % d) % d;
                for (; n < hi; n += d) values[n - base] += w;
            }
        }
        std::vector<std::uint64_t> primes;
        for (std::uint64_t n = lo; n < hi; ++n) {
            if (std::abs(values[n - base]) > probe) continue;
            primes.clear();
            for (auto h : H.offsets()) sieve::distinct_primes_trial(n + static_cast<std::uint64_t>(h), cfg.R, primes);
            std::sort(primes.begin(), primes.end());
            primes.erase(std::unique(primes.begin(), primes.end()), primes.end());
            if (structural_zero(primes, cfg)) values[n - base] = 0.0;
        }
    });
    return values;
}

std::vector<double> per_n_values(const Tuple& H, const GpyConfig& cfg, const ComputeOptions& opts) {
    std::vector<double> values(cfg.N, 0.0);
    if (cfg.R < 2) return values;
    const std::uint64_t base = cfg.N + 1;
    sieve::SieveOptions sopts = opts.sieve;
    sopts.workers = opts.workers;
    sieve::FactorTable factors(base + static_cast<std::uint64_t>(H.min_offset()),
                               base + cfg.N + static_cast<std::uint64_t>(H.max_offset()), sopts);
    const std::size_t n_chunks = (cfg.N + kChunk - 1) / kChunk;
    parallel_for(n_chunks, opts.workers, [&](std::size_t c) {
        const std::uint64_t lo = base + c * kChunk;
        const std::uint64_t hi = std::min(base + cfg.N, lo + kChunk);
        for (std::uint64_t n = lo; n < hi; ++n) values[n - base] = lambda_point(n, H, cfg, factors);
    });
    return values;
}

std::vector<double> compute_values(const Tuple& H, const GpyConfig& cfg, Method method, const ComputeOptions& opts) {
    return method == Method::per_d_sieve ? per_d_values(H, cfg, opts.workers) : per_n_values(H, cfg, opts);
}

// Rough mask that tolerates R^delta < 2 (then nothing is sieved).
std::vector<std::uint8_t> mask_or_vacuous(const Tuple& H, const GpyConfig& cfg, bool& vacuous) {
    vacuous = prime_limit(cfg.rough_limit()) < 2;
    return rough_mask_for(H, cfg.N, cfg.rough_limit());
}

double sum_squares(const std::vector<double>& v, const std::vector<std::uint8_t>* mask) {
    CompensatedSum acc;
    for (std::size_t i = 0; i < v.size(); ++i) {
        if (!mask || (*mask)[i]) acc.add(v[i] * v[i]);
    }
    return acc.value();
}

double log_bound(const GpyConfig& cfg) {
    const double T = std::log(3.0 * static_cast<double>(cfg.N)) / (cfg.delta * cfg.log_R());
    return cfg.k * T * std::log(2.0) + cfg.M() * std::log(cfg.log_R()) - std::log(factorial(cfg.M()));
}

}  // namespace

double GpyConfig::rho() const { return std::log(static_cast<double>(R)) / std::log(static_cast<double>(N)); }
double GpyConfig::log_R() const { return std::log(static_cast<double>(R)); }
double GpyConfig::rough_limit() const { return std::pow(static_cast<double>(R), delta); }

void GpyConfig::validate() const {
    require(N >= 1, "N must be >= 1");
    require(k >= 1, "k must be >= 1");
    require(l >= 0 && l < k, "l must satisfy 0 <= l < k");
    require(R >= 1, "R must be >= 1");
    require(delta > 0.0 && delta < 0.5, "delta must lie in (0, 1/2)");
    require(N <= sieve::kGlobalCap / 4, "N too large for the sieve cap");
}

std::string to_string(Method m) { return m == Method::per_n_oracle ? "per_n_oracle" : "per_d_sieve"; }

double lambda_point(std::uint64_t n, const Tuple& H, const GpyConfig& cfg) {
    cfg.validate();
    check_tuple(H, cfg);
    require(n >= 1, "lambda_point requires n >= 1");
    if (cfg.R < 2) return 0.0;
    std::vector<std::uint64_t> primes;
    for (auto h : H.offsets()) sieve::distinct_primes_trial(n + static_cast<std::uint64_t>(h), cfg.R, primes);
    return lambda_from_primes(primes, cfg);
}

double lambda_point(std::uint64_t n, const Tuple& H, const GpyConfig& cfg, const sieve::FactorTable& factors) {
    if (cfg.R < 2) return 0.0;
    std::vector<std::uint64_t> primes;
    for (auto h : H.offsets()) factors.distinct_primes(n + static_cast<std::uint64_t>(h), cfg.R, primes);
    return lambda_from_primes(primes, cfg);
}

std::vector<std::uint8_t> rough_mask_for(const Tuple& H, std::uint64_t N, double limit) {
    std::vector<std::uint8_t> mask(N, 1);
    const std::uint64_t top = prime_limit(limit);
    if (top < 2) return mask;
    const std::uint64_t base = N + 1;
    for (std::uint32_t p32 : sieve::primes_up_to(top)) {
        const std::uint64_t p = p32;
        std::vector<std::uint64_t> classes;
        for (auto h : H.offsets()) classes.push_back((p - static_cast<std::uint64_t>(h) % p) % p);
        std::sort(classes.begin(), classes.end());
        classes.erase(std::unique(classes.begin(), classes.end()), classes.end());
        for (auto r : classes) {
            for (std::uint64_t n = base + (r + p - base % p) % p; n < base + N; n += p) mask[n - base] = 0;
        }
    }
    return mask;
}

std::vector<std::uint8_t> rough_mask(const Tuple& H, const GpyConfig& cfg) {
    cfg.validate();
    require(prime_limit(cfg.rough_limit()) >= 2, "rough mask requires R^delta >= 2");
    return rough_mask_for(H, cfg.N, cfg.rough_limit());
}

WeightArray build_weight_array(const Tuple& H, const GpyConfig& cfg, bool with_rough_mask, const ComputeOptions& opts) {
    cfg.validate();
    check_tuple(H, cfg);
    check_budget(cfg, opts.budget);
    WeightArray out{cfg, H, per_d_values(H, cfg, opts.workers), std::nullopt};
    if (with_rough_mask) {
        out.rough_mask = rough_mask(H, cfg);
        divisor_bound_check(out);
    }
    return out;
}

WeightArray build_weight_array_oracle(const Tuple& H, const GpyConfig& cfg, bool with_rough_mask,
                                      const ComputeOptions& opts) {
    cfg.validate();
    check_tuple(H, cfg);
    check_budget(cfg, opts.budget);
    WeightArray out{cfg, H, per_n_values(H, cfg, opts), std::nullopt};
    if (with_rough_mask) {
        out.rough_mask = rough_mask(H, cfg);
        divisor_bound_check(out);
    }
    return out;
}

DivisorBoundReport divisor_bound_check(const WeightArray& array) {
    require(array.rough_mask.has_value(), "divisor_bound_check needs a rough mask");
    const auto& cfg = array.config;
    const auto& mask = *array.rough_mask;
    DivisorBoundReport rep;
    if (cfg.R < 2) {
        // Every weight is (log 1)^M = 0.
        for (std::size_t i = 0; i < array.values.size(); ++i) {
            if (!mask[i]) continue;
            ++rep.checked;
            if (array.values[i] != 0.0) ++rep.violations;
        }
        rep.log_bound = -std::numeric_limits<double>::infinity();
    } else {
        rep.log_bound = log_bound(cfg);
        for (std::size_t i = 0; i < array.values.size(); ++i) {
            if (!mask[i]) continue;
            ++rep.checked;
            const double a = std::fabs(array.values[i]);
            if (a == 0.0) continue;
            const double ratio = std::exp(std::log(a) - rep.log_bound);
            rep.max_ratio = std::max(rep.max_ratio, ratio);
            if (ratio > 1.0 + 1e-12) ++rep.violations;
        }
    }
    if (rep.violations) {
        throw InvariantViolation(fmt::format("divisor-count bound violated at {} of {} rough n (max ratio {:.6g})",
                                             rep.violations, rep.checked, rep.max_ratio));
    }
    return rep;
}

MomentReport second_moment(const Tuple& H, const GpyConfig& cfg, bool restricted, Method method,
                           const ComputeOptions& opts) {
    cfg.validate();
    check_tuple(H, cfg);
    require(tuples::is_admissible(H), "second_moment requires an admissible tuple");
    check_budget(cfg, opts.budget);

    MomentReport rep;
    rep.config = cfg;
    rep.tuple = H.to_string();
    rep.restricted = restricted;
    rep.method = method;
    rep.k3_delta2 = std::pow(cfg.k, 3) * cfg.delta * cfg.delta;

    WeightArray arr{cfg, H, compute_values(H, cfg, method, opts), std::nullopt};
    if (restricted) {
        arr.rough_mask = mask_or_vacuous(H, cfg, rep.rough_vacuous);
        divisor_bound_check(arr);
    }
    rep.empirical = sum_squares(arr.values, restricted ? &*arr.rough_mask : nullptr);

    auto S = tuples::singular_series(H.shifted(-H.min_offset()), tuples::kDefaultSingularBound);
    rep.singular = S.value;
    rep.singular_tail_log_bound = S.tail_log_bound;
    const int power = cfg.k + 2 * cfg.l;
    rep.main_term = binomial(2 * cfg.l, cfg.l) * S.value * static_cast<double>(cfg.N) *
                    std::pow(cfg.log_R(), power) / factorial(power);
    rep.ratio = rep.main_term != 0.0 ? rep.empirical / rep.main_term : nan();
    return rep;
}

MomentReport twisted_moment(const Tuple& H, std::int64_t h0, const GpyConfig& cfg, bool restricted, Method method,
                            const ComputeOptions& opts) {
    cfg.validate();
    check_tuple(H, cfg);
    require(h0 >= 0 && static_cast<std::uint64_t>(h0) <= cfg.h,
            fmt::format("h0 = {} outside [0, h = {}]", h0, cfg.h));
    require(tuples::is_admissible(H), "twisted_moment requires an admissible tuple");
    check_budget(cfg, opts.budget);

    MomentReport rep;
    rep.config = cfg;
    rep.tuple = H.to_string();
    rep.restricted = restricted;
    rep.h0 = h0;
    rep.method = method;
    rep.k3_delta2 = std::pow(cfg.k, 3) * cfg.delta * cfg.delta;

    WeightArray arr{cfg, H, compute_values(H, cfg, method, opts), std::nullopt};
    if (restricted) {
        arr.rough_mask = mask_or_vacuous(H, cfg, rep.rough_vacuous);
        divisor_bound_check(arr);
    }
    const auto& values = arr.values;

    sieve::SieveOptions sopts = opts.sieve;
    sopts.workers = opts.workers;
    const std::uint64_t lo = cfg.N + 1 + static_cast<std::uint64_t>(h0);
    auto flags = sieve::prime_flags(lo, lo + cfg.N, sopts);
    CompensatedSum acc;
    for (std::size_t i = 0; i < values.size(); ++i) {
        if (!flags[i] || (restricted && !(*arr.rough_mask)[i])) continue;
        acc.add(std::log(static_cast<double>(lo + i)) * values[i] * values[i]);
    }
    rep.empirical = acc.value();

    const int m = H.contains(h0) ? 1 : 0;
    const Tuple U = H.with(h0);
    auto S = tuples::singular_series(U.shifted(-U.min_offset()), tuples::kDefaultSingularBound);
    rep.singular = S.value;
    rep.singular_tail_log_bound = S.tail_log_bound;
    const int power = cfg.k + 2 * cfg.l + m;
    rep.main_term = binomial(2 * (cfg.l + m), cfg.l + m) * S.value / factorial(power) *
                    static_cast<double>(cfg.N) * std::pow(cfg.log_R(), power);
    rep.ratio = rep.main_term != 0.0 ? rep.empirical / rep.main_term : nan();
    return rep;
}

STildeReport s_tilde(const GpyConfig& cfg, const ComputeOptions& opts) {
    cfg.validate();
    require(cfg.k <= 3, "s_tilde is limited to k <= 3");
    STildeReport rep;
    rep.config = cfg;
    rep.rough_vacuous = prime_limit(cfg.rough_limit()) < 2;
    if (cfg.h < static_cast<std::uint64_t>(cfg.k)) return rep;

    const std::uint64_t n_sets = tuples::subset_count(cfg.h, cfg.k);
    if (n_sets > opts.budget.max_tuples) {
        throw BudgetExceeded(fmt::format("C({},{}) tuples exceed the budget", cfg.h, cfg.k));
    }
    check_budget(cfg, opts.budget);
    if (static_cast<double>(n_sets) * static_cast<double>(cfg.N) * static_cast<double>(cfg.h) >
        opts.budget.max_work) {
        throw BudgetExceeded("s_tilde work estimate exceeds the budget");
    }

    auto tuples_list = tuples::enumerate_admissible(cfg.k, cfg.h, opts.budget.max_tuples);
    rep.tuples = tuples_list.size();

    sieve::SieveOptions sopts = opts.sieve;
    sopts.workers = opts.workers;
    const std::uint64_t base = cfg.N + 1;
    // theta(n + j) for n in (N, 2N], 1 <= j <= h, read as theta_at[n - base + j].
    auto flags = sieve::prime_flags(base, base + cfg.N + cfg.h, sopts);
    std::vector<double> theta_at(flags.size(), 0.0);
    for (std::size_t i = 0; i < flags.size(); ++i) {
        if (flags[i]) theta_at[i] = std::log(static_cast<double>(base + i));
    }
    const double log3N = std::log(3.0 * static_cast<double>(cfg.N));

    struct Piece {
        CompensatedSum log_piece, inside, outside;
        double singular = 0.0;
        double outside_singular = 0.0;
    };
    auto pieces = parallel_map<Piece>(tuples_list.size(), opts.workers, [&](std::size_t t) {
        const Tuple& H = tuples_list[t];
        Piece out;
        auto values = per_d_values(H, cfg, 1);
        auto mask = rough_mask_for(H, cfg.N, cfg.rough_limit());
        for (std::size_t i = 0; i < values.size(); ++i) {
            if (!mask[i]) continue;
            const double w = values[i] * values[i];
            if (w == 0.0) continue;
            out.log_piece.add(log3N * w);
            double in = 0.0, outside = 0.0;
            for (std::uint64_t j = 1; j <= cfg.h; ++j) {
                const double th = theta_at[i + j];
                if (th == 0.0) continue;
                (H.contains(static_cast<std::int64_t>(j)) ? in : outside) += th;
            }
            out.inside.add(in * w);
            out.outside.add(outside * w);
        }
        out.singular = tuples::singular_series(H, tuples::kDefaultSingularBound).value;
        CompensatedSum os;
        for (std::uint64_t j = 1; j <= cfg.h; ++j) {
            if (H.contains(static_cast<std::int64_t>(j))) continue;
            os.add(tuples::singular_series(H.with(static_cast<std::int64_t>(j)), tuples::kDefaultSingularBound).value);
        }
        out.outside_singular = os.value();
        return out;
    });

    CompensatedSum log_piece, inside, outside, singular, outside_singular;
    for (const auto& p : pieces) {
        log_piece.add(p.log_piece);
        inside.add(p.inside);
        outside.add(p.outside);
        singular.add(p.singular);
        outside_singular.add(p.outside_singular);
    }
    const double mult = factorial(cfg.k);
    rep.log_piece = mult * log_piece.value();
    rep.inside_piece = mult * inside.value();
    rep.outside_piece = mult * outside.value();
    const double N = static_cast<double>(cfg.N);
    const double logR = cfg.log_R();
    rep.value = (rep.inside_piece + rep.outside_piece - rep.log_piece) /
                (N * std::pow(static_cast<double>(cfg.h) * logR, cfg.k));

    const int l = cfg.l, k = cfg.k;
    const double G = mult * singular.value();
    rep.log_main = log3N * binomial(2 * l, l) / factorial(k + 2 * l) * N * std::pow(logR, k + 2 * l) * G;
    rep.inside_main = binomial(2 * l + 2, l + 1) / factorial(k + 2 * l + 1) * N * std::pow(logR, k + 2 * l + 1) * k * G;
    rep.outside_main =
        binomial(2 * l, l) / factorial(k + 2 * l) * N * std::pow(logR, k + 2 * l) * mult * outside_singular.value();
    return rep;
}

RoughCountReport rough_count_report(const Tuple& H, const GpyConfig& cfg, const ComputeOptions& opts) {
    cfg.validate();
    check_tuple(H, cfg);
    check_budget(cfg, opts.budget);
    RoughCountReport rep;
    auto mask = mask_or_vacuous(H, cfg, rep.rough_vacuous);
    for (auto m : mask) rep.count += m;

    const auto S = tuples::singular_series(H.shifted(-H.min_offset()), tuples::kDefaultSingularBound);
    const int k = H.k();
    rep.selberg_bound = static_cast<double>(cfg.N) * factorial(k) * S.value / std::pow(cfg.delta * cfg.log_R(), k);
    rep.ratio = rep.selberg_bound > 0.0 ? static_cast<double>(rep.count) / rep.selberg_bound : nan();

    auto values = per_d_values(H, cfg, opts.workers);
    CompensatedSum all, sieved;
    for (std::size_t i = 0; i < values.size(); ++i) {
        const double w = values[i] * values[i];
        all.add(w);
        if (!mask[i]) sieved.add(w);
    }
    rep.sieved_fraction = all.value() > 0.0 ? sieved.value() / all.value() : 0.0;
    rep.k3_delta2_over_4 = std::pow(k, 3) * cfg.delta * cfg.delta / 4.0;
    return rep;
}

FourthMomentReport fourth_moment_probe(const GpyConfig& cfg, const ComputeOptions& opts) {
    cfg.validate();
    require(cfg.k <= 2, "fourth_moment_probe requires k <= 2");
    require(cfg.h <= 12, "fourth_moment_probe requires h <= 12");
    require(cfg.N <= 100'000, "fourth_moment_probe requires N <= 10^5");
    check_budget(cfg, opts.budget);

    FourthMomentReport rep;
    rep.config = cfg;
    if (cfg.h < static_cast<std::uint64_t>(cfg.k)) return rep;

    std::vector<Tuple> sets;
    tuples::for_each_subset(cfg.k, 1, static_cast<std::int64_t>(cfg.h), [&](const Tuple& t) { sets.push_back(t); });
    rep.tuples = sets.size();
    auto arrays = parallel_map<std::vector<double>>(sets.size(), opts.workers,
                                                    [&](std::size_t i) { return per_d_values(sets[i], cfg, 1); });
    const double mult = factorial(cfg.k);
    CompensatedSum acc;
    for (std::size_t i = 0; i < cfg.N; ++i) {
        CompensatedSum inner;
        for (const auto& a : arrays) inner.add(a[i]);
        const double A = mult * inner.value();
        const double A2 = A * A;
        acc.add(A2 * A2);
    }
    rep.value = acc.value();
    const double N = static_cast<double>(cfg.N);
    rep.ratio = rep.value / (N * std::pow(std::log(N), 4 * cfg.k + 4 * cfg.l));
    return rep;
}

void write_moments_csv(std::ostream& out, std::span<const MomentReport> rows) {
    csv::write_preamble(out, "moments", 1,
                        {"N", "k", "l", "R", "delta", "restricted", "empirical", "main_term", "ratio", "method"});
    for (const auto& r : rows) {
        csv::write_row(out, r.config.N, r.config.k, r.config.l, r.config.R, r.config.delta, r.restricted, r.empirical,
                       r.main_term, r.ratio, to_string(r.method));
    }
}

void write_twisted_csv(std::ostream& out, std::span<const MomentReport> rows) {
    csv::write_preamble(out, "twisted", 1,
                        {"N", "k", "l", "R", "delta", "restricted", "h0", "empirical", "main_term", "ratio", "method"});
    for (const auto& r : rows) {
        csv::write_row(out, r.config.N, r.config.k, r.config.l, r.config.R, r.config.delta, r.restricted,
                       r.h0.value_or(0), r.empirical, r.main_term, r.ratio, to_string(r.method));
    }
}

void write_stilde_csv(std::ostream& out, std::span<const STildeReport> rows) {
    csv::write_preamble(out, "s_tilde", 1,
                        {"N", "k", "l", "R", "delta", "h", "value", "comp1", "comp2", "comp3", "main1", "main2",
                         "main3"});
    for (const auto& r : rows) {
        csv::write_row(out, r.config.N, r.config.k, r.config.l, r.config.R, r.config.delta, r.config.h, r.value,
                       r.log_piece, r.inside_piece, r.outside_piece, r.log_main, r.inside_main, r.outside_main);
    }
}

void write_fourth_csv(std::ostream& out, std::span<const FourthMomentReport> rows) {
    csv::write_preamble(out, "fourth", 1, {"N", "k", "l", "R", "h", "value", "ratio"});
    for (const auto& r : rows) {
        csv::write_row(out, r.config.N, r.config.k, r.config.l, r.config.R, r.config.h, r.value, r.ratio);
    }
}

}  // namespace gpylab::weights
