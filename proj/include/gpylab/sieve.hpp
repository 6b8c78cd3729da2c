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

#include <bit>
#include <cstdint>
#include <span>
#include <utility>
#include <vector>

#include "gpylab/numeric.hpp"
#include "gpylab/parallel.hpp"

namespace gpylab::sieve {

// 2^22 integers per segment keeps the bit array inside L2.
inline constexpr std::uint64_t kDefaultSegmentCap = std::uint64_t{1} << 22;
inline constexpr std::uint64_t kMaxSegmentCap = std::uint64_t{1} << 28;
// Largest exclusive upper bound accepted anywhere in the library.
inline constexpr std::uint64_t kGlobalCap = 10'000'000'000ULL;
// spf entries are 32-bit; segments reaching past this carry no spf table.
inline constexpr std::uint64_t kSpfLimit = std::uint64_t{1} << 32;

class SegmentCache;

struct SieveOptions {
    std::uint64_t segment_size = kDefaultSegmentCap;
    unsigned workers = 1;
    const SegmentCache* cache = nullptr;
};

// Primality bits (and optionally smallest prime factors) for [lo, hi).
// Immutable once built.
class SieveSegment {
  public:
    SieveSegment() = default;

    std::uint64_t lo() const { return lo_; }
    std::uint64_t hi() const { return hi_; }
    std::uint64_t size() const { return hi_ - lo_; }

    bool test(std::uint64_t i) const { return (words_[i >> 6] >> (i & 63)) & 1u; }
    bool is_prime(std::uint64_t n) const { return test(n - lo_); }

    bool has_spf() const { return !spf_.empty(); }
    // Least prime factor of n; n itself when prime, 1 for n = 1.
    std::uint32_t spf(std::uint64_t n) const { return spf_[n - lo_]; }

    std::span<const std::uint64_t> words() const { return words_; }
    std::span<const std::uint32_t> spf_table() const { return spf_; }

    std::uint64_t count() const {
        std::uint64_t c = 0;
        for (auto w : words_) c += std::popcount(w);
        return c;
    }

    template <class F>
    void for_each_prime(F&& f) const {
        for (std::size_t w = 0; w < words_.size(); ++w) {
            std::uint64_t bits = words_[w];
            while (bits) {
                int b = std::countr_zero(bits);
                f(lo_ + (static_cast<std::uint64_t>(w) << 6) + b);
                bits &= bits - 1;
            }
        }
    }

    bool operator==(const SieveSegment&) const = default;

  private:
    friend SieveSegment build_segment(std::uint64_t, std::uint64_t, bool, std::uint64_t);
    friend class SegmentCache;

    SieveSegment(std::uint64_t lo, std::uint64_t hi, std::vector<std::uint64_t> words,
                 std::vector<std::uint32_t> spf)
        : lo_(lo), hi_(hi), words_(std::move(words)), spf_(std::move(spf)) {}

    std::uint64_t lo_ = 0;
    std::uint64_t hi_ = 0;
    std::vector<std::uint64_t> words_;
    std::vector<std::uint32_t> spf_;
};

// Segmented Eratosthenes over [lo, hi). Requires 0 < lo < hi,
// hi - lo <= segment_cap and hi <= kGlobalCap. with_spf is honoured only for
// hi <= kSpfLimit.
SieveSegment build_segment(std::uint64_t lo, std::uint64_t hi, bool with_spf = false,
                           std::uint64_t segment_cap = kDefaultSegmentCap);

// All primes below 10^5, enough to sieve anything under kGlobalCap.
const std::vector<std::uint32_t>& base_primes();

bool is_prime(std::uint64_t n);
// Smallest prime strictly greater than n.
std::uint64_t next_prime(std::uint64_t n);

std::uint64_t prime_count(std::uint64_t x, const SieveOptions& opts = {});

// log n for prime n, else 0.
double theta_point(std::uint64_t n);
// Sum of theta_point(n + j) for 1 <= j <= h.
double theta_window(std::uint64_t n, std::uint64_t h, const SieveOptions& opts = {});
// Sum of log p over primes p <= x.
double theta_sum(std::uint64_t x, const SieveOptions& opts = {});

// The primes dividing the primorial P(x), kept factored.
struct PrimorialSupport {
    std::uint64_t bound = 0;
    std::vector<std::uint64_t> primes;
};
PrimorialSupport primorial_support(std::uint64_t x);

std::vector<std::uint64_t> primes_in(std::uint64_t lo, std::uint64_t hi, const SieveOptions& opts = {});
std::vector<std::uint32_t> primes_up_to(std::uint64_t x, const SieveOptions& opts = {});
// One byte per integer of [lo, hi): 1 when prime.
std::vector<std::uint8_t> prime_flags(std::uint64_t lo, std::uint64_t hi, const SieveOptions& opts = {});

struct Span {
    std::uint64_t lo = 0;
    std::uint64_t hi = 0;
};

// Pieces of [lo, hi) cut at multiples of segment_size. The grid depends only
// on segment_size, never on the worker count, so merged results are stable.
std::vector<Span> segment_grid(std::uint64_t lo, std::uint64_t hi, std::uint64_t segment_size);

SieveSegment load_or_build(Span span, bool with_spf, const SieveOptions& opts);

// Applies fn to each grid segment of [lo, hi), possibly concurrently, and
// returns the results in ascending segment order.
template <class T, class F>
std::vector<T> map_segments(std::uint64_t lo, std::uint64_t hi, const SieveOptions& opts, F&& fn,
                            bool with_spf = false) {
    auto grid = segment_grid(lo, hi, opts.segment_size);
    return parallel_map<T>(grid.size(), opts.workers,
                           [&](std::size_t i) { return fn(load_or_build(grid[i], with_spf, opts)); });
}

// Factorization substrate for integers in [lo, hi). Uses spf tables when
// hi <= kSpfLimit; otherwise divides by sieve primes up to sqrt(hi).
class FactorTable {
  public:
    FactorTable(std::uint64_t lo, std::uint64_t hi, const SieveOptions& opts = {});

    bool covers(std::uint64_t n) const { return n >= lo_ && n < hi_; }

    // Appends the distinct primes p <= limit dividing n, ascending.
    void distinct_primes(std::uint64_t n, std::uint64_t limit, std::vector<std::uint64_t>& out) const;

  private:
    std::uint64_t lo_;
    std::uint64_t hi_;
    std::uint64_t seg_size_;
    std::vector<SieveSegment> segments_;
};

// Same contract as FactorTable::distinct_primes, by trial division.
void distinct_primes_trial(std::uint64_t n, std::uint64_t limit, std::vector<std::uint64_t>& out);

}  // namespace gpylab::sieve
