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

#include "gpylab/sieve.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "gpylab/errors.hpp"
#include "gpylab/segment_cache.hpp"

namespace gpylab::sieve {

namespace {

constexpr std::uint32_t kBaseLimit = 100'000;

std::vector<std::uint32_t> simple_sieve(std::uint32_t limit) {
    std::vector<std::uint8_t> composite(limit + 1, 0);
    std::vector<std::uint32_t> primes;
    for (std::uint32_t i = 2; i <= limit; ++i) {
        if (composite[i]) continue;
        primes.push_back(i);
        for (std::uint64_t j = std::uint64_t{i} * i; j <= limit; j += i) composite[j] = 1;
    }
    return primes;
}

std::uint64_t isqrt(std::uint64_t n) {
    auto r = static_cast<std::uint64_t>(std::sqrt(static_cast<double>(n)));
    while (r * r > n) --r;
    while ((r + 1) * (r + 1) <= n) ++r;
    return r;
}

void check_range(std::uint64_t x) {
    require(x <= kGlobalCap, "value " + std::to_string(x) + " exceeds the global sieve cap 10^10");
}

}  // namespace

const std::vector<std::uint32_t>& base_primes() {
    static const std::vector<std::uint32_t> primes = simple_sieve(kBaseLimit);
    return primes;
}

SieveSegment build_segment(std::uint64_t lo, std::uint64_t hi, bool with_spf, std::uint64_t segment_cap) {
    require(lo < hi, "empty segment: lo >= hi");
    require(lo > 0, "segment must start above 0");
    require(hi - lo <= segment_cap,
            "range too large: " + std::to_string(hi - lo) + " > segment cap " + std::to_string(segment_cap));
    require(hi <= kGlobalCap, "range too large: hi exceeds the global cap 10^10");

    const std::uint64_t n = hi - lo;
    std::vector<std::uint64_t> words((n + 63) / 64, ~std::uint64_t{0});
    if (n % 64) words.back() = (std::uint64_t{1} << (n % 64)) - 1;
    auto clear = [&](std::uint64_t i) { words[i >> 6] &= ~(std::uint64_t{1} << (i & 63)); };
    if (lo == 1) clear(0);

    const bool spf_on = with_spf && hi <= kSpfLimit;
    std::vector<std::uint32_t> spf;
    if (spf_on) spf.assign(n, 0);

    const std::uint64_t root = isqrt(hi - 1);
    for (std::uint32_t p : base_primes()) {
        if (p > root) break;
        std::uint64_t start = std::max<std::uint64_t>(std::uint64_t{p} * p, (lo + p - 1) / p * p);
        for (std::uint64_t j = start; j < hi; j += p) {
            std::uint64_t i = j - lo;
            clear(i);
            if (spf_on && spf[i] == 0) spf[i] = p;
        }
    }

    if (spf_on) {
        for (std::uint64_t i = 0; i < n; ++i) {
            if (spf[i] == 0) spf[i] = static_cast<std::uint32_t>(lo + i);
        }
    }
    return SieveSegment(lo, hi, std::move(words), std::move(spf));
}

bool is_prime(std::uint64_t n) {
    check_range(n);
    if (n < 2) return false;
    for (std::uint32_t p : base_primes()) {
        if (std::uint64_t{p} * p > n) return true;
        if (n % p == 0) return n == p;
    }
    return true;
}

std::uint64_t next_prime(std::uint64_t n) {
    constexpr std::uint64_t kStep = 1024;
    std::uint64_t lo = n + 1;
    for (;;) {
        check_range(lo + kStep);
        auto seg = build_segment(std::max<std::uint64_t>(lo, 1), lo + kStep);
        std::uint64_t found = 0;
        seg.for_each_prime([&](std::uint64_t p) {
            if (!found) found = p;
        });
        if (found) return found;
        lo += kStep;
    }
}

std::vector<Span> segment_grid(std::uint64_t lo, std::uint64_t hi, std::uint64_t segment_size) {
    require(segment_size > 0 && segment_size <= kMaxSegmentCap, "segment size out of range");
    std::vector<Span> grid;
    lo = std::max<std::uint64_t>(lo, 1);
    if (lo >= hi) return grid;
    check_range(hi);
    for (std::uint64_t a = lo; a < hi;) {
        std::uint64_t b = std::min(hi, (a / segment_size + 1) * segment_size);
        grid.push_back({a, b});
        a = b;
    }
    return grid;
}

SieveSegment load_or_build(Span span, bool with_spf, const SieveOptions& opts) {
    if (opts.cache) {
        if (auto hit = opts.cache->load(span.lo, span.hi, with_spf)) return std::move(*hit);
    }
    auto seg = build_segment(span.lo, span.hi, with_spf, opts.segment_size);
    if (opts.cache) opts.cache->store(seg);
    return seg;
}

std::uint64_t prime_count(std::uint64_t x, const SieveOptions& opts) {
    if (x < 2) return 0;
    auto counts = map_segments<std::uint64_t>(1, x + 1, opts, [](const SieveSegment& s) { return s.count(); });
    std::uint64_t total = 0;
    for (auto c : counts) total += c;
    return total;
}

double theta_point(std::uint64_t n) { return is_prime(n) ? std::log(static_cast<double>(n)) : 0.0; }

namespace {

double theta_range(std::uint64_t lo, std::uint64_t hi, const SieveOptions& opts) {
    auto parts = map_segments<CompensatedSum>(lo, hi, opts, [](const SieveSegment& s) {
        CompensatedSum acc;
        s.for_each_prime([&](std::uint64_t p) { acc.add(std::log(static_cast<double>(p))); });
        return acc;
    });
    CompensatedSum total;
    for (const auto& part : parts) total.add(part);
    return total.value();
}

}  // namespace

double theta_window(std::uint64_t n, std::uint64_t h, const SieveOptions& opts) {
    require(n >= 1, "theta_window requires n >= 1");
    if (h == 0) return 0.0;
    return theta_range(n + 1, n + h + 1, opts);
}

double theta_sum(std::uint64_t x, const SieveOptions& opts) {
    if (x < 2) return 0.0;
    return theta_range(1, x + 1, opts);
}

PrimorialSupport primorial_support(std::uint64_t x) {
    require(x >= 2, "primorial_support requires x >= 2");
    PrimorialSupport out;
    out.bound = x;
    out.primes = primes_in(1, x + 1);
    return out;
}

std::vector<std::uint64_t> primes_in(std::uint64_t lo, std::uint64_t hi, const SieveOptions& opts) {
    auto parts = map_segments<std::vector<std::uint64_t>>(lo, hi, opts, [](const SieveSegment& s) {
        std::vector<std::uint64_t> v;
        s.for_each_prime([&](std::uint64_t p) { v.push_back(p); });
        return v;
    });
    std::vector<std::uint64_t> out;
    for (auto& part : parts) out.insert(out.end(), part.begin(), part.end());
    return out;
}

std::vector<std::uint32_t> primes_up_to(std::uint64_t x, const SieveOptions& opts) {
    require(x < kSpfLimit, "primes_up_to is limited to 32-bit primes");
    auto parts = map_segments<std::vector<std::uint32_t>>(1, x + 1, opts, [](const SieveSegment& s) {
        std::vector<std::uint32_t> v;
        s.for_each_prime([&](std::uint64_t p) { v.push_back(static_cast<std::uint32_t>(p)); });
        return v;
    });
    std::vector<std::uint32_t> out;
    for (auto& part : parts) out.insert(out.end(), part.begin(), part.end());
    return out;
}

std::vector<std::uint8_t> prime_flags(std::uint64_t lo, std::uint64_t hi, const SieveOptions& opts) {
    std::vector<std::uint8_t> flags(hi > lo ? hi - lo : 0, 0);
    auto grid = segment_grid(lo, hi, opts.segment_size);
    parallel_for(grid.size(), opts.workers, [&](std::size_t i) {
        auto seg = load_or_build(grid[i], false, opts);
        seg.for_each_prime([&](std::uint64_t p) { flags[p - lo] = 1; });
    });
    return flags;
}

FactorTable::FactorTable(std::uint64_t lo, std::uint64_t hi, const SieveOptions& opts)
    : lo_(std::max<std::uint64_t>(lo, 1)), hi_(hi), seg_size_(opts.segment_size) {
    require(lo_ < hi_, "factor table range is empty");
    check_range(hi_);
    if (hi_ > kSpfLimit) return;
    auto grid = segment_grid(lo_, hi_, seg_size_);
    segments_.resize(grid.size());
    parallel_for(grid.size(), opts.workers,
                 [&](std::size_t i) { segments_[i] = load_or_build(grid[i], true, opts); });
}

void distinct_primes_trial(std::uint64_t n, std::uint64_t limit, std::vector<std::uint64_t>& out) {
    std::uint64_t m = n;
    for (std::uint32_t p : base_primes()) {
        if (p > limit || std::uint64_t{p} * p > m) break;
        if (m % p == 0) {
            out.push_back(p);
            do m /= p;
            while (m % p == 0);
        }
    }
    // A cofactor within the limit has no prime factor below its square root.
    if (m > 1 && m <= limit) out.push_back(m);
}

void FactorTable::distinct_primes(std::uint64_t n, std::uint64_t limit, std::vector<std::uint64_t>& out) const {
    if (!covers(n)) {
        throw PreconditionError("factorization substrate missing for " + std::to_string(n));
    }
    if (segments_.empty()) {
        distinct_primes_trial(n, limit, out);
        return;
    }
    // Follow the spf chain while the cofactor stays inside the table, then
    // finish by trial division from the last prime found.
    std::uint64_t m = n;
    std::uint64_t last = 1;
    while (m > 1 && covers(m)) {
        const auto& seg = segments_[(m / seg_size_) - (lo_ / seg_size_)];
        std::uint64_t p = seg.spf(m);
        if (p > limit) return;
        if (p != last) out.push_back(p);
        last = p;
        m /= p;
    }
    if (m <= 1) return;
    for (std::uint32_t p : base_primes()) {
        if (p < last) continue;
        if (p > limit || std::uint64_t{p} * p > m) break;
        if (m % p == 0) {
            if (p != last) out.push_back(p);
            last = p;
            do m /= p;
            while (m % p == 0);
        }
    }
    if (m > 1 && m <= limit && m != last) out.push_back(m);
}

}  // namespace gpylab::sieve
