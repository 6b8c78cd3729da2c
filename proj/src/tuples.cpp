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

#include "gpylab/tuples.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>
#include <memory>
#include <mutex>
#include <ostream>

#include "gpylab/csv.hpp"
#include "gpylab/errors.hpp"
#include "gpylab/numeric.hpp"
#include "gpylab/parallel.hpp"
#include "gpylab/sieve.hpp"

namespace gpylab::tuples {

Tuple::Tuple(std::vector<std::int64_t> offsets) : offsets_(std::move(offsets)) {
    require(!offsets_.empty(), "tuple must have at least one offset");
    require(offsets_.front() >= 0, "tuple offsets must be non-negative");
    for (std::size_t i = 1; i < offsets_.size(); ++i) {
        require(offsets_[i - 1] < offsets_[i], "tuple offsets must be distinct and increasing");
    }
}

Tuple Tuple::from_unsorted(std::vector<std::int64_t> offsets) {
    std::sort(offsets.begin(), offsets.end());
    return Tuple(std::move(offsets));
}

bool Tuple::contains(std::int64_t h) const { return std::binary_search(offsets_.begin(), offsets_.end(), h); }

Tuple Tuple::shifted(std::int64_t c) const {
    auto v = offsets_;
    for (auto& x : v) x += c;
    return Tuple(std::move(v));
}

Tuple Tuple::with(std::int64_t h) const {
    if (contains(h)) return *this;
    auto v = offsets_;
    v.insert(std::upper_bound(v.begin(), v.end(), h), h);
    return Tuple(std::move(v));
}

std::string Tuple::to_string() const {
    std::string s;
    for (std::size_t i = 0; i < offsets_.size(); ++i) {
        if (i) s += ',';
        s += std::to_string(offsets_[i]);
    }
    return s;
}

namespace {

int count_residues(std::span<const std::int64_t> offsets, std::uint64_t p, std::vector<std::uint8_t>& seen) {
    if (offsets.size() >= p) {
        seen.assign(p, 0);
    } else {
        seen.clear();
    }
    int nu = 0;
    if (!seen.empty()) {
        for (auto h : offsets) {
            auto r = static_cast<std::uint64_t>(h) % p;
            if (!seen[r]) {
                seen[r] = 1;
                ++nu;
            }
        }
        return nu;
    }
    // Few offsets relative to p: compare residues pairwise.
    std::vector<std::uint64_t> res;
    res.reserve(offsets.size());
    for (auto h : offsets) res.push_back(static_cast<std::uint64_t>(h) % p);
    std::sort(res.begin(), res.end());
    return static_cast<int>(std::unique(res.begin(), res.end()) - res.begin());
}

// Suffix sums of log[(1-1/p)^-k (1-k/p)] over primes p <= P, for p > k.
struct SeriesTable {
    std::vector<std::uint32_t> primes;
    std::vector<double> suffix;  // suffix[i] = sum over j >= i; suffix[n] = 0
};

std::shared_ptr<const SeriesTable> series_table(int k, std::uint64_t P) {
    static std::mutex mu;
    static std::map<std::pair<int, std::uint64_t>, std::shared_ptr<const SeriesTable>> memo;
    std::lock_guard lock(mu);
    auto key = std::make_pair(k, P);
    if (auto it = memo.find(key); it != memo.end()) return it->second;

    auto t = std::make_shared<SeriesTable>();
    t->primes = sieve::primes_up_to(P);
    t->suffix.assign(t->primes.size() + 1, 0.0);
    CompensatedSum acc;
    for (std::size_t i = t->primes.size(); i-- > 0;) {
        double p = t->primes[i];
        if (t->primes[i] > static_cast<std::uint32_t>(k)) {
            acc.add(-k * std::log1p(-1.0 / p) + std::log1p(-k / p));
        }
        t->suffix[i] = acc.value();
    }
    memo.emplace(key, t);
    return t;
}

}  // namespace

int nu_p(const Tuple& H, std::uint64_t p) {
    require(p >= 2 && sieve::is_prime(p), "nu_p requires a prime modulus");
    std::vector<std::uint8_t> seen;
    return count_residues(H.offsets(), p, seen);
}

bool is_admissible(const Tuple& H) {
    std::vector<std::uint8_t> seen;
    for (std::uint32_t p : sieve::base_primes()) {
        if (p > static_cast<std::uint64_t>(H.k())) break;
        if (count_residues(H.offsets(), p, seen) == static_cast<int>(p)) return false;
    }
    return true;
}

SingularSeriesValue singular_series(const Tuple& H, std::uint64_t P) {
    const int k = H.k();
    require(P >= 100, "singular_series requires P >= 100");
    require(P >= static_cast<std::uint64_t>(k) && P >= static_cast<std::uint64_t>(H.max_offset()),
            "singular_series requires P >= max(k, max offset)");

    SingularSeriesValue out;
    out.truncation_bound = P;
    double c = std::max(1.0, 1.0 / (2.0 * (1.0 - k / (static_cast<double>(P) + 1.0))));
    out.tail_log_bound = c * double(k) * k / (static_cast<double>(P) - 1.0);

    auto table = series_table(k, P);
    // Beyond `individual` every offset sits in its own class, so nu_p = k.
    const std::uint64_t individual = std::max<std::uint64_t>(static_cast<std::uint64_t>(H.span()), k);
    CompensatedSum log_value;
    std::vector<std::uint8_t> seen;
    std::size_t i = 0;
    for (; i < table->primes.size() && table->primes[i] <= individual; ++i) {
        const std::uint64_t p = table->primes[i];
        int nu = count_residues(H.offsets(), p, seen);
        if (nu == static_cast<int>(p)) {
            out.exact_zero = true;
            out.value = 0.0;
            return out;
        }
        double pd = static_cast<double>(p);
        log_value.add(-k * std::log1p(-1.0 / pd) + std::log1p(-nu / pd));
    }
    log_value.add(table->suffix[i]);
    out.value = std::exp(log_value.value());
    return out;
}

double twin_constant() {
    static const double value = [] {
        auto primes = sieve::primes_up_to(10'000'000);
        CompensatedSum acc;
        for (std::uint32_t p : primes) {
            if (p == 2) continue;
            double q = static_cast<double>(p) - 1.0;
            acc.add(std::log1p(-1.0 / (q * q)));
        }
        return 2.0 * std::exp(acc.value());
    }();
    return value;
}

double twin_singular(std::uint64_t d) {
    require(d >= 1, "twin_singular requires d >= 1");
    if (d % 2) return 0.0;
    std::vector<std::uint64_t> primes;
    sieve::distinct_primes_trial(d, d, primes);
    double v = twin_constant();
    for (auto p : primes) {
        if (p > 2) v *= (static_cast<double>(p) - 1.0) / (static_cast<double>(p) - 2.0);
    }
    return v;
}

std::uint64_t subset_count(std::uint64_t h, int k) {
    if (k < 0 || static_cast<std::uint64_t>(k) > h) return 0;
    unsigned __int128 c = 1;
    for (int i = 1; i <= k; ++i) {
        c = c * (h - k + i) / i;
        if (c > std::numeric_limits<std::uint64_t>::max()) return std::numeric_limits<std::uint64_t>::max();
    }
    return static_cast<std::uint64_t>(c);
}

void for_each_subset(int k, std::int64_t lo, std::int64_t hi, const std::function<void(const Tuple&)>& fn) {
    if (k <= 0 || hi - lo + 1 < k) return;
    std::vector<std::int64_t> cur(k);
    for (int i = 0; i < k; ++i) cur[i] = lo + i;
    for (;;) {
        fn(Tuple(cur));
        int i = k - 1;
        while (i >= 0 && cur[i] == hi - (k - 1 - i)) --i;
        if (i < 0) return;
        ++cur[i];
        for (int j = i + 1; j < k; ++j) cur[j] = cur[j - 1] + 1;
    }
}

void for_each_admissible(int k, std::uint64_t h, const std::function<void(const Tuple&)>& fn, std::uint64_t budget) {
    require(k >= 1, "tuple size must be >= 1");
    if (subset_count(h, k) > budget) {
        throw BudgetExceeded("C(" + std::to_string(h) + "," + std::to_string(k) + ") exceeds the enumeration budget");
    }
    for_each_subset(k, 1, static_cast<std::int64_t>(h), [&](const Tuple& t) {
        if (is_admissible(t)) fn(t);
    });
}

std::vector<Tuple> enumerate_admissible(int k, std::uint64_t h, std::uint64_t budget) {
    std::vector<Tuple> out;
    for_each_admissible(k, h, [&](const Tuple& t) { out.push_back(t); }, budget);
    return out;
}

GallagherResult gallagher_sum(int k, std::uint64_t h, std::uint64_t P, const GallagherOptions& opts) {
    require(k >= 1 && k <= opts.max_k, "gallagher_sum requires 1 <= k <= " + std::to_string(opts.max_k));
    require(h >= static_cast<std::uint64_t>(k), "gallagher_sum requires h >= k");
    if (subset_count(h, k) > opts.budget) {
        throw BudgetExceeded("gallagher_sum enumeration of C(" + std::to_string(h) + "," + std::to_string(k) +
                             ") subsets exceeds the budget");
    }

    // One block per smallest element; blocks merge in ascending order.
    struct Block {
        CompensatedSum sum;
        std::uint64_t admissible = 0;
    };
    const std::size_t n_blocks = h - k + 1;
    auto blocks = parallel_map<Block>(n_blocks, opts.workers, [&](std::size_t b) {
        Block out;
        const std::int64_t first = static_cast<std::int64_t>(b) + 1;
        auto visit = [&](std::span<const std::int64_t> rest) {
            std::vector<std::int64_t> v{first};
            v.insert(v.end(), rest.begin(), rest.end());
            Tuple t(std::move(v));
            auto s = singular_series(t, P);
            if (!s.exact_zero) {
                out.sum.add(s.value);
                ++out.admissible;
            }
        };
        if (k == 1) {
            visit({});
        } else {
            for_each_subset(k - 1, first + 1, static_cast<std::int64_t>(h),
                            [&](const Tuple& rest) { visit(rest.offsets()); });
        }
        return out;
    });

    GallagherResult r;
    r.k = k;
    r.h = h;
    r.P = P;
    CompensatedSum total;
    for (const auto& b : blocks) {
        total.add(b.sum);
        r.admissible_sets += b.admissible;
    }
    r.sum = factorial(k) * total.value();
    r.ratio = r.sum / std::pow(static_cast<double>(h), k);
    return r;
}

void write_gallagher_csv(std::ostream& out, std::span<const GallagherResult> rows) {
    csv::write_preamble(out, "gallagher", 1, {"k", "h", "P", "sum", "ratio"});
    for (const auto& r : rows) csv::write_row(out, r.k, r.h, r.P, r.sum, r.ratio);
}

}  // namespace gpylab::tuples
