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
#include <functional>
#include <iosfwd>
#include <span>
#include <string>
#include <vector>

namespace gpylab::tuples {

inline constexpr std::uint64_t kDefaultSingularBound = 1'000'000;
inline constexpr std::uint64_t kDefaultEnumerationBudget = 50'000'000;

// A set of distinct non-negative offsets h_1 < ... < h_k.
class Tuple {
  public:
    // Offsets must already be strictly increasing and non-negative.
    explicit Tuple(std::vector<std::int64_t> offsets);
    // Sorts; rejects duplicates and negatives.
    static Tuple from_unsorted(std::vector<std::int64_t> offsets);

    std::span<const std::int64_t> offsets() const { return offsets_; }
    std::size_t size() const { return offsets_.size(); }
    int k() const { return static_cast<int>(offsets_.size()); }
    std::int64_t min_offset() const { return offsets_.front(); }
    std::int64_t max_offset() const { return offsets_.back(); }
    std::int64_t span() const { return offsets_.back() - offsets_.front(); }

    bool contains(std::int64_t h) const;
    Tuple shifted(std::int64_t c) const;
    // This tuple with h added (unchanged if already present).
    Tuple with(std::int64_t h) const;

    std::string to_string() const;  // "0,2,6"

    bool operator==(const Tuple&) const = default;

  private:
    std::vector<std::int64_t> offsets_;
};

// Number of distinct residues of the offsets modulo the prime p.
int nu_p(const Tuple& H, std::uint64_t p);

// True iff nu_p(H) < p for every prime p. Only p <= k can be covered.
bool is_admissible(const Tuple& H);

struct SingularSeriesValue {
    double value = 0.0;
    std::uint64_t truncation_bound = 0;
    // Bound on |sum over p > P of log[(1-1/p)^-k (1-k/p)]|.
    double tail_log_bound = 0.0;
    bool exact_zero = false;
};

// Euler product of (1-1/p)^-k (1 - nu_p/p) over p <= P, summed in log
// space. Requires P >= max(k, max offset) and P >= 100.
//
// Tail bound: for p > P the log-factor is sum_{j>=2} (k - k^j) p^-j / j,
// bounded by (k/p)^2 * c with c = max(1, 1/(2(1 - k/(P+1)))). Summing with
// sum_{p>P} p^-2 <= 1/(P-1) gives tail_log_bound = c k^2 / (P-1).
SingularSeriesValue singular_series(const Tuple& H, std::uint64_t P = kDefaultSingularBound);

// Closed form of the two-point series for {0, d}: 0 for odd d, else
// 2 C_2 prod_{p | d, p > 2} (p-1)/(p-2).
double twin_singular(std::uint64_t d);
// 2 C_2, from the product truncated at 10^7 (computed once).
double twin_constant();

struct GallagherResult {
    int k = 0;
    std::uint64_t h = 0;
    std::uint64_t P = 0;
    double sum = 0.0;    // k! * sum of S(H) over unordered k-subsets of [1, h]
    double ratio = 0.0;  // sum / h^k
    std::uint64_t admissible_sets = 0;
};

struct GallagherOptions {
    int max_k = 3;
    std::uint64_t budget = kDefaultEnumerationBudget;
    unsigned workers = 1;
};

GallagherResult gallagher_sum(int k, std::uint64_t h, std::uint64_t P = kDefaultSingularBound,
                              const GallagherOptions& opts = {});

// Number of k-subsets of [1, h], saturating at UINT64_MAX.
std::uint64_t subset_count(std::uint64_t h, int k);

// Visits every admissible k-subset of [1, h] once, in lexicographic order.
void for_each_admissible(int k, std::uint64_t h, const std::function<void(const Tuple&)>& fn,
                         std::uint64_t budget = kDefaultEnumerationBudget);
std::vector<Tuple> enumerate_admissible(int k, std::uint64_t h, std::uint64_t budget = kDefaultEnumerationBudget);

// Visits every k-subset of [lo, hi] in lexicographic order.
void for_each_subset(int k, std::int64_t lo, std::int64_t hi, const std::function<void(const Tuple&)>& fn);

void write_gallagher_csv(std::ostream& out, std::span<const GallagherResult> rows);

}  // namespace gpylab::tuples
