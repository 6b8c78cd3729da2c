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

// Slow, obvious reference implementations. Nothing here calls into the
// library.

#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <vector>

namespace oracle {

// Plain sieve of Eratosthenes on [0, n].
inline std::vector<bool> naive_sieve(std::uint64_t n) {
    std::vector<bool> is(n + 1, true);
    is[0] = false;
    if (n >= 1) is[1] = false;
    for (std::uint64_t p = 2; p * p <= n; ++p) {
        if (!is[p]) continue;
        for (std::uint64_t m = p * p; m <= n; m += p) is[m] = false;
    }
    return is;
}

inline bool trial_prime(std::uint64_t n) {
    if (n < 2) return false;
    for (std::uint64_t d = 2; d * d <= n; ++d) {
        if (n % d == 0) return false;
    }
    return true;
}

inline std::vector<std::uint64_t> prime_factors(std::uint64_t n) {
    std::vector<std::uint64_t> f;
    for (std::uint64_t d = 2; d * d <= n; ++d) {
        if (n % d) continue;
        f.push_back(d);
        while (n % d == 0) n /= d;
    }
    if (n > 1) f.push_back(n);
    return f;
}

inline int mobius(std::uint64_t n) {
    int mu = 1;
    for (std::uint64_t d = 2; d * d <= n; ++d) {
        if (n % d) continue;
        n /= d;
        if (n % d == 0) return 0;
        mu = -mu;
    }
    if (n > 1) mu = -mu;
    return mu;
}

// (1/M!) sum over d <= R, d | prod (n + h_i) of mu(d) (log R/d)^M.
inline double lambda_brute(std::uint64_t n, const std::vector<std::int64_t>& H, int M, std::uint64_t R) {
    if (R < 2) return 0.0;
    const double logR = std::log(static_cast<double>(R));
    double s = 0.0;
    for (std::uint64_t d = 1; d <= R; ++d) {
        const int mu = mobius(d);
        if (mu == 0) continue;
        bool divides = true;
        for (auto p : prime_factors(d)) {
            bool hit = false;
            for (auto h : H) hit = hit || (n + static_cast<std::uint64_t>(h)) % p == 0;
            divides = divides && hit;
        }
        if (divides) s += mu * std::pow(logR - std::log(static_cast<double>(d)), M);
    }
    double f = 1.0;
    for (int i = 2; i <= M; ++i) f *= i;
    return s / f;
}

// True iff no prime <= limit divides any n + h.
inline bool rough(std::uint64_t n, const std::vector<std::int64_t>& H, double limit) {
    for (std::uint64_t p = 2; static_cast<double>(p) <= limit; ++p) {
        if (!trial_prime(p)) continue;
        for (auto h : H) {
            if ((n + static_cast<std::uint64_t>(h)) % p == 0) return false;
        }
    }
    return true;
}

inline int residue_classes(const std::vector<std::int64_t>& H, std::uint64_t p) {
    std::vector<std::uint64_t> r;
    for (auto h : H) r.push_back(static_cast<std::uint64_t>(h) % p);
    std::sort(r.begin(), r.end());
    return static_cast<int>(std::unique(r.begin(), r.end()) - r.begin());
}

// Euler product over p <= P.
inline double singular_series(const std::vector<std::int64_t>& H, std::uint64_t P) {
    const auto is = naive_sieve(P);
    const double k = static_cast<double>(H.size());
    double log_s = 0.0;
    for (std::uint64_t p = 2; p <= P; ++p) {
        if (!is[p]) continue;
        const double nu = residue_classes(H, p);
        if (nu >= static_cast<double>(p)) return 0.0;
        log_s += std::log1p(-nu / p) - k * std::log1p(-1.0 / p);
    }
    return std::exp(log_s);
}

inline double theta_up_to(std::uint64_t x, const std::vector<bool>& is) {
    double s = 0.0;
    for (std::uint64_t n = 2; n <= x; ++n) {
        if (is[n]) s += std::log(static_cast<double>(n));
    }
    return s;
}

inline std::uint64_t gcd(std::uint64_t a, std::uint64_t b) {
    while (b) {
        a %= b;
        std::swap(a, b);
    }
    return a;
}

}  // namespace oracle
