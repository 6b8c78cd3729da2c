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
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include <gmpxx.h>
#include "json.hpp"

namespace gpylab::analytic {

using Rational = mpq_class;
using Integer = mpz_class;

// Accepts "3", "-1/2", "0.96", "1e-3", "2.5E2". Result is exact.
Rational parse_rational(std::string_view text);
std::string to_string(const Rational& q);
double to_double(const Rational& q);
Integer binom(unsigned long n, unsigned long k);
Integer factorial_z(unsigned long n);

// Dense polynomial with exact coefficients, ascending degree, trailing zeros
// trimmed.
class RationalPoly {
  public:
    RationalPoly() = default;
    explicit RationalPoly(std::vector<Rational> coeffs);

    static RationalPoly constant(const Rational& c);
    // c0 + c1 x
    static RationalPoly linear(const Rational& c0, const Rational& c1);

    const std::vector<Rational>& coeffs() const { return c_; }
    int degree() const { return static_cast<int>(c_.size()) - 1; }  // -1 for zero
    Rational coeff(std::size_t i) const { return i < c_.size() ? c_[i] : Rational(0); }

    RationalPoly operator+(const RationalPoly& o) const;
    RationalPoly operator*(const RationalPoly& o) const;
    bool operator==(const RationalPoly& o) const { return c_ == o.c_; }

    // Product truncated to degree n.
    RationalPoly mul_trunc(const RationalPoly& o, int n) const;
    RationalPoly pow_trunc(unsigned e, int n) const;
    // Power series 1/p to degree n; requires p(0) != 0.
    RationalPoly inverse_series(int n) const;
    Rational eval(const Rational& x) const;

  private:
    void trim();
    std::vector<Rational> c_;
};

struct TQ1 {
    Rational closed;
    Rational series;
    bool equal = false;
};

// closed = (1+a)^(k+l) sum_{m<=l} C(2l-m, l) C(k+m-1, m) (-a)^m;
// series = [xi^l] (1+a+xi)^(k+2l) (1+xi)^-k.
TQ1 t_q1(int k, int l, const Rational& alpha);

struct ExpansionCoeffs {
    int k = 0, l = 0;
    Rational c0, c1, c2;
    bool c0_ok = false;  // c0 = C(2l, l)
    bool c1_ok = false;  // c1 / c0 = k/2 + l
    bool K_checked = false;
    Rational K;          // meaningful when K_checked
    bool K_ok = false;   // c2 / c0 = K
};

// K = k^2/8 + kl/2 - 3k/8 + l^2/2 - l/2 - k(k+1)/(8(2l-1)), for l >= 1.
Rational K_formula(int k, int l);
ExpansionCoeffs expansion_coeffs(int k, int l);

// k!^2 (k+r)! (k^4 + 3k^3 + (3r+2)k^2 + 4rk + r^2) / (r!^2 (k+2-r)!).
Integer d_formula(int k, int r);

// How the pair (h', h'') is counted.
enum class PairConvention {
    ordered_with_equal,  // all ordered pairs, h' = h'' allowed
    ordered_distinct,    // ordered pairs with h' != h''
    unordered,           // h' <= h''
};
std::string to_string(PairConvention c);

// Counts (h', h'', H1, H2) with h', h'' in [1, h], H1, H2 k-subsets of [1, h]
// in all k! orderings each, whose union is exactly H0.
std::uint64_t d_oracle(int k, std::span<const int> H0, int h, PairConvention c);

struct DkrReport {
    int k = 0, r = 0, h = 0;
    Integer formula;
    // counts[c][j]: convention c, representative j.
    std::vector<std::vector<std::uint64_t>> counts;
    std::vector<std::vector<int>> representatives;
    bool representative_independent = false;
    std::vector<PairConvention> matching;
};

// Runs the oracle for all three conventions over three representatives
// (first, middle and last (k+r)-subset of [1, h] in lexicographic order).
DkrReport dkr_report(int k, int r, int h);

struct Check315 {
    Rational lhs, rhs;
    bool holds = false;
};

// sum_{r=0}^{k+2} (k+r)! D(k,r) u^(k+r) <= (2k+2)!^2 u^k (1+u)^(k+2).
Check315 check_315(int k, const Rational& u);

// k/(k+2l+1) * 2(2l+1)/(l+1) * rho + eta - 1 + err.
double bracket(long k, long l, double rho, double eta, double err = 0.0);
Rational bracket_exact(long k, long l, const Rational& rho, const Rational& eta);

struct ParamReport {
    std::string kind;        // "unconditional", "xi", "eh"
    std::string param_name;  // "eta" or "xi"
    Rational param;
    long l = 0;
    long k = 0;
    Rational delta;
    Rational rho;
    double bracket = 0.0;
    double error_magnitude = 0.0;    // k^3 delta^2
    double error_multiplier = 1.0;
    std::vector<std::pair<std::string, double>> extras;
    std::vector<std::pair<std::string, bool>> checks;
    // Existential constants, carried by name only.
    std::vector<std::string> labels;
};

nlohmann::json to_json(const ParamReport& r);

// l = floor(4/eta), k = 2(l+1)(2l+1), delta = l^-4, rho = 1/(4(1+delta)).
// Requires 0 < eta <= 0.2.
ParamReport select_unconditional(const Rational& eta, double error_multiplier = 1.0);

struct CondSelection {
    Rational theta;
    long k = 0;
    long l = 0;
    Rational value;  // k/(k+2l+1) * 2(2l+1)/(l+1) * theta/2
};

// Minimal k (with the l in [0, k) maximizing the bracket) such that
// k/(k+2l+1) * 2(2l+1)/(l+1) * theta/2 > 1. Requires 1/2 < theta <= 1;
// throws BudgetExceeded if no k <= max_k works.
CondSelection select_conditional(const Rational& theta, long max_k = 100'000);

// l = ceil(1/xi), k = 2(l+1)(2l+1), delta = l^-4,
// rho = (1/2 + xi) / (2(1 + delta)), eta = xi^4 / 5. Requires 0 < xi <= 0.2.
ParamReport xi_regime(const Rational& xi);

// k = smallest integer > max(144/eta^2, 36), l = floor(sqrt(k)/2),
// delta = k^-2, rho = 1/(2(1+delta)); bracket with the -2 constant and the
// k^3 delta^2 term. Requires 0 < eta <= 1.
ParamReport eh_two_shift(const Rational& eta);

struct IdentityRow {
    int k = 0, l = 0;
    Rational alpha;
    TQ1 result;
};

void write_identity_csv(std::ostream& out, std::span<const IdentityRow> rows);
void write_expansion_csv(std::ostream& out, std::span<const ExpansionCoeffs> rows);
void write_dkr_csv(std::ostream& out, std::span<const DkrReport> rows);

}  // namespace gpylab::analytic
