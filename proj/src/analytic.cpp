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

#include "gpylab/analytic.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <ostream>
#include <regex>

#include <fmt/format.h>

#include "gpylab/csv.hpp"
#include "gpylab/errors.hpp"

namespace gpylab::analytic {

namespace {

Integer pow10(unsigned long e) {
    Integer r;
    mpz_ui_pow_ui(r.get_mpz_t(), 10, e);
    return r;
}

Rational qpow(const Rational& base, unsigned long e) {
    Integer n, d;
    mpz_pow_ui(n.get_mpz_t(), base.get_num_mpz_t(), e);
    mpz_pow_ui(d.get_mpz_t(), base.get_den_mpz_t(), e);
    Rational r(n, d);
    r.canonicalize();
    return r;
}

Integer floor_q(const Rational& q) {
    Integer r;
    mpz_fdiv_q(r.get_mpz_t(), q.get_num_mpz_t(), q.get_den_mpz_t());
    return r;
}

Integer ceil_q(const Rational& q) {
    Integer r;
    mpz_cdiv_q(r.get_mpz_t(), q.get_num_mpz_t(), q.get_den_mpz_t());
    return r;
}

long to_long(const Integer& z) {
    require(z.fits_slong_p(), "integer parameter out of range");
    return z.get_si();
}

Rational q(long n, long d = 1) {
    Rational r(n, d);
    r.canonicalize();
    return r;
}

Rational qz(const Integer& z) { return Rational(z); }

}  // namespace

Rational parse_rational(std::string_view text) {
    static const std::regex frac(R"(^([+-]?\d+)/(\d+)$)");
    static const std::regex dec(R"(^([+-]?)(\d*)(?:\.(\d*))?(?:[eE]([+-]?\d+))?$)");
    std::string s(text);
    if (s.size() > 1 && s[0] == '+' && s[1] != '-') s.erase(0, 1);
    std::smatch m;
    if (std::regex_match(s, m, frac)) {
        Integer den(m[2].str(), 10);
        require(den != 0, "rational denominator must be non-zero");
        Rational r(Integer(m[1].str(), 10), den);
        r.canonicalize();
        return r;
    }
    if (std::regex_match(s, m, dec) && (m[2].length() + m[3].length()) > 0) {
        const std::string whole = m[2].str(), frac_digits = m[3].str();
        Integer num(whole.empty() && frac_digits.empty() ? "0" : whole + frac_digits, 10);
        Rational r(num, pow10(frac_digits.size()));
        if (m[4].matched) {
            long e = std::stol(m[4].str());
            require(std::labs(e) <= 4000, "exponent out of range");
            if (e >= 0) {
                r *= qz(pow10(static_cast<unsigned long>(e)));
            } else {
                r /= qz(pow10(static_cast<unsigned long>(-e)));
            }
        }
        if (m[1].str() == "-") r = -r;
        r.canonicalize();
        return r;
    }
    throw PreconditionError(fmt::format("cannot parse '{}' as a rational number", s));
}

std::string to_string(const Rational& r) { return r.get_str(); }
double to_double(const Rational& r) { return r.get_d(); }

Integer binom(unsigned long n, unsigned long k) {
    Integer r;
    mpz_bin_uiui(r.get_mpz_t(), n, k);
    return r;
}

Integer factorial_z(unsigned long n) {
    Integer r;
    mpz_fac_ui(r.get_mpz_t(), n);
    return r;
}

// RationalPoly

RationalPoly::RationalPoly(std::vector<Rational> coeffs) : c_(std::move(coeffs)) { trim(); }

RationalPoly RationalPoly::constant(const Rational& c) { return RationalPoly({c}); }
RationalPoly RationalPoly::linear(const Rational& c0, const Rational& c1) { return RationalPoly({c0, c1}); }

void RationalPoly::trim() {
    while (!c_.empty() && c_.back() == 0) c_.pop_back();
}

RationalPoly RationalPoly::operator+(const RationalPoly& o) const {
    std::vector<Rational> r(std::max(c_.size(), o.c_.size()));
    for (std::size_t i = 0; i < r.size(); ++i) r[i] = coeff(i) + o.coeff(i);
    return RationalPoly(std::move(r));
}

RationalPoly RationalPoly::operator*(const RationalPoly& o) const {
    if (c_.empty() || o.c_.empty()) return {};
    return mul_trunc(o, degree() + o.degree());
}

RationalPoly RationalPoly::mul_trunc(const RationalPoly& o, int n) const {
    if (c_.empty() || o.c_.empty() || n < 0) return {};
    std::vector<Rational> r(std::min<std::size_t>(n + 1, c_.size() + o.c_.size() - 1));
    for (std::size_t i = 0; i < c_.size() && i < r.size(); ++i) {
        for (std::size_t j = 0; j < o.c_.size() && i + j < r.size(); ++j) r[i + j] += c_[i] * o.c_[j];
    }
    return RationalPoly(std::move(r));
}

RationalPoly RationalPoly::pow_trunc(unsigned e, int n) const {
    RationalPoly r = constant(1);
    for (unsigned i = 0; i < e; ++i) r = r.mul_trunc(*this, n);
    return r;
}

RationalPoly RationalPoly::inverse_series(int n) const {
    require(!c_.empty() && c_[0] != 0, "inverse_series needs a non-zero constant term");
    std::vector<Rational> inv(n + 1);
    inv[0] = 1 / c_[0];
    for (int i = 1; i <= n; ++i) {
        Rational s = 0;
        for (int j = 1; j <= i; ++j) s += coeff(j) * inv[i - j];
        inv[i] = -s / c_[0];
    }
    return RationalPoly(std::move(inv));
}

Rational RationalPoly::eval(const Rational& x) const {
    Rational r = 0;
    for (std::size_t i = c_.size(); i-- > 0;) r = r * x + c_[i];
    return r;
}

// Identity and expansion

namespace {

void check_kl(int k, int l) {
    require(k >= 1, "k must be >= 1");
    require(l >= 0 && l < k, "l must satisfy 0 <= l < k");
}

// sum_{m<=l} C(2l-m, l) C(k+m-1, m) (-a)^m as a polynomial in a.
RationalPoly closed_inner(int k, int l) {
    std::vector<Rational> c(l + 1);
    for (int m = 0; m <= l; ++m) {
        Rational term = qz(binom(2 * l - m, l) * binom(k + m - 1, m));
        c[m] = m % 2 ? -term : term;
    }
    return RationalPoly(std::move(c));
}

}  // namespace

TQ1 t_q1(int k, int l, const Rational& alpha) {
    check_kl(k, l);
    require(alpha != -1, "alpha = -1 is excluded");
    TQ1 out;
    out.closed = qpow(1 + alpha, k + l) * closed_inner(k, l).eval(alpha);

    // (1 + a + xi)^(k+2l) by repeated multiplication, (1 + xi)^-k by series
    // inversion of (1 + xi)^k.
    const RationalPoly shifted = RationalPoly::linear(1 + alpha, 1);
    const RationalPoly numer = shifted.pow_trunc(k + 2 * l, l);
    const RationalPoly denom = RationalPoly::linear(1, 1).pow_trunc(k, l).inverse_series(l);
    out.series = numer.mul_trunc(denom, l).coeff(l);
    out.equal = out.closed == out.series;
    return out;
}

Rational K_formula(int k, int l) {
    require(l >= 1, "K formula needs l >= 1");
    const Rational K = q(k * k, 8) + q(k * l, 2) - q(3 * k, 8) + q(l * l, 2) - q(l, 2) -
                       q(k * (k + 1), 8 * (2 * l - 1));
    return K;
}

ExpansionCoeffs expansion_coeffs(int k, int l) {
    check_kl(k, l);
    ExpansionCoeffs e;
    e.k = k;
    e.l = l;
    const RationalPoly P = RationalPoly::linear(1, 1).pow_trunc(k + l, 2).mul_trunc(closed_inner(k, l), 2);
    e.c0 = P.coeff(0);
    e.c1 = P.coeff(1);
    e.c2 = P.coeff(2);
    e.c0_ok = e.c0 == qz(binom(2 * l, l));
    e.c1_ok = e.c0 != 0 && e.c1 / e.c0 == q(k, 2) + l;
    if (l >= 1) {
        e.K_checked = true;
        e.K = K_formula(k, l);
        e.K_ok = e.c2 / e.c0 == e.K;
    }
    return e;
}

// D(k, r)

Integer d_formula(int k, int r) {
    require(k >= 1, "d_formula requires k >= 1");
    require(r >= 0 && r <= k + 2, fmt::format("d_formula requires 0 <= r <= k+2, got r = {}", r));
    const Integer kk = k, rr = r;
    const Integer poly = kk * kk * kk * kk + 3 * kk * kk * kk + (3 * rr + 2) * kk * kk + 4 * rr * kk + rr * rr;
    const Integer num = factorial_z(k) * factorial_z(k) * factorial_z(k + r) * poly;
    const Integer den = factorial_z(r) * factorial_z(r) * factorial_z(k + 2 - r);
    if (num % den != 0) throw InvariantViolation(fmt::format("D({}, {}) is not an integer", k, r));
    return num / den;
}

std::string to_string(PairConvention c) {
    switch (c) {
        case PairConvention::ordered_with_equal: return "ordered_with_equal";
        case PairConvention::ordered_distinct: return "ordered_distinct";
        case PairConvention::unordered: return "unordered";
    }
    return "unknown";
}

std::uint64_t d_oracle(int k, std::span<const int> H0, int h, PairConvention c) {
    require(k >= 1, "d_oracle requires k >= 1");
    require(h >= 1 && h <= 20, "d_oracle requires 1 <= h <= 20");
    std::uint32_t target = 0;
    for (int x : H0) {
        require(x >= 1 && x <= h, "representative must lie in [1, h]");
        target |= 1u << (x - 1);
    }
    std::vector<std::uint32_t> subsets;
    for (std::uint32_t m = 0; m < (1u << h); ++m) {
        if (std::popcount(m) == k) subsets.push_back(m);
    }
    const double work = static_cast<double>(subsets.size()) * subsets.size() * h * h;
    if (work > 5e9) throw BudgetExceeded("d_oracle enumeration exceeds its budget");

    std::uint64_t count = 0;
    for (auto H1 : subsets) {
        for (auto H2 : subsets) {
            const std::uint32_t U = H1 | H2;
            if ((U | target) != target) continue;  // some element falls outside H0
            for (int a = 1; a <= h; ++a) {
                for (int b = 1; b <= h; ++b) {
                    if (c == PairConvention::ordered_distinct && a == b) continue;
                    if (c == PairConvention::unordered && a > b) continue;
                    if ((U | (1u << (a - 1)) | (1u << (b - 1))) == target) ++count;
                }
            }
        }
    }
    std::uint64_t kf = 1;
    for (int i = 2; i <= k; ++i) kf *= static_cast<std::uint64_t>(i);
    return count * kf * kf;
}

DkrReport dkr_report(int k, int r, int h) {
    DkrReport rep;
    rep.k = k;
    rep.r = r;
    rep.h = h;
    rep.formula = d_formula(k, r);
    const int size = k + r;
    require(h >= size, "dkr_report requires h >= k + r");

    std::vector<std::vector<int>> all;
    std::vector<int> cur(size);
    for (int i = 0; i < size; ++i) cur[i] = i + 1;
    for (;;) {
        all.push_back(cur);
        int i = size - 1;
        while (i >= 0 && cur[i] == h - (size - 1 - i)) --i;
        if (i < 0) break;
        ++cur[i];
        for (int j = i + 1; j < size; ++j) cur[j] = cur[j - 1] + 1;
    }
    rep.representatives = {all.front(), all[all.size() / 2], all.back()};

    rep.representative_independent = true;
    for (auto c : {PairConvention::ordered_with_equal, PairConvention::ordered_distinct, PairConvention::unordered}) {
        std::vector<std::uint64_t> counts;
        for (const auto& H0 : rep.representatives) counts.push_back(d_oracle(k, H0, h, c));
        const bool same = std::all_of(counts.begin(), counts.end(), [&](auto v) { return v == counts.front(); });
        rep.representative_independent = rep.representative_independent && same;
        if (same && Integer(static_cast<unsigned long>(counts.front())) == rep.formula) rep.matching.push_back(c);
        rep.counts.push_back(std::move(counts));
    }
    return rep;
}

Check315 check_315(int k, const Rational& u) {
    require(k >= 1 && k <= 6, "check_315 requires 1 <= k <= 6");
    require(u > 0, "check_315 requires u > 0");
    Check315 c;
    for (int r = 0; r <= k + 2; ++r) c.lhs += qz(factorial_z(k + r) * d_formula(k, r)) * qpow(u, k + r);
    const Integer f = factorial_z(2 * k + 2);
    c.rhs = qz(f * f) * qpow(u, k) * qpow(1 + u, k + 2);
    c.holds = c.lhs <= c.rhs;
    return c;
}

// Brackets and parameter selection

double bracket(long k, long l, double rho, double eta, double err) {
    require(k >= 1 && l >= 0, "bracket requires k >= 1, l >= 0");
    const double kd = static_cast<double>(k), ld = static_cast<double>(l);
    return kd / (kd + 2 * ld + 1) * (2 * (2 * ld + 1) / (ld + 1)) * rho + eta - 1 + err;
}

Rational bracket_exact(long k, long l, const Rational& rho, const Rational& eta) {
    require(k >= 1 && l >= 0, "bracket requires k >= 1, l >= 0");
    return q(k, k + 2 * l + 1) * q(2 * (2 * l + 1), l + 1) * rho + eta - 1;
}

nlohmann::json to_json(const ParamReport& r) {
    nlohmann::json j;
    j["kind"] = r.kind;
    j[r.param_name] = to_double(r.param);
    j[r.param_name + "_exact"] = to_string(r.param);
    j["l"] = r.l;
    j["k"] = r.k;
    j["delta"] = to_double(r.delta);
    j["delta_exact"] = to_string(r.delta);
    j["rho"] = to_double(r.rho);
    j["rho_exact"] = to_string(r.rho);
    j["bracket"] = r.bracket;
    j["error_magnitude"] = r.error_magnitude;
    j["error_multiplier"] = r.error_multiplier;
    nlohmann::json extras = nlohmann::json::object();
    for (const auto& [name, v] : r.extras) extras[name] = v;
    j["extras"] = extras;
    nlohmann::json checks = nlohmann::json::object();
    for (const auto& [name, v] : r.checks) checks[name] = v;
    j["checks"] = checks;
    j["labels"] = r.labels;
    return j;
}

ParamReport select_unconditional(const Rational& eta, double error_multiplier) {
    require(eta > 0 && eta <= q(1, 5), "select_unconditional requires 0 < eta <= 0.2");
    ParamReport rep;
    rep.kind = "unconditional";
    rep.param_name = "eta";
    rep.param = eta;
    rep.error_multiplier = error_multiplier;
    rep.l = to_long(floor_q(4 / eta));
    rep.k = 2 * (rep.l + 1) * (2 * rep.l + 1);
    const Rational l4 = qpow(q(rep.l), 4);
    rep.delta = 1 / l4;
    rep.rho = 1 / (4 * (1 + rep.delta));
    rep.bracket = to_double(bracket_exact(rep.k, rep.l, rep.rho, eta));
    const Rational err = qpow(q(rep.k), 3) * rep.delta * rep.delta;
    rep.error_magnitude = to_double(err);

    const Rational u = 4 * eta * (l4 + 1);
    if (u <= 16) throw InvariantViolation("h / (delta log R) = 4 eta (l^4 + 1) must exceed 16");
    const double log2 = std::log(2.0);
    const double eta_d = to_double(eta);
    const double bound_exponent = 65.0 * std::pow(4.0 / eta_d, 6) * log2;
    // Limit of (4k log 3N / (delta log R)) log 2 as N grows, at rho = 1/(4(1+delta)).
    const double dominant_exponent = 16.0 * static_cast<double>(rep.k) * to_double(l4 + 1) * log2;
    const double robust = rep.bracket - error_multiplier * rep.error_magnitude;

    rep.extras = {
        {"u", to_double(u)},
        {"c3", std::ceil(65.0 * 4096.0 * log2)},
        {"exponent_bound", bound_exponent},
        {"exponent_dominant", dominant_exponent},
        {"bracket_minus_error", robust},
        {"half_eta", eta_d / 2},
    };
    rep.checks = {
        {"u_gt_16", true},
        {"bracket_gt_half_eta", bracket_exact(rep.k, rep.l, rep.rho, eta) > eta / 2},
        {"error_lt_tenth_eta", err < eta / 10},
        {"bracket_minus_error_gt_half_eta", robust > eta_d / 2},
        {"dominant_exponent_within_bound", dominant_exponent <= bound_exponent},
    };
    rep.labels = {"c", "c1", "c2"};
    return rep;
}

CondSelection select_conditional(const Rational& theta, long max_k) {
    require(theta > q(1, 2) && theta <= 1, "select_conditional requires 1/2 < theta <= 1");
    const Integer a = theta.get_num(), b = theta.get_den();
    using i128 = __int128;
    for (long k = 1; k <= max_k; ++k) {
        // f(l) = 2k(2l+1) / ((k+2l+1)(l+1)) is unimodal in l; climb while it grows.
        long l = 0;
        while (l + 1 < k) {
            const i128 lhs = i128(2 * l + 3) * (k + 2 * l + 1) * (l + 1);
            const i128 rhs = i128(2 * l + 1) * (k + 2 * l + 3) * (l + 2);
            if (lhs <= rhs) break;  // f(l+1) <= f(l)
            ++l;
        }
        // k(2l+1) a > (k+2l+1)(l+1) b
        if (Integer(k) * (2 * l + 1) * a > Integer(k + 2 * l + 1) * (l + 1) * b) {
            CondSelection s;
            s.theta = theta;
            s.k = k;
            s.l = l;
            s.value = q(k, k + 2 * l + 1) * q(2 * (2 * l + 1), l + 1) * theta / 2;
            return s;
        }
    }
    throw BudgetExceeded(
        fmt::format("no (k, l) with k <= {} satisfies the criterion for theta = {}", max_k, to_string(theta)));
}

ParamReport xi_regime(const Rational& xi) {
    require(xi > 0 && xi <= q(1, 5), "xi_regime requires 0 < xi <= 0.2");
    ParamReport rep;
    rep.kind = "xi";
    rep.param_name = "xi";
    rep.param = xi;
    rep.l = to_long(ceil_q(1 / xi));
    rep.k = 2 * (rep.l + 1) * (2 * rep.l + 1);
    const Rational l4 = qpow(q(rep.l), 4);
    rep.delta = 1 / l4;
    rep.rho = (q(1, 2) + xi) / (2 * (1 + rep.delta));
    const Rational rho_alt = (1 + 2 * xi) / (4 * (1 + 1 / l4));
    const Rational eta = qpow(xi, 4) / 5;
    const Rational br = bracket_exact(rep.k, rep.l, rep.rho, eta);
    rep.bracket = to_double(br);
    rep.error_magnitude = to_double(qpow(q(rep.k), 3) * rep.delta * rep.delta);
    const Rational u = 4 * (1 + l4) * eta / (1 + 2 * xi);
    const Rational exponent = 4 / (xi * xi) + 14 / xi + 11;
    const Rational target = eta + xi / 2;
    const Rational approx = eta + 2 * xi - q(1, rep.l) - 2 * xi / rep.l;
    rep.extras = {
        {"eta_max", to_double(eta)},
        {"u", to_double(u)},
        {"exponent", to_double(exponent)},
        {"eta_power_k_minus_1", static_cast<double>(rep.k - 1)},
        {"bracket_target", to_double(target)},
        {"bracket_leading_terms", to_double(approx)},
    };
    rep.checks = {
        {"rho_forms_agree", rho_alt == rep.rho},
        {"bracket_gt_target", br > target},
    };
    rep.labels = {"c6(xi)"};
    return rep;
}

ParamReport eh_two_shift(const Rational& eta) {
    require(eta > 0 && eta <= 1, "eh_two_shift requires 0 < eta <= 1");
    ParamReport rep;
    rep.kind = "eh";
    rep.param_name = "eta";
    rep.param = eta;
    rep.k = std::max(to_long(floor_q(144 / (eta * eta))), 36L) + 1;
    rep.l = static_cast<long>(std::sqrt(static_cast<double>(rep.k)));
    while (rep.l * rep.l > rep.k) --rep.l;
    while ((rep.l + 1) * (rep.l + 1) <= rep.k) ++rep.l;
    rep.l /= 2;
    rep.delta = 1 / qpow(q(rep.k), 2);
    rep.rho = 1 / (2 * (1 + rep.delta));
    const Rational err = qpow(q(rep.k), 3) * rep.delta * rep.delta;
    const Rational br = bracket_exact(rep.k, rep.l, rep.rho, eta) - 1 - err;
    rep.bracket = to_double(br);
    rep.error_magnitude = to_double(err);
    const double eta_d = to_double(eta);
    const double chain = eta_d - 6.0 / std::sqrt(static_cast<double>(rep.k));
    rep.extras = {
        {"chain_bound", chain},
        {"half_eta", eta_d / 2},
        {"u", to_double(2 * eta * (1 + 1 / rep.delta))},
        {"c7", 5.0},
    };
    rep.checks = {
        {"k_gt_36", rep.k > 36},
        // eta - 6/sqrt(k) > eta/2  <=>  k eta^2 > 144
        {"chain_gt_half_eta", q(rep.k) * eta * eta > 144},
        {"bracket_gt_half_eta", br > eta / 2},
    };
    rep.labels = {};
    return rep;
}

void write_identity_csv(std::ostream& out, std::span<const IdentityRow> rows) {
    csv::write_preamble(out, "identity", 1, {"k", "l", "alpha", "closed", "series", "equal"});
    for (const auto& r : rows) {
        csv::write_row(out, r.k, r.l, to_string(r.alpha), to_string(r.result.closed), to_string(r.result.series),
                       r.result.equal);
    }
}

void write_expansion_csv(std::ostream& out, std::span<const ExpansionCoeffs> rows) {
    csv::write_preamble(out, "expansion", 1, {"k", "l", "c0", "c1", "c2", "K", "c0_ok", "c1_ok", "K_ok"});
    for (const auto& e : rows) {
        csv::write_row(out, e.k, e.l, to_string(e.c0), to_string(e.c1), to_string(e.c2),
                       e.K_checked ? to_string(e.K) : std::string(), e.c0_ok, e.c1_ok,
                       e.K_checked ? (e.K_ok ? "1" : "0") : "");
    }
}

void write_dkr_csv(std::ostream& out, std::span<const DkrReport> rows) {
    csv::write_preamble(out, "dkr", 1,
                        {"k", "r", "h", "formula", "ordered_with_equal", "ordered_distinct", "unordered",
                         "representative_independent", "matching"});
    for (const auto& r : rows) {
        std::string matching;
        for (auto c : r.matching) matching += (matching.empty() ? "" : ";") + to_string(c);
        csv::write_row(out, r.k, r.r, r.h, r.formula.get_str(), r.counts[0][0], r.counts[1][0], r.counts[2][0],
                       r.representative_independent, matching);
    }
}

}  // namespace gpylab::analytic
