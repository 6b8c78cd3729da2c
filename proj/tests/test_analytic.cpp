#include <sstream>

#include "doctest.h"
#include "gpylab/analytic.hpp"
#include "gpylab/errors.hpp"

using namespace gpylab;
using namespace gpylab::analytic;

namespace {

Rational q(long a, long b = 1) {
    Rational r(a, b);
    r.canonicalize();
    return r;
}

}  // namespace

TEST_SUITE("analytic") {

TEST_CASE("rational parsing") {
    CHECK(parse_rational("3") == q(3));
    CHECK(parse_rational("-1/2") == q(-1, 2));
    CHECK(parse_rational("+4/6") == q(2, 3));
    CHECK(parse_rational("0.25") == q(1, 4));
    CHECK(parse_rational("0.96") == q(24, 25));
    CHECK(parse_rational("08") == q(8));
    CHECK(parse_rational("1e-3") == q(1, 1000));
    CHECK(parse_rational("2.5E2") == q(250));
    CHECK(parse_rational(".5") == q(1, 2));
    CHECK(parse_rational("-0.05") == q(-1, 20));
    CHECK_THROWS_AS(parse_rational("1/0"), PreconditionError);
    CHECK_THROWS_AS(parse_rational("abc"), PreconditionError);
    CHECK_THROWS_AS(parse_rational(""), PreconditionError);
    CHECK_THROWS_AS(parse_rational("."), PreconditionError);
}

TEST_CASE("polynomial arithmetic") {
    const auto p = RationalPoly::linear(q(1), q(1));  // 1 + x
    const auto sq = p * p;
    CHECK(sq.coeffs() == std::vector<Rational>{q(1), q(2), q(1)});
    CHECK(p.pow_trunc(5, 2).coeffs() == std::vector<Rational>{q(1), q(5), q(10)});
    const auto inv = p.inverse_series(4);
    CHECK(inv.coeffs() == std::vector<Rational>{q(1), q(-1), q(1), q(-1), q(1)});
    CHECK((p + RationalPoly::constant(q(-1))).degree() == 1);
    CHECK((p + RationalPoly::linear(q(-1), q(-1))).degree() == -1);
    CHECK(sq.eval(q(1, 2)) == q(9, 4));
    CHECK_THROWS_AS(RationalPoly::linear(q(0), q(1)).inverse_series(3), PreconditionError);
}

TEST_CASE("t_q1 identity on small cases") {
    // k=1, l=0: closed = 1 + a
    CHECK(t_q1(1, 0, q(1, 2)).closed == q(3, 2));
    for (int k = 1; k <= 5; ++k) {
        for (int l = 0; l < k; ++l) {
            const auto r = t_q1(k, l, q(-1, 3));
            CHECK(r.equal);
            CHECK(r.closed == r.series);
        }
    }
}

TEST_CASE("expansion coefficients") {
    const auto e = expansion_coeffs(2, 1);
    CHECK(e.c0 == q(2));
    CHECK(e.c0_ok);
    CHECK(e.c1_ok);
    REQUIRE(e.K_checked);
    CHECK(e.K == 0);
    CHECK(e.K_ok);
    CHECK_FALSE(expansion_coeffs(3, 0).K_checked);
    CHECK(K_formula(2, 1) == 0);
}

TEST_CASE("D(k,r) formula and oracle") {
    const std::vector<long> d2{16, 276, 1104, 1560, 720};
    const std::vector<long> d3{324, 7920, 47160, 110160, 110880, 40320};
    for (int r = 0; r <= 4; ++r) CHECK(d_formula(2, r) == d2[r]);
    for (int r = 0; r <= 5; ++r) CHECK(d_formula(3, r) == d3[r]);
    for (int k = 1; k <= 6; ++k) {
        for (int r = 0; r <= k + 2; ++r) CHECK(d_formula(k, r) > 0);
    }
    CHECK_THROWS_AS(d_formula(2, 5), PreconditionError);

    const std::vector<int> H0{1, 2, 3};
    CHECK(d_oracle(2, H0, 5, PairConvention::ordered_with_equal) == 276);
    CHECK(d_oracle(2, H0, 5, PairConvention::ordered_distinct) == 192);
    CHECK(d_oracle(2, H0, 5, PairConvention::unordered) == 180);

    const auto rep = dkr_report(2, 2, 7);
    CHECK(rep.representative_independent);
    REQUIRE(rep.matching.size() == 1);
    CHECK(rep.matching[0] == PairConvention::ordered_with_equal);
    CHECK(rep.representatives.size() == 3);
}

TEST_CASE("inequality on the grid") {
    for (int k : {2, 3, 4}) {
        for (auto u : {q(1, 10), q(1, 2), q(1), q(2), q(10)}) {
            const auto c = check_315(k, u);
            CHECK(c.holds);
            CHECK(c.lhs <= c.rhs);
        }
    }
    CHECK_THROWS_AS(check_315(2, q(0)), PreconditionError);
}

TEST_CASE("bracket") {
    CHECK(bracket(7, 1, 0.48, 0.0) == doctest::Approx(7.0 / 10 * 2 * 3 / 2 * 0.48 - 1));
    CHECK(bracket_exact(7, 1, q(12, 25), q(0)) == q(7, 10) * 3 * q(12, 25) - 1);
}

TEST_CASE("parameter selectors") {
    const auto u = select_unconditional(q(1, 10));
    CHECK(u.l == 40);
    CHECK(u.k == 2 * 41 * 81);
    CHECK(u.bracket > 0.05);
    bool found = false;
    for (const auto& [name, v] : u.extras) {
        if (name == "c3") {
            CHECK(v == 184544.0);
            found = true;
        }
    }
    CHECK(found);
    CHECK_THROWS_AS(select_unconditional(q(1, 2)), PreconditionError);

    const auto c = select_conditional(q(24, 25));
    CHECK(c.k == 7);
    CHECK(c.l == 1);
    CHECK(c.value > 1);
    const auto one = select_conditional(q(1));
    CHECK(one.k == 7);
    CHECK_THROWS_AS(select_conditional(q(1, 2)), PreconditionError);

    const auto xi = xi_regime(q(1, 10));
    CHECK(xi.l == 10);
    CHECK(xi.k == 462);

    for (auto eta : {q(1, 4), q(1, 2), q(1)}) {
        const auto eh = eh_two_shift(eta);
        CHECK(eh.k > 36);
        CHECK(eh.bracket > to_double(eta) / 2);
    }
    CHECK(eh_two_shift(q(1)).k == 145);
    CHECK(eh_two_shift(q(1)).l == 6);

    const auto j = to_json(u);
    CHECK(j["kind"] == "unconditional");
    CHECK(j["eta_exact"] == "1/10");
    CHECK(j["checks"]["bracket_gt_half_eta"] == true);
}

TEST_CASE("csv schemas") {
    std::ostringstream os;
    std::vector<DkrReport> rows{dkr_report(2, 0, 4)};
    write_dkr_csv(os, rows);
    CHECK(os.str().rfind("# gpylab-csv dkr v1\n", 0) == 0);
}

}  // TEST_SUITE
