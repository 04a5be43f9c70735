#include <catch2/catch_amalgamated.hpp>
#include <cmath>

#include "opfunc/expr.hpp"
#include "opfunc/parse.hpp"
#include "opfunc/rng.hpp"

using namespace opfunc;
using Catch::Approx;

TEST_CASE("evaluation of basic nodes") {
    CHECK(tan(identity()).eval(0.0) == 0.0);
    CHECK((constant(1.0) / identity()).eval(2.0) == Approx(0.5));
    CHECK(pow(identity(), 0.5).eval(4.0) == Approx(2.0));
    CHECK(exp(identity()).eval(1.0) == Approx(std::exp(1.0)));
    CHECK(log(identity()).eval(std::exp(2.0)) == Approx(2.0));
}

TEST_CASE("domain violations are detected") {
    CHECK_THROWS_AS((constant(1.0) / identity()).eval(0.0), DomainError);
    CHECK_THROWS_AS(log(identity()).eval(-1.0), DomainError);
    CHECK_THROWS_AS(log(identity()).eval(0.0), DomainError);
    CHECK_THROWS_AS(pow(identity(), 0.5).eval(-4.0), DomainError);
    CHECK_THROWS_AS(pow(identity(), -2.5).eval(0.0), DomainError);
    CHECK_THROWS_AS(exp(identity()).eval(1e6), DomainError);  // overflow
}

TEST_CASE("negative bases with integer exponents are fine") {
    CHECK(pow(identity(), 3.0).eval(-2.0) == Approx(-8.0));
    CHECK(pow(identity(), -2.0).eval(-2.0) == Approx(0.25));
}

TEST_CASE("symbolic derivatives match the stated examples") {
    // (t^2)' at 3 = 6
    CHECK(pow(identity(), 2.0).derivative().eval(3.0) == Approx(6.0));
    // (tan t)' at 0 = 1
    CHECK(tan(identity()).derivative().eval(0.0) == Approx(1.0));
    // (1/t)'' at 1 = 2
    CHECK((constant(1.0) / identity()).derivative(2).eval(1.0) == Approx(2.0));
}

TEST_CASE("derivatives agree with central differences") {
    const double h = 1e-5;
    struct Case {
        FuncExpr f;
        double lo, hi;
    };
    const FuncExpr t = identity();
    const std::vector<Case> cases = {
        {tan(t), -1.2, 1.2},
        {pow(t, 0.5), 0.3, 8.0},
        {log(t), 0.3, 8.0},
        {constant(1.0) / t, 0.3, 8.0},
        {exp(-t) * pow(t, 2.0) + 3.0 * t, 0.3, 4.0},
        {t / (1.0 + t), 0.3, 8.0},
    };
    Rng rng(123);
    for (int i = 0; i < 100; ++i) {
        const auto& c = cases[std::size_t(i) % cases.size()];
        const double x = rng.uniform(c.lo, c.hi);
        const double sym = c.f.derivative().eval(x);
        const double num = (c.f.eval(x + h) - c.f.eval(x - h)) / (2 * h);
        CHECK(std::abs(sym - num) <= 1e-5 * (1.0 + std::abs(sym)));
    }
}

TEST_CASE("divided difference handles the removable singularity") {
    // K_{t^2}(t, 0) = t
    FuncExpr q = divided_difference(pow(identity(), 2.0), 0.0);
    CHECK(q.eval(3.0) == Approx(3.0));
    CHECK(q.eval(0.0) == Approx(0.0).margin(1e-12));

    // tan t / t has value 1 at the origin
    FuncExpr r = divided_difference(tan(identity()), 0.0);
    CHECK(r.eval(0.0) == Approx(1.0));
    CHECK(r.eval(1.0) == Approx(std::tan(1.0)));
    CHECK(r.eval(1e-9) == Approx(1.0));

    // (-1/t - (-1))/(t - 1) = 1/t
    FuncExpr s = divided_difference(-(constant(1.0) / identity()), 1.0);
    for (double x : {0.5, 1.0 + 1e-9, 2.0, 7.0}) CHECK(s.eval(x) == Approx(1.0 / x));
}

TEST_CASE("divided difference derivative is exact") {
    // q(t) = K_{t^3}(t, 1) = t^2 + t + 1, q' = 2t + 1, q'(1) = 3
    FuncExpr q = divided_difference(pow(identity(), 3.0), 1.0);
    FuncExpr dq = q.derivative();
    CHECK(dq.eval(2.0) == Approx(5.0));
    CHECK(dq.eval(1.0) == Approx(3.0));          // Taylor branch: f''(t0)/2 = 3
    CHECK(dq.eval(1.0 + 1e-9) == Approx(3.0));   // near branch
    CHECK(q.derivative(2).eval(1.0) == Approx(2.0));  // f'''(t0)/3 = 2
}

TEST_CASE("one-sided limit resolution at an endpoint base point") {
    // f(t) = (t - 1)/(t^0.5 - 1) has a removable hole at t = 1
    FuncExpr f = (identity() - 1.0) / (pow(identity(), 0.5) - 1.0);
    FuncExpr q = divided_difference(f, 1.0);  // base value resolved to 2 by limits
    CHECK(f.eval(4.0) == Approx(3.0));
    CHECK(q.eval(4.0) == Approx((3.0 - 2.0) / 3.0));
    // log has no finite limit at 0
    CHECK_THROWS_AS(divided_difference(log(identity()), 0.0), DomainError);
}

TEST_CASE("substitution composes trees") {
    FuncExpr f = substitute(pow(identity(), 0.5), constant(1.0) / identity());
    CHECK(f.eval(4.0) == Approx(0.5));
    FuncExpr g = substitute(identity(), tan(identity()));
    CHECK(g.eval(0.5) == Approx(std::tan(0.5)));
}

TEST_CASE("antiderivative: symbolic table") {
    // 1/t from base 1 -> log t
    FuncExpr F = antiderivative(constant(1.0) / identity(), 1.0);
    CHECK(F.kind() == NodeKind::Log);
    CHECK(F.eval(std::exp(1.0)) == Approx(1.0));

    // constants -> c t
    FuncExpr G = antiderivative(constant(2.0), 0.0);
    CHECK(G.eval(3.0) == Approx(6.0));

    // 1/(t+1) from 0 -> log(t+1)
    FuncExpr H = antiderivative(constant(1.0) / (identity() + 1.0), 0.0);
    CHECK(H.eval(1.0) == Approx(std::log(2.0)));

    // powers
    FuncExpr P = antiderivative(pow(identity(), 0.5), 0.0);
    CHECK(P.eval(4.0) == Approx(16.0 / 3.0));
}

TEST_CASE("antiderivative: quadrature path matches closed forms") {
    FuncExpr g = constant(1.0) / (identity() + 1.0);
    FuncExpr F = antiderivative(g, 0.0, /*force_quadrature=*/true);
    CHECK(F.kind() == NodeKind::Integral);
    for (double x : {0.25, 1.0, 3.0, 9.0}) CHECK(F.eval(x) == Approx(std::log(x + 1.0)).epsilon(1e-9));
    // fundamental theorem: derivative of the integral node is the integrand
    CHECK(F.derivative().eval(2.0) == Approx(g.eval(2.0)));
    // integrating backwards flips the sign
    FuncExpr B = antiderivative(g, 1.0, true);
    CHECK(B.eval(0.0) == Approx(-std::log(2.0)).epsilon(1e-9));
}

TEST_CASE("affine recognition") {
    auto a = as_affine(2.0 * identity() + 3.0);
    REQUIRE(a.has_value());
    CHECK(a->first == Approx(3.0));
    CHECK(a->second == Approx(2.0));
    CHECK_FALSE(as_affine(pow(identity(), 2.0)).has_value());
}

TEST_CASE("printing round-trips through the parser") {
    for (const char* text : {"(tan(t)-t)/(t*tan(t))", "1/t - 1", "t^0.5", "(t^0.5 - 1)/(t - 1)",
                             "exp(-t)*t^2 + 3*t", "-(1/t)", "2.5e-3*t", "t^(-2)"}) {
        FuncExpr e = parse_function(text);
        const std::string s1 = e.str();
        FuncExpr e2 = parse_function(s1);
        const std::string s2 = e2.str();
        CHECK(s1 == s2);
        for (double x : {0.37, 0.91, 1.42}) {
            double v1 = e.eval(x), v2 = e2.eval(x);
            CHECK(v1 == Approx(v2));
        }
    }
}

TEST_CASE("parser rejects malformed input") {
    CHECK_THROWS_AS(parse_function("t^^2"), ParseError);
    CHECK_THROWS_AS(parse_function("t +"), ParseError);
    CHECK_THROWS_AS(parse_function("(t"), ParseError);
    CHECK_THROWS_AS(parse_function("sin(t)"), ParseError);
    CHECK_THROWS_AS(parse_function("t^t"), ParseError);  // exponent must be constant
    CHECK_THROWS_AS(parse_function(""), ParseError);
}

TEST_CASE("parser accepts the catalog spellings") {
    CHECK(parse_function("(tan(t)-t)/(t*tan(t))").eval(1.0) ==
          Approx((std::tan(1.0) - 1.0) / std::tan(1.0)));
    CHECK(parse_function("1/t - 1").eval(0.5) == Approx(1.0));
    CHECK(parse_function("sqrt(t)").eval(9.0) == Approx(3.0));
    CHECK(parse_function("pi").eval(0.0) == Approx(M_PI));
    CHECK(parse_function("t^(1/2)").eval(4.0) == Approx(2.0));
}

TEST_CASE("interval parsing") {
    Interval a = parse_interval("(0, 1)");
    CHECK(a.lo() == 0.0);
    CHECK(a.hi() == 1.0);
    CHECK_FALSE(a.lo_closed());

    Interval b = parse_interval("[0, inf)");
    CHECK(b.lo_closed());
    CHECK_FALSE(b.hi_finite());

    Interval c = parse_interval("(-pi/2, pi/2)");
    CHECK(c.lo() == Approx(-M_PI / 2));
    CHECK(c.hi() == Approx(M_PI / 2));

    CHECK_THROWS_AS(parse_interval("(1, 0)"), Error);
    CHECK_THROWS_AS(parse_interval("[-inf, 0)"), Error);  // closed endpoint must be finite
    CHECK_THROWS_AS(parse_interval("(0 1)"), ParseError);
    CHECK_THROWS_AS(parse_interval("(t, 1)"), ParseError);
}

TEST_CASE("interval membership and retreat") {
    Interval j = Interval::open(0.0, 1.0);
    CHECK(j.contains(0.5));
    CHECK_FALSE(j.contains(0.0));
    CHECK_FALSE(j.contains(1.0));
    auto [a, b] = j.retreated_core(0.25);
    CHECK(a == Approx(0.25));
    CHECK(b == Approx(0.75));
    CHECK_THROWS_AS(j.retreated_core(0.5), EmptyCoreError);

    Interval half = Interval(0.0, kInf);
    auto [c, d] = half.retreated_core(1e-3);
    CHECK(c == Approx(1e-3));
    CHECK(d == Approx(1e4));
}
