#include <catch2/catch_amalgamated.hpp>
#include <cmath>

#include "opfunc/construct.hpp"
#include "support/catalog.hpp"

using namespace opfunc;
using Catch::Approx;
using optest::quick_config;

namespace {

LabeledFunc seed_om(const FuncExpr& f, const Interval& j) {
    return LabeledFunc{f, j, FuncLabel::OM, {{"seed", {}, {}, false}}};
}

}  // namespace

TEST_CASE("kf_transform produces the divided difference with an SOC label") {
    const Interval tanj(-M_PI_2, M_PI_2);
    LabeledFunc f1 = kf_transform(seed_om(tan(identity()), tanj), 0.0);
    CHECK(f1.label == FuncLabel::SOC);
    CHECK(f1.expr.eval(1.0) == Approx(std::tan(1.0)));
    CHECK(f1.expr.eval(0.0) == Approx(1.0));

    // (-1/t - (-1))/(t - 1) = 1/t
    LabeledFunc g = kf_transform(seed_om(-(1.0 / identity()), Interval(0.0, kInf)), 1.0);
    for (double x : {0.5, 2.0, 7.0}) CHECK(g.expr.eval(x) == Approx(1.0 / x));

    // unlabeled input is refused: t^2 is not OM and must be rejected upstream
    LabeledFunc unlabeled{pow(identity(), 2.0), Interval(-1.0, 1.0), FuncLabel::None, {}};
    CHECK_THROWS_AS(kf_transform(unlabeled, 0.0), PreconditionError);
}

TEST_CASE("neg_inv maps between the classes") {
    const Interval pos(0.0, kInf);
    LabeledFunc soc{1.0 / identity(), pos, FuncLabel::SOC, {}};
    LabeledFunc oc = neg_inv(soc);
    CHECK(oc.label == FuncLabel::OC);
    CHECK(oc.expr.eval(2.0) == Approx(-2.0));

    LabeledFunc c{constant(2.0), Interval(-1.0, 1.0), FuncLabel::SOC, {}};
    CHECK(neg_inv(c).expr.eval(0.3) == Approx(-0.5));

    LabeledFunc zero{constant(0.0), pos, FuncLabel::SOC, {}};
    CHECK_THROWS_AS(neg_inv(zero), ZeroFunctionError);

    // on the way back: strictly negative OC input gives SOC
    LabeledFunc negoc{pow(identity(), 2.0) - 1.0, Interval(-1.0, 1.0), FuncLabel::OC, {}};
    LabeledFunc back = neg_inv(negoc);
    CHECK(back.label == FuncLabel::SOC);
    CHECK(back.expr.eval(0.0) == Approx(1.0));
}

TEST_CASE("om_step and the endpoint repetition rule") {
    const Interval tanj(-M_PI_2, M_PI_2);
    LabeledFunc f2 = neg_inv(kf_transform(seed_om(tan(identity()), tanj), 0.0));
    LabeledFunc f3 = om_step(f2, 0.0);
    CHECK(f3.label == FuncLabel::OM);
    const double x = 0.8;
    CHECK(f3.expr.eval(x) == Approx((std::tan(x) - x) / (x * std::tan(x))));

    // a constant OC function steps to the zero OM function
    LabeledFunc c{constant(-1.0), Interval(-1.0, 1.0), FuncLabel::OC, {}};
    CHECK(om_step(c, 0.3).expr.eval(0.9) == Approx(0.0).margin(1e-15));

    // consecutive points may not repeat the same endpoint
    const Interval pos(0.0, kInf);
    LabeledFunc s1 = kf_transform(seed_om(pow(identity(), 0.5), pos), 0.0);  // endpoint use
    LabeledFunc s2 = neg_inv(s1);
    CHECK_THROWS_AS(om_step(s2, 0.0), EndpointRepetitionError);
    // a different point is fine after an endpoint
    CHECK_NOTHROW(om_step(s2, 1.0));
}

TEST_CASE("forward process reproduces the tan example") {
    const Interval tanj(-M_PI_2, M_PI_2);
    ProcessTrace tr = forward_process(tan(identity()), tanj, {0.0, 0.0}, 3, quick_config());
    REQUIRE(tr.steps.size() == 4);
    CHECK(tr.steps[0].func.label == FuncLabel::OM);
    CHECK(tr.steps[1].func.label == FuncLabel::SOC);
    CHECK(tr.steps[2].func.label == FuncLabel::OC);
    CHECK(tr.steps[3].func.label == FuncLabel::OM);

    const FuncExpr f3 = tr.steps[3].func.expr;
    for (double t : make_grid(tanj, 32)) {
        const double closed = (std::tan(t) - t) / (t * std::tan(t));
        CHECK(std::abs(f3.eval(t) - closed) <= 1e-10 * (1.0 + std::abs(closed)));
    }
    CHECK(certify_operator_monotone(f3, tanj, quick_config()).certified());
}

TEST_CASE("forward process reproduces the power example") {
    const Interval pos(0.0, kInf);
    const double alpha = 0.5;
    ProcessTrace tr = forward_process(pow(identity(), alpha), pos, {1.0, 0.0}, 3, quick_config());
    REQUIRE(tr.steps.size() == 4);
    const FuncExpr f3 = tr.steps[3].func.expr;
    for (double t : make_grid(Interval(0.01, 50.0), 24)) {
        if (std::abs(t - 1.0) < 1e-6) continue;
        const double closed = (std::pow(t, alpha - 1.0) - 1.0) / (std::pow(t, alpha) - 1.0);
        CHECK(std::abs(f3.eval(t) - closed) <= 1e-9 * (1.0 + std::abs(closed)));
    }
}

TEST_CASE("forward process terminates on rational degree exhaustion") {
    ProcessTrace tr = forward_process(identity(), Interval(-1.0, 1.0), {0.0, 0.0}, 9, quick_config());
    CHECK(tr.terminated);
    REQUIRE(tr.steps.size() >= 4);
    CHECK(tr.steps.size() <= 5);  // terminates within 4 transform steps
    CHECK(tr.steps[1].func.expr.eval(0.5) == Approx(1.0));   // f1 = 1
    CHECK(tr.steps[2].func.expr.eval(0.5) == Approx(-1.0));  // f2 = -1
    CHECK(tr.steps[3].func.expr.eval(0.5) == Approx(0.0).margin(1e-14));  // f3 = 0
    // degree law: the seed has degree 1, f3 has degree 0
    REQUIRE(tr.steps[0].degree.has_value());
    CHECK(std::max(tr.steps[0].degree->first, tr.steps[0].degree->second) == 1);
    REQUIRE(tr.steps[3].degree.has_value());
    CHECK(std::max(tr.steps[3].degree->first, tr.steps[3].degree->second) <= 0);
}

TEST_CASE("forward process degree law for a Moebius seed") {
    // f0 = t/(2-t) is operator monotone on (0,1); degree drops by one per cycle
    const FuncExpr f0 = identity() / (2.0 - identity());
    ProcessTrace tr = forward_process(f0, Interval(0.0, 1.0), {0.5, 0.25}, 3, quick_config());
    REQUIRE(tr.steps.size() == 4);
    REQUIRE(tr.steps[0].degree.has_value());
    REQUIRE(tr.steps[3].degree.has_value());
    const int d0 = std::max(tr.steps[0].degree->first, tr.steps[0].degree->second);
    const int d3 = std::max(tr.steps[3].degree->first, tr.steps[3].degree->second);
    CHECK(d0 == 1);
    CHECK(d3 == 0);
    CHECK(tr.terminated);  // the constant iterate ends the run
}

TEST_CASE("forward process rejects a seed that is not operator monotone") {
    ProcessTrace tr =
        forward_process(pow(identity(), 2.0), Interval(-1.0, 1.0), {0.0, 0.0}, 3, quick_config());
    CHECK(tr.terminated);
    CHECK(tr.steps.size() == 1);
    CHECK(tr.reason.find("seed") != std::string::npos);
}

TEST_CASE("star process examples") {
    const Interval tanj(-M_PI_2, M_PI_2);
    ProcessTrace tr = star_process(tan(identity()), tanj, {0.0, 0.0}, 2, quick_config());
    REQUIRE(tr.steps.size() == 3);
    CHECK(tr.steps[1].func.label == FuncLabel::SOC);
    CHECK(tr.steps[2].func.label == FuncLabel::OM);
    for (double t : make_grid(tanj, 16)) {
        const double closed = (std::tan(t) - t) / (t * t);
        CHECK(std::abs(tr.steps[2].func.expr.eval(t) - closed) <= 1e-9 * (1.0 + std::abs(closed)));
    }

    ProcessTrace pw = star_process(pow(identity(), 0.5), Interval(0.0, kInf), {1.0, 0.0}, 2,
                                   quick_config());
    REQUIRE(pw.steps.size() == 3);
    for (double t : {0.2, 0.7, 3.0, 20.0}) {
        const double closed = (std::pow(t, -0.5) - 1.0) / (t - 1.0);
        CHECK(pw.steps[2].func.expr.eval(t) == Approx(closed).epsilon(1e-9));
    }

    // f*_1 = 1, f*_2 = 0 for the identity seed; the zero iterate terminates
    ProcessTrace id = star_process(identity(), Interval(-1.0, 1.0), {0.0, 0.5}, 5, quick_config());
    CHECK(id.terminated);
    CHECK(id.reason == "zero iterate");
    REQUIRE(id.steps.size() == 3);
    CHECK(id.steps[1].func.expr.eval(0.3) == Approx(1.0));
    CHECK(id.steps[2].func.expr.eval(0.3) == Approx(0.0).margin(1e-14));
}

TEST_CASE("backward step and the backward chain") {
    // (t - 0) t - 1 = t^2 - 1 < 0 on (-1,1)
    LabeledFunc f0 = seed_om(identity(), Interval(-1.0, 1.0));
    LabeledFunc fm1 = backward_step(f0, 0.0, -1.0);
    CHECK(fm1.label == FuncLabel::OC);
    CHECK(fm1.expr.eval(0.5) == Approx(-0.75));

    // on (0, inf) the product t*t is unbounded above: infeasible
    CHECK_THROWS_AS(backward_step(seed_om(identity(), Interval(0.0, kInf)), 0.0, std::nullopt),
                    InfeasibleError);

    // an explicit c0 that fails to push the product negative is rejected
    CHECK_THROWS_AS(backward_step(f0, 0.0, 0.5), InfeasibleError);

    // automatic shift selection
    LabeledFunc fauto = backward_step(f0, 0.0, std::nullopt);
    const auto sweep = make_grid(Interval(-1.0, 1.0), 64);
    for (double t : sweep) CHECK(fauto.expr.eval(t) < 0.0);

    // chain completion: f_{-2} = -1/f_{-1} is SOC, then multiply-shift gives OM
    LabeledFunc fm2 = neg_inv(fm1);
    CHECK(fm2.label == FuncLabel::SOC);
    CHECK(fm2.expr.eval(0.0) == Approx(1.0));  // 1/(1 - t^2) at 0
    LabeledFunc fm3 = backward_step(fm2, 0.0, std::nullopt);
    CHECK(fm3.label == FuncLabel::OM);
    CHECK(fm3.expr.eval(0.5) == Approx(0.5 / 0.75));  // t/(1-t^2)
    CHECK(certify_operator_monotone(fm3.expr, Interval(-1.0, 1.0), quick_config()).certified());

    // the driver runs the same chain
    ProcessTrace tr = backward_process(identity(), Interval(-1.0, 1.0), {0.0, 0.0}, {-1.0}, 3,
                                       quick_config());
    REQUIRE(tr.steps.size() == 4);
    CHECK(tr.steps[1].func.label == FuncLabel::OC);
    CHECK(tr.steps[2].func.label == FuncLabel::SOC);
    CHECK(tr.steps[3].func.label == FuncLabel::OM);
}

TEST_CASE("label faithfulness: certify confirms every transform output") {
    const CertifyConfig cfg = quick_config(53);
    const Interval tanj(-M_PI_2, M_PI_2);
    std::vector<LabeledFunc> produced;

    ProcessTrace tr = forward_process(tan(identity()), tanj, {0.0, 0.0}, 3, cfg);
    for (std::size_t i = 1; i < tr.steps.size(); ++i) produced.push_back(tr.steps[i].func);
    ProcessTrace pw = forward_process(pow(identity(), 0.5), Interval(0.0, kInf), {1.0, 0.0}, 3, cfg);
    for (std::size_t i = 1; i < pw.steps.size(); ++i) produced.push_back(pw.steps[i].func);
    ProcessTrace bw = backward_process(identity(), Interval(-1.0, 1.0), {0.0, 0.0}, {}, 3, cfg);
    for (std::size_t i = 1; i < bw.steps.size(); ++i) produced.push_back(bw.steps[i].func);

    for (const auto& lf : produced) {
        INFO(lf.text() << " expected " << label_name(lf.label) << " on " << lf.interval.str());
        Verdict v;
        switch (lf.label) {
            case FuncLabel::OM: v = certify_operator_monotone(lf.expr, lf.interval, cfg); break;
            case FuncLabel::OC: v = certify_operator_convex(lf.expr, lf.interval, cfg); break;
            case FuncLabel::SOC:
                v = certify_strongly_operator_convex(lf.expr, lf.interval, cfg);
                break;
            default: continue;
        }
        CHECK(v.certified());
    }
}

TEST_CASE("compose_om_soc") {
    const CertifyConfig cfg = quick_config(57);
    LabeledFunc invt{1.0 / identity(), Interval(0.0, kInf), FuncLabel::SOC, {}};

    LabeledFunc r = compose_om_soc(pow(identity(), 0.5), Interval(0.0, kInf, true, false), invt, cfg);
    CHECK(r.label == FuncLabel::SOC);
    CHECK(r.expr.eval(4.0) == Approx(0.5));
    CHECK(certify_strongly_operator_convex(r.expr, r.interval, cfg).certified());

    // identity composition leaves the function unchanged
    LabeledFunc same = compose_om_soc(identity(), Interval(-1.0, kInf), invt, cfg);
    for (double t : {0.5, 2.0}) CHECK(same.expr.eval(t) == Approx(1.0 / t));

    // phi(0) < 0 is rejected
    CHECK_THROWS_AS(
        compose_om_soc(identity() - 1.0, Interval(0.0, kInf, true, false), invt, cfg),
        PreconditionError);
    // 0 outside the domain of phi is rejected
    CHECK_THROWS_AS(compose_om_soc(identity(), Interval(1.0, kInf), invt, cfg), PreconditionError);
    // range escaping the domain of phi is rejected
    CHECK_THROWS_AS(compose_om_soc(pow(identity(), 0.5), Interval(0.0, 2.0, true, false), invt, cfg),
                    PreconditionError);
}

TEST_CASE("compose_oc") {
    const CertifyConfig cfg = quick_config(61);

    // phi = 1/(1-t) is operator monotone and operator convex on (-inf, 1);
    // composed with the operator convex t^2 on (0,1) it stays operator convex
    const FuncExpr phi = 1.0 / (1.0 - identity());
    LabeledFunc tsq{pow(identity(), 2.0), Interval(0.0, 1.0), FuncLabel::OC, {}};
    LabeledFunc r = compose_oc(phi, Interval(-kInf, 1.0), tsq, cfg);
    CHECK(r.label == FuncLabel::OC);
    CHECK(r.expr.eval(0.5) == Approx(1.0 / 0.75));
    CHECK(certify_operator_convex(r.expr, r.interval, cfg).certified());

    // identity passes anything through
    LabeledFunc same = compose_oc(identity(), Interval(-1.0, 2.0), tsq, cfg);
    CHECK(same.expr.eval(0.5) == Approx(0.25));

    // phi = t^2 is not operator monotone: rejected
    CHECK_THROWS_AS(compose_oc(pow(identity(), 2.0), Interval(-1.0, 2.0), tsq, cfg),
                    PreconditionError);

    // SOC route: phi need only be operator monotone when f is SOC and the
    // domain of phi starts at 0
    LabeledFunc invt{1.0 / identity(), Interval(0.2, 5.0), FuncLabel::SOC, {}};
    LabeledFunc viasoc =
        compose_oc(pow(identity(), 0.5), Interval(0.0, kInf, true, false), invt, cfg);
    CHECK(viasoc.label == FuncLabel::OC);
    CHECK(certify_operator_convex(viasoc.expr, viasoc.interval, cfg).certified());
}

TEST_CASE("antiderivative of a labeled SOC function is labeled OM") {
    const CertifyConfig cfg = quick_config(67);
    LabeledFunc one{constant(1.0), Interval(-1.0, 1.0), FuncLabel::SOC, {}};
    LabeledFunc lin = antiderivative(one, 0.0);
    CHECK(lin.label == FuncLabel::OM);
    CHECK(lin.expr.eval(0.7) == Approx(0.7));

    LabeledFunc invt{1.0 / identity(), Interval(0.0, kInf), FuncLabel::SOC, {}};
    LabeledFunc lg = antiderivative(invt, 1.0);
    CHECK(lg.expr.eval(std::exp(2.0)) == Approx(2.0));
    CHECK(certify_operator_monotone(lg.expr, lg.interval, cfg).certified());

    // converse failure: the antiderivative -1/t of 1/t^2 is operator
    // monotone, yet 1/t^2 itself must refute SOC
    CHECK(certify_operator_monotone(-(1.0 / identity()), Interval(0.0, kInf), cfg).certified());
    CHECK(certify_strongly_operator_convex(pow(identity(), -2.0), Interval(0.0, kInf), cfg)
              .refuted());
    LabeledFunc notsoc{pow(identity(), -2.0), Interval(0.0, kInf), FuncLabel::OC, {}};
    CHECK_THROWS_AS(antiderivative(notsoc, 1.0), PreconditionError);
}

TEST_CASE("soc_zoo transforms") {
    const CertifyConfig cfg = quick_config(71);
    const Interval pos(0.0, kInf);
    const Interval window(0.001, 100.0);

    LabeledFunc h1{1.0 / identity(), pos, FuncLabel::SOC, {}};
    SocZoo z1 = soc_zoo(h1);
    CHECK(z1.inv_th.expr.eval(3.0) == Approx(1.0));        // 1/(t * 1/t) = 1
    CHECK(z1.th.expr.eval(3.0) == Approx(1.0));            // t * 1/t = 1
    CHECK(z1.t_over_h.expr.eval(3.0) == Approx(9.0));      // t/(1/t) = t^2
    CHECK(certify_strongly_operator_convex(z1.inv_th.expr, window, cfg).certified());
    CHECK(certify_operator_monotone(z1.th.expr, window, cfg).certified());
    CHECK(certify_operator_convex(z1.t_over_h.expr, window, cfg).certified());

    LabeledFunc h2{1.0 / (identity() + 1.0), pos, FuncLabel::SOC, {}};
    SocZoo z2 = soc_zoo(h2);
    CHECK(z2.inv_th.expr.eval(2.0) == Approx(1.5));        // (t+1)/t
    CHECK(z2.th.expr.eval(2.0) == Approx(2.0 / 3.0));      // t/(t+1)
    CHECK(certify_strongly_operator_convex(z2.inv_th.expr, window, cfg).certified());
    CHECK(certify_operator_monotone(z2.th.expr, window, cfg).certified());
    CHECK(certify_operator_convex(z2.t_over_h.expr, window, cfg).certified());

    // h = 0 is rejected
    LabeledFunc zero{constant(0.0), pos, FuncLabel::SOC, {}};
    CHECK_THROWS_AS(soc_zoo(zero), PreconditionError);

    // the (iv) products with positive operator monotone phi, psi
    SocZoo z3 = soc_zoo(h2, pow(identity(), 0.5), identity() / (identity() + 1.0), cfg);
    REQUIRE(z3.phi_h.has_value());
    REQUIRE(z3.psi_inv_th.has_value());
    REQUIRE(z3.product.has_value());
    CHECK(certify_strongly_operator_convex(z3.phi_h->expr, window, cfg).certified());
    CHECK(certify_strongly_operator_convex(z3.psi_inv_th->expr, window, cfg).certified());
    CHECK(certify_strongly_operator_convex(z3.product->expr, window, cfg).certified());

    // phi that takes non-positive values is rejected
    CHECK_THROWS_AS(soc_zoo(h2, identity() - 5.0, identity(), cfg), PreconditionError);
}

TEST_CASE("rational helpers") {
    using rational::Poly;
    using rational::RationalFunc;
    using rational::to_rational;

    auto r = to_rational(identity() / (2.0 - identity()));
    REQUIRE(r.has_value());
    CHECK(r->degrees() == std::pair<int, int>{1, 1});

    auto p = to_rational(pow(identity(), 3.0) + 1.0);
    REQUIRE(p.has_value());
    CHECK(p->degrees().first == 3);

    CHECK_FALSE(to_rational(tan(identity())).has_value());
    CHECK_FALSE(to_rational(pow(identity(), 0.5)).has_value());

    // deflating a known root
    Poly q{{-6.0, 1.0, 1.0}};  // (t-2)(t+3) = t^2 + t - 6
    Poly d = q.deflate_root(2.0);
    REQUIRE(d.degree() == 1);
    CHECK(d.eval(0.0) == Approx(3.0));
    CHECK(d.eval(1.0) == Approx(4.0));

    // divided difference of a rational function drops the numerator root
    RationalFunc f{Poly{{0.0, 1.0}}, Poly{{2.0, -1.0}}};  // t/(2-t)
    RationalFunc k = rational::divided_difference(f, 0.5);
    // K(t, 1/2) = 2/((2-t)(2-1/2)) pointwise
    for (double t : {0.1, 0.9}) {
        const double expect = (t / (2 - t) - (0.5 / 1.5)) / (t - 0.5);
        CHECK(k.num.eval(t) / k.den.eval(t) == Approx(expect));
    }
}
