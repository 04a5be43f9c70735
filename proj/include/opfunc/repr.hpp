#pragma once

#include <cmath>
#include <optional>
#include <utility>
#include <vector>

#include "opfunc/certify.hpp"
#include "opfunc/construct.hpp"
#include "opfunc/expr.hpp"
#include "opfunc/interval.hpp"

namespace opfunc {

struct MeasureAtom {
    double x;  // location
    double w;  // weight, > 0
};

/// Finite discrete Borel measure. The integrability conditions of the
/// representations are automatic for finite atom lists.
struct DiscreteMeasure {
    std::vector<MeasureAtom> atoms;

    void validate() const {
        for (const auto& a : atoms) {
            if (!(a.w > 0.0)) throw InvalidRepr("atom weights must be positive");
            if (!std::isfinite(a.x)) throw InvalidRepr("atom locations must be finite");
        }
        for (std::size_t i = 0; i < atoms.size(); ++i)
            for (std::size_t k = i + 1; k < atoms.size(); ++k)
                if (atoms[i].x == atoms[k].x) throw InvalidRepr("atom locations must be distinct");
    }
    bool empty() const { return atoms.empty(); }
};

/// Data of the operator monotone representation
/// f(t) = alpha + beta t + sum w (1/(x - t) - 1/(x - t0)), atoms off J.
struct PickRepr {
    double alpha = 0.0;
    double beta = 0.0;
    DiscreteMeasure nu;
    double t0 = 0.0;
    Interval j{0.0, 1.0};

    void validate() const {
        nu.validate();
        if (beta < 0.0) throw InvalidRepr("beta must be non-negative");
        if (!j.contains(t0)) throw InvalidRepr("t0 must lie in J");
        for (const auto& a : nu.atoms)
            if (j.contains(a.x)) throw InvalidRepr("nu must vanish on J");
    }
};

/// Data of the strongly-operator-convex representation
/// g(t) = alpha + sum w/(t - x) over nu_- in (-inf, a]
///               + sum w/(x - t) over nu_+ in [b, inf), on J = (a, b).
struct SOCRepr {
    double alpha = 0.0;
    DiscreteMeasure nu_minus, nu_plus;
    Interval j{0.0, 1.0};

    void validate() const {
        nu_minus.validate();
        nu_plus.validate();
        if (alpha < 0.0) throw InvalidRepr("alpha must be non-negative");
        for (const auto& a : nu_minus.atoms)
            if (!(a.x <= j.lo())) throw InvalidRepr("nu_minus must be supported in (-inf, a]");
        for (const auto& a : nu_plus.atoms)
            if (!(a.x >= j.hi())) throw InvalidRepr("nu_plus must be supported in [b, inf)");
    }
};

/// f(t) = alpha + beta t + sum w (1/(x-t) - 1/(x-t0)); operator monotone on J.
inline FuncExpr build_pick(const PickRepr& r) {
    r.validate();
    const FuncExpr t = identity();
    FuncExpr f = constant(r.alpha) + constant(r.beta) * t;
    for (const auto& a : r.nu.atoms)
        f = f + (constant(a.w) / (constant(a.x) - t) - constant(a.w / (a.x - r.t0)));
    return f;
}

/// g(t) = alpha + sum w/(t-x) + sum w/(x-t); strongly operator convex on J.
inline FuncExpr build_soc(const SOCRepr& r) {
    r.validate();
    const FuncExpr t = identity();
    FuncExpr g = constant(r.alpha);
    for (const auto& a : r.nu_minus.atoms) g = g + constant(a.w) / (t - constant(a.x));
    for (const auto& a : r.nu_plus.atoms) g = g + constant(a.w) / (constant(a.x) - t);
    return g;
}

/// Half-line form on (a, inf): g(t) = g_inf + sum w/(t - x), nu in (-inf, a].
/// The limit value at infinity is the whole constant part, so alpha must be
/// folded into g_inf by the caller (enforced).
inline FuncExpr build_halfline(const SOCRepr& r, double g_inf) {
    r.validate();
    if (r.j.hi_finite()) throw InvalidRepr("half-line form needs J = (a, inf)");
    if (!r.nu_plus.empty()) throw InvalidRepr("half-line form has no nu_plus part");
    if (r.alpha != 0.0) throw InvalidRepr("pass the constant part as g_inf, with alpha = 0");
    if (g_inf < 0.0) throw InvalidRepr("g(inf) must be non-negative");
    const FuncExpr t = identity();
    FuncExpr g = constant(g_inf);
    for (const auto& a : r.nu_minus.atoms) g = g + constant(a.w) / (t - constant(a.x));
    const double tail = g.eval(1e6);
    if (std::abs(tail - g_inf) > 1e-3 * (1.0 + std::abs(g_inf)))
        throw InvalidRepr("tail value does not approach g_inf");
    return g;
}

/// Split into g_+ in SOC(a, inf) (alpha and the nu_- part) and
/// g_- in SOC(-inf, b) (the nu_+ part).
inline std::pair<FuncExpr, FuncExpr> split_soc(const SOCRepr& r) {
    r.validate();
    const FuncExpr t = identity();
    FuncExpr gp = constant(r.alpha);
    for (const auto& a : r.nu_minus.atoms) gp = gp + constant(a.w) / (t - constant(a.x));
    FuncExpr gm = constant(0.0);
    for (const auto& a : r.nu_plus.atoms) gm = gm + constant(a.w) / (constant(a.x) - t);
    return {gp, gm};
}

/// Outcome of the reciprocal flip f -> f(1/t) - lambda.
struct FlipResult {
    LabeledFunc plus;    // f(1/t) - lambda, SOC(0, inf)
    LabeledFunc minus;   // f(-1/t) - lambda, SOC(-inf, 0)
    double lambda = 0.0;
};

/// For increasing operator monotone f on (0, inf) with a finite limit at 0+:
/// f(1/t) - lambda is SOC on (0, inf) and f(-1/t) - lambda on (-inf, 0).
/// The limit is taken exactly when f evaluates at 0, otherwise from probes at
/// t = 1e-8 and 1e-6 (declared divergent when they disagree by over 1%).
inline FlipResult reciprocal_flip(const FuncExpr& f, const CertifyConfig& cfg = {}) {
    const Interval pos(0.0, kInf);
    Verdict om = certify_operator_monotone(f, pos, cfg);
    if (!om.certified())
        throw PreconditionError("reciprocal_flip requires f certified operator monotone on (0, inf)");

    double lambda;
    bool have = false;
    try {
        lambda = f.eval(0.0);
        have = true;
    } catch (const DomainError&) {
    }
    if (!have) {
        double v8, v6;
        try {
            v8 = f.eval(1e-8);
            v6 = f.eval(1e-6);
        } catch (const DomainError&) {
            throw DivergentLimitError("f has no finite limit at 0+");
        }
        if (std::abs(v8 - v6) > 1e-2 * (1.0 + std::abs(v8)))
            throw DivergentLimitError("limit probes at 1e-8 and 1e-6 disagree; f diverges at 0+");
        lambda = v8;
    }

    const FuncExpr t = identity();
    FlipResult out;
    out.lambda = lambda;
    out.plus = LabeledFunc{substitute(f, constant(1.0) / t) - constant(lambda), pos, FuncLabel::SOC,
                           {{"reciprocal-flip", {}, lambda, false}}};
    out.minus = LabeledFunc{substitute(f, -(constant(1.0) / t)) - constant(lambda),
                            Interval(-kInf, 0.0), FuncLabel::SOC,
                            {{"reciprocal-flip-mirror", {}, lambda, false}}};
    return out;
}

}  // namespace opfunc
