#pragma once

#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "opfunc/certify.hpp"
#include "opfunc/expr.hpp"
#include "opfunc/interval.hpp"
#include "opfunc/kernels.hpp"

namespace opfunc {

enum class FuncLabel { None, OM, OC, SOC, CM, Bernstein };

inline const char* label_name(FuncLabel l) {
    switch (l) {
        case FuncLabel::OM: return "om";
        case FuncLabel::OC: return "oc";
        case FuncLabel::SOC: return "soc";
        case FuncLabel::CM: return "cm";
        case FuncLabel::Bernstein: return "bernstein";
        default: return "none";
    }
}

struct ProvenanceStep {
    std::string op;
    std::optional<double> point;
    std::optional<double> shift;
    bool endpoint = false;
};

/// A function together with its class label and the transform chain that
/// justifies the label.
struct LabeledFunc {
    FuncExpr expr;
    Interval interval{0.0, 1.0};
    FuncLabel label = FuncLabel::None;
    std::vector<ProvenanceStep> provenance;
    std::string text() const { return expr.str(); }
};

// ---------------------------------------------------------------------------
// rational-degree tracking (exact statement, tracked symbolically)
// ---------------------------------------------------------------------------

namespace rational {

/// Dense polynomial, ascending coefficients.
struct Poly {
    std::vector<double> c;

    static Poly constant(double v) { return {{v}}; }
    static Poly variable() { return {{0.0, 1.0}}; }

    void trim() {
        double m = 0.0;
        for (double x : c) m = std::max(m, std::abs(x));
        while (!c.empty() && std::abs(c.back()) <= 1e-10 * std::max(1.0, m)) c.pop_back();
    }
    int degree() const { return int(c.size()) - 1; }  // -1 for the zero polynomial
    bool is_zero() const { return c.empty(); }

    double eval(double t) const {
        double r = 0.0;
        for (std::size_t i = c.size(); i-- > 0;) r = r * t + c[i];
        return r;
    }

    friend Poly operator+(const Poly& a, const Poly& b) {
        Poly r;
        r.c.resize(std::max(a.c.size(), b.c.size()), 0.0);
        for (std::size_t i = 0; i < a.c.size(); ++i) r.c[i] += a.c[i];
        for (std::size_t i = 0; i < b.c.size(); ++i) r.c[i] += b.c[i];
        r.trim();
        return r;
    }
    friend Poly operator*(double s, const Poly& a) {
        Poly r = a;
        for (double& x : r.c) x *= s;
        r.trim();
        return r;
    }
    friend Poly operator*(const Poly& a, const Poly& b) {
        if (a.is_zero() || b.is_zero()) return {};
        Poly r;
        r.c.assign(a.c.size() + b.c.size() - 1, 0.0);
        for (std::size_t i = 0; i < a.c.size(); ++i)
            for (std::size_t j = 0; j < b.c.size(); ++j) r.c[i + j] += a.c[i] * b.c[j];
        r.trim();
        return r;
    }

    /// Divide by (t - r); the remainder must vanish (r is a root).
    Poly deflate_root(double root) const {
        if (is_zero()) return {};
        Poly q;
        q.c.assign(c.size() - 1, 0.0);
        double carry = c.back();
        for (std::size_t i = c.size() - 1; i-- > 0;) {
            if (i < q.c.size()) q.c[i] = carry;
            carry = c[i] + root * carry;
        }
        q.trim();
        return q;
    }
};

struct RationalFunc {
    Poly num, den;
    bool is_zero() const { return num.is_zero(); }
    int degree() const { return std::max(num.degree(), den.degree()); }
    std::pair<int, int> degrees() const { return {num.degree(), den.degree()}; }
};

/// Expression to rational form, when the tree is built from rational nodes.
inline std::optional<RationalFunc> to_rational(const FuncExpr& e) {
    const detail::Node& n = e.node();
    switch (n.kind) {
        case NodeKind::Constant: return RationalFunc{Poly::constant(n.value), Poly::constant(1.0)};
        case NodeKind::Identity: return RationalFunc{Poly::variable(), Poly::constant(1.0)};
        case NodeKind::Neg:
            if (auto u = to_rational(n.a)) return RationalFunc{-1.0 * u->num, u->den};
            return std::nullopt;
        case NodeKind::Add: {
            auto u = to_rational(n.a), v = to_rational(n.b);
            if (!u || !v) return std::nullopt;
            return RationalFunc{u->num * v->den + v->num * u->den, u->den * v->den};
        }
        case NodeKind::Mul: {
            auto u = to_rational(n.a), v = to_rational(n.b);
            if (!u || !v) return std::nullopt;
            return RationalFunc{u->num * v->num, u->den * v->den};
        }
        case NodeKind::Div: {
            auto u = to_rational(n.a), v = to_rational(n.b);
            if (!u || !v || v->is_zero()) return std::nullopt;
            return RationalFunc{u->num * v->den, u->den * v->num};
        }
        case NodeKind::Pow: {
            const double r = std::round(n.value);
            if (std::abs(n.value - r) > 1e-12 || std::abs(r) > 8) return std::nullopt;
            auto u = to_rational(n.a);
            if (!u) return std::nullopt;
            RationalFunc acc{Poly::constant(1.0), Poly::constant(1.0)};
            for (int i = 0; i < int(std::abs(r)); ++i)
                acc = RationalFunc{acc.num * u->num, acc.den * u->den};
            if (r < 0) std::swap(acc.num, acc.den);
            return acc;
        }
        default: return std::nullopt;
    }
}

/// Divided difference of a rational function: the base-point root is divided
/// out exactly, which is what makes the degree drop an exact statement.
inline RationalFunc divided_difference(const RationalFunc& f, double t0) {
    const double den_t0 = f.den.eval(t0);
    const double num_t0 = f.num.eval(t0);
    Poly n = den_t0 * f.num + (-num_t0) * f.den;
    Poly n1 = n.deflate_root(t0);
    return RationalFunc{(1.0 / den_t0) * n1, f.den};
}

inline RationalFunc neg_inv(const RationalFunc& f) { return {-1.0 * f.den, f.num}; }

inline RationalFunc mult_shift(const RationalFunc& f, double t0, double c) {
    Poly shifted_var = Poly{{-t0, 1.0}};
    return {f.num * shifted_var + c * f.den, f.den};
}

}  // namespace rational

// ---------------------------------------------------------------------------
// elementary transforms
// ---------------------------------------------------------------------------

namespace detail {

inline bool is_endpoint_of(double t, const Interval& j) { return t == j.lo() || t == j.hi(); }

inline void check_endpoint_rule(const LabeledFunc& f, double t) {
    if (!is_endpoint_of(t, f.interval)) return;
    for (auto it = f.provenance.rbegin(); it != f.provenance.rend(); ++it) {
        if (it->point.has_value()) {
            if (it->endpoint && *it->point == t)
                throw EndpointRepetitionError(
                    "consecutive construction points may not repeat the endpoint " +
                    std::to_string(t));
            return;
        }
    }
}

inline void check_point_in_closure(double t, const Interval& j) {
    if (!(t >= j.lo() && t <= j.hi()))
        throw PreconditionError("point " + std::to_string(t) + " outside the closure of " + j.str());
}

struct SweepStats {
    double maxabs = 0.0, minval = kInf, maxval = -kInf;
};

inline SweepStats sweep(const FuncExpr& f, const Interval& j, int n = 64) {
    SweepStats s;
    for (double t : make_grid(j, n)) {
        const double v = f.eval(t);
        s.maxabs = std::max(s.maxabs, std::abs(v));
        s.minval = std::min(s.minval, v);
        s.maxval = std::max(s.maxval, v);
    }
    return s;
}

}  // namespace detail

/// OM -> SOC: the divided difference at t0 (closure points allowed).
inline LabeledFunc kf_transform(const LabeledFunc& f, double t0) {
    if (f.label != FuncLabel::OM)
        throw PreconditionError("kf_transform requires an operator monotone input");
    detail::check_point_in_closure(t0, f.interval);
    detail::check_endpoint_rule(f, t0);
    LabeledFunc out;
    out.expr = divided_difference(f.expr, t0);
    out.interval = f.interval;
    out.label = FuncLabel::SOC;
    out.provenance = f.provenance;
    out.provenance.push_back({"kf", t0, {}, detail::is_endpoint_of(t0, f.interval)});
    return out;
}

/// SOC -> OC by g -> -1/g (g > 0), or negative OC -> SOC on the way back.
inline LabeledFunc neg_inv(const LabeledFunc& g) {
    const auto stats = detail::sweep(g.expr, g.interval);
    if (stats.maxabs <= 1e-12)
        throw ZeroFunctionError("neg_inv is undefined for the zero function");
    LabeledFunc out;
    if (g.label == FuncLabel::SOC) {
        if (stats.minval <= 0.0)
            throw PreconditionError("a non-zero SOC function must be strictly positive");
        out.label = FuncLabel::OC;
    } else if (g.label == FuncLabel::OC) {
        if (stats.maxval >= 0.0)
            throw PreconditionError("neg_inv of an OC function requires it to be strictly negative");
        out.label = FuncLabel::SOC;
    } else {
        throw PreconditionError("neg_inv requires an SOC- or OC-labeled input");
    }
    out.expr = -(constant(1.0) / g.expr);
    out.interval = g.interval;
    out.provenance = g.provenance;
    out.provenance.push_back({"neg-inv", {}, {}, false});
    return out;
}

/// OC -> OM: the divided difference at t1, subject to the endpoint rule.
inline LabeledFunc om_step(const LabeledFunc& g, double t1) {
    if (g.label != FuncLabel::OC)
        throw PreconditionError("om_step requires an operator convex input");
    detail::check_point_in_closure(t1, g.interval);
    detail::check_endpoint_rule(g, t1);
    LabeledFunc out;
    out.expr = divided_difference(g.expr, t1);
    out.interval = g.interval;
    out.label = FuncLabel::OM;
    out.provenance = g.provenance;
    out.provenance.push_back({"om-step", t1, {}, detail::is_endpoint_of(t1, g.interval)});
    return out;
}

/// Multiply-shift. From OM input: (t - t0) f + c0 must be strictly negative
/// (c0 chosen automatically when omitted), giving an OC function. From SOC
/// input: (t - t0) g + c is operator monotone for any shift (default 0).
inline LabeledFunc backward_step(const LabeledFunc& f, double t0,
                                 std::optional<double> c0 = std::nullopt) {
    detail::check_point_in_closure(t0, f.interval);
    const FuncExpr product = (identity() - constant(t0)) * f.expr;
    LabeledFunc out;
    out.interval = f.interval;
    out.provenance = f.provenance;
    if (f.label == FuncLabel::OM) {
        const Grid grid = make_grid(f.interval, 64);
        double maxv = -kInf;
        for (double t : grid) maxv = std::max(maxv, product.eval(t));
        // the grid maximum is only an upper-bound estimate when the interval
        // is unbounded; probe beyond the cap to detect growth
        if (!f.interval.bounded()) {
            for (double factor : {2.0, 4.0}) {
                if (!f.interval.hi_finite()) {
                    const double probe = product.eval(grid.back() * factor);
                    if (probe > maxv + 1e-9 * (1.0 + std::abs(maxv)))
                        throw InfeasibleError(
                            "(t - t0) f(t) is unbounded above; restrict to a smaller interval");
                }
                if (!f.interval.lo_finite()) {
                    const double probe = product.eval(grid.front() * factor);
                    if (probe > maxv + 1e-9 * (1.0 + std::abs(maxv)))
                        throw InfeasibleError(
                            "(t - t0) f(t) is unbounded above; restrict to a smaller interval");
                }
            }
        }
        const double chosen = c0 ? *c0 : -maxv - 0.01 * std::max(1.0, std::abs(maxv));
        out.expr = product + constant(chosen);
        for (double t : grid)
            if (out.expr.eval(t) >= 0.0)
                throw InfeasibleError("(t - t0) f(t) + c0 is not strictly negative; pick a smaller c0 "
                                      "or restrict to a smaller interval");
        out.label = FuncLabel::OC;
        out.provenance.push_back({"mult-shift", t0, chosen, detail::is_endpoint_of(t0, f.interval)});
    } else if (f.label == FuncLabel::SOC) {
        const double chosen = c0 ? *c0 : 0.0;
        out.expr = product + constant(chosen);
        out.label = FuncLabel::OM;
        out.provenance.push_back({"mult-shift", t0, chosen, detail::is_endpoint_of(t0, f.interval)});
    } else {
        throw PreconditionError("backward_step requires an OM- or SOC-labeled input");
    }
    return out;
}

// ---------------------------------------------------------------------------
// iterated processes
// ---------------------------------------------------------------------------

struct TraceStep {
    LabeledFunc func;
    std::optional<Verdict> check;  // independent certification, when requested
    std::optional<std::pair<int, int>> degree;  // (num, den) for rational seeds
};

struct ProcessTrace {
    std::vector<TraceStep> steps;
    bool terminated = false;
    std::string reason;
};

namespace detail {

inline bool numerically_zero(const FuncExpr& f, const Interval& j, double scale) {
    return sweep(f, j).maxabs <= 1e-12 * std::max(1.0, scale);
}

inline bool numerically_constant(const FuncExpr& f, const Interval& j) {
    const auto s = sweep(f, j);
    return s.maxval - s.minval <= 1e-12 * (1.0 + s.maxabs);
}

inline Verdict check_label(const LabeledFunc& f, const CertifyConfig& cfg) {
    switch (f.label) {
        case FuncLabel::OM: return certify_operator_monotone(f.expr, f.interval, cfg);
        case FuncLabel::OC: return certify_operator_convex(f.expr, f.interval, cfg);
        case FuncLabel::SOC: return certify_strongly_operator_convex(f.expr, f.interval, cfg);
        default: {
            Verdict v;
            v.status = Status::Inconclusive;
            v.reason = "no certifier for this label";
            return v;
        }
    }
}

/// Advance the rational mirror through a divided difference; the mirror is
/// dropped (not an error) if the denominator degenerates at the base point.
inline void mirror_divdiff(std::optional<rational::RationalFunc>& mirror, double t0) {
    if (!mirror) return;
    const double d = mirror->den.eval(t0);
    if (d == 0.0 || !std::isfinite(d)) {
        mirror.reset();
        return;
    }
    mirror = rational::divided_difference(*mirror, t0);
}

inline void push_step(ProcessTrace& trace, const LabeledFunc& f,
                      const std::optional<rational::RationalFunc>& mirror, bool check,
                      const CertifyConfig& cfg) {
    TraceStep st;
    st.func = f;
    if (mirror) st.degree = mirror->degrees();
    if (check) st.check = check_label(f, cfg);
    trace.steps.push_back(std::move(st));
}

}  // namespace detail

/// The main construction: f_{3n} OM -> f_{3n+1} SOC (divided difference)
/// -> f_{3n+2} OC (-1/.) -> f_{3n+3} OM (divided difference), consuming two
/// points per cycle. Stops on a zero SOC iterate, a constant OM iterate,
/// exhausted points, or max_steps.
inline ProcessTrace forward_process(const FuncExpr& f0, const Interval& j,
                                    const std::vector<double>& points, int max_steps,
                                    const CertifyConfig& cfg = {}, bool check_labels = false) {
    ProcessTrace trace;
    Verdict seed = certify_operator_monotone(f0, j, cfg);
    if (!seed.certified()) {
        trace.terminated = true;
        trace.reason = "seed is not certified operator monotone (" +
                       std::string(status_name(seed.status)) + ")";
        TraceStep st;
        st.func = LabeledFunc{f0, j, FuncLabel::None, {{"seed", {}, {}, false}}};
        st.check = seed;
        trace.steps.push_back(std::move(st));
        return trace;
    }

    LabeledFunc cur{f0, j, FuncLabel::OM, {{"seed", {}, {}, false}}};
    auto mirror = rational::to_rational(f0);
    const double seed_scale = detail::sweep(f0, j).maxabs;
    {
        TraceStep st;
        st.func = cur;
        st.check = seed;
        if (mirror) st.degree = mirror->degrees();
        trace.steps.push_back(std::move(st));
    }

    std::size_t pi = 0;
    for (int step = 0; step < max_steps; ++step) {
        const int phase = step % 3;
        try {
            if (phase == 0 || phase == 2) {
                if (pi >= points.size()) {
                    trace.terminated = true;
                    trace.reason = "point sequence exhausted";
                    return trace;
                }
                const double tp = points[pi++];
                cur = (phase == 0) ? kf_transform(cur, tp) : om_step(cur, tp);
                detail::mirror_divdiff(mirror, tp);
            } else {
                cur = neg_inv(cur);
                if (mirror) mirror = rational::neg_inv(*mirror);
            }
        } catch (const Error& e) {
            trace.terminated = true;
            trace.reason = std::string("infeasible step: ") + e.what();
            return trace;
        }
        detail::push_step(trace, cur, mirror, check_labels, cfg);
        if (phase == 0 && detail::numerically_zero(cur.expr, j, seed_scale)) {
            trace.terminated = true;
            trace.reason = "zero SOC iterate";
            return trace;
        }
        if (phase == 2 && detail::numerically_constant(cur.expr, j)) {
            trace.terminated = true;
            trace.reason = mirror ? "constant OM iterate (rational degree exhausted)"
                                  : "constant OM iterate";
            return trace;
        }
    }
    trace.terminated = true;
    trace.reason = "maximum step count reached";
    return trace;
}

/// The star variant: repeated divided differences only, labels alternating
/// OM, SOC, OM, ...
inline ProcessTrace star_process(const FuncExpr& f0, const Interval& j,
                                 const std::vector<double>& points, int max_steps,
                                 const CertifyConfig& cfg = {}, bool check_labels = false) {
    ProcessTrace trace;
    Verdict seed = certify_operator_monotone(f0, j, cfg);
    if (!seed.certified()) {
        trace.terminated = true;
        trace.reason = "seed is not certified operator monotone (" +
                       std::string(status_name(seed.status)) + ")";
        TraceStep st;
        st.func = LabeledFunc{f0, j, FuncLabel::None, {{"seed", {}, {}, false}}};
        st.check = seed;
        trace.steps.push_back(std::move(st));
        return trace;
    }
    LabeledFunc cur{f0, j, FuncLabel::OM, {{"seed", {}, {}, false}}};
    auto mirror = rational::to_rational(f0);
    const double seed_scale = detail::sweep(f0, j).maxabs;
    {
        TraceStep st;
        st.func = cur;
        st.check = seed;
        if (mirror) st.degree = mirror->degrees();
        trace.steps.push_back(std::move(st));
    }
    for (int step = 0; step < max_steps && std::size_t(step) < points.size(); ++step) {
        const double tp = points[std::size_t(step)];
        try {
            detail::check_point_in_closure(tp, j);
            detail::check_endpoint_rule(cur, tp);
            LabeledFunc next;
            next.expr = divided_difference(cur.expr, tp);
            next.interval = j;
            next.label = (cur.label == FuncLabel::OM) ? FuncLabel::SOC : FuncLabel::OM;
            next.provenance = cur.provenance;
            next.provenance.push_back({"star-step", tp, {}, detail::is_endpoint_of(tp, j)});
            cur = std::move(next);
            detail::mirror_divdiff(mirror, tp);
        } catch (const Error& e) {
            trace.terminated = true;
            trace.reason = std::string("infeasible step: ") + e.what();
            return trace;
        }
        detail::push_step(trace, cur, mirror, check_labels, cfg);
        if (detail::numerically_zero(cur.expr, j, seed_scale)) {
            trace.terminated = true;
            trace.reason = "zero iterate";
            return trace;
        }
    }
    if (!trace.terminated) {
        trace.terminated = true;
        trace.reason = std::size_t(max_steps) <= points.size() ? "maximum step count reached"
                                                               : "point sequence exhausted";
    }
    return trace;
}

/// The backward run: f_0 OM -> f_{-1} OC (multiply-shift, negative) ->
/// f_{-2} SOC (-1/.) -> f_{-3} OM (multiply-shift), and so on.
inline ProcessTrace backward_process(const FuncExpr& f0, const Interval& j,
                                     const std::vector<double>& points,
                                     const std::vector<double>& shifts, int max_steps,
                                     const CertifyConfig& cfg = {}, bool check_labels = false) {
    ProcessTrace trace;
    Verdict seed = certify_operator_monotone(f0, j, cfg);
    if (!seed.certified()) {
        trace.terminated = true;
        trace.reason = "seed is not certified operator monotone (" +
                       std::string(status_name(seed.status)) + ")";
        TraceStep st;
        st.func = LabeledFunc{f0, j, FuncLabel::None, {{"seed", {}, {}, false}}};
        st.check = seed;
        trace.steps.push_back(std::move(st));
        return trace;
    }
    LabeledFunc cur{f0, j, FuncLabel::OM, {{"seed", {}, {}, false}}};
    auto mirror = rational::to_rational(f0);
    {
        TraceStep st;
        st.func = cur;
        st.check = seed;
        if (mirror) st.degree = mirror->degrees();
        trace.steps.push_back(std::move(st));
    }
    std::size_t pi = 0;
    for (int step = 0; step < max_steps; ++step) {
        const int phase = step % 3;
        try {
            if (phase == 0 || phase == 2) {
                if (pi >= points.size()) {
                    trace.terminated = true;
                    trace.reason = "point sequence exhausted";
                    return trace;
                }
                const double tp = points[pi];
                std::optional<double> c;
                if (pi < shifts.size()) c = shifts[pi];
                ++pi;
                cur = backward_step(cur, tp, c);
                if (mirror) mirror = rational::mult_shift(*mirror, tp,
                                                          cur.provenance.back().shift.value_or(0.0));
            } else {
                cur = neg_inv(cur);
                if (mirror) mirror = rational::neg_inv(*mirror);
            }
        } catch (const Error& e) {
            trace.terminated = true;
            trace.reason = std::string("infeasible step: ") + e.what();
            return trace;
        }
        detail::push_step(trace, cur, mirror, check_labels, cfg);
    }
    trace.terminated = true;
    trace.reason = "maximum step count reached";
    return trace;
}

// ---------------------------------------------------------------------------
// composition rules
// ---------------------------------------------------------------------------

namespace detail {

inline std::pair<double, double> range_estimate(const FuncExpr& f, const Interval& j) {
    const auto s = sweep(f, j, 64);
    return {s.minval, s.maxval};
}

inline void require_range_inside(const FuncExpr& f, const Interval& j, const Interval& jphi) {
    auto [lo, hi] = range_estimate(f, j);
    if (!jphi.contains(lo, 0.0) || !jphi.contains(hi, 0.0))
        throw PreconditionError("range of f, about [" + std::to_string(lo) + ", " +
                                std::to_string(hi) + "], escapes the domain " + jphi.str());
}

}  // namespace detail

/// phi OM on J_phi with 0 in J_phi and phi(0) >= 0, composed with SOC f:
/// the composite stays SOC.
inline LabeledFunc compose_om_soc(const FuncExpr& phi, const Interval& jphi, const LabeledFunc& f,
                                  const CertifyConfig& cfg = {}) {
    if (f.label != FuncLabel::SOC)
        throw PreconditionError("compose_om_soc requires an SOC-labeled inner function");
    if (!jphi.contains(0.0))
        throw PreconditionError("0 must belong to the domain of phi");
    const double phi0 = phi.eval(0.0);
    if (phi0 < 0.0) throw PreconditionError("phi(0) = " + std::to_string(phi0) + " is negative");
    detail::require_range_inside(f.expr, f.interval, jphi);
    Verdict v = certify_operator_monotone(phi, jphi, cfg);
    if (!v.certified())
        throw PreconditionError("phi is not certified operator monotone on " + jphi.str());
    LabeledFunc out;
    out.expr = substitute(phi, f.expr);
    out.interval = f.interval;
    out.label = FuncLabel::SOC;
    out.provenance = f.provenance;
    out.provenance.push_back({"compose-om-soc", {}, {}, false});
    return out;
}

/// Composition preserving operator convexity. Either phi is OM and OC with
/// range(f) inside its domain (f operator convex), or f is SOC and 0 lies in
/// (or is the left endpoint of) the domain of phi, with phi OM.
inline LabeledFunc compose_oc(const FuncExpr& phi, const Interval& jphi, const LabeledFunc& f,
                              const CertifyConfig& cfg = {}) {
    detail::require_range_inside(f.expr, f.interval, jphi);
    LabeledFunc out;
    out.interval = f.interval;
    out.provenance = f.provenance;
    out.label = FuncLabel::OC;
    const bool zero_ok = jphi.contains(0.0) || jphi.lo() == 0.0;
    if (f.label == FuncLabel::SOC && zero_ok) {
        Verdict om = certify_operator_monotone(phi, jphi, cfg);
        if (!om.certified())
            throw PreconditionError("phi is not certified operator monotone on " + jphi.str());
    } else if (f.label == FuncLabel::OC || f.label == FuncLabel::SOC) {
        Verdict om = certify_operator_monotone(phi, jphi, cfg);
        Verdict oc = certify_operator_convex(phi, jphi, cfg);
        if (!om.certified() || !oc.certified())
            throw PreconditionError(
                "phi must be certified both operator monotone and operator convex on " + jphi.str());
    } else {
        throw PreconditionError("compose_oc requires an OC- or SOC-labeled inner function");
    }
    out.expr = substitute(phi, f.expr);
    out.provenance.push_back({"compose-oc", {}, {}, false});
    return out;
}

/// SOC g integrates to an operator monotone function.
inline LabeledFunc antiderivative(const LabeledFunc& g, double base) {
    if (g.label != FuncLabel::SOC)
        throw PreconditionError("antiderivative expects an SOC-labeled integrand");
    if (!g.interval.contains(base))
        throw PreconditionError("base point must lie in the interval");
    LabeledFunc out;
    out.expr = antiderivative(g.expr, base);
    out.interval = g.interval;
    out.label = FuncLabel::OM;
    out.provenance = g.provenance;
    out.provenance.push_back({"antiderivative", base, {}, false});
    return out;
}

// ---------------------------------------------------------------------------
// the transform family on SOC(0, inf)
// ---------------------------------------------------------------------------

struct SocZoo {
    LabeledFunc inv_th;     // 1/(t h(t)), SOC(0, inf)
    LabeledFunc th;         // t h(t), OM
    LabeledFunc t_over_h;   // t/h(t), OC on [0, inf)
    std::optional<LabeledFunc> phi_h, psi_inv_th, product;  // all SOC(0, inf)
};

inline SocZoo soc_zoo(const LabeledFunc& h, const std::optional<FuncExpr>& phi = std::nullopt,
                      const std::optional<FuncExpr>& psi = std::nullopt,
                      const CertifyConfig& cfg = {}) {
    const Interval pos(0.0, kInf);
    if (h.label != FuncLabel::SOC || h.interval.lo() != 0.0 || h.interval.hi_finite())
        throw PreconditionError("soc_zoo expects an SOC-labeled function on (0, inf)");
    const auto stats = detail::sweep(h.expr, pos);
    if (stats.maxabs <= 1e-12) throw PreconditionError("soc_zoo requires h != 0");

    const FuncExpr t = identity();
    SocZoo zoo;
    zoo.inv_th = LabeledFunc{constant(1.0) / (t * h.expr), pos, FuncLabel::SOC,
                             {{"soc-zoo: 1/(t h)", {}, {}, false}}};
    zoo.th = LabeledFunc{t * h.expr, pos, FuncLabel::OM, {{"soc-zoo: t h", {}, {}, false}}};
    zoo.t_over_h = LabeledFunc{t / h.expr, Interval(0.0, kInf, true, false), FuncLabel::OC,
                               {{"soc-zoo: t/h", {}, {}, false}}};

    auto check_positive_om = [&](const FuncExpr& p, const char* who) {
        const auto s = detail::sweep(p, pos);
        if (s.minval <= 0.0)
            throw PreconditionError(std::string(who) + " must be strictly positive on (0, inf)");
        if (!certify_operator_monotone(p, pos, cfg).certified())
            throw PreconditionError(std::string(who) +
                                    " is not certified operator monotone on (0, inf)");
    };
    if (phi && psi) {
        check_positive_om(*phi, "phi");
        check_positive_om(*psi, "psi");
        zoo.phi_h = LabeledFunc{substitute(*phi, h.expr), pos, FuncLabel::SOC,
                                {{"soc-zoo: phi(h)", {}, {}, false}}};
        zoo.psi_inv_th = LabeledFunc{substitute(*psi, zoo.inv_th.expr), pos, FuncLabel::SOC,
                                     {{"soc-zoo: psi(1/(t h))", {}, {}, false}}};
        zoo.product = LabeledFunc{zoo.phi_h->expr * zoo.psi_inv_th->expr, pos, FuncLabel::SOC,
                                  {{"soc-zoo: phi(h) psi(1/(t h))", {}, {}, false}}};
    } else if (phi || psi) {
        throw PreconditionError("soc_zoo takes phi and psi together");
    }
    return zoo;
}

}  // namespace opfunc
