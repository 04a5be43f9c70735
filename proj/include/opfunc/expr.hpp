#pragma once

#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <cstring>
#include <memory>
#include <optional>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include "opfunc/errors.hpp"

namespace opfunc {

enum class NodeKind {
    Constant,
    Identity,
    Add,
    Mul,
    Div,
    Neg,
    Pow,   // child ^ real exponent
    Exp,
    Log,
    Tan,
    DividedDifference,  // t -> (f(t) - f(t0)) / (t - t0), m-th derivative form
    Integral            // t -> integral of child from a base point
};

namespace detail {
struct Node;
}

/// Immutable expression tree for a real function of one variable t.
/// Value-semantic handle; copying is cheap (shared structure).
class FuncExpr {
  public:
    FuncExpr() = default;  // empty handle; using it throws

    double eval(double t) const;
    FuncExpr derivative(int order = 1) const;
    std::string str() const;
    NodeKind kind() const;
    bool valid() const { return node_ != nullptr; }
    const detail::Node& node() const;

  private:
    explicit FuncExpr(std::shared_ptr<const detail::Node> n) : node_(std::move(n)) {}
    std::shared_ptr<const detail::Node> node_;
    friend FuncExpr make_expr(detail::Node&&);
};

namespace detail {

struct Node {
    NodeKind kind = NodeKind::Constant;
    // Constant: the value. Pow: the exponent. DividedDifference: the base
    // point t0. Integral: the lower limit.
    double value = 0.0;
    FuncExpr a, b;

    // DividedDifference payload. dd_derivs[k] is the k-th derivative of the
    // child, k = 0..dd_order; the node represents the dd_order-th derivative
    // of the divided difference of dd_derivs[0].
    int dd_order = 0;
    std::vector<FuncExpr> dd_derivs;
    double dd_value_t0 = 0.0;  // child value at t0 (one-sided limit if needed)
    bool dd_have_taylor = false;
    double dd_taylor0 = 0.0, dd_taylor1 = 0.0;
};

}  // namespace detail

inline FuncExpr make_expr(detail::Node&& n) {
    return FuncExpr(std::make_shared<const detail::Node>(std::move(n)));
}

inline const detail::Node& FuncExpr::node() const {
    if (!node_) throw Error("empty FuncExpr");
    return *node_;
}

inline NodeKind FuncExpr::kind() const { return node().kind; }

// ---------------------------------------------------------------------------
// constructors with constant folding
// ---------------------------------------------------------------------------

inline FuncExpr constant(double c) {
    detail::Node n;
    n.kind = NodeKind::Constant;
    n.value = c;
    return make_expr(std::move(n));
}

inline FuncExpr identity() {
    detail::Node n;
    n.kind = NodeKind::Identity;
    return make_expr(std::move(n));
}

namespace detail {
inline bool is_const(const FuncExpr& e, double* v = nullptr) {
    if (!e.valid() || e.kind() != NodeKind::Constant) return false;
    if (v) *v = e.node().value;
    return true;
}
inline bool is_const_value(const FuncExpr& e, double want) {
    double v;
    return is_const(e, &v) && v == want;
}
}  // namespace detail

inline FuncExpr operator-(const FuncExpr& u) {
    double v;
    if (detail::is_const(u, &v)) return constant(-v);
    if (u.kind() == NodeKind::Neg) return u.node().a;
    detail::Node n;
    n.kind = NodeKind::Neg;
    n.a = u;
    return make_expr(std::move(n));
}

inline FuncExpr operator+(const FuncExpr& x, const FuncExpr& y) {
    double vx, vy;
    if (detail::is_const(x, &vx) && detail::is_const(y, &vy)) return constant(vx + vy);
    if (detail::is_const_value(x, 0.0)) return y;
    if (detail::is_const_value(y, 0.0)) return x;
    detail::Node n;
    n.kind = NodeKind::Add;
    n.a = x;
    n.b = y;
    return make_expr(std::move(n));
}

inline FuncExpr operator-(const FuncExpr& x, const FuncExpr& y) { return x + (-y); }

inline FuncExpr operator*(const FuncExpr& x, const FuncExpr& y) {
    double vx, vy;
    if (detail::is_const(x, &vx) && detail::is_const(y, &vy)) return constant(vx * vy);
    if (detail::is_const_value(x, 0.0) || detail::is_const_value(y, 0.0)) return constant(0.0);
    if (detail::is_const_value(x, 1.0)) return y;
    if (detail::is_const_value(y, 1.0)) return x;
    if (detail::is_const_value(x, -1.0)) return -y;
    if (detail::is_const_value(y, -1.0)) return -x;
    detail::Node n;
    n.kind = NodeKind::Mul;
    n.a = x;
    n.b = y;
    return make_expr(std::move(n));
}

inline FuncExpr operator/(const FuncExpr& x, const FuncExpr& y) {
    double vy;
    if (detail::is_const(y, &vy) && vy != 0.0 && std::isfinite(vy)) return x * constant(1.0 / vy);
    if (detail::is_const_value(x, 0.0)) return constant(0.0);
    detail::Node n;
    n.kind = NodeKind::Div;
    n.a = x;
    n.b = y;
    return make_expr(std::move(n));
}

inline FuncExpr operator+(const FuncExpr& x, double c) { return x + constant(c); }
inline FuncExpr operator+(double c, const FuncExpr& x) { return constant(c) + x; }
inline FuncExpr operator-(const FuncExpr& x, double c) { return x + constant(-c); }
inline FuncExpr operator-(double c, const FuncExpr& x) { return constant(c) - x; }
inline FuncExpr operator*(const FuncExpr& x, double c) { return x * constant(c); }
inline FuncExpr operator*(double c, const FuncExpr& x) { return constant(c) * x; }
inline FuncExpr operator/(const FuncExpr& x, double c) { return x / constant(c); }
inline FuncExpr operator/(double c, const FuncExpr& x) { return constant(c) / x; }

namespace detail {
inline double pow_eval(double u, double al) {
    const double r = std::round(al);
    if (std::abs(al - r) < 1e-12 && std::abs(r) < 1e9) {
        if (u == 0.0 && r < 0.0) throw DomainError("zero raised to a negative power");
        const double out = std::pow(u, r);
        if (!std::isfinite(out)) throw DomainError("power overflow");
        return out;
    }
    if (u < 0.0) throw DomainError("fractional power of a negative base");
    if (u == 0.0) {
        if (al > 0.0) return 0.0;
        throw DomainError("zero raised to a non-positive fractional power");
    }
    const double out = std::pow(u, al);
    if (!std::isfinite(out)) throw DomainError("power overflow");
    return out;
}
}  // namespace detail

inline FuncExpr pow(const FuncExpr& u, double alpha) {
    if (alpha == 0.0) return constant(1.0);
    if (alpha == 1.0) return u;
    double v;
    if (detail::is_const(u, &v)) {
        try {
            return constant(detail::pow_eval(v, alpha));
        } catch (const DomainError&) { /* keep the node; error surfaces at eval */
        }
    }
    detail::Node n;
    n.kind = NodeKind::Pow;
    n.value = alpha;
    n.a = u;
    return make_expr(std::move(n));
}

inline FuncExpr sqrt(const FuncExpr& u) { return pow(u, 0.5); }

namespace detail {
inline FuncExpr unary(NodeKind k, const FuncExpr& u, double (*fold)(double)) {
    double v;
    if (is_const(u, &v)) {
        const double r = fold(v);
        if (std::isfinite(r)) return constant(r);
    }
    Node n;
    n.kind = k;
    n.a = u;
    return make_expr(std::move(n));
}
}  // namespace detail

inline FuncExpr exp(const FuncExpr& u) {
    return detail::unary(NodeKind::Exp, u, +[](double v) { return std::exp(v); });
}
inline FuncExpr log(const FuncExpr& u) {
    return detail::unary(NodeKind::Log, u, +[](double v) { return v > 0 ? std::log(v) : std::nan(""); });
}
inline FuncExpr tan(const FuncExpr& u) {
    return detail::unary(NodeKind::Tan, u, +[](double v) { return std::tan(v); });
}

// ---------------------------------------------------------------------------
// structure queries
// ---------------------------------------------------------------------------

/// True when the expression depends on t.
inline bool depends_on_t(const FuncExpr& e) {
    const auto& n = e.node();
    switch (n.kind) {
        case NodeKind::Constant: return false;
        case NodeKind::Identity:
        case NodeKind::DividedDifference:
        case NodeKind::Integral: return true;
        case NodeKind::Neg:
        case NodeKind::Exp:
        case NodeKind::Log:
        case NodeKind::Tan:
        case NodeKind::Pow: return depends_on_t(n.a);
        default: return depends_on_t(n.a) || depends_on_t(n.b);
    }
}

/// Value of a t-free expression, if it is one and it evaluates.
inline std::optional<double> constant_value(const FuncExpr& e) {
    if (!e.valid() || depends_on_t(e)) return std::nullopt;
    try {
        return e.eval(0.0);
    } catch (const Error&) {
        return std::nullopt;
    }
}

/// Decompose into alpha + beta * t, if the tree is affine.
inline std::optional<std::pair<double, double>> as_affine(const FuncExpr& e) {
    using P = std::pair<double, double>;
    const auto& n = e.node();
    switch (n.kind) {
        case NodeKind::Constant: return P{n.value, 0.0};
        case NodeKind::Identity: return P{0.0, 1.0};
        case NodeKind::Neg:
            if (auto u = as_affine(n.a)) return P{-u->first, -u->second};
            return std::nullopt;
        case NodeKind::Add: {
            auto u = as_affine(n.a), v = as_affine(n.b);
            if (u && v) return P{u->first + v->first, u->second + v->second};
            return std::nullopt;
        }
        case NodeKind::Mul: {
            double c;
            if (detail::is_const(n.a, &c)) {
                if (auto u = as_affine(n.b)) return P{c * u->first, c * u->second};
            }
            if (detail::is_const(n.b, &c)) {
                if (auto u = as_affine(n.a)) return P{c * u->first, c * u->second};
            }
            return std::nullopt;
        }
        default: return std::nullopt;
    }
}

// ---------------------------------------------------------------------------
// evaluation
// ---------------------------------------------------------------------------

namespace detail {
double integrate_adaptive(const FuncExpr& f, double a, double b, double tol);
}

inline double FuncExpr::eval(double t) const {
    const detail::Node& n = node();
    double r = 0.0;
    switch (n.kind) {
        case NodeKind::Constant: r = n.value; break;
        case NodeKind::Identity: r = t; break;
        case NodeKind::Add: r = n.a.eval(t) + n.b.eval(t); break;
        case NodeKind::Mul: r = n.a.eval(t) * n.b.eval(t); break;
        case NodeKind::Div: {
            const double den = n.b.eval(t);
            if (den == 0.0) throw DomainError("division by zero at t=" + std::to_string(t));
            r = n.a.eval(t) / den;
            break;
        }
        case NodeKind::Neg: r = -n.a.eval(t); break;
        case NodeKind::Pow: r = detail::pow_eval(n.a.eval(t), n.value); break;
        case NodeKind::Exp: r = std::exp(n.a.eval(t)); break;
        case NodeKind::Log: {
            const double u = n.a.eval(t);
            if (u <= 0.0) throw DomainError("log of a non-positive value at t=" + std::to_string(t));
            r = std::log(u);
            break;
        }
        case NodeKind::Tan: r = std::tan(n.a.eval(t)); break;
        case NodeKind::DividedDifference: {
            const double t0 = n.value;
            const double h = t - t0;
            const double radius = 1e-7 * (1.0 + std::abs(t0));
            if (std::abs(h) < radius && n.dd_have_taylor) {
                r = n.dd_taylor0 + h * n.dd_taylor1;
                break;
            }
            if (h == 0.0) throw DomainError("divided difference: derivative at the base point is unavailable");
            double q = (n.dd_derivs[0].eval(t) - n.dd_value_t0) / h;
            for (int k = 1; k <= n.dd_order; ++k)
                q = (n.dd_derivs[std::size_t(k)].eval(t) - double(k) * q) / h;
            r = q;
            break;
        }
        case NodeKind::Integral: r = detail::integrate_adaptive(n.a, n.value, t, 1e-10); break;
    }
    if (!std::isfinite(r)) throw DomainError("non-finite value at t=" + std::to_string(t));
    return r;
}

// ---------------------------------------------------------------------------
// divided differences
// ---------------------------------------------------------------------------

/// Value of f at t0, falling back to a one-sided numeric limit when direct
/// evaluation hits a removable singularity or an interval endpoint.
inline double value_with_limit(const FuncExpr& f, double t0) {
    try {
        return f.eval(t0);
    } catch (const DomainError&) {
    }
    const double scale = 1.0 + std::abs(t0);
    const double h1 = 1e-6 * scale, h2 = 1e-8 * scale;
    bool have_r = false, have_l = false;
    double val_r = 0.0, val_l = 0.0;
    try {
        const double v1 = f.eval(t0 + h1), v2 = f.eval(t0 + h2);
        if (std::abs(v1 - v2) <= 1e-3 * (1.0 + std::abs(v2))) {
            have_r = true;
            val_r = v2;
        }
    } catch (const DomainError&) {
    }
    try {
        const double v1 = f.eval(t0 - h1), v2 = f.eval(t0 - h2);
        if (std::abs(v1 - v2) <= 1e-3 * (1.0 + std::abs(v2))) {
            have_l = true;
            val_l = v2;
        }
    } catch (const DomainError&) {
    }
    if (have_r && have_l) {
        if (std::abs(val_r - val_l) <= 1e-6 * (1.0 + std::abs(val_r))) return 0.5 * (val_r + val_l);
        throw DomainError("one-sided limits disagree at t0=" + std::to_string(t0));
    }
    if (have_r) return val_r;
    if (have_l) return val_l;
    throw DomainError("no finite limit at t0=" + std::to_string(t0));
}

namespace detail {
inline FuncExpr make_divdiff(std::vector<FuncExpr> derivs, double t0, int order, double f_t0) {
    Node n;
    n.kind = NodeKind::DividedDifference;
    n.value = t0;
    n.a = derivs[0];
    n.dd_order = order;
    n.dd_value_t0 = f_t0;
    // Taylor branch for t near t0: the divided difference of f has the power
    // series sum f^(k+1)(t0) (t-t0)^k / (k+1)!; differentiating m times gives
    // value f^(m+1)(t0)/(m+1) and slope f^(m+2)(t0)/(m+2) at t0.
    try {
        FuncExpr fm1 = derivs[std::size_t(order)].derivative();
        FuncExpr fm2 = fm1.derivative();
        const double c0 = fm1.eval(t0) / double(order + 1);
        const double c1 = fm2.eval(t0) / double(order + 2);
        if (std::isfinite(c0) && std::isfinite(c1)) {
            n.dd_taylor0 = c0;
            n.dd_taylor1 = c1;
            n.dd_have_taylor = true;
        }
    } catch (const Error&) {
        // base point at an endpoint with a diverging derivative: the direct
        // formula still works everywhere except within the Taylor radius
    }
    n.dd_derivs = std::move(derivs);
    return make_expr(std::move(n));
}
}  // namespace detail

/// The one-variable function t -> (f(t) - f(t0)) / (t - t0), with the value
/// f'(t0) at the removable singularity. t0 may be an endpoint of f's domain;
/// f(t0) is then resolved as a one-sided limit.
inline FuncExpr divided_difference(const FuncExpr& f, double t0) {
    const double f_t0 = value_with_limit(f, t0);
    return detail::make_divdiff({f}, t0, 0, f_t0);
}

// ---------------------------------------------------------------------------
// differentiation
// ---------------------------------------------------------------------------

inline FuncExpr FuncExpr::derivative(int order) const {
    if (order < 1) throw Error("derivative order must be >= 1");
    FuncExpr cur = *this;
    for (int i = 0; i < order; ++i) {
        const detail::Node& n = cur.node();
        switch (n.kind) {
            case NodeKind::Constant: cur = constant(0.0); break;
            case NodeKind::Identity: cur = constant(1.0); break;
            case NodeKind::Add: cur = n.a.derivative() + n.b.derivative(); break;
            case NodeKind::Mul: cur = n.a.derivative() * n.b + n.a * n.b.derivative(); break;
            case NodeKind::Div:
                // quotient rule in product form keeps repeated derivatives small
                cur = n.a.derivative() / n.b - n.a * n.b.derivative() * pow(n.b, -2.0);
                break;
            case NodeKind::Neg: cur = -n.a.derivative(); break;
            case NodeKind::Pow: cur = constant(n.value) * pow(n.a, n.value - 1.0) * n.a.derivative(); break;
            case NodeKind::Exp: cur = exp(n.a) * n.a.derivative(); break;
            case NodeKind::Log: cur = n.a.derivative() * pow(n.a, -1.0); break;
            case NodeKind::Tan: cur = (constant(1.0) + tan(n.a) * tan(n.a)) * n.a.derivative(); break;
            case NodeKind::DividedDifference: {
                std::vector<FuncExpr> d = n.dd_derivs;
                d.push_back(d.back().derivative());
                cur = detail::make_divdiff(std::move(d), n.value, n.dd_order + 1, n.dd_value_t0);
                break;
            }
            case NodeKind::Integral: cur = n.a; break;
        }
    }
    return cur;
}

// ---------------------------------------------------------------------------
// substitution (composition)
// ---------------------------------------------------------------------------

/// f with every occurrence of t replaced by g, i.e. the composition f(g(t)).
inline FuncExpr substitute(const FuncExpr& f, const FuncExpr& g) {
    const detail::Node& n = f.node();
    switch (n.kind) {
        case NodeKind::Constant: return f;
        case NodeKind::Identity: return g;
        case NodeKind::Add: return substitute(n.a, g) + substitute(n.b, g);
        case NodeKind::Mul: return substitute(n.a, g) * substitute(n.b, g);
        case NodeKind::Div: return substitute(n.a, g) / substitute(n.b, g);
        case NodeKind::Neg: return -substitute(n.a, g);
        case NodeKind::Pow: return pow(substitute(n.a, g), n.value);
        case NodeKind::Exp: return exp(substitute(n.a, g));
        case NodeKind::Log: return log(substitute(n.a, g));
        case NodeKind::Tan: return tan(substitute(n.a, g));
        default:
            throw Error("composition into a divided-difference or integral node is not supported");
    }
}

// ---------------------------------------------------------------------------
// quadrature (Gauss-Kronrod 7/15)
// ---------------------------------------------------------------------------

namespace detail {

inline double integrate_segment(const FuncExpr& f, double a, double b, double* err) {
    static const double xgk[8] = {0.991455371120813, 0.949107912342759, 0.864864423359769,
                                  0.741531185599394, 0.586087235467691, 0.405845151377397,
                                  0.207784955007898, 0.0};
    static const double wgk[8] = {0.022935322010529, 0.063092092629979, 0.104790010322250,
                                  0.140653259715525, 0.169004726639267, 0.190350578064785,
                                  0.204432940075298, 0.209482141084728};
    static const double wg[4] = {0.129484966168870, 0.279705391489277, 0.381830050505119,
                                 0.417959183673469};
    const double c = 0.5 * (a + b), h = 0.5 * (b - a);
    double sk = 0.0, sg = 0.0;
    for (int i = 0; i < 8; ++i) {
        const double x = h * xgk[i];
        double fv;
        if (i == 7) {
            fv = f.eval(c);
            sk += wgk[i] * fv;
            sg += wg[3] * fv;
        } else {
            const double f1 = f.eval(c - x), f2 = f.eval(c + x);
            sk += wgk[i] * (f1 + f2);
            if (i % 2 == 1) sg += wg[i / 2] * (f1 + f2);
        }
    }
    *err = std::abs((sk - sg) * h);
    return sk * h;
}

inline double integrate_rec(const FuncExpr& f, double a, double b, double tol, int depth) {
    double err = 0.0;
    const double v = integrate_segment(f, a, b, &err);
    if (err <= tol || err <= 1e-15 * std::abs(v)) return v;
    if (depth >= 48) throw QuadratureError("adaptive quadrature did not converge");
    const double m = 0.5 * (a + b);
    return integrate_rec(f, a, m, 0.5 * tol, depth + 1) + integrate_rec(f, m, b, 0.5 * tol, depth + 1);
}

inline double integrate_adaptive(const FuncExpr& f, double a, double b, double tol) {
    if (a == b) return 0.0;
    if (a < b) return integrate_rec(f, a, b, tol, 0);
    return -integrate_rec(f, b, a, tol, 0);
}

}  // namespace detail

/// t -> integral of g from `base` to t, evaluated by adaptive quadrature.
inline FuncExpr integral_from(const FuncExpr& g, double base) {
    detail::Node n;
    n.kind = NodeKind::Integral;
    n.value = base;
    n.a = g;
    return make_expr(std::move(n));
}

// ---------------------------------------------------------------------------
// antiderivatives
// ---------------------------------------------------------------------------

/// Closed-form antiderivative, when the tree matches a simple pattern.
inline std::optional<FuncExpr> antiderivative_symbolic(const FuncExpr& g) {
    const detail::Node& n = g.node();
    switch (n.kind) {
        case NodeKind::Constant: return constant(n.value) * identity();
        case NodeKind::Identity: return constant(0.5) * pow(identity(), 2.0);
        case NodeKind::Neg:
            if (auto F = antiderivative_symbolic(n.a)) return -*F;
            return std::nullopt;
        case NodeKind::Add: {
            auto F = antiderivative_symbolic(n.a), G = antiderivative_symbolic(n.b);
            if (F && G) return *F + *G;
            return std::nullopt;
        }
        case NodeKind::Mul: {
            double c;
            if (detail::is_const(n.a, &c)) {
                if (auto F = antiderivative_symbolic(n.b)) return constant(c) * *F;
            }
            if (detail::is_const(n.b, &c)) {
                if (auto F = antiderivative_symbolic(n.a)) return constant(c) * *F;
            }
            return std::nullopt;
        }
        case NodeKind::Div: {
            double c;
            if (detail::is_const(n.a, &c)) {
                if (auto ab = as_affine(n.b); ab && ab->second != 0.0)
                    return constant(c / ab->second) * log(n.b);
            }
            return std::nullopt;
        }
        case NodeKind::Pow: {
            auto ab = as_affine(n.a);
            if (!ab || ab->second == 0.0) return std::nullopt;
            if (n.value == -1.0) return constant(1.0 / ab->second) * log(n.a);
            return constant(1.0 / (ab->second * (n.value + 1.0))) * pow(n.a, n.value + 1.0);
        }
        case NodeKind::Exp: {
            auto ab = as_affine(n.a);
            if (ab && ab->second != 0.0) return constant(1.0 / ab->second) * exp(n.a);
            return std::nullopt;
        }
        default: return std::nullopt;
    }
}

/// t -> integral of g from base to t. Symbolic when the pattern table allows,
/// otherwise an adaptive-quadrature node.
inline FuncExpr antiderivative(const FuncExpr& g, double base, bool force_quadrature = false) {
    if (!force_quadrature) {
        if (auto F = antiderivative_symbolic(g)) {
            const double F0 = F->eval(base);
            if (F0 == 0.0) return *F;
            return *F - constant(F0);
        }
    }
    return integral_from(g, base);
}

// ---------------------------------------------------------------------------
// printing
// ---------------------------------------------------------------------------

namespace detail {

/// Shortest decimal string that parses back to exactly the same double.
inline std::string dtoa(double v) {
    char buf[40];
    for (int prec = 1; prec <= 17; ++prec) {
        std::snprintf(buf, sizeof buf, "%.*g", prec, v);
        if (std::strtod(buf, nullptr) == v) break;
    }
    return buf;
}

// precedence: Add 1, Mul/Div 2, Neg 3, Pow 4, atom 5
inline std::string print(const FuncExpr& e, int parent);

inline std::string wrap(const std::string& s, bool need) { return need ? "(" + s + ")" : s; }

inline std::string print(const FuncExpr& e, int parent) {
    const Node& n = e.node();
    switch (n.kind) {
        case NodeKind::Constant: {
            std::string s = dtoa(n.value);
            return wrap(s, n.value < 0 && parent > 1);
        }
        case NodeKind::Identity: return "t";
        case NodeKind::Add: {
            std::string s;
            if (n.b.kind() == NodeKind::Neg)
                s = print(n.a, 1) + " - " + print(n.b.node().a, 2);
            else if (double v; is_const(n.b, &v) && v < 0)
                s = print(n.a, 1) + " - " + dtoa(-v);
            else
                s = print(n.a, 1) + " + " + print(n.b, 2);
            return wrap(s, parent > 1);
        }
        case NodeKind::Mul: return wrap(print(n.a, 2) + "*" + print(n.b, 3), parent > 2);
        case NodeKind::Div: return wrap(print(n.a, 2) + "/" + print(n.b, 3), parent > 2);
        case NodeKind::Neg: return wrap("-" + print(n.a, 3), parent > 3);
        case NodeKind::Pow: {
            std::string ex = dtoa(n.value);
            if (n.value < 0 || ex.find_first_of(".e") != std::string::npos) ex = "(" + ex + ")";
            return wrap(print(n.a, 5) + "^" + ex, parent > 4);
        }
        case NodeKind::Exp: return "exp(" + print(n.a, 0) + ")";
        case NodeKind::Log: return "log(" + print(n.a, 0) + ")";
        case NodeKind::Tan: return "tan(" + print(n.a, 0) + ")";
        case NodeKind::DividedDifference: {
            const std::string f = print(n.a, 0);
            const std::string t0 = dtoa(n.value);
            if (n.dd_order > 0)
                return "ddiff" + std::to_string(n.dd_order) + "(" + f + "; " + t0 + ")";
            std::string num = n.dd_value_t0 == 0.0
                                  ? print(n.a, 2)
                                  : "(" + f + " - " + wrap(dtoa(n.dd_value_t0), n.dd_value_t0 < 0) + ")";
            std::string den = n.value == 0.0 ? "t" : "(t - " + wrap(t0, n.value < 0) + ")";
            return wrap(num + "/" + den, parent > 2);
        }
        case NodeKind::Integral:
            return "integral(" + print(n.a, 0) + "; " + dtoa(n.value) + ")";
    }
    return "?";
}

}  // namespace detail

inline std::string FuncExpr::str() const { return detail::print(*this, 0); }

}  // namespace opfunc
