#pragma once

#include <algorithm>
#include <cmath>
#include <sstream>
#include <string>
#include <vector>

#include "opfunc/expr.hpp"
#include "opfunc/interval.hpp"
#include "opfunc/matrix.hpp"
#include "opfunc/rng.hpp"

namespace opfunc {

using Grid = std::vector<double>;

enum class KernelLabel { Loewner, Cg };

/// A kernel sampled on a strictly increasing grid in the interior of J.
struct KernelMatrix {
    Grid grid;
    SymMatrix values;
    KernelLabel label = KernelLabel::Loewner;
};

namespace detail {
inline void check_grid(const Grid& g) {
    if (g.size() < 1) throw Error("empty grid");
    for (std::size_t i = 1; i < g.size(); ++i)
        if (!(g[i - 1] < g[i])) throw Error("grid points must be strictly increasing");
}
}  // namespace detail

/// n Chebyshev-distributed points in the retreated compact core of J.
/// Intervals with an infinite side are reparametrized through t = tan(theta)
/// so the points spread across scales up to the cap.
inline Grid make_grid(const Interval& j, int n, double retreat = 1e-3, double cap = 1e4) {
    if (n < 2) throw PreconditionError("make_grid needs n >= 2");
    auto [a, b] = j.retreated_core(retreat, cap);
    const bool mapped = !j.bounded();
    const double ta = mapped ? std::atan(a) : a;
    const double tb = mapped ? std::atan(b) : b;
    Grid g(std::size_t(n), 0.0);
    for (int k = 0; k < n; ++k) {
        const double theta = M_PI * (2.0 * k + 1.0) / (2.0 * n);
        const double x = 0.5 * (ta + tb) + 0.5 * (tb - ta) * std::cos(theta);
        g[std::size_t(n - 1 - k)] = mapped ? std::tan(x) : x;
    }
    std::sort(g.begin(), g.end());
    detail::check_grid(g);
    return g;
}

/// n sorted random points in the retreated core (theta-space uniform when a
/// side is infinite).
inline Grid random_grid(const Interval& j, int n, Rng& rng, double retreat = 1e-3, double cap = 1e4) {
    if (n < 2) throw PreconditionError("random_grid needs n >= 2");
    auto [a, b] = j.retreated_core(retreat, cap);
    const bool mapped = !j.bounded();
    const double ta = mapped ? std::atan(a) : a;
    const double tb = mapped ? std::atan(b) : b;
    Grid g(std::size_t(n), 0.0);
    for (auto& x : g) {
        const double u = rng.uniform(ta, tb);
        x = mapped ? std::tan(u) : u;
    }
    std::sort(g.begin(), g.end());
    for (std::size_t i = 1; i < g.size(); ++i)
        if (g[i] <= g[i - 1]) g[i] = std::nextafter(g[i - 1], kInf);
    detail::check_grid(g);
    return g;
}

/// Loewner matrix of f: off-diagonal divided differences, diagonal f'.
inline KernelMatrix loewner_matrix(const FuncExpr& f, const Grid& points) {
    detail::check_grid(points);
    const int n = int(points.size());
    const FuncExpr df = f.derivative();
    std::vector<double> fv(points.size());
    for (std::size_t i = 0; i < points.size(); ++i) fv[i] = f.eval(points[i]);
    Eigen::MatrixXd m(n, n);
    for (int i = 0; i < n; ++i) {
        m(i, i) = df.eval(points[std::size_t(i)]);
        for (int k = i + 1; k < n; ++k) {
            const double v = (fv[std::size_t(i)] - fv[std::size_t(k)]) /
                             (points[std::size_t(i)] - points[std::size_t(k)]);
            m(i, k) = v;
            m(k, i) = v;
        }
    }
    return {points, SymMatrix(m), KernelLabel::Loewner};
}

/// Kernel whose positivity characterizes strong operator convexity: the
/// Loewner matrix of (t - t0) g(t).
inline KernelMatrix cg_matrix(const FuncExpr& g, double t0, const Grid& points) {
    const FuncExpr h = (identity() - constant(t0)) * g;
    KernelMatrix k = loewner_matrix(h, points);
    k.label = KernelLabel::Cg;
    return k;
}

/// Outcome of a positive-semidefiniteness decision.
struct PsdReport {
    bool psd = true;
    double min_eigenvalue = 0.0;
    std::vector<double> witness_vector;  // eigenvector of the minimum eigenvalue
    double scale = 1.0;                  // max(1, spectral norm)
    double tol_abs = 0.0;
};

/// PSD iff the minimum eigenvalue clears -tol * max(1, ||M||).
inline PsdReport psd_check(const SymMatrix& m, double tol = 1e-9) {
    PsdReport r;
    if (m.dim() == 0) return r;
    auto ed = m.eigh();
    r.min_eigenvalue = ed.values(0);
    r.scale = std::max(1.0, std::max(std::abs(ed.values(0)), std::abs(ed.values(ed.values.size() - 1))));
    r.tol_abs = tol * r.scale;
    r.psd = r.min_eigenvalue >= -r.tol_abs;
    if (!r.psd) {
        r.witness_vector.resize(std::size_t(m.dim()));
        for (int i = 0; i < m.dim(); ++i) r.witness_vector[std::size_t(i)] = ed.vectors(i, 0);
    }
    return r;
}

inline PsdReport psd_check(const KernelMatrix& k, double tol = 1e-9) { return psd_check(k.values, tol); }

/// CSV export: grid in the header row, dense kernel values below.
inline std::string kernel_to_csv(const KernelMatrix& k) {
    std::ostringstream os;
    os.precision(17);
    for (std::size_t i = 0; i < k.grid.size(); ++i) os << (i ? "," : "") << k.grid[i];
    os << "\n";
    for (int i = 0; i < k.values.dim(); ++i) {
        for (int j = 0; j < k.values.dim(); ++j) os << (j ? "," : "") << k.values(i, j);
        os << "\n";
    }
    return os.str();
}

}  // namespace opfunc
