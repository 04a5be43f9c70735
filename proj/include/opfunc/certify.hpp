#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "opfunc/expr.hpp"
#include "opfunc/interval.hpp"
#include "opfunc/kernels.hpp"
#include "opfunc/rng.hpp"

namespace opfunc {

enum class Status { Certified, Refuted, Inconclusive };

inline const char* status_name(Status s) {
    switch (s) {
        case Status::Certified: return "certified";
        case Status::Refuted: return "refuted";
        default: return "inconclusive";
    }
}

/// Re-checkable refutation evidence from a kernel or sign test.
struct GridWitness {
    std::string check;  // "loewner" | "cg" | "positivity" | "cm-sign" | "bernstein-sign"
    Grid grid;
    std::optional<double> t0;      // divided-difference base point, when used
    std::optional<int> order;      // derivative order for sign checks
    std::optional<double> point;   // offending point for sign checks
    std::optional<double> value;   // offending value for sign checks
    double min_eigenvalue = 0.0;
    std::vector<double> witness_vector;
};

struct CertifyConfig {
    std::vector<int> grid_sizes{4, 8, 12};
    double retreat = 1e-3;   // relative for bounded intervals, absolute otherwise
    double cap = 1e4;        // magnitude cap for infinite sides
    double psd_tol = 1e-9;
    int t0_probes = 5;
    int random_grids = 2;    // extra random grids per size
    int max_order = 8;       // CM / Bernstein derivative depth
    std::uint64_t seed = 0;
};

/// Outcome of a certifier: numerical evidence with full replay parameters,
/// or a concrete witness, or a reason why neither could be produced.
struct Verdict {
    Status status = Status::Inconclusive;
    std::string klass;
    std::string function_text;
    std::string interval_text;
    std::string reason;
    CertifyConfig config;
    std::optional<GridWitness> witness;
    std::vector<double> probes;        // t0 probes actually used
    std::vector<std::string> notes;

    bool certified() const { return status == Status::Certified; }
    bool refuted() const { return status == Status::Refuted; }
};

namespace detail {

inline void check_tan_branches(const FuncExpr& e, double a, double b) {
    const Node& n = e.node();
    if (n.kind == NodeKind::Tan) {
        if (auto af = as_affine(n.a); af && af->second != 0.0) {
            double lo = af->first + af->second * a;
            double hi = af->first + af->second * b;
            if (lo > hi) std::swap(lo, hi);
            const double k = std::floor((lo + M_PI_2) / M_PI);
            if (!(hi < -M_PI_2 + (k + 1.0) * M_PI))
                throw DomainError("tan argument crosses a pole on the interval");
        }
    }
    switch (n.kind) {
        case NodeKind::Constant:
        case NodeKind::Identity: return;
        case NodeKind::Add:
        case NodeKind::Mul:
        case NodeKind::Div:
            check_tan_branches(n.a, a, b);
            check_tan_branches(n.b, a, b);
            return;
        default:
            if (n.a.valid()) check_tan_branches(n.a, a, b);
            return;
    }
}

/// Static pole check plus a finiteness sweep over a dense grid.
inline void validate_on(const FuncExpr& f, const Interval& j, const CertifyConfig& cfg) {
    auto [a, b] = j.retreated_core(cfg.retreat, cfg.cap);
    check_tan_branches(f, a, b);
    const Grid sweep = make_grid(j, 64, cfg.retreat, cfg.cap);
    for (double t : sweep) f.eval(t);  // DomainError propagates
}

inline double random_point(const Interval& j, Rng& rng, double retreat, double cap) {
    auto [a, b] = j.retreated_core(retreat, cap);
    if (!j.bounded()) return std::tan(rng.uniform(std::atan(a), std::atan(b)));
    return rng.uniform(a, b);
}

inline Verdict start_verdict(const char* klass, const FuncExpr& f, const Interval& j,
                             const CertifyConfig& cfg) {
    Verdict v;
    v.klass = klass;
    v.function_text = f.str();
    v.interval_text = j.str();
    v.config = cfg;
    return v;
}

}  // namespace detail

/// Loewner-kernel test over Chebyshev and seeded random grids at every
/// configured size. Certified means every kernel passed psd_check.
inline Verdict certify_operator_monotone(const FuncExpr& f, const Interval& j,
                                         const CertifyConfig& cfg = {}) {
    Verdict v = detail::start_verdict("om", f, j, cfg);
    try {
        detail::validate_on(f, j, cfg);
        Rng rng = Rng::derive(cfg.seed, 0x6f6d);
        for (int n : cfg.grid_sizes) {
            std::vector<Grid> grids{make_grid(j, n, cfg.retreat, cfg.cap)};
            for (int r = 0; r < cfg.random_grids; ++r)
                grids.push_back(random_grid(j, n, rng, cfg.retreat, cfg.cap));
            for (const Grid& g : grids) {
                const PsdReport p = psd_check(loewner_matrix(f, g), cfg.psd_tol);
                if (!p.psd) {
                    v.status = Status::Refuted;
                    GridWitness w;
                    w.check = "loewner";
                    w.grid = g;
                    w.min_eigenvalue = p.min_eigenvalue;
                    w.witness_vector = p.witness_vector;
                    v.witness = w;
                    v.reason = "Loewner matrix has eigenvalue " + std::to_string(p.min_eigenvalue);
                    return v;
                }
            }
        }
        v.status = Status::Certified;
        v.notes.push_back("loewner kernels PSD on all grids");
    } catch (const DomainError& e) {
        v.status = Status::Inconclusive;
        v.reason = e.what();
    }
    return v;
}

/// Bendat-Sherman route: the divided difference at each probe point must be
/// operator monotone. Conservative: every probe has to pass.
inline Verdict certify_operator_convex(const FuncExpr& g, const Interval& j,
                                       const CertifyConfig& cfg = {}) {
    Verdict v = detail::start_verdict("oc", g, j, cfg);
    try {
        detail::validate_on(g, j, cfg);
        Rng rng = Rng::derive(cfg.seed, 0x6f63);
        for (int i = 0; i < cfg.t0_probes; ++i) {
            const double t0 = detail::random_point(j, rng, cfg.retreat, cfg.cap);
            v.probes.push_back(t0);
            CertifyConfig inner = cfg;
            inner.seed = Rng::derive(cfg.seed, 0x6f63, std::uint64_t(i)).next_u64();
            Verdict m = certify_operator_monotone(divided_difference(g, t0), j, inner);
            if (m.status == Status::Refuted) {
                v.status = Status::Refuted;
                v.witness = m.witness;
                v.witness->t0 = t0;
                v.reason = "divided difference at t0=" + std::to_string(t0) + " is not operator monotone";
                return v;
            }
            if (m.status == Status::Inconclusive) {
                v.status = Status::Inconclusive;
                v.reason = m.reason;
                return v;
            }
        }
        v.status = Status::Certified;
        v.notes.push_back("Bendat-Sherman kernels PSD for all probes");
    } catch (const DomainError& e) {
        v.status = Status::Inconclusive;
        v.reason = e.what();
    }
    return v;
}

/// C_g kernel route alone (no cross-check); exposed for the half-line report.
inline Verdict soc_via_cg(const FuncExpr& g, const Interval& j, const CertifyConfig& cfg = {}) {
    Verdict v = detail::start_verdict("soc", g, j, cfg);
    try {
        detail::validate_on(g, j, cfg);
        Rng rng = Rng::derive(cfg.seed, 0x6367);
        for (int i = 0; i < cfg.t0_probes; ++i) {
            const double t0 = detail::random_point(j, rng, cfg.retreat, cfg.cap);
            v.probes.push_back(t0);
            for (int n : cfg.grid_sizes) {
                std::vector<Grid> grids{make_grid(j, n, cfg.retreat, cfg.cap)};
                for (int r = 0; r < cfg.random_grids; ++r)
                    grids.push_back(random_grid(j, n, rng, cfg.retreat, cfg.cap));
                for (const Grid& gr : grids) {
                    const PsdReport p = psd_check(cg_matrix(g, t0, gr), cfg.psd_tol);
                    if (!p.psd) {
                        v.status = Status::Refuted;
                        GridWitness w;
                        w.check = "cg";
                        w.grid = gr;
                        w.t0 = t0;
                        w.min_eigenvalue = p.min_eigenvalue;
                        w.witness_vector = p.witness_vector;
                        v.witness = w;
                        v.reason = "C_g kernel at t0=" + std::to_string(t0) + " has eigenvalue " +
                                   std::to_string(p.min_eigenvalue);
                        return v;
                    }
                }
            }
        }
        v.status = Status::Certified;
        v.notes.push_back("C_g kernels PSD for all probes");
    } catch (const DomainError& e) {
        v.status = Status::Inconclusive;
        v.reason = e.what();
    }
    return v;
}

/// Full SOC certifier: C_g kernels plus the Lemma 2.2 cross-check
/// (g > 0 and -1/g operator convex). Certification requires both routes to
/// agree; a one-sided pass is reported as inconclusive.
inline Verdict certify_strongly_operator_convex(const FuncExpr& g, const Interval& j,
                                                const CertifyConfig& cfg = {}) {
    Verdict v = detail::start_verdict("soc", g, j, cfg);
    try {
        detail::validate_on(g, j, cfg);
        const Grid sweep = make_grid(j, 64, cfg.retreat, cfg.cap);
        double maxabs = 0.0, minval = kInf, minpt = sweep.front();
        for (double t : sweep) {
            const double x = g.eval(t);
            maxabs = std::max(maxabs, std::abs(x));
            if (x < minval) {
                minval = x;
                minpt = t;
            }
        }
        if (maxabs <= 1e-12) {
            v.status = Status::Certified;
            v.notes.push_back("zero function: strongly operator convex by convention g = 0");
            return v;
        }
        if (minval < -cfg.psd_tol * std::max(1.0, maxabs)) {
            // SOC functions are non-negative (P = 0 in the defining inequality)
            v.status = Status::Refuted;
            GridWitness w;
            w.check = "positivity";
            w.grid = sweep;
            w.point = minpt;
            w.value = minval;
            w.min_eigenvalue = minval;
            v.witness = w;
            v.reason = "negative value " + std::to_string(minval) + " at t=" + std::to_string(minpt);
            return v;
        }
        Verdict route1 = soc_via_cg(g, j, cfg);
        if (route1.status != Status::Certified) {
            route1.klass = "soc";
            return route1;
        }
        CertifyConfig inner = cfg;
        inner.seed = Rng::derive(cfg.seed, 0x736f63).next_u64();
        Verdict route2 = certify_operator_convex(-(constant(1.0) / g), j, inner);
        if (route2.status == Status::Certified) {
            v.status = Status::Certified;
            v.probes = route1.probes;
            v.notes = route1.notes;
            v.notes.push_back("Lemma 2.2 cross-check: -1/g operator convex");
            return v;
        }
        v.status = Status::Inconclusive;
        v.reason = "C_g kernels passed but the Lemma 2.2 route did not agree: " +
                   std::string(status_name(route2.status)) +
                   (route2.reason.empty() ? "" : " (" + route2.reason + ")");
    } catch (const DomainError& e) {
        v.status = Status::Inconclusive;
        v.reason = e.what();
    }
    return v;
}

/// Sign test (-1)^n h^(n) >= -tol on the grid for n = 0..N.
inline Verdict certify_completely_monotone(const FuncExpr& h, const Grid& grid, int max_order,
                                           double tol = 1e-9) {
    Verdict v;
    v.klass = "cm";
    v.function_text = h.str();
    try {
        FuncExpr d = h;
        for (int n = 0; n <= max_order; ++n) {
            for (double t : grid) {
                const double val = d.eval(t);
                const double signed_val = (n % 2 == 0) ? val : -val;
                if (signed_val < -tol * (1.0 + std::abs(val))) {
                    v.status = Status::Refuted;
                    GridWitness w;
                    w.check = "cm-sign";
                    w.grid = grid;
                    w.order = n;
                    w.point = t;
                    w.value = val;
                    w.min_eigenvalue = signed_val;
                    v.witness = w;
                    v.reason = "(-1)^" + std::to_string(n) + " h^(" + std::to_string(n) + ")(" +
                               std::to_string(t) + ") = " + std::to_string(signed_val) + " < 0";
                    return v;
                }
            }
            if (n < max_order) d = d.derivative();
        }
        v.status = Status::Certified;
        v.notes.push_back("derivative signs verified to order " + std::to_string(max_order));
    } catch (const DomainError& e) {
        v.status = Status::Inconclusive;
        v.reason = e.what();
    }
    return v;
}

/// Sign test (-1)^(n-1) f^(n) >= -tol on the grid for n = 1..N.
/// Non-negativity of f itself is not required.
inline Verdict certify_bernstein(const FuncExpr& f, const Grid& grid, int max_order,
                                 double tol = 1e-9) {
    Verdict v;
    v.klass = "bernstein";
    v.function_text = f.str();
    try {
        FuncExpr d = f.derivative();
        for (int n = 1; n <= max_order; ++n) {
            for (double t : grid) {
                const double val = d.eval(t);
                const double signed_val = (n % 2 == 1) ? val : -val;
                if (signed_val < -tol * (1.0 + std::abs(val))) {
                    v.status = Status::Refuted;
                    GridWitness w;
                    w.check = "bernstein-sign";
                    w.grid = grid;
                    w.order = n;
                    w.point = t;
                    w.value = val;
                    w.min_eigenvalue = signed_val;
                    v.witness = w;
                    v.reason = "(-1)^" + std::to_string(n - 1) + " f^(" + std::to_string(n) + ")(" +
                               std::to_string(t) + ") = " + std::to_string(signed_val) + " < 0";
                    return v;
                }
            }
            if (n < max_order) d = d.derivative();
        }
        v.status = Status::Certified;
        v.notes.push_back("derivative signs verified to order " + std::to_string(max_order));
    } catch (const DomainError& e) {
        v.status = Status::Inconclusive;
        v.reason = e.what();
    }
    return v;
}

/// Three independent routes on a half line (a, inf), with their agreement.
struct HalflineReport {
    Verdict soc_cg;                 // SOC via C_g kernels
    Verdict pos_opdec;              // positivity and operator-decreasing
    std::optional<Verdict> cm;      // completely monotone (only when a = 0)
    bool consistent_prop23 = true;  // soc_cg status == pos_opdec status
    bool consistent_cm = true;      // not (SOC certified and CM refuted)
};

inline HalflineReport cross_validate_halfline(const FuncExpr& g, double a,
                                              const CertifyConfig& cfg = {}) {
    const Interval j(a, kInf);
    HalflineReport rep;
    rep.soc_cg = soc_via_cg(g, j, cfg);

    Verdict pd = detail::start_verdict("pos-opdec", g, j, cfg);
    try {
        const Grid sweep = make_grid(j, 64, cfg.retreat, cfg.cap);
        double minval = kInf, minpt = sweep.front();
        for (double t : sweep) {
            const double x = g.eval(t);
            if (x < minval) {
                minval = x;
                minpt = t;
            }
        }
        if (minval <= cfg.psd_tol) {
            pd.status = Status::Refuted;
            GridWitness w;
            w.check = "positivity";
            w.grid = sweep;
            w.point = minpt;
            w.value = minval;
            w.min_eigenvalue = minval;
            pd.witness = w;
            pd.reason = "g is not strictly positive";
        } else {
            Verdict dec = certify_operator_monotone(-g, j, cfg);
            pd.status = dec.status;
            pd.witness = dec.witness;
            pd.reason = dec.status == Status::Certified ? "" : "(-g) " + dec.reason;
            if (dec.status == Status::Certified)
                pd.notes.push_back("g > 0 and g operator decreasing");
        }
    } catch (const DomainError& e) {
        pd.status = Status::Inconclusive;
        pd.reason = e.what();
    }
    rep.pos_opdec = pd;

    if (a == 0.0) {
        rep.cm = certify_completely_monotone(g, make_grid(j, 16, cfg.retreat, cfg.cap),
                                             cfg.max_order, cfg.psd_tol);
    }

    const bool decisive = rep.soc_cg.status != Status::Inconclusive &&
                          rep.pos_opdec.status != Status::Inconclusive;
    rep.consistent_prop23 = !decisive || rep.soc_cg.status == rep.pos_opdec.status;
    if (rep.cm)
        rep.consistent_cm = !(rep.soc_cg.status == Status::Certified && rep.cm->status == Status::Refuted);
    return rep;
}

}  // namespace opfunc
