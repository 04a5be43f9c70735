#pragma once

#include <algorithm>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "opfunc/expr.hpp"
#include "opfunc/interval.hpp"
#include "opfunc/matrix.hpp"
#include "opfunc/rng.hpp"

namespace opfunc {

/// One sampled instance for a matrix-inequality check: symmetric A, B with
/// spectra in the retreated core of J, an orthogonal projection P with its
/// range basis, a contraction S, a convex weight s, and a shift lambda.
struct SpectralScene {
    int n = 1;
    Interval j{0.0, 1.0};
    SymMatrix a, b;
    SymMatrix p;               // projection matrix, P^2 = P
    Eigen::MatrixXd basis;     // n x rank orthonormal basis of range(P)
    int rank = 0;
    Eigen::MatrixXd s_mat;     // contraction, largest singular value <= 1
    double s = 0.5;            // in (0,1)
    double lambda = 0.0;
    std::uint64_t seed = 0;    // stream that generated this scene
};

namespace detail {

inline Eigen::MatrixXd haar_orthogonal(int n, Rng& rng) {
    Eigen::MatrixXd g(n, n);
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) g(i, j) = rng.normal();
    Eigen::HouseholderQR<Eigen::MatrixXd> qr(g);
    Eigen::MatrixXd q = qr.householderQ();
    // fix the sign convention so the distribution does not depend on QR details
    Eigen::MatrixXd r = qr.matrixQR().triangularView<Eigen::Upper>();
    for (int i = 0; i < n; ++i)
        if (r(i, i) < 0) q.col(i) = -q.col(i);
    return q;
}

}  // namespace detail

inline SymMatrix random_spectrum_matrix(const Interval& j, int n, Rng& rng, double retreat = 1e-3,
                                        double cap = 1e4) {
    auto [lo, hi] = j.retreated_core(retreat, cap);
    // keep spectra clear of the core boundary so compressions stay inside J
    const double delta = 0.05 * (hi - lo);
    std::vector<double> eig(std::size_t(n), 0.0);
    for (auto& e : eig) e = rng.uniform(lo + delta, hi - delta);
    Eigen::MatrixXd q = detail::haar_orthogonal(n, rng);
    return congruence(q, SymMatrix::diagonal(eig));
}

/// Draw a full scene. A, B: Haar-conjugated uniform spectra; P: random rank-k
/// projection with k uniform in 0..n; S = U diag(sigma) V^T with sigma
/// uniform in [0,1]; s uniform in (0,1).
inline SpectralScene sample_scene(const Interval& j, int n, Rng& rng, double retreat = 1e-3,
                                  double cap = 1e4, double lambda = 0.0) {
    if (n < 1) throw PreconditionError("scene dimension must be >= 1");
    SpectralScene sc;
    sc.n = n;
    sc.j = j;
    sc.lambda = lambda;
    sc.a = random_spectrum_matrix(j, n, rng, retreat, cap);
    sc.b = random_spectrum_matrix(j, n, rng, retreat, cap);

    sc.rank = rng.uniform_int(n + 1);
    Eigen::MatrixXd q = detail::haar_orthogonal(n, rng);
    sc.basis = q.leftCols(sc.rank);
    sc.p = SymMatrix(sc.basis * sc.basis.transpose());

    Eigen::MatrixXd u = detail::haar_orthogonal(n, rng);
    Eigen::MatrixXd v = detail::haar_orthogonal(n, rng);
    Eigen::VectorXd sigma(n);
    for (int i = 0; i < n; ++i) sigma(i) = rng.uniform();
    sc.s_mat = u * sigma.asDiagonal() * v.transpose();

    sc.s = 0.0;
    while (sc.s <= 0.0 || sc.s >= 1.0) sc.s = rng.uniform();
    return sc;
}

namespace detail {

inline void require_spectrum(const SymMatrix& m, const Interval& j, const char* what) {
    if (!spectrum_in(m, j, 1e-9))
        throw SpectrumError(std::string(what) + " has spectrum outside " + j.str());
}

// g applied to the compression of A onto range(P), embedded back: V g(V^T A V) V^T
inline SymMatrix g_of_compression(const FuncExpr& g, const SymMatrix& a,
                                  const Eigen::MatrixXd& basis, const Interval& j) {
    const int n = int(a.dim());
    if (basis.cols() == 0) return SymMatrix::zero(n);
    SymMatrix m = SymMatrix(basis.transpose() * a.mat() * basis);
    require_spectrum(m, j, "compression PAP");
    SymMatrix gm = apply_to_matrix(g, m, j);
    return SymMatrix(basis * gm.mat() * basis.transpose());
}

}  // namespace detail

/// g(A) - P g(PAP) P - lambda (I - P); PSD iff Brown's shifted criterion
/// holds on this scene.
inline SymMatrix residual_brown(const FuncExpr& g, double lambda, const SpectralScene& sc) {
    detail::require_spectrum(sc.a, sc.j, "A");
    SymMatrix middle = detail::g_of_compression(g, sc.a, sc.basis, sc.j);
    SymMatrix ga = apply_to_matrix(g, sc.a, sc.j);
    Eigen::MatrixXd i_minus_p = Eigen::MatrixXd::Identity(sc.n, sc.n) - sc.p.mat();
    return SymMatrix(ga.mat() - middle.mat() - lambda * i_minus_p);
}

/// Davis criterion residual restricted to range(P): V^T g(A) V - g(V^T A V).
inline SymMatrix residual_davis(const FuncExpr& g, const SpectralScene& sc) {
    detail::require_spectrum(sc.a, sc.j, "A");
    if (sc.rank == 0) return SymMatrix::zero(0);
    SymMatrix ga = apply_to_matrix(g, sc.a, sc.j);
    SymMatrix compressed = SymMatrix(sc.basis.transpose() * ga.mat() * sc.basis);
    SymMatrix m = SymMatrix(sc.basis.transpose() * sc.a.mat() * sc.basis);
    detail::require_spectrum(m, sc.j, "compression PAP");
    SymMatrix gm = apply_to_matrix(g, m, sc.j);
    return compressed - gm;
}

/// Midpoint form (Prop 2.1 ii):
/// g(A)/2 + g(B)/2 - g((A+B)/2)
///   - (1/4)(g(A)-g(B)) {g(A)/2 + g(B)/2 - lambda}^-1 (g(A)-g(B)).
inline SymMatrix residual_prop21_ii(const FuncExpr& g, double lambda, const SymMatrix& a,
                                    const SymMatrix& b, const Interval& j) {
    detail::require_spectrum(a, j, "A");
    detail::require_spectrum(b, j, "B");
    SymMatrix mid = SymMatrix(0.5 * (a.mat() + b.mat()));
    detail::require_spectrum(mid, j, "(A+B)/2");
    SymMatrix ga = apply_to_matrix(g, a, j), gb = apply_to_matrix(g, b, j);
    SymMatrix gmid = apply_to_matrix(g, mid, j);
    Eigen::MatrixXd diff = ga.mat() - gb.mat();
    SymMatrix resolvent = inverse_pd(SymMatrix(
        0.5 * (ga.mat() + gb.mat()) - lambda * Eigen::MatrixXd::Identity(a.dim(), a.dim())));
    Eigen::MatrixXd corr = 0.25 * diff * resolvent.mat() * diff;
    return SymMatrix(0.5 * (ga.mat() + gb.mat()) - gmid.mat() - corr);
}

/// Weighted form (Prop 2.1 iii); note the swapped weights in the resolvent:
/// s g(A) + (1-s) g(B) - g(sA + (1-s)B)
///   - s(1-s)(g(A)-g(B)) {s g(B) + (1-s) g(A) - lambda}^-1 (g(A)-g(B)).
inline SymMatrix residual_prop21_iii(const FuncExpr& g, double lambda, double s,
                                     const SymMatrix& a, const SymMatrix& b, const Interval& j) {
    if (!(s > 0.0 && s < 1.0)) throw PreconditionError("s must lie in (0,1)");
    detail::require_spectrum(a, j, "A");
    detail::require_spectrum(b, j, "B");
    SymMatrix mix = SymMatrix(s * a.mat() + (1.0 - s) * b.mat());
    detail::require_spectrum(mix, j, "sA+(1-s)B");
    SymMatrix ga = apply_to_matrix(g, a, j), gb = apply_to_matrix(g, b, j);
    SymMatrix gmix = apply_to_matrix(g, mix, j);
    Eigen::MatrixXd diff = ga.mat() - gb.mat();
    SymMatrix resolvent = inverse_pd(SymMatrix(
        s * gb.mat() + (1.0 - s) * ga.mat() - lambda * Eigen::MatrixXd::Identity(a.dim(), a.dim())));
    Eigen::MatrixXd corr = s * (1.0 - s) * diff * resolvent.mat() * diff;
    return SymMatrix(s * ga.mat() + (1.0 - s) * gb.mat() - gmix.mat() - corr);
}

/// Contraction form (Prop 2.1 iv) with X = S^T g(A) sqrt(I-SS^T) - sqrt(I-S^T S) g(B) S^T.
inline SymMatrix residual_prop21_iv(const FuncExpr& g, double lambda, const SpectralScene& sc) {
    const auto& s = sc.s_mat;
    const int n = sc.n;
    detail::require_spectrum(sc.a, sc.j, "A");
    detail::require_spectrum(sc.b, sc.j, "B");
    const Eigen::MatrixXd id = Eigen::MatrixXd::Identity(n, n);
    SymMatrix right = sqrt_psd(SymMatrix(id - s.transpose() * s));  // sqrt(I - S^T S)
    SymMatrix left = sqrt_psd(SymMatrix(id - s * s.transpose()));   // sqrt(I - S S^T)

    SymMatrix arg = SymMatrix(s.transpose() * sc.a.mat() * s + right.mat() * sc.b.mat() * right.mat());
    detail::require_spectrum(arg, sc.j, "S^T A S + sqrt(I-S^T S) B sqrt(I-S^T S)");

    SymMatrix ga = apply_to_matrix(g, sc.a, sc.j), gb = apply_to_matrix(g, sc.b, sc.j);
    SymMatrix garg = apply_to_matrix(g, arg, sc.j);

    SymMatrix lhs = SymMatrix(s.transpose() * ga.mat() * s + right.mat() * gb.mat() * right.mat() -
                              garg.mat());
    Eigen::MatrixXd x = s.transpose() * ga.mat() * left.mat() - right.mat() * gb.mat() * s.transpose();
    SymMatrix resolvent = inverse_pd(
        SymMatrix(left.mat() * ga.mat() * left.mat() + s * gb.mat() * s.transpose() - lambda * id));
    return SymMatrix(lhs.mat() - x * resolvent.mat() * x.transpose());
}

/// f(B) - f(A) for a pair with B - A PSD; PSD iff monotonicity holds here.
inline SymMatrix residual_monotone_pair(const FuncExpr& f, const SymMatrix& a, const SymMatrix& b,
                                        const Interval& j) {
    const double gap = SymMatrix(b.mat() - a.mat()).min_eigenvalue();
    if (gap < -1e-10 * std::max(1.0, b.spectral_norm()))
        throw PreconditionError("monotone pair requires A <= B");
    detail::require_spectrum(a, j, "A");
    detail::require_spectrum(b, j, "B");
    return apply_to_matrix(f, b, j) - apply_to_matrix(f, a, j);
}

/// Plain Jensen-gap residual s f(A) + (1-s) f(B) - f(sA + (1-s)B).
inline SymMatrix residual_jensen(const FuncExpr& f, double s, const SymMatrix& a, const SymMatrix& b,
                                 const Interval& j) {
    if (!(s > 0.0 && s < 1.0)) throw PreconditionError("s must lie in (0,1)");
    detail::require_spectrum(a, j, "A");
    detail::require_spectrum(b, j, "B");
    SymMatrix mix = SymMatrix(s * a.mat() + (1.0 - s) * b.mat());
    return SymMatrix(s * apply_to_matrix(f, a, j).mat() + (1.0 - s) * apply_to_matrix(f, b, j).mat() -
                     apply_to_matrix(f, mix, j).mat());
}

/// Frobenius distance between the two sides of the inverse-mixing identity
/// (s A^-1 + (1-s) B^-1) - (s A + (1-s) B)^-1
///   = s(1-s)(A^-1 - B^-1)((1-s)A^-1 + s B^-1)^-1 (A^-1 - B^-1).
inline double verify_eq2_identity(const SymMatrix& a, const SymMatrix& b, double s) {
    if (!(s > 0.0 && s < 1.0)) throw PreconditionError("s must lie in (0,1)");
    SymMatrix ai = inverse_pd(a), bi = inverse_pd(b);
    SymMatrix mix_inv = inverse_pd(SymMatrix(s * a.mat() + (1.0 - s) * b.mat()));
    Eigen::MatrixXd lhs = s * ai.mat() + (1.0 - s) * bi.mat() - mix_inv.mat();
    Eigen::MatrixXd diff = ai.mat() - bi.mat();
    SymMatrix middle = inverse_pd(SymMatrix((1.0 - s) * ai.mat() + s * bi.mat()));
    Eigen::MatrixXd rhs = s * (1.0 - s) * diff * middle.mat() * diff;
    return (lhs - rhs).norm();
}

/// The norm contract for the identity above: ||LHS - RHS|| <= 1e-10 (1 + ||LHS||).
inline bool eq2_identity_holds(const SymMatrix& a, const SymMatrix& b, double s) {
    SymMatrix ai = inverse_pd(a), bi = inverse_pd(b);
    SymMatrix mix_inv = inverse_pd(SymMatrix(s * a.mat() + (1.0 - s) * b.mat()));
    const double lhs_norm = (s * ai.mat() + (1.0 - s) * bi.mat() - mix_inv.mat()).norm();
    return verify_eq2_identity(a, b, s) <= 1e-10 * (1.0 + lhs_norm);
}

// ---------------------------------------------------------------------------
// falsification driver
// ---------------------------------------------------------------------------

/// A refuting scene: replaying it reproduces the margin.
struct Witness {
    SpectralScene scene;
    std::string inequality;   // residual that failed
    std::string claim;
    std::string function_text;
    double lambda = 0.0;
    double margin = 0.0;      // most negative eigenvalue of the residual
    SymMatrix residual;
};

struct FalsifyConfig {
    long trials = 1000;       // total scene budget, split across dimensions
    int max_dim = 6;
    std::uint64_t seed = 0;
    double lambda = 0.0;
    double psd_tol = 1e-9;
    double retreat = 1e-3;
    double cap = 1e4;
};

struct FalsifyOutcome {
    std::optional<Witness> witness;
    std::string claim;
    std::string function_text;
    long scenes_run = 0;
    long scenes_discarded = 0;
    double min_margin_seen = 0.0;  // most negative scaled margin observed
    FalsifyConfig config;
};

namespace detail {

struct ResidualCheck {
    std::string inequality;
    SymMatrix residual;
};

/// All residuals relevant to a claim on one scene. SpectrumError /
/// SingularError from a residual mean the scene is vacuous for it. The scene
/// is mutable because the monotonicity claim replaces B with an ordered
/// partner of A; the witness must store the pair actually tested.
inline std::vector<ResidualCheck> residuals_for_claim(const FuncExpr& g, const std::string& claim,
                                                      SpectralScene& sc, double lambda,
                                                      Rng& rng) {
    std::vector<ResidualCheck> out;
    auto add = [&](const char* id, SymMatrix r) { out.push_back({id, std::move(r)}); };
    if (claim == "soc") {
        // necessary condition first: SOC functions are non-negative
        auto aeig = sc.a.eigh().values;
        auto beig = sc.b.eigh().values;
        double minval = kInf, at = 0.0;
        for (Eigen::Index i = 0; i < aeig.size(); ++i)
            for (double x : {aeig(i), beig(i)})
                if (const double v = g.eval(x); v < minval) {
                    minval = v;
                    at = x;
                }
        if (minval < 0.0) {
            add("nonnegativity", SymMatrix::diagonal({minval}));
            (void)at;
            return out;
        }
        add("brown", residual_brown(g, lambda, sc));
        add("prop21_ii", residual_prop21_ii(g, lambda, sc.a, sc.b, sc.j));
        add("prop21_iii", residual_prop21_iii(g, lambda, sc.s, sc.a, sc.b, sc.j));
        add("prop21_iv", residual_prop21_iv(g, lambda, sc));
    } else if (claim == "om") {
        // build an ordered pair A <= B = A + tau D with spectrum kept in core
        auto [lo, hi] = sc.j.retreated_core(1e-3, 1e4);
        const double top = sc.a.eigh().values(sc.n - 1);
        const double room = hi - 0.05 * (hi - lo) - top;
        Eigen::MatrixXd gmat(sc.n, sc.n);
        for (int i = 0; i < sc.n; ++i)
            for (int k = 0; k < sc.n; ++k) gmat(i, k) = rng.normal();
        SymMatrix d = SymMatrix(gmat * gmat.transpose());
        const double dn = d.spectral_norm();
        sc.b = SymMatrix(sc.a.mat() +
                         (room > 0 && dn > 0 ? rng.uniform() * room / dn : 0.0) * d.mat());
        add("monotone", residual_monotone_pair(g, sc.a, sc.b, sc.j));
    } else if (claim == "oc") {
        add("jensen", residual_jensen(g, sc.s, sc.a, sc.b, sc.j));
        add("jensen-mid", residual_jensen(g, 0.5, sc.a, sc.b, sc.j));
        add("davis", residual_davis(g, sc));
    } else if (claim == "brown") {
        add("brown", residual_brown(g, lambda, sc));
    } else if (claim == "davis") {
        add("davis", residual_davis(g, sc));
    } else if (claim == "prop21_ii") {
        add("prop21_ii", residual_prop21_ii(g, lambda, sc.a, sc.b, sc.j));
    } else if (claim == "prop21_iii") {
        add("prop21_iii", residual_prop21_iii(g, lambda, sc.s, sc.a, sc.b, sc.j));
    } else if (claim == "prop21_iv") {
        add("prop21_iv", residual_prop21_iv(g, lambda, sc));
    } else if (claim == "eq2") {
        const double r = verify_eq2_identity(sc.a, sc.b, sc.s);
        add("eq2", SymMatrix::diagonal({1e-10 - r}));  // negative iff identity violated
    } else {
        throw PreconditionError("unknown claim id '" + claim + "'");
    }
    return out;
}

}  // namespace detail

/// Sweep dimensions 1..max_dim, cheapest first, with the trial budget split
/// evenly. Per-trial streams derive from (seed, dim, trial), so the first
/// witness is deterministic for a given configuration.
inline FalsifyOutcome falsify(const FuncExpr& g, const std::string& claim, const Interval& j,
                              const FalsifyConfig& cfg = {}) {
    FalsifyOutcome out;
    out.claim = claim;
    out.function_text = g.str();
    out.config = cfg;
    const long per_dim = std::max(1L, cfg.trials / std::max(1, cfg.max_dim));
    for (int dim = 1; dim <= cfg.max_dim; ++dim) {
        for (long trial = 0; trial < per_dim; ++trial) {
            Rng rng = Rng::derive(cfg.seed, 0x7363656eULL, std::uint64_t(dim), std::uint64_t(trial));
            SpectralScene sc = sample_scene(j, dim, rng, cfg.retreat, cfg.cap, cfg.lambda);
            sc.seed = cfg.seed;
            try {
                auto checks = detail::residuals_for_claim(g, claim, sc, cfg.lambda, rng);
                ++out.scenes_run;
                for (auto& c : checks) {
                    const double norm = c.residual.dim() ? c.residual.spectral_norm() : 0.0;
                    const double min_eig = c.residual.dim() ? c.residual.min_eigenvalue() : 0.0;
                    const double threshold = -10.0 * cfg.psd_tol * std::max(1.0, norm);
                    out.min_margin_seen = std::min(out.min_margin_seen, min_eig);
                    if (min_eig < threshold) {
                        Witness w;
                        w.scene = sc;
                        w.inequality = c.inequality;
                        w.claim = claim;
                        w.function_text = out.function_text;
                        w.lambda = cfg.lambda;
                        w.margin = min_eig;
                        w.residual = c.residual;
                        out.witness = std::move(w);
                        return out;
                    }
                }
            } catch (const SpectrumError&) {
                ++out.scenes_discarded;  // vacuous scene, not a counterexample
            } catch (const SingularError&) {
                ++out.scenes_discarded;
            } catch (const DomainError&) {
                ++out.scenes_discarded;
            }
        }
    }
    return out;
}

/// Recompute the residual of a stored witness; used by replay.
inline SymMatrix replay_witness(const FuncExpr& g, const Witness& w) {
    const SpectralScene& sc = w.scene;
    if (w.inequality == "brown") return residual_brown(g, w.lambda, sc);
    if (w.inequality == "prop21_ii") return residual_prop21_ii(g, w.lambda, sc.a, sc.b, sc.j);
    if (w.inequality == "prop21_iii") return residual_prop21_iii(g, w.lambda, sc.s, sc.a, sc.b, sc.j);
    if (w.inequality == "prop21_iv") return residual_prop21_iv(g, w.lambda, sc);
    if (w.inequality == "davis") return residual_davis(g, sc);
    if (w.inequality == "monotone") return residual_monotone_pair(g, sc.a, sc.b, sc.j);
    if (w.inequality == "jensen") return residual_jensen(g, sc.s, sc.a, sc.b, sc.j);
    if (w.inequality == "jensen-mid") return residual_jensen(g, 0.5, sc.a, sc.b, sc.j);
    if (w.inequality == "nonnegativity") {
        // the stored residual is the 1x1 matrix of the offending value
        return w.residual;
    }
    if (w.inequality == "eq2")
        return SymMatrix::diagonal({1e-10 - verify_eq2_identity(sc.a, sc.b, sc.s)});
    throw PreconditionError("unknown inequality id '" + w.inequality + "'");
}

}  // namespace opfunc
