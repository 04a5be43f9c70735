#pragma once

#include <Eigen/Dense>
#include <string>
#include <vector>

#include "opfunc/expr.hpp"
#include "opfunc/interval.hpp"

namespace opfunc {

/// Real symmetric matrix. Storage is exactly symmetric: construction from a
/// general square matrix averages M and its transpose, which produces
/// bitwise-equal (i,j)/(j,i) entries.
class SymMatrix {
  public:
    SymMatrix() = default;  // 0x0

    explicit SymMatrix(const Eigen::MatrixXd& m) {
        if (m.rows() != m.cols()) throw Error("SymMatrix requires a square matrix");
        m_ = 0.5 * (m + m.transpose());
    }

    static SymMatrix zero(int n) { return SymMatrix(Eigen::MatrixXd::Zero(n, n)); }
    static SymMatrix identity(int n) { return SymMatrix(Eigen::MatrixXd::Identity(n, n)); }

    static SymMatrix diagonal(const std::vector<double>& d) {
        Eigen::MatrixXd m = Eigen::MatrixXd::Zero(Eigen::Index(d.size()), Eigen::Index(d.size()));
        for (std::size_t i = 0; i < d.size(); ++i) m(Eigen::Index(i), Eigen::Index(i)) = d[i];
        return SymMatrix(m);
    }

    static SymMatrix from_rowmajor(int n, const std::vector<double>& v) {
        if (v.size() != std::size_t(n) * std::size_t(n)) throw Error("row-major data has wrong size");
        Eigen::MatrixXd m(n, n);
        for (int i = 0; i < n; ++i)
            for (int j = 0; j < n; ++j) m(i, j) = v[std::size_t(i) * std::size_t(n) + std::size_t(j)];
        return SymMatrix(m);
    }

    int dim() const { return int(m_.rows()); }
    double operator()(int i, int j) const { return m_(i, j); }
    const Eigen::MatrixXd& mat() const { return m_; }

    std::vector<double> rowmajor() const {
        std::vector<double> v;
        v.reserve(std::size_t(dim()) * std::size_t(dim()));
        for (int i = 0; i < dim(); ++i)
            for (int j = 0; j < dim(); ++j) v.push_back(m_(i, j));
        return v;
    }

    struct Eigh {
        Eigen::VectorXd values;   // ascending
        Eigen::MatrixXd vectors;  // columns
    };

    Eigh eigh() const {
        if (dim() == 0) return {Eigen::VectorXd(0), Eigen::MatrixXd(0, 0)};
        Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(m_);
        if (es.info() != Eigen::Success) throw Error("symmetric eigendecomposition failed");
        return {es.eigenvalues(), es.eigenvectors()};
    }

    double min_eigenvalue() const {
        if (dim() == 0) return 0.0;
        Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(m_, Eigen::EigenvaluesOnly);
        return es.eigenvalues()(0);
    }

    double spectral_norm() const {
        if (dim() == 0) return 0.0;
        Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(m_, Eigen::EigenvaluesOnly);
        const auto& ev = es.eigenvalues();
        return std::max(std::abs(ev(0)), std::abs(ev(ev.size() - 1)));
    }

    friend SymMatrix operator+(const SymMatrix& x, const SymMatrix& y) { return SymMatrix(x.m_ + y.m_); }
    friend SymMatrix operator-(const SymMatrix& x, const SymMatrix& y) { return SymMatrix(x.m_ - y.m_); }
    friend SymMatrix operator*(double c, const SymMatrix& x) { return SymMatrix(c * x.m_); }

  private:
    Eigen::MatrixXd m_;
};

/// X M X^T, symmetrized.
inline SymMatrix congruence(const Eigen::MatrixXd& x, const SymMatrix& m) {
    return SymMatrix(x * m.mat() * x.transpose());
}

/// True iff every eigenvalue of A lies in J. Open endpoints must be cleared
/// by tol * max(1, |endpoint|); closed endpoints may be undershot by as much.
inline bool spectrum_in(const SymMatrix& a, const Interval& j, double tol = 1e-9) {
    if (a.dim() == 0) return true;
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(a.mat(), Eigen::EigenvaluesOnly);
    const auto& ev = es.eigenvalues();
    return j.contains(ev(0), tol) && j.contains(ev(ev.size() - 1), tol);
}

/// f(A) through a full symmetric eigendecomposition. The spectrum must lie
/// in J (within tol); J must be inside the natural domain of f.
inline SymMatrix apply_to_matrix(const FuncExpr& f, const SymMatrix& a, const Interval& j,
                                 double tol = 1e-9) {
    if (a.dim() == 0) return a;
    auto ed = a.eigh();
    for (Eigen::Index i = 0; i < ed.values.size(); ++i)
        if (!j.contains(ed.values(i), tol))
            throw SpectrumError("eigenvalue " + std::to_string(ed.values(i)) + " outside " + j.str());
    Eigen::VectorXd fv(ed.values.size());
    for (Eigen::Index i = 0; i < ed.values.size(); ++i) fv(i) = f.eval(ed.values(i));
    return SymMatrix(ed.vectors * fv.asDiagonal() * ed.vectors.transpose());
}

/// Inverse of a positive definite matrix via eigendecomposition, with a
/// condition-number guard.
inline SymMatrix inverse_pd(const SymMatrix& m, double cond_limit = 1e10) {
    auto ed = m.eigh();
    const double lo = ed.values(0), hi = ed.values(ed.values.size() - 1);
    if (lo <= 0.0) throw SingularError("matrix is not positive definite (min eigenvalue " +
                                       std::to_string(lo) + ")");
    if (hi / lo > cond_limit) throw SingularError("matrix condition number exceeds guard");
    Eigen::VectorXd inv = ed.values.cwiseInverse();
    return SymMatrix(ed.vectors * inv.asDiagonal() * ed.vectors.transpose());
}

/// Square root of a positive semi-definite matrix; tiny negative eigenvalues
/// from round-off are clipped to zero.
inline SymMatrix sqrt_psd(const SymMatrix& m) {
    auto ed = m.eigh();
    const double scale = std::max(std::abs(ed.values(0)), std::abs(ed.values(ed.values.size() - 1)));
    Eigen::VectorXd r(ed.values.size());
    for (Eigen::Index i = 0; i < ed.values.size(); ++i) {
        double v = ed.values(i);
        if (v < 0.0) {
            if (v < -1e-9 * std::max(1.0, scale))
                throw SpectrumError("matrix is not positive semi-definite in sqrt_psd");
            v = 0.0;
        }
        r(i) = std::sqrt(v);
    }
    return SymMatrix(ed.vectors * r.asDiagonal() * ed.vectors.transpose());
}

}  // namespace opfunc
