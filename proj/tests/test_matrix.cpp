#include <catch2/catch_amalgamated.hpp>
#include <cmath>

#include "opfunc/expr.hpp"
#include "opfunc/matrix.hpp"
#include "opfunc/rng.hpp"

using namespace opfunc;
using Catch::Approx;

namespace {

Eigen::MatrixXd random_orthogonal(int n, Rng& rng) {
    Eigen::MatrixXd g(n, n);
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) g(i, j) = rng.normal();
    Eigen::HouseholderQR<Eigen::MatrixXd> qr(g);
    Eigen::MatrixXd q = qr.householderQ();
    return q;
}

SymMatrix random_sym(int n, Rng& rng, double lo, double hi) {
    std::vector<double> eig(std::size_t(n), 0.0);
    for (auto& e : eig) e = rng.uniform(lo, hi);
    Eigen::MatrixXd q = random_orthogonal(n, rng);
    return congruence(q, SymMatrix::diagonal(eig));
}

}  // namespace

TEST_CASE("storage is exactly symmetric") {
    Eigen::MatrixXd m(2, 2);
    m << 1.0, 0.3, 0.1, 2.0;
    SymMatrix s(m);
    CHECK(s(0, 1) == s(1, 0));
    CHECK(s(0, 1) == Approx(0.2));
}

TEST_CASE("apply_to_matrix on the stated examples") {
    const Interval j(-3.0, 3.0);

    // identity function leaves A unchanged
    SymMatrix a = SymMatrix::diagonal({1.0, 2.0});
    SymMatrix fa = apply_to_matrix(identity(), a, j);
    CHECK(fa(0, 0) == Approx(1.0));
    CHECK(fa(1, 1) == Approx(2.0));

    // 1/t on diag(1,2) = diag(1, 0.5)
    SymMatrix inv = apply_to_matrix(constant(1.0) / identity(), a, Interval(0.0, 3.0));
    CHECK(inv(0, 0) == Approx(1.0));
    CHECK(inv(1, 1) == Approx(0.5));
    CHECK(inv(0, 1) == Approx(0.0).margin(1e-14));

    // t^2 on [[0,1],[1,0]] equals A*A = I
    Eigen::MatrixXd x(2, 2);
    x << 0, 1, 1, 0;
    SymMatrix b(x);
    SymMatrix b2 = apply_to_matrix(pow(identity(), 2.0), b, j);
    Eigen::MatrixXd oracle = x * x;
    for (int i = 0; i < 2; ++i)
        for (int k = 0; k < 2; ++k) CHECK(b2(i, k) == Approx(oracle(i, k)).margin(1e-12));
}

TEST_CASE("apply_to_matrix rejects spectra outside the interval") {
    SymMatrix a = SymMatrix::diagonal({0.5, 2.0});
    CHECK_THROWS_AS(apply_to_matrix(identity(), a, Interval(0.0, 1.0)), SpectrumError);
}

TEST_CASE("spectrum_in honors open and closed endpoints") {
    CHECK(spectrum_in(SymMatrix::diagonal({0.2, 0.8}), Interval(0.0, 1.0)));
    CHECK_FALSE(spectrum_in(SymMatrix::diagonal({0.0, 1.0}), Interval(0.0, 1.0)));
    CHECK(spectrum_in(SymMatrix::diagonal({0.0, 1.0}), Interval(0.0, 1.0, true, true)));
    // eigenvalues of [[1,1],[1,1]] are {0, 2}
    Eigen::MatrixXd m(2, 2);
    m << 1, 1, 1, 1;
    CHECK(spectrum_in(SymMatrix(m), Interval(-0.5, 2.5)));
    CHECK_FALSE(spectrum_in(SymMatrix(m), Interval(0.5, 2.5)));
}

TEST_CASE("conjugation equivariance of the functional calculus") {
    Rng rng(42);
    const Interval j(0.05, 10.0);
    const FuncExpr f = pow(identity(), 0.5) + constant(1.0) / identity();
    for (int trial = 0; trial < 20; ++trial) {
        const int n = 2 + rng.uniform_int(5);
        SymMatrix a = random_sym(n, rng, 0.1, 9.0);
        Eigen::MatrixXd u = random_orthogonal(n, rng);
        SymMatrix lhs = apply_to_matrix(f, congruence(u.transpose(), a), j);
        SymMatrix rhs = congruence(u.transpose(), apply_to_matrix(f, a, j));
        const double scale = rhs.spectral_norm();
        CHECK((lhs.mat() - rhs.mat()).norm() <= 1e-10 * std::max(1.0, scale));
    }
}

TEST_CASE("diagonal consistency of the functional calculus") {
    Rng rng(7);
    const FuncExpr f = exp(-identity()) + pow(identity(), 2.0);
    for (int trial = 0; trial < 10; ++trial) {
        std::vector<double> d;
        for (int i = 0; i < 5; ++i) d.push_back(rng.uniform(0.1, 3.0));
        SymMatrix fd = apply_to_matrix(f, SymMatrix::diagonal(d), Interval(0.0, 4.0));
        for (int i = 0; i < 5; ++i) CHECK(fd(i, i) == Approx(f.eval(d[std::size_t(i)])));
    }
}

TEST_CASE("eigendecomposition residual is tiny") {
    Rng rng(11);
    for (int trial = 0; trial < 10; ++trial) {
        SymMatrix a = random_sym(6, rng, -5.0, 5.0);
        auto ed = a.eigh();
        Eigen::MatrixXd rec = ed.vectors * ed.values.asDiagonal() * ed.vectors.transpose();
        CHECK((rec - a.mat()).norm() <= 1e-12 * std::max(1.0, a.mat().norm()));
    }
}

TEST_CASE("inverse_pd and sqrt_psd") {
    Rng rng(5);
    SymMatrix a = random_sym(4, rng, 0.5, 4.0);
    SymMatrix ai = inverse_pd(a);
    CHECK((a.mat() * ai.mat() - Eigen::MatrixXd::Identity(4, 4)).norm() < 1e-12);
    CHECK_THROWS_AS(inverse_pd(SymMatrix::diagonal({1.0, -1.0})), SingularError);
    CHECK_THROWS_AS(inverse_pd(SymMatrix::diagonal({1.0, 1e-12})), SingularError);

    SymMatrix r = sqrt_psd(a);
    CHECK((r.mat() * r.mat() - a.mat()).norm() < 1e-12 * a.spectral_norm());
}
