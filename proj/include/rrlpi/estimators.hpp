#ifndef RRLPI_ESTIMATORS_HPP
#define RRLPI_ESTIMATORS_HPP

#include "rrlpi/eigensolver.hpp"

#include <Eigen/Cholesky>
#include <Eigen/SVD>
#include <cmath>

namespace rrlpi {

constexpr double kDefaultHuberC = 1.345; // 95% Gaussian efficiency

struct RobustFitState {
    Vector beta;
    double gamma{};
    double sigma_hat{};
    Vector epsilon;
    Vector omega;
    double huber_c{kDefaultHuberC};
};

// Normalized median absolute deviation, 1.4826 * med|eps - med(eps)|.
inline double madn(const Vector& eps) {
    const double m = median(eps);
    return 1.4826 * median((eps.array() - m).abs().matrix());
}

inline double huber_psi(double u, double c) {
    if (std::abs(u) <= c) return u;
    return u > 0.0 ? c : -c;
}

inline double scale_floor(double d_typ) { return 1e-12 * (1.0 + std::abs(d_typ)); }

// omega_i = psi(eps_i/sigma)/(eps_i/sigma), 1 at zero residual. A degenerate
// scale (at least half the residuals identical) yields identity weights.
inline Vector robust_weights(const Vector& eps, double sigma_hat, double c,
                             double floor = 0.0) {
    Vector omega = Vector::Ones(eps.size());
    if (sigma_hat <= floor) return omega;
    for (Index i = 0; i < eps.size(); ++i) {
        const double u = eps[i] / sigma_hat;
        if (u != 0.0) omega[i] = huber_psi(u, c) / u;
    }
    return omega;
}

// Solves (X Omega X^T + gamma*sigma^2 I) beta = X Omega y by Cholesky.
inline Vector fit_transform_vector(const Matrix& X, const Vector& y, double gamma,
                                   const Vector& omega, double sigma_hat) {
    if (X.cols() != y.size() || X.cols() != omega.size())
        throw DimensionMismatch("fit_transform_vector");
    const Index m = X.rows();
    const Matrix Xw = X * omega.asDiagonal();
    Matrix A = Xw * X.transpose();
    A.diagonal().array() += gamma * sigma_hat * sigma_hat;
    const Vector b = Xw * y;

    Eigen::LLT<Matrix> llt(0.5 * (A + A.transpose()));
    if (llt.info() != Eigen::Success) throw SingularSystem();
    Vector beta = llt.solve(b);
    if (!beta.allFinite() || (A * beta - b).norm() > 1e-8 * b.norm())
        throw SingularSystem();
    (void)m;
    return beta;
}

// Thin-SVD least squares with small singular values truncated.
inline Vector pinv_solve(const Matrix& Xt, const Vector& y) {
    Eigen::JacobiSVD<Matrix> svd(Xt, Eigen::ComputeThinU | Eigen::ComputeThinV);
    const Vector& sv = svd.singularValues();
    const double cutoff = 1e-12 * sv[0];
    Vector inv = Vector::Zero(sv.size());
    for (Index i = 0; i < sv.size(); ++i)
        if (sv[i] > cutoff) inv[i] = 1.0 / sv[i];
    return svd.matrixV() * (inv.asDiagonal() * (svd.matrixU().transpose() * y));
}

struct EstimateResult {
    EmbeddingVector embedding;
    RobustFitState fit; // beta empty for LE
};

// The four Fiedler estimators. LE is the generalized eigen baseline; LPI fits
// y_F = X^T beta by least squares; RLPI adds the ridge penalty; RRLPI uses
// Huber weights derived from the edge-weight residuals.
inline EstimateResult estimate(EmbeddingKind method, const DataMatrix& X,
                               const AffinityGraph& G, double gamma = 0.0,
                               double huber_c = kDefaultHuberC) {
    EstimateResult out;
    const EmbeddingVector le = fiedler_le(G, EigMode::Generalized);
    if (method == EmbeddingKind::LE) {
        out.embedding = le;
        return out;
    }

    out.fit.gamma = gamma;
    out.fit.huber_c = huber_c;
    out.fit.epsilon = edge_weight_errors(G);
    out.fit.sigma_hat = madn(out.fit.epsilon);

    if (method == EmbeddingKind::LPI) {
        out.fit.omega = Vector::Ones(G.size());
        out.fit.beta = pinv_solve(X.values.transpose(), le.y);
    } else {
        out.fit.omega = (method == EmbeddingKind::RRLPI)
                            ? robust_weights(out.fit.epsilon, out.fit.sigma_hat, huber_c,
                                             scale_floor(G.d_typ))
                            : Vector::Ones(G.size());
        out.fit.beta = fit_transform_vector(X.values, le.y, gamma, out.fit.omega,
                                            out.fit.sigma_hat);
    }

    out.embedding.kind = method;
    out.embedding.eigenvalue = le.eigenvalue;
    out.embedding.degenerate_spectrum = le.degenerate_spectrum;
    out.embedding.y = X.values.transpose() * out.fit.beta;
    fix_sign(out.embedding.y);
    return out;
}

} // namespace rrlpi

#endif
