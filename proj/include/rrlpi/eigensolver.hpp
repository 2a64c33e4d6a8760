#ifndef RRLPI_EIGENSOLVER_HPP
#define RRLPI_EIGENSOLVER_HPP

#include "rrlpi/graph.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <vector>

namespace rrlpi {

// Full spectrum of a symmetric matrix, eigenvalues ascending, column i of
// `vectors` paired with eigenvalue i.
struct EigenDecomposition {
    Vector values;
    Matrix vectors;
};

enum class EmbeddingKind { LE, LPI, RLPI, RRLPI };

struct EmbeddingVector {
    Vector y;
    double eigenvalue{};
    EmbeddingKind kind{EmbeddingKind::LE};
    bool degenerate_spectrum{false}; // Fiedler value tied with its neighbor
};

namespace detail {

constexpr int kMaxQlIterations = 50;

inline double hypot2(double a, double b) { return std::hypot(a, b); }

// Householder reduction to tridiagonal form, accumulating the orthogonal
// transformation in z (tred2).
inline void tridiagonalize(Matrix& z, Vector& diag, Vector& off) {
    const Index n = z.rows();
    for (Index j = 0; j < n; ++j) diag[j] = z(n - 1, j);

    for (Index i = n - 1; i > 0; --i) {
        // Scale to avoid under/overflow.
        double scale = 0.0;
        double h = 0.0;
        for (Index k = 0; k < i; ++k) scale += std::abs(diag[k]);
        if (scale == 0.0) {
            off[i] = diag[i - 1];
            for (Index j = 0; j < i; ++j) {
                diag[j] = z(i - 1, j);
                z(i, j) = 0.0;
                z(j, i) = 0.0;
            }
        } else {
            for (Index k = 0; k < i; ++k) {
                diag[k] /= scale;
                h += diag[k] * diag[k];
            }
            double f = diag[i - 1];
            double g = (f > 0.0) ? -std::sqrt(h) : std::sqrt(h);
            off[i] = scale * g;
            h -= f * g;
            diag[i - 1] = f - g;
            for (Index j = 0; j < i; ++j) off[j] = 0.0;

            // Apply similarity transformation to remaining columns.
            for (Index j = 0; j < i; ++j) {
                f = diag[j];
                z(j, i) = f;
                g = off[j] + z(j, j) * f;
                for (Index k = j + 1; k < i; ++k) {
                    g += z(k, j) * diag[k];
                    off[k] += z(k, j) * f;
                }
                off[j] = g;
            }
            f = 0.0;
            for (Index j = 0; j < i; ++j) {
                off[j] /= h;
                f += off[j] * diag[j];
            }
            const double hh = f / (h + h);
            for (Index j = 0; j < i; ++j) off[j] -= hh * diag[j];
            for (Index j = 0; j < i; ++j) {
                f = diag[j];
                g = off[j];
                for (Index k = j; k < i; ++k) z(k, j) -= f * off[k] + g * diag[k];
                diag[j] = z(i - 1, j);
                z(i, j) = 0.0;
            }
        }
        diag[i] = h;
    }

    // Accumulate transformations.
    for (Index i = 0; i < n - 1; ++i) {
        z(n - 1, i) = z(i, i);
        z(i, i) = 1.0;
        const double h = diag[i + 1];
        if (h != 0.0) {
            for (Index k = 0; k <= i; ++k) diag[k] = z(k, i + 1) / h;
            for (Index j = 0; j <= i; ++j) {
                double g = 0.0;
                for (Index k = 0; k <= i; ++k) g += z(k, i + 1) * z(k, j);
                for (Index k = 0; k <= i; ++k) z(k, j) -= g * diag[k];
            }
        }
        for (Index k = 0; k <= i; ++k) z(k, i + 1) = 0.0;
    }
    for (Index j = 0; j < n; ++j) {
        diag[j] = z(n - 1, j);
        z(n - 1, j) = 0.0;
    }
    z(n - 1, n - 1) = 1.0;
    off[0] = 0.0;
}

// Implicit QL with Wilkinson shifts on the tridiagonal (diag, off),
// accumulating eigenvectors in z (tql2).
inline void ql_implicit(Matrix& z, Vector& diag, Vector& off) {
    const Index n = z.rows();
    for (Index i = 1; i < n; ++i) off[i - 1] = off[i];
    off[n - 1] = 0.0;

    double f = 0.0;
    double tst1 = 0.0;
    const double eps = std::numeric_limits<double>::epsilon();
    for (Index l = 0; l < n; ++l) {
        tst1 = std::max(tst1, std::abs(diag[l]) + std::abs(off[l]));
        Index m = l;
        while (m < n) {
            if (std::abs(off[m]) <= eps * tst1) break;
            ++m;
        }
        if (m > l) {
            int iter = 0;
            do {
                if (++iter > kMaxQlIterations) throw NoConvergence(iter);
                // Wilkinson shift from the leading 2x2.
                double g = diag[l];
                double p = (diag[l + 1] - g) / (2.0 * off[l]);
                double r = hypot2(p, 1.0);
                if (p < 0.0) r = -r;
                diag[l] = off[l] / (p + r);
                diag[l + 1] = off[l] * (p + r);
                const double dl1 = diag[l + 1];
                double h = g - diag[l];
                for (Index i = l + 2; i < n; ++i) diag[i] -= h;
                f += h;

                p = diag[m];
                double c = 1.0;
                double c2 = c;
                double c3 = c;
                const double el1 = off[l + 1];
                double s = 0.0;
                double s2 = 0.0;
                for (Index i = m - 1; i >= l; --i) {
                    c3 = c2;
                    c2 = c;
                    s2 = s;
                    g = c * off[i];
                    h = c * p;
                    r = hypot2(p, off[i]);
                    off[i + 1] = s * r;
                    s = off[i] / r;
                    c = p / r;
                    p = c * diag[i] - s * g;
                    diag[i + 1] = h + s * (c * g + s * diag[i]);
                    for (Index k = 0; k < n; ++k) {
                        h = z(k, i + 1);
                        z(k, i + 1) = s * z(k, i) + c * h;
                        z(k, i) = c * z(k, i) - s * h;
                    }
                    if (i == l) break;
                }
                p = -s * s2 * c3 * el1 * off[l] / dl1;
                off[l] = s * p;
                diag[l] = c * p;
            } while (std::abs(off[l]) > eps * tst1);
        }
        diag[l] += f;
        off[l] = 0.0;
    }
}

inline void sort_ascending(EigenDecomposition& ed) {
    const Index n = ed.values.size();
    std::vector<Index> order(static_cast<size_t>(n));
    std::iota(order.begin(), order.end(), Index{0});
    std::stable_sort(order.begin(), order.end(),
                     [&](Index a, Index b) { return ed.values[a] < ed.values[b]; });
    Vector vals(n);
    Matrix vecs(ed.vectors.rows(), n);
    for (Index i = 0; i < n; ++i) {
        vals[i] = ed.values[order[static_cast<size_t>(i)]];
        vecs.col(i) = ed.vectors.col(order[static_cast<size_t>(i)]);
    }
    ed.values = std::move(vals);
    ed.vectors = std::move(vecs);
}

} // namespace detail

// Fix the sign of an eigenvector so its largest-magnitude entry is positive.
inline void fix_sign(Vector& y) {
    Index imax = 0;
    y.cwiseAbs().maxCoeff(&imax);
    if (y[imax] < 0.0) y = -y;
}

inline EigenDecomposition eig_sym(const Matrix& A, double sym_tol = 1e-10) {
    if (A.rows() != A.cols()) throw DimensionMismatch("eig_sym needs a square matrix");
    const double asym = (A - A.transpose()).cwiseAbs().maxCoeff();
    if (asym > sym_tol) throw NotSymmetric(asym);

    const Index n = A.rows();
    EigenDecomposition ed;
    ed.vectors = 0.5 * (A + A.transpose());
    ed.values = Vector::Zero(n);
    Vector off = Vector::Zero(n);
    if (n == 1) {
        ed.values[0] = ed.vectors(0, 0);
        ed.vectors(0, 0) = 1.0;
        return ed;
    }
    detail::tridiagonalize(ed.vectors, ed.values, off);
    detail::ql_implicit(ed.vectors, ed.values, off);
    detail::sort_ascending(ed);
    for (Index i = 0; i < n; ++i) {
        ed.vectors.col(i).normalize();
    }
    return ed;
}

// Generalized problem L y = lambda D y via the symmetric reduction
// D^{-1/2} L D^{-1/2} v = lambda v with y = D^{-1/2} v, each y renormalized
// to unit l2 norm.
inline EigenDecomposition eig_generalized(const Laplacian& lap) {
    const Index n = lap.L.rows();
    const double degree_floor = 1e-12 * lap.d.maxCoeff();
    for (Index i = 0; i < n; ++i) {
        if (lap.d[i] <= degree_floor) throw IsolatedVertex(i);
    }
    const Vector dis = lap.d.cwiseSqrt().cwiseInverse();
    Matrix Ln = dis.asDiagonal() * lap.L * dis.asDiagonal();
    EigenDecomposition ed = eig_sym(0.5 * (Ln + Ln.transpose()));
    for (Index i = 0; i < n; ++i) {
        ed.vectors.col(i) = (dis.array() * ed.vectors.col(i).array()).matrix();
        ed.vectors.col(i).normalize();
    }
    return ed;
}

enum class EigMode { Standard, Generalized };

inline Index count_near_zero(const Vector& sorted_values, double tol) {
    Index count = 0;
    while (count < sorted_values.size() && sorted_values[count] <= tol) ++count;
    return count;
}

// Eigenvector of the second-smallest eigenvalue (the LE baseline).
inline EmbeddingVector fiedler_le(const AffinityGraph& G, EigMode mode = EigMode::Generalized) {
    const Laplacian lap = laplacian(G);
    const EigenDecomposition ed =
        (mode == EigMode::Generalized) ? eig_generalized(lap) : eig_sym(lap.L);

    EmbeddingVector out;
    out.kind = EmbeddingKind::LE;
    out.eigenvalue = ed.values[1];
    out.y = ed.vectors.col(1);
    fix_sign(out.y);
    const double tie_tol = 1e-9 * std::max(1.0, std::abs(ed.values[ed.values.size() - 1]));
    if (ed.values.size() > 2 && std::abs(ed.values[2] - ed.values[1]) <= tie_tol) {
        out.degenerate_spectrum = true;
    }
    return out;
}

} // namespace rrlpi

#endif
