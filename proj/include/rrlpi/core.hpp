#ifndef RRLPI_CORE_HPP
#define RRLPI_CORE_HPP

#include <Eigen/Dense>
#include <cstdint>
#include <stdexcept>
#include <string>

namespace rrlpi {

using Matrix = Eigen::MatrixXd;
using Vector = Eigen::VectorXd;
using Index = Eigen::Index;

// Base class for all errors thrown by the library.
class Error : public std::runtime_error {
public:
    explicit Error(const std::string& msg) : std::runtime_error(msg) {}
};

class ZeroColumn : public Error {
public:
    explicit ZeroColumn(Index col)
        : Error("column " + std::to_string(col) + " of the data matrix is the zero vector"),
          column(col) {}
    Index column;
};

class NotSymmetric : public Error {
public:
    explicit NotSymmetric(double asym)
        : Error("matrix asymmetry " + std::to_string(asym) + " exceeds tolerance") {}
};

class NoConvergence : public Error {
public:
    explicit NoConvergence(int iters)
        : Error("eigensolver failed to converge after " + std::to_string(iters) + " iterations"),
          iterations(iters) {}
    int iterations;
};

class IsolatedVertex : public Error {
public:
    explicit IsolatedVertex(Index v)
        : Error("vertex " + std::to_string(v) + " has (near-)zero overall edge weight"),
          vertex(v) {}
    Index vertex;
};

class SingularSystem : public Error {
public:
    SingularSystem() : Error("ridge system is singular (gamma*sigma^2 = 0 and X Omega X^T rank-deficient)") {}
};

class ConstantEmbedding : public Error {
public:
    ConstantEmbedding() : Error("embedding vector is constant, cannot rescale") {}
};

class TooFewPoints : public Error {
public:
    TooFewPoints(Index n, Index k)
        : Error("cannot partition " + std::to_string(n) + " points into " + std::to_string(k) + " clusters") {}
};

class KTooLarge : public Error {
public:
    explicit KTooLarge(Index k)
        : Error("label alignment supports at most 12 labels, got " + std::to_string(k)) {}
};

class EmptyGraph : public Error {
public:
    EmptyGraph() : Error("graph has zero total edge weight") {}
};

class DimensionMismatch : public Error {
public:
    explicit DimensionMismatch(const std::string& what) : Error("dimension mismatch: " + what) {}
};

class DomainViolation : public Error {
public:
    explicit DomainViolation(const std::string& what) : Error("domain violation: " + what) {}
};

class RankDeficient : public Error {
public:
    explicit RankDeficient(const std::string& what) : Error("rank deficient: " + what) {}
};

class NonEmptyRequired : public Error {
public:
    explicit NonEmptyRequired(const std::string& what) : Error("non-empty input required: " + what) {}
};

class UnsupportedFormat : public Error {
public:
    explicit UnsupportedFormat(const std::string& what) : Error("unsupported format: " + what) {}
};

class CorruptFile : public Error {
public:
    explicit CorruptFile(const std::string& what) : Error("corrupt file: " + what) {}
};

class IoError : public Error {
public:
    explicit IoError(const std::string& what) : Error("i/o error: " + what) {}
};

// Median with the even-length convention: mean of the two central order statistics.
inline double median(Vector v) {
    if (v.size() == 0) throw NonEmptyRequired("median");
    const Index n = v.size();
    std::sort(v.data(), v.data() + n);
    if (n % 2 == 1) return v[n / 2];
    return 0.5 * (v[n / 2 - 1] + v[n / 2]);
}

} // namespace rrlpi

#endif
