#pragma once

#include <complex>
#include <cstddef>
#include <initializer_list>
#include <optional>
#include <span>
#include <vector>

namespace speclab {

using cplx = std::complex<double>;

inline constexpr double kDefaultTol = 1e-10;

/// Dense complex matrix, row-major, immutable in spirit: every kernel
/// takes it by const reference and returns fresh results.
class ComplexMatrix {
public:
    ComplexMatrix() = default;
    ComplexMatrix(std::size_t rows, std::size_t cols);
    ComplexMatrix(std::size_t rows, std::size_t cols, std::vector<cplx> entries);
    ComplexMatrix(std::initializer_list<std::initializer_list<cplx>> rows);

    static ComplexMatrix identity(std::size_t n);
    static ComplexMatrix diagonal(std::span<const cplx> diag);
    static ComplexMatrix diagonal(std::span<const double> diag);

    std::size_t rows() const noexcept { return rows_; }
    std::size_t cols() const noexcept { return cols_; }
    bool square() const noexcept { return rows_ == cols_; }
    bool empty() const noexcept { return entries_.empty(); }

    cplx& operator()(std::size_t i, std::size_t j) { return entries_[i * cols_ + j]; }
    const cplx& operator()(std::size_t i, std::size_t j) const { return entries_[i * cols_ + j]; }

    std::span<const cplx> entries() const noexcept { return entries_; }

    ComplexMatrix adjoint() const;
    double frobenius_norm() const;
    double max_abs() const;
    cplx trace() const;
    bool all_finite() const;

    ComplexMatrix& operator+=(const ComplexMatrix& other);
    ComplexMatrix& operator-=(const ComplexMatrix& other);
    ComplexMatrix& operator*=(cplx s);

    friend ComplexMatrix operator+(ComplexMatrix a, const ComplexMatrix& b) { return a += b; }
    friend ComplexMatrix operator-(ComplexMatrix a, const ComplexMatrix& b) { return a -= b; }
    friend ComplexMatrix operator*(ComplexMatrix a, cplx s) { return a *= s; }
    friend ComplexMatrix operator*(cplx s, ComplexMatrix a) { return a *= s; }
    friend ComplexMatrix operator*(const ComplexMatrix& a, const ComplexMatrix& b);

private:
    std::size_t rows_ = 0;
    std::size_t cols_ = 0;
    std::vector<cplx> entries_;
};

struct EigenResult {
    std::vector<cplx> values;
    std::optional<ComplexMatrix> vectors;  // columns are right eigenvectors
    std::vector<double> residuals;         // ||Av - lambda v|| / ||A||_F
    std::vector<int> multiplicities;       // cluster size of each value
};

// Hermitian eigensolver. Values come back ascending and real (imag part 0).
EigenResult eig_hermitian(const ComplexMatrix& m, double tol = kDefaultTol);

// General eigensolver via complex Schur form. Values sorted by (Re, Im).
EigenResult eig_general(const ComplexMatrix& m, double tol = kDefaultTol,
                        bool want_vectors = true);

// Determinant by partial-pivot LU. Exactly singular input gives exactly 0.
cplx det_lu(const ComplexMatrix& m);

// Solves m * X = rhs by partial-pivot LU.
ComplexMatrix solve(const ComplexMatrix& m, const ComplexMatrix& rhs);

// Singular values, descending.
std::vector<double> singular_values(const ComplexMatrix& m);

// Hermitian positive semidefinite square root (negative roundoff
// eigenvalues are clamped to zero).
ComplexMatrix hermitian_sqrt(const ComplexMatrix& m);

// Cluster sizes for a list of values: two values share a cluster when
// they are chained by gaps <= radius.
std::vector<int> cluster_multiplicities(std::span<const cplx> values, double radius);

// Representative id (index of the first member in input order) per value.
std::vector<std::size_t> cluster_ids(std::span<const cplx> values, double radius);

// Lexicographic (Re, Im) ordering used for reproducible output.
bool lex_less(cplx a, cplx b) noexcept;

}  // namespace speclab
