#include "speclab/linalg.hpp"

#include <Eigen/Dense>
#include <Eigen/SVD>

#include <algorithm>
#include <cmath>
#include <numeric>
#include <string>

#include "speclab/errors.hpp"

namespace speclab {

namespace {

using EMat = Eigen::MatrixXcd;

EMat to_eigen(const ComplexMatrix& m) {
    EMat out(m.rows(), m.cols());
    for (std::size_t i = 0; i < m.rows(); ++i)
        for (std::size_t j = 0; j < m.cols(); ++j) out(i, j) = m(i, j);
    return out;
}

ComplexMatrix from_eigen(const EMat& m) {
    ComplexMatrix out(m.rows(), m.cols());
    for (Eigen::Index i = 0; i < m.rows(); ++i)
        for (Eigen::Index j = 0; j < m.cols(); ++j) out(i, j) = m(i, j);
    return out;
}

void require_square(const ComplexMatrix& m, const char* op) {
    if (!m.square())
        throw DimensionError(std::string(op) + ": matrix is " + std::to_string(m.rows()) + "x" +
                             std::to_string(m.cols()) + ", expected square");
}

struct UnionFind {
    std::vector<std::size_t> parent;
    explicit UnionFind(std::size_t n) : parent(n) { std::iota(parent.begin(), parent.end(), 0); }
    std::size_t find(std::size_t x) {
        while (parent[x] != x) x = parent[x] = parent[parent[x]];
        return x;
    }
    void unite(std::size_t a, std::size_t b) {
        a = find(a);
        b = find(b);
        if (a == b) return;
        if (a < b) parent[b] = a;
        else parent[a] = b;
    }
};

UnionFind cluster(std::span<const cplx> values, double radius) {
    const std::size_t n = values.size();
    std::vector<std::size_t> order(n);
    std::iota(order.begin(), order.end(), 0);
    std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
        if (values[a].real() != values[b].real()) return values[a].real() < values[b].real();
        return a < b;
    });
    UnionFind uf(n);
    for (std::size_t s = 0; s < n; ++s) {
        const std::size_t i = order[s];
        for (std::size_t t = s + 1; t < n; ++t) {
            const std::size_t j = order[t];
            if (values[j].real() - values[i].real() > radius) break;
            if (std::abs(values[j] - values[i]) <= radius) uf.unite(i, j);
        }
    }
    return uf;
}

struct LuFactors {
    std::vector<cplx> a;  // packed L\U, row-major
    std::vector<std::size_t> perm;
    int sign = 1;
    std::size_t n = 0;
    std::optional<std::size_t> zero_pivot;
};

LuFactors lu_factor(const ComplexMatrix& m) {
    LuFactors f;
    f.n = m.rows();
    f.a.assign(m.entries().begin(), m.entries().end());
    f.perm.resize(f.n);
    std::iota(f.perm.begin(), f.perm.end(), 0);
    const std::size_t n = f.n;
    for (std::size_t k = 0; k < n; ++k) {
        std::size_t piv = k;
        double best = std::abs(f.a[k * n + k]);
        for (std::size_t i = k + 1; i < n; ++i) {
            const double v = std::abs(f.a[i * n + k]);
            if (v > best) {
                best = v;
                piv = i;
            }
        }
        if (best == 0.0) {
            if (!f.zero_pivot) f.zero_pivot = k;
            continue;
        }
        if (piv != k) {
            for (std::size_t j = 0; j < n; ++j) std::swap(f.a[k * n + j], f.a[piv * n + j]);
            std::swap(f.perm[k], f.perm[piv]);
            f.sign = -f.sign;
        }
        const cplx pivot = f.a[k * n + k];
        for (std::size_t i = k + 1; i < n; ++i) {
            const cplx l = f.a[i * n + k] / pivot;
            f.a[i * n + k] = l;
            if (l == cplx{}) continue;
            for (std::size_t j = k + 1; j < n; ++j) f.a[i * n + j] -= l * f.a[k * n + j];
        }
    }
    return f;
}

}  // namespace

// ---------------------------------------------------------------------------
// ComplexMatrix

ComplexMatrix::ComplexMatrix(std::size_t rows, std::size_t cols)
    : rows_(rows), cols_(cols), entries_(rows * cols) {}

ComplexMatrix::ComplexMatrix(std::size_t rows, std::size_t cols, std::vector<cplx> entries)
    : rows_(rows), cols_(cols), entries_(std::move(entries)) {
    if (entries_.size() != rows * cols)
        throw DimensionError("entry count " + std::to_string(entries_.size()) + " != " +
                             std::to_string(rows) + "x" + std::to_string(cols));
    if (!all_finite()) throw DomainError("linalg", "matrix entries must be finite");
}

ComplexMatrix::ComplexMatrix(std::initializer_list<std::initializer_list<cplx>> rows) {
    rows_ = rows.size();
    cols_ = rows_ ? rows.begin()->size() : 0;
    entries_.reserve(rows_ * cols_);
    for (const auto& r : rows) {
        if (r.size() != cols_) throw DimensionError("ragged initializer list");
        entries_.insert(entries_.end(), r.begin(), r.end());
    }
}

ComplexMatrix ComplexMatrix::identity(std::size_t n) {
    ComplexMatrix m(n, n);
    for (std::size_t i = 0; i < n; ++i) m(i, i) = 1.0;
    return m;
}

ComplexMatrix ComplexMatrix::diagonal(std::span<const cplx> diag) {
    ComplexMatrix m(diag.size(), diag.size());
    for (std::size_t i = 0; i < diag.size(); ++i) m(i, i) = diag[i];
    return m;
}

ComplexMatrix ComplexMatrix::diagonal(std::span<const double> diag) {
    ComplexMatrix m(diag.size(), diag.size());
    for (std::size_t i = 0; i < diag.size(); ++i) m(i, i) = diag[i];
    return m;
}

ComplexMatrix ComplexMatrix::adjoint() const {
    ComplexMatrix out(cols_, rows_);
    for (std::size_t i = 0; i < rows_; ++i)
        for (std::size_t j = 0; j < cols_; ++j) out(j, i) = std::conj((*this)(i, j));
    return out;
}

double ComplexMatrix::frobenius_norm() const {
    double scale = 0.0;
    for (const auto& z : entries_) scale = std::max(scale, std::abs(z));
    if (scale == 0.0) return 0.0;
    double s = 0.0;
    for (const auto& z : entries_) s += std::norm(z / scale);
    return scale * std::sqrt(s);
}

double ComplexMatrix::max_abs() const {
    double m = 0.0;
    for (const auto& z : entries_) m = std::max(m, std::abs(z));
    return m;
}

cplx ComplexMatrix::trace() const {
    cplx t{};
    for (std::size_t i = 0; i < std::min(rows_, cols_); ++i) t += (*this)(i, i);
    return t;
}

bool ComplexMatrix::all_finite() const {
    return std::all_of(entries_.begin(), entries_.end(), [](const cplx& z) {
        return std::isfinite(z.real()) && std::isfinite(z.imag());
    });
}

ComplexMatrix& ComplexMatrix::operator+=(const ComplexMatrix& other) {
    if (rows_ != other.rows_ || cols_ != other.cols_) throw DimensionError("shape mismatch in +");
    for (std::size_t i = 0; i < entries_.size(); ++i) entries_[i] += other.entries_[i];
    return *this;
}

ComplexMatrix& ComplexMatrix::operator-=(const ComplexMatrix& other) {
    if (rows_ != other.rows_ || cols_ != other.cols_) throw DimensionError("shape mismatch in -");
    for (std::size_t i = 0; i < entries_.size(); ++i) entries_[i] -= other.entries_[i];
    return *this;
}

ComplexMatrix& ComplexMatrix::operator*=(cplx s) {
    for (auto& z : entries_) z *= s;
    return *this;
}

ComplexMatrix operator*(const ComplexMatrix& a, const ComplexMatrix& b) {
    if (a.cols() != b.rows()) throw DimensionError("shape mismatch in *");
    ComplexMatrix out(a.rows(), b.cols());
    for (std::size_t i = 0; i < a.rows(); ++i)
        for (std::size_t k = 0; k < a.cols(); ++k) {
            const cplx aik = a(i, k);
            if (aik == cplx{}) continue;
            for (std::size_t j = 0; j < b.cols(); ++j) out(i, j) += aik * b(k, j);
        }
    return out;
}

// ---------------------------------------------------------------------------
// Kernels

bool lex_less(cplx a, cplx b) noexcept {
    if (a.real() != b.real()) return a.real() < b.real();
    return a.imag() < b.imag();
}

std::vector<int> cluster_multiplicities(std::span<const cplx> values, double radius) {
    UnionFind uf = cluster(values, radius);
    std::vector<int> count(values.size(), 0);
    for (std::size_t i = 0; i < values.size(); ++i) ++count[uf.find(i)];
    std::vector<int> out(values.size());
    for (std::size_t i = 0; i < values.size(); ++i) out[i] = count[uf.find(i)];
    return out;
}

std::vector<std::size_t> cluster_ids(std::span<const cplx> values, double radius) {
    UnionFind uf = cluster(values, radius);
    std::vector<std::size_t> out(values.size());
    for (std::size_t i = 0; i < values.size(); ++i) out[i] = uf.find(i);
    return out;
}

EigenResult eig_hermitian(const ComplexMatrix& m, double tol) {
    require_square(m, "eig_hermitian");
    const std::size_t n = m.rows();
    const double norm = m.frobenius_norm();
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = i; j < n; ++j)
            if (std::abs(m(i, j) - std::conj(m(j, i))) > tol * norm)
                throw SymmetryError("eig_hermitian: entry (" + std::to_string(i) + "," +
                                    std::to_string(j) + ") breaks Hermitian symmetry");
    EigenResult out;
    if (n == 0) return out;

    Eigen::SelfAdjointEigenSolver<EMat> solver(to_eigen(m));
    if (solver.info() != Eigen::Success)
        throw ConvergenceError("eig_hermitian: tridiagonal QR did not converge", 0);
    const auto& vals = solver.eigenvalues();
    const EMat& vecs = solver.eigenvectors();
    const EMat a = to_eigen(m);
    out.values.resize(n);
    out.residuals.resize(n);
    for (std::size_t i = 0; i < n; ++i) {
        out.values[i] = vals(i);
        const double r = (a * vecs.col(i) - vals(i) * vecs.col(i)).norm();
        out.residuals[i] = norm > 0 ? r / norm : r;
        if (out.residuals[i] > tol)
            throw ConvergenceError("eig_hermitian: residual above tolerance", i);
    }
    out.vectors = from_eigen(vecs);
    out.multiplicities = cluster_multiplicities(out.values, 1e-7 * norm);
    return out;
}

EigenResult eig_general(const ComplexMatrix& m, double tol, bool want_vectors) {
    require_square(m, "eig_general");
    const std::size_t n = m.rows();
    EigenResult out;
    if (n == 0) return out;
    const double norm = m.frobenius_norm();
    const EMat a = to_eigen(m);

    Eigen::ComplexSchur<EMat> schur(n);
    schur.setMaxIterations(static_cast<Eigen::Index>(60 * n + 60));
    schur.compute(a, true);
    const EMat& t = schur.matrixT();
    if (schur.info() != Eigen::Success) {
        // The bottom-most subdiagonal entry still above roundoff marks the
        // window where the shifted iteration stalled.
        std::size_t stalled = n - 1;
        for (Eigen::Index i = static_cast<Eigen::Index>(n) - 1; i >= 1; --i) {
            const double off = std::abs(t(i, i - 1));
            if (off > 1e-14 * (std::abs(t(i, i)) + std::abs(t(i - 1, i - 1)))) {
                stalled = static_cast<std::size_t>(i);
                break;
            }
        }
        throw ConvergenceError("eig_general: iteration limit reached", stalled);
    }
    const EMat& u = schur.matrixU();

    std::vector<cplx> vals(n);
    for (std::size_t i = 0; i < n; ++i) vals[i] = t(i, i);

    // Right eigenvectors of the triangular factor by back substitution.
    EMat x = EMat::Zero(n, n);
    const double eps = std::numeric_limits<double>::epsilon() * std::max(norm, 1e-300);
    for (Eigen::Index k = static_cast<Eigen::Index>(n) - 1; k >= 0; --k) {
        x(k, k) = 1.0;
        for (Eigen::Index i = k - 1; i >= 0; --i) {
            cplx s = 0.0;
            for (Eigen::Index j = i + 1; j <= k; ++j) s += t(i, j) * x(j, k);
            cplx d = t(i, i) - t(k, k);
            if (std::abs(d) < eps) d = eps;
            x(i, k) = -s / d;
        }
    }
    EMat v = u * x;
    for (Eigen::Index k = 0; k < static_cast<Eigen::Index>(n); ++k) v.col(k).normalize();

    std::vector<std::size_t> order(n);
    std::iota(order.begin(), order.end(), 0);
    std::stable_sort(order.begin(), order.end(),
                     [&](std::size_t p, std::size_t q) { return lex_less(vals[p], vals[q]); });

    out.values.resize(n);
    out.residuals.resize(n);
    EMat vs(n, n);
    for (std::size_t r = 0; r < n; ++r) {
        const std::size_t i = order[r];
        out.values[r] = vals[i];
        vs.col(r) = v.col(i);
        const double res = (a * v.col(i) - vals[i] * v.col(i)).norm();
        out.residuals[r] = norm > 0 ? res / norm : res;
    }
    out.multiplicities = cluster_multiplicities(out.values, 1e-7 * norm);
    for (std::size_t r = 0; r < n; ++r)
        if (out.multiplicities[r] == 1 && out.residuals[r] > tol)
            throw ConvergenceError("eig_general: residual above tolerance for simple eigenvalue", r);
    if (want_vectors) out.vectors = from_eigen(vs);
    return out;
}

cplx det_lu(const ComplexMatrix& m) {
    require_square(m, "det_lu");
    if (m.rows() == 0) return 1.0;
    LuFactors f = lu_factor(m);
    if (f.zero_pivot) return 0.0;
    // Accumulate in (mantissa, exponent) form so large products do not
    // overflow before the final scaling.
    cplx mant = static_cast<double>(f.sign);
    long exp2 = 0;
    for (std::size_t i = 0; i < f.n; ++i) {
        mant *= f.a[i * f.n + i];
        int e = 0;
        const double mag = std::max(std::abs(mant.real()), std::abs(mant.imag()));
        std::frexp(mag, &e);
        mant = cplx(std::ldexp(mant.real(), -e), std::ldexp(mant.imag(), -e));
        exp2 += e;
    }
    return {std::ldexp(mant.real(), static_cast<int>(exp2)),
            std::ldexp(mant.imag(), static_cast<int>(exp2))};
}

ComplexMatrix solve(const ComplexMatrix& m, const ComplexMatrix& rhs) {
    require_square(m, "solve");
    if (rhs.rows() != m.rows())
        throw DimensionError("solve: rhs has " + std::to_string(rhs.rows()) + " rows, expected " +
                             std::to_string(m.rows()));
    const std::size_t n = m.rows();
    LuFactors f = lu_factor(m);
    for (std::size_t i = 0; i < n; ++i)
        if (std::abs(f.a[i * n + i]) <= 1e-300)
            throw SingularityError("solve: singular pivot", i);
    ComplexMatrix x(n, rhs.cols());
    for (std::size_t c = 0; c < rhs.cols(); ++c) {
        std::vector<cplx> y(n);
        for (std::size_t i = 0; i < n; ++i) {
            cplx s = rhs(f.perm[i], c);
            for (std::size_t j = 0; j < i; ++j) s -= f.a[i * n + j] * y[j];
            y[i] = s;
        }
        for (std::size_t ii = n; ii-- > 0;) {
            cplx s = y[ii];
            for (std::size_t j = ii + 1; j < n; ++j) s -= f.a[ii * n + j] * x(j, c);
            x(ii, c) = s / f.a[ii * n + ii];
        }
    }
    return x;
}

std::vector<double> singular_values(const ComplexMatrix& m) {
    if (m.empty()) return {};
    Eigen::JacobiSVD<EMat> svd(to_eigen(m));
    const auto& s = svd.singularValues();
    return {s.data(), s.data() + s.size()};
}

ComplexMatrix hermitian_sqrt(const ComplexMatrix& m) {
    const std::size_t n = m.rows();
    if (n == 0) return m;
    EigenResult e = eig_hermitian(m, 1e-8);
    const ComplexMatrix& v = *e.vectors;
    ComplexMatrix out(n, n);
    for (std::size_t k = 0; k < n; ++k) {
        const double s = std::sqrt(std::max(e.values[k].real(), 0.0));
        if (s == 0.0) continue;
        for (std::size_t i = 0; i < n; ++i) {
            const cplx vi = v(i, k) * s;
            for (std::size_t j = 0; j < n; ++j) out(i, j) += vi * std::conj(v(j, k));
        }
    }
    return out;
}

}  // namespace speclab
