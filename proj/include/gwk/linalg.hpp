#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include "gwk/covariance.hpp"
#include "gwk/geometry.hpp"

namespace gwk {

/// Dense symmetric matrix. Column-major n x n storage of which only the lower
/// triangle (i >= j) is authoritative; reads of (i, j) with i < j are mirrored.
class SymMatrix {
public:
    SymMatrix() = default;
    explicit SymMatrix(std::size_t n) : n_(n), a_(n * n, 0.0) {}

    std::size_t size() const noexcept { return n_; }
    double operator()(std::size_t i, std::size_t j) const noexcept {
        return i >= j ? a_[j * n_ + i] : a_[i * n_ + j];
    }
    /// Sets the (max, min) lower-triangle entry.
    void set(std::size_t i, std::size_t j, double v) noexcept {
        if (i >= j) a_[j * n_ + i] = v;
        else a_[i * n_ + j] = v;
    }
    const double* data() const noexcept { return a_.data(); }
    double* data() noexcept { return a_.data(); }
    double max_abs() const noexcept;
    std::vector<double> multiply(std::span<const double> x) const;

private:
    std::size_t n_ = 0;
    std::vector<double> a_;
};

/// Symmetric matrix in CSR form with both triangles stored and the diagonal present.
class SparseSym {
public:
    SparseSym() = default;
    SparseSym(std::size_t n, std::vector<std::size_t> row_ptr, std::vector<std::size_t> cols,
              std::vector<double> values);

    std::size_t size() const noexcept { return n_; }
    std::size_t nnz() const noexcept { return values_.size(); }
    /// nnz / n^2, diagonal included.
    double nonzero_fraction() const noexcept;
    const std::vector<std::size_t>& row_ptr() const noexcept { return row_ptr_; }
    const std::vector<std::size_t>& cols() const noexcept { return cols_; }
    const std::vector<double>& values() const noexcept { return values_; }

    void multiply(std::span<const double> x, std::span<double> y) const;
    std::vector<double> diagonal() const;

private:
    std::size_t n_ = 0;
    std::vector<std::size_t> row_ptr_, cols_;
    std::vector<double> values_;
};

/// Entry (i, j) is the model covariance (or correlation) at |s_i - s_j|.
SymMatrix assemble_dense(const CovarianceModel& model, const LocationSet& locs, bool correlation);

/// Lower-triangle pairwise distances, column-major packed: entry (i, j), i > j.
class DistanceMatrix {
public:
    explicit DistanceMatrix(const LocationSet& locs);
    std::size_t size() const noexcept { return n_; }
    double operator()(std::size_t i, std::size_t j) const noexcept;
    double min_distance() const noexcept;

private:
    std::size_t n_;
    std::vector<double> d_;
    friend SymMatrix assemble_dense(const CovarianceModel&, const DistanceMatrix&, bool);
};

SymMatrix assemble_dense(const CovarianceModel& model, const DistanceMatrix& dist, bool correlation);

/// Same values as assemble_dense on the pattern |s_i - s_j| < support, found through
/// RadiusIndex. Throws InvalidArgument for models without compact support.
SparseSym assemble_sparse(const CovarianceModel& model, const LocationSet& locs, bool correlation);

SymMatrix densify(const SparseSym& s);

/// Lower-triangular Cholesky factor R = L L^T with cached log-determinant.
class CholFactor {
public:
    std::size_t size() const noexcept { return n_; }
    double L(std::size_t i, std::size_t j) const noexcept { return i >= j ? l_[j * n_ + i] : 0.0; }
    double logdet() const noexcept { return logdet_; }
    /// Solves L y = b.
    std::vector<double> forward(std::span<const double> b) const;
    /// Solves L^T x = y.
    std::vector<double> backward(std::span<const double> y) const;
    std::vector<double> solve(std::span<const double> b) const;
    /// z^T R^{-1} z = |L^{-1} z|^2.
    double quad_form(std::span<const double> z) const;
    /// y = L x.
    std::vector<double> lower_multiply(std::span<const double> x) const;

private:
    friend CholFactor cholesky(const SymMatrix& m, double ridge);
    std::size_t n_ = 0;
    std::vector<double> l_;
    double logdet_ = 0.0;
};

/// Factorizes m + ridge I. Throws NotPositiveDefinite naming the failing pivot.
CholFactor cholesky(const SymMatrix& m, double ridge = 0.0);

inline double logdet(const CholFactor& f) { return f.logdet(); }
inline std::vector<double> solve(const CholFactor& f, std::span<const double> b) { return f.solve(b); }
inline double quad_form(const CholFactor& f, std::span<const double> z) { return f.quad_form(z); }

struct CgResult {
    std::vector<double> x;
    int iterations = 0;
    double relative_residual = 0.0;
};

/// Jacobi-preconditioned conjugate gradients until |s x - b| <= tol |b|.
/// Throws NumericalError when max_iter is reached first.
CgResult cg_solve_report(const SparseSym& s, std::span<const double> b, double tol = 1e-10, int max_iter = 10000);
std::vector<double> cg_solve(const SparseSym& s, std::span<const double> b, double tol = 1e-10,
                             int max_iter = 10000);

}  // namespace gwk
