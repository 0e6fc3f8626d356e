#include "gwk/linalg.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>

#include "gwk/error.hpp"

namespace gwk {

double SymMatrix::max_abs() const noexcept {
    double m = 0.0;
    for (std::size_t j = 0; j < n_; ++j)
        for (std::size_t i = j; i < n_; ++i) m = std::max(m, std::fabs(a_[j * n_ + i]));
    return m;
}

std::vector<double> SymMatrix::multiply(std::span<const double> x) const {
    if (x.size() != n_) throw InvalidArgument("SymMatrix::multiply: dimension mismatch");
    std::vector<double> y(n_, 0.0);
    for (std::size_t j = 0; j < n_; ++j) {
        const double* col = a_.data() + j * n_;
        y[j] += col[j] * x[j];
        for (std::size_t i = j + 1; i < n_; ++i) {
            y[i] += col[i] * x[j];
            y[j] += col[i] * x[i];
        }
    }
    return y;
}

SparseSym::SparseSym(std::size_t n, std::vector<std::size_t> row_ptr, std::vector<std::size_t> cols,
                     std::vector<double> values)
    : n_(n), row_ptr_(std::move(row_ptr)), cols_(std::move(cols)), values_(std::move(values)) {
    if (row_ptr_.size() != n_ + 1 || cols_.size() != values_.size() || row_ptr_.back() != cols_.size())
        throw InvalidArgument("SparseSym: inconsistent CSR arrays");
}

double SparseSym::nonzero_fraction() const noexcept {
    return n_ == 0 ? 0.0 : static_cast<double>(nnz()) / (static_cast<double>(n_) * static_cast<double>(n_));
}

void SparseSym::multiply(std::span<const double> x, std::span<double> y) const {
    if (x.size() != n_ || y.size() != n_) throw InvalidArgument("SparseSym::multiply: dimension mismatch");
    for (std::size_t i = 0; i < n_; ++i) {
        double s = 0.0;
        for (std::size_t k = row_ptr_[i]; k < row_ptr_[i + 1]; ++k) s += values_[k] * x[cols_[k]];
        y[i] = s;
    }
}

std::vector<double> SparseSym::diagonal() const {
    std::vector<double> d(n_, 0.0);
    for (std::size_t i = 0; i < n_; ++i)
        for (std::size_t k = row_ptr_[i]; k < row_ptr_[i + 1]; ++k)
            if (cols_[k] == i) d[i] = values_[k];
    return d;
}

namespace {

double entry(const CovarianceModel& model, double r, bool correlation) {
    return correlation ? model.corr(r) : model.cov(r);
}

}  // namespace

SymMatrix assemble_dense(const CovarianceModel& model, const LocationSet& locs, bool correlation) {
    if (locs.size() > 0 && locs.dim() != model.dim())
        throw InvalidArgument("assemble_dense: model and locations differ in dimension");
    const std::size_t n = locs.size();
    SymMatrix m(n);
    const double diag = correlation ? 1.0 : model.variance();
    double* a = m.data();
    for (std::size_t j = 0; j < n; ++j) {
        a[j * n + j] = diag;
        for (std::size_t i = j + 1; i < n; ++i) a[j * n + i] = entry(model, locs.distance(i, j), correlation);
    }
    return m;
}

DistanceMatrix::DistanceMatrix(const LocationSet& locs) : n_(locs.size()), d_(n_ * (n_ - (n_ > 0)) / 2) {
    std::size_t k = 0;
    for (std::size_t j = 0; j < n_; ++j)
        for (std::size_t i = j + 1; i < n_; ++i) d_[k++] = locs.distance(i, j);
}

double DistanceMatrix::operator()(std::size_t i, std::size_t j) const noexcept {
    if (i == j) return 0.0;
    if (i < j) std::swap(i, j);
    // Column j starts after sum_{c<j} (n - 1 - c) entries.
    const std::size_t start = j * (2 * n_ - j - 1) / 2;
    return d_[start + (i - j - 1)];
}

double DistanceMatrix::min_distance() const noexcept {
    return d_.empty() ? std::numeric_limits<double>::infinity() : *std::min_element(d_.begin(), d_.end());
}

SymMatrix assemble_dense(const CovarianceModel& model, const DistanceMatrix& dist, bool correlation) {
    const std::size_t n = dist.size();
    SymMatrix m(n);
    const double diag = correlation ? 1.0 : model.variance();
    double* a = m.data();
    std::size_t k = 0;
    for (std::size_t j = 0; j < n; ++j) {
        a[j * n + j] = diag;
        for (std::size_t i = j + 1; i < n; ++i) a[j * n + i] = entry(model, dist.d_[k++], correlation);
    }
    return m;
}

SparseSym assemble_sparse(const CovarianceModel& model, const LocationSet& locs, bool correlation) {
    const auto support = model.support();
    if (!support) throw InvalidArgument("assemble_sparse: model has no compact support");
    if (locs.size() > 0 && locs.dim() != model.dim())
        throw InvalidArgument("assemble_sparse: model and locations differ in dimension");
    const std::size_t n = locs.size();
    const double diag = correlation ? 1.0 : model.variance();
    RadiusIndex index(locs, *support);
    std::vector<std::size_t> row_ptr{0}, cols;
    std::vector<double> values;
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j : index.query(locs[i])) {
            cols.push_back(j);
            values.push_back(i == j ? diag : entry(model, locs.distance(std::max(i, j), std::min(i, j)), correlation));
        }
        row_ptr.push_back(cols.size());
    }
    return SparseSym(n, std::move(row_ptr), std::move(cols), std::move(values));
}

SymMatrix densify(const SparseSym& s) {
    SymMatrix m(s.size());
    for (std::size_t i = 0; i < s.size(); ++i)
        for (std::size_t k = s.row_ptr()[i]; k < s.row_ptr()[i + 1]; ++k)
            if (s.cols()[k] <= i) m.set(i, s.cols()[k], s.values()[k]);
    return m;
}

CholFactor cholesky(const SymMatrix& m, double ridge) {
    if (!(ridge >= 0.0)) throw InvalidArgument("cholesky: ridge must be >= 0");
    const std::size_t n = m.size();
    CholFactor f;
    f.n_ = n;
    f.l_.assign(m.data(), m.data() + n * n);
    double* a = f.l_.data();
    for (std::size_t j = 0; j < n; ++j)
        for (std::size_t i = 0; i < j; ++i) a[j * n + i] = 0.0;
    double logdet = 0.0;
    // Left-looking, four previous columns per sweep over the trailing part of column j.
    for (std::size_t j = 0; j < n; ++j) {
        double* cj = a + j * n;
        std::size_t k = 0;
        for (; k + 4 <= j; k += 4) {
            const double* c0 = a + k * n;
            const double* c1 = c0 + n;
            const double* c2 = c1 + n;
            const double* c3 = c2 + n;
            const double l0 = c0[j], l1 = c1[j], l2 = c2[j], l3 = c3[j];
            for (std::size_t i = j; i < n; ++i) cj[i] -= l0 * c0[i] + l1 * c1[i] + l2 * c2[i] + l3 * c3[i];
        }
        for (; k < j; ++k) {
            const double* ck = a + k * n;
            const double l = ck[j];
            for (std::size_t i = j; i < n; ++i) cj[i] -= l * ck[i];
        }
        const double pivot = cj[j] + ridge;
        if (!(pivot > 0.0) || !std::isfinite(pivot)) throw NotPositiveDefinite(j, pivot);
        const double d = std::sqrt(pivot);
        cj[j] = d;
        const double inv = 1.0 / d;
        for (std::size_t i = j + 1; i < n; ++i) cj[i] *= inv;
        logdet += 2.0 * std::log(d);
    }
    f.logdet_ = logdet;
    return f;
}

std::vector<double> CholFactor::forward(std::span<const double> b) const {
    if (b.size() != n_) throw InvalidArgument("CholFactor: dimension mismatch");
    std::vector<double> y(b.begin(), b.end());
    const double* a = l_.data();
    for (std::size_t j = 0; j < n_; ++j) {
        const double* cj = a + j * n_;
        y[j] /= cj[j];
        const double yj = y[j];
        for (std::size_t i = j + 1; i < n_; ++i) y[i] -= cj[i] * yj;
    }
    return y;
}

std::vector<double> CholFactor::backward(std::span<const double> yv) const {
    if (yv.size() != n_) throw InvalidArgument("CholFactor: dimension mismatch");
    std::vector<double> x(yv.begin(), yv.end());
    const double* a = l_.data();
    for (std::size_t jj = n_; jj-- > 0;) {
        const double* cj = a + jj * n_;
        double s = x[jj];
        for (std::size_t i = jj + 1; i < n_; ++i) s -= cj[i] * x[i];
        x[jj] = s / cj[jj];
    }
    return x;
}

std::vector<double> CholFactor::solve(std::span<const double> b) const { return backward(forward(b)); }

double CholFactor::quad_form(std::span<const double> z) const {
    const auto y = forward(z);
    return std::inner_product(y.begin(), y.end(), y.begin(), 0.0);
}

std::vector<double> CholFactor::lower_multiply(std::span<const double> x) const {
    if (x.size() != n_) throw InvalidArgument("CholFactor: dimension mismatch");
    std::vector<double> y(n_, 0.0);
    const double* a = l_.data();
    for (std::size_t j = 0; j < n_; ++j) {
        const double* cj = a + j * n_;
        const double xj = x[j];
        for (std::size_t i = j; i < n_; ++i) y[i] += cj[i] * xj;
    }
    return y;
}

CgResult cg_solve_report(const SparseSym& s, std::span<const double> b, double tol, int max_iter) {
    const std::size_t n = s.size();
    if (b.size() != n) throw InvalidArgument("cg_solve: dimension mismatch");
    CgResult out;
    out.x.assign(n, 0.0);
    const double bnorm = std::sqrt(std::inner_product(b.begin(), b.end(), b.begin(), 0.0));
    if (bnorm == 0.0) return out;
    auto diag = s.diagonal();
    for (double& v : diag) {
        if (!(v > 0.0)) throw NumericalError("cg_solve: nonpositive diagonal entry");
        v = 1.0 / v;
    }
    std::vector<double> r(b.begin(), b.end()), z(n), p(n), q(n);
    for (std::size_t i = 0; i < n; ++i) z[i] = diag[i] * r[i];
    p = z;
    double rz = std::inner_product(r.begin(), r.end(), z.begin(), 0.0);
    for (int it = 1; it <= max_iter; ++it) {
        s.multiply(p, q);
        const double pq = std::inner_product(p.begin(), p.end(), q.begin(), 0.0);
        if (!(pq > 0.0)) throw NumericalError("cg_solve: matrix is not positive definite");
        const double alpha = rz / pq;
        double rr = 0.0;
        for (std::size_t i = 0; i < n; ++i) {
            out.x[i] += alpha * p[i];
            r[i] -= alpha * q[i];
            rr += r[i] * r[i];
        }
        out.iterations = it;
        out.relative_residual = std::sqrt(rr) / bnorm;
        if (out.relative_residual <= tol) {
            // The recurred residual can drift from b - s x; confirm with the true one.
            s.multiply(out.x, q);
            rr = 0.0;
            for (std::size_t i = 0; i < n; ++i) {
                r[i] = b[i] - q[i];
                rr += r[i] * r[i];
            }
            out.relative_residual = std::sqrt(rr) / bnorm;
            if (out.relative_residual <= tol) return out;
        }
        for (std::size_t i = 0; i < n; ++i) z[i] = diag[i] * r[i];
        const double rz_new = std::inner_product(r.begin(), r.end(), z.begin(), 0.0);
        const double beta = rz_new / rz;
        rz = rz_new;
        for (std::size_t i = 0; i < n; ++i) p[i] = z[i] + beta * p[i];
    }
    throw NumericalError("cg_solve: no convergence in " + std::to_string(max_iter) + " iterations (residual " +
                         std::to_string(out.relative_residual) + ")");
}

std::vector<double> cg_solve(const SparseSym& s, std::span<const double> b, double tol, int max_iter) {
    return cg_solve_report(s, b, tol, max_iter).x;
}

}  // namespace gwk
