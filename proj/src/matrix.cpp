#include "rci/matrix.hpp"

#include <algorithm>
#include <cmath>
#include <ostream>
#include <string>

#include "rci/errors.hpp"

namespace rci {

namespace {

void require_same_shape(const RealMatrix& a, const RealMatrix& b, const char* op) {
    if (a.rows() != b.rows() || a.cols() != b.cols()) {
        throw DimensionError(std::string(op) + ": shape mismatch " + std::to_string(a.rows()) + "x" +
                             std::to_string(a.cols()) + " vs " + std::to_string(b.rows()) + "x" +
                             std::to_string(b.cols()));
    }
}

} // namespace

RealMatrix::RealMatrix(std::size_t rows, std::size_t cols, double fill)
    : rows_(rows), cols_(cols), data_(rows * cols, fill) {
    if (!std::isfinite(fill)) throw NumericError("RealMatrix: non-finite fill value");
}

RealMatrix::RealMatrix(std::size_t rows, std::size_t cols, std::vector<double> data)
    : rows_(rows), cols_(cols), data_(std::move(data)) {
    if (data_.size() != rows_ * cols_) {
        throw DimensionError("RealMatrix: entry count " + std::to_string(data_.size()) + " != " +
                             std::to_string(rows_) + "x" + std::to_string(cols_));
    }
    if (!all_finite()) throw NumericError("RealMatrix: non-finite entry");
}

RealMatrix RealMatrix::from_rows(std::initializer_list<std::initializer_list<double>> rows) {
    std::vector<std::vector<double>> v;
    v.reserve(rows.size());
    for (const auto& r : rows) v.emplace_back(r);
    return from_rows(v);
}

RealMatrix RealMatrix::from_rows(const std::vector<std::vector<double>>& rows) {
    if (rows.empty() || rows.front().empty()) throw DimensionError("RealMatrix: empty row list");
    const std::size_t nc = rows.front().size();
    std::vector<double> data;
    data.reserve(rows.size() * nc);
    for (const auto& r : rows) {
        if (r.size() != nc) throw DimensionError("RealMatrix: ragged rows");
        data.insert(data.end(), r.begin(), r.end());
    }
    return RealMatrix(rows.size(), nc, std::move(data));
}

RealMatrix RealMatrix::identity(std::size_t n) {
    RealMatrix m(n, n);
    for (std::size_t i = 0; i < n; ++i) m(i, i) = 1.0;
    return m;
}

RealMatrix RealMatrix::diagonal(std::span<const double> d) {
    RealMatrix m(d.size(), d.size());
    for (std::size_t i = 0; i < d.size(); ++i) m(i, i) = d[i];
    if (!m.all_finite()) throw NumericError("RealMatrix::diagonal: non-finite entry");
    return m;
}

RealMatrix RealMatrix::column(std::span<const double> v) {
    return RealMatrix(v.size(), 1, std::vector<double>(v.begin(), v.end()));
}

std::vector<std::vector<double>> RealMatrix::to_rows() const {
    std::vector<std::vector<double>> out(rows_);
    for (std::size_t i = 0; i < rows_; ++i) {
        out[i].assign(data_.begin() + static_cast<std::ptrdiff_t>(i * cols_),
                      data_.begin() + static_cast<std::ptrdiff_t>((i + 1) * cols_));
    }
    return out;
}

RealMatrix RealMatrix::transpose() const {
    RealMatrix t(cols_, rows_);
    for (std::size_t i = 0; i < rows_; ++i)
        for (std::size_t j = 0; j < cols_; ++j) t(j, i) = (*this)(i, j);
    return t;
}

bool RealMatrix::all_finite() const noexcept { return rci::all_finite(data_); }

double RealMatrix::max_abs() const noexcept {
    double m = 0.0;
    for (double v : data_) m = std::max(m, std::abs(v));
    return m;
}

RealMatrix RealMatrix::block(std::size_t r0, std::size_t c0, std::size_t nr, std::size_t nc) const {
    if (r0 + nr > rows_ || c0 + nc > cols_) throw DimensionError("RealMatrix::block: out of range");
    RealMatrix b(nr, nc);
    for (std::size_t i = 0; i < nr; ++i)
        for (std::size_t j = 0; j < nc; ++j) b(i, j) = (*this)(r0 + i, c0 + j);
    return b;
}

void RealMatrix::set_block(std::size_t r0, std::size_t c0, const RealMatrix& b) {
    if (r0 + b.rows() > rows_ || c0 + b.cols() > cols_) throw DimensionError("RealMatrix::set_block: out of range");
    for (std::size_t i = 0; i < b.rows(); ++i)
        for (std::size_t j = 0; j < b.cols(); ++j) (*this)(r0 + i, c0 + j) = b(i, j);
}

RealMatrix& RealMatrix::operator+=(const RealMatrix& o) {
    require_same_shape(*this, o, "operator+=");
    for (std::size_t k = 0; k < data_.size(); ++k) data_[k] += o.data_[k];
    return *this;
}

RealMatrix& RealMatrix::operator-=(const RealMatrix& o) {
    require_same_shape(*this, o, "operator-=");
    for (std::size_t k = 0; k < data_.size(); ++k) data_[k] -= o.data_[k];
    return *this;
}

RealMatrix& RealMatrix::operator*=(double s) noexcept {
    for (double& v : data_) v *= s;
    return *this;
}

RealMatrix operator+(RealMatrix a, const RealMatrix& b) { return a += b; }
RealMatrix operator-(RealMatrix a, const RealMatrix& b) { return a -= b; }
RealMatrix operator*(double s, RealMatrix a) { return a *= s; }

RealMatrix operator*(const RealMatrix& a, const RealMatrix& b) {
    if (a.cols() != b.rows()) {
        throw DimensionError("operator*: inner dimensions " + std::to_string(a.cols()) + " and " +
                             std::to_string(b.rows()) + " differ");
    }
    RealMatrix c(a.rows(), b.cols());
    for (std::size_t i = 0; i < a.rows(); ++i)
        for (std::size_t k = 0; k < a.cols(); ++k) {
            const double aik = a(i, k);
            if (aik == 0.0) continue;
            for (std::size_t j = 0; j < b.cols(); ++j) c(i, j) += aik * b(k, j);
        }
    return c;
}

Vec operator*(const RealMatrix& a, std::span<const double> x) {
    if (a.cols() != x.size()) throw DimensionError("matrix-vector product: size mismatch");
    Vec y(a.rows(), 0.0);
    for (std::size_t i = 0; i < a.rows(); ++i) {
        double s = 0.0;
        for (std::size_t j = 0; j < a.cols(); ++j) s += a(i, j) * x[j];
        y[i] = s;
    }
    return y;
}

RealMatrix hstack(const RealMatrix& left, const RealMatrix& right) {
    if (left.rows() != right.rows()) throw DimensionError("hstack: row counts differ");
    RealMatrix m(left.rows(), left.cols() + right.cols());
    m.set_block(0, 0, left);
    m.set_block(0, left.cols(), right);
    return m;
}

RealMatrix vstack(const RealMatrix& top, const RealMatrix& bottom) {
    if (top.cols() != bottom.cols()) throw DimensionError("vstack: column counts differ");
    RealMatrix m(top.rows() + bottom.rows(), top.cols());
    m.set_block(0, 0, top);
    m.set_block(top.rows(), 0, bottom);
    return m;
}

double max_abs_diff(const RealMatrix& a, const RealMatrix& b) {
    require_same_shape(a, b, "max_abs_diff");
    double m = 0.0;
    for (std::size_t k = 0; k < a.data().size(); ++k) m = std::max(m, std::abs(a.data()[k] - b.data()[k]));
    return m;
}

std::ostream& operator<<(std::ostream& os, const RealMatrix& m) {
    os << '[';
    for (std::size_t i = 0; i < m.rows(); ++i) {
        os << (i ? "; " : "");
        for (std::size_t j = 0; j < m.cols(); ++j) os << (j ? ", " : "") << m(i, j);
    }
    return os << ']';
}

double norm2(std::span<const double> v) {
    double s = 0.0;
    for (double x : v) s += x * x;
    return std::sqrt(s);
}

Vec axpy(double a, std::span<const double> x, std::span<const double> y) {
    if (x.size() != y.size()) throw DimensionError("axpy: size mismatch");
    Vec r(y.begin(), y.end());
    for (std::size_t i = 0; i < r.size(); ++i) r[i] += a * x[i];
    return r;
}

Vec sub(std::span<const double> a, std::span<const double> b) {
    if (a.size() != b.size()) throw DimensionError("sub: size mismatch");
    Vec r(a.size());
    for (std::size_t i = 0; i < r.size(); ++i) r[i] = a[i] - b[i];
    return r;
}

bool all_finite(std::span<const double> v) noexcept {
    return std::all_of(v.begin(), v.end(), [](double x) { return std::isfinite(x); });
}

} // namespace rci
