#pragma once

#include <cstddef>
#include <initializer_list>
#include <iosfwd>
#include <span>
#include <vector>

namespace rci {

using Vec = std::vector<double>;

/**
 * Dense real matrix stored row-major.
 *
 * Construction paths that take external data (from_rows, the data
 * constructor) reject non-finite entries. Element access through
 * operator() is unchecked; numeric kernels validate finiteness on entry.
 */
class RealMatrix {
public:
    RealMatrix() = default;
    RealMatrix(std::size_t rows, std::size_t cols, double fill = 0.0);
    RealMatrix(std::size_t rows, std::size_t cols, std::vector<double> data);

    static RealMatrix from_rows(std::initializer_list<std::initializer_list<double>> rows);
    static RealMatrix from_rows(const std::vector<std::vector<double>>& rows);
    static RealMatrix identity(std::size_t n);
    static RealMatrix zeros(std::size_t rows, std::size_t cols) { return RealMatrix(rows, cols); }
    static RealMatrix diagonal(std::span<const double> d);
    static RealMatrix column(std::span<const double> v);

    [[nodiscard]] std::size_t rows() const noexcept { return rows_; }
    [[nodiscard]] std::size_t cols() const noexcept { return cols_; }
    [[nodiscard]] bool empty() const noexcept { return data_.empty(); }
    [[nodiscard]] bool is_square() const noexcept { return rows_ == cols_ && rows_ > 0; }

    double& operator()(std::size_t i, std::size_t j) noexcept { return data_[i * cols_ + j]; }
    double operator()(std::size_t i, std::size_t j) const noexcept { return data_[i * cols_ + j]; }

    [[nodiscard]] std::span<const double> data() const noexcept { return data_; }
    [[nodiscard]] std::span<double> data() noexcept { return data_; }
    [[nodiscard]] std::vector<std::vector<double>> to_rows() const;

    [[nodiscard]] RealMatrix transpose() const;
    [[nodiscard]] bool all_finite() const noexcept;
    [[nodiscard]] double max_abs() const noexcept;

    /// Copy of the block starting at (r0, c0) with the given extent.
    [[nodiscard]] RealMatrix block(std::size_t r0, std::size_t c0, std::size_t nr, std::size_t nc) const;
    void set_block(std::size_t r0, std::size_t c0, const RealMatrix& b);

    RealMatrix& operator+=(const RealMatrix& o);
    RealMatrix& operator-=(const RealMatrix& o);
    RealMatrix& operator*=(double s) noexcept;

    friend bool operator==(const RealMatrix&, const RealMatrix&) = default;

private:
    std::size_t rows_ = 0;
    std::size_t cols_ = 0;
    std::vector<double> data_;
};

RealMatrix operator+(RealMatrix a, const RealMatrix& b);
RealMatrix operator-(RealMatrix a, const RealMatrix& b);
RealMatrix operator*(const RealMatrix& a, const RealMatrix& b);
RealMatrix operator*(double s, RealMatrix a);
Vec operator*(const RealMatrix& a, std::span<const double> x);

/// [left | right], row counts must agree.
RealMatrix hstack(const RealMatrix& left, const RealMatrix& right);
/// [top ; bottom], column counts must agree.
RealMatrix vstack(const RealMatrix& top, const RealMatrix& bottom);

/// Largest absolute entrywise difference; shapes must agree.
double max_abs_diff(const RealMatrix& a, const RealMatrix& b);

std::ostream& operator<<(std::ostream& os, const RealMatrix& m);

// Small vector helpers used across the integrator and metrics code.
double norm2(std::span<const double> v);
Vec axpy(double a, std::span<const double> x, std::span<const double> y); // a*x + y
Vec sub(std::span<const double> a, std::span<const double> b);
bool all_finite(std::span<const double> v) noexcept;

} // namespace rci
