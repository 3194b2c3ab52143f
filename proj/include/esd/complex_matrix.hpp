#pragma once

#include <cmath>
#include <complex>
#include <cstddef>
#include <initializer_list>
#include <utility>
#include <vector>

#include "esd/errors.hpp"

namespace esd {

using Complex = std::complex<double>;

/// Dense complex matrix in row-major order. The universal carrier for the
/// small Hilbert spaces used here (dimension <= 16); all operations are pure
/// and values are immutable once built, so sharing across threads is safe.
class ComplexMatrix {
public:
    ComplexMatrix() = default;

    ComplexMatrix(std::size_t rows, std::size_t cols)
        : rows_(rows), cols_(cols), data_(rows * cols, Complex{0.0, 0.0}) {
        if (rows == 0 || cols == 0) {
            throw DimensionMismatch("ComplexMatrix: zero dimension");
        }
    }

    ComplexMatrix(std::size_t rows, std::size_t cols, std::vector<Complex> entries)
        : rows_(rows), cols_(cols), data_(std::move(entries)) {
        if (rows == 0 || cols == 0) {
            throw DimensionMismatch("ComplexMatrix: zero dimension");
        }
        if (data_.size() != rows * cols) {
            throw DimensionMismatch("ComplexMatrix: entry count does not match rows*cols");
        }
        for (const Complex& v : data_) {
            if (!std::isfinite(v.real()) || !std::isfinite(v.imag())) {
                throw InvalidParams("ComplexMatrix: non-finite entry");
            }
        }
    }

    /// Row-major nested braces, e.g. {{1, 0}, {0, 1}}.
    ComplexMatrix(std::initializer_list<std::initializer_list<Complex>> rows) {
        rows_ = rows.size();
        cols_ = rows_ > 0 ? rows.begin()->size() : 0;
        if (rows_ == 0 || cols_ == 0) {
            throw DimensionMismatch("ComplexMatrix: empty initializer");
        }
        data_.reserve(rows_ * cols_);
        for (const auto& r : rows) {
            if (r.size() != cols_) {
                throw DimensionMismatch("ComplexMatrix: ragged initializer");
            }
            for (const Complex& v : r) data_.push_back(v);
        }
    }

    static ComplexMatrix identity(std::size_t n) {
        ComplexMatrix m(n, n);
        for (std::size_t i = 0; i < n; ++i) m(i, i) = 1.0;
        return m;
    }

    static ComplexMatrix zero(std::size_t rows, std::size_t cols) {
        return ComplexMatrix(rows, cols);
    }

    std::size_t rows() const { return rows_; }
    std::size_t cols() const { return cols_; }
    bool square() const { return rows_ == cols_; }

    Complex& operator()(std::size_t i, std::size_t j) { return data_[i * cols_ + j]; }
    const Complex& operator()(std::size_t i, std::size_t j) const { return data_[i * cols_ + j]; }

    const std::vector<Complex>& data() const { return data_; }

    ComplexMatrix& operator+=(const ComplexMatrix& o) {
        require_same_shape(o, "add");
        for (std::size_t k = 0; k < data_.size(); ++k) data_[k] += o.data_[k];
        return *this;
    }

    ComplexMatrix& operator-=(const ComplexMatrix& o) {
        require_same_shape(o, "subtract");
        for (std::size_t k = 0; k < data_.size(); ++k) data_[k] -= o.data_[k];
        return *this;
    }

    ComplexMatrix& operator*=(const Complex& s) {
        for (Complex& v : data_) v *= s;
        return *this;
    }

    friend ComplexMatrix operator+(ComplexMatrix a, const ComplexMatrix& b) { return a += b; }
    friend ComplexMatrix operator-(ComplexMatrix a, const ComplexMatrix& b) { return a -= b; }
    friend ComplexMatrix operator*(ComplexMatrix a, const Complex& s) { return a *= s; }
    friend ComplexMatrix operator*(const Complex& s, ComplexMatrix a) { return a *= s; }

    friend ComplexMatrix operator*(const ComplexMatrix& a, const ComplexMatrix& b) {
        if (a.cols_ != b.rows_) {
            throw DimensionMismatch("matmul: inner dimensions differ");
        }
        ComplexMatrix c(a.rows_, b.cols_);
        for (std::size_t i = 0; i < a.rows_; ++i) {
            for (std::size_t k = 0; k < a.cols_; ++k) {
                const Complex aik = a(i, k);
                if (aik == Complex{0.0, 0.0}) continue;
                for (std::size_t j = 0; j < b.cols_; ++j) {
                    c(i, j) += aik * b(k, j);
                }
            }
        }
        return c;
    }

    double max_abs() const {
        double m = 0.0;
        for (const Complex& v : data_) m = std::max(m, std::abs(v));
        return m;
    }

private:
    void require_same_shape(const ComplexMatrix& o, const char* op) const {
        if (rows_ != o.rows_ || cols_ != o.cols_) {
            throw DimensionMismatch(std::string(op) + ": shapes differ");
        }
    }

    std::size_t rows_ = 0;
    std::size_t cols_ = 0;
    std::vector<Complex> data_;
};

inline ComplexMatrix matmul(const ComplexMatrix& a, const ComplexMatrix& b) { return a * b; }

inline ComplexMatrix add(const ComplexMatrix& a, const ComplexMatrix& b) { return a + b; }

inline ComplexMatrix scale(const ComplexMatrix& a, const Complex& s) { return a * s; }

/// Kronecker product; dimension (a.rows*b.rows) x (a.cols*b.cols).
inline ComplexMatrix kron(const ComplexMatrix& a, const ComplexMatrix& b) {
    ComplexMatrix c(a.rows() * b.rows(), a.cols() * b.cols());
    for (std::size_t i = 0; i < a.rows(); ++i) {
        for (std::size_t j = 0; j < a.cols(); ++j) {
            const Complex aij = a(i, j);
            if (aij == Complex{0.0, 0.0}) continue;
            for (std::size_t k = 0; k < b.rows(); ++k) {
                for (std::size_t l = 0; l < b.cols(); ++l) {
                    c(i * b.rows() + k, j * b.cols() + l) = aij * b(k, l);
                }
            }
        }
    }
    return c;
}

/// Conjugate transpose.
inline ComplexMatrix dagger(const ComplexMatrix& a) {
    ComplexMatrix c(a.cols(), a.rows());
    for (std::size_t i = 0; i < a.rows(); ++i) {
        for (std::size_t j = 0; j < a.cols(); ++j) {
            c(j, i) = std::conj(a(i, j));
        }
    }
    return c;
}

/// Elementwise complex conjugate (no transpose).
inline ComplexMatrix conjugate(const ComplexMatrix& a) {
    ComplexMatrix c(a.rows(), a.cols());
    for (std::size_t i = 0; i < a.rows(); ++i) {
        for (std::size_t j = 0; j < a.cols(); ++j) {
            c(i, j) = std::conj(a(i, j));
        }
    }
    return c;
}

inline ComplexMatrix transpose(const ComplexMatrix& a) {
    ComplexMatrix c(a.cols(), a.rows());
    for (std::size_t i = 0; i < a.rows(); ++i) {
        for (std::size_t j = 0; j < a.cols(); ++j) {
            c(j, i) = a(i, j);
        }
    }
    return c;
}

inline Complex trace(const ComplexMatrix& a) {
    if (!a.square()) throw NonSquare("trace: matrix not square");
    Complex t{0.0, 0.0};
    for (std::size_t i = 0; i < a.rows(); ++i) t += a(i, i);
    return t;
}

/// max_ij |a_ij - b_ij|; shapes must match.
inline double max_abs_diff(const ComplexMatrix& a, const ComplexMatrix& b) {
    if (a.rows() != b.rows() || a.cols() != b.cols()) {
        throw DimensionMismatch("max_abs_diff: shapes differ");
    }
    double m = 0.0;
    for (std::size_t i = 0; i < a.rows(); ++i) {
        for (std::size_t j = 0; j < a.cols(); ++j) {
            m = std::max(m, std::abs(a(i, j) - b(i, j)));
        }
    }
    return m;
}

inline bool is_hermitian(const ComplexMatrix& a, double tol) {
    if (!a.square()) return false;
    for (std::size_t i = 0; i < a.rows(); ++i) {
        for (std::size_t j = i; j < a.cols(); ++j) {
            if (std::abs(a(i, j) - std::conj(a(j, i))) > tol) return false;
        }
    }
    return true;
}

inline bool is_unitary(const ComplexMatrix& a, double tol) {
    if (!a.square()) return false;
    return max_abs_diff(dagger(a) * a, ComplexMatrix::identity(a.rows())) <= tol;
}

// Fixed 2x2 operator matrices in the single-qubit basis ordering (|1>, |0>),
// i.e. excited state first. This ordering makes kron() of single-qubit
// matrices line up with the repository-wide two-qubit basis
// (|11>, |10>, |01>, |00>).
inline ComplexMatrix sigma_minus() { return {{0.0, 0.0}, {1.0, 0.0}}; }
inline ComplexMatrix sigma_plus() { return {{0.0, 1.0}, {0.0, 0.0}}; }
inline ComplexMatrix sigma_y() {
    return {{Complex{0.0, 0.0}, Complex{0.0, -1.0}}, {Complex{0.0, 1.0}, Complex{0.0, 0.0}}};
}

} // namespace esd
