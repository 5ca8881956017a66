#pragma once

#include <cstddef>
#include <vector>

namespace pbss {

using Vec = std::vector<double>;

// Dense row-major matrix. Everything in this library is small (l x l with
// l = handful of rings), so no attempt at sparsity or blocking.
struct Matrix {
    std::size_t rows = 0;
    std::size_t cols = 0;
    std::vector<double> data;

    Matrix() = default;
    Matrix(std::size_t r, std::size_t c, double fill = 0.0)
        : rows(r), cols(c), data(r * c, fill) {}

    static Matrix identity(std::size_t n);
    static Matrix from_rows(const std::vector<Vec>& rows);

    double& operator()(std::size_t i, std::size_t j) { return data[i * cols + j]; }
    double operator()(std::size_t i, std::size_t j) const { return data[i * cols + j]; }

    bool square() const { return rows == cols; }
};

Matrix transpose(const Matrix& m);
Matrix matmul(const Matrix& a, const Matrix& b);
Vec matvec(const Matrix& m, const Vec& v);

// LU with partial pivoting; exact-zero pivot reports a zero determinant.
double determinant(Matrix m);
// Gauss-Jordan with partial pivoting; throws std::domain_error when singular.
Matrix inverse(Matrix m);

double dot(const Vec& a, const Vec& b);
double norm(const Vec& v);
Vec normalized(const Vec& v);
Vec add(const Vec& a, const Vec& b);
Vec sub(const Vec& a, const Vec& b);
Vec scale(const Vec& v, double s);

// Angle between two directions in degrees, ignoring overall sign.
double axis_angle_deg(const Vec& a, const Vec& b);

}  // namespace pbss
