#pragma once

#include <cmath>
#include <cstddef>
#include <stdexcept>
#include <vector>

namespace mixbound {

using Vec = std::vector<double>;

inline double dot(const Vec& a, const Vec& b) {
    double s = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
    return s;
}

inline double norm_sq(const Vec& a) { return dot(a, a); }
inline double norm(const Vec& a) { return std::sqrt(norm_sq(a)); }

// Dense row-major square matrix; only small systems are needed here.
class Matrix {
  public:
    Matrix() = default;
    Matrix(std::size_t n, double fill = 0.0) : n_(n), a_(n * n, fill) {}

    std::size_t size() const { return n_; }
    double& operator()(std::size_t i, std::size_t j) { return a_[i * n_ + j]; }
    double operator()(std::size_t i, std::size_t j) const { return a_[i * n_ + j]; }

    static Matrix identity(std::size_t n) {
        Matrix m(n);
        for (std::size_t i = 0; i < n; ++i) m(i, i) = 1.0;
        return m;
    }

  private:
    std::size_t n_ = 0;
    std::vector<double> a_;
};

inline Vec matvec(const Matrix& m, const Vec& x) {
    Vec y(m.size(), 0.0);
    for (std::size_t i = 0; i < m.size(); ++i)
        for (std::size_t j = 0; j < m.size(); ++j) y[i] += m(i, j) * x[j];
    return y;
}

// Lower-triangular Cholesky factor; throws std::invalid_argument if the
// matrix is not symmetric positive definite.
inline Matrix cholesky(const Matrix& a) {
    std::size_t n = a.size();
    Matrix l(n);
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = 0; j <= i; ++j) {
            double s = a(i, j);
            for (std::size_t k = 0; k < j; ++k) s -= l(i, k) * l(j, k);
            if (i == j) {
                if (!(s > 0.0)) {
                    throw std::invalid_argument("cholesky: matrix not positive definite");
                }
                l(i, i) = std::sqrt(s);
            } else {
                l(i, j) = s / l(j, j);
            }
        }
    }
    return l;
}

// Solve A x = b given the Cholesky factor L (A = L L^T).
inline Vec cholesky_solve(const Matrix& l, const Vec& b) {
    std::size_t n = l.size();
    Vec y(n);
    for (std::size_t i = 0; i < n; ++i) {
        double s = b[i];
        for (std::size_t k = 0; k < i; ++k) s -= l(i, k) * y[k];
        y[i] = s / l(i, i);
    }
    Vec x(n);
    for (std::size_t ii = n; ii-- > 0;) {
        double s = y[ii];
        for (std::size_t k = ii + 1; k < n; ++k) s -= l(k, ii) * x[k];
        x[ii] = s / l(ii, ii);
    }
    return x;
}

}  // namespace mixbound
