#pragma once

#include <cmath>
#include <cstddef>
#include <cstdint>
#include <limits>
#include <random>
#include <stdexcept>
#include <vector>

namespace riemdiff {

using Vec = std::vector<double>;

constexpr double kInf = std::numeric_limits<double>::infinity();

inline double dot(const Vec& x, const Vec& y) {
    double s = 0.0;
    for (std::size_t i = 0; i < x.size(); ++i) s += x[i] * y[i];
    return s;
}

inline double norm(const Vec& x) { return std::sqrt(dot(x, x)); }

inline Vec add(const Vec& x, const Vec& y) {
    Vec z(x.size());
    for (std::size_t i = 0; i < x.size(); ++i) z[i] = x[i] + y[i];
    return z;
}

inline Vec sub(const Vec& x, const Vec& y) {
    Vec z(x.size());
    for (std::size_t i = 0; i < x.size(); ++i) z[i] = x[i] - y[i];
    return z;
}

inline Vec scale(double a, const Vec& x) {
    Vec z(x.size());
    for (std::size_t i = 0; i < x.size(); ++i) z[i] = a * x[i];
    return z;
}

inline Vec lerp(const Vec& x, const Vec& y, double t) {
    Vec z(x.size());
    for (std::size_t i = 0; i < x.size(); ++i) z[i] = (1.0 - t) * x[i] + t * y[i];
    return z;
}

inline double dist(const Vec& x, const Vec& y) { return norm(sub(x, y)); }

inline Vec unit_axis(std::size_t n, std::size_t k) {
    Vec e(n, 0.0);
    e[k] = 1.0;
    return e;
}

inline Vec concat(const Vec& x, const Vec& y) {
    Vec z = x;
    z.insert(z.end(), y.begin(), y.end());
    return z;
}

// Dense row-major matrix; everything here is desk scale (dim <= 8).
struct Mat {
    std::size_t rows = 0, cols = 0;
    std::vector<double> a;

    Mat() = default;
    Mat(std::size_t r, std::size_t c) : rows(r), cols(c), a(r * c, 0.0) {}

    double& operator()(std::size_t i, std::size_t j) { return a[i * cols + j]; }
    double operator()(std::size_t i, std::size_t j) const { return a[i * cols + j]; }

    static Mat identity(std::size_t n) {
        Mat m(n, n);
        for (std::size_t i = 0; i < n; ++i) m(i, i) = 1.0;
        return m;
    }

    Vec apply(const Vec& x) const {
        Vec y(rows, 0.0);
        for (std::size_t i = 0; i < rows; ++i)
            for (std::size_t j = 0; j < cols; ++j) y[i] += (*this)(i, j) * x[j];
        return y;
    }

    Mat mul(const Mat& b) const {
        Mat c(rows, b.cols);
        for (std::size_t i = 0; i < rows; ++i)
            for (std::size_t k = 0; k < cols; ++k) {
                const double aik = (*this)(i, k);
                for (std::size_t j = 0; j < b.cols; ++j) c(i, j) += aik * b(k, j);
            }
        return c;
    }

    Mat transposed() const {
        Mat t(cols, rows);
        for (std::size_t i = 0; i < rows; ++i)
            for (std::size_t j = 0; j < cols; ++j) t(j, i) = (*this)(i, j);
        return t;
    }

    double max_abs() const {
        double m = 0.0;
        for (double x : a) m = std::max(m, std::fabs(x));
        return m;
    }
};

inline Mat symmetrized(const Mat& m) {
    Mat s(m.rows, m.cols);
    for (std::size_t i = 0; i < m.rows; ++i)
        for (std::size_t j = 0; j < m.cols; ++j) s(i, j) = 0.5 * (m(i, j) + m(j, i));
    return s;
}

// Gaussian elimination with partial pivoting; square systems only.
inline Vec solve_linear(Mat m, Vec b) {
    const std::size_t n = m.rows;
    if (m.cols != n || b.size() != n) throw std::invalid_argument("solve_linear: shape mismatch");
    for (std::size_t k = 0; k < n; ++k) {
        std::size_t piv = k;
        for (std::size_t i = k + 1; i < n; ++i)
            if (std::fabs(m(i, k)) > std::fabs(m(piv, k))) piv = i;
        if (std::fabs(m(piv, k)) < 1e-300) throw std::runtime_error("solve_linear: singular matrix");
        if (piv != k) {
            for (std::size_t j = 0; j < n; ++j) std::swap(m(k, j), m(piv, j));
            std::swap(b[k], b[piv]);
        }
        for (std::size_t i = k + 1; i < n; ++i) {
            const double f = m(i, k) / m(k, k);
            for (std::size_t j = k; j < n; ++j) m(i, j) -= f * m(k, j);
            b[i] -= f * b[k];
        }
    }
    Vec x(n, 0.0);
    for (std::size_t i = n; i-- > 0;) {
        double s = b[i];
        for (std::size_t j = i + 1; j < n; ++j) s -= m(i, j) * x[j];
        x[i] = s / m(i, i);
    }
    return x;
}

struct EigenSym {
    Vec values;   // ascending
    Mat vectors;  // column k is the eigenvector of values[k]
};

// Cyclic Jacobi rotations; adequate for the small symmetric Gram matrices
// that show up here.
inline EigenSym jacobi_eigensym(Mat m, int max_sweeps = 64, double off_tol = 1e-14) {
    const std::size_t n = m.rows;
    if (m.cols != n) throw std::invalid_argument("jacobi_eigensym: square matrix required");
    Mat v = Mat::identity(n);
    if (n > 1) {
        const double scale = std::max(1.0, m.max_abs());
        for (int sweep = 0; sweep < max_sweeps; ++sweep) {
            double off = 0.0;
            for (std::size_t p = 0; p < n; ++p)
                for (std::size_t q = p + 1; q < n; ++q) off += std::fabs(m(p, q));
            if (off <= off_tol * scale) break;
            for (std::size_t p = 0; p < n; ++p)
                for (std::size_t q = p + 1; q < n; ++q) {
                    if (std::fabs(m(p, q)) <= 1e-300) continue;
                    const double theta = (m(q, q) - m(p, p)) / (2.0 * m(p, q));
                    const double t = (theta >= 0 ? 1.0 : -1.0) /
                                     (std::fabs(theta) + std::sqrt(theta * theta + 1.0));
                    const double c = 1.0 / std::sqrt(t * t + 1.0);
                    const double s = t * c;
                    for (std::size_t k = 0; k < n; ++k) {
                        const double mkp = m(k, p), mkq = m(k, q);
                        m(k, p) = c * mkp - s * mkq;
                        m(k, q) = s * mkp + c * mkq;
                    }
                    for (std::size_t k = 0; k < n; ++k) {
                        const double mpk = m(p, k), mqk = m(q, k);
                        m(p, k) = c * mpk - s * mqk;
                        m(q, k) = s * mpk + c * mqk;
                    }
                    for (std::size_t k = 0; k < n; ++k) {
                        const double vkp = v(k, p), vkq = v(k, q);
                        v(k, p) = c * vkp - s * vkq;
                        v(k, q) = s * vkp + c * vkq;
                    }
                }
        }
    }
    EigenSym out;
    out.values.resize(n);
    for (std::size_t i = 0; i < n; ++i) out.values[i] = m(i, i);
    std::vector<std::size_t> order(n);
    for (std::size_t i = 0; i < n; ++i) order[i] = i;
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = i + 1; j < n; ++j)
            if (out.values[order[j]] < out.values[order[i]]) std::swap(order[i], order[j]);
    EigenSym sorted;
    sorted.values.resize(n);
    sorted.vectors = Mat(n, n);
    for (std::size_t k = 0; k < n; ++k) {
        sorted.values[k] = out.values[order[k]];
        for (std::size_t i = 0; i < n; ++i) sorted.vectors(i, k) = v(i, order[k]);
    }
    return sorted;
}

struct Rng {
    std::mt19937_64 gen;

    explicit Rng(std::uint64_t seed = 0) : gen(seed) {}

    double uniform(double a, double b) {
        std::uniform_real_distribution<double> d(a, b);
        return d(gen);
    }

    double normal(double mu = 0.0, double sigma = 1.0) {
        std::normal_distribution<double> d(mu, sigma);
        return d(gen);
    }

    int integer(int lo, int hi) {  // inclusive
        std::uniform_int_distribution<int> d(lo, hi);
        return d(gen);
    }

    Vec vec_uniform(std::size_t n, double a, double b) {
        Vec v(n);
        for (auto& x : v) x = uniform(a, b);
        return v;
    }

    Vec unit_vec(std::size_t n) {
        if (n == 0) return {};
        Vec v(n);
        double s = 0.0;
        do {
            for (auto& x : v) x = normal();
            s = norm(v);
        } while (s < 1e-12);
        return scale(1.0 / s, v);
    }
};

}  // namespace riemdiff
