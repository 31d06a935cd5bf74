#ifndef FFR_LINALG_HPP
#define FFR_LINALG_HPP

#include <cassert>
#include <cmath>
#include <cstddef>
#include <vector>

namespace ffr {

using Vec = std::vector<double>;

/// Dense row-major matrix. Deliberately minimal: the embedding and
/// regression stages own their backward passes, so everything stays in
/// plain loops the gradient code can mirror.
struct Mat {
    std::size_t rows = 0;
    std::size_t cols = 0;
    std::vector<double> data;

    Mat() = default;
    Mat(std::size_t r, std::size_t c, double fill = 0.0) : rows(r), cols(c), data(r * c, fill) {}

    double& at(std::size_t r, std::size_t c) { return data[r * cols + c]; }
    double at(std::size_t r, std::size_t c) const { return data[r * cols + c]; }
    double* row(std::size_t r) { return data.data() + r * cols; }
    const double* row(std::size_t r) const { return data.data() + r * cols; }

    void fill(double v) { data.assign(data.size(), v); }
};

/// y = M x
inline void matvec(const Mat& m, const double* x, double* y) {
    for (std::size_t r = 0; r < m.rows; ++r) {
        const double* mr = m.row(r);
        double acc = 0.0;
        for (std::size_t c = 0; c < m.cols; ++c) acc += mr[c] * x[c];
        y[r] = acc;
    }
}

/// x += M^T g  (backward of matvec through the input)
inline void matvec_t_add(const Mat& m, const double* g, double* x) {
    for (std::size_t r = 0; r < m.rows; ++r) {
        const double* mr = m.row(r);
        const double gr = g[r];
        for (std::size_t c = 0; c < m.cols; ++c) x[c] += mr[c] * gr;
    }
}

/// dM += g x^T  (backward of matvec through the weights)
inline void outer_add(Mat& dm, const double* g, const double* x) {
    for (std::size_t r = 0; r < dm.rows; ++r) {
        double* dr = dm.row(r);
        const double gr = g[r];
        for (std::size_t c = 0; c < dm.cols; ++c) dr[c] += gr * x[c];
    }
}

inline double dot(const double* a, const double* b, std::size_t n) {
    double acc = 0.0;
    for (std::size_t i = 0; i < n; ++i) acc += a[i] * b[i];
    return acc;
}

inline double norm2(const double* a, std::size_t n) { return std::sqrt(dot(a, a, n)); }

} // namespace ffr

#endif
