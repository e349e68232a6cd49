#pragma once

#include <array>

namespace mafd {

/// Dense d x d matrix attached to a lattice node, d <= 3, row-major.
struct Mat {
    int d = 2;
    std::array<double, 9> a{};

    Mat() = default;
    explicit Mat(int d_) : d(d_) { a.fill(0.0); }

    double operator()(int i, int j) const { return a[i * d + j]; }
    double& operator()(int i, int j) { return a[i * d + j]; }

    static Mat identity(int d_) {
        Mat m(d_);
        for (int i = 0; i < d_; ++i) m(i, i) = 1.0;
        return m;
    }

    bool all_finite() const;
};

Mat mat_sym(const Mat& A);
Mat mat_transpose(const Mat& A);

/// Cofactor matrix: (cof A)_ij = (-1)^{i+j} * minor_ij.
/// For d=2: cof([[a,b],[c,d]]) = [[d,-c],[-b,a]].
Mat mat_cof(const Mat& A);

double mat_det(const Mat& A);
double mat_trace(const Mat& A);

/// Frobenius inner product A:B = sum_ij A_ij B_ij.
double frobenius(const Mat& A, const Mat& B);

/// Smallest and largest eigenvalue of a symmetric matrix.
/// d=2 uses the quadratic closed form; d=3 the trigonometric cubic formula
/// (accuracy ~1e-10 relative to the matrix scale).
std::pair<double, double> eig_minmax_sym(const Mat& A);

/// All eigenvalues of a symmetric matrix, ascending; entries past d are 0.
std::array<double, 3> eig_sym_all(const Mat& A);

}  // namespace mafd
