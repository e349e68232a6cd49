#include "mafd/point_matrix.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace mafd {

bool Mat::all_finite() const {
    for (int i = 0; i < d; ++i)
        for (int j = 0; j < d; ++j)
            if (!std::isfinite((*this)(i, j))) return false;
    return true;
}

Mat mat_sym(const Mat& A) {
    Mat s(A.d);
    for (int i = 0; i < A.d; ++i)
        for (int j = 0; j < A.d; ++j)
            s(i, j) = 0.5 * (A(i, j) + A(j, i));
    return s;
}

Mat mat_transpose(const Mat& A) {
    Mat t(A.d);
    for (int i = 0; i < A.d; ++i)
        for (int j = 0; j < A.d; ++j)
            t(i, j) = A(j, i);
    return t;
}

Mat mat_cof(const Mat& A) {
    Mat c(A.d);
    if (A.d == 2) {
        c(0, 0) = A(1, 1);
        c(0, 1) = -A(1, 0);
        c(1, 0) = -A(0, 1);
        c(1, 1) = A(0, 0);
        return c;
    }
    // d=3: signed 2x2 minors.
    for (int i = 0; i < 3; ++i) {
        const int i1 = (i + 1) % 3, i2 = (i + 2) % 3;
        for (int j = 0; j < 3; ++j) {
            const int j1 = (j + 1) % 3, j2 = (j + 2) % 3;
            // Cyclic index choice absorbs the (-1)^{i+j} sign.
            c(i, j) = A(i1, j1) * A(i2, j2) - A(i1, j2) * A(i2, j1);
        }
    }
    return c;
}

double mat_det(const Mat& A) {
    if (A.d == 2) return A(0, 0) * A(1, 1) - A(0, 1) * A(1, 0);
    return A(0, 0) * (A(1, 1) * A(2, 2) - A(1, 2) * A(2, 1)) -
           A(0, 1) * (A(1, 0) * A(2, 2) - A(1, 2) * A(2, 0)) +
           A(0, 2) * (A(1, 0) * A(2, 1) - A(1, 1) * A(2, 0));
}

double mat_trace(const Mat& A) {
    double t = 0.0;
    for (int i = 0; i < A.d; ++i) t += A(i, i);
    return t;
}

double frobenius(const Mat& A, const Mat& B) {
    double s = 0.0;
    for (int i = 0; i < A.d; ++i)
        for (int j = 0; j < A.d; ++j)
            s += A(i, j) * B(i, j);
    return s;
}

namespace {

std::array<double, 3> eig_sym2(const Mat& A) {
    const double tr = A(0, 0) + A(1, 1);
    const double diff = A(0, 0) - A(1, 1);
    // Discriminant written as a sum of squares so it cannot go negative.
    const double disc = std::sqrt(diff * diff + 4.0 * A(0, 1) * A(1, 0));
    return {0.5 * (tr - disc), 0.5 * (tr + disc), 0.0};
}

std::array<double, 3> eig_sym3(const Mat& A) {
    const double p1 = A(0, 1) * A(0, 1) + A(0, 2) * A(0, 2) + A(1, 2) * A(1, 2);
    if (p1 == 0.0) {
        std::array<double, 3> lam{A(0, 0), A(1, 1), A(2, 2)};
        std::sort(lam.begin(), lam.end());
        return lam;
    }
    const double q = mat_trace(A) / 3.0;
    const double p2 = (A(0, 0) - q) * (A(0, 0) - q) + (A(1, 1) - q) * (A(1, 1) - q) +
                      (A(2, 2) - q) * (A(2, 2) - q) + 2.0 * p1;
    const double p = std::sqrt(p2 / 6.0);
    Mat B(3);
    for (int i = 0; i < 3; ++i)
        for (int j = 0; j < 3; ++j)
            B(i, j) = (A(i, j) - (i == j ? q : 0.0)) / p;
    double r = mat_det(B) / 2.0;
    r = std::clamp(r, -1.0, 1.0);
    const double phi = std::acos(r) / 3.0;
    const double two_pi_3 = 2.0943951023931953;
    const double l3 = q + 2.0 * p * std::cos(phi);            // largest
    const double l1 = q + 2.0 * p * std::cos(phi + two_pi_3);  // smallest
    const double l2 = 3.0 * q - l1 - l3;
    return {l1, l2, l3};
}

}  // namespace

std::array<double, 3> eig_sym_all(const Mat& A) {
    if (A.d == 2) return eig_sym2(A);
    if (A.d == 3) return eig_sym3(A);
    throw std::invalid_argument("eig_sym_all: d must be 2 or 3");
}

std::pair<double, double> eig_minmax_sym(const Mat& A) {
    const auto lam = eig_sym_all(A);
    return {lam[0], lam[A.d - 1]};
}

}  // namespace mafd
