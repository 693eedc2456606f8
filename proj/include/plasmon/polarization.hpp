#pragma once

#include "plasmon/errors.hpp"
#include "plasmon/np_operator.hpp"

#include <Eigen/Dense>

#include <cmath>
#include <complex>
#include <numbers>
#include <sstream>

namespace plasmon {

enum class TensorSource { numeric, analytic_disk, analytic_ellipse, analytic_sphere };

inline const char* to_string(TensorSource s) {
    switch (s) {
        case TensorSource::numeric: return "numeric";
        case TensorSource::analytic_disk: return "analytic-disk";
        case TensorSource::analytic_ellipse: return "analytic-ellipse";
        default: return "analytic-sphere";
    }
}

// First-moment polarization tensor m_ij = sum_nodes y_i phi_j(y) w(y) with
// phi_j = (lambda I - K*)^{-1}[nu_j], or one of the closed-form oracles.
struct PolarizationTensor {
    int dim = 2;
    Eigen::MatrixXcd entries;
    std::complex<double> lambda;
    TensorSource source = TensorSource::numeric;
    // Reciprocal condition estimate of the resolvent solve; NaN for oracles.
    double condition = std::numeric_limits<double>::quiet_NaN();

    double frobenius() const { return entries.norm(); }
};

namespace detail {
inline void check_pole(std::complex<double> lambda, std::complex<double> pole,
                       const char* what) {
    if (std::abs(lambda - pole) <= 1e-14) {
        std::ostringstream msg;
        msg << what << " polarization tensor pole hit at lambda = (" << lambda.real() << ", "
            << lambda.imag() << ")";
        throw NumericalError(msg.str());
    }
}
}

// Numeric tensor from an assembled NP matrix; the moments are summed over all
// particles, so unions are covered by the same expression. One factorization
// serves both right-hand sides.
inline PolarizationTensor pt_numeric(const NPMatrix& np, std::complex<double> lambda,
                                     double rcond_min = 1e-14) {
    ResolventFactor factor(np, lambda, rcond_min);
    int n = np.size();
    Eigen::MatrixXd rhs(n, 2);
    for (int i = 0; i < n; ++i) {
        rhs(i, 0) = np.normals[i].x();
        rhs(i, 1) = np.normals[i].y();
    }
    Eigen::MatrixXcd phi = factor.solve(rhs);
    PolarizationTensor t;
    t.dim = 2;
    t.entries = Eigen::MatrixXcd::Zero(2, 2);
    t.lambda = lambda;
    t.source = TensorSource::numeric;
    t.condition = factor.rcond();
    for (int j = 0; j < 2; ++j)
        for (int i = 0; i < 2; ++i) {
            std::complex<double> acc = 0;
            for (int k = 0; k < n; ++k)
                acc += (i == 0 ? np.nodes[k].x() : np.nodes[k].y()) * phi(k, j) * np.weights[k];
            t.entries(i, j) = acc;
        }
    return t;
}

// Disk of radius r: K* annihilates the normal components, so M = (pi r^2 / lambda) I.
inline PolarizationTensor pt_disk(std::complex<double> lambda, double radius) {
    if (!(radius > 0)) throw std::invalid_argument("disk radius must be positive");
    detail::check_pole(lambda, {0.0, 0.0}, "disk");
    PolarizationTensor t;
    t.dim = 2;
    t.lambda = lambda;
    t.source = TensorSource::analytic_disk;
    t.entries = (std::numbers::pi * radius * radius / lambda) * Eigen::MatrixXcd::Identity(2, 2);
    return t;
}

// Axes-aligned ellipse with half-axes a >= b: the normal components are
// eigenfunctions at +-q/2 with q = (a-b)/(a+b), so
// m11 = pi a b / (lambda - q/2), m22 = pi a b / (lambda + q/2).
inline PolarizationTensor pt_ellipse(std::complex<double> lambda, double a, double b) {
    if (!(b > 0) || a < b) throw std::invalid_argument("ellipse half-axes must satisfy a >= b > 0");
    double q = (a - b) / (a + b);
    detail::check_pole(lambda, {q / 2, 0.0}, "ellipse");
    detail::check_pole(lambda, {-q / 2, 0.0}, "ellipse");
    PolarizationTensor t;
    t.dim = 2;
    t.lambda = lambda;
    t.source = TensorSource::analytic_ellipse;
    t.entries = Eigen::MatrixXcd::Zero(2, 2);
    double ab = std::numbers::pi * a * b;
    t.entries(0, 0) = ab / (lambda - q / 2);
    t.entries(1, 1) = ab / (lambda + q / 2);
    return t;
}

// Sphere of radius r in 3D: the dipole eigenvalue is 1/6, giving
// M = ((4/3) pi r^3 / (lambda - 1/6)) I.
inline PolarizationTensor pt_sphere(std::complex<double> lambda, double radius) {
    if (!(radius > 0)) throw std::invalid_argument("sphere radius must be positive");
    detail::check_pole(lambda, {1.0 / 6.0, 0.0}, "sphere");
    PolarizationTensor t;
    t.dim = 3;
    t.lambda = lambda;
    t.source = TensorSource::analytic_sphere;
    t.entries = (4.0 / 3.0 * std::numbers::pi * radius * radius * radius / (lambda - 1.0 / 6.0)) *
                Eigen::MatrixXcd::Identity(3, 3);
    return t;
}

}
