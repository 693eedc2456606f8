#pragma once

#include "plasmon/errors.hpp"
#include "plasmon/geometry.hpp"
#include "plasmon/parallel.hpp"

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <complex>
#include <numbers>
#include <sstream>
#include <vector>

namespace plasmon {

// Kernel of the adjoint double-layer operator in 2D:
//   k(x, nu_x, y) = (1/(2pi)) ((x - y) . nu_x) / |x - y|^2,  x != y.
// On a C^2 curve the kernel extends continuously to the diagonal with limit
// kappa(x)/(4pi), which is what the Nystrom diagonal uses.
inline double np_kernel(const Eigen::Vector2d& x, const Eigen::Vector2d& nu_x,
                        const Eigen::Vector2d& y) {
    Eigen::Vector2d d = x - y;
    return d.dot(nu_x) / (2.0 * std::numbers::pi * d.squaredNorm());
}

// Dense Nystrom matrix acting on nodal values: A_ij = k(x_i, nu_i, x_j) w_j
// off the diagonal, A_ii = kappa_i/(4pi) w_i. Blocks between distinct
// particles use the same kernel, which is smooth there.
struct NPMatrix {
    Eigen::MatrixXd entries;
    std::vector<std::pair<int, int>> block_offsets;  // (first node, node count)
    Eigen::VectorXd weights;
    std::vector<Eigen::Vector2d> nodes;
    std::vector<Eigen::Vector2d> normals;

    int size() const { return static_cast<int>(entries.rows()); }
};

inline NPMatrix assemble(const ParticleSystem& sys, double separation_threshold = 1e-6) {
    if (sys.curves.empty())
        throw std::invalid_argument("cannot assemble an empty particle system");
    if (sys.curves.size() > 1 &&
        (!(min_separation(sys) > separation_threshold) || !detail::particles_disjoint(sys)))
        throw std::invalid_argument("particles overlap: boundaries intersect or sit at or below the separation threshold");

    NPMatrix m;
    int total = sys.total_nodes();
    m.entries.resize(total, total);
    m.weights.resize(total);
    m.nodes.reserve(total);
    m.normals.reserve(total);
    int at = 0;
    for (const auto& c : sys.curves) {
        m.block_offsets.emplace_back(at, c.n_nodes);
        for (int i = 0; i < c.n_nodes; ++i) {
            m.weights[at] = c.w[i];
            m.nodes.push_back(c.x[i]);
            m.normals.push_back(c.nu[i]);
            ++at;
        }
    }

    std::vector<double> diag(total);
    at = 0;
    for (const auto& c : sys.curves)
        for (int i = 0; i < c.n_nodes; ++i) diag[at++] = c.kappa[i] / (4.0 * std::numbers::pi);

    parallel_for(static_cast<std::size_t>(total), [&](std::size_t i) {
        for (int j = 0; j < total; ++j) {
            double k = (static_cast<int>(i) == j)
                           ? diag[i]
                           : np_kernel(m.nodes[i], m.normals[i], m.nodes[j]);
            m.entries(static_cast<int>(i), j) = k * m.weights[j];
        }
    });
    return m;
}

// Eigenvalues sorted by descending real part (ties broken by descending
// imaginary part). The spectrum of the continuous operator is real; the
// imaginary defect of the discrete one is reported as a quality diagnostic.
struct SpectrumResult {
    std::vector<std::complex<double>> eigenvalues;
    int n_nodes = 0;
    double imag_defect = 0.0;
};

inline SpectrumResult spectrum(const NPMatrix& m) {
    Eigen::EigenSolver<Eigen::MatrixXd> solver(m.entries, /*computeEigenvectors=*/false);
    if (solver.info() != Eigen::Success) {
        std::ostringstream msg;
        msg << "eigensolver failed to converge on a " << m.size() << "x" << m.size()
            << " matrix (norm " << m.entries.norm() << ")";
        throw NumericalError(msg.str());
    }
    SpectrumResult r;
    r.n_nodes = m.size();
    r.eigenvalues.resize(m.size());
    for (int i = 0; i < m.size(); ++i) r.eigenvalues[i] = solver.eigenvalues()[i];
    std::sort(r.eigenvalues.begin(), r.eigenvalues.end(),
              [](const std::complex<double>& a, const std::complex<double>& b) {
                  if (a.real() != b.real()) return a.real() > b.real();
                  return a.imag() > b.imag();
              });
    for (const auto& ev : r.eigenvalues)
        r.imag_defect = std::max(r.imag_defect, std::abs(ev.imag()));
    return r;
}

struct ResolveResult {
    Eigen::MatrixXcd solutions;      // one column per right-hand side
    std::vector<double> residuals;   // relative backward error per column
    double rcond = 0.0;
};

// Shared LU factorization of (lambda I - A); factor once, solve many.
// A reciprocal condition estimate below rcond_min means lambda sits on the
// spectrum: that is an exact resonance hit and is reported as such, together
// with the nearest computed eigenvalue.
class ResolventFactor {
public:
    ResolventFactor(const NPMatrix& m, std::complex<double> lambda, double rcond_min = 1e-14)
        : matrix_(&m), lambda_(lambda) {
        Eigen::MatrixXcd shifted = (-m.entries).cast<std::complex<double>>();
        shifted.diagonal().array() += lambda;
        lu_.compute(shifted);
        rcond_ = lu_.rcond();
        if (!(rcond_ >= rcond_min)) {
            SpectrumResult sp = spectrum(m);
            double nearest = 0.0, best = std::numeric_limits<double>::infinity();
            for (const auto& ev : sp.eigenvalues) {
                double d = std::abs(ev - lambda);
                if (d < best) {
                    best = d;
                    nearest = ev.real();
                }
            }
            std::ostringstream msg;
            msg << "resolvent system is numerically singular at lambda = (" << lambda.real()
                << ", " << lambda.imag() << "): rcond = " << rcond_
                << ", nearest eigenvalue " << nearest;
            throw NearResonanceError(msg.str(), nearest, rcond_);
        }
    }

    Eigen::MatrixXcd solve(const Eigen::MatrixXd& rhs) const {
        return lu_.solve(rhs.cast<std::complex<double>>());
    }

    Eigen::MatrixXcd solve(const Eigen::MatrixXcd& rhs) const { return lu_.solve(rhs); }

    double rcond() const { return rcond_; }
    std::complex<double> lambda() const { return lambda_; }
    const NPMatrix& matrix() const { return *matrix_; }

private:
    const NPMatrix* matrix_;
    std::complex<double> lambda_;
    Eigen::PartialPivLU<Eigen::MatrixXcd> lu_;
    double rcond_ = 0.0;
};

inline ResolveResult resolve(const NPMatrix& m, std::complex<double> lambda,
                             const Eigen::MatrixXd& rhs, double rcond_min = 1e-14) {
    ResolventFactor f(m, lambda, rcond_min);
    ResolveResult r;
    r.solutions = f.solve(rhs);
    r.rcond = f.rcond();
    Eigen::MatrixXcd shifted = (-m.entries).cast<std::complex<double>>();
    shifted.diagonal().array() += lambda;
    for (int j = 0; j < rhs.cols(); ++j) {
        double denom = rhs.col(j).norm();
        double res = (shifted * r.solutions.col(j) - rhs.col(j).cast<std::complex<double>>()).norm();
        r.residuals.push_back(denom > 0 ? res / denom : res);
    }
    return r;
}

}
