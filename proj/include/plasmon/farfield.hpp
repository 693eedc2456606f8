#pragma once

#include "plasmon/errors.hpp"
#include "plasmon/parallel.hpp"

#include <Eigen/Dense>

#include <cmath>
#include <complex>
#include <numbers>
#include <sstream>
#include <stdexcept>
#include <vector>

namespace plasmon {

using Vector3 = Eigen::Vector3d;
using Vector3c = Eigen::Vector3cd;
using Matrix3c = Eigen::Matrix3cd;

// Outgoing fundamental solution of the Helmholtz operator in 3D:
//   gamma_k(x) = -e^{ik|x|} / (4 pi |x|).
inline std::complex<double> gamma_k(const Vector3& x, std::complex<double> k) {
    double r = x.norm();
    if (!(r > 0)) throw std::invalid_argument("gamma_k is singular at the origin");
    const std::complex<double> i(0, 1);
    return -std::exp(i * k * r) / (4 * std::numbers::pi * r);
}

namespace detail {

// Radial derivatives of f(r) = e^{ikr}/r, the radial profile of -4 pi gamma_k:
//   f'  = e^{ikr} (ikr - 1) / r^2
//   f'' = e^{ikr} (-k^2 r^2 - 2ikr + 2) / r^3
struct RadialProfile {
    std::complex<double> f, fp, fpp;
};

inline RadialProfile radial_profile(double r, std::complex<double> k) {
    const std::complex<double> i(0, 1);
    std::complex<double> phase = std::exp(i * k * r);
    RadialProfile p;
    p.f = phase / r;
    p.fp = phase * (i * k * r - 1.0) / (r * r);
    p.fpp = phase * (-k * k * r * r - 2.0 * i * k * r + 2.0) / (r * r * r);
    return p;
}

inline Matrix3c cross_matrix(const Vector3c& v) {
    Matrix3c m;
    m << 0, -v.z(), v.y(), v.z(), 0, -v.x(), -v.y(), v.x(), 0;
    return m;
}

}

// Gradient of gamma_k: the chain rule gives c f'(r) rhat with c = -1/(4 pi).
inline Vector3c grad_gamma_k(const Vector3& x, std::complex<double> k) {
    double r = x.norm();
    if (!(r > 0)) throw std::invalid_argument("grad gamma_k is singular at the origin");
    auto p = detail::radial_profile(r, k);
    return (-p.fp / (4 * std::numbers::pi)) * (x / r).cast<std::complex<double>>();
}

// Hessian in closed form: for a radial profile c f(r),
//   D^2 = c [ f'' rhat rhat^T + (f'/r)(I - rhat rhat^T) ].
inline Matrix3c hessian_gamma_k(const Vector3& x, std::complex<double> k) {
    double r = x.norm();
    if (!(r > 0)) throw std::invalid_argument("hessian gamma_k is singular at the origin");
    auto p = detail::radial_profile(r, k);
    Eigen::Matrix3d rr = (x / r) * (x / r).transpose();
    const double c = -1.0 / (4 * std::numbers::pi);
    return c * (p.fpp * rr.cast<std::complex<double>>() +
                (p.fp / r) * (Eigen::Matrix3d::Identity() - rr).cast<std::complex<double>>());
}

// Dyadic Green function of the background Maxwell operator:
//   G(x,z) = eps_m ( gamma_{k_m}(x-z) I + (1/k_m^2) D^2 gamma_{k_m}(x-z) ).
inline Matrix3c dyadic_green(const Vector3& x, const Vector3& z, double k_m, double eps_m) {
    if (k_m == 0) throw std::invalid_argument("dyadic Green function needs a nonzero wavenumber");
    Vector3 d = x - z;
    if (!(d.norm() > 0)) throw std::invalid_argument("dyadic Green function at coincident points");
    return eps_m * (gamma_k(d, k_m) * Matrix3c::Identity() +
                    hessian_gamma_k(d, k_m) / (k_m * k_m));
}

// curl G collapses to the cross-product matrix of eps_m grad gamma_{k_m}.
inline Matrix3c curl_dyadic_green(const Vector3& x, const Vector3& z, double k_m, double eps_m) {
    Vector3 d = x - z;
    if (!(d.norm() > 0)) throw std::invalid_argument("curl of the dyadic Green function at coincident points");
    return detail::cross_matrix(eps_m * grad_gamma_k(d, k_m));
}

// Incident plane wave: E^i = p e^{i k_m d.x}, H^i = (k_m/(omega mu_m)) d x p e^{i k_m d.x}.
struct PlaneWave {
    Vector3 direction;
    Vector3 polarization;
    double omega = 0;
    double k_m = 0;
    double eps_m = 0;
    double mu_m = 0;
};

inline PlaneWave make_plane_wave(const Vector3& direction, const Vector3& polarization,
                                 double omega, double eps_m, double mu_m) {
    if (std::abs(direction.norm() - 1.0) > 1e-14)
        throw std::invalid_argument("plane wave direction must be a unit vector");
    if (std::abs(direction.dot(polarization)) > 1e-14 * polarization.norm())
        throw std::invalid_argument("plane wave polarization must be orthogonal to the direction");
    if (!(omega > 0) || !(eps_m > 0) || !(mu_m > 0))
        throw std::invalid_argument("plane wave needs positive frequency and background constants");
    PlaneWave w;
    w.direction = direction;
    w.polarization = polarization;
    w.omega = omega;
    w.eps_m = eps_m;
    w.mu_m = mu_m;
    w.k_m = omega * std::sqrt(eps_m * mu_m);
    return w;
}

inline std::pair<Vector3c, Vector3c> incident_fields(const PlaneWave& w, const Vector3& x) {
    const std::complex<double> i(0, 1);
    std::complex<double> phase = std::exp(i * w.k_m * w.direction.dot(x));
    Vector3c e = phase * w.polarization.cast<std::complex<double>>();
    Vector3c h = (w.k_m / (w.omega * w.mu_m)) * phase *
                 w.direction.cross(w.polarization).cast<std::complex<double>>();
    return {e, h};
}

// Leading-order dipolar scattered field driven by the electric and magnetic
// polarization tensors of a particle of scale delta at z:
//   E - E^i = -delta^3 omega^2 mu_m G M^e E^i(z)
//             -delta^3 (i omega mu_m / eps_m) (curl G) M^h H^i(z).
struct FarFieldJob {
    Vector3 z = Vector3::Zero();
    double delta = 0;
    Matrix3c Me = Matrix3c::Zero();
    Matrix3c Mh = Matrix3c::Zero();
    PlaneWave wave;
    std::vector<Vector3> eval_points;
    double r_min = 0;  // 0 selects the default far-field shell 10 delta
};

inline std::vector<Vector3c> scattered_field(const FarFieldJob& job) {
    if (!(job.delta > 0)) throw std::invalid_argument("particle scale delta must be positive");
    double r_min = job.r_min > 0 ? job.r_min : 10 * job.delta;
    std::ostringstream offenders;
    int bad = 0;
    for (std::size_t i = 0; i < job.eval_points.size(); ++i) {
        if ((job.eval_points[i] - job.z).norm() < r_min) {
            if (bad++ < 8) offenders << (bad > 1 ? ", " : "") << "#" << i;
        }
    }
    if (bad > 0)
        throw NumericalError("evaluation points inside the far-field shell (r_min = " +
                             std::to_string(r_min) + "): " + offenders.str());

    auto [e_at_z, h_at_z] = incident_fields(job.wave, job.z);
    Vector3c me_drive = job.Me * e_at_z;
    Vector3c mh_drive = job.Mh * h_at_z;
    double d3 = job.delta * job.delta * job.delta;
    std::complex<double> electric_pref = -d3 * job.wave.omega * job.wave.omega * job.wave.mu_m;
    std::complex<double> magnetic_pref =
        -d3 * std::complex<double>(0, 1) * job.wave.omega * job.wave.mu_m / job.wave.eps_m;

    std::vector<Vector3c> out(job.eval_points.size());
    parallel_for(job.eval_points.size(), [&](std::size_t i) {
        const Vector3& x = job.eval_points[i];
        Vector3c field = electric_pref *
                         (dyadic_green(x, job.z, job.wave.k_m, job.wave.eps_m) * me_drive);
        field += magnetic_pref *
                 (curl_dyadic_green(x, job.z, job.wave.k_m, job.wave.eps_m) * mh_drive);
        out[i] = field;
    });
    return out;
}

}
