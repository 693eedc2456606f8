#pragma once

#include "plasmon/errors.hpp"

#include <cmath>
#include <complex>
#include <limits>
#include <numbers>
#include <stdexcept>
#include <string>

namespace plasmon {

// Drude dispersion parameters plus the (real, lossless) background. All in SI
// units; the defaults model a metallic particle in water-like surroundings.
struct DrudeMaterial {
    double eps0 = 9e-12;                      // F/m
    double mu0 = 4 * std::numbers::pi * 1e-7; // H/m
    double omega_p = 2e15;                    // rad/s
    double tau = 1e-14;                       // s
    double F_fill = 0.0;                      // magnetic filling factor in [0, 1]
    double omega0 = 0.0;                      // rad/s, magnetic resonance
    double eps_m = 1.33 * 1.33 * 9e-12;       // F/m
    double mu_m = 4 * std::numbers::pi * 1e-7;// H/m
};

inline void validate(const DrudeMaterial& m) {
    if (!(m.tau > 0) || !(m.omega_p > 0) || !(m.eps0 > 0) || !(m.mu0 > 0) ||
        !(m.eps_m > 0) || !(m.mu_m > 0) || m.F_fill < 0 || m.F_fill > 1 || m.omega0 < 0)
        throw std::invalid_argument("invalid Drude material parameters");
}

namespace detail {
inline void check_omega(double omega) {
    if (!(omega > 0))
        throw std::invalid_argument("frequency must be positive, got " + std::to_string(omega));
}
}

// eps_c(omega) = eps0 (1 - omega_p^2 / (omega (omega + i/tau))).
inline std::complex<double> drude_eps(const DrudeMaterial& m, double omega) {
    detail::check_omega(omega);
    std::complex<double> den = omega * std::complex<double>(omega, 1.0 / m.tau);
    return m.eps0 * (1.0 - m.omega_p * m.omega_p / den);
}

// Same value through the explicit real/imaginary closed forms; kept as an
// independent route for the dual-evaluation checks.
inline std::complex<double> drude_eps_decomposed(const DrudeMaterial& m, double omega) {
    detail::check_omega(omega);
    double inv_tau2 = 1.0 / (m.tau * m.tau);
    double d = omega * omega + inv_tau2;
    double re = m.eps0 * (d - m.omega_p * m.omega_p) / d;
    double im = m.eps0 * m.omega_p * m.omega_p / (m.tau * omega * d);
    return {re, im};
}

// mu_c(omega) = mu0 (1 - F omega^2 / (omega^2 - omega0^2 + i omega / tau)).
inline std::complex<double> drude_mu(const DrudeMaterial& m, double omega) {
    detail::check_omega(omega);
    std::complex<double> den(omega * omega - m.omega0 * m.omega0, omega / m.tau);
    return m.mu0 * (1.0 - m.F_fill * omega * omega / den);
}

inline std::complex<double> drude_mu_decomposed(const DrudeMaterial& m, double omega) {
    detail::check_omega(omega);
    double a = omega * omega - m.omega0 * m.omega0;
    double d = a * a + omega * omega / (m.tau * m.tau);
    double re = m.mu0 * (1.0 - m.F_fill * omega * omega * a / d);
    double im = m.mu0 * m.F_fill * omega * omega * omega / (m.tau * d);
    return {re, im};
}

// lambda = (c + b) / (2 (c - b)) for complex c against the real background b,
// written out through real and imaginary parts of c.
inline std::complex<double> contrast_decomposed(std::complex<double> c, double b) {
    double re_c = c.real(), im_c = c.imag();
    double d = (re_c - b) * (re_c - b) + im_c * im_c;
    double re = (re_c * re_c - b * b + im_c * im_c) / (2.0 * d);
    double im = -b * im_c / d;
    return {re, im};
}

struct Contrast {
    std::complex<double> lambda_eps;
    std::complex<double> lambda_mu;
    std::complex<double> eps_c;
    std::complex<double> mu_c;
    double omega = 0.0;
};

// Evaluates both contrasts at omega. Each contrast is computed by direct
// complex division and by the decomposed route; the two must agree to 1e-12,
// acting as a built-in consistency check of the closed forms. A degenerate
// magnetic contrast (mu_c == mu_m, the F_fill = 0 default) yields infinity
// rather than an error; the electric denominator must stay away from zero.
inline Contrast contrast(const DrudeMaterial& m, double omega) {
    Contrast c;
    c.omega = omega;
    c.eps_c = drude_eps(m, omega);
    c.mu_c = drude_mu(m, omega);

    auto dual = [](std::complex<double> cc, double bb, const char* which) {
        std::complex<double> direct = (cc + bb) / (2.0 * (cc - bb));
        std::complex<double> decomposed = contrast_decomposed(cc, bb);
        double scale = std::max(1.0, std::abs(direct));
        if (std::abs(direct - decomposed) > 1e-12 * scale)
            throw NumericalError(std::string("contrast route mismatch for ") + which);
        return direct;
    };

    if (std::abs(c.eps_c - std::complex<double>(m.eps_m, 0.0)) < 1e-300)
        throw NumericalError("degenerate electric contrast: eps_c equals eps_m");
    c.lambda_eps = dual(c.eps_c, m.eps_m, "epsilon");

    if (std::abs(c.mu_c - std::complex<double>(m.mu_m, 0.0)) < 1e-300)
        c.lambda_mu = {std::numeric_limits<double>::infinity(), 0.0};
    else
        c.lambda_mu = dual(c.mu_c, m.mu_m, "mu");
    return c;
}

// Wavenumbers k_c = omega sqrt(eps_c mu_c) (principal branch, Im >= 0) and the
// real background k_m = omega sqrt(eps_m mu_m).
inline std::pair<std::complex<double>, double> k_wavenumbers(const DrudeMaterial& m, double omega) {
    detail::check_omega(omega);
    std::complex<double> kc = omega * std::sqrt(drude_eps(m, omega) * drude_mu(m, omega));
    if (kc.imag() < 0) kc = -kc;
    double km = omega * std::sqrt(m.eps_m * m.mu_m);
    return {kc, km};
}

}
