#include "plasmon/materials.hpp"

#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <random>

using namespace plasmon;
using Catch::Approx;

TEST_CASE("drude permittivity at the reference frequency") {
    DrudeMaterial m;
    auto eps = drude_eps(m, 1e15);
    // omega^2 + tau^-2 = 1.01e30 against omega_p^2 = 4e30.
    CHECK(eps.real() / m.eps0 == Approx(-2.96039603960396).epsilon(1e-12));
    CHECK(eps.imag() / m.eps0 == Approx(0.396039603960396).epsilon(1e-12));
    CHECK(eps.real() < 0);  // negativity condition omega^2 + tau^-2 < omega_p^2

    auto split = drude_eps_decomposed(m, 1e15);
    CHECK(std::abs(eps - split) <= 1e-13 * std::abs(eps));
}

TEST_CASE("drude permittivity high frequency limit") {
    DrudeMaterial m;
    auto eps = drude_eps(m, 1e25);
    CHECK(std::abs(eps - std::complex<double>(m.eps0, 0)) <= 1e-9 * m.eps0);
}

TEST_CASE("drude permittivity rejects bad frequencies") {
    DrudeMaterial m;
    CHECK_THROWS_AS(drude_eps(m, 0.0), std::invalid_argument);
    CHECK_THROWS_AS(drude_eps(m, -1e15), std::invalid_argument);
    CHECK_THROWS_AS(drude_mu(m, 0.0), std::invalid_argument);
}

TEST_CASE("drude permeability") {
    DrudeMaterial m;
    SECTION("zero filling factor is inert") {
        CHECK(drude_mu(m, 7.7e14) == std::complex<double>(m.mu0, 0));
    }
    SECTION("on-resonance value") {
        m.F_fill = 0.5;
        m.omega0 = 5e14;
        auto mu = drude_mu(m, m.omega0);
        std::complex<double> expected = m.mu0 * std::complex<double>(1.0, m.F_fill * m.omega0 * m.tau);
        CHECK(std::abs(mu - expected) <= 1e-13 * std::abs(expected));
    }
    SECTION("two evaluation routes agree") {
        m.F_fill = 0.5;
        m.omega0 = 5e14;
        for (double omega : {1e14, 4.9e14, 1e15, 3e15}) {
            auto a = drude_mu(m, omega);
            auto b = drude_mu_decomposed(m, omega);
            CHECK(std::abs(a - b) <= 1e-13 * std::abs(a));
        }
    }
}

TEST_CASE("losses are positive") {
    DrudeMaterial m;
    m.F_fill = 0.3;
    m.omega0 = 5e14;
    for (double omega : {1e13, 1e14, 5e14, 1e15, 5e15, 1e16}) {
        CHECK(drude_eps(m, omega).imag() > 0);
        CHECK(drude_mu(m, omega).imag() > 0);
    }
}

TEST_CASE("contrast limits") {
    DrudeMaterial m;
    SECTION("opposite permittivity gives zero") {
        CHECK(std::abs(contrast_decomposed({-m.eps_m, 0.0}, m.eps_m)) == 0.0);
    }
    SECTION("large permittivity tends to one half") {
        auto lam = contrast_decomposed({1e30 * m.eps0, 0.0}, m.eps_m);
        CHECK(std::abs(lam - std::complex<double>(0.5, 0)) < 1e-12);
    }
    SECTION("disk resonance frequency solves eps' + eps_m = 0") {
        double omega_star = std::sqrt(m.omega_p * m.omega_p / (1 + 1.33 * 1.33) - 1.0 / (m.tau * m.tau));
        auto c = contrast(m, omega_star);
        CHECK(std::abs(c.eps_c.real() + m.eps_m) <= 1e-12 * m.eps_m);
        // The contrast itself is only approximately zero there: its real part
        // carries an eps''^2 remainder and its modulus is loss-limited.
        CHECK(std::abs(c.lambda_eps.real()) < 5e-3);
        CHECK(std::abs(c.lambda_eps) < 0.15);
    }
}

TEST_CASE("contrast dual route agreement on random draws") {
    std::mt19937 rng(77123901u);
    std::uniform_real_distribution<double> re(-5.0, 5.0);
    std::uniform_real_distribution<double> im(1e-6, 2.0);
    double b = 1.7689;  // relative background
    for (int k = 0; k < 1000; ++k) {
        std::complex<double> c(re(rng), im(rng));
        std::complex<double> direct = (c + b) / (2.0 * (c - b));
        std::complex<double> split = contrast_decomposed(c, b);
        CHECK(std::abs(direct - split) <= 1e-12 * std::max(1.0, std::abs(direct)));
        if (c.real() > 0) CHECK(split.imag() < 0);
    }
}

TEST_CASE("contrast through the material") {
    DrudeMaterial m;
    auto c = contrast(m, 1e15);
    auto direct = (c.eps_c + m.eps_m) / (2.0 * (c.eps_c - m.eps_m));
    CHECK(std::abs(c.lambda_eps - direct) <= 1e-14 * std::abs(direct));
    // Default filling factor zero: degenerate magnetic contrast maps to infinity.
    CHECK(std::isinf(c.lambda_mu.real()));
    m.F_fill = 0.4;
    m.omega0 = 5e14;
    auto c2 = contrast(m, 1e15);
    CHECK(std::isfinite(c2.lambda_mu.real()));
    CHECK(std::isfinite(c2.lambda_mu.imag()));
}

TEST_CASE("lossless limit kills the imaginary part") {
    DrudeMaterial m;
    m.tau = 1e-2;
    auto c = contrast(m, 1e15);
    CHECK(std::abs(c.lambda_eps.imag()) < 1e-10);
}

TEST_CASE("wavenumbers") {
    SECTION("vacuum-like background") {
        DrudeMaterial m;
        m.eps0 = 1.0;
        m.eps_m = 1.0;
        m.mu_m = 1.0;
        auto [kc, km] = k_wavenumbers(m, 2.0);
        CHECK(km == Approx(2.0).epsilon(1e-14));
        (void)kc;
    }
    SECTION("negative real permittivity gives a decaying wave") {
        DrudeMaterial m;
        m.tau = 1e-2;  // essentially lossless at omega = 1e15, where eps' < 0
        auto [kc, km] = k_wavenumbers(m, 1e15);
        CHECK(kc.imag() > 0);
        CHECK(std::abs(kc.real()) < 1e-6 * std::abs(kc));
        CHECK(km > 0);
    }
    SECTION("independent square root route") {
        DrudeMaterial m;
        auto [kc, km] = k_wavenumbers(m, 1e15);
        std::complex<double> prod = drude_eps(m, 1e15) * drude_mu(m, 1e15);
        std::complex<double> root = std::exp(0.5 * std::log(prod));
        if (root.imag() < 0) root = -root;
        CHECK(std::abs(kc - 1e15 * root) <= 1e-13 * std::abs(kc));
        CHECK(km == Approx(1e15 * std::sqrt(m.eps_m * m.mu_m)).epsilon(1e-14));
    }
}

TEST_CASE("material validation") {
    DrudeMaterial m;
    validate(m);
    m.tau = 0;
    CHECK_THROWS_AS(validate(m), std::invalid_argument);
    m = {};
    m.F_fill = 1.5;
    CHECK_THROWS_AS(validate(m), std::invalid_argument);
}
