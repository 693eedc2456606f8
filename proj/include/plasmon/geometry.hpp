#pragma once

#include <Eigen/Dense>

#include <cmath>
#include <cstdint>
#include <cstring>
#include <limits>
#include <numbers>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace plasmon {

// Sampled closed planar curve. Parametrization is counterclockwise and
// equispaced in the parameter t in [0, 2pi); derivatives are analytic, never
// finite-differenced, so the periodic trapezoidal rule keeps spectral accuracy.
// Conventions: nu is the outward unit normal, kappa = +1 for the unit circle,
// w_i = speed_i * 2pi/N are arclength quadrature weights.
struct BoundaryCurve {
    int n_nodes = 0;
    std::vector<double> t;
    std::vector<Eigen::Vector2d> x;
    std::vector<Eigen::Vector2d> xp;
    std::vector<double> speed;
    std::vector<Eigen::Vector2d> nu;
    std::vector<double> kappa;
    std::vector<double> w;

    double perimeter() const {
        double p = 0;
        for (double wi : w) p += wi;
        return p;
    }

    // Discrete divergence-theorem area: 1/2 sum (x_i . nu_i) w_i.
    double area() const {
        double a = 0;
        for (int i = 0; i < n_nodes; ++i) a += x[i].dot(nu[i]) * w[i];
        return 0.5 * a;
    }
};

namespace detail {

inline void check_n_nodes(int n) {
    if (n < 8 || n % 2 != 0)
        throw std::invalid_argument("n_nodes must be even and at least 8, got " +
                                    std::to_string(n));
}

// Builds the sampled curve from analytic position/derivative callables.
template <class Pos, class D1, class D2>
BoundaryCurve sample_curve(int n, Pos&& pos, D1&& d1, D2&& d2) {
    check_n_nodes(n);
    BoundaryCurve c;
    c.n_nodes = n;
    c.t.resize(n);
    c.x.resize(n);
    c.xp.resize(n);
    c.speed.resize(n);
    c.nu.resize(n);
    c.kappa.resize(n);
    c.w.resize(n);
    const double h = 2.0 * std::numbers::pi / n;
    for (int i = 0; i < n; ++i) {
        double ti = h * i;
        Eigen::Vector2d p = pos(ti);
        Eigen::Vector2d v = d1(ti);
        Eigen::Vector2d a = d2(ti);
        double s = v.norm();
        c.t[i] = ti;
        c.x[i] = p;
        c.xp[i] = v;
        c.speed[i] = s;
        // CCW parametrization: rotating the unit tangent by -pi/2 points outward.
        c.nu[i] = Eigen::Vector2d(v.y() / s, -v.x() / s);
        c.kappa[i] = (v.x() * a.y() - v.y() * a.x()) / (s * s * s);
        c.w[i] = s * h;
    }
    return c;
}

inline Eigen::Matrix2d rotation2(double angle) {
    double cs = std::cos(angle), sn = std::sin(angle);
    Eigen::Matrix2d r;
    r << cs, -sn, sn, cs;
    return r;
}

}

inline BoundaryCurve make_circle(double radius, const Eigen::Vector2d& center, int n_nodes) {
    if (!(radius > 0))
        throw std::invalid_argument("circle radius must be positive");
    return detail::sample_curve(
        n_nodes,
        [&](double t) { return Eigen::Vector2d(center.x() + radius * std::cos(t),
                                               center.y() + radius * std::sin(t)); },
        [&](double t) { return Eigen::Vector2d(-radius * std::sin(t), radius * std::cos(t)); },
        [&](double t) { return Eigen::Vector2d(-radius * std::cos(t), -radius * std::sin(t)); });
}

// Axis semantics are fixed: a is the x half-axis before rotation, and a >= b
// is required rather than silently swapping axes.
inline BoundaryCurve make_ellipse(double a, double b, const Eigen::Vector2d& center,
                                  double rotation, int n_nodes) {
    if (!(b > 0) || a < b)
        throw std::invalid_argument("ellipse half-axes must satisfy a >= b > 0");
    Eigen::Matrix2d r = detail::rotation2(rotation);
    return detail::sample_curve(
        n_nodes,
        [&](double t) -> Eigen::Vector2d {
            return center + r * Eigen::Vector2d(a * std::cos(t), b * std::sin(t));
        },
        [&](double t) -> Eigen::Vector2d {
            return r * Eigen::Vector2d(-a * std::sin(t), b * std::cos(t));
        },
        [&](double t) -> Eigen::Vector2d {
            return r * Eigen::Vector2d(-a * std::cos(t), -b * std::sin(t));
        });
}

// Flower shape r(theta) = r0 (1 + amplitude cos(n_petals theta)). amplitude < 1
// keeps the radius positive and the curve simple.
inline BoundaryCurve make_star(double r0, double amplitude, int n_petals,
                               const Eigen::Vector2d& center, double rotation, int n_nodes) {
    if (!(r0 > 0))
        throw std::invalid_argument("star base radius must be positive");
    if (amplitude < 0 || amplitude >= 1 || !(r0 * (1 - amplitude) > 0))
        throw std::invalid_argument("star amplitude must lie in [0, 1)");
    if (n_petals < 1)
        throw std::invalid_argument("star petal count must be at least 1");
    Eigen::Matrix2d rot = detail::rotation2(rotation);
    double k = n_petals;
    auto rad = [=](double t) { return r0 * (1 + amplitude * std::cos(k * t)); };
    auto radp = [=](double t) { return -r0 * amplitude * k * std::sin(k * t); };
    auto radpp = [=](double t) { return -r0 * amplitude * k * k * std::cos(k * t); };
    return detail::sample_curve(
        n_nodes,
        [=, &rot](double t) -> Eigen::Vector2d {
            return center + rot * Eigen::Vector2d(rad(t) * std::cos(t), rad(t) * std::sin(t));
        },
        [=, &rot](double t) -> Eigen::Vector2d {
            double rr = rad(t), rp = radp(t);
            return rot * Eigen::Vector2d(rp * std::cos(t) - rr * std::sin(t),
                                         rp * std::sin(t) + rr * std::cos(t));
        },
        [=, &rot](double t) -> Eigen::Vector2d {
            double rr = rad(t), rp = radp(t), rpp = radpp(t);
            return rot * Eigen::Vector2d(rpp * std::cos(t) - 2 * rp * std::sin(t) - rr * std::cos(t),
                                         rpp * std::sin(t) + 2 * rp * std::cos(t) - rr * std::sin(t));
        });
}

struct RigidTransform {
    double rotation = 0.0;
    Eigen::Vector2d translation = Eigen::Vector2d::Zero();
    double scale = 1.0;
};

// x -> scale * R x + translation. Normals rotate, curvature divides by the
// scale, weights multiply by it. The identity transform returns the fields
// bit-for-bit unchanged.
inline BoundaryCurve transform(const BoundaryCurve& c, const RigidTransform& m) {
    if (!(m.scale > 0))
        throw std::invalid_argument("transform scale must be positive");
    if (m.rotation == 0.0 && m.scale == 1.0 && m.translation.x() == 0.0 &&
        m.translation.y() == 0.0)
        return c;
    Eigen::Matrix2d r = detail::rotation2(m.rotation);
    BoundaryCurve out = c;
    for (int i = 0; i < c.n_nodes; ++i) {
        out.x[i] = m.scale * (r * c.x[i]) + m.translation;
        out.xp[i] = m.scale * (r * c.xp[i]);
        out.speed[i] = m.scale * c.speed[i];
        out.nu[i] = r * c.nu[i];
        out.kappa[i] = c.kappa[i] / m.scale;
        out.w[i] = m.scale * c.w[i];
    }
    return out;
}

// Disjoint union of closed curves; the Nystrom block assembly needs strictly
// separated boundaries, checked here through the node samples.
struct ParticleSystem {
    std::vector<BoundaryCurve> curves;
    std::vector<std::string> labels;

    int total_nodes() const {
        int n = 0;
        for (const auto& c : curves) n += c.n_nodes;
        return n;
    }
};

// Smallest node-to-node distance between distinct particles (infinity for a
// single particle).
inline double min_separation(const ParticleSystem& sys) {
    double best = std::numeric_limits<double>::infinity();
    for (std::size_t p = 0; p < sys.curves.size(); ++p)
        for (std::size_t q = p + 1; q < sys.curves.size(); ++q)
            for (const auto& xa : sys.curves[p].x)
                for (const auto& xb : sys.curves[q].x) {
                    double d = (xa - xb).norm();
                    if (d < best) best = d;
                }
    return best;
}

namespace detail {

// Winding number of the sampled polygon around p; nonzero means inside.
inline bool polygon_contains(const BoundaryCurve& c, const Eigen::Vector2d& p) {
    double angle = 0;
    for (int i = 0; i < c.n_nodes; ++i) {
        Eigen::Vector2d u = c.x[i] - p;
        Eigen::Vector2d v = c.x[(i + 1) % c.n_nodes] - p;
        angle += std::atan2(u.x() * v.y() - u.y() * v.x(), u.dot(v));
    }
    return std::abs(angle) > std::numbers::pi;
}

// Curves are disjoint when no node of one lies inside the other; combined with
// a positive node separation this rejects intersecting and nested boundaries.
inline bool particles_disjoint(const ParticleSystem& sys) {
    for (std::size_t p = 0; p < sys.curves.size(); ++p)
        for (std::size_t q = 0; q < sys.curves.size(); ++q) {
            if (p == q) continue;
            for (const auto& xb : sys.curves[q].x)
                if (polygon_contains(sys.curves[p], xb)) return false;
        }
    return true;
}

}

inline ParticleSystem make_system(std::vector<BoundaryCurve> curves,
                                  std::vector<std::string> labels = {},
                                  double separation_threshold = 1e-6) {
    if (curves.empty())
        throw std::invalid_argument("particle system must contain at least one curve");
    ParticleSystem sys;
    sys.curves = std::move(curves);
    if (labels.empty()) {
        for (std::size_t i = 0; i < sys.curves.size(); ++i)
            labels.push_back("p" + std::to_string(i));
    }
    if (labels.size() != sys.curves.size())
        throw std::invalid_argument("label count must match curve count");
    sys.labels = std::move(labels);
    if (sys.curves.size() > 1) {
        double sep = min_separation(sys);
        if (!(sep > separation_threshold) || !detail::particles_disjoint(sys))
            throw std::invalid_argument("particles overlap or sit closer than the separation threshold " +
                                        std::to_string(separation_threshold));
    }
    return sys;
}

// FNV-1a over the node coordinates and weights; provenance tag for outputs.
inline std::uint64_t shape_hash(const ParticleSystem& sys) {
    std::uint64_t h = 1469598103934665603ull;
    auto mix = [&h](double v) {
        std::uint64_t bits;
        static_assert(sizeof(bits) == sizeof(v));
        std::memcpy(&bits, &v, sizeof(bits));
        for (int b = 0; b < 8; ++b) {
            h ^= (bits >> (8 * b)) & 0xffull;
            h *= 1099511628211ull;
        }
    };
    for (const auto& c : sys.curves) {
        for (const auto& p : c.x) {
            mix(p.x());
            mix(p.y());
        }
        for (double wi : c.w) mix(wi);
    }
    return h;
}

}
