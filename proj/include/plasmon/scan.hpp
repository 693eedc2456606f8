#pragma once

#include "plasmon/geometry.hpp"
#include "plasmon/materials.hpp"
#include "plasmon/np_operator.hpp"
#include "plasmon/parallel.hpp"
#include "plasmon/polarization.hpp"

#include <Eigen/Dense>

#include <cmath>
#include <complex>
#include <cstdint>
#include <limits>
#include <numbers>
#include <sstream>
#include <string>
#include <vector>

namespace plasmon {

inline constexpr double c_light = 3e8;  // m/s, the convention used throughout

struct SweepGrid {
    double wavelength_min = 80e-9;   // m
    double wavelength_max = 1100e-9; // m
    int n_samples = 512;
    enum class Spacing { linear, log } spacing = Spacing::log;

    std::string describe() const {
        std::ostringstream s;
        s << (spacing == Spacing::log ? "log" : "linear") << ":" << wavelength_min << ":"
          << wavelength_max << ":" << n_samples;
        return s.str();
    }
};

// One frequency sample. A resolvent failure (exact resonance hit) leaves the
// tensor entries NaN with the failed rcond recorded, flagging the row without
// aborting the sweep.
struct SweepRow {
    double omega = 0;
    double wavelength_paper = 0;     // c/omega
    double wavelength_physical = 0;  // 2 pi c/omega
    std::complex<double> eps_c;
    std::complex<double> lambda_eps;
    Eigen::Matrix2cd m;
    double pt_frobenius = 0;
    double rcond = 0;
};

struct SweepResult {
    std::vector<SweepRow> rows;      // strictly increasing in omega
    std::string grid_desc;
    std::uint64_t shape_hash = 0;
};

namespace detail {

// Wavelengths descending from max to min, so omega = c/wl ascends.
inline std::vector<double> grid_wavelengths(const SweepGrid& g) {
    if (!(g.wavelength_min > 0) || !(g.wavelength_max > g.wavelength_min))
        throw std::invalid_argument("sweep grid needs 0 < wavelength_min < wavelength_max");
    if (g.n_samples < 2) throw std::invalid_argument("sweep grid needs at least 2 samples");
    std::vector<double> wl(g.n_samples);
    int n = g.n_samples;
    for (int i = 0; i < n; ++i) {
        double f = static_cast<double>(i) / (n - 1);
        wl[i] = g.spacing == SweepGrid::Spacing::log
                    ? g.wavelength_max * std::pow(g.wavelength_min / g.wavelength_max, f)
                    : g.wavelength_max + (g.wavelength_min - g.wavelength_max) * f;
    }
    return wl;
}

}

// Sweeps the frequency grid for a fixed geometry. The NP matrix is frequency
// independent (quasi-static), so it is assembled once and only the shifted
// factorization is redone per contrast value.
inline SweepResult frequency_sweep(const NPMatrix& np, const DrudeMaterial& mat,
                                   const SweepGrid& grid, std::uint64_t hash = 0,
                                   double rcond_min = 1e-14) {
    validate(mat);
    std::vector<double> wl = detail::grid_wavelengths(grid);
    SweepResult result;
    result.grid_desc = grid.describe();
    result.shape_hash = hash;
    result.rows.resize(wl.size());
    parallel_for(wl.size(), [&](std::size_t i) {
        SweepRow& row = result.rows[i];
        row.wavelength_paper = wl[i];
        row.omega = c_light / wl[i];
        row.wavelength_physical = 2 * std::numbers::pi * c_light / row.omega;
        Contrast con = contrast(mat, row.omega);
        row.eps_c = con.eps_c;
        row.lambda_eps = con.lambda_eps;
        try {
            PolarizationTensor t = pt_numeric(np, con.lambda_eps, rcond_min);
            row.m = t.entries;
            row.pt_frobenius = t.frobenius();
            row.rcond = t.condition;
        } catch (const NearResonanceError& e) {
            double nan = std::numeric_limits<double>::quiet_NaN();
            row.m.setConstant({nan, nan});
            row.pt_frobenius = nan;
            row.rcond = e.rcond;
        }
    });
    return result;
}

inline SweepResult frequency_sweep(const ParticleSystem& sys, const DrudeMaterial& mat,
                                   const SweepGrid& grid, double rcond_min = 1e-14) {
    return frequency_sweep(assemble(sys), mat, grid, shape_hash(sys), rcond_min);
}

struct Peak {
    int index = 0;
    double omega = 0;
    double wavelength_paper = 0;
    double value = 0;
    double prominence = 0;
};

// Strict interior local maxima of pt_frobenius. The prominence of a candidate
// is its height over the higher of the two flanking minima, where each flank
// is walked until the first strictly higher sample (or the boundary). Peaks
// below prominence_frac of the global maximum are dropped. Non-finite rows
// never form peaks.
inline std::vector<Peak> detect_peaks(const SweepResult& result, double prominence_frac = 0.05) {
    const auto& rows = result.rows;
    if (rows.size() < 3)
        throw std::invalid_argument("peak detection needs at least 3 sweep rows");
    double global_max = 0;
    for (const auto& r : rows)
        if (std::isfinite(r.pt_frobenius)) global_max = std::max(global_max, r.pt_frobenius);
    std::vector<Peak> peaks;
    for (std::size_t i = 1; i + 1 < rows.size(); ++i) {
        double v = rows[i].pt_frobenius;
        if (!std::isfinite(v)) continue;
        double left = rows[i - 1].pt_frobenius;
        double right = rows[i + 1].pt_frobenius;
        if (!(v > left) || !(v > right)) continue;
        double left_min = v;
        for (std::size_t k = i; k-- > 0;) {
            double u = rows[k].pt_frobenius;
            if (!std::isfinite(u) || u > v) break;
            left_min = std::min(left_min, u);
        }
        double right_min = v;
        for (std::size_t k = i + 1; k < rows.size(); ++k) {
            double u = rows[k].pt_frobenius;
            if (!std::isfinite(u) || u > v) break;
            right_min = std::min(right_min, u);
        }
        double prominence = v - std::max(left_min, right_min);
        if (prominence >= prominence_frac * global_max)
            peaks.push_back({static_cast<int>(i), rows[i].omega, rows[i].wavelength_paper, v,
                             prominence});
    }
    return peaks;
}

inline const std::vector<double>& default_distances() {
    static const std::vector<double> d{0.020, 0.069, 0.239, 0.931, 2.884, 10.00};
    return d;
}

// Places the two prototype shapes on the x-axis with the requested boundary
// gap centered at the origin, using the sampled node extents.
inline ParticleSystem place_pair(const BoundaryCurve& left, const BoundaryCurve& right,
                                 double distance, double separation_threshold = 1e-6) {
    if (!(distance > 0)) throw std::invalid_argument("pair distance must be positive");
    double left_reach = -std::numeric_limits<double>::infinity();
    for (const auto& p : left.x) left_reach = std::max(left_reach, p.x());
    double right_reach = std::numeric_limits<double>::infinity();
    for (const auto& p : right.x) right_reach = std::min(right_reach, p.x());
    auto a = transform(left, {0.0, {-(left_reach + distance / 2), 0.0}, 1.0});
    auto b = transform(right, {0.0, {distance / 2 - right_reach, 0.0}, 1.0});
    return make_system({a, b}, {"left", "right"}, separation_threshold);
}

struct DistanceSweepEntry {
    double distance = 0;
    SweepResult sweep;
    SpectrumResult block_spectrum;
};

inline std::vector<DistanceSweepEntry> distance_sweep(const BoundaryCurve& left,
                                                      const BoundaryCurve& right,
                                                      const std::vector<double>& distances,
                                                      const DrudeMaterial& mat,
                                                      const SweepGrid& grid,
                                                      double rcond_min = 1e-14) {
    std::vector<DistanceSweepEntry> out;
    for (double d : distances) {
        ParticleSystem sys = place_pair(left, right, d);
        NPMatrix np = assemble(sys);
        DistanceSweepEntry e;
        e.distance = d;
        e.sweep = frequency_sweep(np, mat, grid, shape_hash(sys), rcond_min);
        e.block_spectrum = spectrum(np);
        out.push_back(std::move(e));
    }
    return out;
}

struct EigenTrajectoryRow {
    double distance = 0;
    std::vector<std::complex<double>> eigenvalues;  // sorted by descending real part
};

inline std::vector<EigenTrajectoryRow> eigen_vs_distance(const BoundaryCurve& left,
                                                         const BoundaryCurve& right,
                                                         const std::vector<double>& distances) {
    std::vector<EigenTrajectoryRow> out;
    for (double d : distances) {
        SpectrumResult sp = spectrum(assemble(place_pair(left, right, d)));
        out.push_back({d, std::move(sp.eigenvalues)});
    }
    return out;
}

// Largest eigenvalue after removing the two entries closest to 1/2 (the pair
// of decoupled constants); tracks the leading coupling mode.
inline double leading_coupling_eigenvalue(const std::vector<std::complex<double>>& eigenvalues) {
    if (eigenvalues.size() < 3)
        throw std::invalid_argument("need at least 3 eigenvalues");
    std::size_t c1 = 0, c2 = 1;
    double b1 = std::numeric_limits<double>::infinity(), b2 = b1;
    for (std::size_t i = 0; i < eigenvalues.size(); ++i) {
        double d = std::abs(eigenvalues[i].real() - 0.5);
        if (d < b1) {
            b2 = b1; c2 = c1;
            b1 = d; c1 = i;
        } else if (d < b2) {
            b2 = d; c2 = i;
        }
    }
    double best = -std::numeric_limits<double>::infinity();
    for (std::size_t i = 0; i < eigenvalues.size(); ++i)
        if (i != c1 && i != c2) best = std::max(best, eigenvalues[i].real());
    return best;
}

}
