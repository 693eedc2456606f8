#pragma once

#include <chrono>
#include <cstdio>
#include <ctime>
#include <filesystem>
#include <fstream>
#include <string>
#include <utility>
#include <vector>

#include "plasmon/config.hpp"
#include "plasmon/csv.hpp"
#include "plasmon/geometry.hpp"
#include "plasmon/materials.hpp"
#include "plasmon/np_operator.hpp"
#include "plasmon/polarization.hpp"
#include "plasmon/scan.hpp"
#include "plasmon/version.hpp"

namespace plasmon {

inline BoundaryCurve make_shape(const ShapeSpec& s) {
    if (s.kind == "circle") return make_circle(s.radius, s.center, s.n_nodes);
    if (s.kind == "ellipse") return make_ellipse(s.a, s.b, s.center, s.rotation, s.n_nodes);
    if (s.kind == "star")
        return make_star(s.r0, s.amplitude, s.n_petals, s.center, s.rotation, s.n_nodes);
    throw ConfigError("unknown shape kind: " + s.kind);
}

inline ParticleSystem build_system(const RunConfig& cfg) {
    std::vector<BoundaryCurve> curves;
    std::vector<std::string> labels;
    curves.reserve(cfg.shapes.size());
    for (std::size_t i = 0; i < cfg.shapes.size(); ++i) {
        curves.push_back(make_shape(cfg.shapes[i]));
        labels.push_back(cfg.shapes[i].label.empty() ? "p" + std::to_string(i)
                                                     : cfg.shapes[i].label);
    }
    return make_system(std::move(curves), std::move(labels), cfg.solver.min_separation);
}

// Collects artifacts and stage timings while a command runs; the manifest is
// the final write, so its presence certifies a completed run.
class Runner {
public:
    Runner(RunConfig cfg, bool quiet) : cfg_(std::move(cfg)), quiet_(quiet) {
        start_wall_ = std::chrono::system_clock::now();
        start_ = std::chrono::steady_clock::now();
        out_dir_ = cfg_.output_dir;
    }

    const RunConfig& config() const { return cfg_; }

    void run() {
        switch (cfg_.command) {
            case Command::spectrum: run_spectrum(); break;
            case Command::polarization: run_polarization(); break;
            case Command::scan: run_scan(); break;
            case Command::couple: run_couple(); break;
            case Command::farfield: run_farfield(); break;
        }
        write_manifest();
    }

private:
    using Clock = std::chrono::steady_clock;

    RunConfig cfg_;
    bool quiet_ = false;
    std::filesystem::path out_dir_;
    std::vector<std::string> artifacts_;
    std::vector<std::pair<std::string, double>> timings_;
    Clock::time_point start_;
    std::chrono::system_clock::time_point start_wall_;
    Clock::time_point stage_start_;

    void begin(const char* stage) {
        stage_ = stage;
        stage_start_ = Clock::now();
    }
    void end_stage() {
        timings_.emplace_back(stage_, std::chrono::duration<double>(Clock::now() - stage_start_).count());
    }
    std::string stage_;

    void note(const std::string& name) {
        artifacts_.push_back(name);
        if (!quiet_) std::printf("wrote %s\n", (out_dir_ / name).string().c_str());
    }

    // Deferred until the numerics succeed, so a failed run leaves no artifacts
    // and no empty output directory behind.
    void ensure_dir() { std::filesystem::create_directories(out_dir_); }

    void run_spectrum() {
        begin("assemble");
        ParticleSystem sys = build_system(cfg_);
        NPMatrix np = assemble(sys, cfg_.solver.min_separation);
        end_stage();
        begin("spectrum");
        SpectrumResult s = spectrum(np);
        end_stage();
        begin("write");
        ensure_dir();
        write_spectrum_csv(out_dir_ / "spectrum.csv", s);
        note("spectrum.csv");
        end_stage();
    }

    void run_polarization() {
        begin("assemble");
        ParticleSystem sys = build_system(cfg_);
        NPMatrix np = assemble(sys, cfg_.solver.min_separation);
        end_stage();
        begin("tensor");
        if (cfg_.pol_lambda.imag() == 0.0) {
            // Real spectral parameters may sit on a discrete eigenvalue, where
            // the resolvent does not exist; reject within eps_sing of one.
            SpectrumResult s = spectrum(np);
            for (const auto& ev : s.eigenvalues)
                if (std::abs(ev - cfg_.pol_lambda) < cfg_.solver.eps_sing)
                    throw NumericalError("polarization lambda is within eps_sing of an eigenvalue");
        }
        PolarizationTensor t = pt_numeric(np, cfg_.pol_lambda, cfg_.solver.rcond_min);
        end_stage();
        begin("write");
        ensure_dir();
        write_tensor_csv(out_dir_ / "tensor.csv", t);
        note("tensor.csv");
        end_stage();
    }

    void run_scan() {
        begin("assemble");
        ParticleSystem sys = build_system(cfg_);
        end_stage();
        begin("sweep");
        SweepResult sweep = frequency_sweep(sys, cfg_.material, cfg_.grid, cfg_.solver.rcond_min);
        std::vector<Peak> peaks = detect_peaks(sweep, cfg_.prominence_frac);
        end_stage();
        begin("write");
        ensure_dir();
        write_sweep_csv(out_dir_ / "sweep.csv", sweep);
        note("sweep.csv");
        write_peaks_json(out_dir_ / "peaks.json", peaks);
        note("peaks.json");
        if (cfg_.gnuplot) {
            write_gnuplot_script(out_dir_ / "sweep.gp", "sweep.csv", "polarization tensor norm");
            note("sweep.gp");
        }
        end_stage();
    }

    static std::string distance_tag(double d) {
        char buf[32];
        std::snprintf(buf, sizeof(buf), "%g", d);
        return buf;
    }

    void run_couple() {
        begin("assemble");
        BoundaryCurve left = make_shape(cfg_.shapes[0]);
        BoundaryCurve right = make_shape(cfg_.shapes[1]);
        end_stage();
        begin("sweep");
        std::vector<DistanceSweepEntry> entries =
            distance_sweep(left, right, cfg_.distances, cfg_.material, cfg_.grid,
                           cfg_.solver.rcond_min);
        end_stage();
        begin("write");
        ensure_dir();
        std::vector<std::string> sweep_names;
        for (const DistanceSweepEntry& e : entries) {
            const std::string name = "sweep_d" + distance_tag(e.distance) + ".csv";
            write_sweep_csv(out_dir_ / name, e.sweep);
            note(name);
            sweep_names.push_back(name);
        }
        std::vector<EigenTrajectoryRow> trajectory;
        for (const DistanceSweepEntry& e : entries)
            trajectory.push_back({e.distance, e.block_spectrum.eigenvalues});
        write_trajectory_csv(out_dir_ / "eigen_trajectory.csv", trajectory);
        note("eigen_trajectory.csv");
        if (cfg_.gnuplot) {
            detail::CsvFile f(out_dir_ / "couple.gp");
            f.line("set datafile separator ','");
            f.line("set logscale x");
            f.line("set xlabel 'wavelength_paper [m]'");
            f.line("set ylabel '|M| (Frobenius)'");
            f.line("set title 'two-particle coupling'");
            std::string plot = "plot ";
            for (std::size_t i = 0; i < sweep_names.size(); ++i) {
                if (i) plot += ", ";
                plot += "'" + sweep_names[i] + "' using 2:16 skip 1 with lines title 'd=" +
                        distance_tag(entries[i].distance) + "'";
            }
            f.line(plot);
            note("couple.gp");
        }
        end_stage();
    }

    static Matrix3c tensor_from_spec(const TensorSpec& t) {
        if (t.kind == TensorSpec::Kind::sphere) return pt_sphere(t.lambda, t.radius).entries;
        return t.matrix;  // Kind::matrix, or the all-zero default
    }

    std::vector<Vector3> farfield_points() const {
        const FarfieldSpec& f = cfg_.farfield;
        std::vector<Vector3> pts = f.points;
        if (f.line.n >= 2)
            for (int i = 0; i < f.line.n; ++i) {
                const double s = double(i) / (f.line.n - 1);
                pts.push_back(f.line.from + s * (f.line.to - f.line.from));
            }
        if (f.sphere.n_theta >= 1) {
            const double pi = std::numbers::pi;
            for (int i = 0; i < f.sphere.n_theta; ++i) {
                const double theta = pi * (i + 0.5) / f.sphere.n_theta;
                for (int j = 0; j < f.sphere.n_phi; ++j) {
                    const double phi = 2 * pi * j / f.sphere.n_phi;
                    Vector3 dir(std::sin(theta) * std::cos(phi), std::sin(theta) * std::sin(phi),
                                std::cos(theta));
                    pts.push_back(f.z + f.sphere.radius * dir);
                }
            }
        }
        return pts;
    }

    void run_farfield() {
        const FarfieldSpec& f = cfg_.farfield;
        begin("setup");
        FarFieldJob job;
        job.z = f.z;
        job.delta = f.delta;
        job.Me = tensor_from_spec(f.me);
        job.Mh = tensor_from_spec(f.mh);
        job.wave = make_plane_wave(f.direction, f.polarization, f.omega, cfg_.material.eps_m,
                                   cfg_.material.mu_m);
        job.eval_points = farfield_points();
        job.r_min = f.r_min;
        end_stage();
        begin("field");
        std::vector<Vector3c> field = scattered_field(job);
        end_stage();
        begin("write");
        ensure_dir();
        write_field_csv(out_dir_ / "field.csv", job.eval_points, field);
        note("field.csv");
        end_stage();
    }

    static std::string iso_utc(std::chrono::system_clock::time_point tp) {
        const std::time_t t = std::chrono::system_clock::to_time_t(tp);
        std::tm tm{};
        gmtime_r(&t, &tm);
        char buf[32];
        std::strftime(buf, sizeof(buf), "%Y-%m-%dT%H:%M:%SZ", &tm);
        return buf;
    }

    void write_manifest() {
        for (const std::string& a : artifacts_)
            if (!std::filesystem::exists(out_dir_ / a))
                throw NumericalError("artifact missing before manifest write: " + a);
        nlohmann::json m;
        m["command"] = to_string(cfg_.command);
        m["config"] = cfg_.echo;
        m["artifacts"] = artifacts_;
        m["versions"] = {
            {"plasmon", version_string},
            {"eigen", std::to_string(EIGEN_WORLD_VERSION) + "." +
                          std::to_string(EIGEN_MAJOR_VERSION) + "." +
                          std::to_string(EIGEN_MINOR_VERSION)},
            {"compiler", __VERSION__},
        };
        m["generated_at"] = iso_utc(start_wall_);
        m["wall_clock_seconds"] = std::chrono::duration<double>(Clock::now() - start_).count();
        nlohmann::json stages = nlohmann::json::array();
        for (const auto& [name, seconds] : timings_)
            stages.push_back({{"stage", name}, {"seconds", seconds}});
        m["timings"] = stages;
        std::ofstream out(out_dir_ / "manifest.json", std::ios::binary);
        if (!out) throw NumericalError("cannot write manifest.json");
        out << m.dump(2) << "\n";
        if (!quiet_) std::printf("wrote %s\n", (out_dir_ / "manifest.json").string().c_str());
    }
};

}  // namespace plasmon
