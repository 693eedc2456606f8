#pragma once

#include <complex>
#include <cstdio>
#include <filesystem>
#include <stdexcept>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "plasmon/errors.hpp"
#include "plasmon/farfield.hpp"
#include "plasmon/np_operator.hpp"
#include "plasmon/scan.hpp"

namespace plasmon {

// All artifact writers share one float format so identical inputs yield
// byte-identical files. %.17g round-trips any double exactly.
inline std::string fmt17(double v) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return buf;
}

namespace detail {

class CsvFile {
public:
    explicit CsvFile(const std::filesystem::path& path)
        : f_(std::fopen(path.string().c_str(), "wb")), path_(path.string()) {
        if (!f_) throw std::runtime_error("cannot open " + path_ + " for writing");
    }
    ~CsvFile() {
        if (f_) std::fclose(f_);
    }
    CsvFile(const CsvFile&) = delete;
    CsvFile& operator=(const CsvFile&) = delete;

    void line(const std::string& s) {
        if (std::fputs(s.c_str(), f_) == EOF || std::fputc('\n', f_) == EOF)
            throw std::runtime_error("write failure on " + path_);
    }

private:
    std::FILE* f_;
    std::string path_;
};

inline void append_complex(std::string& row, const std::complex<double>& z) {
    row += fmt17(z.real());
    row += ',';
    row += fmt17(z.imag());
}

}  // namespace detail

// Header `index,re,im`; rows keep the descending-real order of the result.
inline void write_spectrum_csv(const std::filesystem::path& path, const SpectrumResult& s) {
    detail::CsvFile f(path);
    f.line("index,re,im");
    for (std::size_t i = 0; i < s.eigenvalues.size(); ++i) {
        std::string row = std::to_string(i) + ",";
        detail::append_complex(row, s.eigenvalues[i]);
        f.line(row);
    }
}

// Single row of re/im pairs in row-major entry order, with a matching header
// (re_m11,im_m11,re_m12,... for the tensor's dimension).
inline void write_tensor_csv(const std::filesystem::path& path, const PolarizationTensor& t) {
    detail::CsvFile f(path);
    std::string header, row;
    for (int i = 0; i < t.dim; ++i)
        for (int j = 0; j < t.dim; ++j) {
            if (!header.empty()) {
                header += ',';
                row += ',';
            }
            const std::string ij = std::to_string(i + 1) + std::to_string(j + 1);
            header += "re_m" + ij + ",im_m" + ij;
            detail::append_complex(row, t.entries(i, j));
        }
    f.line(header);
    f.line(row);
}

inline constexpr const char* sweep_csv_header =
    "omega,wavelength_paper,wavelength_physical,re_eps_c,im_eps_c,"
    "re_lambda_eps,im_lambda_eps,re_m11,im_m11,re_m12,im_m12,"
    "re_m21,im_m21,re_m22,im_m22,pt_frobenius,rcond";

inline void write_sweep_csv(const std::filesystem::path& path, const SweepResult& s) {
    detail::CsvFile f(path);
    f.line(sweep_csv_header);
    for (const SweepRow& r : s.rows) {
        std::string row = fmt17(r.omega);
        row += ',';
        row += fmt17(r.wavelength_paper);
        row += ',';
        row += fmt17(r.wavelength_physical);
        row += ',';
        detail::append_complex(row, r.eps_c);
        row += ',';
        detail::append_complex(row, r.lambda_eps);
        for (int i = 0; i < 2; ++i)
            for (int j = 0; j < 2; ++j) {
                row += ',';
                detail::append_complex(row, r.m(i, j));
            }
        row += ',';
        row += fmt17(r.pt_frobenius);
        row += ',';
        row += fmt17(r.rcond);
        f.line(row);
    }
}

inline void write_field_csv(const std::filesystem::path& path,
                            const std::vector<Vector3>& points,
                            const std::vector<Vector3c>& fields) {
    if (points.size() != fields.size())
        throw std::invalid_argument("field csv: points and fields length mismatch");
    detail::CsvFile f(path);
    f.line("x1,x2,x3,re_E1,im_E1,re_E2,im_E2,re_E3,im_E3");
    for (std::size_t i = 0; i < points.size(); ++i) {
        std::string row;
        for (int k = 0; k < 3; ++k) {
            if (k) row += ',';
            row += fmt17(points[i][k]);
        }
        for (int k = 0; k < 3; ++k) {
            row += ',';
            detail::append_complex(row, fields[i][k]);
        }
        f.line(row);
    }
}

// One row per (distance, eigenvalue index) pair, distances in input order.
inline void write_trajectory_csv(const std::filesystem::path& path,
                                 const std::vector<EigenTrajectoryRow>& rows) {
    detail::CsvFile f(path);
    f.line("distance,index,re,im");
    for (const EigenTrajectoryRow& tr : rows)
        for (std::size_t i = 0; i < tr.eigenvalues.size(); ++i) {
            std::string row = fmt17(tr.distance);
            row += ',';
            row += std::to_string(i);
            row += ',';
            detail::append_complex(row, tr.eigenvalues[i]);
            f.line(row);
        }
}

inline void write_peaks_json(const std::filesystem::path& path, const std::vector<Peak>& peaks) {
    detail::CsvFile f(path);
    f.line("[");
    for (std::size_t i = 0; i < peaks.size(); ++i) {
        const Peak& p = peaks[i];
        std::string row = "  {\"omega\": " + fmt17(p.omega) +
                          ", \"wavelength_paper\": " + fmt17(p.wavelength_paper) +
                          ", \"value\": " + fmt17(p.value) +
                          ", \"prominence\": " + fmt17(p.prominence) + "}";
        if (i + 1 < peaks.size()) row += ',';
        f.line(row);
    }
    f.line("]");
}

// Companion plot script; refers to the CSV by the given relative name so the
// output directory stays relocatable.
inline void write_gnuplot_script(const std::filesystem::path& path,
                                 const std::string& csv_name,
                                 const std::string& title) {
    detail::CsvFile f(path);
    f.line("set datafile separator ','");
    f.line("set logscale x");
    f.line("set xlabel 'wavelength_paper [m]'");
    f.line("set ylabel '|M| (Frobenius)'");
    f.line("set title '" + title + "'");
    f.line("plot '" + csv_name + "' using 2:16 skip 1 with lines notitle");
}

}  // namespace plasmon
