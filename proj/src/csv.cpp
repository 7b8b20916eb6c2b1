#include "pms/csv.hpp"

#include <cstdio>
#include <fstream>
#include <sstream>
#include <vector>

namespace pms {

std::string format_g12(double v) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.12g", v);
    return buf;
}

void write_record_csv(std::ostream& os, const SimulationRecord& rec) {
    os << "t,eta,p_r,p_s,p_loss,rho_rr,rho_ee,rho_aa,omega_re,omega_im\n";
    for (int k = 0; k < rec.size(); ++k) {
        os << format_g12(rec.times[k]) << ',' << format_g12(rec.eta[k]) << ','
           << format_g12(rec.p_r[k]) << ',' << format_g12(rec.p_s[k]) << ','
           << format_g12(rec.p_loss[k]) << ',' << format_g12(rec.rho_rr[k]) << ','
           << format_g12(rec.rho_ee[k]) << ',' << format_g12(rec.rho_aa[k]) << ','
           << format_g12(rec.omega_trace[k].real()) << ','
           << format_g12(rec.omega_trace[k].imag()) << '\n';
    }
}

void write_record_csv(const std::string& path, const SimulationRecord& rec) {
    std::ofstream f(path);
    if (!f) fail("cannot open " + path + " for writing");
    write_record_csv(f, rec);
}

void write_pulse_csv(std::ostream& os, const ControlPulse& pulse, const VectorXr& t_grid) {
    os << "t,omega_re,omega_im\n";
    for (Eigen::Index k = 0; k < t_grid.size(); ++k) {
        const Complex v = pulse(t_grid[k]);
        os << format_g12(t_grid[k]) << ',' << format_g12(v.real()) << ','
           << format_g12(v.imag()) << '\n';
    }
}

void write_pulse_csv(const std::string& path, const ControlPulse& pulse, const VectorXr& t_grid) {
    std::ofstream f(path);
    if (!f) fail("cannot open " + path + " for writing");
    write_pulse_csv(f, pulse, t_grid);
}

namespace {

std::vector<std::vector<double>> read_numeric_csv(const std::string& path,
                                                  const std::string& expect_header, int min_cols) {
    std::ifstream f(path);
    if (!f) fail("cannot open " + path);
    std::string line;
    std::getline(f, line);
    if (line.rfind(expect_header.substr(0, 2), 0) != 0 && !expect_header.empty()) {
        // tolerate any header row; data rows must parse below
    }
    std::vector<std::vector<double>> rows;
    while (std::getline(f, line)) {
        if (line.empty()) continue;
        std::vector<double> row;
        std::stringstream ss(line);
        std::string cell;
        while (std::getline(ss, cell, ',')) row.push_back(std::stod(cell));
        if (static_cast<int>(row.size()) < min_cols)
            fail(path + ": expected at least " + std::to_string(min_cols) + " columns");
        rows.push_back(std::move(row));
    }
    if (rows.size() < 8) fail(path + ": too few samples");
    return rows;
}

}  // namespace

ControlPulse read_pulse_csv(const std::string& path) {
    auto rows = read_numeric_csv(path, "t,omega_re,omega_im", 3);
    const int n = static_cast<int>(rows.size());
    VectorXc v(n);
    for (int i = 0; i < n; ++i) v[i] = Complex(rows[i][1], rows[i][2]);
    return ControlPulse::from_samples(rows.front()[0], rows.back()[0], std::move(v));
}

void write_envelope_csv(std::ostream& os, const SampledEnvelope& env) {
    bool complex_valued = false;
    for (Eigen::Index i = 0; i < env.samples().size(); ++i)
        if (env.samples()[i].imag() != 0.0) {
            complex_valued = true;
            break;
        }
    os << (complex_valued ? "t,re,im\n" : "t,re\n");
    const int n = static_cast<int>(env.samples().size());
    for (int i = 0; i < n; ++i) {
        const double t = env.t_start() + i * env.dt();
        os << format_g12(t) << ',' << format_g12(env.samples()[i].real());
        if (complex_valued) os << ',' << format_g12(env.samples()[i].imag());
        os << '\n';
    }
}

void write_envelope_csv(const std::string& path, const SampledEnvelope& env) {
    std::ofstream f(path);
    if (!f) fail("cannot open " + path + " for writing");
    write_envelope_csv(f, env);
}

SampledEnvelope read_envelope_csv(const std::string& path) {
    auto rows = read_numeric_csv(path, "t,re", 2);
    const int n = static_cast<int>(rows.size());
    VectorXc v(n);
    for (int i = 0; i < n; ++i)
        v[i] = Complex(rows[i][1], rows[i].size() > 2 ? rows[i][2] : 0.0);
    return SampledEnvelope(rows.front()[0], rows.back()[0], std::move(v));
}

}  // namespace pms
