#pragma once

#include <iosfwd>
#include <string>

#include "pms/grape.hpp"
#include "pms/propagator.hpp"

namespace pms {

/// Fixed 12-significant-digit float formatting; identical inputs produce
/// byte-identical files.
std::string format_g12(double v);

void write_record_csv(std::ostream& os, const SimulationRecord& rec);
void write_record_csv(const std::string& path, const SimulationRecord& rec);

void write_pulse_csv(std::ostream& os, const ControlPulse& pulse, const VectorXr& t_grid);
void write_pulse_csv(const std::string& path, const ControlPulse& pulse, const VectorXr& t_grid);

/// `t,omega_re,omega_im` -> sampled pulse (cubic interpolation).
ControlPulse read_pulse_csv(const std::string& path);

/// Two-column (t, re) or three-column (t, re, im) envelope samples.
void write_envelope_csv(std::ostream& os, const SampledEnvelope& env);
void write_envelope_csv(const std::string& path, const SampledEnvelope& env);
SampledEnvelope read_envelope_csv(const std::string& path);

}  // namespace pms
