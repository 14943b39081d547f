#pragma once

#include <cstdint>
#include <optional>
#include <string>

namespace sphtraffic {

struct LyapunovSample {
    double t = 0.0;
    double phi_s = 0.0;        // sum of per-agent potentials, >= 0
    double kinetic = 0.0;      // sum of 0.5 |v_i|^2, >= 0
    double energy_rate = 0.0;  // sum of e-dot terms; sign unconstrained
    double value() const { return phi_s + kinetic + energy_rate; }
};

struct CongestionReport {
    std::string segment;
    std::optional<double> onset_time;  // empty = never sustained (the N/A case)
    double v_jam_frac = 0.0;
    double occ_frac = 0.0;
    double window = 0.0;
};

}  // namespace sphtraffic
