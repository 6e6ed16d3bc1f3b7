#pragma once

#include <cmath>

#include "spinadc/constants.hpp"
#include "spinadc/device.hpp"
#include "spinadc/rng.hpp"
#include "spinadc/vec3.hpp"

namespace spinadc {

struct ThermalModel {
    bool enabled = false;
    double temperature = 300.0;  // ambient, K; bias heating is added on top

    static ThermalModel off() { return {false, 0.0}; }
    static ThermalModel at(double kelvin) { return {true, kelvin}; }

    // Instantaneous temperature seen by the free layer at a given bias.
    double effective_temperature(const DeviceConfig& d, double v_bias) const {
        if (!enabled) return 0.0;
        return temperature + d.k_heat * v_bias * v_bias;
    }
};

// Per-component standard deviation of the fluctuation field,
// sigma^2 = 2 alpha kB T / (mu0 gamma0 Ms V dt).
inline double thermal_field_sigma(const DeviceConfig& d, double ms, double temperature,
                                  double dt) {
    using namespace constants;
    if (temperature <= 0.0) return 0.0;
    const double var = 2.0 * d.alpha * k_boltzmann * temperature /
                       (mu0 * gamma0 * ms * d.free_layer_volume() * dt);
    return std::sqrt(var);
}

// One fluctuation-field sample, A/m. Each component is an independent
// zero-mean Gaussian; resampled once per integration step.
inline Vec3 sample_thermal_field(const DeviceConfig& d, double ms, double temperature,
                                 double dt, RngStream& rng) {
    if (temperature <= 0.0) return {0.0, 0.0, 0.0};
    return rng.gaussian_vec3() * thermal_field_sigma(d, ms, temperature, dt);
}

}  // namespace spinadc
