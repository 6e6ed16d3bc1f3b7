#pragma once

#include <cstdint>
#include <fstream>
#include <optional>
#include <string>

#include <json.hpp>

#include "spinadc/device.hpp"
#include "spinadc/llg.hpp"
#include "spinadc/metrics.hpp"
#include "spinadc/pipeline.hpp"
#include "spinadc/switching.hpp"

namespace spinadc {

// Everything a campaign needs, JSON-serializable. Unset fields keep their
// defaults, so an empty file is a valid configuration of the reference
// device. A snapshot of the resolved config is written next to each run's
// outputs.
struct RunConfig {
    DeviceConfig device;
    double bank_i_min = 20.0e-6;  // A
    double bank_i_max = 140.0e-6; // A
    double mismatch_sigma = 0.0;  // relative width mismatch, 0 = ideal bank
    std::uint64_t mismatch_seed = 1297;
    PhaseSchedule schedule;
    SwitchProtocol protocol;
    ComparatorModel comparator;
    IntegratorConfig integrator;
    bool thermal_enabled = false;
    double temperature = 300.0;  // K
    std::uint64_t seed = 12345;
    std::string out_dir;  // empty = auto timestamped directory

    ThermalModel thermal() const {
        return thermal_enabled ? ThermalModel::at(temperature) : ThermalModel::off();
    }

    QuantizerBank bank(BankRole role = BankRole::conversion) const {
        QuantizerBank b = make_bank(bank_i_min, bank_i_max, device, role);
        if (mismatch_sigma > 0.0) apply_width_mismatch(b, mismatch_sigma, mismatch_seed);
        return b;
    }
};

namespace detail {

template <typename T>
void get_if_present(const nlohmann::json& j, const char* key, T& out) {
    if (auto it = j.find(key); it != j.end()) out = it->get<T>();
}

}  // namespace detail

inline void from_json_into(const nlohmann::json& j, DeviceConfig& d) {
    using detail::get_if_present;
    get_if_present(j, "t_fl_m", d.t_fl);
    get_if_present(j, "t_ox_m", d.t_ox);
    get_if_present(j, "t_hm_m", d.t_hm);
    get_if_present(j, "w_hm_m", d.w_hm);
    get_if_present(j, "diameter_m", d.diameter);
    get_if_present(j, "ms0_am", d.ms0);
    get_if_present(j, "ki0_jm2", d.ki0);
    get_if_present(j, "alpha", d.alpha);
    get_if_present(j, "xi_vcma_jvm", d.xi_vcma);
    get_if_present(j, "t0_k", d.t0);
    get_if_present(j, "tc_k", d.tc);
    get_if_present(j, "k_heat_kv2", d.k_heat);
    get_if_present(j, "xi_bloch", d.xi_bloch);
    get_if_present(j, "eta_bloch", d.eta_bloch);
    get_if_present(j, "theta_sh", d.theta_sh);
    get_if_present(j, "eta_stt", d.eta_stt);
    get_if_present(j, "eta_fit", d.eta_fit);
    get_if_present(j, "tmr0", d.tmr0);
    get_if_present(j, "r_p_ohm", d.r_p);
    get_if_present(j, "rho_hm_ohmm", d.rho_hm);
    get_if_present(j, "l_hm_m", d.l_hm);
    if (auto it = j.find("h_inplane_am"); it != j.end()) {
        d.h_inplane = {it->at(0).get<double>(), it->at(1).get<double>(),
                       it->at(2).get<double>()};
    }
}

inline nlohmann::json to_json(const DeviceConfig& d) {
    return {{"t_fl_m", d.t_fl},
            {"t_ox_m", d.t_ox},
            {"t_hm_m", d.t_hm},
            {"w_hm_m", d.w_hm},
            {"diameter_m", d.diameter},
            {"ms0_am", d.ms0},
            {"ki0_jm2", d.ki0},
            {"alpha", d.alpha},
            {"xi_vcma_jvm", d.xi_vcma},
            {"t0_k", d.t0},
            {"tc_k", d.tc},
            {"k_heat_kv2", d.k_heat},
            {"xi_bloch", d.xi_bloch},
            {"eta_bloch", d.eta_bloch},
            {"theta_sh", d.theta_sh},
            {"eta_stt", d.eta_stt},
            {"eta_fit", d.eta_fit},
            {"tmr0", d.tmr0},
            {"r_p_ohm", d.r_p},
            {"rho_hm_ohmm", d.rho_hm},
            {"l_hm_m", d.l_hm},
            {"h_inplane_am", {d.h_inplane.x, d.h_inplane.y, d.h_inplane.z}}};
}

inline RunConfig run_config_from_json(const nlohmann::json& j) {
    using detail::get_if_present;
    RunConfig c;
    if (auto it = j.find("device"); it != j.end()) from_json_into(*it, c.device);
    if (auto it = j.find("bank"); it != j.end()) {
        get_if_present(*it, "i_min_a", c.bank_i_min);
        get_if_present(*it, "i_max_a", c.bank_i_max);
        get_if_present(*it, "mismatch_sigma", c.mismatch_sigma);
        get_if_present(*it, "mismatch_seed", c.mismatch_seed);
    }
    if (auto it = j.find("schedule"); it != j.end()) {
        std::string arch = "conventional";
        get_if_present(*it, "architecture", arch);
        if (arch == "conventional")
            c.schedule.architecture = Architecture::conventional;
        else if (arch == "interleaved")
            c.schedule.architecture = Architecture::interleaved;
        else
            throw ConfigError("invalid-config: unknown architecture '" + arch + "'");
        get_if_present(*it, "t_convert_s", c.schedule.t_convert);
        get_if_present(*it, "t_sense_s", c.schedule.t_sense);
        get_if_present(*it, "t_reset_s", c.schedule.t_reset);
    }
    if (auto it = j.find("protocol"); it != j.end()) {
        get_if_present(*it, "window_s", c.protocol.window);
        get_if_present(*it, "kick_on_s", c.protocol.kick_on);
        get_if_present(*it, "kick_off_s", c.protocol.kick_off);
        get_if_present(*it, "v_bias_v", c.protocol.v_bias);
        get_if_present(*it, "v_hold_v", c.protocol.v_hold);
        get_if_present(*it, "i_stt_a", c.protocol.i_stt);
        get_if_present(*it, "reset_window_s", c.protocol.reset_window);
        get_if_present(*it, "reset_kick_off_s", c.protocol.reset_kick_off);
        get_if_present(*it, "reset_overdrive", c.protocol.reset_overdrive);
        get_if_present(*it, "i_stt_reset_a", c.protocol.i_stt_reset);
    }
    if (auto it = j.find("comparator"); it != j.end()) {
        get_if_present(*it, "sigma_v", c.comparator.sigma_v);
        get_if_present(*it, "read_current_a", c.comparator.i_read);
        get_if_present(*it, "reference_v", c.comparator.v_ref);
        get_if_present(*it, "decision_energy_j", c.comparator.e_decision);
    }
    if (auto it = j.find("integrator"); it != j.end()) {
        get_if_present(*it, "dt_s", c.integrator.dt);
        std::string scheme = "auto";
        get_if_present(*it, "scheme", scheme);
        if (scheme == "auto")
            c.integrator.scheme = Scheme::auto_select;
        else if (scheme == "rk4")
            c.integrator.scheme = Scheme::deterministic_rk4;
        else if (scheme == "heun")
            c.integrator.scheme = Scheme::stochastic_heun;
        else
            throw ConfigError("invalid-config: unknown scheme '" + scheme + "'");
        get_if_present(*it, "renormalize", c.integrator.renormalize);
        get_if_present(*it, "record_stride", c.integrator.record_stride);
    }
    if (auto it = j.find("thermal"); it != j.end()) {
        get_if_present(*it, "enabled", c.thermal_enabled);
        get_if_present(*it, "temperature_k", c.temperature);
    }
    get_if_present(j, "seed", c.seed);
    get_if_present(j, "out_dir", c.out_dir);
    return c;
}

inline nlohmann::json to_json(const RunConfig& c) {
    const char* arch =
        c.schedule.architecture == Architecture::interleaved ? "interleaved" : "conventional";
    const char* scheme = c.integrator.scheme == Scheme::auto_select ? "auto"
                         : c.integrator.scheme == Scheme::deterministic_rk4 ? "rk4"
                                                                            : "heun";
    return {{"device", to_json(c.device)},
            {"bank",
             {{"i_min_a", c.bank_i_min},
              {"i_max_a", c.bank_i_max},
              {"mismatch_sigma", c.mismatch_sigma},
              {"mismatch_seed", c.mismatch_seed}}},
            {"schedule",
             {{"architecture", arch},
              {"t_convert_s", c.schedule.t_convert},
              {"t_sense_s", c.schedule.t_sense},
              {"t_reset_s", c.schedule.t_reset}}},
            {"protocol",
             {{"window_s", c.protocol.window},
              {"kick_on_s", c.protocol.kick_on},
              {"kick_off_s", c.protocol.kick_off},
              {"v_bias_v", c.protocol.v_bias},
              {"v_hold_v", c.protocol.v_hold},
              {"i_stt_a", c.protocol.i_stt},
              {"reset_window_s", c.protocol.reset_window},
              {"reset_kick_off_s", c.protocol.reset_kick_off},
              {"reset_overdrive", c.protocol.reset_overdrive},
              {"i_stt_reset_a", c.protocol.i_stt_reset}}},
            {"comparator",
             {{"sigma_v", c.comparator.sigma_v},
              {"read_current_a", c.comparator.i_read},
              {"reference_v", c.comparator.v_ref},
              {"decision_energy_j", c.comparator.e_decision}}},
            {"integrator",
             {{"dt_s", c.integrator.dt},
              {"scheme", scheme},
              {"renormalize", c.integrator.renormalize},
              {"record_stride", c.integrator.record_stride}}},
            {"thermal", {{"enabled", c.thermal_enabled}, {"temperature_k", c.temperature}}},
            {"seed", c.seed},
            {"out_dir", c.out_dir}};
}

inline RunConfig load_run_config(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError("cannot open config file: " + path);
    nlohmann::json j;
    try {
        j = nlohmann::json::parse(in);
    } catch (const nlohmann::json::parse_error& e) {
        throw ConfigError(std::string("config parse error in ") + path + ": " + e.what());
    }
    try {
        return run_config_from_json(j);
    } catch (const nlohmann::json::exception& e) {
        throw ConfigError(std::string("config field error in ") + path + ": " + e.what());
    }
}

}  // namespace spinadc
