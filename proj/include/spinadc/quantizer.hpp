#pragma once

#include <array>
#include <cstdint>
#include <string>
#include <vector>

#include "spinadc/device.hpp"
#include "spinadc/rng.hpp"
#include "spinadc/switching.hpp"

namespace spinadc {

inline constexpr int kQuantizerLevels = 7;

// 7-level unary code; bit k corresponds to the k-th threshold, lowest first.
struct ThermometerCode {
    std::array<bool, kQuantizerLevels> bits{};

    int popcount() const {
        int n = 0;
        for (bool b : bits) n += b ? 1 : 0;
        return n;
    }

    // No 1 may appear above a 0.
    bool well_formed() const {
        for (int k = 1; k < kQuantizerLevels; ++k)
            if (bits[k] && !bits[k - 1]) return false;
        return true;
    }

    // Highest-threshold bit printed first: 90 uA against a 20..140 ladder
    // reads "0001111".
    std::string to_string() const {
        std::string s;
        for (int k = kQuantizerLevels - 1; k >= 0; --k) s += bits[k] ? '1' : '0';
        return s;
    }
};

struct BinaryCode {
    int value = 0;       // 0..7
    bool bubble = false; // code was non-monotone
};

// Priority-encoder semantics: the output is (highest set threshold + 1),
// which equals the popcount for well-formed codes. Bubbles are reported, not
// repaired.
inline BinaryCode thermometer_to_binary(const ThermometerCode& code) {
    BinaryCode out;
    for (int k = kQuantizerLevels - 1; k >= 0; --k) {
        if (code.bits[k]) {
            out.value = k + 1;
            break;
        }
    }
    out.bubble = !code.well_formed();
    return out;
}

// Invert the critical-current formula for a target threshold ladder:
// Ic(w_k, 0 V) = i_min + k (i_max - i_min)/6. Exact since Ic is linear in w.
inline std::vector<double> design_widths(double i_min, double i_max,
                                         const DeviceConfig& dev_template) {
    if (!(0.0 < i_min && i_min < i_max))
        throw ConfigError("invalid-config: need 0 < i_min < i_max for the threshold ladder");
    DeviceConfig ref = dev_template;
    ref.w_hm = 1.0;  // Ic per metre of width
    const double ic_per_width = critical_current(ref, 0.0);
    std::vector<double> widths(kQuantizerLevels);
    for (int k = 0; k < kQuantizerLevels; ++k) {
        const double target = i_min + k * (i_max - i_min) / (kQuantizerLevels - 1);
        const double w = target / ic_per_width;
        if (w < 10.0e-9 || w > 500.0e-9)
            throw SimError("infeasible-width: level " + std::to_string(k) + " needs " +
                           std::to_string(w * 1e9) + " nm, outside [10, 500] nm");
        widths[k] = w;
    }
    return widths;
}

enum class BankRole { conversion, dummy };

enum class DeviceState { P, AP };

// Seven devices sharing one input rail, widths (and so thresholds) ascending.
struct QuantizerBank {
    std::array<DeviceConfig, kQuantizerLevels> devices;
    std::array<DeviceState, kQuantizerLevels> states;
    std::array<Vec3, kQuantizerLevels> m;  // magnetization behind each state label
    std::array<double, kQuantizerLevels> gain;  // per-device input gain error hook
    Vec3 m_rest;  // relaxed P orientation every conversion starts from
    BankRole role = BankRole::conversion;

    bool all_parallel() const {
        for (auto s : states)
            if (s != DeviceState::P) return false;
        return true;
    }
};

inline QuantizerBank make_bank(double i_min, double i_max, const DeviceConfig& dev_template,
                               BankRole role = BankRole::conversion) {
    QuantizerBank bank;
    const auto widths = design_widths(i_min, i_max, dev_template);
    bank.m_rest = rest_state(dev_template);
    for (int k = 0; k < kQuantizerLevels; ++k) {
        bank.devices[k] = dev_template;
        bank.devices[k].w_hm = widths[k];
        bank.states[k] = DeviceState::P;
        bank.m[k] = bank.m_rest;
        bank.gain[k] = 1.0;
    }
    bank.role = role;
    return bank;
}

// Fabrication mismatch model: each width picks up a Gaussian relative error.
inline void apply_width_mismatch(QuantizerBank& bank, double sigma_rel, std::uint64_t seed) {
    RngStream rng(seed, 0x574D49534DULL);  // "WMISM"
    for (int k = 0; k < kQuantizerLevels; ++k)
        bank.devices[k].w_hm *= 1.0 + sigma_rel * rng.gaussian();
}

struct QuantizeResult {
    ThermometerCode code;
    std::array<SwitchOutcome, kQuantizerLevels> outcomes;
    double energy = 0.0;  // summed conduction energy, J
};

// One conversion: every device sees the sampled input on the shared rail
// (ideal current replication) and runs the full protocol. P-state devices
// start from the bank's rest orientation; AP devices carry their actual
// state. Bank states and magnetizations are updated in place. Device thermal
// streams derive from (seed, sample, device) so results do not depend on
// evaluation order.
inline QuantizeResult quantize(QuantizerBank& bank, double i_in,
                               const SwitchProtocol& protocol, const IntegratorConfig& cfg,
                               const ThermalModel& thermal, std::uint64_t seed,
                               std::uint64_t sample_index = 0) {
    QuantizeResult res;
    for (int k = 0; k < kQuantizerLevels; ++k) {
        if (bank.states[k] == DeviceState::P) bank.m[k] = bank.m_rest;
        MagnetizationState st;
        st.m = bank.m[k];
        st.rng = RngStream(seed, sample_index * 64 + static_cast<std::uint64_t>(k), 0x51544EULL);
        res.outcomes[k] =
            switch_attempt(st, bank.devices[k], bank.gain[k] * i_in, protocol, cfg, thermal);
        bank.m[k] = st.m;
        if (res.outcomes[k].switched) bank.states[k] = DeviceState::AP;
        res.code.bits[k] = bank.states[k] == DeviceState::AP;
        res.energy += res.outcomes[k].energy;
    }
    return res;
}

// Behavioral StrongARM latch. The decision reference sits at half the P->AP
// read swing; input-referred offset+noise is Gaussian per decision. An exact
// tie resolves to 0.
struct ComparatorModel {
    double sigma_v = 5.0e-3;       // input-referred noise, V
    double i_read = 10.0e-6;       // read current, A
    double v_ref = -1.0;           // decision threshold; < 0 selects half swing
    double e_decision = 10.0e-15;  // energy per decision, J

    double reference(const DeviceConfig& dev) const {
        if (v_ref >= 0.0) return v_ref;
        return 0.5 * (r_antiparallel(dev) - dev.r_p) * i_read;
    }
};

struct SenseResult {
    bool bit = false;
    bool metastable = false;
    double delta_v = 0.0;  // read-voltage differential, V
    double energy = 0.0;   // read + decision energy, J
};

// Compare one conversion device against its dummy partner. `noisy` disables
// the offset draw for deterministic runs; rng is consumed only when noisy.
inline SenseResult sense(const DeviceConfig& conv_dev, const Vec3& conv_m,
                         const DeviceConfig& dummy_dev, const Vec3& dummy_m,
                         const ComparatorModel& cmp, double t_sense, bool noisy,
                         RngStream& rng) {
    SenseResult out;
    const double r_conv = resistance(conv_dev, conv_m);
    const double r_dummy = resistance(dummy_dev, dummy_m);
    out.delta_v = cmp.i_read * (r_conv - r_dummy);
    const double offset = noisy ? cmp.sigma_v * rng.gaussian() : 0.0;
    const double margin = out.delta_v - cmp.reference(conv_dev);
    out.bit = margin - offset > 0.0;
    out.metastable = std::fabs(margin) < 0.1 * cmp.sigma_v;
    out.energy = cmp.i_read * cmp.i_read * (r_conv + r_dummy) * t_sense + cmp.e_decision;
    return out;
}

}  // namespace spinadc
