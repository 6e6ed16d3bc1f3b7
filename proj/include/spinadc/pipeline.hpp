#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include "spinadc/quantizer.hpp"

namespace spinadc {

enum class Architecture { conventional, interleaved };

// Conventional: convert, sense, reset in series every sample.
// Interleaved: two banks swap conversion/dummy roles each sample, the reset
// of the previous conversion set runs under the current convert phase, so the
// sample period drops to t_convert + t_sense.
struct PhaseSchedule {
    Architecture architecture = Architecture::conventional;
    double t_convert = 2.28e-9;  // s
    double t_sense = 1.0e-9;     // s
    double t_reset = 1.72e-9;    // s (hidden under convert when interleaved)

    double period() const {
        return architecture == Architecture::interleaved ? t_convert + t_sense
                                                         : t_convert + t_sense + t_reset;
    }
};

inline void validate(const PhaseSchedule& s, const SwitchProtocol& p) {
    if (s.t_convert <= 0 || s.t_sense <= 0 || s.t_reset <= 0)
        throw ConfigError("invalid-config: phase times must be positive");
    if (p.window > s.t_convert)
        throw ConfigError("invalid-config: conversion protocol window exceeds t_convert");
    if (p.reset_window > s.t_reset)
        throw ConfigError("invalid-config: reset protocol window exceeds t_reset");
    if (s.architecture == Architecture::interleaved && p.reset_window > s.t_convert)
        throw ConfigError("invalid-config: hidden reset does not fit under t_convert");
}

struct ConversionRecord {
    std::size_t index = 0;
    double t_start = 0.0;  // s
    double input = 0.0;    // A
    ThermometerCode thermo;
    int binary = 0;
    bool bubble = false;
    std::map<std::string, double> phase_times;  // phase -> s
    double period = 0.0;     // s, this sample's slot
    double t_code = 0.0;     // s, when the code is available (start + convert + sense)
    double energy = 0.0;     // J, everything chargeable to this sample
    std::vector<std::string> errors;  // bubbles, metastables, role violations
};

namespace detail {

struct SenseSummary {
    ThermometerCode code;
    double energy = 0.0;
    std::vector<std::string> anomalies;
};

inline SenseSummary sense_bank(const QuantizerBank& conv, const QuantizerBank& dummy,
                               const ComparatorModel& cmp, double t_sense, bool noisy,
                               std::uint64_t seed, std::uint64_t sample) {
    SenseSummary out;
    for (int k = 0; k < kQuantizerLevels; ++k) {
        RngStream rng(seed, sample * 64 + static_cast<std::uint64_t>(k), 0x53454E53ULL);
        const SenseResult r = sense(conv.devices[k], conv.m[k], dummy.devices[k], dummy.m[k],
                                    cmp, t_sense, noisy, rng);
        out.code.bits[k] = r.bit;
        out.energy += r.energy;
        if (r.metastable) out.anomalies.push_back("metastable:" + std::to_string(k));
    }
    return out;
}

// Reset every switched device in the bank; returns the conduction energy.
inline double reset_bank(QuantizerBank& bank, const SwitchProtocol& protocol,
                         const IntegratorConfig& cfg, const ThermalModel& thermal,
                         std::uint64_t seed, std::uint64_t sample) {
    double energy = 0.0;
    for (int k = 0; k < kQuantizerLevels; ++k) {
        if (bank.states[k] != DeviceState::AP) continue;
        MagnetizationState st;
        st.m = bank.m[k];
        st.rng = RngStream(seed, sample * 64 + static_cast<std::uint64_t>(k), 0x525354ULL);
        const SwitchOutcome out = reset_device(st, bank.devices[k], protocol, cfg, thermal);
        bank.m[k] = st.m;
        bank.states[k] = DeviceState::P;
        energy += out.energy;
    }
    return energy;
}

inline ConversionRecord make_record(std::size_t i, double input, const PhaseSchedule& s) {
    ConversionRecord rec;
    rec.index = i;
    rec.t_start = static_cast<double>(i) * s.period();
    rec.input = input;
    rec.period = s.period();
    rec.t_code = rec.t_start + s.t_convert + s.t_sense;
    rec.phase_times = {{"convert", s.t_convert}, {"sense", s.t_sense}, {"reset", s.t_reset}};
    return rec;
}

}  // namespace detail

// Three-step pipeline over one conversion/dummy bank pair.
inline std::vector<ConversionRecord> run_conventional(
    const std::vector<double>& samples, QuantizerBank& bank, const QuantizerBank& dummy,
    const PhaseSchedule& schedule, const SwitchProtocol& protocol, const ComparatorModel& cmp,
    const IntegratorConfig& cfg, const ThermalModel& thermal, std::uint64_t seed) {
    validate(schedule, protocol);
    if (schedule.architecture != Architecture::conventional)
        throw ConfigError("invalid-config: schedule is not conventional");

    std::vector<ConversionRecord> records;
    records.reserve(samples.size());
    for (std::size_t i = 0; i < samples.size(); ++i) {
        ConversionRecord rec = detail::make_record(i, samples[i], schedule);
        QuantizeResult q = quantize(bank, samples[i], protocol, cfg, thermal, seed, i);
        rec.energy += q.energy;

        detail::SenseSummary sensed = detail::sense_bank(bank, dummy, cmp, schedule.t_sense,
                                                         thermal.enabled, seed, i);
        rec.thermo = sensed.code;
        rec.energy += sensed.energy;
        rec.errors = std::move(sensed.anomalies);

        const BinaryCode bin = thermometer_to_binary(rec.thermo);
        rec.binary = bin.value;
        rec.bubble = bin.bubble;
        if (bin.bubble) rec.errors.push_back("bubble:" + rec.thermo.to_string());

        rec.energy += detail::reset_bank(bank, protocol, cfg, thermal, seed, i);
        records.push_back(std::move(rec));
    }
    return records;
}

// Role-swapping pipeline. While bank A converts sample n, bank B (the
// previous conversion set) is reset under the same phase; the sense then
// compares A against the freshly reset B. A dummy that is not back in P by
// sense time is a role violation: recorded on the sample, never masked.
inline std::vector<ConversionRecord> run_interleaved(
    const std::vector<double>& samples, QuantizerBank& bank_a, QuantizerBank& bank_b,
    const PhaseSchedule& schedule, const SwitchProtocol& protocol, const ComparatorModel& cmp,
    const IntegratorConfig& cfg, const ThermalModel& thermal, std::uint64_t seed) {
    validate(schedule, protocol);
    if (schedule.architecture != Architecture::interleaved)
        throw ConfigError("invalid-config: schedule is not interleaved");
    if (!bank_a.all_parallel() || !bank_b.all_parallel())
        throw ConfigError("invalid-config: both banks must start all-P");

    std::vector<ConversionRecord> records;
    records.reserve(samples.size());
    for (std::size_t i = 0; i < samples.size(); ++i) {
        QuantizerBank& conv = (i % 2 == 0) ? bank_a : bank_b;
        QuantizerBank& dummy = (i % 2 == 0) ? bank_b : bank_a;
        conv.role = BankRole::conversion;
        dummy.role = BankRole::dummy;

        ConversionRecord rec = detail::make_record(i, samples[i], schedule);
        rec.phase_times["reset"] = 0.0;  // hidden under convert
        rec.phase_times["reset_hidden"] = schedule.t_reset;

        // concurrent phases: conversion on conv, reset of last sample's set
        QuantizeResult q = quantize(conv, samples[i], protocol, cfg, thermal, seed, i);
        rec.energy += q.energy;
        rec.energy += detail::reset_bank(dummy, protocol, cfg, thermal, seed, i);

        for (int k = 0; k < kQuantizerLevels; ++k)
            if (dummy.states[k] != DeviceState::P)
                rec.errors.push_back("role-violation:" + std::to_string(k));

        detail::SenseSummary sensed = detail::sense_bank(conv, dummy, cmp, schedule.t_sense,
                                                         thermal.enabled, seed, i);
        rec.thermo = sensed.code;
        rec.energy += sensed.energy;
        for (auto& a : sensed.anomalies) rec.errors.push_back(std::move(a));

        const BinaryCode bin = thermometer_to_binary(rec.thermo);
        rec.binary = bin.value;
        rec.bubble = bin.bubble;
        if (bin.bubble) rec.errors.push_back("bubble:" + rec.thermo.to_string());

        records.push_back(std::move(rec));
    }
    return records;
}

// One isolated conversion against a pristine dummy bank; used by transfer
// measurement. The caller's bank template is copied, not mutated.
inline ConversionRecord single_conversion(const QuantizerBank& bank_template, double i_in,
                                          const PhaseSchedule& schedule,
                                          const SwitchProtocol& protocol,
                                          const ComparatorModel& cmp,
                                          const IntegratorConfig& cfg,
                                          const ThermalModel& thermal, std::uint64_t seed,
                                          std::uint64_t sample_index = 0) {
    QuantizerBank conv = bank_template;
    QuantizerBank dummy = bank_template;
    for (int k = 0; k < kQuantizerLevels; ++k) {
        dummy.states[k] = DeviceState::P;
        dummy.m[k] = {0.0, 0.0, -1.0};
    }
    ConversionRecord rec = detail::make_record(0, i_in, schedule);
    QuantizeResult q = quantize(conv, i_in, protocol, cfg, thermal, seed, sample_index);
    rec.energy += q.energy;
    detail::SenseSummary sensed = detail::sense_bank(conv, dummy, cmp, schedule.t_sense,
                                                     thermal.enabled, seed, sample_index);
    rec.thermo = sensed.code;
    rec.energy += sensed.energy;
    const BinaryCode bin = thermometer_to_binary(rec.thermo);
    rec.binary = bin.value;
    rec.bubble = bin.bubble;
    return rec;
}

}  // namespace spinadc
