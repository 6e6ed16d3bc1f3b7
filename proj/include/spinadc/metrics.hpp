#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdint>
#include <string>
#include <vector>

#include <json.hpp>

#include "spinadc/parallel.hpp"
#include "spinadc/pipeline.hpp"

namespace spinadc {

// Measured input currents at which the output code increments.
struct TransferCurve {
    std::array<double, kQuantizerLevels> thresholds{};  // A
    double lsb = 0.0;                                   // A, (i_stop - i_start)/8
};

// Fine ramp through the ADC followed by bisection on each code transition.
// `steps_per_bin` >= 64; the ramp must be noiseless-monotone or the
// measurement aborts with non-monotonic-transfer.
inline TransferCurve measure_transfer(const QuantizerBank& bank, double i_start, double i_stop,
                                      int steps_per_bin, const PhaseSchedule& schedule,
                                      const SwitchProtocol& protocol,
                                      const ComparatorModel& cmp, const IntegratorConfig& cfg,
                                      const ThermalModel& thermal, std::uint64_t seed) {
    if (steps_per_bin < 64)
        throw ConfigError("invalid-config: need at least 64 ramp steps per code bin");
    if (!(i_start < i_stop)) throw ConfigError("invalid-config: need i_start < i_stop");

    const int total = steps_per_bin * (kQuantizerLevels + 1);
    auto code_at = [&](double i_in) {
        return single_conversion(bank, i_in, schedule, protocol, cmp, cfg, thermal, seed)
            .binary;
    };

    std::vector<int> codes(static_cast<std::size_t>(total) + 1);
    parallel_for(codes.size(), 0, [&](std::size_t j) {
        const double x = i_start + (i_stop - i_start) * static_cast<double>(j) / total;
        codes[j] = code_at(x);
    });
    for (std::size_t j = 1; j < codes.size(); ++j)
        if (codes[j] < codes[j - 1])
            throw SimError("non-monotonic-transfer: code drops from " +
                           std::to_string(codes[j - 1]) + " to " + std::to_string(codes[j]) +
                           " at ramp step " + std::to_string(j));
    if (codes.front() == codes.back())
        throw SimError("non-monotonic-transfer: no code transitions found in ramp range");

    TransferCurve curve;
    curve.lsb = (i_stop - i_start) / 8.0;
    const double step = (i_stop - i_start) / total;
    for (int level = 0; level < kQuantizerLevels; ++level) {
        const int want = level + 1;  // first input whose code reaches `want`
        int j = 0;
        while (j <= total && codes[j] < want) ++j;
        if (j > total)
            throw SimError("non-monotonic-transfer: code " + std::to_string(want) +
                           " never reached; raise i_stop");
        double lo = i_start + step * (j - 1), hi = i_start + step * j;
        for (int it = 0; it < 60; ++it) {
            const double mid = 0.5 * (lo + hi);
            if (code_at(mid) >= want) hi = mid; else lo = mid;
        }
        curve.thresholds[level] = 0.5 * (lo + hi);
    }
    return curve;
}

struct DnlInlReport {
    std::array<double, kQuantizerLevels - 1> dnl{};  // LSB, gaps between 7 thresholds
    std::array<double, kQuantizerLevels> inl{};      // LSB, endpoint-fit reference
    double dnl_min = 0.0, dnl_max = 0.0;
    double inl_min = 0.0, inl_max = 0.0;
    double lsb = 0.0;  // A
    bool telescoping_ok = false;

    // sum(DNL) must telescope to (T6 - T0)/lsb - 6
    static constexpr double kTelescopingTol = 1e-9;
};

inline DnlInlReport dnl_inl(const TransferCurve& curve) {
    for (int k = 1; k < kQuantizerLevels; ++k)
        if (!(curve.thresholds[k] > curve.thresholds[k - 1]))
            throw SimError("non-monotonic-transfer: thresholds not strictly increasing");

    DnlInlReport rep;
    rep.lsb = curve.lsb;
    for (int k = 0; k + 1 < kQuantizerLevels; ++k)
        rep.dnl[k] = (curve.thresholds[k + 1] - curve.thresholds[k]) / curve.lsb - 1.0;

    const double t0 = curve.thresholds[0];
    const double t6 = curve.thresholds[kQuantizerLevels - 1];
    for (int k = 0; k < kQuantizerLevels; ++k) {
        const double ideal = t0 + (t6 - t0) * static_cast<double>(k) / (kQuantizerLevels - 1);
        rep.inl[k] = (curve.thresholds[k] - ideal) / curve.lsb;
    }
    rep.dnl_min = *std::min_element(rep.dnl.begin(), rep.dnl.end());
    rep.dnl_max = *std::max_element(rep.dnl.begin(), rep.dnl.end());
    rep.inl_min = *std::min_element(rep.inl.begin(), rep.inl.end());
    rep.inl_max = *std::max_element(rep.inl.begin(), rep.inl.end());

    double sum = 0.0;
    for (double d : rep.dnl) sum += d;
    rep.telescoping_ok = std::fabs(sum - ((t6 - t0) / curve.lsb - 6.0)) <
                         DnlInlReport::kTelescopingTol;
    return rep;
}

struct WilsonInterval {
    double low = 0.0;
    double high = 0.0;
};

inline WilsonInterval wilson_interval(int successes, int trials, double z = 1.959963984540054) {
    if (trials <= 0) return {};
    const double n = trials;
    const double p = static_cast<double>(successes) / n;
    const double z2 = z * z;
    const double denom = 1.0 + z2 / n;
    const double centre = (p + z2 / (2.0 * n)) / denom;
    const double half = z * std::sqrt(p * (1.0 - p) / n + z2 / (4.0 * n * n)) / denom;
    return {centre - half, centre + half};
}

struct MonteCarloReport {
    int trials = 0;
    int errors = 0;
    double error_rate = 0.0;
    WilsonInterval wilson;  // 95%
    std::uint64_t seed = 0;
    bool reference_switched = false;  // noiseless outcome the trials are scored against
};

// Seeded campaign of independent noisy switch attempts; an error is any trial
// whose outcome differs from the noiseless one. Trials run in parallel with
// per-trial streams, so the report is identical for any jobs count.
inline MonteCarloReport monte_carlo_switching(const DeviceConfig& dev, double i_sot,
                                              const SwitchProtocol& protocol,
                                              const IntegratorConfig& cfg, double temperature,
                                              int trials, std::uint64_t seed,
                                              unsigned jobs = 0) {
    if (trials < 1) throw ConfigError("invalid-config: trials must be >= 1");
    MonteCarloReport rep;
    rep.trials = trials;
    rep.seed = seed;

    MagnetizationState ref;
    rep.reference_switched =
        switch_attempt(ref, dev, i_sot, protocol, cfg, ThermalModel::off()).switched;

    const ThermalModel tm = temperature > 0.0 ? ThermalModel::at(temperature)
                                              : ThermalModel::off();
    std::vector<std::uint8_t> wrong(static_cast<std::size_t>(trials), 0);
    parallel_for(wrong.size(), jobs, [&](std::size_t t) {
        MagnetizationState st;
        st.rng = RngStream(seed, 0x4D43ULL, static_cast<std::uint64_t>(t));
        const bool sw = switch_attempt(st, dev, i_sot, protocol, cfg, tm).switched;
        wrong[t] = sw != rep.reference_switched ? 1 : 0;
    });
    for (auto w : wrong) rep.errors += w;
    rep.error_rate = static_cast<double>(rep.errors) / trials;
    rep.wilson = wilson_interval(rep.errors, trials);
    return rep;
}

struct ThroughputPowerSummary {
    std::size_t samples = 0;
    double throughput = 0.0;      // S/s, (n-1)/(t_last - t_first)
    double total_energy = 0.0;    // J
    double total_period = 0.0;    // s
    double average_power = 0.0;   // W, sum(energy)/sum(period)
    int bubbles = 0;
    int role_violations = 0;
};

inline ThroughputPowerSummary throughput_and_power(const std::vector<ConversionRecord>& recs) {
    if (recs.size() < 2)
        throw ConfigError("invalid-config: need at least 2 records for throughput");
    ThroughputPowerSummary s;
    s.samples = recs.size();
    s.throughput = static_cast<double>(recs.size() - 1) /
                   (recs.back().t_start - recs.front().t_start);
    for (const auto& r : recs) {
        s.total_energy += r.energy;
        s.total_period += r.period;
        if (r.bubble) ++s.bubbles;
        for (const auto& e : r.errors)
            if (e.rfind("role-violation", 0) == 0) ++s.role_violations;
    }
    s.average_power = s.total_energy / s.total_period;
    return s;
}

// ---- JSON forms (lossless round trip) ----

inline nlohmann::json to_json(const TransferCurve& c) {
    return {{"thresholds_a", c.thresholds}, {"lsb_a", c.lsb}};
}

inline TransferCurve transfer_curve_from_json(const nlohmann::json& j) {
    TransferCurve c;
    const auto& t = j.at("thresholds_a");
    for (int k = 0; k < kQuantizerLevels; ++k) c.thresholds[k] = t.at(k).get<double>();
    c.lsb = j.at("lsb_a").get<double>();
    return c;
}

inline nlohmann::json to_json(const DnlInlReport& r) {
    return {{"dnl_lsb", r.dnl},     {"inl_lsb", r.inl},
            {"dnl_min", r.dnl_min}, {"dnl_max", r.dnl_max},
            {"inl_min", r.inl_min}, {"inl_max", r.inl_max},
            {"lsb_a", r.lsb},       {"telescoping_ok", r.telescoping_ok}};
}

inline DnlInlReport dnl_inl_report_from_json(const nlohmann::json& j) {
    DnlInlReport r;
    for (int k = 0; k + 1 < kQuantizerLevels; ++k) r.dnl[k] = j.at("dnl_lsb").at(k).get<double>();
    for (int k = 0; k < kQuantizerLevels; ++k) r.inl[k] = j.at("inl_lsb").at(k).get<double>();
    r.dnl_min = j.at("dnl_min").get<double>();
    r.dnl_max = j.at("dnl_max").get<double>();
    r.inl_min = j.at("inl_min").get<double>();
    r.inl_max = j.at("inl_max").get<double>();
    r.lsb = j.at("lsb_a").get<double>();
    r.telescoping_ok = j.at("telescoping_ok").get<bool>();
    return r;
}

inline nlohmann::json to_json(const MonteCarloReport& r) {
    return {{"trials", r.trials},
            {"errors", r.errors},
            {"error_rate", r.error_rate},
            {"wilson95", {{"low", r.wilson.low}, {"high", r.wilson.high}}},
            {"seed", r.seed},
            {"reference_switched", r.reference_switched}};
}

inline MonteCarloReport monte_carlo_report_from_json(const nlohmann::json& j) {
    MonteCarloReport r;
    r.trials = j.at("trials").get<int>();
    r.errors = j.at("errors").get<int>();
    r.error_rate = j.at("error_rate").get<double>();
    r.wilson.low = j.at("wilson95").at("low").get<double>();
    r.wilson.high = j.at("wilson95").at("high").get<double>();
    r.seed = j.at("seed").get<std::uint64_t>();
    r.reference_switched = j.at("reference_switched").get<bool>();
    return r;
}

inline nlohmann::json to_json(const ThroughputPowerSummary& s) {
    return {{"samples", s.samples},
            {"throughput_sps", s.throughput},
            {"total_energy_j", s.total_energy},
            {"total_period_s", s.total_period},
            {"average_power_w", s.average_power},
            {"bubbles", s.bubbles},
            {"role_violations", s.role_violations}};
}

}  // namespace spinadc
