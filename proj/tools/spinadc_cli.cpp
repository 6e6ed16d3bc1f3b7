// spinadc: field-free spintronic flash ADC simulator.
//
// Subcommands
//   switch        single-device switching run, trajectory CSV + outcome summary
//   sweep-ic      critical current over a (width, bias) grid, CSV
//   ramp          transfer-curve measurement + DNL/INL report for one architecture
//   montecarlo    seeded thermal switching-error campaign
//   compare-arch  conventional vs interleaved on the same sinusoid
//
// Exit codes: 0 success, 1 simulation error, 2 configuration/usage error.

#include <CLI11.hpp>

#include <cstdlib>
#include <ctime>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <string>
#include <vector>

#include "spinadc/spinadc.hpp"

namespace fs = std::filesystem;
using namespace spinadc;
using nlohmann::json;

namespace {

struct GlobalArgs {
    std::string config_path;
    std::string out_dir;
    std::uint64_t seed = 0;
    bool seed_set = false;
    unsigned jobs = 0;
};

RunConfig resolve_config(const GlobalArgs& g, const std::string& command) {
    RunConfig cfg;
    if (!g.config_path.empty()) cfg = load_run_config(g.config_path);
    if (const char* env = std::getenv("SPINADC_SEED")) {
        char* end = nullptr;
        const unsigned long long v = std::strtoull(env, &end, 10);
        if (end == env || *end != '\0')
            throw ConfigError("SPINADC_SEED is not an integer: " + std::string(env));
        cfg.seed = v;
    }
    if (g.seed_set) cfg.seed = g.seed;  // flag outranks env outranks file
    if (!g.out_dir.empty()) cfg.out_dir = g.out_dir;
    if (cfg.out_dir.empty()) {
        char stamp[32];
        const std::time_t now = std::time(nullptr);
        std::tm tm_utc{};
        gmtime_r(&now, &tm_utc);
        std::strftime(stamp, sizeof stamp, "%Y%m%dT%H%M%SZ", &tm_utc);
        cfg.out_dir = "runs/" + command + "-" + stamp;
    }
    return cfg;
}

fs::path prepare_out_dir(const RunConfig& cfg) {
    fs::path dir(cfg.out_dir);
    fs::create_directories(dir);
    std::ofstream snap(dir / "config.json");
    snap << to_json(cfg).dump(2) << "\n";
    return dir;
}

void write_json(const fs::path& path, const json& j) {
    std::ofstream out(path);
    if (!out) throw SimError("cannot open output file: " + path.string());
    out << j.dump(2) << "\n";
}

const char* state_name(FinalState s) {
    switch (s) {
        case FinalState::parallel: return "P";
        case FinalState::antiparallel: return "AP";
        default: return "precessional";
    }
}

int cmd_switch(const GlobalArgs& g, double i_sot, bool i_sot_set, double v_bias,
               bool v_bias_set, int trials, bool thermal_flag, bool thermal_set) {
    RunConfig cfg = resolve_config(g, "switch");
    if (thermal_set) cfg.thermal_enabled = thermal_flag;
    const fs::path dir = prepare_out_dir(cfg);

    // Default single-shot timing: drive group arrives at 0.7 ns inside a
    // 4 ns window, so the lead-in, in-plane transit and settled state are
    // all visible in the trajectory.
    const SwitchProtocol demo = cfg.protocol.shifted(0.7e-9, 4.0e-9);
    const double drive =
        i_sot_set ? i_sot : 1.5 * critical_current(cfg.device, 0.0);
    const ThermalModel tm = cfg.thermal();

    json summary;
    summary["i_sot_a"] = drive;
    summary["trials"] = trials;
    int switched_count = 0, precessional_count = 0;
    json outcomes = json::array();
    for (int t = 0; t < trials; ++t) {
        MagnetizationState st;
        st.rng = RngStream(cfg.seed, 0x4D43ULL, static_cast<std::uint64_t>(t));
        SwitchOutcome out;
        if (v_bias_set)
            out = switch_attempt(st, cfg.device, drive, v_bias, demo, cfg.integrator, tm);
        else
            out = switch_attempt(st, cfg.device, drive, demo, cfg.integrator, tm);
        char name[64];
        std::snprintf(name, sizeof name, "trajectory_%03d.csv", t);
        write_trajectory_csv((dir / name).string(), out.trajectory);
        switched_count += out.switched ? 1 : 0;
        precessional_count += out.final_state == FinalState::precessional ? 1 : 0;
        json o;
        o["switched"] = out.switched;
        o["final_state"] = state_name(out.final_state);
        o["final_mz"] = out.trajectory.final_mz();
        o["energy_j"] = out.energy;
        if (out.switch_time) o["switch_time_s"] = *out.switch_time;
        outcomes.push_back(o);
    }
    summary["outcomes"] = outcomes;
    summary["switched"] = switched_count;
    summary["precessional"] = precessional_count;
    write_json(dir / "summary.json", summary);
    std::cout << "switch: " << switched_count << "/" << trials << " switched, "
              << precessional_count << " precessional -> " << dir.string() << "\n";
    return 0;
}

int cmd_sweep_ic(const GlobalArgs& g, double w_min_nm, double w_max_nm, int w_steps,
                 double v_min, double v_max, int v_steps) {
    if (w_steps < 1 || v_steps < 1)
        throw ConfigError("invalid-config: sweep needs at least one point per axis");
    RunConfig cfg = resolve_config(g, "sweep-ic");
    const fs::path dir = prepare_out_dir(cfg);

    CsvWriter csv((dir / "ic_sweep.csv").string(), {"width_nm", "vbias_V", "ic_uA"});
    for (int i = 0; i < w_steps; ++i) {
        const double w_nm =
            w_steps == 1 ? w_min_nm : w_min_nm + (w_max_nm - w_min_nm) * i / (w_steps - 1);
        for (int j = 0; j < v_steps; ++j) {
            const double v =
                v_steps == 1 ? v_min : v_min + (v_max - v_min) * j / (v_steps - 1);
            std::string ic_cell = "nan";
            if (w_nm >= 10.0 && w_nm <= 500.0) {
                DeviceConfig dev = cfg.device;
                dev.w_hm = w_nm * 1e-9;
                ic_cell = fmt_double(critical_current(dev, v) * 1e6);
            } else {
                std::cerr << "infeasible-width: " << w_nm << " nm outside [10, 500] nm\n";
            }
            csv.row({fmt_double(w_nm), fmt_double(v), ic_cell});
        }
    }
    std::cout << "sweep-ic -> " << dir.string() << "\n";
    return 0;
}

int cmd_ramp(const GlobalArgs& g, const std::string& arch, int steps_per_bin) {
    RunConfig cfg = resolve_config(g, "ramp");
    if (arch == "conventional")
        cfg.schedule.architecture = Architecture::conventional;
    else if (arch == "interleaved")
        cfg.schedule.architecture = Architecture::interleaved;
    else
        throw ConfigError("invalid-config: --arch must be conventional or interleaved");
    const fs::path dir = prepare_out_dir(cfg);
    const ThermalModel tm = cfg.thermal();

    // full-scale staircase through the pipeline for the conversion log
    const double i_max = cfg.bank_i_max + (cfg.bank_i_max - cfg.bank_i_min) / 6.0;
    std::vector<double> samples;
    for (int i = 0; i < 32; ++i) samples.push_back(i_max * i / 31.0);
    std::vector<ConversionRecord> records;
    if (cfg.schedule.architecture == Architecture::conventional) {
        QuantizerBank bank = cfg.bank();
        const QuantizerBank dummy = cfg.bank(BankRole::dummy);
        records = run_conventional(samples, bank, dummy, cfg.schedule, cfg.protocol,
                                   cfg.comparator, cfg.integrator, tm, cfg.seed);
    } else {
        QuantizerBank bank_a = cfg.bank();
        QuantizerBank bank_b = cfg.bank(BankRole::dummy);
        records = run_interleaved(samples, bank_a, bank_b, cfg.schedule, cfg.protocol,
                                  cfg.comparator, cfg.integrator, tm, cfg.seed);
    }
    write_conversion_log_csv((dir / "conversion_log.csv").string(), records);

    // transfer curve + DNL/INL on the same bank design (noiseless measurement)
    const TransferCurve curve =
        measure_transfer(cfg.bank(), 0.0, i_max, steps_per_bin, cfg.schedule, cfg.protocol,
                         cfg.comparator, cfg.integrator, ThermalModel::off(), cfg.seed);
    const DnlInlReport rep = dnl_inl(curve);

    json out;
    out["architecture"] = arch;
    out["transfer"] = to_json(curve);
    out["dnl_inl"] = to_json(rep);
    out["throughput_power"] = to_json(throughput_and_power(records));
    write_json(dir / "report.json", out);

    std::printf("ramp (%s): DNL [%+.3f, %+.3f] LSB, INL [%+.3f, %+.3f] LSB -> %s\n",
                arch.c_str(), rep.dnl_min, rep.dnl_max, rep.inl_min, rep.inl_max,
                dir.string().c_str());
    if (!rep.telescoping_ok) {
        std::cerr << "report invariant failed: DNL telescoping identity\n";
        return 1;
    }
    return 0;
}

int cmd_montecarlo(const GlobalArgs& g, int trials, double overdrive, double v_bias,
                   bool v_bias_set) {
    RunConfig cfg = resolve_config(g, "montecarlo");
    const fs::path dir = prepare_out_dir(cfg);
    SwitchProtocol protocol = cfg.protocol;
    if (v_bias_set) {
        if (v_bias >= 0.4)
            std::cerr << "warning: v_bias " << v_bias
                      << " V is at or above the 0.4 V deterministic-switching limit\n";
        protocol.v_bias = v_bias;
    }
    const double i_drive = overdrive * critical_current(cfg.device, 0.0);
    const MonteCarloReport rep =
        monte_carlo_switching(cfg.device, i_drive, protocol, cfg.integrator,
                              cfg.thermal_enabled ? cfg.temperature : 300.0, trials, cfg.seed,
                              g.jobs);
    write_json(dir / "montecarlo.json", to_json(rep));
    std::printf("montecarlo: %d/%d errors (rate %.3f, 95%% CI [%.3f, %.3f]) -> %s\n",
                rep.errors, rep.trials, rep.error_rate, rep.wilson.low, rep.wilson.high,
                dir.string().c_str());
    return 0;
}

int cmd_compare_arch(const GlobalArgs& g, int n_samples) {
    if (n_samples < 10)
        throw ConfigError("invalid-config: compare-arch needs at least 10 samples");
    RunConfig cfg = resolve_config(g, "compare-arch");
    const fs::path dir = prepare_out_dir(cfg);
    const ThermalModel tm = cfg.thermal();

    // sampled full-scale sinusoid
    const double full_scale = cfg.bank_i_max + (cfg.bank_i_max - cfg.bank_i_min) / 6.0;
    std::vector<double> samples(static_cast<std::size_t>(n_samples));
    for (int i = 0; i < n_samples; ++i)
        samples[i] =
            0.5 * full_scale * (1.0 + std::sin(2.0 * constants::pi * i / n_samples));

    PhaseSchedule conv_sched = cfg.schedule;
    conv_sched.architecture = Architecture::conventional;
    QuantizerBank bank = cfg.bank();
    QuantizerBank dummy = cfg.bank(BankRole::dummy);
    const auto conv_records = run_conventional(samples, bank, dummy, conv_sched, cfg.protocol,
                                               cfg.comparator, cfg.integrator, tm, cfg.seed);

    PhaseSchedule il_sched = cfg.schedule;
    il_sched.architecture = Architecture::interleaved;
    QuantizerBank bank_a = cfg.bank();
    QuantizerBank bank_b = cfg.bank(BankRole::dummy);
    const auto il_records = run_interleaved(samples, bank_a, bank_b, il_sched, cfg.protocol,
                                            cfg.comparator, cfg.integrator, tm, cfg.seed);

    write_conversion_log_csv((dir / "conventional_log.csv").string(), conv_records);
    write_conversion_log_csv((dir / "interleaved_log.csv").string(), il_records);

    int agree = 0;
    for (int i = 0; i < n_samples; ++i)
        agree += conv_records[i].binary == il_records[i].binary ? 1 : 0;
    const auto conv_tp = throughput_and_power(conv_records);
    const auto il_tp = throughput_and_power(il_records);

    json out;
    out["samples"] = n_samples;
    out["agreement"] = static_cast<double>(agree) / n_samples;
    out["conventional"] = to_json(conv_tp);
    out["interleaved"] = to_json(il_tp);
    out["throughput_ratio"] = il_tp.throughput / conv_tp.throughput;
    out["power_note"] =
        "average power is a calibrated plausibility decomposition (conduction + read + "
        "comparator), not a derived figure";
    write_json(dir / "comparison.json", out);

    std::printf("compare-arch: agreement %.1f%%, conventional %.1f MS/s @ %.1f uW, "
                "interleaved %.1f MS/s @ %.1f uW -> %s\n",
                100.0 * agree / n_samples, conv_tp.throughput * 1e-6,
                conv_tp.average_power * 1e6, il_tp.throughput * 1e-6,
                il_tp.average_power * 1e6, dir.string().c_str());
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Field-free spintronic flash ADC simulator"};
    app.require_subcommand(1);

    GlobalArgs g;
    app.add_option("--config", g.config_path, "JSON run configuration");
    app.add_option("--out", g.out_dir, "output directory (default: runs/<cmd>-<timestamp>)");
    auto* seed_opt = app.add_option("--seed", g.seed, "master seed (outranks SPINADC_SEED)");
    app.add_option("--jobs", g.jobs, "worker threads for campaigns (0 = all cores)");

    auto* sw = app.add_subcommand("switch", "single-device switching run");
    sw->fallthrough();
    double isot = 0.0, vbias = 0.0;
    int trials = 1;
    bool thermal_flag = false;
    auto* isot_opt = sw->add_option("--isot", isot, "SOT drive current, A (default 1.5x Ic)");
    auto* vbias_opt = sw->add_option("--vbias", vbias, "flat MTJ bias override, V");
    sw->add_option("--trials", trials, "number of seeded trials")->check(CLI::PositiveNumber);
    auto* thermal_opt = sw->add_flag("--thermal", thermal_flag, "enable 300 K thermal noise");

    auto* sweep = app.add_subcommand("sweep-ic", "critical current vs width and bias");
    sweep->fallthrough();
    double wmin = 25.0, wmax = 400.0, vmin = 0.0, vmax = 0.4;
    int wsteps = 16, vsteps = 9;
    sweep->add_option("--wmin", wmin, "min width, nm");
    sweep->add_option("--wmax", wmax, "max width, nm");
    sweep->add_option("--wsteps", wsteps, "width points");
    sweep->add_option("--vmin", vmin, "min bias, V");
    sweep->add_option("--vmax", vmax, "max bias, V");
    sweep->add_option("--vsteps", vsteps, "bias points");

    auto* ramp = app.add_subcommand("ramp", "transfer curve + DNL/INL");
    ramp->fallthrough();
    std::string arch = "interleaved";
    int steps_per_bin = 64;
    ramp->add_option("--arch", arch, "conventional | interleaved");
    ramp->add_option("--steps", steps_per_bin, "ramp steps per code bin (>= 64)");

    auto* mc = app.add_subcommand("montecarlo", "thermal switching-error campaign");
    mc->fallthrough();
    int mc_trials = 100;
    double overdrive = 1.2, mc_vbias = 0.0;
    mc->add_option("--trials", mc_trials, "number of trials")->check(CLI::PositiveNumber);
    mc->add_option("--overdrive", overdrive, "drive as a multiple of Ic(0 V)");
    auto* mc_vbias_opt = mc->add_option("--vbias", mc_vbias, "kick-phase bias override, V");

    auto* cmp = app.add_subcommand("compare-arch", "conventional vs interleaved side by side");
    cmp->fallthrough();
    int n_samples = 64;
    cmp->add_option("--samples", n_samples, "sinusoid samples (>= 10)");

    try {
        app.parse(argc, argv);
        g.seed_set = seed_opt->count() > 0;
        if (sw->parsed())
            return cmd_switch(g, isot, isot_opt->count() > 0, vbias,
                              vbias_opt->count() > 0, trials, thermal_flag,
                              thermal_opt->count() > 0);
        if (sweep->parsed()) return cmd_sweep_ic(g, wmin, wmax, wsteps, vmin, vmax, vsteps);
        if (ramp->parsed()) return cmd_ramp(g, arch, steps_per_bin);
        if (mc->parsed())
            return cmd_montecarlo(g, mc_trials, overdrive, mc_vbias, mc_vbias_opt->count() > 0);
        if (cmp->parsed()) return cmd_compare_arch(g, n_samples);
        return 2;
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : 2;
    } catch (const ConfigError& e) {
        std::cerr << "config error: " << e.what() << "\n";
        return 2;
    } catch (const SimError& e) {
        std::cerr << "simulation error: " << e.what() << "\n";
        return 1;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
}
