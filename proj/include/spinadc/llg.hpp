#pragma once

#include <cmath>
#include <cstdint>
#include <string>
#include <vector>

#include "spinadc/constants.hpp"
#include "spinadc/device.hpp"
#include "spinadc/drive.hpp"
#include "spinadc/errors.hpp"
#include "spinadc/rng.hpp"
#include "spinadc/thermal.hpp"
#include "spinadc/vec3.hpp"

namespace spinadc {

// Field components in A/m. pma and vcma are the split of one uniaxial term
// with Ki_eff(Vb); demag uses the thin-film tensor diag(0,0,1).
struct EffectiveField {
    Vec3 h_pma;
    Vec3 h_vcma;
    Vec3 h_demag;
    Vec3 h_inplane;
    Vec3 h_thermal;

    Vec3 total() const { return h_pma + h_vcma + h_demag + h_inplane + h_thermal; }
};

// Damping-like torques, rad/s. The spin polarization of the SOT term is set
// by the heavy-metal current direction (+x current -> sigma = -y); the STT
// polarizer is the reference layer along +z.
struct TorqueTerms {
    Vec3 tau_sot;
    Vec3 tau_stt;

    Vec3 total() const { return tau_sot + tau_stt; }
};

enum class Scheme { auto_select, deterministic_rk4, stochastic_heun };

struct IntegratorConfig {
    double dt = 1.0e-12;  // s; hard stability ceiling at 2 ps
    Scheme scheme = Scheme::auto_select;
    bool renormalize = true;
    int record_stride = 1;  // trajectory sample decimation
};

inline void validate(const IntegratorConfig& cfg) {
    if (cfg.dt <= 0.0) throw ConfigError("invalid-config: dt must be positive");
    if (cfg.dt > 2.0e-12) throw ConfigError("invalid-config: dt above the 2 ps stability limit");
    if (cfg.record_stride < 1) throw ConfigError("invalid-config: record_stride must be >= 1");
}

struct MagnetizationState {
    Vec3 m = {0.0, 0.0, -1.0};
    double t = 0.0;
    RngStream rng;
};

struct Trajectory {
    std::vector<double> t;
    std::vector<Vec3> m;
    double energy = 0.0;          // conduction energy over the run, J
    double max_norm_drift = 0.0;  // max | |m|-1 | before renormalization

    double final_mz() const { return m.empty() ? 0.0 : m.back().z; }

    // Last m_z sign change, linearly interpolated; NaN if none.
    double last_zero_crossing() const {
        double t_cross = std::nan("");
        for (std::size_t i = 1; i < m.size(); ++i) {
            const double a = m[i - 1].z, b = m[i].z;
            if ((a <= 0.0 && b > 0.0) || (a >= 0.0 && b < 0.0)) {
                const double f = a / (a - b);
                t_cross = t[i - 1] + f * (t[i] - t[i - 1]);
            }
        }
        return t_cross;
    }
};

inline EffectiveField assemble_effective_field(const Vec3& m, const DeviceConfig& dev,
                                               const DriveSample& drive,
                                               const Vec3& h_thermal) {
    using namespace constants;
    const double ms = ms_of_bias(dev, drive.v_mtj);
    const double ki_th = ki_of_bias(dev, drive.v_mtj);
    const double dki_vcma = dev.xi_vcma * drive.v_mtj / dev.t_ox;
    const double per_ki = 2.0 / (mu0 * ms * dev.t_fl);

    EffectiveField f;
    f.h_pma = Vec3{0.0, 0.0, per_ki * ki_th * m.z};
    f.h_vcma = Vec3{0.0, 0.0, -per_ki * dki_vcma * m.z};
    f.h_demag = Vec3{0.0, 0.0, -ms * m.z};
    f.h_inplane = dev.h_inplane;
    f.h_thermal = h_thermal;
    return f;
}

inline TorqueTerms compute_torques(const Vec3& m, const DeviceConfig& dev,
                                   const DriveSample& drive) {
    using namespace constants;
    TorqueTerms tau;
    if (drive.i_sot == 0.0 && drive.i_stt == 0.0) return tau;

    const double ms = ms_of_bias(dev, drive.v_mtj);
    const double per_j = hbar / (2.0 * q_electron * mu0 * ms * dev.t_fl);

    if (drive.i_sot != 0.0) {
        const double j_hm = drive.i_sot / (dev.w_hm * dev.t_hm);
        const double a_sot = gamma0 * per_j * dev.theta_sh * j_hm;
        const Vec3 sigma{0.0, -1.0, 0.0};
        tau.tau_sot = a_sot * m.cross(sigma.cross(m));
    }
    if (drive.i_stt != 0.0) {
        const double j_mtj = drive.i_stt / dev.area();
        const double a_stt = gamma0 * per_j * dev.eta_stt * j_mtj;
        const Vec3 pol{0.0, 0.0, 1.0};
        tau.tau_stt = a_stt * m.cross(pol.cross(m));
    }
    return tau;
}

// Explicit (Landau-Lifshitz) form of the Gilbert equation with damping-like
// torques, solved for dm/dt:
//   dm/dt = -gamma0/(1+a^2) [ m x H + a m x (m x H) ] + [ tau + a m x tau ]/(1+a^2)
// The result is orthogonal to m for unit m.
inline Vec3 llg_rhs(const Vec3& m, const EffectiveField& field, const TorqueTerms& torque,
                    double alpha) {
    const Vec3 h = field.total();
    const Vec3 tau = torque.total();
    const Vec3 mxh = m.cross(h);
    const double inv = 1.0 / (1.0 + alpha * alpha);
    return (-constants::gamma0 * (mxh + alpha * m.cross(mxh)) + tau + alpha * m.cross(tau)) * inv;
}

namespace detail {

struct StepContext {
    DriveSample drive;
    Vec3 h_thermal;
};

inline Vec3 rhs_at(const Vec3& m, const DeviceConfig& dev, const StepContext& ctx) {
    const EffectiveField f = assemble_effective_field(m, dev, ctx.drive, ctx.h_thermal);
    const TorqueTerms tau = compute_torques(m, dev, ctx.drive);
    return llg_rhs(m, f, tau, dev.alpha);
}

inline Vec3 check_and_renormalize(const Vec3& m, bool renormalize, double& max_drift,
                                  double t_now) {
    const double drift = std::fabs(m.norm() - 1.0);
    if (drift > max_drift) max_drift = drift;
    if (drift > 1.0e-3)
        throw SimError("instability-detected: |m| drift " + std::to_string(drift) + " at t = " +
                       std::to_string(t_now) + " s; reduce dt");
    return renormalize ? m.normalized() : m;
}

}  // namespace detail

// Integrate the macrospin over [state.t, t_end]. Deterministic runs use RK4;
// with thermal noise enabled the scheme is Heun with the fluctuation field
// held fixed across predictor and corrector (Stratonovich-consistent) and the
// predictor renormalized. Drive values are frozen over each step, so phase
// edges should sit on the dt grid. Conduction energy (SOT track, bias
// leakage, STT current) accumulates alongside.
inline Trajectory integrate(MagnetizationState& state, const DeviceConfig& dev,
                            const DriveWaveform& waveform, const IntegratorConfig& cfg,
                            const ThermalModel& thermal, double t_end) {
    validate(cfg);
    validate(dev);
    if (t_end <= state.t) throw ConfigError("invalid-config: t_end must exceed state time");

    const double dt = cfg.dt;
    const auto n_steps = static_cast<std::int64_t>(std::llround((t_end - state.t) / dt));
    const bool use_heun = cfg.scheme == Scheme::stochastic_heun ||
                          (cfg.scheme == Scheme::auto_select && thermal.enabled);

    Trajectory traj;
    traj.t.reserve(static_cast<std::size_t>(n_steps / cfg.record_stride) + 2);
    traj.m.reserve(static_cast<std::size_t>(n_steps / cfg.record_stride) + 2);
    traj.t.push_back(state.t);
    traj.m.push_back(state.m);

    const double t_start = state.t;

    const double r_hm = dev.hm_resistance();

    for (std::int64_t i = 0; i < n_steps; ++i) {
        detail::StepContext ctx;
        ctx.drive = waveform.at(state.t);

        const double t_kelvin = thermal.effective_temperature(dev, ctx.drive.v_mtj);
        if (t_kelvin > 0.0) {
            const double ms = ms_of_bias(dev, ctx.drive.v_mtj);
            ctx.h_thermal = sample_thermal_field(dev, ms, t_kelvin, dt, state.rng);
        }

        // conduction energy at the step's operating point
        const double r_mtj = resistance(dev, state.m);
        traj.energy += (ctx.drive.i_sot * ctx.drive.i_sot * r_hm +
                        ctx.drive.v_mtj * ctx.drive.v_mtj / r_mtj +
                        ctx.drive.i_stt * ctx.drive.i_stt * r_mtj) *
                       dt;

        Vec3 m_next;
        if (use_heun) {
            const Vec3 k1 = detail::rhs_at(state.m, dev, ctx);
            Vec3 pred = state.m + k1 * dt;
            pred = pred.normalized();
            const Vec3 k2 = detail::rhs_at(pred, dev, ctx);
            m_next = state.m + (k1 + k2) * (0.5 * dt);
        } else {
            const Vec3 k1 = detail::rhs_at(state.m, dev, ctx);
            const Vec3 k2 = detail::rhs_at(state.m + k1 * (0.5 * dt), dev, ctx);
            const Vec3 k3 = detail::rhs_at(state.m + k2 * (0.5 * dt), dev, ctx);
            const Vec3 k4 = detail::rhs_at(state.m + k3 * dt, dev, ctx);
            m_next = state.m + (k1 + 2.0 * k2 + 2.0 * k3 + k4) * (dt / 6.0);
        }

        state.m = detail::check_and_renormalize(m_next, cfg.renormalize, traj.max_norm_drift,
                                                state.t);
        state.t = t_start + static_cast<double>(i + 1) * dt;

        if ((i + 1) % cfg.record_stride == 0 || i + 1 == n_steps) {
            traj.t.push_back(state.t);
            traj.m.push_back(state.m);
        }
    }
    return traj;
}

}  // namespace spinadc
