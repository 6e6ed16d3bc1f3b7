#pragma once

#include <vector>

namespace spinadc {

// Drive values at one instant.
struct DriveSample {
    double i_sot = 0.0;  // heavy-metal current, A (+x direction)
    double v_mtj = 0.0;  // MTJ bias voltage, V
    double i_stt = 0.0;  // STT current through the stack, A (+ favours AP)
};

struct Pulse {
    double t_on = 0.0;   // s, inclusive
    double t_off = 0.0;  // s, exclusive
    double level = 0.0;
};

// Piecewise-constant schedule for the three drive channels. Levels of
// overlapping pulses on one channel add.
struct DriveWaveform {
    std::vector<Pulse> sot;
    std::vector<Pulse> bias;
    std::vector<Pulse> stt;

    static double channel_at(const std::vector<Pulse>& pulses, double t) {
        double v = 0.0;
        for (const Pulse& p : pulses)
            if (t >= p.t_on && t < p.t_off) v += p.level;
        return v;
    }

    DriveSample at(double t) const {
        return {channel_at(sot, t), channel_at(bias, t), channel_at(stt, t)};
    }

    // Same schedule delayed by dt; used to replay a pulse group on a state
    // whose clock is already running.
    DriveWaveform shifted(double dt) const {
        DriveWaveform w = *this;
        for (auto* ch : {&w.sot, &w.bias, &w.stt})
            for (Pulse& p : *ch) {
                p.t_on += dt;
                p.t_off += dt;
            }
        return w;
    }

    bool empty() const { return sot.empty() && bias.empty() && stt.empty(); }
};

}  // namespace spinadc
