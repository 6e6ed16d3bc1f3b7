#pragma once

#include <cstdio>
#include <cstring>
#include <fstream>
#include <string>
#include <vector>

#include "spinadc/errors.hpp"
#include "spinadc/llg.hpp"
#include "spinadc/pipeline.hpp"

namespace spinadc {

// Shortest exact round-trip representation; reruns with the same inputs
// produce byte-identical files.
inline std::string fmt_double(double v) {
    std::string best;
    for (int prec = 1; prec <= 17; ++prec) {
        char buf[40];
        std::snprintf(buf, sizeof buf, "%.*g", prec, v);
        double back = 0.0;
        std::sscanf(buf, "%lf", &back);
        if (back == v && (best.empty() || std::strlen(buf) < best.size())) best = buf;
    }
    return best;
}

class CsvWriter {
public:
    CsvWriter(const std::string& path, const std::vector<std::string>& header) : out_(path) {
        if (!out_) throw SimError("cannot open output file: " + path);
        for (std::size_t i = 0; i < header.size(); ++i)
            out_ << (i ? "," : "") << header[i];
        out_ << "\n";
        columns_ = header.size();
    }

    void row(const std::vector<std::string>& cells) {
        if (cells.size() != columns_) throw SimError("csv row width mismatch");
        for (std::size_t i = 0; i < cells.size(); ++i)
            out_ << (i ? "," : "") << cells[i];
        out_ << "\n";
    }

private:
    std::ofstream out_;
    std::size_t columns_ = 0;
};

inline void write_trajectory_csv(const std::string& path, const Trajectory& traj) {
    CsvWriter csv(path, {"t_s", "mx", "my", "mz"});
    for (std::size_t i = 0; i < traj.t.size(); ++i)
        csv.row({fmt_double(traj.t[i]), fmt_double(traj.m[i].x), fmt_double(traj.m[i].y),
                 fmt_double(traj.m[i].z)});
}

inline void write_conversion_log_csv(const std::string& path,
                                     const std::vector<ConversionRecord>& records) {
    CsvWriter csv(path,
                  {"t_start_s", "input_a", "thermo", "binary", "bubbles", "energy_j", "errors"});
    for (const auto& r : records) {
        std::string errs;
        for (std::size_t i = 0; i < r.errors.size(); ++i)
            errs += (i ? ";" : "") + r.errors[i];
        csv.row({fmt_double(r.t_start), fmt_double(r.input), r.thermo.to_string(),
                 std::to_string(r.binary), r.bubble ? "1" : "0", fmt_double(r.energy), errs});
    }
}

}  // namespace spinadc
