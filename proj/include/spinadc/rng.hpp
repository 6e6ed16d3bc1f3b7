#pragma once

#include <cmath>
#include <cstdint>
#include <random>

#include "spinadc/constants.hpp"
#include "spinadc/vec3.hpp"

namespace spinadc {

namespace detail {
// splitmix64 finalizer, used to derive well-separated stream seeds.
inline std::uint64_t mix64(std::uint64_t z) {
    z += 0x9e3779b97f4a7c15ULL;
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
}
}  // namespace detail

// Seeded random stream. Gaussian draws use an explicit Box-Muller transform
// instead of std::normal_distribution so sequences are identical on every
// standard library. Independent streams are derived from (master seed,
// stream ids); trial/device/sample indices go into the ids, which keeps
// parallel campaigns reproducible regardless of thread count.
class RngStream {
public:
    explicit RngStream(std::uint64_t seed = 0) : engine_(detail::mix64(seed)) {}

    RngStream(std::uint64_t master, std::uint64_t id_a, std::uint64_t id_b = 0)
        : engine_(detail::mix64(detail::mix64(master) ^ detail::mix64(id_a ^ detail::mix64(id_b)))) {}

    // uniform in [0, 1)
    double uniform() {
        return static_cast<double>(engine_() >> 11) * 0x1.0p-53;
    }

    double gaussian() {
        double u1 = uniform();
        const double u2 = uniform();
        if (u1 < 1e-300) u1 = 1e-300;
        return std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * constants::pi * u2);
    }

    Vec3 gaussian_vec3() {
        const double a = gaussian();
        const double b = gaussian();
        const double c = gaussian();
        return {a, b, c};
    }

private:
    std::mt19937_64 engine_;
};

}  // namespace spinadc
