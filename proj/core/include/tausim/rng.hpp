#pragma once

#include <cmath>
#include <cstdint>
#include <numbers>
#include <random>

namespace tausim {

/// Deterministic sampling stream. mt19937_64 drives 53-bit uniforms and a
/// hand-rolled Box-Muller transform, so a seed produces the same draws on
/// every platform and standard library (std::normal_distribution makes no
/// such promise). The identifier is recorded in run metadata.
class SampleStream {
public:
    static constexpr const char* algorithm_id = "mt19937_64/canonical53/box-muller-v1";

    explicit SampleStream(std::uint64_t seed) : gen_(seed) {}

    /// Uniform in [0, 1) with 53 random bits.
    double uniform01() {
        return static_cast<double>(gen_() >> 11) * 0x1.0p-53;
    }

    double uniform(double lo, double hi) { return lo + (hi - lo) * uniform01(); }

    double normal(double mean, double sigma) {
        if (have_spare_) {
            have_spare_ = false;
            return mean + sigma * spare_;
        }
        double u1 = uniform01();
        while (u1 <= 0.0) u1 = uniform01();
        const double u2 = uniform01();
        const double r = std::sqrt(-2.0 * std::log(u1));
        const double theta = 2.0 * std::numbers::pi * u2;
        spare_ = r * std::sin(theta);
        have_spare_ = true;
        return mean + sigma * r * std::cos(theta);
    }

private:
    std::mt19937_64 gen_;
    bool have_spare_ = false;
    double spare_ = 0.0;
};

}  // namespace tausim
