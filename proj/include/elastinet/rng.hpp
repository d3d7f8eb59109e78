#pragma once

#include "elastinet/types.hpp"

#include <cmath>
#include <cstdint>
#include <random>

namespace elastinet {

/// Standard normal sampler with a fully specified stream: mt19937_64 plus an
/// explicit Box-Muller transform. std::normal_distribution is not pinned down
/// by the standard, so using it would make seeded experiments differ across
/// standard libraries.
class NormalSampler {
public:
    explicit NormalSampler(std::uint64_t seed) : eng_(seed) {}

    double operator()() {
        if (have_spare_) {
            have_spare_ = false;
            return spare_;
        }
        // 53-bit mantissa draws; u1 is kept strictly positive so log(u1) is finite.
        const double u1 = (static_cast<double>(eng_() >> 11) + 1.0) * 0x1p-53;
        const double u2 = static_cast<double>(eng_() >> 11) * 0x1p-53;
        const double radius = std::sqrt(-2.0 * std::log(u1));
        const double angle = 2.0 * M_PI * u2;
        spare_ = radius * std::sin(angle);
        have_spare_ = true;
        return radius * std::cos(angle);
    }

    Vector vector(Eigen::Index n) {
        Vector out(n);
        for (Eigen::Index i = 0; i < n; ++i) out[i] = (*this)();
        return out;
    }

private:
    std::mt19937_64 eng_;
    double spare_ = 0.0;
    bool have_spare_ = false;
};

} // namespace elastinet
