#pragma once

// Behavioral model of the variable-phi quantizer front-end and its power.

#include <array>
#include <cmath>
#include <cstddef>

#include "ajscc/errors.hpp"

namespace ajscc {

/// One of the four supported steps; stages = 1 + log2(1/phi).
class PhiSetting {
public:
    static constexpr std::array<double, 4> supported{1.0, 0.5, 0.25, 0.125};

    explicit PhiSetting(double phi) : phi_(phi) {
        for (std::size_t i = 0; i < supported.size(); ++i) {
            if (phi == supported[i]) {
                stages_ = static_cast<int>(i) + 1;
                return;
            }
        }
        throw ConfigError("PhiSetting: phi must be one of 1, 0.5, 0.25, 0.125");
    }

    [[nodiscard]] double phi() const noexcept { return phi_; }
    [[nodiscard]] int stages() const noexcept { return stages_; }

private:
    double phi_;
    int stages_ = 1;
};

struct PowerModel {
    double opamp_uW = 8.0;
    double comparator_nW = 12.7;

    void validate() const {
        detail::require<ConfigError>(opamp_uW > 0.0 && comparator_nW > 0.0, "power model terms must be > 0");
    }
};

/// Ideal staged quantizer: integer part kept, fractional residual rounded to
/// the nearest multiple of phi with ties up.
inline double variable_phi_quantize(double v_in, const PhiSetting& s) {
    detail::require<DomainError>(std::isfinite(v_in) && v_in >= 1.0, "variable_phi_quantize: input must be >= 1 V");
    const double whole = std::floor(v_in);
    const double frac = v_in - whole;
    return whole + s.phi() * std::floor(frac / s.phi() + 0.5);
}

/// One OpAmp per stage plus the output adder, plus the comparators; in uW.
inline double power_estimate(const PhiSetting& s, const PowerModel& m = {}, int comparators = 4) {
    m.validate();
    detail::require<DomainError>(comparators >= 0, "power_estimate: comparators must be >= 0");
    return (s.stages() + 1) * m.opamp_uW + comparators * m.comparator_nW / 1000.0;
}

}  // namespace ajscc
