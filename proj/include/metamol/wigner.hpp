// wigner.hpp — thermal Wigner function of the mode and initial-state helpers

#pragma once

#include <cmath>
#include <stdexcept>

#include "metamol/adiabatic.hpp"
#include "metamol/mat2.hpp"
#include "metamol/model.hpp"
#include "metamol/rng.hpp"

namespace metamol {

// Which subsystem level carries the initial population. Ground is the default;
// Excited is kept as a sensitivity switch.
enum class InitialSlot { Ground, Excited };

struct BathThermalSpec {
    double sigma_R2 = 0.0;   // position variance
    double sigma_P2 = 0.0;   // momentum variance
    double prefactor = 0.0;  // tanh(beta omega / 2) / pi
};

inline BathThermalSpec bath_thermal_spec(const ModelParams& p) {
    const double th = std::tanh(0.5 * p.beta * p.mode_frequency);
    BathThermalSpec s;
    s.sigma_R2 = 1.0 / (2.0 * p.mode_frequency * th);
    s.sigma_P2 = p.mode_frequency / (2.0 * th);
    s.prefactor = th / M_PI;
    return s;
}

inline double bath_wigner_density(const BathThermalSpec& s, const PhasePoint& x) {
    return s.prefactor *
           std::exp(-0.5 * (x.R * x.R / s.sigma_R2 + x.P * x.P / s.sigma_P2));
}

// R then P, independent normal draws.
inline PhasePoint sample_phase_point(const BathThermalSpec& s, RandomStream& rng) {
    PhasePoint x;
    x.R = std::sqrt(s.sigma_R2) * rng.gaussian();
    x.P = std::sqrt(s.sigma_P2) * rng.gaussian();
    return x;
}

// Initial subsystem projector in the subsystem basis: the populated slot is
// index 1 (the lower level) for Ground.
inline Mat2 initial_subsystem_matrix(InitialSlot slot = InitialSlot::Ground) {
    Mat2 m;
    if (slot == InitialSlot::Ground)
        m(1, 1) = 1.0;
    else
        m(0, 0) = 1.0;
    return m;
}

// U^T rho_sub U at (R, t=0): the initial projector expressed in the adiabatic
// basis. Symmetric, trace 1, idempotent.
inline Mat2 initial_adiabatic_matrix(const ModelParams& p, double R,
                                     InitialSlot slot = InitialSlot::Ground) {
    const Mat2 u = basis_matrix(p, R, 0.0);
    return mul(transpose(u), mul(initial_subsystem_matrix(slot), u));
}

}  // namespace metamol
