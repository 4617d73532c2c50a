// adiabatic.hpp — instantaneous eigenframe of the dressed two-level Hamiltonian
//
// h(R,t) = V_B(R)*I + [[Omega/2, Lambda], [Lambda, -Omega/2]] in the fixed
// subsystem ordering (index 0 = upper level), Lambda = -cR + g cos(omega_d t).
//
// Gauge: real eigenvectors, mixing angle theta = atan2(2*Lambda, Omega),
//        U = [[cos(theta/2), -sin(theta/2)], [sin(theta/2), cos(theta/2)]],
// columns are the upper/lower adiabatic states. With Omega > 0, theta stays in
// (-pi/2, pi/2), so the gauge is continuous with no unwrapping.
//
// In this gauge the nonadiabatic couplings are exactly
//   <d(upper)/dt | lower> = +theta_t / 2,
//   <upper | d/dR | lower> = -theta_R / 2,
// both antisymmetric under index swap.

#pragma once

#include <cmath>
#include <stdexcept>
#include <utility>

#include "metamol/mat2.hpp"
#include "metamol/model.hpp"

namespace metamol {

struct AdiabaticFrame {
    double e_upper = 0.0;   // E_1(R,t)
    double e_lower = 0.0;   // E_2(R,t)
    double gap = 0.0;       // E_1 - E_2 = Bohr frequency of the (1,2) pair
    double theta = 0.0;     // mixing angle
    double sin_theta = 0.0;
    double cos_theta = 0.0;
    double d12 = 0.0;       // spatial coupling <1|d/dR|2>
    double tdot12 = 0.0;    // temporal coupling <d1/dt|2>
    double f_upper = 0.0;   // Hellmann-Feynman force on the upper surface
    double f_lower = 0.0;
};

inline AdiabaticFrame frame(const ModelParams& p, double R, double t) {
    const double omega0 = p.qd_splitting;
    const double lam = lambda_field(p, R, t);
    const double gap = std::sqrt(omega0 * omega0 + 4.0 * lam * lam);
    const double vb = bath_potential(p, R);
    const double fb = bath_force(p, R);

    AdiabaticFrame f;
    f.gap = gap;
    f.e_upper = vb + 0.5 * gap;
    f.e_lower = vb - 0.5 * gap;
    f.theta = std::atan2(2.0 * lam, omega0);
    f.sin_theta = 2.0 * lam / gap;
    f.cos_theta = omega0 / gap;

    const double gap2 = gap * gap;
    f.d12 = -omega0 * lambda_dR(p) / gap2;
    f.tdot12 = omega0 * lambda_dt(p, t) / gap2;

    // dE_{1,2}/dR = omega^2 R +- 2 Lambda Lambda_R / gap
    const double slope = 2.0 * lam * lambda_dR(p) / gap;
    f.f_upper = fb - slope;
    f.f_lower = fb + slope;
    return f;
}

inline std::pair<double, double> eigenvalues(const ModelParams& p, double R, double t) {
    const AdiabaticFrame f = frame(p, R, t);
    return {f.e_upper, f.e_lower};
}

// <d(alpha)/dt | beta> for (alpha,beta) = (1,2); the (2,1) element is the negative.
inline double temporal_coupling(const ModelParams& p, double R, double t) {
    return frame(p, R, t).tdot12;
}

// d_12(R,t) = <1|d/dR|2>; d_21 = -d_12.
inline double spatial_coupling(const ModelParams& p, double R, double t) {
    return frame(p, R, t).d12;
}

// level: 1 = upper surface, 2 = lower surface.
inline double hf_force(const ModelParams& p, double R, double t, int level) {
    const AdiabaticFrame f = frame(p, R, t);
    if (level == 1) return f.f_upper;
    if (level == 2) return f.f_lower;
    throw std::invalid_argument("hf_force: level must be 1 or 2");
}

// Eigenbasis matrix; columns are the upper and lower adiabatic states in the
// subsystem basis.
inline Mat2 basis_matrix(const AdiabaticFrame& f) {
    // cos_theta > 0 for Omega > 0, so cos(theta/2) is safely away from zero
    // and sin(theta/2) = sin(theta) / (2 cos(theta/2)) avoids the cancellation
    // in sqrt((1 - cos)/2) near theta = 0.
    const double ch = std::sqrt(0.5 * (1.0 + f.cos_theta));
    const double sh = f.sin_theta / (2.0 * ch);
    return Mat2{{ch, -sh, sh, ch}};
}

inline Mat2 basis_matrix(const ModelParams& p, double R, double t) {
    return basis_matrix(frame(p, R, t));
}

enum class Pauli { X, Z };

// U^T sigma U in the adiabatic basis, in closed form.
inline Mat2 pauli_in_frame(const AdiabaticFrame& f, Pauli which) {
    switch (which) {
        case Pauli::X:
            return Mat2{{f.sin_theta, f.cos_theta, f.cos_theta, -f.sin_theta}};
        case Pauli::Z:
            return Mat2{{-f.cos_theta, f.sin_theta, f.sin_theta, f.cos_theta}};
    }
    throw std::invalid_argument("pauli_in_frame: unknown operator");
}

inline Mat2 pauli_in_frame(const ModelParams& p, double R, double t, Pauli which) {
    return pauli_in_frame(frame(p, R, t), which);
}

// Magnitudes of the neglected bath-induced transition terms, (P/M) d_12 and
// (gap/2) d_12. Diagnostic only; no dynamics attached.
inline std::pair<double, double> bath_transition_diagnostic(const ModelParams& p,
                                                            double R, double P,
                                                            double t) {
    const AdiabaticFrame f = frame(p, R, t);
    return {P / ModelParams::mass * f.d12, 0.5 * f.gap * f.d12};
}

}  // namespace metamol
