// model.hpp — metamolecule model parameters, Hamiltonian pieces, unit conversions
//
// Everything in the core is adimensional (hbar = 1, oscillator mass M = 1).
// Physical constants appear only in UnitScale.

#pragma once

#include <cmath>
#include <stdexcept>
#include <string>

namespace metamol {

// Subsystem basis ordering used throughout: index 0 is the upper level of the
// two-level Hamiltonian (sigma_z eigenvalue -1), index 1 the lower level
// (sigma_z eigenvalue +1). The default initial state populates index 1.

struct ModelParams {
    double qd_splitting    = 0.8;   // two-level splitting Omega
    double mode_frequency  = 0.5;   // resonant-mode angular frequency omega
    double coupling        = 0.01;  // QD-mode coupling c
    double drive_strength  = 0.1;   // driving amplitude g
    double drive_frequency = 0.05;  // driving angular frequency omega_d
    double beta            = 12.5;  // inverse temperature

    static constexpr double mass = 1.0;  // oscillator inertial parameter
};

struct PhasePoint {
    double R = 0.0;  // mode position
    double P = 0.0;  // mode momentum
};

// Throws std::invalid_argument naming the offending field.
inline const ModelParams& validate(const ModelParams& p) {
    auto finite = [](double x) { return std::isfinite(x); };
    if (!finite(p.qd_splitting) || p.qd_splitting <= 0.0)
        throw std::invalid_argument("qd_splitting must be finite and > 0");
    if (!finite(p.mode_frequency) || p.mode_frequency <= 0.0)
        throw std::invalid_argument("omega must be finite and > 0");
    if (!finite(p.beta) || p.beta <= 0.0)
        throw std::invalid_argument("beta must be finite and > 0");
    if (!finite(p.drive_frequency) || p.drive_frequency < 0.0)
        throw std::invalid_argument("drive_frequency must be finite and >= 0");
    if (!finite(p.coupling))
        throw std::invalid_argument("coupling must be finite");
    if (!finite(p.drive_strength))
        throw std::invalid_argument("drive_strength must be finite");
    return p;
}

// Total sigma_x coefficient Lambda(R,t) = -c R + g cos(omega_d t).
// Shared by both engines so the off-diagonal element has a single definition.
inline double lambda_field(const ModelParams& p, double R, double t) {
    return -p.coupling * R + p.drive_strength * std::cos(p.drive_frequency * t);
}

inline double lambda_dR(const ModelParams& p) { return -p.coupling; }

inline double lambda_dt(const ModelParams& p, double t) {
    return -p.drive_strength * p.drive_frequency * std::sin(p.drive_frequency * t);
}

inline double bath_potential(const ModelParams& p, double R) {
    return 0.5 * p.mode_frequency * p.mode_frequency * R * R;
}

inline double bath_force(const ModelParams& p, double R) {
    return -p.mode_frequency * p.mode_frequency * R;
}

// ---------------------------------------------------------------------------
// Adimensional <-> physical conversions.

constexpr double k_hbar_si = 1.054571817e-34;        // J s
constexpr double k_electron_volt = 1.602176634e-19;  // J

// Reference angular frequency chosen so the adimensional mode frequency 0.5
// corresponds to 8.9e12 Hz, typical of metal nano-particle dynamics.
constexpr double k_default_reference_frequency = 1.78e13;  // s^-1

enum class Quantity { Time, Energy, Frequency };

struct UnitScale {
    double reference_frequency = k_default_reference_frequency;  // omega_a, s^-1

    double to_seconds(double t) const { return t / reference_frequency; }
    double to_joules(double e) const { return e * k_hbar_si * reference_frequency; }
    double to_milli_ev(double e) const { return to_joules(e) / k_electron_volt * 1e3; }
    double to_hertz(double f) const { return f * reference_frequency; }
};

inline UnitScale make_unit_scale(double reference_frequency) {
    if (!(reference_frequency > 0.0))
        throw std::invalid_argument("reference_frequency must be > 0");
    return UnitScale{reference_frequency};
}

inline double to_physical(const UnitScale& u, double q, Quantity kind) {
    switch (kind) {
        case Quantity::Time:      return u.to_seconds(q);
        case Quantity::Energy:    return u.to_joules(q);
        case Quantity::Frequency: return u.to_hertz(q);
    }
    throw std::invalid_argument("unknown quantity kind");
}

inline double from_physical(const UnitScale& u, double q, Quantity kind) {
    switch (kind) {
        case Quantity::Time:      return q * u.reference_frequency;
        case Quantity::Energy:    return q / (k_hbar_si * u.reference_frequency);
        case Quantity::Frequency: return q / u.reference_frequency;
    }
    throw std::invalid_argument("unknown quantity kind");
}

}  // namespace metamol
