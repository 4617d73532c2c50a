// grid.hpp — phase-space-grid reference engine
//
// Method of lines for the four coupled fields eta11, eta22, Re eta21, Im eta21
// on a rectangular (R,P) lattice: 4th-order central differences in phase space,
// fixed-step Cash-Karp RK5 in time. The off-diagonal fields carry the free
// subsystem rotation factored out, rho21 = eta21 * exp(i Omega t).

#pragma once

#include <cstdint>
#include <functional>
#include <vector>

#include "metamol/model.hpp"
#include "metamol/timeseries.hpp"
#include "metamol/wigner.hpp"

namespace metamol {

struct GridGeometry {
    double extent_R = 6.0;  // domain [-extent_R, extent_R]
    double extent_P = 6.0;
    double dR = 0.1;
    double dP = 0.1;

    int n_R() const { return node_count(extent_R, dR); }
    int n_P() const { return node_count(extent_P, dP); }
    double r_at(int i) const { return -extent_R + i * dR; }
    double p_at(int j) const { return -extent_P + j * dP; }
    double cell_area() const { return dR * dP; }

    static int node_count(double extent, double spacing) {
        return static_cast<int>(2.0 * extent / spacing + 1e-9) + 1;
    }
};

void validate(const GridGeometry& g);

// Lattice fields stored with a two-cell zero halo so the 5-point stencils are
// branch-free; the halo also encodes the boundary closure (fields vanish
// outside the domain).
class GridState {
public:
    enum Field { Pop1 = 0, Pop2 = 1, CohRe = 2, CohIm = 3 };

    explicit GridState(const GridGeometry& g);

    const GridGeometry& geometry() const { return geom_; }
    double time = 0.0;

    double& at(Field f, int i, int j) { return data_[index(f, i, j)]; }
    double at(Field f, int i, int j) const { return data_[index(f, i, j)]; }

    // padded flat storage, used as the ODE state vector
    std::vector<double>& raw() { return data_; }
    const std::vector<double>& raw() const { return data_; }

    std::size_t index(Field f, int i, int j) const {
        return static_cast<std::size_t>(f) * field_stride_ +
               static_cast<std::size_t>(i + 2) * row_stride_ +
               static_cast<std::size_t>(j + 2);
    }
    std::size_t field_stride() const { return field_stride_; }
    std::size_t row_stride() const { return row_stride_; }

private:
    GridGeometry geom_;
    std::size_t row_stride_;    // padded row length
    std::size_t field_stride_;  // padded nodes per field
    std::vector<double> data_;
};

enum class Axis { R, P };

// 4th-order central first derivative of a row-major n_r x n_p field, with the
// field taken as zero outside the lattice. Exact for polynomials up to
// degree 4 in the interior.
std::vector<double> fd4(const std::vector<double>& f, int n_r, int n_p,
                        Axis axis, double delta);

// Time derivatives of all four fields; pure function of (state, t).
void grid_rhs(const ModelParams& p, const GridGeometry& g, double t,
              const std::vector<double>& state, std::vector<double>& dstate);

// Generic fixed-step Cash-Karp RK5 on a flat state vector. The embedded
// 4th-order difference is returned as a diagnostic only.
class CashKarpStepper {
public:
    using Rhs = std::function<void(double, const std::vector<double>&,
                                   std::vector<double>&)>;

    explicit CashKarpStepper(std::size_t dim);

    // advances y from t to t+tau in place; returns max|y5 - y4|
    double step(const Rhs& rhs, double t, double tau, std::vector<double>& y);

private:
    std::vector<double> k_[6];
    std::vector<double> ytmp_;
};

struct GridObservables {
    double trace = 0.0;
    double sx = 0.0;
    double sz = 0.0;
    double e_s = 0.0;
    double e_b = 0.0;
    double e_c = 0.0;
};

GridObservables grid_observables(const ModelParams& p, const GridState& s);

// Integrated |fields| over the outermost two node rings; validity monitor for
// the truncated domain.
double boundary_mass(const GridState& s);

// eta22 = thermal Wigner density, everything else zero (Ground slot; the
// Excited slot populates eta11 instead). Throws GuardError if the domain is
// too small for the thermal state.
GridState initial_grid_state(const ModelParams& p, const GridGeometry& g,
                             InitialSlot slot = InitialSlot::Ground,
                             double boundary_tol = 1e-5);

struct GridRunOptions {
    GridGeometry geometry;
    double tau = 0.001;
    double t_max = 100.0;
    double output_dt = 0.1;
    double boundary_tol = 1e-5;  // max boundary-ring fraction of total mass
    InitialSlot slot = InitialSlot::Ground;
    int workers = 0;
};

struct GridRunResult {
    TimeSeries series;
    double max_embedded_error = 0.0;
    double max_boundary_fraction = 0.0;
    double max_trace_drift = 0.0;  // max |trace - trace(0)| over the run
    long steps = 0;
};

GridRunResult run_grid(const ModelParams& p, const GridRunOptions& opt);

}  // namespace metamol
