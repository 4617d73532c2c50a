#include "metamol/grid.hpp"

#include <cmath>
#include <cstddef>
#include <stdexcept>

#ifdef _OPENMP
#include <omp.h>
#endif

#include "metamol/errors.hpp"
#include "metamol/parallel.hpp"

namespace metamol {

void validate(const GridGeometry& g) {
    if (!(g.dR > 0.0) || !(g.dP > 0.0))
        throw std::invalid_argument("grid spacings must be > 0");
    if (!(g.extent_R > 0.0) || !(g.extent_P > 0.0))
        throw std::invalid_argument("grid extents must be > 0");
    if (g.n_R() < 5 || g.n_P() < 5)
        throw std::invalid_argument("grid needs at least 5 nodes per axis");
}

GridState::GridState(const GridGeometry& g) : geom_(g) {
    validate(g);
    row_stride_ = static_cast<std::size_t>(g.n_P()) + 4;
    field_stride_ = (static_cast<std::size_t>(g.n_R()) + 4) * row_stride_;
    data_.assign(4 * field_stride_, 0.0);
}

std::vector<double> fd4(const std::vector<double>& f, int n_r, int n_p,
                        Axis axis, double delta) {
    if (f.size() != static_cast<std::size_t>(n_r) * n_p)
        throw std::invalid_argument("fd4: field size does not match lattice");
    if ((axis == Axis::R ? n_r : n_p) < 5)
        throw std::invalid_argument("fd4: need at least 5 nodes along the axis");
    const double inv = 1.0 / (12.0 * delta);
    auto get = [&](int i, int j) -> double {
        if (i < 0 || i >= n_r || j < 0 || j >= n_p) return 0.0;
        return f[static_cast<std::size_t>(i) * n_p + j];
    };
    std::vector<double> out(f.size());
    for (int i = 0; i < n_r; ++i) {
        for (int j = 0; j < n_p; ++j) {
            const double d =
                axis == Axis::R
                    ? get(i - 2, j) - 8.0 * get(i - 1, j) + 8.0 * get(i + 1, j) -
                          get(i + 2, j)
                    : get(i, j - 2) - 8.0 * get(i, j - 1) + 8.0 * get(i, j + 1) -
                          get(i, j + 2);
            out[static_cast<std::size_t>(i) * n_p + j] = d * inv;
        }
    }
    return out;
}

// Field equations, with w21 = -Omega the retained off-diagonal rotation:
//   d.eta11 = (-2cR + 2G) Im[rho21] - L eta11 - c dP(Re[rho21])
//   d.eta22 = (+2cR - 2G) Im[rho21] - L eta22 - c dP(Re[rho21])
//   d.Re21  = (-cR + G)(eta11 - eta22) sin(w21 t) - L Re21 - (c/2) cos(w21 t) dP(eta11 + eta22)
//   d.Im21  = (+cR - G)(eta11 - eta22) cos(w21 t) - L Im21 - (c/2) sin(w21 t) dP(eta11 + eta22)
// where Im[rho21] = -Re21 sin(w21 t) + Im21 cos(w21 t) and
//       Re[rho21] =  Re21 cos(w21 t) + Im21 sin(w21 t),
// L = P dR - omega^2 R dP.
void grid_rhs(const ModelParams& p, const GridGeometry& g, double t,
              const std::vector<double>& state, std::vector<double>& dstate) {
    const int n_r = g.n_R();
    const int n_p = g.n_P();
    const std::size_t rs = static_cast<std::size_t>(n_p) + 4;
    const std::size_t fs = (static_cast<std::size_t>(n_r) + 4) * rs;
    if (state.size() != 4 * fs || dstate.size() != 4 * fs)
        throw std::invalid_argument("grid_rhs: state size mismatch");

    const double w21 = -p.qd_splitting;
    const double cosw = std::cos(w21 * t);
    const double sinw = std::sin(w21 * t);
    const double drive = p.drive_strength * std::cos(p.drive_frequency * t);
    const double c = p.coupling;
    const double w2 = p.mode_frequency * p.mode_frequency;
    const double inv_dR = 1.0 / (12.0 * g.dR);
    const double inv_dP = 1.0 / (12.0 * g.dP);

    const double* u = state.data();            // eta11
    const double* v = state.data() + fs;       // eta22
    const double* a = state.data() + 2 * fs;   // Re eta21
    const double* b = state.data() + 3 * fs;   // Im eta21
    double* du = dstate.data();
    double* dv = dstate.data() + fs;
    double* da = dstate.data() + 2 * fs;
    double* db = dstate.data() + 3 * fs;

#ifdef _OPENMP
#pragma omp parallel for schedule(static)
#endif
    for (int i = 0; i < n_r; ++i) {
        const double R = g.r_at(i);
        const std::size_t row = static_cast<std::size_t>(i + 2) * rs + 2;
        for (int j = 0; j < n_p; ++j) {
            const double P = g.p_at(j);
            const std::size_t n = row + static_cast<std::size_t>(j);

            auto ddr = [&](const double* f) {
                return (f[n - 2 * rs] - 8.0 * f[n - rs] + 8.0 * f[n + rs] -
                        f[n + 2 * rs]) *
                       inv_dR;
            };
            auto ddp = [&](const double* f) {
                return (f[n - 2] - 8.0 * f[n - 1] + 8.0 * f[n + 1] - f[n + 2]) *
                       inv_dP;
            };

            const double dp_u = ddp(u);
            const double dp_v = ddp(v);
            const double dp_a = ddp(a);
            const double dp_b = ddp(b);

            const double lu = P * ddr(u) - w2 * R * dp_u;
            const double lv = P * ddr(v) - w2 * R * dp_v;
            const double la = P * ddr(a) - w2 * R * dp_a;
            const double lb = P * ddr(b) - w2 * R * dp_b;

            const double im21 = -a[n] * sinw + b[n] * cosw;  // Im rho21
            const double dp_re21 = cosw * dp_a + sinw * dp_b;
            const double diff = u[n] - v[n];
            const double dp_sum = dp_u + dp_v;
            const double src = 2.0 * (-c * R + drive) * im21;

            du[n] = src - lu - c * dp_re21;
            dv[n] = -src - lv - c * dp_re21;
            da[n] = (-c * R + drive) * diff * sinw - la -
                    0.5 * c * cosw * dp_sum;
            db[n] = (c * R - drive) * diff * cosw - lb -
                    0.5 * c * sinw * dp_sum;
        }
    }
}

namespace {

// Cash-Karp tableau
constexpr double kA21 = 1.0 / 5.0;
constexpr double kA31 = 3.0 / 40.0, kA32 = 9.0 / 40.0;
constexpr double kA41 = 3.0 / 10.0, kA42 = -9.0 / 10.0, kA43 = 6.0 / 5.0;
constexpr double kA51 = -11.0 / 54.0, kA52 = 5.0 / 2.0, kA53 = -70.0 / 27.0,
                 kA54 = 35.0 / 27.0;
constexpr double kA61 = 1631.0 / 55296.0, kA62 = 175.0 / 512.0,
                 kA63 = 575.0 / 13824.0, kA64 = 44275.0 / 110592.0,
                 kA65 = 253.0 / 4096.0;
constexpr double kC2 = 1.0 / 5.0, kC3 = 3.0 / 10.0, kC4 = 3.0 / 5.0, kC5 = 1.0,
                 kC6 = 7.0 / 8.0;
constexpr double kB1 = 37.0 / 378.0, kB3 = 250.0 / 621.0, kB4 = 125.0 / 594.0,
                 kB6 = 512.0 / 1771.0;
constexpr double kD1 = kB1 - 2825.0 / 27648.0;
constexpr double kD3 = kB3 - 18575.0 / 48384.0;
constexpr double kD4 = kB4 - 13525.0 / 55296.0;
constexpr double kD5 = -277.0 / 14336.0;
constexpr double kD6 = kB6 - 1.0 / 4.0;

}  // namespace

CashKarpStepper::CashKarpStepper(std::size_t dim) {
    for (auto& k : k_) k.assign(dim, 0.0);
    ytmp_.assign(dim, 0.0);
}

double CashKarpStepper::step(const Rhs& rhs, double t, double tau,
                             std::vector<double>& y) {
    const std::size_t n = y.size();
    const double* yp = y.data();
    double* tmp = ytmp_.data();
    double* k1 = k_[0].data();
    double* k2 = k_[1].data();
    double* k3 = k_[2].data();
    double* k4 = k_[3].data();
    double* k5 = k_[4].data();
    double* k6 = k_[5].data();

    rhs(t, y, k_[0]);
#ifdef _OPENMP
#pragma omp parallel for schedule(static)
#endif
    for (std::ptrdiff_t i = 0; i < static_cast<std::ptrdiff_t>(n); ++i)
        tmp[i] = yp[i] + tau * kA21 * k1[i];
    rhs(t + kC2 * tau, ytmp_, k_[1]);

#ifdef _OPENMP
#pragma omp parallel for schedule(static)
#endif
    for (std::ptrdiff_t i = 0; i < static_cast<std::ptrdiff_t>(n); ++i)
        tmp[i] = yp[i] + tau * (kA31 * k1[i] + kA32 * k2[i]);
    rhs(t + kC3 * tau, ytmp_, k_[2]);

#ifdef _OPENMP
#pragma omp parallel for schedule(static)
#endif
    for (std::ptrdiff_t i = 0; i < static_cast<std::ptrdiff_t>(n); ++i)
        tmp[i] = yp[i] + tau * (kA41 * k1[i] + kA42 * k2[i] + kA43 * k3[i]);
    rhs(t + kC4 * tau, ytmp_, k_[3]);

#ifdef _OPENMP
#pragma omp parallel for schedule(static)
#endif
    for (std::ptrdiff_t i = 0; i < static_cast<std::ptrdiff_t>(n); ++i)
        tmp[i] = yp[i] + tau * (kA51 * k1[i] + kA52 * k2[i] + kA53 * k3[i] +
                                kA54 * k4[i]);
    rhs(t + kC5 * tau, ytmp_, k_[4]);

#ifdef _OPENMP
#pragma omp parallel for schedule(static)
#endif
    for (std::ptrdiff_t i = 0; i < static_cast<std::ptrdiff_t>(n); ++i)
        tmp[i] = yp[i] + tau * (kA61 * k1[i] + kA62 * k2[i] + kA63 * k3[i] +
                                kA64 * k4[i] + kA65 * k5[i]);
    rhs(t + kC6 * tau, ytmp_, k_[5]);

    double err = 0.0;
    double* yw = y.data();
#ifdef _OPENMP
#pragma omp parallel for schedule(static) reduction(max : err)
#endif
    for (std::ptrdiff_t i = 0; i < static_cast<std::ptrdiff_t>(n); ++i) {
        yw[i] += tau * (kB1 * k1[i] + kB3 * k3[i] + kB4 * k4[i] + kB6 * k6[i]);
        const double e = tau * (kD1 * k1[i] + kD3 * k3[i] + kD4 * k4[i] +
                                kD5 * k5[i] + kD6 * k6[i]);
        err = std::max(err, std::abs(e));
    }
    return err;
}

GridObservables grid_observables(const ModelParams& p, const GridState& s) {
    const GridGeometry& g = s.geometry();
    const int n_r = g.n_R();
    const int n_p = g.n_P();
    const double w21 = -p.qd_splitting;
    const double cosw = std::cos(w21 * s.time);
    const double sinw = std::sin(w21 * s.time);

    double sum_u = 0.0, sum_v = 0.0, sum_hb = 0.0;
    double sum_re21 = 0.0, sum_r_re21 = 0.0;
    for (int i = 0; i < n_r; ++i) {
        const double R = g.r_at(i);
        for (int j = 0; j < n_p; ++j) {
            const double P = g.p_at(j);
            const double u = s.at(GridState::Pop1, i, j);
            const double v = s.at(GridState::Pop2, i, j);
            const double re21 = cosw * s.at(GridState::CohRe, i, j) +
                                sinw * s.at(GridState::CohIm, i, j);
            sum_u += u;
            sum_v += v;
            sum_hb += (0.5 * P * P + bath_potential(p, R)) * (u + v);
            sum_re21 += re21;
            sum_r_re21 += R * re21;
        }
    }
    const double cell = g.cell_area();
    GridObservables o;
    o.trace = (sum_u + sum_v) * cell;
    o.sx = 2.0 * sum_re21 * cell;
    o.sz = (sum_v - sum_u) * cell;
    o.e_s = 0.5 * p.qd_splitting * (sum_u - sum_v) * cell;
    o.e_b = sum_hb * cell;
    o.e_c = -2.0 * p.coupling * sum_r_re21 * cell;
    return o;
}

double boundary_mass(const GridState& s) {
    const GridGeometry& g = s.geometry();
    const int n_r = g.n_R();
    const int n_p = g.n_P();
    double sum = 0.0;
    auto node = [&](int i, int j) {
        for (int f = 0; f < 4; ++f)
            sum += std::abs(s.at(static_cast<GridState::Field>(f), i, j));
    };
    for (int i = 0; i < n_r; ++i) {
        const bool edge_row = i < 2 || i >= n_r - 2;
        for (int j = 0; j < n_p; ++j) {
            if (edge_row || j < 2 || j >= n_p - 2) node(i, j);
        }
    }
    return sum * g.cell_area();
}

GridState initial_grid_state(const ModelParams& p, const GridGeometry& g,
                             InitialSlot slot, double boundary_tol) {
    validate(p);
    GridState s(g);
    const BathThermalSpec spec = bath_thermal_spec(p);
    const GridState::Field pop =
        slot == InitialSlot::Ground ? GridState::Pop2 : GridState::Pop1;
    double mass = 0.0;
    for (int i = 0; i < g.n_R(); ++i) {
        for (int j = 0; j < g.n_P(); ++j) {
            const double w =
                bath_wigner_density(spec, PhasePoint{g.r_at(i), g.p_at(j)});
            s.at(pop, i, j) = w;
            mass += w;
        }
    }
    mass *= g.cell_area();
    const double ring = boundary_mass(s);
    if (ring > boundary_tol * std::max(mass, 1e-300))
        throw GuardError("boundary_mass: grid too small for the thermal state");
    if (std::abs(mass - 1.0) > 1e-4)
        throw GuardError("initial lattice mass deviates from 1 by more than 1e-4");
    return s;
}

GridRunResult run_grid(const ModelParams& p, const GridRunOptions& opt) {
    validate(p);
    validate(opt.geometry);
    if (!(opt.tau > 0.0)) throw std::invalid_argument("grid_tau must be > 0");
    const long per_out = std::lround(opt.output_dt / opt.tau);
    if (per_out < 1 || std::abs(per_out * opt.tau - opt.output_dt) > 1e-9)
        throw std::invalid_argument("output_dt must be a multiple of grid_tau");
    const long n_out = std::lround(opt.t_max / opt.output_dt);
    if (n_out < 1) throw std::invalid_argument("t_max must be >= output_dt");

#ifdef _OPENMP
    omp_set_num_threads(resolve_worker_count(opt.workers));
#endif

    GridState s = initial_grid_state(p, opt.geometry, opt.slot, opt.boundary_tol);
    CashKarpStepper stepper(s.raw().size());
    const GridGeometry g = opt.geometry;
    auto rhs = [&p, &g](double t, const std::vector<double>& y,
                        std::vector<double>& dy) { grid_rhs(p, g, t, y, dy); };

    GridRunResult res;
    res.series.engine = "grid";
    double trace0 = 0.0;

    auto record = [&](double t_nominal) {
        const GridObservables o = grid_observables(p, s);
        if (!std::isfinite(o.trace) || !std::isfinite(o.sx) ||
            !std::isfinite(o.sz))
            throw GuardError("grid instability: non-finite observables");
        if (res.series.t.empty())
            trace0 = o.trace;
        else
            res.max_trace_drift =
                std::max(res.max_trace_drift, std::abs(o.trace - trace0));
        const double frac = boundary_mass(s) / std::max(o.trace, 1e-300);
        res.max_boundary_fraction = std::max(res.max_boundary_fraction, frac);
        if (frac > opt.boundary_tol)
            throw GuardError("boundary_mass: edge density exceeds tolerance");
        res.series.t.push_back(t_nominal);
        res.series.sx.push_back(o.sx);
        res.series.sz.push_back(o.sz);
        res.series.e_s.push_back(o.e_s);
        res.series.e_b.push_back(o.e_b);
        res.series.e_c.push_back(o.e_c);
        res.series.e_total.push_back(o.e_s + o.e_b + o.e_c);
    };

    record(0.0);
    for (long k = 1; k <= n_out; ++k) {
        for (long n = 0; n < per_out; ++n) {
            const double t = ((k - 1) * per_out + n) * opt.tau;
            const double err = stepper.step(rhs, t, opt.tau, s.raw());
            res.max_embedded_error = std::max(res.max_embedded_error, err);
            ++res.steps;
        }
        s.time = k * opt.output_dt;
        record(s.time);
    }
    return res;
}

}  // namespace metamol
