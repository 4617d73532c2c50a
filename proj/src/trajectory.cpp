#include "metamol/trajectory.hpp"

#include <cmath>
#include <stdexcept>

#include "metamol/adiabatic.hpp"
#include "metamol/parallel.hpp"

namespace metamol {

void validate(const RunSchedule& s) {
    if (!(s.tau > 0.0)) throw std::invalid_argument("pwd_tau must be > 0");
    if (!(s.t_max >= s.tau))
        throw std::invalid_argument("t_max must be >= pwd_tau");
    if (s.n_traj < 1)
        throw std::invalid_argument("pwd_trajectories must be >= 1");
    if (s.output_every < 1)
        throw std::invalid_argument("output stride must be >= 1");
    if (s.blocks < 2) throw std::invalid_argument("pwd_blocks must be >= 2");
    if (!(s.weight_bound > 1.0))
        throw std::invalid_argument("weight bound must be > 1");
}

namespace {

inline double mean_force(const ModelParams& p, double R, double t, int row,
                         int col) {
    const AdiabaticFrame f = frame(p, R, t);
    if (row == col) return row == 0 ? f.f_upper : f.f_lower;
    return 0.5 * (f.f_upper + f.f_lower);
}

}  // namespace

TrajectoryState deterministic_segment(const ModelParams& p, TrajectoryState s,
                                      double tau) {
    // Drive and forces frozen at the segment midpoint time; leapfrog for the
    // bath, phase from the gap at the drift midpoint.
    const double t_mid = s.t + 0.5 * tau;
    const double f0 = mean_force(p, s.x.R, t_mid, s.row, s.col);
    const double p_half = s.x.P + 0.5 * tau * f0;
    const double r_new = s.x.R + tau * p_half / ModelParams::mass;
    const double f1 = mean_force(p, r_new, t_mid, s.row, s.col);
    const double p_new = p_half + 0.5 * tau * f1;

    if (s.row != s.col) {
        const double r_mid = s.x.R + 0.5 * tau * p_half / ModelParams::mass;
        const double gap = frame(p, r_mid, t_mid).gap;
        const double w_pair = s.row == 0 ? gap : -gap;  // E_row - E_col
        s.weight *= std::complex<double>(std::cos(w_pair * tau),
                                         -std::sin(w_pair * tau));
    }
    s.x.R = r_new;
    s.x.P = p_new;
    s.t += tau;
    return s;
}

HopProbabilities hop_probabilities(double coupling_magnitude, double tau) {
    const double x = tau * std::abs(coupling_magnitude);
    HopProbabilities hp;
    hp.reject = 1.0 / (1.0 + x);
    hp.accept = 1.0 - hp.reject;
    return hp;
}

TrajectoryState attempt_field_hop(const ModelParams& p, TrajectoryState s,
                                  RandomStream& rng, double tau) {
    // Acceptance uses the combined magnitude of the two J^t terms (each of
    // size |m|); the flipped slot is then drawn with probability 1/2.
    // Unbiased for (1 + tau J), with accepted hops carrying weight magnitude
    // 1 + 2 tau|m|.
    const double m = temporal_coupling(p, s.x.R, s.t);
    const HopProbabilities hp = hop_probabilities(2.0 * m, tau);
    const double u_branch = rng.uniform();
    const double u_accept = rng.uniform();
    if (u_accept < hp.accept) {
        int& idx = u_branch < 0.5 ? s.row : s.col;
        // flipping away from the lower surface carries +m, from the upper -m
        const double amplitude = idx == 1 ? m : -m;
        idx = 1 - idx;
        s.weight *= 2.0 * tau * amplitude / hp.accept;
    } else {
        s.weight *= 1.0 / hp.reject;
    }
    return s;
}

RawEnsemble::RawEnsemble(int n_outputs, long n_points, int blocks)
    : n_outputs_(n_outputs), n_points_(n_points), blocks_(blocks) {
    if (n_outputs < 1 || n_points < 1)
        throw std::invalid_argument("empty ensemble");
    if (blocks < 1 || blocks > n_points)
        throw std::invalid_argument("block count must be in [1, n_points]");
    sums_.assign(static_cast<std::size_t>(blocks) * n_outputs, Channels{});
}

void RawEnsemble::add(long point, int output_index, const Channels& ch) {
    add_to_block(block_of(point), output_index, ch);
}

void RawEnsemble::add_to_block(int block, int output_index, const Channels& ch) {
    Channels& s =
        sums_[static_cast<std::size_t>(block) * n_outputs_ + output_index];
    s.sx_re += ch.sx_re;
    s.sx_im += ch.sx_im;
    s.sz_re += ch.sz_re;
    s.sz_im += ch.sz_im;
    s.norm_re += ch.norm_re;
    s.norm_im += ch.norm_im;
    s.e_s += ch.e_s;
    s.e_b += ch.e_b;
    s.e_c += ch.e_c;
}

long RawEnsemble::block_size(int b) const {
    // inverse of block_of for the contiguous partition
    const long lo = (static_cast<long>(b) * n_points_ + blocks_ - 1) / blocks_;
    const long hi =
        ((static_cast<long>(b) + 1) * n_points_ + blocks_ - 1) / blocks_;
    return hi - lo;
}

void run_point(const ModelParams& p, const RunSchedule& s, long point,
               RawEnsemble& out) {
    const long n_steps = std::lround(s.t_max / s.tau);
    const BathThermalSpec spec = bath_thermal_spec(p);

    RandomStream sampler(s.seed, static_cast<std::uint64_t>(point) * 5);
    const PhasePoint x0 = sample_phase_point(spec, sampler);
    const Mat2 rho0 = initial_adiabatic_matrix(p, x0.R, s.slot);

    for (int w = 0; w < 4; ++w) {
        const int row0 = w >> 1;
        const int col0 = w & 1;
        const double r0 = rho0(row0, col0);
        if (r0 == 0.0) continue;

        RandomStream rng(s.seed, static_cast<std::uint64_t>(point) * 5 + 1 + w);
        TrajectoryState st{x0, row0, col0, {1.0, 0.0}, 0.0};

        auto record = [&](int k) {
            const AdiabaticFrame f = frame(p, st.x.R, st.t);
            const std::complex<double> cw = r0 * st.weight;
            // observable matrix element (col, row) in the current frame
            Channels ch;
            const Mat2 sx = pauli_in_frame(f, Pauli::X);
            const Mat2 sz = pauli_in_frame(f, Pauli::Z);
            const std::complex<double> vx = cw * sx(st.col, st.row);
            const std::complex<double> vz = cw * sz(st.col, st.row);
            ch.sx_re = vx.real();
            ch.sx_im = vx.imag();
            ch.sz_re = vz.real();
            ch.sz_im = vz.imag();
            if (st.row == st.col) {
                ch.norm_re = cw.real();
                ch.norm_im = cw.imag();
                ch.e_b = (0.5 * st.x.P * st.x.P + bath_potential(p, st.x.R)) *
                         cw.real();
            }
            ch.e_s = -0.5 * p.qd_splitting * vz.real();
            ch.e_c = -p.coupling * st.x.R * vx.real();
            out.add(point, k, ch);
        };

        record(0);
        for (long n = 1; n <= n_steps; ++n) {
            st = deterministic_segment(p, st, s.tau);
            const int before = st.row * 2 + st.col;
            st = attempt_field_hop(p, st, rng, s.tau);
            if (st.row * 2 + st.col != before) ++out.accepted_hops;
            if (std::norm(st.weight) > s.weight_bound * s.weight_bound) {
                ++out.aborted;
                break;
            }
            if (n % s.output_every == 0)
                record(static_cast<int>(n / s.output_every));
        }
    }
}

RawEnsemble run_ensemble(const ModelParams& p, const RunSchedule& s) {
    validate(p);
    validate(s);
    const long n_steps = std::lround(s.t_max / s.tau);
    const int n_outputs = static_cast<int>(n_steps / s.output_every) + 1;
    const int blocks =
        static_cast<int>(std::min<long>(s.blocks, s.n_traj));
    RawEnsemble out(n_outputs, s.n_traj, blocks);

    const int workers = resolve_worker_count(s.workers);
    if (workers <= 1) {
        for (long pt = 0; pt < s.n_traj; ++pt) run_point(p, s, pt, out);
        return out;
    }

    // One worker owns every point of a block, processed in index order, so the
    // reduction is associative with a fixed order for any worker count.
    std::vector<RawEnsemble> partial;
    partial.reserve(workers);
    for (int w = 0; w < workers; ++w)
        partial.emplace_back(n_outputs, s.n_traj, blocks);
    parallel_for(blocks, workers, [&](int b) {
        const long lo = (static_cast<long>(b) * s.n_traj + blocks - 1) / blocks;
        const long hi =
            ((static_cast<long>(b) + 1) * s.n_traj + blocks - 1) / blocks;
        RawEnsemble& mine = partial[static_cast<std::size_t>(b % workers)];
        for (long pt = lo; pt < hi; ++pt) run_point(p, s, pt, mine);
    });
    for (int b = 0; b < blocks; ++b) {
        const RawEnsemble& pe = partial[static_cast<std::size_t>(b % workers)];
        for (int k = 0; k < n_outputs; ++k)
            out.add_to_block(b, k, pe.sum(b, k));
    }
    for (int w = 0; w < workers; ++w) {
        out.aborted += partial[static_cast<std::size_t>(w)].aborted;
        out.accepted_hops += partial[static_cast<std::size_t>(w)].accepted_hops;
    }
    return out;
}

PwdRunResult estimate(const RunSchedule& s, const RawEnsemble& raw) {
    const int n_out = raw.n_outputs();
    const int blocks = raw.blocks();
    if (blocks < 2)
        throw std::invalid_argument(
            "estimate: need >= 2 blocks for standard errors");
    const double n = static_cast<double>(raw.n_points());

    PwdRunResult res;
    res.aborted = raw.aborted;
    res.accepted_hops = raw.accepted_hops;
    TimeSeries& ts = res.series;
    ts.engine = "pwd";

    auto block_stats = [&](int k, auto pick, double& mean, double& err) {
        double total = 0.0;
        for (int b = 0; b < blocks; ++b) total += pick(raw.sum(b, k));
        mean = total / n;
        double var = 0.0;
        for (int b = 0; b < blocks; ++b) {
            const double bm =
                pick(raw.sum(b, k)) / static_cast<double>(raw.block_size(b));
            var += (bm - mean) * (bm - mean);
        }
        err = std::sqrt(var / (static_cast<double>(blocks) *
                               static_cast<double>(blocks - 1)));
    };

    for (int k = 0; k < n_out; ++k) {
        ts.t.push_back(k * s.output_every * s.tau);
        double mean = 0.0, err = 0.0;
        block_stats(k, [](const Channels& c) { return c.sx_re; }, mean, err);
        ts.sx.push_back(mean);
        ts.sx_err.push_back(err);
        block_stats(k, [](const Channels& c) { return c.sz_re; }, mean, err);
        ts.sz.push_back(mean);
        ts.sz_err.push_back(err);
        block_stats(k, [](const Channels& c) { return c.norm_re; }, mean, err);
        res.norm.push_back(mean);
        res.norm_err.push_back(err);
        block_stats(k, [](const Channels& c) { return c.sx_im; }, mean, err);
        res.sx_im.push_back(mean);
        res.sx_im_err.push_back(err);
        block_stats(k, [](const Channels& c) { return c.sz_im; }, mean, err);
        res.sz_im.push_back(mean);
        res.sz_im_err.push_back(err);
        block_stats(k, [](const Channels& c) { return c.e_s; }, mean, err);
        ts.e_s.push_back(mean);
        block_stats(k, [](const Channels& c) { return c.e_b; }, mean, err);
        ts.e_b.push_back(mean);
        block_stats(k, [](const Channels& c) { return c.e_c; }, mean, err);
        ts.e_c.push_back(mean);
        ts.e_total.push_back(ts.e_s.back() + ts.e_b.back() + ts.e_c.back());
    }
    return res;
}

double norm_inflation_bound(const ModelParams& p, const RunSchedule& s,
                            int output_index) {
    const long last_step = static_cast<long>(output_index) * s.output_every;
    double log_growth = 0.0;
    for (long n = 1; n <= last_step; ++n) {
        const double m_max = p.qd_splitting * p.drive_strength *
                             p.drive_frequency *
                             std::abs(std::sin(p.drive_frequency * n * s.tau)) /
                             (p.qd_splitting * p.qd_splitting);
        log_growth += std::log1p(2.0 * s.tau * m_max);
    }
    const double bound = std::expm1(log_growth);
    // once the ensemble samples hops, the block error is the honest yardstick
    const double rare_cap = 20.0 / static_cast<double>(4 * s.n_traj);
    return std::min(bound, rare_cap);
}

PwdRunResult run_pwd(const ModelParams& p, const RunSchedule& s) {
    return estimate(s, run_ensemble(p, s));
}

}  // namespace metamol
