// trajectory.hpp — piece-wise deterministic trajectory engine
//
// Walkers carry one density-matrix element rho^{row,col} in the moving
// adiabatic basis. Each step is a deterministic segment (leapfrog bath update
// under the mean Hellmann-Feynman force, phase exp(-i w_pair tau) from the
// midpoint gap) followed by at most one sampled field-induced transition:
// a hop is accepted with probability 2tau|m|/(1+2tau|m|), m the temporal
// coupling and 2|m| the combined magnitude of the two J terms, the flipped
// index slot is drawn with probability 1/2, and the weights make the step an
// unbiased estimate of (1 + tau J).

#pragma once

#include <complex>
#include <cstdint>
#include <vector>

#include "metamol/model.hpp"
#include "metamol/rng.hpp"
#include "metamol/timeseries.hpp"
#include "metamol/wigner.hpp"

namespace metamol {

struct TrajectoryState {
    PhasePoint x;
    int row = 0;  // adiabatic index pair (0 = upper surface)
    int col = 0;
    std::complex<double> weight{1.0, 0.0};
    double t = 0.0;
};

struct RunSchedule {
    double tau = 0.1;
    double t_max = 100.0;
    int output_every = 1;     // steps between recorded samples
    long n_traj = 100000;     // sampled phase points; each spawns 4 index pairs
    int blocks = 20;          // block count for standard errors
    std::uint64_t seed = 20124;
    double weight_bound = 1e6;
    int workers = 0;
    InitialSlot slot = InitialSlot::Ground;
};

void validate(const RunSchedule& s);

TrajectoryState deterministic_segment(const ModelParams& p, TrajectoryState s,
                                      double tau);

struct HopProbabilities {
    double accept = 0.0;
    double reject = 1.0;  // accept + reject == 1 exactly
};

HopProbabilities hop_probabilities(double coupling_magnitude, double tau);

// Consumes exactly two uniforms (branch, acceptance) regardless of outcome.
TrajectoryState attempt_field_hop(const ModelParams& p, TrajectoryState s,
                                  RandomStream& rng, double tau);

// Per-sample accumulator channels. sx, sz and the norm keep their imaginary
// parts as Hermiticity diagnostics.
struct Channels {
    double sx_re = 0.0, sx_im = 0.0;
    double sz_re = 0.0, sz_im = 0.0;
    double norm_re = 0.0, norm_im = 0.0;
    double e_s = 0.0, e_b = 0.0, e_c = 0.0;
};

// Block sums of per-point contributions; block = point * blocks / n_points,
// so results do not depend on how points are distributed over workers.
class RawEnsemble {
public:
    RawEnsemble(int n_outputs, long n_points, int blocks);

    void add(long point, int output_index, const Channels& ch);
    void add_to_block(int block, int output_index, const Channels& ch);

    int n_outputs() const { return n_outputs_; }
    long n_points() const { return n_points_; }
    int blocks() const { return blocks_; }
    int block_of(long point) const {
        return static_cast<int>(point * blocks_ / n_points_);
    }
    long block_size(int b) const;
    const Channels& sum(int block, int output_index) const {
        return sums_[static_cast<std::size_t>(block) * n_outputs_ + output_index];
    }

    long aborted = 0;
    long accepted_hops = 0;

private:
    int n_outputs_;
    long n_points_;
    int blocks_;
    std::vector<Channels> sums_;
};

struct PwdRunResult {
    TimeSeries series;  // sx, sz with block standard errors; energy channels
    std::vector<double> norm, norm_err;  // identity-observable channel
    std::vector<double> sx_im, sx_im_err;  // imaginary parts of the raw
    std::vector<double> sz_im, sz_im_err;  // accumulators (Hermiticity check)
    long aborted = 0;
    long accepted_hops = 0;
};

// Upper bound on the uncompensated reject-reweighting inflation of the
// identity channel after the outputs' step count: prod(1 + tau |m|_max) - 1
// with |m| <= Omega g omega_d |sin(omega_d t)| / Omega^2. The norm estimator
// deviates from 1 by at most this much while accepted hops are still
// unsampled; once sampling is adequate the block standard error takes over.
double norm_inflation_bound(const ModelParams& p, const RunSchedule& s,
                            int output_index);

// Propagates the index-pair walkers of one sampled phase point and adds their
// contributions to the ensemble.
void run_point(const ModelParams& p, const RunSchedule& s, long point,
               RawEnsemble& out);

RawEnsemble run_ensemble(const ModelParams& p, const RunSchedule& s);

// Block means and standard errors; the time grid is k * output_every * tau.
PwdRunResult estimate(const RunSchedule& s, const RawEnsemble& raw);

PwdRunResult run_pwd(const ModelParams& p, const RunSchedule& s);

}  // namespace metamol
