// analysis.hpp — post-processing shared by both engines

#pragma once

#include <string>
#include <vector>

#include "metamol/timeseries.hpp"

namespace metamol {

// Central differences on the output grid, one-sided at the endpoints.
std::vector<double> energy_rate(const std::vector<double>& t,
                                const std::vector<double>& e);

// Fills series.dedt from e_total.
void fill_energy_rate(TimeSeries& series);

struct SpectralPeak {
    double omega = 0.0;      // angular frequency
    double amplitude = 0.0;  // cosine-equivalent amplitude
};

// Mean-detrended, Hann-windowed DFT with quadratic peak interpolation.
// Returns local maxima ranked by amplitude, strongest first.
std::vector<SpectralPeak> spectrum(const std::vector<double>& t,
                                   const std::vector<double>& y,
                                   double t_min, double t_max,
                                   int max_peaks = 8);

struct IntervalStats {
    double mean = 0.0;
    double amplitude = 0.0;  // (max - min) / 2
};

IntervalStats regime_stats(const std::vector<double>& t,
                           const std::vector<double>& y, double t0, double t1);

struct CompareMetrics {
    double rmse = 0.0;
    double max_abs = 0.0;
    double range = 0.0;  // channel range of the first series
    double rmse_normalized = 0.0;
    double max_abs_normalized = 0.0;
};

const std::vector<double>& channel(const TimeSeries& s, const std::string& name);

// Requires identical time grids (both engines emit at the same output step).
CompareMetrics compare(const TimeSeries& a, const TimeSeries& b,
                       const std::string& channel_name);

// Boxcar mean over [t-half_width, t+half_width] per sample.
std::vector<double> moving_average(const std::vector<double>& t,
                                   const std::vector<double>& y,
                                   double half_width);

// Times where y changes sign, linearly interpolated.
std::vector<double> zero_crossing_times(const std::vector<double>& t,
                                        const std::vector<double>& y);

// (max - min)/2 of y over the sliding window [t-half_width, t+half_width].
std::vector<double> sliding_amplitude(const std::vector<double>& t,
                                      const std::vector<double>& y,
                                      double half_width);

}  // namespace metamol
