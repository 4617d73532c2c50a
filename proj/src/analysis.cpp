#include "metamol/analysis.hpp"

#include <algorithm>
#include <cmath>
#include <complex>
#include <stdexcept>

namespace metamol {

std::vector<double> energy_rate(const std::vector<double>& t,
                                const std::vector<double>& e) {
    const std::size_t n = t.size();
    if (n != e.size()) throw std::invalid_argument("energy_rate: size mismatch");
    if (n < 3) throw std::invalid_argument("energy_rate: need >= 3 samples");
    std::vector<double> r(n);
    r[0] = (e[1] - e[0]) / (t[1] - t[0]);
    for (std::size_t k = 1; k + 1 < n; ++k)
        r[k] = (e[k + 1] - e[k - 1]) / (t[k + 1] - t[k - 1]);
    r[n - 1] = (e[n - 1] - e[n - 2]) / (t[n - 1] - t[n - 2]);
    return r;
}

void fill_energy_rate(TimeSeries& series) {
    series.dedt = energy_rate(series.t, series.e_total);
}

namespace {

std::pair<std::size_t, std::size_t> window_indices(const std::vector<double>& t,
                                                   double t0, double t1) {
    std::size_t lo = 0;
    while (lo < t.size() && t[lo] < t0 - 1e-12) ++lo;
    std::size_t hi = lo;
    while (hi < t.size() && t[hi] <= t1 + 1e-12) ++hi;
    return {lo, hi};
}

}  // namespace

std::vector<SpectralPeak> spectrum(const std::vector<double>& t,
                                   const std::vector<double>& y,
                                   double t_min, double t_max, int max_peaks) {
    if (t.size() != y.size()) throw std::invalid_argument("spectrum: size mismatch");
    const auto [lo, hi] = window_indices(t, t_min, t_max);
    const std::size_t n = hi - lo;
    if (n < 64) throw std::invalid_argument("spectrum: window must hold >= 64 samples");
    const double h = (t[hi - 1] - t[lo]) / static_cast<double>(n - 1);

    double mean = 0.0;
    for (std::size_t i = lo; i < hi; ++i) mean += y[i];
    mean /= static_cast<double>(n);

    std::vector<double> w(n);
    double wsum = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        w[i] = 0.5 * (1.0 - std::cos(2.0 * M_PI * static_cast<double>(i) /
                                     static_cast<double>(n - 1)));
        wsum += w[i];
    }

    // 4x zero-padded spectrum for sub-bin peak localization
    const std::size_t pad = 4;
    const std::size_t n_bins = pad * n / 2;
    std::vector<double> mag(n_bins + 1, 0.0);
    for (std::size_t k = 1; k <= n_bins; ++k) {
        std::complex<double> acc{0.0, 0.0};
        const double arg = -2.0 * M_PI * static_cast<double>(k) /
                           static_cast<double>(pad * n);
        for (std::size_t i = 0; i < n; ++i) {
            const double ph = arg * static_cast<double>(i);
            acc += (y[lo + i] - mean) * w[i] *
                   std::complex<double>(std::cos(ph), std::sin(ph));
        }
        mag[k] = std::abs(acc);
    }

    const double d_omega =
        2.0 * M_PI / (static_cast<double>(pad * n) * h);
    std::vector<SpectralPeak> peaks;
    for (std::size_t k = 1; k + 1 <= n_bins; ++k) {
        const double prev = k >= 2 ? mag[k - 1] : 0.0;
        if (!(mag[k] > prev && mag[k] >= mag[k + 1])) continue;
        double delta = 0.0;
        const double denom = prev - 2.0 * mag[k] + mag[k + 1];
        if (denom < 0.0) delta = 0.5 * (prev - mag[k + 1]) / denom;
        delta = std::clamp(delta, -0.5, 0.5);
        const double amp = mag[k] - 0.25 * (prev - mag[k + 1]) * delta;
        peaks.push_back(SpectralPeak{
            d_omega * (static_cast<double>(k) + delta),
            2.0 * amp / wsum,
        });
    }
    std::sort(peaks.begin(), peaks.end(),
              [](const SpectralPeak& a, const SpectralPeak& b) {
                  return a.amplitude > b.amplitude;
              });
    if (static_cast<int>(peaks.size()) > max_peaks) peaks.resize(max_peaks);
    return peaks;
}

IntervalStats regime_stats(const std::vector<double>& t,
                           const std::vector<double>& y, double t0, double t1) {
    if (t.size() != y.size())
        throw std::invalid_argument("regime_stats: size mismatch");
    const auto [lo, hi] = window_indices(t, t0, t1);
    if (lo >= hi) throw std::invalid_argument("regime_stats: empty interval");
    double sum = 0.0;
    double mn = y[lo], mx = y[lo];
    for (std::size_t i = lo; i < hi; ++i) {
        sum += y[i];
        mn = std::min(mn, y[i]);
        mx = std::max(mx, y[i]);
    }
    return IntervalStats{sum / static_cast<double>(hi - lo), 0.5 * (mx - mn)};
}

const std::vector<double>& channel(const TimeSeries& s, const std::string& name) {
    if (name == "sx") return s.sx;
    if (name == "sz") return s.sz;
    if (name == "e_s") return s.e_s;
    if (name == "e_b") return s.e_b;
    if (name == "e_c") return s.e_c;
    if (name == "e_total") return s.e_total;
    if (name == "dedt") return s.dedt;
    throw std::invalid_argument("unknown channel: " + name);
}

CompareMetrics compare(const TimeSeries& a, const TimeSeries& b,
                       const std::string& channel_name) {
    if (a.size() != b.size())
        throw std::invalid_argument("compare: series lengths differ");
    for (std::size_t i = 0; i < a.size(); ++i)
        if (std::abs(a.t[i] - b.t[i]) > 1e-9)
            throw std::invalid_argument("compare: time grids differ");
    const auto& ya = channel(a, channel_name);
    const auto& yb = channel(b, channel_name);
    if (ya.size() != a.size() || yb.size() != b.size())
        throw std::invalid_argument("compare: channel missing");

    CompareMetrics m;
    double sq = 0.0;
    double mn = ya[0], mx = ya[0];
    for (std::size_t i = 0; i < ya.size(); ++i) {
        const double d = ya[i] - yb[i];
        sq += d * d;
        m.max_abs = std::max(m.max_abs, std::abs(d));
        mn = std::min(mn, ya[i]);
        mx = std::max(mx, ya[i]);
    }
    m.rmse = std::sqrt(sq / static_cast<double>(ya.size()));
    m.range = mx - mn;
    const double denom = m.range > 0.0 ? m.range : 1.0;
    m.rmse_normalized = m.rmse / denom;
    m.max_abs_normalized = m.max_abs / denom;
    return m;
}

std::vector<double> moving_average(const std::vector<double>& t,
                                   const std::vector<double>& y,
                                   double half_width) {
    const std::size_t n = t.size();
    std::vector<double> out(n);
    std::size_t lo = 0, hi = 0;
    double sum = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        while (hi < n && t[hi] <= t[i] + half_width + 1e-12) sum += y[hi++];
        while (lo < n && t[lo] < t[i] - half_width - 1e-12) sum -= y[lo++];
        out[i] = sum / static_cast<double>(hi - lo);
    }
    return out;
}

std::vector<double> zero_crossing_times(const std::vector<double>& t,
                                        const std::vector<double>& y) {
    std::vector<double> out;
    for (std::size_t i = 1; i < y.size(); ++i) {
        if (y[i - 1] == 0.0) continue;
        if ((y[i - 1] < 0.0) != (y[i] < 0.0)) {
            const double f = y[i - 1] / (y[i - 1] - y[i]);
            out.push_back(t[i - 1] + f * (t[i] - t[i - 1]));
        }
    }
    return out;
}

std::vector<double> sliding_amplitude(const std::vector<double>& t,
                                      const std::vector<double>& y,
                                      double half_width) {
    const std::size_t n = t.size();
    std::vector<double> out(n);
    std::size_t lo = 0, hi = 0;
    for (std::size_t i = 0; i < n; ++i) {
        while (hi < n && t[hi] <= t[i] + half_width + 1e-12) ++hi;
        while (lo < n && t[lo] < t[i] - half_width - 1e-12) ++lo;
        double mn = y[lo], mx = y[lo];
        for (std::size_t j = lo; j < hi; ++j) {
            mn = std::min(mn, y[j]);
            mx = std::max(mx, y[j]);
        }
        out[i] = 0.5 * (mx - mn);
    }
    return out;
}

}  // namespace metamol
