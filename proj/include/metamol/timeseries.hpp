// timeseries.hpp — sampled observables shared by both engines

#pragma once

#include <map>
#include <string>
#include <vector>

namespace metamol {

struct TimeSeries {
    std::vector<double> t;
    std::vector<double> sx, sx_err;  // err vectors are empty for the grid engine
    std::vector<double> sz, sz_err;
    std::vector<double> e_s, e_b, e_c, e_total;
    std::vector<double> dedt;  // filled by analysis::energy_rate

    std::string engine;  // "pwd" or "grid"
    std::map<std::string, std::string> meta;

    std::size_t size() const { return t.size(); }
    bool has_errors() const { return !sx_err.empty(); }
};

}  // namespace metamol
