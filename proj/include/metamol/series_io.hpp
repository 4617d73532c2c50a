// series_io.hpp — textual series format
//
// One row per output time, tab-separated, header row names the columns:
//   t sx sx_err sz sz_err e_s e_b e_c e_total dedt
// Values are printed with 17 significant digits; absent values (grid error
// columns) are empty fields. '#'-prefixed lines carry "key = value" metadata.

#pragma once

#include <string>

#include "metamol/timeseries.hpp"

namespace metamol {

void emit_series(const TimeSeries& series, const std::string& path);

std::string serialize_series(const TimeSeries& series);

TimeSeries load_series(const std::string& path);

TimeSeries parse_series(const std::string& text);

}  // namespace metamol
