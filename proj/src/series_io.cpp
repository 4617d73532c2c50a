#include "metamol/series_io.hpp"

#include <cstdio>
#include <fstream>
#include <sstream>
#include <vector>

#include "metamol/errors.hpp"

namespace metamol {

namespace {

std::string fmt(double v) {
    char buf[32];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return buf;
}

std::string trim(const std::string& s) {
    const auto b = s.find_first_not_of(" \t\r");
    if (b == std::string::npos) return "";
    const auto e = s.find_last_not_of(" \t\r");
    return s.substr(b, e - b + 1);
}

std::vector<std::string> split_tabs(const std::string& line) {
    std::vector<std::string> out;
    std::size_t start = 0;
    while (true) {
        const auto pos = line.find('\t', start);
        if (pos == std::string::npos) {
            out.push_back(line.substr(start));
            break;
        }
        out.push_back(line.substr(start, pos - start));
        start = pos + 1;
    }
    return out;
}

}  // namespace

std::string serialize_series(const TimeSeries& series) {
    std::ostringstream os;
    os << "# metamol-series v1\n";
    os << "# engine = " << series.engine << "\n";
    for (const auto& [key, value] : series.meta)
        os << "# " << key << " = " << value << "\n";
    os << "t\tsx\tsx_err\tsz\tsz_err\te_s\te_b\te_c\te_total\tdedt\n";
    const bool errs = series.has_errors();
    const bool rate = !series.dedt.empty();
    for (std::size_t i = 0; i < series.size(); ++i) {
        os << fmt(series.t[i]) << '\t' << fmt(series.sx[i]) << '\t'
           << (errs ? fmt(series.sx_err[i]) : "") << '\t' << fmt(series.sz[i])
           << '\t' << (errs ? fmt(series.sz_err[i]) : "") << '\t'
           << fmt(series.e_s[i]) << '\t' << fmt(series.e_b[i]) << '\t'
           << fmt(series.e_c[i]) << '\t' << fmt(series.e_total[i]) << '\t'
           << (rate ? fmt(series.dedt[i]) : "") << '\n';
    }
    return os.str();
}

void emit_series(const TimeSeries& series, const std::string& path) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw ConfigError("cannot open for writing: " + path);
    out << serialize_series(series);
    if (!out) throw ConfigError("write failed: " + path);
}

TimeSeries parse_series(const std::string& text) {
    TimeSeries s;
    std::istringstream is(text);
    std::string line;
    std::vector<std::string> header;
    int line_no = 0;

    auto parse_header = [&](const std::string& h) {
        header = split_tabs(h);
        for (auto& name : header) name = trim(name);
    };

    std::vector<std::vector<double>> columns;
    std::vector<std::vector<bool>> present;

    while (std::getline(is, line)) {
        ++line_no;
        if (line.empty() || trim(line).empty()) continue;
        if (line[0] == '#') {
            const std::string body = trim(line.substr(1));
            const auto eq = body.find('=');
            if (eq != std::string::npos) {
                const std::string key = trim(body.substr(0, eq));
                const std::string value = trim(body.substr(eq + 1));
                if (key == "engine")
                    s.engine = value;
                else if (!key.empty())
                    s.meta[key] = value;
            }
            continue;
        }
        if (header.empty()) {
            parse_header(line);
            columns.assign(header.size(), {});
            present.assign(header.size(), {});
            continue;
        }
        const auto cells = split_tabs(line);
        if (cells.size() != header.size())
            throw ConfigError("series line " + std::to_string(line_no) +
                              ": expected " + std::to_string(header.size()) +
                              " columns, got " + std::to_string(cells.size()));
        for (std::size_t c = 0; c < cells.size(); ++c) {
            const std::string cell = trim(cells[c]);
            if (cell.empty()) {
                columns[c].push_back(0.0);
                present[c].push_back(false);
                continue;
            }
            try {
                columns[c].push_back(std::stod(cell));
            } catch (const std::exception&) {
                throw ConfigError("series line " + std::to_string(line_no) +
                                  ": bad number '" + cell + "'");
            }
            present[c].push_back(true);
        }
    }
    if (header.empty()) throw ConfigError("series file has no header row");

    auto take = [&](const std::string& name, std::vector<double>& dst,
                    bool required) {
        for (std::size_t c = 0; c < header.size(); ++c) {
            if (header[c] != name) continue;
            bool any = false;
            for (const bool b : present[c]) any = any || b;
            if (any) dst = columns[c];
            return;
        }
        if (required) throw ConfigError("series file missing column: " + name);
    };

    take("t", s.t, true);
    for (std::size_t k = 1; k < s.t.size(); ++k)
        if (!(s.t[k] > s.t[k - 1]))
            throw ConfigError("series time grid is not strictly increasing");
    take("sx", s.sx, true);
    take("sx_err", s.sx_err, false);
    take("sz", s.sz, true);
    take("sz_err", s.sz_err, false);
    take("e_s", s.e_s, true);
    take("e_b", s.e_b, true);
    take("e_c", s.e_c, true);
    take("e_total", s.e_total, true);
    take("dedt", s.dedt, false);
    return s;
}

TimeSeries load_series(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw ConfigError("cannot open series file: " + path);
    std::ostringstream os;
    os << in.rdbuf();
    return parse_series(os.str());
}

}  // namespace metamol
