// metamol — batch front end: run either engine (or both), compare series,
// extract spectra.
//
// Exit codes: 0 success, 1 a validity guard tripped or a tolerance failed,
// 2 usage or configuration error.

#include <chrono>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "metamol/analysis.hpp"
#include "metamol/config.hpp"
#include "metamol/errors.hpp"
#include "metamol/grid.hpp"
#include "metamol/series_io.hpp"
#include "metamol/trajectory.hpp"
#include "metamol/version.hpp"

namespace {

using namespace metamol;

std::string fmt(double v) {
    char buf[32];
    std::snprintf(buf, sizeof(buf), "%.6g", v);
    return buf;
}

void attach_manifest(TimeSeries& series, const RunConfig& cfg) {
    series.meta["version"] = k_version;
    char buf[32];
    std::snprintf(buf, sizeof(buf), "%016llx",
                  static_cast<unsigned long long>(config_hash(cfg)));
    series.meta["config_hash"] = buf;
    for (const auto& [key, value] : config_entries(cfg))
        series.meta["config." + key] = value;
}

void write_manifest(const std::string& path, const TimeSeries& series,
                    double wall_seconds) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw ConfigError("cannot open for writing: " + path);
    out << "# metamol-manifest v1\n";
    out << "engine = " << series.engine << "\n";
    for (const auto& [key, value] : series.meta)
        out << key << " = " << value << "\n";
    out << "wall_seconds = " << fmt(wall_seconds) << "\n";
}

int run_command(const std::string& config_path,
                const std::vector<std::string>& overrides,
                const std::string& engine_override,
                const std::string& out_override) {
    RunConfig cfg =
        config_path.empty() ? parse_config("") : load_config(config_path);
    for (const auto& o : overrides) apply_override(cfg, o);
    if (!engine_override.empty()) apply_override(cfg, "engine=" + engine_override);
    if (!out_override.empty()) cfg.out_prefix = out_override;

    const bool want_pwd = cfg.engine != Engine::Grid;
    const bool want_grid = cfg.engine != Engine::Pwd;
    TimeSeries pwd_series, grid_series;

    if (want_pwd) {
        const auto t0 = std::chrono::steady_clock::now();
        PwdRunResult res = run_pwd(cfg.params, cfg.pwd_schedule());
        const double wall =
            std::chrono::duration<double>(std::chrono::steady_clock::now() - t0)
                .count();
        fill_energy_rate(res.series);
        attach_manifest(res.series, cfg);
        res.series.meta["aborted_trajectories"] = std::to_string(res.aborted);
        res.series.meta["accepted_hops"] = std::to_string(res.accepted_hops);
        const std::string path = cfg.out_prefix + "_pwd.tsv";
        emit_series(res.series, path);
        write_manifest(cfg.out_prefix + "_pwd.manifest", res.series, wall);
        std::cout << "pwd: " << res.series.size() << " samples -> " << path
                  << " (" << fmt(wall) << " s, " << res.accepted_hops
                  << " hops)\n";
        if (res.aborted > 0) {
            std::cerr << "guard: " << res.aborted
                      << " trajectories hit the weight bound\n";
            return 1;
        }
        pwd_series = std::move(res.series);
    }
    if (want_grid) {
        const auto t0 = std::chrono::steady_clock::now();
        GridRunResult res = run_grid(cfg.params, cfg.grid_options());
        const double wall =
            std::chrono::duration<double>(std::chrono::steady_clock::now() - t0)
                .count();
        fill_energy_rate(res.series);
        attach_manifest(res.series, cfg);
        res.series.meta["max_embedded_error"] = fmt(res.max_embedded_error);
        res.series.meta["max_boundary_fraction"] =
            fmt(res.max_boundary_fraction);
        const std::string path = cfg.out_prefix + "_grid.tsv";
        emit_series(res.series, path);
        write_manifest(cfg.out_prefix + "_grid.manifest", res.series, wall);
        std::cout << "grid: " << res.series.size() << " samples -> " << path
                  << " (" << fmt(wall) << " s, max rk error "
                  << fmt(res.max_embedded_error) << ")\n";
        grid_series = std::move(res.series);
    }

    if (want_pwd && want_grid) {
        const std::string path = cfg.out_prefix + "_compare.txt";
        std::ofstream out(path, std::ios::binary);
        for (const std::string ch : {"sx", "sz"}) {
            const CompareMetrics m = compare(pwd_series, grid_series, ch);
            out << ch << " rmse = " << fmt(m.rmse)
                << ", max = " << fmt(m.max_abs) << "\n";
            std::cout << "compare " << ch << ": rmse = " << fmt(m.rmse)
                      << ", max = " << fmt(m.max_abs) << "\n";
        }
    }
    return 0;
}

int compare_command(const std::string& path_a, const std::string& path_b,
                    const std::string& ch, double rmse_tol, double max_base,
                    double err_mult) {
    const TimeSeries a = load_series(path_a);
    const TimeSeries b = load_series(path_b);
    const CompareMetrics m = compare(a, b, ch);

    const std::vector<double>* err = nullptr;
    if (ch == "sx") err = a.has_errors() ? &a.sx_err : (b.has_errors() ? &b.sx_err : nullptr);
    if (ch == "sz") err = a.has_errors() ? &a.sz_err : (b.has_errors() ? &b.sz_err : nullptr);

    bool max_ok = true;
    const auto& ya = channel(a, ch);
    const auto& yb = channel(b, ch);
    for (std::size_t i = 0; i < ya.size(); ++i) {
        const double allow = max_base + (err ? err_mult * (*err)[i] : 0.0);
        if (std::abs(ya[i] - yb[i]) > allow) max_ok = false;
    }
    const bool rmse_ok = m.rmse <= rmse_tol;
    std::cout << ch << ": rmse = " << fmt(m.rmse) << " (tol " << fmt(rmse_tol)
              << "), max = " << fmt(m.max_abs) << ", range = " << fmt(m.range)
              << (rmse_ok && max_ok ? "  [ok]" : "  [exceeds tolerance]")
              << "\n";
    return rmse_ok && max_ok ? 0 : 1;
}

int spectrum_command(const std::string& path, const std::string& ch,
                     double t_min, double t_max, int n_peaks) {
    const TimeSeries s = load_series(path);
    if (t_max <= t_min) {
        t_min = s.t.front();
        t_max = s.t.back();
    }
    const auto peaks = spectrum(s.t, channel(s, ch), t_min, t_max, n_peaks);
    std::cout << "# angular_frequency amplitude\n";
    for (const auto& p : peaks)
        std::cout << fmt(p.omega) << " " << fmt(p.amplitude) << "\n";
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"metamol — driven quantum-dot / resonant-mode dynamics"};
    app.set_version_flag("--version", metamol::k_version);
    app.require_subcommand(1);

    // run
    auto* run = app.add_subcommand("run", "run one or both engines");
    std::string config_path, engine_override, out_override;
    std::vector<std::string> overrides;
    run->add_option("--config", config_path, "config file (key = value lines)");
    run->add_option("--set", overrides, "override a config key, key=value");
    run->add_option("--engine", engine_override, "pwd, grid or both");
    run->add_option("--out", out_override, "output path prefix");

    // compare
    auto* cmp = app.add_subcommand("compare", "compare two series files");
    std::string path_a, path_b, cmp_channel = "sx";
    double rmse_tol = 0.02, max_base = 0.02, err_mult = 3.0;
    cmp->add_option("a", path_a, "first series")->required();
    cmp->add_option("b", path_b, "second series")->required();
    cmp->add_option("--channel", cmp_channel, "channel name (default sx)");
    cmp->add_option("--rmse-tol", rmse_tol, "RMSE tolerance");
    cmp->add_option("--max-base", max_base, "pointwise base tolerance");
    cmp->add_option("--err-mult", err_mult,
                    "standard-error multiple added to the pointwise tolerance");

    // spectrum
    auto* spec = app.add_subcommand("spectrum", "ranked spectral peaks");
    std::string spec_path, spec_channel = "sx";
    double t_min = 0.0, t_max = -1.0;
    int n_peaks = 5;
    spec->add_option("file", spec_path, "series file")->required();
    spec->add_option("--channel", spec_channel, "channel name (default sx)");
    spec->add_option("--t-min", t_min, "window start");
    spec->add_option("--t-max", t_max, "window end");
    spec->add_option("--peaks", n_peaks, "number of peaks to print");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : 2;
    }

    try {
        if (run->parsed())
            return run_command(config_path, overrides, engine_override,
                               out_override);
        if (cmp->parsed())
            return compare_command(path_a, path_b, cmp_channel, rmse_tol,
                                   max_base, err_mult);
        if (spec->parsed())
            return spectrum_command(spec_path, spec_channel, t_min, t_max,
                                    n_peaks);
    } catch (const metamol::GuardError& e) {
        std::cerr << "guard: " << e.what() << "\n";
        return 1;
    } catch (const metamol::ConfigError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    }
    return 2;
}
