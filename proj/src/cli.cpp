#include "rainlink/cli.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <sstream>

#include "rainlink/config.hpp"
#include "rainlink/io.hpp"
#include "rainlink/pipeline.hpp"
#include "rainlink/synth.hpp"
#include "rainlink/validation.hpp"

namespace rainlink {

namespace {

EngineConfig must_config(const RunManifest& m) {
    if (m.config_path.empty()) throw ConfigError("missing --config");
    EngineConfig cfg = load_engine_config(m.config_path);
    if (cfg.link.cloud_loss > 1.0) {
        // xi excludes cloud loss, so extraction is approximate in this mode.
        std::cerr << "note: nonzero cloud loss configured; rain-attenuation "
                     "extraction is approximate\n";
    }
    return cfg;
}

StationRegistry must_stations(const RunManifest& m) {
    if (m.stations_path.empty()) throw ConfigError("missing --stations");
    return load_stations(m.stations_path);
}

TransitSchedule optional_transits(const RunManifest& m) {
    if (m.transit_schedule_path.empty()) return {};
    return load_transit_schedule(m.transit_schedule_path);
}

std::ofstream open_out(const std::string& path) {
    std::ofstream os(path);
    if (!os) throw DataError("cannot open output file " + path);
    return os;
}

int run_guarded(const char* name, int (*body)(const RunManifest&),
                const RunManifest& m) {
    try {
        return body(m);
    } catch (const ConfigError& e) {
        std::cerr << name << ": " << e.what() << '\n';
        return kExitUsage;
    } catch (const std::invalid_argument& e) {
        std::cerr << name << ": " << e.what() << '\n';
        return kExitUsage;
    } catch (const std::exception& e) {
        std::cerr << name << ": " << e.what() << '\n';
        return kExitData;
    }
}

int simulate_body(const RunManifest& m) {
    EngineConfig cfg = must_config(m);
    StationRegistry reg = must_stations(m);
    TransitSchedule transits = optional_transits(m);
    if (m.output_path.empty()) throw ConfigError("missing --out");

    auto out = open_out(m.output_path);
    std::ofstream truth_os;
    if (!m.truth_path.empty()) {
        truth_os = open_out(m.truth_path);
        truth_os << "station_id,time,true_rate_mm_per_h,true_l_rain_db\n";
    }

    std::int64_t total = 0;
    for (const auto& rec : reg.stations) {
        RainPathGeometry g;
        g.elevation_angle_rad = deg_to_rad(rec.elevation_deg);
        g.isotherm_height_km = cfg.default_h0_km;
        g.melting_thickness_km = rec.melting_thickness_km;
        g.ml = cfg.ml;
        g.ll = cfg.ll;
        ImpairmentSchedule imp;
        auto it = transits.find(rec.station_id);
        if (it != transits.end()) imp.sun_transits = it->second;
        StationSynthesis synth = simulate_station(
            cfg.synth.dry, cfg.synth.scenario, imp, g, cfg.link, cfg.carrier,
            cfg.synth.n_samples, cfg.synth.start_time,
            station_seed(m.seed, rec.station_id));
        write_telemetry(out, rec.station_id, synth.samples);
        if (truth_os.is_open()) {
            write_truth(truth_os, rec.station_id, synth.truth, false);
        }
        total += static_cast<std::int64_t>(synth.samples.size());
    }
    std::cout << "simulate: " << reg.stations.size() << " station(s), " << total
              << " samples, " << cfg.synth.scenario.events.size()
              << " scenario event(s), analytic total "
              << cfg.synth.scenario.analytic_total_mm() << " mm, seed " << m.seed
              << "\n";
    return kExitOk;
}

int process_body(const RunManifest& m) {
    EngineConfig cfg = must_config(m);
    StationRegistry reg = must_stations(m);
    if (m.forecast_path.empty()) throw ConfigError("missing --forecast");
    IsothermForecast fc = load_forecast(m.forecast_path);
    TransitSchedule transits = optional_transits(m);
    if (m.input_path.empty()) throw ConfigError("missing --in");
    if (m.output_path.empty()) throw ConfigError("missing --out");

    std::ifstream in(m.input_path);
    if (!in) throw DataError("cannot open telemetry " + m.input_path);
    IngestResult ing = ingest(in, reg);

    Engine engine(cfg, reg, fc, transits);
    EngineOutputs outputs;
    engine.process(ing.per_station, std::nullopt, outputs);
    engine.finalize(outputs);

    auto est = open_out(m.output_path);
    write_estimates_header(est);
    for (const auto& r : outputs.estimates) write_estimate(est, r);
    auto ev = open_out(m.output_path + ".events.csv");
    write_events_header(ev);
    for (const auto& r : outputs.events) write_event(ev, r);

    const auto& d = ing.diagnostics;
    const auto& ed = engine.diagnostics();
    std::cout << "process: " << d.accepted << " samples accepted, "
              << d.rejected() << " rejected (malformed " << d.malformed
              << ", unknown " << d.unknown_station << ", out-of-order "
              << d.out_of_order << ", duplicate " << d.duplicate_timestamp
              << "), " << outputs.events.size() << " event(s)";
    if (ed.masked_samples || ed.global_fade_edges || ed.invalid_samples ||
        ed.degraded_events) {
        std::cout << "; masked " << ed.masked_samples << ", fade edges "
                  << ed.global_fade_edges << ", invalid " << ed.invalid_samples
                  << ", degraded events " << ed.degraded_events;
    }
    std::cout << '\n';
    return kExitOk;
}

int curve_body(const RunManifest& m) {
    EngineConfig cfg = must_config(m);
    if (m.output_path.empty()) throw ConfigError("missing --out");
    if (m.h0_list_km.empty()) throw ConfigError("missing --h0 list");
    if (!(m.grid_step_db > 0.0)) throw ConfigError("--grid-step must be > 0");

    double elevation_deg = 40.0;
    double melting_km = 0.5;
    if (!m.stations_path.empty()) {
        StationRegistry reg = load_stations(m.stations_path);
        const StationRecord* rec = nullptr;
        if (!m.station_id.empty()) {
            rec = reg.find(m.station_id);
            if (!rec) throw ConfigError("unknown station " + m.station_id);
        } else if (!reg.stations.empty()) {
            rec = &reg.stations.front();
        }
        if (rec) {
            elevation_deg = rec->elevation_deg;
            melting_km = rec->melting_thickness_km;
        }
    }

    std::vector<double> h0s;
    for (double h : m.h0_list_km) {
        if (std::find(h0s.begin(), h0s.end(), h) != h0s.end()) {
            std::cerr << "curve: duplicate h0 " << h << " km ignored\n";
            continue;
        }
        h0s.push_back(h);
    }

    std::vector<double> grid;
    const long long n_steps =
        static_cast<long long>(std::floor(m.grid_max_db / m.grid_step_db + 1e-9));
    for (long long i = 0; i <= n_steps; ++i) {
        grid.push_back(static_cast<double>(i) * m.grid_step_db);
    }

    const double xi = compute_xi(cfg.link);
    auto out = open_out(m.output_path);
    char buf[96];
    for (double h0 : h0s) {
        RainPathGeometry g;
        g.elevation_angle_rad = deg_to_rad(elevation_deg);
        g.isotherm_height_km = h0;
        g.melting_thickness_km = melting_km;
        g.ml = cfg.ml;
        g.ll = cfg.ll;
        const auto table = characteristic_curve(g, xi, grid);
        std::snprintf(buf, sizeof(buf), "# h0_km = %.2f\n", h0);
        out << buf << "snr_drop_db,rate_mm_per_h\n";
        for (const auto& p : table) {
            std::snprintf(buf, sizeof(buf), "%.3f,%.4g\n", p.snr_drop_db,
                          p.rate_mm_per_h);
            out << buf;
        }
        out << '\n';
    }
    return kExitOk;
}

RateSeries truth_to_series(const std::vector<TruthRecord>& truth,
                           const std::string& station) {
    RateSeries s;
    for (const auto& r : truth) {
        if (r.station_id == station) {
            s.push_back({r.sample.time, r.sample.rate_mm_per_h});
        }
    }
    return s;
}

int compare_body(const RunManifest& m) {
    if (m.input_path.empty()) throw ConfigError("missing --in");
    if (m.truth_path.empty()) throw ConfigError("missing --truth");

    std::ifstream in(m.input_path);
    if (!in) throw DataError("cannot open estimates " + m.input_path);
    const auto estimates = read_estimates(in);
    if (estimates.empty()) throw DataError("estimates file is empty");

    std::string station = m.station_id;
    if (station.empty()) {
        station = estimates.front().station_id;
        for (const auto& r : estimates) {
            if (r.station_id != station) {
                throw ConfigError(
                    "estimates cover several stations; pick one with --station");
            }
        }
    }
    RateSeries est;
    for (const auto& r : estimates) {
        if (r.station_id == station) est.push_back({r.time, r.rate_mm_per_h});
    }
    if (est.empty()) throw DataError("no estimates for station " + station);

    std::ifstream tf(m.truth_path);
    if (!tf) throw DataError("cannot open reference " + m.truth_path);
    // Reference is either a truth sidecar or a TBRG tip log.
    std::string first_line;
    std::getline(tf, first_line);
    tf.seekg(0);
    RateSeries ref;
    if (first_line.rfind("tip_mm=", 0) == 0 || first_line.rfind("#", 0) == 0) {
        ref = tbrg_rate(read_tbrg(tf));
    } else {
        ref = truth_to_series(read_truth(tf), station);
    }
    if (ref.empty()) throw DataError("reference series is empty");

    CompareMetrics metrics;
    try {
        metrics = compare(est, ref);
    } catch (const std::invalid_argument& e) {
        throw DataError(e.what());  // disjoint coverage etc. is a data problem
    }
    std::ostringstream report;
    char buf[96];
    report << "station = " << station << '\n';
    std::snprintf(buf, sizeof(buf), "grid_points = %lld\n",
                  static_cast<long long>(metrics.grid_points));
    report << buf;
    std::snprintf(buf, sizeof(buf), "peak_time_error_s = %.0f\n",
                  metrics.peak_time_error_s);
    report << buf;
    std::snprintf(buf, sizeof(buf), "peak_rate_ratio = %.4f\n",
                  metrics.peak_rate_ratio);
    report << buf;
    std::snprintf(buf, sizeof(buf), "cumulative_ratio = %.4f\n",
                  metrics.cumulative_ratio);
    report << buf;
    std::snprintf(buf, sizeof(buf), "rmse_mm_per_h = %.4g\n", metrics.rmse_mm_per_h);
    report << buf;
    // The link-side estimate is a path average over the wet slant segment;
    // report its ground projection alongside when geometry is on hand.
    if (!m.config_path.empty() && !m.stations_path.empty()) {
        const EngineConfig cfg = load_engine_config(m.config_path);
        const StationRegistry reg = load_stations(m.stations_path);
        if (const StationRecord* rec = reg.find(station)) {
            const double d_km = ground_footprint_km(
                cfg.default_h0_km, deg_to_rad(rec->elevation_deg));
            std::snprintf(buf, sizeof(buf), "ground_footprint_km = %.2f\n", d_km);
            report << buf;
        }
    }
    if (m.output_path.empty()) {
        std::cout << report.str();
    } else {
        auto out = open_out(m.output_path);
        out << report.str();
    }
    return kExitOk;
}

}  // namespace

int cmd_simulate(const RunManifest& m) {
    return run_guarded("simulate", simulate_body, m);
}
int cmd_process(const RunManifest& m) {
    return run_guarded("process", process_body, m);
}
int cmd_curve(const RunManifest& m) { return run_guarded("curve", curve_body, m); }
int cmd_compare(const RunManifest& m) {
    return run_guarded("compare", compare_body, m);
}

}  // namespace rainlink
