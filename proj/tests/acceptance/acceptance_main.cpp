// Acceptance suite: one line per criterion, PASS/FAIL, nonzero exit on any
// failure. Each criterion is self-contained and pins its tolerance in code.

#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iostream>
#include <map>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "rainlink/cli.hpp"
#include "rainlink/config.hpp"
#include "rainlink/detector.hpp"
#include "rainlink/io.hpp"
#include "rainlink/link_budget.hpp"
#include "rainlink/pipeline.hpp"
#include "rainlink/rain_model.hpp"
#include "rainlink/synth.hpp"
#include "rainlink/tracker.hpp"
#include "rainlink/units.hpp"
#include "rainlink/validation.hpp"

namespace fs = std::filesystem;
using namespace rainlink;

namespace {

constexpr TimePoint kT0 = 1767225600;  // 2026-01-01T00:00:00Z

RainPathGeometry geometry(double h0, double delta = 0.5, double elev = 40.0) {
    RainPathGeometry g;
    g.elevation_angle_rad = deg_to_rad(elev);
    g.isotherm_height_km = h0;
    g.melting_thickness_km = delta;
    return g;
}

StationRegistry registry(int n) {
    StationRegistry reg;
    for (int i = 0; i < n; ++i) {
        StationRecord r;
        r.station_id = "ST" + std::to_string(i);
        r.latitude_deg = 43.0;
        r.longitude_deg = 10.0;
        r.elevation_deg = 40.0;
        r.melting_thickness_km = 0.5;
        reg.stations.push_back(std::move(r));
    }
    return reg;
}

IsothermForecast flat_forecast(double h0 = 3.0) {
    IsothermForecast fc;
    for (int i = 0; i < 40; ++i) {
        fc.entries.push_back({kT0 - 86400 + i * 6 * 3600, h0});
    }
    return fc;
}

// The standard 7-day oracle scenario: three trapezoids centred on diurnal
// extrema (peaks 5, 20, 50 mm/h).
RainScenario oracle_scenario() {
    RainScenario sc;
    RainEventSpec e1;
    e1.start = kT0 + (1440 + 360 - 37) * kSamplePeriodS;
    e1.duration_s = 75 * kSamplePeriodS;
    e1.peak_rate_mm_per_h = 5.0;
    e1.ramp_up_frac = 0.10;
    e1.ramp_down_frac = 0.48;
    RainEventSpec e2;
    e2.start = kT0 + (3 * 1440 + 1080 - 50) * kSamplePeriodS;
    e2.duration_s = 100 * kSamplePeriodS;
    e2.peak_rate_mm_per_h = 20.0;
    e2.ramp_up_frac = 0.25;
    e2.ramp_down_frac = 0.50;
    RainEventSpec e3;
    e3.start = kT0 + (5 * 1440 + 360 - 75) * kSamplePeriodS;
    e3.duration_s = 150 * kSamplePeriodS;
    e3.peak_rate_mm_per_h = 50.0;
    e3.ramp_up_frac = 0.25;
    e3.ramp_down_frac = 0.50;
    sc.events = {e1, e2, e3};
    return sc;
}

bool approx(double got, double want, double tol) {
    return std::fabs(got - want) <= tol;
}

char detail_buf[512];
#define DETAIL(...) std::snprintf(detail_buf, sizeof(detail_buf), __VA_ARGS__)

// --- criteria -------------------------------------------------------------

bool c1_xi_golden() {
    const double xi = compute_xi(LinkNoiseParams{});
    DETAIL("xi = %.6f (want 0.799 +- 0.001)", xi);
    return approx(xi, 0.799, 0.001);
}

bool c2_equivalent_thickness() {
    const double delta_eq = 0.5 / (default_melting_layer_coeffs().beta + 1.0);
    DETAIL("delta_eq = %.6f km (want 0.24 to 2 decimals)", delta_eq);
    return approx(std::round(delta_eq * 100.0) / 100.0, 0.24, 1e-9);
}

bool c3_scale_factor() {
    const auto ml = default_melting_layer_coeffs();
    const auto ll = default_liquid_layer_coeffs();
    const double factor = (ml.alpha / ll.alpha) * ((ll.beta + 1.0) / (ml.beta + 1.0));
    const double expo = ml.beta - ll.beta;
    const double eq_10 = 0.5 * factor * std::pow(10.0, expo);
    DETAIL("factor = %.4f (6.39 +- 0.01), exponent = %.4f (-0.1463 +- 1e-4), "
           "thickness @10mm/h = %.4f km (2.28)",
           factor, expo, eq_10);
    return approx(factor, 6.39, 0.01) && approx(expo, -0.1463, 1e-4) &&
           approx(eq_10, 2.28, 0.005);
}

bool c4_footprint_band() {
    const double lo = ground_footprint_km(1.5, deg_to_rad(40.0));
    const double hi = ground_footprint_km(4.0, deg_to_rad(40.0));
    DETAIL("footprint = [%.4f, %.4f] km (want [1.79, 4.77] +- 0.01)", lo, hi);
    return approx(lo, 1.79, 0.01) && approx(hi, 4.77, 0.01);
}

double simpson_attenuation(double rate, const RainPathGeometry& g, double h_lo,
                           double h_hi, bool melting, int n = 4000) {
    auto f = [&](double h) {
        const double r = rate_at_height(h, rate, g);
        const PowerLawCoeffs& c = melting ? g.ml : g.ll;
        return r <= 0.0 ? 0.0
                        : c.alpha * std::pow(r, c.beta) /
                              std::sin(g.elevation_angle_rad);
    };
    const double w = (h_hi - h_lo) / n;
    double acc = f(h_lo) + f(h_hi);
    for (int i = 1; i < n; ++i) acc += f(h_lo + i * w) * (i % 2 ? 4.0 : 2.0);
    return acc * w / 3.0;
}

bool c5_quadrature() {
    std::mt19937_64 rng(20260301);
    std::uniform_real_distribution<double> rate_d(0.05, 150.0);
    std::uniform_real_distribution<double> h0_d(1.0, 5.0);
    std::uniform_real_distribution<double> frac_d(0.1, 0.8);
    std::uniform_real_distribution<double> elev_d(10.0, 80.0);
    double worst = 0.0;
    for (int i = 0; i < 20; ++i) {
        const double h0 = h0_d(rng);
        const auto g = geometry(h0, frac_d(rng) * h0, elev_d(rng));
        const double rate = rate_d(rng);
        const double ml_c = ml_attenuation_db(rate, g);
        const double ll_c = ll_attenuation_db(rate, g);
        const double ml_q =
            simpson_attenuation(rate, g, 0.0, g.melting_thickness_km, true);
        const double ll_q = simpson_attenuation(rate, g, g.melting_thickness_km,
                                                g.isotherm_height_km, false);
        worst = std::max(worst, std::fabs(ml_c / ml_q - 1.0));
        worst = std::max(worst, std::fabs(ll_c / ll_q - 1.0));
    }
    DETAIL("worst closed-form vs quadrature rel. error = %.3g (<= 1e-6)", worst);
    return worst <= 1e-6;
}

bool c6_inversion_round_trip() {
    double worst = 0.0;
    for (double h0 : {1.5, 2.5, 4.0}) {
        for (double d : {0.3, 0.5, 0.8}) {
            const auto g = geometry(h0, d);
            for (double r : {0.1, 1.0, 5.0, 20.0, 100.0}) {
                const double rec = invert_to_rain_rate(total_attenuation_db(r, g), g);
                worst = std::max(worst, std::fabs(rec / r - 1.0));
            }
        }
    }
    DETAIL("worst round-trip rel. error over 45 cases = %.3g (<= 1e-6)", worst);
    return worst <= 1e-6;
}

bool c7_delta_ml_sensitivity() {
    const auto g_truth = geometry(3.0, 0.5);
    double worst = 0.0;
    for (double r = 1.0; r <= 50.0 + 1e-9; r += 0.5) {
        const double l_db = total_attenuation_db(r, g_truth);
        for (double d : {0.3, 0.8}) {
            const double rec = invert_to_rain_rate(l_db, geometry(3.0, d));
            worst = std::max(worst, std::fabs(rec / r - 1.0));
        }
    }
    // Measured band +-10.6% at the 1 mm/h corner: exceeds the published 8%
    // figure, pinned here, inside the 12% hard cap. The 8% band holds for
    // rates >= 5 mm/h.
    DETAIL("measured band = +-%.2f%% (published 8%%, pinned 10.7%%, cap 12%%)",
           worst * 100.0);
    return worst <= 0.12 && worst <= 0.107;
}

bool c8_false_alarm() {
    const double tail = false_alarm_probability(0.0049, 0.0852, 0.3);
    const bool tail_ok = tail > 2.2e-4 && tail < 3.2e-4;

    // Monte Carlo over matched dry statistics; debounce of one sample so the
    // start rate is comparable with the single-sample tail probability.
    DetectorConfig cfg;
    cfg.min_event_samples = 1;
    DetectorState s;
    std::mt19937_64 rng(8);
    std::normal_distribution<double> eps(0.0049, 0.0852);
    const std::int64_t n = 1000000;
    std::int64_t starts = 0;
    TimePoint t = kT0;
    for (std::int64_t i = 0; i < n; ++i) {
        auto r = detector_step(s, t, 0.0, -eps(rng), cfg, false);
        if (r.boundary && r.boundary->kind == EventBoundary::Kind::kStart) {
            ++starts;
        }
        s = r.state;
        t += kSamplePeriodS;
    }
    const double rate = static_cast<double>(starts) / static_cast<double>(n);
    const double factor = rate / tail;
    DETAIL("tail = %.3e (~2.7e-4), MC start rate = %.3e, factor = %.2f (in [1/3, 3])",
           tail, rate, factor);
    return tail_ok && factor >= 1.0 / 3.0 && factor <= 3.0;
}

struct OracleRun {
    StationSynthesis synth;
    EngineOutputs out;
    EngineConfig cfg;
};

OracleRun run_oracle(std::uint64_t seed) {
    OracleRun r;
    r.cfg = EngineConfig{};
    const auto reg = registry(1);
    r.synth = simulate_station(r.cfg.synth.dry, oracle_scenario(), {},
                               geometry(3.0), r.cfg.link, r.cfg.carrier,
                               7 * 1440, kT0, seed);
    std::map<std::string, std::vector<SnrSample>> input;
    input["ST0"] = r.synth.samples;
    Engine engine(r.cfg, reg, flat_forecast(), {});
    engine.process(input, std::nullopt, r.out);
    engine.finalize(r.out);
    return r;
}

bool c9_end_to_end() {
    OracleRun r = run_oracle(42);
    const auto scenario = oracle_scenario();
    if (r.out.events.size() != 3) {
        DETAIL("detected %zu events (want exactly 3)", r.out.events.size());
        return false;
    }
    // Truth SNR drop from the sidecar attenuation series.
    const double dry = snr_dry(r.cfg.carrier, r.cfg.link);
    std::vector<double> drop(r.synth.truth.size(), 0.0);
    for (size_t i = 0; i < r.synth.truth.size(); ++i) {
        if (r.synth.truth[i].l_rain_db > 0.0) {
            drop[i] = linear_to_db(
                dry / snr_wet(r.cfg.carrier, r.cfg.link,
                              db_to_linear(r.synth.truth[i].l_rain_db)));
        }
    }
    bool ok = true;
    std::string parts;
    for (size_t k = 0; k < 3; ++k) {
        const auto& spec = scenario.events[k];
        const auto& got = r.out.events[k].event;
        const std::int64_t i0 = (spec.start - kT0) / kSamplePeriodS;
        const std::int64_t i1 = i0 + spec.duration_s / kSamplePeriodS;
        std::int64_t onset_truth = -1, offset_truth = -1;
        for (std::int64_t i = std::max<std::int64_t>(0, i0 - 8); i <= i1 + 8; ++i) {
            if (drop[i] >= 0.3 && onset_truth < 0) onset_truth = i;
            if (drop[i] >= 0.1) offset_truth = i;
        }
        const std::int64_t onset_got = (got.start_time - kT0) / kSamplePeriodS;
        const std::int64_t offset_got = (got.end_time - kT0) / kSamplePeriodS;
        const double d_on = static_cast<double>(onset_got - onset_truth);
        const double d_off = static_cast<double>(offset_got - offset_truth);
        const double pk = got.peak_rate / spec.peak_rate_mm_per_h - 1.0;
        const double cum = got.cumulative_mm / spec.analytic_total_mm() - 1.0;
        char b[128];
        std::snprintf(b, sizeof(b), " [%g: on %+g off %+g pk %+.1f%% cum %+.1f%%]",
                      spec.peak_rate_mm_per_h, d_on, d_off, pk * 100, cum * 100);
        parts += b;
        if (std::fabs(d_on) > 3 || std::fabs(d_off) > 3 || std::fabs(pk) > 0.10 ||
            std::fabs(cum) > 0.10) {
            ok = false;
        }
    }
    DETAIL("3 events;%s (|on|,|off| <= 3 samples; |pk|,|cum| <= 10%%)",
           parts.c_str());
    return ok;
}

bool c10_impairment_rejection() {
    const EngineConfig cfg;
    // (a) Sun transit: masked run clean, unmasked run triggers.
    TransitSchedule sched;
    const TimePoint w0 = kT0 + 400 * kSamplePeriodS;
    sched["ST0"] = {{w0, 8 * kSamplePeriodS, 6.0}};
    ImpairmentSchedule imp;
    imp.sun_transits = sched["ST0"];
    auto synth = simulate_station(cfg.synth.dry, RainScenario{}, imp,
                                  geometry(3.0), cfg.link, cfg.carrier, 800,
                                  kT0, 10);
    std::map<std::string, std::vector<SnrSample>> input;
    input["ST0"] = synth.samples;
    Engine masked(cfg, registry(1), flat_forecast(), sched);
    EngineOutputs om;
    masked.process(input, std::nullopt, om);
    masked.finalize(om);
    Engine unmasked(cfg, registry(1), flat_forecast(), {});
    EngineOutputs ou;
    unmasked.process(input, std::nullopt, ou);
    unmasked.finalize(ou);
    const bool transit_ok = om.events.empty() && ou.events.size() >= 1;

    // (b) Transponder gain step across stations.
    auto gain_run = [&](int n_stations, int n_dropping) {
        const auto reg = registry(n_stations);
        std::map<std::string, std::vector<SnrSample>> in2;
        for (int s = 0; s < n_stations; ++s) {
            DrySignalModel m = cfg.synth.dry;
            ImpairmentSchedule imp2;
            if (s < n_dropping) {
                imp2.gain_steps = {{kT0 + 500 * kSamplePeriodS, -1.0}};
            }
            auto sy = simulate_station(m, RainScenario{}, imp2, geometry(3.0),
                                       cfg.link, cfg.carrier, 1000, kT0,
                                       station_seed(99, "ST" + std::to_string(s)));
            in2["ST" + std::to_string(s)] = sy.samples;
        }
        Engine eng(cfg, reg, flat_forecast(), {});
        EngineOutputs o;
        eng.process(in2, std::nullopt, o);
        eng.finalize(o);
        return std::make_pair(eng.diagnostics().global_fade_edges, o.events.size());
    };
    const auto [edges_all, events_all] = gain_run(10, 10);
    const auto [edges_one, events_one] = gain_run(10, 1);
    const bool fade_ok =
        edges_all >= 1 && events_all == 0 && edges_one == 0 && events_one >= 1;

    DETAIL("transit: masked %zu events / unmasked %zu; step: 10/10 -> GLOBAL(%lld "
           "edges, %zu events), 1/10 -> LOCAL(%lld edges)",
           om.events.size(), ou.events.size(),
           static_cast<long long>(edges_all), events_all,
           static_cast<long long>(edges_one));
    return transit_ok && fade_ok;
}

// Keeps the one-line-per-criterion output clean while CLI commands run.
struct SilenceCout {
    std::streambuf* saved;
    std::ostringstream sink;
    SilenceCout() : saved(std::cout.rdbuf(sink.rdbuf())) {}
    ~SilenceCout() { std::cout.rdbuf(saved); }
};

bool c11_determinism_restart() {
    SilenceCout quiet;
    // CLI-level determinism: simulate + process twice, byte-identical files.
    const fs::path dir = fs::temp_directory_path() / "rainlink_acceptance";
    fs::remove_all(dir);
    fs::create_directories(dir);
    auto file = [&](const char* n) { return (dir / n).string(); };
    {
        std::ofstream f(file("engine.conf"));
        f << "synth_start = 2026-03-01T00:00:00Z\n"
             "synth_samples = 2880\n"
             "synth_event = 2026-03-01T06:00:00Z 4500 trapezoid 15.0 0.2 0.4\n";
        std::ofstream s(file("stations.conf"));
        s << "PI003X 43.7203 10.3836 40.0 0.5\nMS001X 44.0344 10.1399 40.0 0.5\n";
        std::ofstream fc(file("forecast.csv"));
        fc << "valid_time,h0_km\n";
        for (int i = 0; i < 16; ++i) {
            fc << format_iso8601(*parse_iso8601("2026-02-28T00:00:00Z") +
                                 i * 6 * 3600)
               << ",3.0\n";
        }
    }
    auto slurp = [](const std::string& p) {
        std::ifstream f(p);
        std::stringstream ss;
        ss << f.rdbuf();
        return ss.str();
    };
    RunManifest sim;
    sim.config_path = file("engine.conf");
    sim.stations_path = file("stations.conf");
    sim.seed = 42;
    sim.output_path = file("telemetry.txt");
    sim.truth_path = file("truth.csv");
    if (cmd_simulate(sim) != kExitOk) {
        DETAIL("simulate failed");
        return false;
    }
    const std::string tele1 = slurp(file("telemetry.txt"));
    const std::string truth1 = slurp(file("truth.csv"));
    if (cmd_simulate(sim) != kExitOk) return false;
    const bool sim_ok =
        tele1 == slurp(file("telemetry.txt")) && truth1 == slurp(file("truth.csv"));

    RunManifest proc;
    proc.config_path = sim.config_path;
    proc.stations_path = sim.stations_path;
    proc.forecast_path = file("forecast.csv");
    proc.input_path = file("telemetry.txt");
    proc.output_path = file("est1.csv");
    if (cmd_process(proc) != kExitOk) {
        DETAIL("process failed");
        return false;
    }
    proc.output_path = file("est2.csv");
    if (cmd_process(proc) != kExitOk) return false;
    const bool proc_ok =
        slurp(file("est1.csv")) == slurp(file("est2.csv")) &&
        slurp(file("est1.csv.events.csv")) == slurp(file("est2.csv.events.csv"));

    // Engine-level checkpoint-resume equality, split mid-event.
    const EngineConfig cfg;
    RainScenario sc;
    RainEventSpec e;
    e.start = kT0 + 300 * kSamplePeriodS;
    e.duration_s = 75 * kSamplePeriodS;
    e.peak_rate_mm_per_h = 15.0;
    sc.events = {e};
    auto synth = simulate_station(cfg.synth.dry, sc, {}, geometry(3.0), cfg.link,
                                  cfg.carrier, 700, kT0, 5);
    std::map<std::string, std::vector<SnrSample>> input;
    input["ST0"] = synth.samples;
    Engine full(cfg, registry(1), flat_forecast(), {});
    EngineOutputs of;
    full.process(input, std::nullopt, of);
    full.finalize(of);
    Engine part(cfg, registry(1), flat_forecast(), {});
    EngineOutputs oa;
    part.process(input, kT0 + 330 * kSamplePeriodS, oa);
    std::stringstream ckpt;
    part.save_checkpoint(ckpt);
    Engine resumed(cfg, registry(1), flat_forecast(), {});
    resumed.load_checkpoint(ckpt);
    EngineOutputs ob;
    resumed.process(input, std::nullopt, ob);
    resumed.finalize(ob);
    bool restart_ok = oa.estimates.size() + ob.estimates.size() == of.estimates.size();
    if (restart_ok) {
        for (size_t i = 0; i < of.estimates.size(); ++i) {
            const auto& want = of.estimates[i];
            const auto& got = i < oa.estimates.size()
                                  ? oa.estimates[i]
                                  : ob.estimates[i - oa.estimates.size()];
            if (want.epsilon_db != got.epsilon_db ||
                want.rate_mm_per_h != got.rate_mm_per_h ||
                want.rain_flag != got.rain_flag || want.time != got.time) {
                restart_ok = false;
                break;
            }
        }
        restart_ok = restart_ok && oa.events.size() + ob.events.size() ==
                                       of.events.size();
    }
    fs::remove_all(dir);
    DETAIL("simulate rerun %s, process rerun %s, checkpoint-resume %s",
           sim_ok ? "identical" : "DIFFERS", proc_ok ? "identical" : "DIFFERS",
           restart_ok ? "identical" : "DIFFERS");
    return sim_ok && proc_ok && restart_ok;
}

bool c12_tracker_separation() {
    const auto cfg = EngineConfig{};
    auto samples = gen_dry(cfg.synth.dry, 7 * 1440, kT0, 2026);
    TrackerState st = kf_init(samples[0].esn0_db, cfg.st);
    TrackerState ft = kf_init(samples[0].esn0_db, cfg.ft);
    std::int64_t within = 0;
    for (size_t i = 1; i < samples.size(); ++i) {
        st = kf_step(st, samples[i].esn0_db, cfg.st);
        ft = kf_step(ft, samples[i].esn0_db, cfg.ft);
        if (std::fabs(st.level_db - ft.level_db) < 0.15) ++within;
    }
    const double frac =
        static_cast<double>(within) / static_cast<double>(samples.size() - 1);
    DETAIL("|eta_ST - eta_FT| < 0.15 dB for %.4f%% of samples (>= 99.9%%)",
           frac * 100.0);
    return frac >= 0.999;
}

struct Criterion {
    int id;
    const char* name;
    std::function<bool()> fn;
};

}  // namespace

int main() {
    const std::vector<Criterion> criteria = {
        {1, "xi golden value", c1_xi_golden},
        {2, "equivalent melting-layer thickness", c2_equivalent_thickness},
        {3, "melting/liquid scale-factor identity", c3_scale_factor},
        {4, "ground footprint band", c4_footprint_band},
        {5, "closed forms vs quadrature", c5_quadrature},
        {6, "inversion round trip", c6_inversion_round_trip},
        {7, "melting-thickness sensitivity band", c7_delta_ml_sensitivity},
        {8, "false-alarm calibration", c8_false_alarm},
        {9, "end-to-end synthetic oracle", c9_end_to_end},
        {10, "impairment rejection", c10_impairment_rejection},
        {11, "determinism and restart", c11_determinism_restart},
        {12, "tracker separation", c12_tracker_separation},
    };
    int failures = 0;
    for (const auto& c : criteria) {
        detail_buf[0] = '\0';
        bool ok = false;
        try {
            ok = c.fn();
        } catch (const std::exception& e) {
            DETAIL("exception: %s", e.what());
        }
        std::printf("%s  %2d  %-40s %s\n", ok ? "PASS" : "FAIL", c.id, c.name,
                    detail_buf);
        if (!ok) ++failures;
    }
    if (failures) std::printf("%d criterion(s) failed\n", failures);
    return failures == 0 ? 0 : 1;
}
