#include "rainlink/config.hpp"

#include <algorithm>
#include <fstream>
#include <sstream>

namespace rainlink {

void StationRecord::validate() const {
    if (station_id.empty()) throw ConfigError("station: empty id");
    if (!(elevation_deg > 5.0) || !(elevation_deg < 90.0)) {
        throw ConfigError("station " + station_id +
                          ": elevation must be in (5, 90) degrees");
    }
    if (!(melting_thickness_km > 0.0)) {
        throw ConfigError("station " + station_id + ": melting thickness must be > 0");
    }
}

void StationRegistry::validate() const {
    for (const auto& s : stations) s.validate();
    for (size_t i = 0; i < stations.size(); ++i) {
        for (size_t j = i + 1; j < stations.size(); ++j) {
            if (stations[i].station_id == stations[j].station_id) {
                throw ConfigError("stations: duplicate id " + stations[i].station_id);
            }
        }
    }
}

const StationRecord* StationRegistry::find(const std::string& id) const {
    for (const auto& s : stations) {
        if (s.station_id == id) return &s;
    }
    return nullptr;
}

void IsothermForecast::validate() const {
    for (size_t i = 0; i < entries.size(); ++i) {
        if (!(entries[i].h0_km >= 0.5) || !(entries[i].h0_km <= 6.0)) {
            throw ConfigError("forecast: h0 outside sanity band [0.5, 6] km");
        }
        if (i > 0 && entries[i].valid_time <= entries[i - 1].valid_time) {
            throw ConfigError("forecast: times must be strictly increasing");
        }
    }
}

std::optional<H0Lookup> IsothermForecast::lookup_h0(TimePoint t,
                                                    std::int64_t staleness_s) const {
    if (entries.empty() || t < entries.front().valid_time) return std::nullopt;
    auto it = std::upper_bound(
        entries.begin(), entries.end(), t,
        [](TimePoint v, const ForecastEntry& e) { return v < e.valid_time; });
    const ForecastEntry& e = *std::prev(it);
    return H0Lookup{e.h0_km, t - e.valid_time > staleness_s};
}

void GlobalFadePolicy::validate() const {
    if (!(station_fraction > 0.5) || !(station_fraction <= 1.0)) {
        throw ConfigError("fade: station_fraction must be in (0.5, 1]");
    }
    if (!(step_depth_db > 0.0)) throw ConfigError("fade: step depth must be > 0");
    if (window_samples < 1) throw ConfigError("fade: window must be >= 1 sample");
}

void EngineConfig::validate() const {
    link.validate();
    carrier.validate();
    ml.validate();
    ll.validate();
    st.validate();
    ft.validate();
    detector.validate();
    fade.validate();
    synth.dry.validate();
    synth.scenario.validate();
    if (!(default_h0_km > 0.5) || !(default_h0_km <= 6.0)) {
        throw ConfigError("config: h0_default_km outside [0.5, 6] km");
    }
    // xi must be a usable extraction constant.
    const double xi = compute_xi(link);
    if (!(xi > 0.0) || !(xi < 1.0)) {
        throw ConfigError("config: link parameters give xi outside (0, 1)");
    }
}

namespace {

struct KvFile {
    // Values in file order per key (some keys repeat, e.g. synth_event).
    std::map<std::string, std::vector<std::string>> values;
    std::map<std::string, bool> consumed;

    std::optional<std::string> single(const std::string& key) {
        auto it = values.find(key);
        if (it == values.end()) return std::nullopt;
        if (it->second.size() != 1) {
            throw ConfigError("config: key repeated: " + key);
        }
        consumed[key] = true;
        return it->second.front();
    }

    std::vector<std::string> multi(const std::string& key) {
        auto it = values.find(key);
        if (it == values.end()) return {};
        consumed[key] = true;
        return it->second;
    }

    void check_all_consumed() const {
        for (const auto& [key, _] : values) {
            if (!consumed.count(key)) {
                throw ConfigError("config: unknown key: " + key);
            }
        }
    }
};

std::string trim(const std::string& s) {
    size_t b = s.find_first_not_of(" \t\r");
    size_t e = s.find_last_not_of(" \t\r");
    if (b == std::string::npos) return "";
    return s.substr(b, e - b + 1);
}

KvFile read_kv(std::istream& is) {
    KvFile kv;
    std::string line;
    int lineno = 0;
    while (std::getline(is, line)) {
        ++lineno;
        const std::string t = trim(line);
        if (t.empty() || t[0] == '#') continue;
        const size_t eq = t.find('=');
        if (eq == std::string::npos) {
            throw ConfigError("config line " + std::to_string(lineno) +
                              ": expected key = value");
        }
        const std::string key = trim(t.substr(0, eq));
        const std::string val = trim(t.substr(eq + 1));
        if (key.empty()) {
            throw ConfigError("config line " + std::to_string(lineno) + ": empty key");
        }
        kv.values[key].push_back(val);
    }
    return kv;
}

double to_double(const std::string& key, const std::string& v) {
    try {
        size_t pos = 0;
        const double d = std::stod(v, &pos);
        if (pos != v.size()) throw std::invalid_argument("trailing");
        return d;
    } catch (const std::exception&) {
        throw ConfigError("config: bad numeric value for " + key + ": " + v);
    }
}

std::int64_t to_int(const std::string& key, const std::string& v) {
    try {
        size_t pos = 0;
        const long long d = std::stoll(v, &pos);
        if (pos != v.size()) throw std::invalid_argument("trailing");
        return d;
    } catch (const std::exception&) {
        throw ConfigError("config: bad integer value for " + key + ": " + v);
    }
}

TimePoint to_time(const std::string& key, const std::string& v) {
    auto t = parse_iso8601(v);
    if (!t) throw ConfigError("config: bad timestamp for " + key + ": " + v);
    return *t;
}

void get_num(KvFile& kv, const std::string& key, double& out) {
    if (auto v = kv.single(key)) out = to_double(key, *v);
}

void get_db_as_linear(KvFile& kv, const std::string& key, double& out) {
    if (auto v = kv.single(key)) out = db_to_linear(to_double(key, *v));
}

void get_int(KvFile& kv, const std::string& key, std::int64_t& out) {
    if (auto v = kv.single(key)) out = to_int(key, *v);
}

RainEventSpec parse_event_spec(const std::string& raw) {
    // start duration_s shape peak_rate [ramp_up_frac ramp_down_frac]
    std::istringstream ss(raw);
    std::string start_s, shape_s;
    RainEventSpec e;
    long long dur = 0;
    if (!(ss >> start_s >> dur >> shape_s >> e.peak_rate_mm_per_h)) {
        throw ConfigError("config: bad synth_event: " + raw);
    }
    e.start = to_time("synth_event", start_s);
    e.duration_s = dur;
    if (shape_s == "trapezoid") {
        e.shape = EventShape::kTrapezoid;
    } else if (shape_s == "double_peak") {
        e.shape = EventShape::kDoublePeak;
    } else {
        throw ConfigError("config: unknown event shape: " + shape_s);
    }
    double ru = 0, rd = 0;
    if (ss >> ru >> rd) {
        e.ramp_up_frac = ru;
        e.ramp_down_frac = rd;
    }
    return e;
}

}  // namespace

EngineConfig parse_engine_config(std::istream& is) {
    KvFile kv = read_kv(is);
    EngineConfig c;

    get_db_as_linear(kv, "link_atm_loss_db", c.link.atm_loss);
    get_db_as_linear(kv, "link_cloud_loss_db", c.link.cloud_loss);
    get_num(kv, "link_t_cosmos_k", c.link.t_cosmos);
    get_num(kv, "link_t_meteo_k", c.link.t_meteo);
    get_num(kv, "link_t_ground_k", c.link.t_ground);
    get_num(kv, "link_t_receiver_k", c.link.t_receiver);

    get_num(kv, "carrier_flux_density_w_m2", c.carrier.flux_density);
    get_num(kv, "carrier_rx_gain", c.carrier.rx_gain);
    get_num(kv, "carrier_wavelength_m", c.carrier.wavelength);
    get_num(kv, "carrier_symbol_rate_baud", c.carrier.symbol_rate);

    get_num(kv, "coeff_ml_alpha", c.ml.alpha);
    get_num(kv, "coeff_ml_beta", c.ml.beta);
    get_num(kv, "coeff_ll_alpha", c.ll.alpha);
    get_num(kv, "coeff_ll_beta", c.ll.beta);

    get_num(kv, "st_process_noise_level", c.st.process_noise_level);
    get_num(kv, "st_process_noise_drift", c.st.process_noise_drift);
    get_num(kv, "st_measurement_noise", c.st.measurement_noise);
    get_num(kv, "st_initial_cov_level", c.st.initial_cov_level);
    get_num(kv, "st_initial_cov_drift", c.st.initial_cov_drift);
    get_num(kv, "ft_process_noise_level", c.ft.process_noise_level);
    get_num(kv, "ft_process_noise_drift", c.ft.process_noise_drift);
    get_num(kv, "ft_measurement_noise", c.ft.measurement_noise);
    get_num(kv, "ft_initial_cov_level", c.ft.initial_cov_level);
    get_num(kv, "ft_initial_cov_drift", c.ft.initial_cov_drift);

    get_num(kv, "det_start_threshold_db", c.detector.start_threshold_db);
    get_num(kv, "det_end_threshold_db", c.detector.end_threshold_db);
    std::int64_t debounce = c.detector.min_event_samples;
    get_int(kv, "det_min_event_samples", debounce);
    c.detector.min_event_samples = static_cast<int>(debounce);

    std::int64_t window = c.fade.window_samples;
    get_int(kv, "fade_window_samples", window);
    c.fade.window_samples = static_cast<int>(window);
    get_num(kv, "fade_station_fraction", c.fade.station_fraction);
    get_num(kv, "fade_step_depth_db", c.fade.step_depth_db);

    get_num(kv, "h0_default_km", c.default_h0_km);
    get_int(kv, "forecast_staleness_s", c.forecast_staleness_s);

    get_num(kv, "synth_mean_snr_db", c.synth.dry.mean_snr_db);
    get_num(kv, "synth_diurnal_amplitude_db", c.synth.dry.diurnal_amplitude_db);
    get_num(kv, "synth_diurnal_phase_rad", c.synth.dry.diurnal_phase_rad);
    get_num(kv, "synth_scint_std_db", c.synth.dry.scint_std_db);
    get_num(kv, "synth_drift_db_per_day", c.synth.dry.drift_db_per_day);
    if (auto v = kv.single("synth_start")) {
        c.synth.start_time = to_time("synth_start", *v);
    }
    get_int(kv, "synth_samples", c.synth.n_samples);
    for (const auto& raw : kv.multi("synth_event")) {
        c.synth.scenario.events.push_back(parse_event_spec(raw));
    }
    std::sort(c.synth.scenario.events.begin(), c.synth.scenario.events.end(),
              [](const RainEventSpec& a, const RainEventSpec& b) {
                  return a.start < b.start;
              });

    kv.check_all_consumed();
    c.validate();
    return c;
}

namespace {

std::ifstream open_or_throw(const std::string& path, const char* what) {
    std::ifstream f(path);
    if (!f) throw ConfigError(std::string(what) + ": cannot open " + path);
    return f;
}

}  // namespace

EngineConfig load_engine_config(const std::string& path) {
    auto f = open_or_throw(path, "engine config");
    return parse_engine_config(f);
}

StationRegistry parse_stations(std::istream& is) {
    StationRegistry reg;
    std::string line;
    int lineno = 0;
    while (std::getline(is, line)) {
        ++lineno;
        const std::string t = trim(line);
        if (t.empty() || t[0] == '#') continue;
        std::istringstream ss(t);
        StationRecord r;
        if (!(ss >> r.station_id >> r.latitude_deg >> r.longitude_deg >>
              r.elevation_deg >> r.melting_thickness_km)) {
            throw ConfigError("stations line " + std::to_string(lineno) +
                              ": expected: id lat lon elevation_deg delta_ml_km");
        }
        reg.stations.push_back(std::move(r));
    }
    reg.validate();
    return reg;
}

StationRegistry load_stations(const std::string& path) {
    auto f = open_or_throw(path, "station registry");
    return parse_stations(f);
}

IsothermForecast parse_forecast(std::istream& is) {
    IsothermForecast fc;
    std::string line;
    bool first = true;
    while (std::getline(is, line)) {
        const std::string t = trim(line);
        if (t.empty() || t[0] == '#') continue;
        if (first && t.rfind("valid_time", 0) == 0) {
            first = false;
            continue;
        }
        first = false;
        const size_t comma = t.find(',');
        if (comma == std::string::npos) {
            throw ConfigError("forecast: expected valid_time,h0_km: " + t);
        }
        ForecastEntry e;
        e.valid_time = to_time("forecast", trim(t.substr(0, comma)));
        e.h0_km = to_double("forecast h0", trim(t.substr(comma + 1)));
        fc.entries.push_back(e);
    }
    fc.validate();
    return fc;
}

IsothermForecast load_forecast(const std::string& path) {
    auto f = open_or_throw(path, "isotherm forecast");
    return parse_forecast(f);
}

TransitSchedule parse_transit_schedule(std::istream& is) {
    TransitSchedule sched;
    std::string line;
    bool first = true;
    while (std::getline(is, line)) {
        const std::string t = trim(line);
        if (t.empty() || t[0] == '#') continue;
        if (first && t.rfind("station_id", 0) == 0) {
            first = false;
            continue;
        }
        first = false;
        std::vector<std::string> f;
        std::string cur;
        for (char ch : t) {
            if (ch == ',') {
                f.push_back(trim(cur));
                cur.clear();
            } else {
                cur += ch;
            }
        }
        f.push_back(trim(cur));
        if (f.size() != 4) {
            throw ConfigError("transit schedule: expected 4 columns: " + t);
        }
        SunTransit tr;
        tr.start = to_time("transit start", f[1]);
        tr.duration_s = to_int("transit duration", f[2]);
        tr.max_depth_db = to_double("transit depth", f[3]);
        sched[f[0]].push_back(tr);
    }
    for (auto& [id, windows] : sched) {
        std::sort(windows.begin(), windows.end(),
                  [](const SunTransit& a, const SunTransit& b) {
                      return a.start < b.start;
                  });
        ImpairmentSchedule check;
        check.sun_transits = windows;
        check.validate();
    }
    return sched;
}

TransitSchedule load_transit_schedule(const std::string& path) {
    auto f = open_or_throw(path, "transit schedule");
    return parse_transit_schedule(f);
}

}  // namespace rainlink
