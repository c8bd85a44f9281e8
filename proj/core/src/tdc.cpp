#include "recore/tdc.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

namespace recore::tdc {

void TdcConfig::validate() const {
    if (taps < 2) throw std::invalid_argument("tdc: taps must be >= 2");
    if (tau_tap_ps <= 0) throw std::invalid_argument("tdc: tau_tap must be positive");
    if (t_clk_ps <= 0) throw std::invalid_argument("tdc: t_clk must be positive");
    if (oversampling < 1) throw std::invalid_argument("tdc: oversampling must be >= 1");
    if (d0_ps < 0 || d0_ps >= t_clk_ps) throw std::invalid_argument("tdc: d0 out of (0, t_clk)");
}

RawCode RawCode::thermometer(int taps, int ones) {
    RawCode r;
    r.taps = taps;
    r.words.assign(size_t(taps + 63) / 64, 0);
    for (int i = 0; i < ones; ++i) r.words[size_t(i) / 64] |= uint64_t(1) << (i % 64);
    return r;
}

bool RawCode::is_thermometer() const {
    bool seen_zero = false;
    for (int i = 0; i < taps; ++i) {
        if (bit(i)) {
            if (seen_zero) return false;
        } else {
            seen_zero = true;
        }
    }
    return true;
}

int RawCode::popcount() const {
    int n = 0;
    for (uint64_t w : words) n += __builtin_popcountll(w);
    return n;
}

void DisturbanceTrace::validate() const {
    double prev_end = -1.0;
    for (const auto& p : pulses) {
        if (p.t_start_cycles >= p.t_end_cycles)
            throw std::invalid_argument("trace: pulse must have t_start < t_end");
        if (p.t_start_cycles < prev_end)
            throw std::invalid_argument("trace: pulses must be ordered and non-overlapping");
        prev_end = p.t_end_cycles;
    }
}

double DisturbanceTrace::dv_at(double t, int sensor, double attenuation) const {
    for (const auto& p : pulses) {
        if (t < p.t_start_cycles || t >= p.t_end_cycles) continue;
        if (p.sensor_scope < 0 || p.sensor_scope == sensor) return p.dv_mv;
        return p.dv_mv * attenuation;
    }
    return 0.0;
}

std::optional<double> preset_dv_mv(std::string_view name) {
    if (name == "radiate") return 50.0;    // exposure that never faults
    if (name == "softfault") return 120.0;  // enough to fault logic
    if (name == "hardfault") return 300.0;  // damaging amplitude
    return std::nullopt;
}

DisturbanceTrace parse_trace_csv(std::string_view text) {
    DisturbanceTrace trace;
    std::istringstream in{std::string(text)};
    std::string line;
    size_t line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        size_t hash = line.find('#');
        if (hash != std::string::npos) line = line.substr(0, hash);
        if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
        if (line_no == 1 && line.find("t_start") != std::string::npos) continue;  // header

        std::istringstream row(line);
        std::string f0, f1, f2, f3;
        if (!std::getline(row, f0, ',') || !std::getline(row, f1, ',') ||
            !std::getline(row, f2, ','))
            throw std::runtime_error("trace line " + std::to_string(line_no) +
                                     ": expected t_start,t_end,dv_mv,sensor_scope");
        std::getline(row, f3, ',');

        Pulse p;
        p.t_start_cycles = std::stod(f0);
        p.t_end_cycles = std::stod(f1);
        try {
            size_t used = 0;
            p.dv_mv = std::stod(f2, &used);
            if (used != f2.find_last_not_of(" \t\r") + 1) throw std::invalid_argument("");
        } catch (const std::exception&) {
            std::string name = f2;
            name.erase(std::remove_if(name.begin(), name.end(), ::isspace), name.end());
            auto dv = preset_dv_mv(name);
            if (!dv)
                throw std::runtime_error("trace line " + std::to_string(line_no) +
                                         ": unknown amplitude '" + f2 + "'");
            p.dv_mv = *dv;
        }
        std::string scope = f3;
        scope.erase(std::remove_if(scope.begin(), scope.end(), ::isspace), scope.end());
        if (scope.empty() || scope == "global") p.sensor_scope = -1;
        else p.sensor_scope = std::stoi(scope);
        trace.pulses.push_back(p);
    }
    trace.validate();
    return trace;
}

void DetectorConfig::validate() const {
    if (threshold < 1) throw std::invalid_argument("detector: threshold must be >= 1");
    if (persistence < 1) throw std::invalid_argument("detector: persistence must be >= 1");
}

double NoiseSource::gauss() {
    if (spare_) {
        double v = *spare_;
        spare_.reset();
        return v;
    }
    // Box-Muller; uniform doubles drawn directly from the engine keep the
    // stream identical across standard libraries.
    double u1 = 0.0;
    do {
        u1 = double(rng_()) / double(UINT64_MAX);
    } while (u1 <= 1e-300);
    double u2 = double(rng_()) / double(UINT64_MAX);
    double r = std::sqrt(-2.0 * std::log(u1));
    double a = 2.0 * M_PI * u2;
    spare_ = r * std::sin(a);
    return r * std::cos(a);
}

TdcSample sample(const TdcConfig& cfg, double dv_mv, NoiseSource& noise) {
    cfg.validate();
    if (!cfg.calibrated()) throw CalibrationError("tdc: sample() before calibrate()");
    double jitter = cfg.sigma_ps > 0 ? noise.gauss() * cfg.sigma_ps : 0.0;
    double per_tap = cfg.tau_tap_ps * (1.0 + cfg.alpha_per_mv * dv_mv);
    long k;
    if (per_tap <= 0.0) {
        // Overshoot beyond the model's range: the edge races the whole line.
        k = cfg.taps;
    } else {
        k = std::lround((cfg.t_clk_ps - cfg.d0_ps + jitter) / per_tap);
    }
    k = std::clamp(k, 0l, long(cfg.taps));
    TdcSample s;
    s.raw = RawCode::thermometer(cfg.taps, int(k));
    s.hw = int(k);
    return s;
}

TdcConfig calibrate(const TdcConfig& cfg_in, int samples, uint64_t seed) {
    if (samples < 100) throw std::invalid_argument("tdc: calibration needs >= 100 samples");
    TdcConfig cfg = cfg_in;
    const double target = cfg.taps / 2.0;

    // Reachability: even with the launch delay collapsed to zero the edge
    // must be able to cross half the line within one period.
    double max_taps = std::min(double(cfg.taps), cfg.t_clk_ps / cfg.tau_tap_ps);
    if (max_taps < target - 1.0)
        throw CalibrationError(
            "tdc: HW target " + std::to_string(int(target)) +
            " unreachable: the delay line spans only " + std::to_string(max_taps) +
            " taps per clock period; lower tau_tap or the tap count");

    auto mean_hw = [&](double d0) {
        TdcConfig probe = cfg;
        probe.d0_ps = d0;
        NoiseSource noise(seed);  // same stream per evaluation: deterministic search
        double acc = 0.0;
        for (int i = 0; i < samples; ++i) acc += sample(probe, 0.0, noise).hw;
        return acc / samples;
    };

    // The outer contract is a mean within [target-1, target+1]; bisect to a
    // half-count so the noise-free case pins the midpoint exactly.
    double lo = 0.0, hi = cfg.t_clk_ps;  // mean HW decreases as d0 grows
    for (int iter = 0; iter < 64; ++iter) {
        double mid = 0.5 * (lo + hi);
        double mean = mean_hw(mid);
        if (std::abs(mean - target) <= 0.5) {
            cfg.d0_ps = mid;
            return cfg;
        }
        if (mean > target) lo = mid;
        else hi = mid;
    }
    throw CalibrationError("tdc: calibration did not converge");
}

Detector::Detector(DetectorConfig cfg, int baseline) : cfg_(std::move(cfg)), baseline_(baseline) {
    cfg_.validate();
}

std::optional<Alert> Detector::feed(const TdcSample& s) {
    int dev = std::abs(s.hw - baseline_);
    if (dev >= cfg_.threshold) {
        ++deviating_run_;
        in_band_run_ = 0;
        peak_ = std::max(peak_, dev);
        if (armed_ && deviating_run_ >= cfg_.persistence) {
            armed_ = false;
            return Alert{s.t, cfg_.tag, peak_};
        }
    } else {
        ++in_band_run_;
        deviating_run_ = 0;
        if (!armed_ && in_band_run_ >= cfg_.persistence) {
            armed_ = true;
            peak_ = 0;
        }
    }
    return std::nullopt;
}

std::vector<Alert> detect(const std::vector<TdcSample>& stream, const DetectorConfig& det,
                          int baseline) {
    Detector d(det, baseline);
    std::vector<Alert> alerts;
    for (const auto& s : stream)
        if (auto a = d.feed(s)) alerts.push_back(*a);
    return alerts;
}

SensorBank::SensorBank(const SensorOptions& opts, uint64_t noise_seed) : opts_(opts) {
    if (opts.count < 1) throw std::invalid_argument("sensor bank: count must be >= 1");
    TdcConfig calibrated =
        calibrate(opts.tdc, opts.calibration_samples, noise_seed ^ 0x9e3779b97f4a7c15ull);
    for (int i = 0; i < opts.count; ++i) {
        DetectorConfig det = opts.detector;
        det.tag = "tdc" + std::to_string(i);
        sensors_.push_back(Sensor{calibrated, Detector(det, calibrated.taps / 2),
                                  NoiseSource(noise_seed + uint64_t(i)), det.tag});
    }
}

std::vector<Alert> SensorBank::sample_all(double t, const DisturbanceTrace& trace,
                                          const SampleSink& dump) {
    std::vector<Alert> alerts;
    for (size_t i = 0; i < sensors_.size(); ++i) {
        auto& s = sensors_[i];
        double dv = trace.dv_at(t, int(i), opts_.attenuation);
        TdcSample smp = sample(s.cfg, dv, s.noise);
        smp.t = t;
        if (dump) dump(int(i), smp);
        if (auto a = s.detector.feed(smp)) alerts.push_back(*a);
    }
    return alerts;
}

}  // namespace recore::tdc
