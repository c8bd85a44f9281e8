#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <random>
#include <stdexcept>
#include <string>
#include <vector>

namespace recore::tdc {

// Behavioral model of a tapped-delay-line sensor: a launch edge delayed by
// d0 propagates down `taps` buffer stages of nominal delay tau_tap each; the
// sample register captures a thermometer code whose Hamming weight tracks
// how far the edge got within one clock period. Supply disturbance stretches
// the per-tap delay by alpha per millivolt.
struct TdcConfig {
    int taps = 128;
    double tau_tap_ps = 25.0;
    double t_clk_ps = 5000.0;  // 200 MHz
    double d0_ps = 0.0;        // set by calibrate()
    double alpha_per_mv = 0.004;
    double sigma_ps = 5.0;  // gaussian jitter on the launch edge
    int oversampling = 4;   // samples per core cycle

    bool calibrated() const { return d0_ps > 0.0; }
    void validate() const;
};

// Thermometer code: hw leading ones, taps-hw trailing zeros.
struct RawCode {
    int taps = 0;
    std::vector<uint64_t> words;

    static RawCode thermometer(int taps, int ones);
    bool bit(int i) const { return (words[size_t(i) / 64] >> (i % 64)) & 1; }
    bool is_thermometer() const;
    int popcount() const;
};

struct TdcSample {
    double t = 0.0;  // core cycles, fractional under oversampling
    RawCode raw;
    int hw = 0;
};

struct Pulse {
    double t_start_cycles = 0.0;
    double t_end_cycles = 0.0;
    double dv_mv = 0.0;
    int sensor_scope = -1;  // -1: global, otherwise the near sensor index
};

struct DisturbanceTrace {
    std::vector<Pulse> pulses;
    uint64_t noise_seed = 1;

    void validate() const;  // pulses must be ordered, non-overlapping, well-formed
    // Amplitude seen by `sensor` at time t; pulses scoped to another sensor
    // arrive attenuated.
    double dv_at(double t, int sensor, double attenuation) const;
};

// CSV rows `t_start_cycles,t_end_cycles,dv_mv,sensor_scope`; dv_mv is a
// number or one of the amplitude presets; sensor_scope an index or "global".
DisturbanceTrace parse_trace_csv(std::string_view text);

// Amplitude presets for the three disturbance classes (sub-fault exposure,
// fault-inducing, and damaging), mapped onto the synthetic dv scale.
std::optional<double> preset_dv_mv(std::string_view name);

struct DetectorConfig {
    int threshold = 8;    // HW deviation units
    int persistence = 3;  // consecutive deviating samples before alerting
    std::string tag = "tdc0";

    void validate() const;
};

struct Alert {
    double t = 0.0;
    std::string sensor;
    int peak_deviation = 0;
};

struct CalibrationError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Deterministic gaussian source (Box-Muller over mt19937_64) so sample
// streams are reproducible bit-for-bit across runs.
class NoiseSource {
public:
    explicit NoiseSource(uint64_t seed) : rng_(seed) {}
    double gauss();

private:
    std::mt19937_64 rng_;
    std::optional<double> spare_;
};

// One reading at disturbance dv_mv. Positive dv (droop magnitude) stretches
// tap delays, so fewer taps propagate and HW drops.
TdcSample sample(const TdcConfig& cfg, double dv_mv, NoiseSource& noise);

// Binary-searches d0 until the mean HW of `samples` quiet readings sits in
// [taps/2 - 1, taps/2 + 1]. Throws CalibrationError when the midpoint HW is
// unreachable (delay line cannot span half the clock period).
TdcConfig calibrate(const TdcConfig& cfg, int samples, uint64_t seed);

// Streaming threshold detector: alerts after `persistence` consecutive
// samples deviate from baseline by >= threshold, then stays quiet until the
// signal has been back in band for `persistence` samples.
class Detector {
public:
    Detector(DetectorConfig cfg, int baseline);
    std::optional<Alert> feed(const TdcSample& s);
    const DetectorConfig& config() const { return cfg_; }

private:
    DetectorConfig cfg_;
    int baseline_;
    int deviating_run_ = 0;
    int in_band_run_ = 0;
    int peak_ = 0;
    bool armed_ = true;
};

std::vector<Alert> detect(const std::vector<TdcSample>& stream, const DetectorConfig& det,
                          int baseline);

// A pair (by default) of calibrated sensors sharing one disturbance trace.
// Pulses scoped to one sensor reach the others attenuated.
class SensorBank {
public:
    struct SensorOptions {
        int count = 2;
        double attenuation = 0.2;
        TdcConfig tdc;
        DetectorConfig detector;  // tag is overridden per sensor: tdc0, tdc1, ...
        int calibration_samples = 200;
    };

    SensorBank(const SensorOptions& opts, uint64_t noise_seed);

    using SampleSink = std::function<void(int sensor, const TdcSample&)>;

    // Samples every sensor at time t; returns any alerts raised.
    std::vector<Alert> sample_all(double t, const DisturbanceTrace& trace,
                                  const SampleSink& dump = {});

    int count() const { return int(sensors_.size()); }
    const TdcConfig& config(int i) const { return sensors_[size_t(i)].cfg; }
    int oversampling() const { return opts_.tdc.oversampling; }

private:
    struct Sensor {
        TdcConfig cfg;
        Detector detector;
        NoiseSource noise;
        std::string tag;
    };
    SensorOptions opts_;
    std::vector<Sensor> sensors_;
};

}  // namespace recore::tdc
