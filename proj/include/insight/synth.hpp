#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <random>
#include <string>
#include <vector>

#include "insight/anomaly.hpp"
#include "insight/causal_graph.hpp"
#include "insight/ingest.hpp"

namespace insight {

/// Standard normals by the Box-Muller transform over a 64-bit Mersenne Twister.
/// Both engine and transform are fixed algorithms, so a seed names the same
/// stream on every platform.
class GaussianSource {
public:
    explicit GaussianSource(std::uint64_t seed) : engine_(seed) {}

    double next();

private:
    double uniform_open();  // (0, 1]

    std::mt19937_64 engine_;
    double spare_ = 0.0;
    bool has_spare_ = false;
};

struct SynthEdge {
    std::string source;
    std::string dest;
    int lag = 1;
    double coefficient = 0.0;
};

struct SynthSpec {
    std::vector<std::string> channels;
    std::vector<SynthEdge> edges;
    std::vector<double> self_coefficients;  // AR(1) term per channel, |c| < 1
    std::vector<double> noise_std;          // per channel, >= 0
    std::size_t n = 500;
    std::uint64_t seed = 0;
    EpochSeconds start = 1546300800;  // 2019-01-01T00:00:00Z
    std::int64_t interval = 3600;

    int max_lag() const;
    void validate() const;
};

/// Exogenous step added to one channel's innovation for `duration` steps,
/// expressed in multiples of that channel's noise_std.
struct Injection {
    std::string channel;
    std::size_t start_index = 0;
    std::size_t duration = 0;
    double magnitude = 0.0;
};

struct ScenarioSpec {
    SynthSpec base;
    Injection injection;
    std::string target = "energy";
    double z_threshold = 3.0;

    void validate() const;
};

struct SynthOutput {
    /// Raw simulated values; stats are the identity (mean 0, std 1).
    TimeSeriesFrame frame;
    CausalGraph truth;
};

/// x_t^j = self_j x_{t-1}^j + sum(coef * x_{t-lag}^src) + N(0, noise_std_j^2),
/// started from zeros with 10 * max_lag burn-in steps discarded.
SynthOutput generate_var(const SynthSpec& spec);

struct ScenarioOutput {
    TimeSeriesFrame frame;
    CausalGraph truth;
    /// Largest |z| of the target inside the injection response window, when
    /// the injected channel reaches the target and that |z| clears the threshold.
    std::optional<AnomalyEvent> expected_anomaly;
    /// Injected channel first, then the target's other direct parents that descend from it.
    /// Empty when the injection cannot reach the target.
    std::vector<std::string> expected_causes;
};

ScenarioOutput build_scenario(const ScenarioSpec& spec);

/// Five channels (occupancy, zone3_temp, chilled_water_flow, damper, energy)
/// with occupancy -> zone3_temp -> energy, occupancy -> energy,
/// chilled_water_flow -> energy, an isolated damper, and an occupancy step.
ScenarioSpec default_scenario(std::uint64_t seed);

/// First index past the injection response window (exclusive end).
std::size_t response_window_end(const ScenarioSpec& spec);

}  // namespace insight
