#include "insight/synth.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <numbers>
#include <queue>
#include <set>

#include "insight/error.hpp"

namespace insight {
namespace {

constexpr std::string_view kModule = "synth";

[[noreturn]] void invalid(const std::string& detail) { throw Error(kModule, ErrorCode::InvalidSpec, detail); }

std::size_t index_of(const std::vector<std::string>& channels, const std::string& id) {
    const auto it = std::find(channels.begin(), channels.end(), id);
    if (it == channels.end()) invalid("unknown channel '" + id + "'");
    return static_cast<std::size_t>(it - channels.begin());
}

struct CompiledEdge {
    std::size_t source;
    std::size_t dest;
    std::size_t lag;
    double coefficient;
};

SynthOutput simulate(const SynthSpec& spec, const Injection* injection) {
    spec.validate();
    const std::size_t k = spec.channels.size();
    const auto max_lag = static_cast<std::size_t>(spec.max_lag());
    const std::size_t burn_in = 10 * max_lag;
    const std::size_t total = burn_in + spec.n;

    std::vector<CompiledEdge> edges;
    for (const auto& e : spec.edges) {
        edges.push_back({index_of(spec.channels, e.source), index_of(spec.channels, e.dest),
                         static_cast<std::size_t>(e.lag), e.coefficient});
    }
    std::size_t inj_channel = k;
    if (injection != nullptr) inj_channel = index_of(spec.channels, injection->channel);

    // x[t * k + j]; values before t = 0 are zero.
    std::vector<double> x(total * k, 0.0);
    GaussianSource noise(spec.seed);
    for (std::size_t t = 0; t < total; ++t) {
        for (std::size_t j = 0; j < k; ++j) {
            double v = t > 0 ? spec.self_coefficients[j] * x[(t - 1) * k + j] : 0.0;
            v += spec.noise_std[j] * noise.next();
            x[t * k + j] = v;
        }
        for (const auto& e : edges) {
            if (t >= e.lag) x[t * k + e.dest] += e.coefficient * x[(t - e.lag) * k + e.source];
        }
        if (inj_channel < k && t >= burn_in) {
            const std::size_t i = t - burn_in;
            if (i >= injection->start_index && i < injection->start_index + injection->duration) {
                x[t * k + inj_channel] += injection->magnitude * spec.noise_std[inj_channel];
            }
        }
    }

    SynthOutput out;
    out.frame.start = spec.start;
    out.frame.interval = spec.interval;
    for (std::size_t j = 0; j < k; ++j) {
        Channel ch;
        ch.id = spec.channels[j];
        ch.values.resize(spec.n);
        for (std::size_t i = 0; i < spec.n; ++i) ch.values[i] = x[(burn_in + i) * k + j];
        out.frame.channels.push_back(std::move(ch));
        out.truth.add_node(spec.channels[j]);
    }
    for (const auto& e : spec.edges) {
        out.truth.add_edge(e.source, e.dest, {std::abs(e.coefficient), 0.0, e.lag});
    }
    return out;
}

bool reaches(const CausalGraph& g, const std::string& from, const std::string& to) {
    std::set<std::string> seen{from};
    std::queue<std::string> todo;
    todo.push(from);
    while (!todo.empty()) {
        const std::string cur = todo.front();
        todo.pop();
        if (cur == to) return true;
        for (const auto& [key, stats] : g.edges()) {
            if (key.first == cur && seen.insert(key.second).second) todo.push(key.second);
        }
    }
    return false;
}

}  // namespace

double GaussianSource::uniform_open() {
    // 53 random bits mapped onto (0, 1].
    return (static_cast<double>(engine_() >> 11) + 1.0) * 0x1.0p-53;
}

double GaussianSource::next() {
    if (has_spare_) {
        has_spare_ = false;
        return spare_;
    }
    const double radius = std::sqrt(-2.0 * std::log(uniform_open()));
    const double angle = 2.0 * std::numbers::pi * uniform_open();
    spare_ = radius * std::sin(angle);
    has_spare_ = true;
    return radius * std::cos(angle);
}

int SynthSpec::max_lag() const {
    int m = 1;
    for (const auto& e : edges) m = std::max(m, e.lag);
    return m;
}

void SynthSpec::validate() const {
    const std::size_t k = channels.size();
    if (k == 0) invalid("no channels");
    std::set<std::string> unique(channels.begin(), channels.end());
    if (unique.size() != k) invalid("duplicate channel names");
    if (self_coefficients.size() != k) invalid("self_coefficients must have one entry per channel");
    if (noise_std.size() != k) invalid("noise_std must have one entry per channel");
    for (double c : self_coefficients) {
        if (!(std::abs(c) < 1.0)) invalid("self coefficients must satisfy |c| < 1");
    }
    for (double s : noise_std) {
        if (!(s >= 0.0) || !std::isfinite(s)) invalid("noise_std must be finite and >= 0");
    }
    for (const auto& e : edges) {
        if (e.lag < 1) invalid("edge lags must be >= 1");
        if (e.source == e.dest) invalid("self edges belong in self_coefficients");
        if (!unique.count(e.source) || !unique.count(e.dest)) invalid("edge refers to an unknown channel");
        if (!std::isfinite(e.coefficient)) invalid("edge coefficients must be finite");
    }
    if (interval <= 0) invalid("interval must be > 0");
    if (n <= 10 * static_cast<std::size_t>(max_lag())) invalid("n must exceed 10 * max lag");
}

void ScenarioSpec::validate() const {
    base.validate();
    if (std::find(base.channels.begin(), base.channels.end(), injection.channel) == base.channels.end()) {
        invalid("injection channel '" + injection.channel + "' is not a channel");
    }
    if (std::find(base.channels.begin(), base.channels.end(), target) == base.channels.end()) {
        invalid("target '" + target + "' is not a channel");
    }
    if (injection.start_index >= base.n || injection.start_index + injection.duration > base.n) {
        invalid("injection window must lie inside [0, n)");
    }
    if (!std::isfinite(injection.magnitude)) invalid("injection magnitude must be finite");
    if (!(z_threshold > 0.0)) invalid("z_threshold must be > 0");
}

SynthOutput generate_var(const SynthSpec& spec) { return simulate(spec, nullptr); }

std::size_t response_window_end(const ScenarioSpec& spec) {
    const std::size_t tail = 3 * static_cast<std::size_t>(spec.base.max_lag());
    return std::min(spec.base.n, spec.injection.start_index + spec.injection.duration + tail);
}

ScenarioOutput build_scenario(const ScenarioSpec& spec) {
    spec.validate();
    SynthOutput sim = simulate(spec.base, &spec.injection);

    ScenarioOutput out;
    out.frame = std::move(sim.frame);
    out.truth = std::move(sim.truth);

    const std::string& injected = spec.injection.channel;
    const bool connected = injected == spec.target || reaches(out.truth, injected, spec.target);
    if (!connected || spec.injection.magnitude == 0.0 || spec.injection.duration == 0) return out;

    out.expected_causes.push_back(injected);
    for (const auto& name : spec.base.channels) {
        if (name != injected && out.truth.has_edge(name, spec.target) && reaches(out.truth, injected, name)) {
            out.expected_causes.push_back(name);
        }
    }

    const Channel& target = out.frame.at(spec.target);
    const double n = static_cast<double>(target.values.size());
    double mean = 0.0;
    for (double v : target.values) mean += v;
    mean /= n;
    double ss = 0.0;
    for (double v : target.values) ss += (v - mean) * (v - mean);
    const double sd = std::sqrt(ss / n);
    if (sd < 1e-12) return out;

    std::size_t best = spec.injection.start_index;
    for (std::size_t i = spec.injection.start_index; i < response_window_end(spec); ++i) {
        if (std::abs(target.values[i] - mean) > std::abs(target.values[best] - mean)) best = i;
    }
    const double z = (target.values[best] - mean) / sd;
    if (std::abs(z) > spec.z_threshold) {
        AnomalyEvent ev;
        ev.index = best;
        ev.time = out.frame.time_at(best);
        ev.z_score = z;
        ev.magnitude = target.values[best] - mean;
        out.expected_anomaly = ev;
    }
    return out;
}

ScenarioSpec default_scenario(std::uint64_t seed) {
    ScenarioSpec s;
    s.base.channels = {"occupancy", "zone3_temp", "chilled_water_flow", "damper", "energy"};
    s.base.self_coefficients = {0.6, 0.5, 0.5, 0.5, 0.3};
    s.base.noise_std = {1.0, 0.2, 1.0, 1.0, 0.5};
    // occupancy dominates the zone temperature so both show up as energy drivers
    s.base.edges = {
        {"occupancy", "zone3_temp", 1, 1.0},
        {"occupancy", "energy", 1, 0.6},
        {"zone3_temp", "energy", 1, 0.8},
        {"chilled_water_flow", "energy", 1, 0.3},
    };
    s.base.n = 300;
    s.base.seed = seed;
    s.base.start = 1554076800;  // 2019-04-01T00:00:00Z
    s.base.interval = 3600;
    s.injection = {"occupancy", 250, 4, 6.0};
    s.target = "energy";
    return s;
}

}  // namespace insight
