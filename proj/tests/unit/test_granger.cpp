#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>
#include <limits>
#include <random>

#include "insight/error.hpp"
#include "insight/granger.hpp"
#include "insight/synth.hpp"
#include "oracles/f_quadrature.hpp"
#include "oracles/ols_oracle.hpp"

using namespace insight;

namespace {

std::vector<double> noise(std::uint64_t seed, std::size_t n) {
    GaussianSource g(seed);
    std::vector<double> v(n);
    for (auto& x : v) x = g.next();
    return v;
}

ErrorCode code_of(auto&& fn) {
    try {
        fn();
    } catch (const Error& e) {
        return e.code();
    }
    FAIL("no error thrown");
    return ErrorCode::IoError;
}

double rel(double a, long double b) {
    return static_cast<double>(std::fabs(a - b) / std::max<long double>(1e-300L, std::fabs(b)));
}

TimeSeriesFrame three_channel(std::uint64_t seed, std::size_t n) {
    SynthSpec s;
    s.channels = {"A", "B", "C"};
    s.edges = {{"A", "B", 1, 0.9}};
    s.self_coefficients = {0.0, 0.0, 0.0};
    s.noise_std = {0.1, 0.1, 0.1};
    s.n = n;
    s.seed = seed;
    return generate_var(s).frame;
}

}  // namespace

TEST_CASE("fit_ar matches the normal-equations oracle") {
    const auto y = noise(1, 120);
    const auto x = noise(2, 120);
    for (int lag : {1, 3}) {
        const ARFit r = fit_ar(y, lag);
        const auto o = oracle::ar_fit(y, nullptr, lag);
        REQUIRE(r.coefficients.size() == o.beta.size());
        for (std::size_t k = 0; k < o.beta.size(); ++k) CHECK(rel(r.coefficients[k], o.beta[k]) < 1e-8);
        CHECK(rel(r.rss, o.rss) < 1e-8);
        CHECK(r.n_obs == y.size() - static_cast<std::size_t>(lag));
        CHECK(r.n_params == static_cast<std::size_t>(lag));

        const ARFit u = fit_ar(y, x, lag);
        const auto ou = oracle::ar_fit(y, &x, lag);
        for (std::size_t k = 0; k < ou.beta.size(); ++k) CHECK(rel(u.coefficients[k], ou.beta[k]) < 1e-8);
        CHECK(rel(u.rss, ou.rss) < 1e-8);
        CHECK(u.n_params == 2 * static_cast<std::size_t>(lag));
    }
}

TEST_CASE("deterministic AR(1) is recovered exactly") {
    std::vector<double> y{1.0};
    for (int t = 1; t < 30; ++t) y.push_back(0.5 * y.back());
    const ARFit r = fit_ar(y, 1);
    CHECK(r.coefficients[0] == doctest::Approx(0.5).epsilon(1e-12));
    CHECK(r.rss < 1e-20);
}

TEST_CASE("fit_ar errors") {
    const auto y = noise(3, 50);
    CHECK(code_of([&] { fit_ar(y, y, 2); }) == ErrorCode::SingularDesign);
    std::vector<double> scaled(y);
    for (auto& v : scaled) v *= -3.0;
    CHECK(code_of([&] { fit_ar(y, scaled, 2); }) == ErrorCode::SingularDesign);
    CHECK(code_of([&] { fit_ar(std::span(y).first(9), 2); }) == ErrorCode::TooShort);
    CHECK_NOTHROW(fit_ar(std::span(y).first(10), 2));
}

TEST_CASE("intercept option") {
    auto y = noise(4, 80);
    for (auto& v : y) v += 25.0;
    const ARFit with = fit_ar(y, 2, true);
    const ARFit without = fit_ar(y, 2, false);
    CHECK(with.rss < without.rss);
    CHECK(with.n_params == 3);
    CHECK(with.intercept > 5.0);
}

TEST_CASE("perfect lagged copy gives infinite F") {
    const auto src = noise(5, 100);
    std::vector<double> dst(src.size());
    dst[0] = 0.3;
    for (std::size_t t = 1; t < src.size(); ++t) dst[t] = src[t - 1];
    const GrangerResult r = granger_test(src, dst, 3);
    CHECK(std::isinf(r.f_stat));
    CHECK(r.p_value == 0.0);
    CHECK(r.df1 == 3);
    CHECK(r.df2 == static_cast<int>(src.size()) - 3 - 6);
}

TEST_CASE("white noise p-value matches quadrature") {
    const auto a = noise(10, 200);
    const auto b = noise(11, 200);
    const GrangerResult r = granger_test(a, b, 3);

    const auto r0 = oracle::ar_fit(b, nullptr, 3);
    const auto r1 = oracle::ar_fit(b, &a, 3);
    const long double f_oracle = ((r0.rss - r1.rss) / 3) / (r1.rss / (r1.n_obs - 6));
    CHECK(rel(r.f_stat, f_oracle) < 1e-8);
    CHECK(std::fabs(r.p_value - oracle::f_tail_quadrature(static_cast<double>(f_oracle), 3, 191)) < 1e-6);
    CHECK(r.df2 == 191);
    CHECK(r.rss_unrestricted <= r.rss_restricted);
}

TEST_CASE("granger_test errors") {
    const auto a = noise(12, 40);
    const std::vector<double> flat(40, 2.0);
    CHECK(code_of([&] { granger_test(flat, a, 2); }) == ErrorCode::ConstantSeries);
    CHECK(code_of([&] { granger_test(a, flat, 2); }) == ErrorCode::ConstantSeries);
    CHECK(code_of([&] { granger_test(std::span(a).first(11), std::span(a).first(11), 3); }) == ErrorCode::TooShort);
}

TEST_CASE("F and p are invariant under affine rescaling") {
    const auto a = noise(20, 150);
    auto b = noise(21, 150);
    for (std::size_t t = 2; t < b.size(); ++t) b[t] += 0.3 * a[t - 2];
    const GrangerResult base = granger_test(a, b, 3);
    for (auto [s1, o1, s2, o2] : {std::tuple{5.0, 0.0, 1.0, 0.0}, std::tuple{1.0, 0.0, 0.01, 0.0},
                                  std::tuple{-2.0, 0.0, 300.0, 0.0}}) {
        std::vector<double> a2(a), b2(b);
        for (auto& v : a2) v = s1 * v + o1;
        for (auto& v : b2) v = s2 * v + o2;
        const GrangerResult r = granger_test(a2, b2, 3);
        CHECK(r.f_stat == doctest::Approx(base.f_stat).epsilon(1e-8));
        CHECK(std::fabs(r.p_value - base.p_value) < 1e-8);
    }
    // with an intercept, shifts are absorbed as well
    const GrangerResult bi = granger_test(a, b, 3, true);
    std::vector<double> a3(a), b3(b);
    for (auto& v : a3) v = 4 * v + 100;
    for (auto& v : b3) v = 0.5 * v - 7;
    const GrangerResult ri = granger_test(a3, b3, 3, true);
    CHECK(ri.f_stat == doctest::Approx(bi.f_stat).epsilon(1e-8));
}

TEST_CASE("nested models: RSS1 <= RSS0, F never negative") {
    for (std::uint64_t s = 0; s < 50; ++s) {
        const auto a = noise(100 + s, 40);
        const auto b = noise(200 + s, 40);
        const GrangerResult r = granger_test(a, b, 3);
        CHECK(r.rss_unrestricted <= r.rss_restricted + 1e-9);
        CHECK(r.f_stat >= 0.0);
        CHECK(r.p_value >= 0.0);
        CHECK(r.p_value <= 1.0);
    }
}

TEST_CASE("scenario: occupancy drives energy harder than chilled water") {
    int wins = 0;
    for (std::uint64_t seed = 0; seed < 20; ++seed) {
        const ScenarioOutput s = build_scenario(default_scenario(seed));
        const auto& energy = s.frame.at("energy").values;
        const double occ = granger_test(s.frame.at("occupancy").values, energy, 3).f_stat;
        const double chw = granger_test(s.frame.at("chilled_water_flow").values, energy, 3).f_stat;
        wins += occ > chw;
    }
    CHECK(wins == 20);
}

TEST_CASE("BIC picks up a lag-2 driver") {
    int hits = 0;
    for (std::uint64_t seed = 0; seed < 100; ++seed) {
        SynthSpec s;
        s.channels = {"src", "dst"};
        s.edges = {{"src", "dst", 2, 0.5}};
        s.self_coefficients = {0.0, 0.8};
        s.noise_std = {1.0, 0.1};
        s.n = 200;
        s.seed = seed;
        const auto f = generate_var(s).frame;
        hits += select_lag_bic(f.at("src").values, f.at("dst").values, 6) >= 2;
    }
    CHECK(hits >= 80);
}

TEST_CASE("BIC on a perfect lag-1 copy selects 1") {
    const auto src = noise(30, 80);
    std::vector<double> dst(src.size(), 0.0);
    for (std::size_t t = 1; t < src.size(); ++t) dst[t] = src[t - 1];
    CHECK(select_lag_bic(src, dst, 6) == 1);
}

TEST_CASE("BIC on white noise stays in range") {
    for (std::uint64_t s = 0; s < 20; ++s) {
        const int p = select_lag_bic(noise(40 + s, 60), noise(80 + s, 60), 5);
        CHECK(p >= 1);
        CHECK(p <= 5);
    }
    CHECK_THROWS_AS(select_lag_bic(noise(1, 17), noise(2, 17), 6), Error);
}

TEST_CASE("discover_graph: wired edge recovered, spurious edges rare") {
    // the true edge in >= 90 seeds; each absent edge shows up in <= 10 seeds
    int found = 0;
    std::map<std::pair<std::string, std::string>, int> spurious;
    for (std::uint64_t seed = 0; seed < 100; ++seed) {
        const auto f = three_channel(seed, 201);
        WindowConfig cfg;
        cfg.window_length = 200;
        const auto d = discover_graph(f, event_at(f, "B", 200, 200), cfg);
        found += d.graph.has_edge("A", "B");
        for (const auto& [key, _] : d.graph.edges()) {
            if (key != std::pair<std::string, std::string>{"A", "B"}) ++spurious[key];
        }
    }
    CHECK(found >= 90);
    for (const auto& [key, count] : spurious) {
        INFO(key.first << "->" << key.second);
        CHECK(count <= 10);
    }
}

TEST_CASE("discover_graph: window at the minimum legal length") {
    const auto f = three_channel(1, 40);
    WindowConfig cfg;
    cfg.lag = 3;
    cfg.window_length = min_series_length(3);
    CHECK_NOTHROW(cfg.validate());
    const auto d = discover_graph(f, event_at(f, "B", 30, cfg.window_length), cfg);
    CHECK(d.start_index == 30 - cfg.window_length);
    CHECK(d.end_index == 30);
    CHECK(d.tests.size() == 6);

    cfg.window_length = min_series_length(3) - 1;
    CHECK_THROWS_AS(cfg.validate(), Error);
}

TEST_CASE("discover_graph: short windows") {
    const auto f = three_channel(2, 100);
    WindowConfig cfg;
    CHECK(code_of([&] { discover_graph(f, event_at(f, "B", 10, 24), cfg); }) == ErrorCode::WindowTooShort);
    cfg.allow_shrink = true;
    CHECK(code_of([&] { discover_graph(f, event_at(f, "B", 10, 24), cfg); }) == ErrorCode::WindowTooShort);
    const auto d = discover_graph(f, event_at(f, "B", 15, 24), cfg);
    CHECK(d.start_index == 0);
    CHECK(d.end_index == 15);
}

TEST_CASE("discover_graph: ineligible channels") {
    TimeSeriesFrame f = three_channel(3, 60);
    f.channels[2].values.assign(60, 0.0);
    f.channels[2].stats.zero_variance = true;
    const auto d = discover_graph(f, event_at(f, "B", 59, 24), {});
    CHECK(d.skipped_channels == std::vector<std::string>{"C"});
    CHECK(d.tests.size() == 2);
    CHECK(d.graph.has_node("C"));

    f.channels[0].values.assign(60, 1.0);  // constant, though not flagged
    CHECK(code_of([&] { discover_graph(f, event_at(f, "B", 59, 24), {}); }) == ErrorCode::NoEligibleChannels);
}

TEST_CASE("discover_graph: singular pairs become diagnostics") {
    TimeSeriesFrame f = three_channel(4, 80);
    f.channels[2].values = f.channels[0].values;  // C duplicates A
    const auto d = discover_graph(f, event_at(f, "B", 79, 40), {.window_length = 40});
    CHECK(d.diagnostics.size() == 2);
    CHECK_FALSE(d.graph.has_edge("A", "C"));
    CHECK_FALSE(d.graph.has_edge("C", "A"));
    CHECK(d.tests.size() == 4);
}

TEST_CASE("discover_graph: bic lag selection") {
    const auto f = three_channel(5, 120);
    WindowConfig cfg;
    cfg.window_length = 100;
    cfg.lag_selection = LagSelection::Bic;
    cfg.p_max = 4;
    const auto d = discover_graph(f, event_at(f, "B", 119, 100), cfg);
    REQUIRE(d.graph.has_edge("A", "B"));
    for (const auto& t : d.tests) {
        CHECK(t.lag_used >= 1);
        CHECK(t.lag_used <= 4);
        CHECK(t.df1 == t.lag_used);
    }
}

TEST_CASE("discover_graph is independent of worker count") {
    SynthSpec s;
    s.channels = {"a", "b", "c", "d", "e", "f"};
    s.edges = {{"a", "b", 1, 0.5}, {"b", "c", 2, 0.4}, {"d", "e", 1, -0.6}, {"a", "f", 3, 0.3}};
    s.self_coefficients = std::vector<double>(6, 0.3);
    s.noise_std = std::vector<double>(6, 1.0);
    s.n = 300;
    s.seed = 77;
    const auto f = generate_var(s).frame;
    const auto ev = event_at(f, "c", 250, 48);
    const auto base = discover_graph(f, ev, {.window_length = 48}, 1);
    for (std::size_t w : {2u, 4u, 16u}) {
        const auto d = discover_graph(f, ev, {.window_length = 48}, w);
        CHECK(d.graph == base.graph);
        REQUIRE(d.tests.size() == base.tests.size());
        for (std::size_t i = 0; i < d.tests.size(); ++i) {
            CHECK(d.tests[i].source == base.tests[i].source);
            CHECK(d.tests[i].dest == base.tests[i].dest);
            CHECK(d.tests[i].f_stat == base.tests[i].f_stat);  // bitwise
        }
    }
}

TEST_CASE("window config validation") {
    WindowConfig c;
    c.lag = 0;
    CHECK_THROWS_AS(c.validate(), Error);
    c = {};
    c.alpha = 1.0;
    CHECK_THROWS_AS(c.validate(), Error);
    c = {};
    c.lag = 7;
    c.p_max = 6;
    c.window_length = 100;
    CHECK_THROWS_AS(c.validate(), Error);
    c = {};
    c.lag_selection = LagSelection::Bic;
    c.p_max = 10;
    CHECK_THROWS_AS(c.validate(), Error);
}
