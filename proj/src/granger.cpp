#include "insight/granger.hpp"

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <limits>
#include <optional>

#include "insight/error.hpp"
#include "insight/f_distribution.hpp"
#include "insight/parallel.hpp"

namespace insight {
namespace {

constexpr std::string_view kModule = "granger";
// |R_ii| below this fraction of the largest pivot counts as a dependent column.
constexpr double kRankThreshold = 1e-10;
constexpr double kPerfectFitRss = 1e-12;

[[noreturn]] void fail(ErrorCode code, const std::string& detail) { throw Error(kModule, code, detail); }

struct LeastSquares {
    Eigen::VectorXd beta;
    double rss = 0.0;
    Eigen::Index rank = 0;
    Eigen::Index cols = 0;
    std::size_t n_obs = 0;
};

// Regresses y_t (t = first_row .. n-1) on y_{t-1..t-p}, then x_{t-1..t-p} if x is
// non-empty, then a constant column if requested. Householder QR with column
// pivoting; the residual is formed explicitly rather than from normal equations.
LeastSquares least_squares(std::span<const double> y, std::span<const double> x, int lag, std::size_t first_row,
                           bool intercept) {
    const auto p = static_cast<Eigen::Index>(lag);
    const auto rows = static_cast<Eigen::Index>(y.size() - first_row);
    const Eigen::Index cols = p * (x.empty() ? 1 : 2) + (intercept ? 1 : 0);

    Eigen::MatrixXd design(rows, cols);
    Eigen::VectorXd target(rows);
    for (Eigen::Index r = 0; r < rows; ++r) {
        const std::size_t t = first_row + static_cast<std::size_t>(r);
        target(r) = y[t];
        for (Eigen::Index k = 0; k < p; ++k) {
            design(r, k) = y[t - 1 - static_cast<std::size_t>(k)];
            if (!x.empty()) design(r, p + k) = x[t - 1 - static_cast<std::size_t>(k)];
        }
        if (intercept) design(r, cols - 1) = 1.0;
    }

    Eigen::ColPivHouseholderQR<Eigen::MatrixXd> qr(design.rows(), design.cols());
    qr.setThreshold(kRankThreshold);
    qr.compute(design);

    LeastSquares out;
    out.beta = qr.solve(target);
    out.rss = (target - design * out.beta).squaredNorm();
    out.rank = qr.rank();
    out.cols = cols;
    out.n_obs = static_cast<std::size_t>(rows);
    return out;
}

void require_length(std::size_t n, int lag) {
    if (lag < 1) fail(ErrorCode::InvalidArgument, "lag must be >= 1");
    if (n < min_series_length(lag)) {
        fail(ErrorCode::TooShort, "need at least " + std::to_string(min_series_length(lag)) + " samples for lag " +
                                      std::to_string(lag) + ", got " + std::to_string(n));
    }
}

bool is_constant(std::span<const double> v) {
    if (v.empty()) return true;
    const auto [lo, hi] = std::minmax_element(v.begin(), v.end());
    const double scale = std::max({1.0, std::abs(*lo), std::abs(*hi)});
    return *hi - *lo <= 1e-12 * scale;
}

ARFit to_fit(const LeastSquares& ls, bool intercept) {
    if (ls.rank < ls.cols) {
        fail(ErrorCode::SingularDesign, "regressor matrix has rank " + std::to_string(ls.rank) + " < " +
                                            std::to_string(ls.cols));
    }
    ARFit fit;
    const auto slopes = intercept ? ls.cols - 1 : ls.cols;
    fit.coefficients.assign(ls.beta.data(), ls.beta.data() + slopes);
    fit.intercept = intercept ? ls.beta(ls.cols - 1) : 0.0;
    fit.rss = ls.rss;
    fit.n_obs = ls.n_obs;
    fit.n_params = static_cast<std::size_t>(ls.cols);
    return fit;
}

}  // namespace

void WindowConfig::validate() const {
    const auto bad = [](const std::string& msg) { throw Error(kModule, ErrorCode::InvalidConfig, msg); };
    if (lag < 1) bad("window.lag: must be >= 1");
    if (lag > p_max) bad("window.lag: must be <= window.p_max");
    if (!(alpha > 0.0 && alpha < 1.0)) bad("window.alpha: must lie in (0, 1)");
    if (window_length < min_series_length(lag)) {
        bad("window.window_length: must exceed 2*lag + 5 (" + std::to_string(2 * lag + 5) + ")");
    }
    if (lag_selection == LagSelection::Bic && window_length < min_series_length(p_max)) {
        bad("window.window_length: must exceed 2*p_max + 5 when lag_selection is bic");
    }
}

ARFit fit_ar(std::span<const double> y, int lag, bool include_intercept) {
    require_length(y.size(), lag);
    const auto lag_sz = static_cast<std::size_t>(lag);
    return to_fit(least_squares(y, {}, lag, lag_sz, include_intercept), include_intercept);
}

ARFit fit_ar(std::span<const double> y, std::span<const double> x, int lag, bool include_intercept) {
    if (x.size() != y.size()) fail(ErrorCode::InvalidArgument, "x and y lengths differ");
    require_length(y.size(), lag);
    const auto lag_sz = static_cast<std::size_t>(lag);
    return to_fit(least_squares(y, x, lag, lag_sz, include_intercept), include_intercept);
}

GrangerResult granger_test(std::span<const double> source, std::span<const double> dest, int lag,
                           bool include_intercept) {
    if (source.size() != dest.size()) fail(ErrorCode::InvalidArgument, "source and dest lengths differ");
    require_length(dest.size(), lag);
    if (is_constant(source)) fail(ErrorCode::ConstantSeries, "source series is constant");
    if (is_constant(dest)) fail(ErrorCode::ConstantSeries, "dest series is constant");

    const auto lag_sz = static_cast<std::size_t>(lag);
    const LeastSquares restricted = least_squares(dest, {}, lag, lag_sz, include_intercept);
    const LeastSquares unrestricted = least_squares(dest, source, lag, lag_sz, include_intercept);

    GrangerResult r;
    r.lag_used = lag;
    r.df1 = lag;
    r.df2 = static_cast<int>(unrestricted.n_obs) - 2 * lag - (include_intercept ? 1 : 0);
    r.rss_restricted = restricted.rss;
    r.rss_unrestricted = unrestricted.rss;

    const bool perfect = unrestricted.rss < kPerfectFitRss;
    if (unrestricted.rank < unrestricted.cols && !(perfect && restricted.rss >= kPerfectFitRss)) {
        fail(ErrorCode::SingularDesign, "lags of source are linearly dependent on lags of dest");
    }

    if (perfect) {
        if (restricted.rss >= kPerfectFitRss) {
            r.f_stat = std::numeric_limits<double>::infinity();
            r.p_value = 0.0;
        } else {
            // dest is already perfectly explained by its own past.
            r.f_stat = 0.0;
            r.p_value = 1.0;
        }
        return r;
    }
    if (restricted.rss <= unrestricted.rss) {
        r.f_stat = 0.0;
        r.p_value = 1.0;
        return r;
    }
    r.f_stat = ((restricted.rss - unrestricted.rss) / r.df1) / (unrestricted.rss / r.df2);
    r.p_value = f_upper_tail(r.f_stat, r.df1, r.df2);
    return r;
}

int select_lag_bic(std::span<const double> source, std::span<const double> dest, int p_max, bool include_intercept) {
    if (source.size() != dest.size()) fail(ErrorCode::InvalidArgument, "source and dest lengths differ");
    require_length(dest.size(), p_max);

    const auto first_row = static_cast<std::size_t>(p_max);
    const double n = static_cast<double>(dest.size() - first_row);
    int best_lag = 1;
    double best_bic = std::numeric_limits<double>::infinity();
    for (int p = 1; p <= p_max; ++p) {
        const double rss = least_squares(dest, source, p, first_row, include_intercept).rss;
        const double k = 2.0 * p + (include_intercept ? 1.0 : 0.0);
        const double bic = rss < kPerfectFitRss ? -std::numeric_limits<double>::infinity()
                                                : n * std::log(rss / n) + k * std::log(n);
        if (bic < best_bic) {
            best_bic = bic;
            best_lag = p;
        }
        if (std::isinf(best_bic) && best_bic < 0) break;
    }
    return best_lag;
}

DiscoveryResult discover_graph(const TimeSeriesFrame& frame, const AnomalyEvent& anomaly, const WindowConfig& cfg,
                               std::size_t workers) {
    cfg.validate();
    if (anomaly.index >= frame.length()) fail(ErrorCode::InvalidArgument, "anomaly index outside the frame");

    std::size_t w = cfg.window_length;
    if (anomaly.index < w) {
        const int needed_lag = cfg.lag_selection == LagSelection::Bic ? cfg.p_max : cfg.lag;
        if (!cfg.allow_shrink || anomaly.index + 1 < min_series_length(needed_lag)) {
            fail(ErrorCode::WindowTooShort, "anomaly at index " + std::to_string(anomaly.index) + " has less than " +
                                                std::to_string(w) + " intervals of history");
        }
        w = anomaly.index;
    }

    DiscoveryResult result;
    result.start_index = anomaly.index - w;
    result.end_index = anomaly.index;
    const std::size_t len = w + 1;

    std::vector<const Channel*> eligible;
    for (const auto& ch : frame.channels) {
        result.graph.add_node(ch.id);
        const std::span<const double> window(ch.values.data() + result.start_index, len);
        if (ch.stats.zero_variance || is_constant(window)) {
            result.skipped_channels.push_back(ch.id);
        } else {
            eligible.push_back(&ch);
        }
    }
    if (eligible.size() < 2) {
        fail(ErrorCode::NoEligibleChannels, std::to_string(eligible.size()) + " channel(s) vary inside the window");
    }
    std::sort(eligible.begin(), eligible.end(), [](const Channel* a, const Channel* b) { return a->id < b->id; });

    struct Pair {
        const Channel* source;
        const Channel* dest;
    };
    std::vector<Pair> pairs;
    for (const auto* s : eligible) {
        for (const auto* d : eligible) {
            if (s != d) pairs.push_back({s, d});
        }
    }

    struct Outcome {
        std::optional<GrangerResult> test;
        std::string diagnostic;
    };
    std::vector<Outcome> outcomes(pairs.size());
    parallel_for(pairs.size(), workers, [&](std::size_t i) {
        const std::span<const double> src(pairs[i].source->values.data() + result.start_index, len);
        const std::span<const double> dst(pairs[i].dest->values.data() + result.start_index, len);
        try {
            const int lag = cfg.lag_selection == LagSelection::Bic
                                ? select_lag_bic(src, dst, cfg.p_max, cfg.include_intercept)
                                : cfg.lag;
            GrangerResult r = granger_test(src, dst, lag, cfg.include_intercept);
            r.source = pairs[i].source->id;
            r.dest = pairs[i].dest->id;
            outcomes[i].test = std::move(r);
        } catch (const Error& e) {
            if (e.code() != ErrorCode::SingularDesign) throw;
            outcomes[i].diagnostic = pairs[i].source->id + "->" + pairs[i].dest->id + ": " + e.detail();
        }
    });

    for (auto& outcome : outcomes) {
        if (!outcome.test) {
            result.diagnostics.push_back(std::move(outcome.diagnostic));
            continue;
        }
        const GrangerResult& r = *outcome.test;
        if (r.p_value < cfg.alpha) result.graph.add_edge(r.source, r.dest, {r.f_stat, r.p_value, r.lag_used});
        result.tests.push_back(std::move(*outcome.test));
    }
    return result;
}

}  // namespace insight
