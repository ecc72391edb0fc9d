#pragma once

#include <cstddef>
#include <span>
#include <string>
#include <vector>

#include "insight/anomaly.hpp"
#include "insight/causal_graph.hpp"
#include "insight/ingest.hpp"

namespace insight {

enum class LagSelection { Fixed, Bic };

struct WindowConfig {
    /// w: the window is [t_a - w, t_a], i.e. w + 1 samples.
    std::size_t window_length = 24;
    int lag = 3;
    LagSelection lag_selection = LagSelection::Fixed;
    int p_max = 6;
    double alpha = 0.05;
    bool include_intercept = false;
    /// Shrink the window to the available history instead of failing with WindowTooShort.
    bool allow_shrink = false;

    void validate() const;
};

/// Least-squares fit of y_t on its own lags (restricted) or on its own lags
/// followed by the lags of x (unrestricted).
struct ARFit {
    std::vector<double> coefficients;  // a_1..a_p, then b_1..b_p when x is present
    double intercept = 0.0;
    double rss = 0.0;
    std::size_t n_obs = 0;
    std::size_t n_params = 0;
};

/// Minimum series length accepted by fit_ar / granger_test for a given lag.
constexpr std::size_t min_series_length(int lag) { return 2 * static_cast<std::size_t>(lag) + 6; }

/// Restricted model. Throws TooShort, SingularDesign.
ARFit fit_ar(std::span<const double> y, int lag, bool include_intercept = false);
/// Unrestricted model. Throws TooShort, SingularDesign, InvalidArgument on length mismatch.
ARFit fit_ar(std::span<const double> y, std::span<const double> x, int lag, bool include_intercept = false);

struct GrangerResult {
    std::string source;
    std::string dest;
    double f_stat = 0.0;  // may be +infinity
    double p_value = 1.0;
    int df1 = 0;
    int df2 = 0;
    int lag_used = 0;
    double rss_restricted = 0.0;
    double rss_unrestricted = 0.0;
};

/// Does `source` Granger-cause `dest` at the given lag? Throws TooShort,
/// ConstantSeries, SingularDesign (when the unrestricted design is rank
/// deficient without yielding a perfect fit).
GrangerResult granger_test(std::span<const double> source, std::span<const double> dest, int lag,
                           bool include_intercept = false);

/// argmin_p BIC of the unrestricted model over p in [1, p_max], all candidates
/// fitted on the common sample that drops the first p_max points.
int select_lag_bic(std::span<const double> source, std::span<const double> dest, int p_max,
                   bool include_intercept = false);

struct DiscoveryResult {
    CausalGraph graph;
    std::size_t start_index = 0;
    std::size_t end_index = 0;  // inclusive, == anomaly index
    /// Every completed test in canonical (source, dest) order, significant or not.
    std::vector<GrangerResult> tests;
    /// Channels excluded from testing (zero-variance or constant in the window).
    std::vector<std::string> skipped_channels;
    /// Pairs dropped because of a singular design, as "source->dest: reason".
    std::vector<std::string> diagnostics;
};

/// Pairwise Granger tests over the window ending at the anomaly. Edge i->j is
/// recorded iff p < alpha. Output is independent of `workers`.
DiscoveryResult discover_graph(const TimeSeriesFrame& frame, const AnomalyEvent& anomaly, const WindowConfig& cfg,
                               std::size_t workers = 1);

}  // namespace insight
