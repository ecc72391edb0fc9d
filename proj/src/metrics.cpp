#include "insight/metrics.hpp"

#include <algorithm>
#include <cstdio>
#include <set>

#include "insight/error.hpp"

namespace insight {
namespace {

constexpr std::string_view kModule = "metrics";

const Prediction* match(std::span<const Prediction> predictions, EpochSeconds t, EpochSeconds tolerance) {
    const Prediction* best = nullptr;
    EpochSeconds best_gap = 0;
    for (const auto& p : predictions) {
        const EpochSeconds gap = p.anomaly_time > t ? p.anomaly_time - t : t - p.anomaly_time;
        if (gap > tolerance) continue;
        if (best == nullptr || gap < best_gap || (gap == best_gap && p.anomaly_time < best->anomaly_time)) {
            best = &p;
            best_gap = gap;
        }
    }
    return best;
}

AnomalyScore score(const GroundTruthAnnotation& truth, const Prediction* pred) {
    AnomalyScore s;
    s.anomaly_time = truth.anomaly_time;
    if (pred == nullptr) return s;
    s.matched = true;

    const auto& causes = pred->causes.causes;
    if (causes.empty()) return s;
    const std::set<std::string> truth_set(truth.true_causes.begin(), truth.true_causes.end());

    s.top1_correct = causes.front().channel == truth.primary_cause;
    s.precision_at_1 = truth_set.count(causes.front().channel) ? 1.0 : 0.0;

    const std::size_t top = std::min<std::size_t>(3, causes.size());
    std::set<std::string> seen;
    std::size_t hits = 0;
    for (std::size_t i = 0; i < top; ++i) {
        if (seen.insert(causes[i].channel).second && truth_set.count(causes[i].channel)) ++hits;
    }
    s.precision_at_3 = static_cast<double>(hits) / static_cast<double>(top);
    s.recall_at_3 = static_cast<double>(hits) / static_cast<double>(truth_set.size());
    return s;
}

}  // namespace

EvaluationReport evaluate(std::span<const Prediction> predictions, std::span<const GroundTruthAnnotation> truth,
                          EpochSeconds tolerance) {
    if (truth.empty()) throw Error(kModule, ErrorCode::EmptyTruth, "no annotations to evaluate against");
    if (tolerance < 0) throw Error(kModule, ErrorCode::InvalidArgument, "tolerance must be >= 0");

    std::vector<const GroundTruthAnnotation*> ordered;
    std::set<EpochSeconds> times;
    for (const auto& a : truth) {
        if (!times.insert(a.anomaly_time).second) {
            throw Error(kModule, ErrorCode::DuplicateAnnotationTime,
                        "two annotations at " + format_iso8601(a.anomaly_time));
        }
        if (a.true_causes.empty()) {
            throw Error(kModule, ErrorCode::InvalidArgument, "annotation at " + format_iso8601(a.anomaly_time) +
                                                                 " has no true causes");
        }
        if (std::find(a.true_causes.begin(), a.true_causes.end(), a.primary_cause) == a.true_causes.end()) {
            throw Error(kModule, ErrorCode::InvalidArgument, "annotation at " + format_iso8601(a.anomaly_time) +
                                                                 ": primary cause not among true causes");
        }
        ordered.push_back(&a);
    }
    std::sort(ordered.begin(), ordered.end(),
              [](const auto* a, const auto* b) { return a->anomaly_time < b->anomaly_time; });

    EvaluationReport report;
    report.n_annotations = ordered.size();
    double acc = 0.0, p3 = 0.0, r3 = 0.0;
    for (const auto* a : ordered) {
        const AnomalyScore s = score(*a, match(predictions, a->anomaly_time, tolerance));
        if (s.matched) ++report.n_evaluated;
        acc += s.top1_correct ? 1.0 : 0.0;
        p3 += s.precision_at_3;
        r3 += s.recall_at_3;
        report.per_anomaly.push_back(s);
    }
    const double n = static_cast<double>(ordered.size());
    report.acc_at_1 = acc / n;
    report.precision_at_3 = p3 / n;
    report.recall_at_3 = r3 / n;
    return report;
}

std::string format_report_table(const EvaluationReport& report) {
    std::string out;
    char line[160];
    std::snprintf(line, sizeof line, "%-22s %7s %7s %7s %7s\n", "anomaly_time", "matched", "top1", "P@3", "R@3");
    out += line;
    for (const auto& s : report.per_anomaly) {
        std::snprintf(line, sizeof line, "%-22s %7s %7s %7.3f %7.3f\n", format_iso8601(s.anomaly_time).c_str(),
                      s.matched ? "yes" : "no", s.top1_correct ? "yes" : "no", s.precision_at_3, s.recall_at_3);
        out += line;
    }
    std::snprintf(line, sizeof line, "%-22s %7zu %7.3f %7.3f %7.3f\n", "mean (Acc@1, P@3, R@3)", report.n_evaluated,
                  report.acc_at_1, report.precision_at_3, report.recall_at_3);
    out += line;
    return out;
}

}  // namespace insight
