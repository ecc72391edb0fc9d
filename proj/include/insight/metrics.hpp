#pragma once

#include <cstddef>
#include <span>
#include <string>
#include <vector>

#include "insight/causal_graph.hpp"
#include "insight/timefmt.hpp"

namespace insight {

struct GroundTruthAnnotation {
    EpochSeconds anomaly_time = 0;
    std::vector<std::string> true_causes;
    std::string primary_cause;
};

struct Prediction {
    EpochSeconds anomaly_time = 0;
    CauseSet causes;
};

struct AnomalyScore {
    EpochSeconds anomaly_time = 0;
    bool matched = false;
    bool top1_correct = false;
    double precision_at_1 = 0.0;
    double precision_at_3 = 0.0;
    double recall_at_3 = 0.0;
};

struct EvaluationReport {
    double acc_at_1 = 0.0;
    double precision_at_3 = 0.0;
    double recall_at_3 = 0.0;
    std::size_t n_evaluated = 0;
    std::size_t n_annotations = 0;
    std::vector<AnomalyScore> per_anomaly;  // in annotation time order
};

/// Scores predictions against annotations. Each annotation takes the prediction
/// nearest in time within `tolerance` seconds (ties: earlier prediction);
/// unmatched annotations score zero. Throws EmptyTruth, DuplicateAnnotationTime.
EvaluationReport evaluate(std::span<const Prediction> predictions, std::span<const GroundTruthAnnotation> truth,
                          EpochSeconds tolerance = 0);

std::string format_report_table(const EvaluationReport& report);

}  // namespace insight
