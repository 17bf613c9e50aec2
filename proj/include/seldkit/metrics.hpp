#pragma once

#include <optional>
#include <span>
#include <utility>
#include <vector>

#include "seldkit/metadata.hpp"

namespace seldkit {

/// The four location-aware detection / class-aware localization scores.
struct SeldScores {
    double error_rate = 0.0;                         // ER_20
    double f_score = 0.0;                            // F_20
    std::optional<double> localization_error;        // LE, degrees; absent without matches
    double localization_recall = 0.0;                // LR
};

enum class ClassAverage { kMacro, kMicro };

struct EvalOptions {
    double doa_threshold_deg = 20.0;
    int segment_frames = 10;  // 1 s at the 100 ms metadata resolution
    ClassAverage average = ClassAverage::kMacro;
};

struct ClassScores {
    int class_idx = 0;
    long tp = 0;            // threshold-gated true positives
    long fp = 0;
    long fn = 0;
    long matched = 0;       // class-matched pairs regardless of threshold
    long ref_events = 0;    // reference segment-events
    double le_sum_deg = 0.0;

    double f_score() const {
        return 2.0 * tp + fp + fn == 0 ? 0.0 : 2.0 * tp / (2.0 * tp + fp + fn);
    }
    std::optional<double> localization_error() const {
        return matched == 0 ? std::nullopt : std::optional<double>(le_sum_deg / matched);
    }
    std::optional<double> localization_recall() const {
        return ref_events == 0 ? std::nullopt
                               : std::optional<double>(static_cast<double>(matched) / ref_events);
    }
};

struct EvalReport {
    SeldScores scores;
    std::vector<ClassScores> per_class;  // all 13 classes, in index order
};

/// Minimum-total-cost assignment of min(R, P) (row, col) pairs, solved with
/// the Hungarian algorithm. Ties between equally cheap assignments resolve
/// to the lexicographically smallest pair list. Pairs come back sorted.
std::vector<std::pair<int, int>> assign_min_cost(const std::vector<std::vector<double>>& cost);

/// Accumulates segment-level counts over one or more reference/prediction
/// file pairs, then reports jointly computed scores.
class SeldEvaluator {
public:
    explicit SeldEvaluator(EvalOptions options = {});

    void add(std::span<const SeldEvent> reference, std::span<const SeldEvent> predicted);

    EvalReport report() const;

private:
    EvalOptions options_;
    std::vector<ClassScores> classes_;
    long substitutions_ = 0;
    long deletions_ = 0;
    long insertions_ = 0;
    long ref_total_ = 0;
};

/// Scores one prediction list against one reference list.
SeldScores evaluate(std::span<const SeldEvent> reference, std::span<const SeldEvent> predicted,
                    const EvalOptions& options = {});

EvalReport evaluate_detailed(std::span<const SeldEvent> reference,
                             std::span<const SeldEvent> predicted,
                             const EvalOptions& options = {});

}  // namespace seldkit
