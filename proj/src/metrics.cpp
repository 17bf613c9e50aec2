#include "seldkit/metrics.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>
#include <stdexcept>
#include <tuple>

namespace seldkit {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();
constexpr double kTieEps = 1e-7;  // costs are angles in [0, 180]

// Hungarian algorithm (potentials + augmenting paths). Expects
// rows <= cols and returns, per row, the assigned column.
std::vector<int> hungarian(const std::vector<std::vector<double>>& a) {
    const int n = static_cast<int>(a.size());
    const int m = n == 0 ? 0 : static_cast<int>(a[0].size());
    std::vector<double> u(static_cast<std::size_t>(n) + 1, 0.0);
    std::vector<double> v(static_cast<std::size_t>(m) + 1, 0.0);
    std::vector<int> match(static_cast<std::size_t>(m) + 1, 0);  // col -> row (1-based)
    std::vector<int> way(static_cast<std::size_t>(m) + 1, 0);

    for (int i = 1; i <= n; ++i) {
        match[0] = i;
        int j0 = 0;
        std::vector<double> minv(static_cast<std::size_t>(m) + 1, kInf);
        std::vector<bool> used(static_cast<std::size_t>(m) + 1, false);
        do {
            used[static_cast<std::size_t>(j0)] = true;
            const int i0 = match[static_cast<std::size_t>(j0)];
            int j1 = -1;
            double delta = kInf;
            for (int j = 1; j <= m; ++j) {
                if (used[static_cast<std::size_t>(j)]) continue;
                const double cur = a[static_cast<std::size_t>(i0) - 1][static_cast<std::size_t>(j) - 1] -
                                   u[static_cast<std::size_t>(i0)] - v[static_cast<std::size_t>(j)];
                if (cur < minv[static_cast<std::size_t>(j)]) {
                    minv[static_cast<std::size_t>(j)] = cur;
                    way[static_cast<std::size_t>(j)] = j0;
                }
                if (minv[static_cast<std::size_t>(j)] < delta) {
                    delta = minv[static_cast<std::size_t>(j)];
                    j1 = j;
                }
            }
            for (int j = 0; j <= m; ++j) {
                if (used[static_cast<std::size_t>(j)]) {
                    u[static_cast<std::size_t>(match[static_cast<std::size_t>(j)])] += delta;
                    v[static_cast<std::size_t>(j)] -= delta;
                } else {
                    minv[static_cast<std::size_t>(j)] -= delta;
                }
            }
            j0 = j1;
        } while (match[static_cast<std::size_t>(j0)] != 0);
        do {
            const int j1 = way[static_cast<std::size_t>(j0)];
            match[static_cast<std::size_t>(j0)] = match[static_cast<std::size_t>(j1)];
            j0 = j1;
        } while (j0 != 0);
    }

    std::vector<int> row_to_col(static_cast<std::size_t>(n), -1);
    for (int j = 1; j <= m; ++j) {
        if (match[static_cast<std::size_t>(j)] != 0) {
            row_to_col[static_cast<std::size_t>(match[static_cast<std::size_t>(j)]) - 1] = j - 1;
        }
    }
    return row_to_col;
}

// Minimum total cost of matching the smaller side of `cost` entirely.
double min_assignment_total(const std::vector<std::vector<double>>& cost) {
    const std::size_t rows = cost.size();
    const std::size_t cols = rows == 0 ? 0 : cost[0].size();
    if (rows == 0 || cols == 0) return 0.0;

    std::vector<std::vector<double>> a;
    if (rows <= cols) {
        a = cost;
    } else {
        a.assign(cols, std::vector<double>(rows));
        for (std::size_t r = 0; r < rows; ++r) {
            for (std::size_t c = 0; c < cols; ++c) a[c][r] = cost[r][c];
        }
    }
    const std::vector<int> assign = hungarian(a);
    double total = 0.0;
    for (std::size_t r = 0; r < a.size(); ++r) {
        total += a[r][static_cast<std::size_t>(assign[r])];
    }
    return total;
}

// Optimal remaining cost over rows >= start_row and columns not yet used.
double min_remaining_total(const std::vector<std::vector<double>>& cost, std::size_t start_row,
                           const std::vector<bool>& col_used) {
    std::vector<std::vector<double>> sub;
    for (std::size_t r = start_row; r < cost.size(); ++r) {
        std::vector<double> row;
        for (std::size_t c = 0; c < cost[r].size(); ++c) {
            if (!col_used[c]) row.push_back(cost[r][c]);
        }
        sub.push_back(std::move(row));
    }
    return min_assignment_total(sub);
}

}  // namespace

std::vector<std::pair<int, int>> assign_min_cost(const std::vector<std::vector<double>>& cost) {
    const std::size_t rows = cost.size();
    const std::size_t cols = rows == 0 ? 0 : cost[0].size();
    if (rows == 0 || cols == 0) return {};
    for (const auto& row : cost) {
        if (row.size() != cols) {
            throw std::invalid_argument("assign_min_cost: ragged cost matrix");
        }
        for (double c : row) {
            if (!(c >= 0.0) || !std::isfinite(c)) {
                throw std::invalid_argument("assign_min_cost: costs must be finite and >= 0");
            }
        }
    }

    const double best = min_assignment_total(cost);

    // Fix pairs in lexicographic order, keeping only choices that still
    // reach the optimal total; this pins the documented tie-break.
    std::vector<std::pair<int, int>> out;
    std::vector<bool> col_used(cols, false);
    std::size_t pairs_left = std::min(rows, cols);
    double fixed = 0.0;
    for (std::size_t r = 0; r < rows && pairs_left > 0; ++r) {
        bool matched = false;
        for (std::size_t c = 0; c < cols && !matched; ++c) {
            if (col_used[c]) continue;
            col_used[c] = true;
            const double rest = min_remaining_total(cost, r + 1, col_used);
            if (fixed + cost[r][c] + rest <= best + kTieEps) {
                fixed += cost[r][c];
                out.emplace_back(static_cast<int>(r), static_cast<int>(c));
                --pairs_left;
                matched = true;
            } else {
                col_used[c] = false;
            }
        }
        // An unmatched row can only happen when rows outnumber columns and
        // every optimal assignment skips it.
    }
    return out;
}

SeldEvaluator::SeldEvaluator(EvalOptions options) : options_(options) {
    if (options_.segment_frames < 1) {
        throw std::invalid_argument("segment_frames must be >= 1");
    }
    classes_.resize(kNumClasses);
    for (int c = 0; c < kNumClasses; ++c) classes_[static_cast<std::size_t>(c)].class_idx = c;
}

namespace {

struct InstanceAcc {
    Vec3 sum{};
    SeldEvent first{};  // lexicographically smallest record, the fallback DoA
    bool has_first = false;

    void add(const SeldEvent& e) {
        const Vec3 v = doa_to_unit_vec(e.doa);
        sum.x += v.x;
        sum.y += v.y;
        sum.z += v.z;
        if (!has_first) {
            first = e;
            has_first = true;
        }
    }

    Doa representative() const {
        return sum.norm() > 1e-9 ? unit_vec_to_doa(sum) : first.doa;
    }
};

// segment -> class -> instance DoAs (one per distinct source id)
using SegmentMap = std::map<long, std::array<std::vector<Doa>, kNumClasses>>;

SegmentMap build_instances(std::span<const SeldEvent> events, int segment_frames) {
    std::vector<SeldEvent> sorted(events.begin(), events.end());
    std::sort(sorted.begin(), sorted.end(), [](const SeldEvent& a, const SeldEvent& b) {
        return std::tie(a.frame, a.class_idx, a.source_idx) <
                   std::tie(b.frame, b.class_idx, b.source_idx) ||
               (std::tie(a.frame, a.class_idx, a.source_idx) ==
                    std::tie(b.frame, b.class_idx, b.source_idx) &&
                std::pair(a.doa.azimuth(), a.doa.elevation()) <
                    std::pair(b.doa.azimuth(), b.doa.elevation()));
    });

    std::map<std::tuple<long, int, int>, InstanceAcc> accs;
    for (const SeldEvent& e : sorted) {
        const long segment = e.frame / segment_frames;
        accs[{segment, e.class_idx, e.source_idx}].add(e);
    }

    SegmentMap out;
    for (const auto& [key, acc] : accs) {
        const auto& [segment, class_idx, source_idx] = key;
        out[segment][static_cast<std::size_t>(class_idx)].push_back(acc.representative());
    }
    return out;
}

}  // namespace

void SeldEvaluator::add(std::span<const SeldEvent> reference,
                        std::span<const SeldEvent> predicted) {
    const SegmentMap ref = build_instances(reference, options_.segment_frames);
    const SegmentMap pred = build_instances(predicted, options_.segment_frames);

    std::vector<long> segments;
    for (const auto& [seg, unused] : ref) segments.push_back(seg);
    for (const auto& [seg, unused] : pred) {
        if (ref.find(seg) == ref.end()) segments.push_back(seg);
    }
    std::sort(segments.begin(), segments.end());

    static const std::array<std::vector<Doa>, kNumClasses> kEmpty{};
    for (const long seg : segments) {
        const auto rit = ref.find(seg);
        const auto pit = pred.find(seg);
        const auto& rclasses = rit == ref.end() ? kEmpty : rit->second;
        const auto& pclasses = pit == pred.end() ? kEmpty : pit->second;

        long seg_fp = 0;
        long seg_fn = 0;
        for (int cls = 0; cls < kNumClasses; ++cls) {
            const auto& rlist = rclasses[static_cast<std::size_t>(cls)];
            const auto& plist = pclasses[static_cast<std::size_t>(cls)];
            ClassScores& cs = classes_[static_cast<std::size_t>(cls)];
            cs.ref_events += static_cast<long>(rlist.size());
            ref_total_ += static_cast<long>(rlist.size());
            if (rlist.empty() && plist.empty()) continue;

            std::vector<std::vector<double>> cost(rlist.size(),
                                                  std::vector<double>(plist.size()));
            for (std::size_t r = 0; r < rlist.size(); ++r) {
                for (std::size_t p = 0; p < plist.size(); ++p) {
                    cost[r][p] = angular_distance(rlist[r], plist[p]);
                }
            }
            const auto pairs = rlist.empty() || plist.empty()
                                   ? std::vector<std::pair<int, int>>{}
                                   : assign_min_cost(cost);

            long cls_tp = 0;
            long cls_threshold_fail = 0;
            for (const auto& [r, p] : pairs) {
                const double d = cost[static_cast<std::size_t>(r)][static_cast<std::size_t>(p)];
                cs.le_sum_deg += d;
                ++cs.matched;
                if (d <= options_.doa_threshold_deg) {
                    ++cls_tp;
                } else {
                    ++cls_threshold_fail;  // one FP and one FN each
                }
            }
            const long unmatched_pred =
                static_cast<long>(plist.size()) - static_cast<long>(pairs.size());
            const long unmatched_ref =
                static_cast<long>(rlist.size()) - static_cast<long>(pairs.size());
            const long cls_fp = cls_threshold_fail + unmatched_pred;
            const long cls_fn = cls_threshold_fail + unmatched_ref;

            cs.tp += cls_tp;
            cs.fp += cls_fp;
            cs.fn += cls_fn;
            seg_fp += cls_fp;
            seg_fn += cls_fn;
        }
        substitutions_ += std::min(seg_fp, seg_fn);
        deletions_ += std::max(0L, seg_fn - seg_fp);
        insertions_ += std::max(0L, seg_fp - seg_fn);
    }
}

EvalReport SeldEvaluator::report() const {
    EvalReport rep;
    rep.per_class = classes_;

    const long errors = substitutions_ + deletions_ + insertions_;
    rep.scores.error_rate =
        errors == 0 ? 0.0 : static_cast<double>(errors) / std::max(ref_total_, 1L);

    if (options_.average == ClassAverage::kMacro) {
        double f_sum = 0.0;
        int f_count = 0;
        double le_sum = 0.0;
        int le_count = 0;
        double lr_sum = 0.0;
        int lr_count = 0;
        for (const ClassScores& cs : classes_) {
            if (cs.tp + cs.fp + cs.fn > 0) {
                f_sum += cs.f_score();
                ++f_count;
            }
            if (const auto le = cs.localization_error()) {
                le_sum += *le;
                ++le_count;
            }
            if (const auto lr = cs.localization_recall()) {
                lr_sum += *lr;
                ++lr_count;
            }
        }
        rep.scores.f_score = f_count == 0 ? 1.0 : f_sum / f_count;
        if (le_count > 0) rep.scores.localization_error = le_sum / le_count;
        rep.scores.localization_recall = lr_count == 0 ? 1.0 : lr_sum / lr_count;
    } else {
        long tp = 0;
        long fp = 0;
        long fn = 0;
        long matched = 0;
        double le_sum = 0.0;
        for (const ClassScores& cs : classes_) {
            tp += cs.tp;
            fp += cs.fp;
            fn += cs.fn;
            matched += cs.matched;
            le_sum += cs.le_sum_deg;
        }
        rep.scores.f_score = 2 * tp + fp + fn == 0 ? 1.0 : 2.0 * tp / (2.0 * tp + fp + fn);
        if (matched > 0) rep.scores.localization_error = le_sum / matched;
        rep.scores.localization_recall =
            ref_total_ == 0 ? 1.0 : static_cast<double>(matched) / ref_total_;
    }
    return rep;
}

SeldScores evaluate(std::span<const SeldEvent> reference, std::span<const SeldEvent> predicted,
                    const EvalOptions& options) {
    return evaluate_detailed(reference, predicted, options).scores;
}

EvalReport evaluate_detailed(std::span<const SeldEvent> reference,
                             std::span<const SeldEvent> predicted, const EvalOptions& options) {
    SeldEvaluator evaluator(options);
    evaluator.add(reference, predicted);
    return evaluator.report();
}

}  // namespace seldkit
