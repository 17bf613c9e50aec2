#pragma once

#include <span>
#include <vector>

#include "seldkit/foa.hpp"
#include "seldkit/metadata.hpp"

namespace seldkit {

/// Pseudo-intensity DoA estimate over [start, start+len): the direction of
/// the time-averaged (sum W*X, sum W*Y, sum W*Z). Throws SilentSegmentError
/// when the W channel's RMS is at or below 1e-6.
Doa estimate_doa(const FoaClip& c, std::size_t start, std::size_t len);

struct DoaRunResult {
    int start_frame = 0;
    int end_frame = 0;  // inclusive
    int class_idx = 0;
    int source_idx = 0;
    Doa labeled;
    Doa estimated;
    double error_deg = 0.0;
    bool passed = false;
};

struct SceneValidation {
    double tolerance_deg = 5.0;
    std::vector<DoaRunResult> runs;
    int skipped_short = 0;    // single-event runs under the minimum length
    int skipped_overlap = 0;  // spans with two or more concurrent events

    bool all_passed() const {
        for (const auto& r : runs) {
            if (!r.passed) return false;
        }
        return true;
    }
};

/// Checks rendered audio against its metadata: every maximal run of frames
/// with exactly one active source (same class, source and DoA throughout)
/// is estimated and compared with the label. Runs shorter than
/// `min_run_frames` give too little averaging and are skipped.
SceneValidation validate_scene(const FoaClip& c, std::span<const SeldEvent> events,
                               double tolerance_deg, int min_run_frames = 5);

}  // namespace seldkit
