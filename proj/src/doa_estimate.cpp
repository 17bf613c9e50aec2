#include "seldkit/doa_estimate.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <stdexcept>

#include "seldkit/errors.hpp"

namespace seldkit {

Doa estimate_doa(const FoaClip& c, std::size_t start, std::size_t len) {
    if (len == 0 || start + len > c.frames()) {
        throw std::out_of_range("estimate_doa: segment outside clip");
    }
    const auto& w = c.channels[kW];
    const auto& y = c.channels[kY];
    const auto& z = c.channels[kZ];
    const auto& x = c.channels[kX];

    double energy = 0.0;
    Vec3 intensity{};
    for (std::size_t i = start; i < start + len; ++i) {
        energy += w[i] * w[i];
        intensity.x += w[i] * x[i];
        intensity.y += w[i] * y[i];
        intensity.z += w[i] * z[i];
    }
    const double rms = std::sqrt(energy / static_cast<double>(len));
    if (rms <= 1e-6) {
        throw SilentSegmentError("estimate_doa: segment is silent (W RMS " + std::to_string(rms) +
                                 ")");
    }
    // Normalize before angle extraction so the estimate is gain-free.
    const double n = intensity.norm();
    if (n > 0.0) {
        intensity.x /= n;
        intensity.y /= n;
        intensity.z /= n;
    }
    return unit_vec_to_doa(intensity);
}

SceneValidation validate_scene(const FoaClip& c, std::span<const SeldEvent> events,
                               double tolerance_deg, int min_run_frames) {
    SceneValidation report;
    report.tolerance_deg = tolerance_deg;

    std::map<int, std::vector<const SeldEvent*>> by_frame;
    int max_frame = -1;
    for (const SeldEvent& e : events) {
        by_frame[e.frame].push_back(&e);
        max_frame = std::max(max_frame, e.frame);
    }
    if (max_frame < 0) return report;

    const auto samples_per_frame =
        static_cast<std::size_t>(std::llround(kMetadataFrameSeconds * c.sample_rate));

    // Walk frames, closing a run whenever the active set stops being the
    // same single (class, source, DoA).
    int run_start = -1;
    const SeldEvent* run_event = nullptr;

    auto close_run = [&](int end_frame) {
        if (run_start < 0) return;
        const int frames = end_frame - run_start + 1;
        if (frames < min_run_frames) {
            ++report.skipped_short;
        } else {
            const std::size_t start = static_cast<std::size_t>(run_start) * samples_per_frame;
            const std::size_t len = std::min(static_cast<std::size_t>(frames) * samples_per_frame,
                                             c.frames() - std::min(c.frames(), start));
            if (len > 0 && start < c.frames()) {
                DoaRunResult r;
                r.start_frame = run_start;
                r.end_frame = end_frame;
                r.class_idx = run_event->class_idx;
                r.source_idx = run_event->source_idx;
                r.labeled = run_event->doa;
                r.estimated = estimate_doa(c, start, len);
                r.error_deg = angular_distance(r.labeled, r.estimated);
                r.passed = r.error_deg <= tolerance_deg;
                report.runs.push_back(r);
            }
        }
        run_start = -1;
        run_event = nullptr;
    };

    bool in_overlap = false;
    for (int f = 0; f <= max_frame; ++f) {
        const auto it = by_frame.find(f);
        const std::size_t active = it == by_frame.end() ? 0 : it->second.size();

        if (active == 1) {
            const SeldEvent* e = it->second.front();
            const bool continues = run_event != nullptr && run_event->class_idx == e->class_idx &&
                                   run_event->source_idx == e->source_idx &&
                                   run_event->doa == e->doa;
            if (!continues) {
                close_run(f - 1);
                run_start = f;
                run_event = e;
            }
            in_overlap = false;
        } else {
            close_run(f - 1);
            if (active >= 2) {
                if (!in_overlap) ++report.skipped_overlap;
                in_overlap = true;
            } else {
                in_overlap = false;
            }
        }
    }
    close_run(max_frame);
    return report;
}

}  // namespace seldkit
