#pragma once

#include <filesystem>
#include <span>
#include <vector>

#include "seldkit/geo.hpp"

namespace seldkit {

inline constexpr int kNumClasses = 13;
inline constexpr double kMetadataFrameSeconds = 0.1;

/// One active-source record at 100 ms resolution.
struct SeldEvent {
    int frame = 0;       // 100 ms frame index
    int class_idx = 0;   // 0..12
    int source_idx = 0;
    Doa doa;

    friend bool operator==(const SeldEvent&, const SeldEvent&) = default;
};

/// Reads a STARSS23-convention CSV: `frame,class,source,azimuth,elevation`,
/// no header. Throws ParseError (with line number) on malformed rows and
/// RangeError on out-of-range fields.
std::vector<SeldEvent> read_metadata(const std::filesystem::path& path);

/// Writes rows sorted by (frame, class, source) with angles rounded half
/// away from zero to integer degrees. Atomic.
void write_metadata(std::span<const SeldEvent> events, const std::filesystem::path& path);

/// The serialized CSV bytes, exactly as write_metadata emits them.
std::string format_metadata(std::span<const SeldEvent> events);

}  // namespace seldkit
