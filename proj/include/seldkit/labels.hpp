#pragma once

#include <array>
#include <cstdint>
#include <filesystem>
#include <span>
#include <vector>

#include "seldkit/metadata.hpp"

namespace seldkit {

/// Frame-level target tensor of shape T x tracks x classes x 3: each
/// track/class slot holds a Cartesian DoA vector scaled by activity (unit
/// length when active, zero otherwise).
struct MultiAccdoaTensor {
    static constexpr int kTracks = 3;

    int frames = 0;
    std::vector<double> values;  // frames * kTracks * kNumClasses * 3

    static MultiAccdoaTensor zeros(int frames);

    double& at(int frame, int track, int class_idx, int axis) {
        return values[index(frame, track, class_idx, axis)];
    }
    double at(int frame, int track, int class_idx, int axis) const {
        return values[index(frame, track, class_idx, axis)];
    }

    std::size_t index(int frame, int track, int class_idx, int axis) const {
        return ((static_cast<std::size_t>(frame) * kTracks + track) * kNumClasses + class_idx) *
                   3 +
               axis;
    }
};

/// Places each event's unit vector in track slots 0..2 in ascending
/// source_idx order per (frame, class). Throws TooManySourcesError when a
/// frame holds more than three same-class sources, and std::out_of_range
/// when an event's frame index is not below `frames`.
MultiAccdoaTensor encode_multi_accdoa(std::span<const SeldEvent> events, int frames);

/// Inverse: a track/class vector with norm above `threshold` becomes an
/// event whose DoA is the normalized vector and whose source id is the
/// track index.
std::vector<SeldEvent> decode_multi_accdoa(const MultiAccdoaTensor& t, double threshold = 0.5);

/// Object-detector box, normalized to the unit square.
struct BoundingBox {
    BoundingBox() = default;
    BoundingBox(double cx_, double cy_, double w_, double h_);

    double cx = 0.5;
    double cy = 0.5;
    double w = 1.0;
    double h = 1.0;

    double area() const { return w * h; }
};

/// Gaussian-like box embedding: per kept box, one 37-bin azimuth vector and
/// one 37-bin elevation vector; unused slots stay all-zero.
struct VisualEmbedding {
    static constexpr int kMaxBoxes = 6;   // M
    static constexpr int kBins = 37;      // N

    std::array<double, 2 * kMaxBoxes * kBins> values{};

    double& at(int axis, int box, int bin) {
        return values[(static_cast<std::size_t>(axis) * kMaxBoxes + box) * kBins + bin];
    }
    double at(int axis, int box, int bin) const {
        return values[(static_cast<std::size_t>(axis) * kMaxBoxes + box) * kBins + bin];
    }
};

/// Encodes up to six boxes; when more arrive only the six largest by area
/// are kept (in input order). `dropped`, when non-null, receives the number
/// of discarded boxes so callers can surface a warning.
VisualEmbedding encode_visual_boxes(std::span<const BoundingBox> boxes,
                                    std::size_t* dropped = nullptr);

/// Reads detector boxes from CSV rows `frame,cx,cy,w,h`; returns per-frame
/// box lists indexed by frame.
std::vector<std::vector<BoundingBox>> read_boxes_csv(const std::filesystem::path& path);

// ---------------------------------------------------------------------------
// Flat little-endian float32 tensor container used for both label tensors:
// header of eight uint32 values (magic "SKT4", version, four dimensions, two
// reserved zeros) followed by d0*d1*d2*d3 float32 values.
// ---------------------------------------------------------------------------

inline constexpr std::uint32_t kTensorMagic = 0x34544B53;  // "SKT4"
inline constexpr std::uint32_t kTensorVersion = 1;

struct TensorFile {
    std::array<std::uint32_t, 4> dims{};
    std::vector<float> values;
};

void write_tensor(const std::filesystem::path& path, const std::array<std::uint32_t, 4>& dims,
                  std::span<const float> values);
TensorFile read_tensor(const std::filesystem::path& path);

/// Tensor-file adapters: multi-ACCDOA serializes as T x 3 x 13 x 3, visual
/// embeddings as T x 2 x 6 x 37.
void write_accdoa_tensor(const std::filesystem::path& path, const MultiAccdoaTensor& t);
void write_visual_tensor(const std::filesystem::path& path,
                         std::span<const VisualEmbedding> per_frame);

}  // namespace seldkit
