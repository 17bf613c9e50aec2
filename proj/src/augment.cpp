#include "seldkit/augment.hpp"

#include <cstring>

#include "seldkit/errors.hpp"

namespace seldkit {

namespace {

std::vector<double> negated(const std::vector<double>& v) {
    std::vector<double> out(v.size());
    for (std::size_t i = 0; i < v.size(); ++i) out[i] = -v[i];
    return out;
}

}  // namespace

std::array<AcsTransform, 8> augmentation_set() {
    std::array<AcsTransform, 8> set;
    for (int flip = 0; flip < 2; ++flip) {
        for (int k = 0; k < 4; ++k) {
            set[static_cast<std::size_t>(flip * 4 + k)] = AcsTransform(k, flip != 0);
        }
    }
    return set;
}

Doa transform_doa(const AcsTransform& t, const Doa& d) {
    const double azimuth = d.azimuth() - 90.0 * t.quarter_turns();
    const double elevation = t.elevation_flip() ? -d.elevation() : d.elevation();
    return {azimuth, elevation};
}

FoaClip transform_foa(const AcsTransform& t, const FoaClip& c) {
    for (const auto& ch : c.channels) {
        if (ch.size() != c.frames()) {
            throw NotFoaError("transform_foa: ragged channel lengths");
        }
    }
    FoaClip out;
    out.sample_rate = c.sample_rate;
    out.channels[kW] = c.channels[kW];

    // Rotation by -90 deg * k: X' = X cos - Y sin, Y' = Y cos + X sin, with
    // the trig collapsing to exact sign swaps.
    switch (t.quarter_turns()) {
        case 0:
            out.channels[kX] = c.channels[kX];
            out.channels[kY] = c.channels[kY];
            break;
        case 1:
            out.channels[kX] = c.channels[kY];
            out.channels[kY] = negated(c.channels[kX]);
            break;
        case 2:
            out.channels[kX] = negated(c.channels[kX]);
            out.channels[kY] = negated(c.channels[kY]);
            break;
        case 3:
            out.channels[kX] = negated(c.channels[kY]);
            out.channels[kY] = c.channels[kX];
            break;
    }
    out.channels[kZ] = t.elevation_flip() ? negated(c.channels[kZ]) : c.channels[kZ];
    return out;
}

Image transform_frame(const AcsTransform& t, const Image& frame, const FrameGeometry& g) {
    if (frame.width != g.width || frame.height != g.height) {
        throw GeometryMismatchError("transform_frame: frame is " + std::to_string(frame.width) +
                                    "x" + std::to_string(frame.height) + ", geometry wants " +
                                    std::to_string(g.width) + "x" + std::to_string(g.height));
    }
    if (g.width % 4 != 0) {
        throw GeometryMismatchError("transform_frame: width must be divisible by 4");
    }

    const int w = g.width;
    const int h = g.height;
    // Content moves right by width/4 columns per quarter turn, the same
    // circular slide as -3 width / 4.
    const int shift = t.quarter_turns() * (w / 4);

    Image out;
    out.width = w;
    out.height = h;
    out.data.resize(frame.data.size());
    const std::size_t row_bytes = static_cast<std::size_t>(w) * 3;
    for (int y = 0; y < h; ++y) {
        const int src_y = t.elevation_flip() ? h - 1 - y : y;
        const std::uint8_t* src = frame.data.data() + static_cast<std::size_t>(src_y) * row_bytes;
        std::uint8_t* dst = out.data.data() + static_cast<std::size_t>(y) * row_bytes;
        if (shift == 0) {
            std::memcpy(dst, src, row_bytes);
        } else {
            // dst[x] = src[(x - shift) mod w], done as two contiguous copies
            const std::size_t head = static_cast<std::size_t>(shift) * 3;
            std::memcpy(dst + head, src, row_bytes - head);
            std::memcpy(dst, src + (row_bytes - head), head);
        }
    }
    return out;
}

std::vector<SeldEvent> transform_metadata(const AcsTransform& t,
                                          std::span<const SeldEvent> events) {
    std::vector<SeldEvent> out;
    out.reserve(events.size());
    for (const SeldEvent& e : events) {
        out.push_back({e.frame, e.class_idx, e.source_idx, transform_doa(t, e.doa)});
    }
    return out;
}

}  // namespace seldkit
