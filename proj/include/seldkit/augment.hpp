#pragma once

#include <array>
#include <vector>

#include "seldkit/foa.hpp"
#include "seldkit/geo.hpp"
#include "seldkit/image.hpp"
#include "seldkit/metadata.hpp"

namespace seldkit {

/// One element of the channel-swap augmentation group: an azimuth rotation
/// of -90 degrees per quarter turn, optionally composed with an elevation
/// flip. The eight elements form the group Z4 x Z2.
class AcsTransform {
public:
    constexpr AcsTransform() = default;

    constexpr AcsTransform(int quarter_turns, bool elevation_flip)
        : quarter_turns_(((quarter_turns % 4) + 4) % 4), elevation_flip_(elevation_flip) {}

    constexpr int quarter_turns() const { return quarter_turns_; }
    constexpr bool elevation_flip() const { return elevation_flip_; }
    constexpr bool is_identity() const { return quarter_turns_ == 0 && !elevation_flip_; }

    /// Group composition: (a * b) applies b first, then a.
    friend constexpr AcsTransform operator*(const AcsTransform& a, const AcsTransform& b) {
        return {a.quarter_turns_ + b.quarter_turns_,
                a.elevation_flip_ != b.elevation_flip_};
    }

    constexpr AcsTransform inverse() const {
        return {(4 - quarter_turns_) % 4, elevation_flip_};
    }

    friend constexpr bool operator==(const AcsTransform&, const AcsTransform&) = default;

private:
    int quarter_turns_ = 0;
    bool elevation_flip_ = false;
};

/// All eight transforms, identity first: quarter turns 0..3 without the
/// elevation flip, then 0..3 with it.
std::array<AcsTransform, 8> augmentation_set();

/// azimuth' = wrap(azimuth - 90 * quarter_turns); elevation negated iff the
/// flip is set.
Doa transform_doa(const AcsTransform& t, const Doa& d);

/// Signed channel permutation realizing the same rotation on the sound
/// field: exact sign swaps of X/Y (and Z under the flip), W untouched.
FoaClip transform_foa(const AcsTransform& t, const FoaClip& c);

/// The matching pixel permutation on an equirectangular frame: circular
/// column roll of -quarter_turns * (3 width / 4) (equivalently
/// +quarter_turns * width / 4) plus a vertical mirror under the flip.
Image transform_frame(const AcsTransform& t, const Image& frame, const FrameGeometry& g);

/// Maps every event's DoA by transform_doa; frame, class and source ids are
/// untouched and ordering is preserved.
std::vector<SeldEvent> transform_metadata(const AcsTransform& t,
                                          std::span<const SeldEvent> events);

}  // namespace seldkit
