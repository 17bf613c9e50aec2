#pragma once

#include <array>
#include <cstdint>
#include <filesystem>
#include <functional>
#include <optional>
#include <span>
#include <utility>
#include <vector>

#include "seldkit/foa.hpp"
#include "seldkit/geo.hpp"
#include "seldkit/image.hpp"
#include "seldkit/metadata.hpp"

namespace seldkit {

inline constexpr int kTileSize = 50;
inline constexpr double kDefaultFps = 29.97;

struct AssetEntry {
    std::filesystem::path audio_path;                       // mono WAV
    std::optional<std::filesystem::path> tile_frames_dir;   // PPM tile frames, optional
    int class_idx = 0;                                      // 0..12
    double duration_s = 0.0;
};

/// Reads an asset manifest: one `path,class_idx[,tile_frames_dir]` record
/// per line, paths resolved against the manifest's directory. Durations
/// come from the WAV headers.
std::vector<AssetEntry> load_asset_manifest(const std::filesystem::path& path);

struct SceneEvent {
    std::size_t asset_index = 0;
    double onset_s = 0.0;
    Doa doa;            // requested direction; rendering snaps to the bank
    double gain = 1.0;
};

struct SceneSpec {
    double duration_s = 30.0;
    int sample_rate = kDefaultSampleRate;
    std::uint64_t seed = 0;
    std::vector<SceneEvent> events;
};

struct RirBank {
    std::vector<Rir> entries;

    /// Built-in bank of single-tap RIRs on a 36 x 9 grid (azimuth steps of
    /// 10 degrees, elevations -80..80 in steps of 20), so the pipeline runs
    /// with no external measurements.
    static RirBank anechoic_grid(int sample_rate = kDefaultSampleRate);

    /// Reads `path,azimuth,elevation,distance,room_id` records; the distance
    /// field may be empty. RIR WAVs load relative to the manifest.
    static RirBank load_manifest(const std::filesystem::path& path);
};

/// Bank entry closest to the requested direction; ties break to the lowest
/// manifest index.
const Rir& nearest_rir(const RirBank& bank, const Doa& d);

/// Number of 100 ms metadata frames covering a scene.
int scene_frame_count(double duration_s);

/// Inclusive frame range overlapped by [onset, onset + duration), clamped
/// to the scene; {0, -1} when the event covers no frame. Shared by the
/// sampler and the renderer so their polyphony accounting agrees.
std::pair<int, int> event_frame_span(double onset_s, double duration_s, int total_frames);

/// Draws a random scene: events get uniformly chosen assets, uniform onsets
/// that keep them inside the scene, the DoA of a uniformly chosen bank
/// entry, and unit gain. Candidate events violating the per-frame polyphony
/// bound are redrawn; after 10,000 draws the scene is returned as-is, or
/// InfeasibleSceneError is thrown when nothing could be placed at all.
SceneSpec sample_scene(std::uint64_t seed, std::span<const AssetEntry> assets, const RirBank& bank,
                       double duration_s, int max_polyphony);

struct RenderedAudio {
    FoaClip audio;
    std::vector<SeldEvent> events;  // sorted, DoAs are the RIRs' actual directions
};

/// Convolves each event's asset with its nearest RIR, mixes at the onsets
/// and peak-normalizes to 0.95. Metadata marks every 100 ms frame
/// overlapping the dry event span.
RenderedAudio render_audio(const SceneSpec& spec, std::span<const AssetEntry> assets,
                           const RirBank& bank);

/// Solid tile colour used when an asset has no tile frames.
std::array<std::uint8_t, 3> class_color(int class_idx);

using FrameSink = std::function<void(int frame_index, const Image&)>;

/// Composites the 360 canvas frame by frame: black background, one 50x50
/// tile per active event centered on its projected DoA (actual bank
/// direction), wrapping across the azimuth seam and cropping at the top and
/// bottom edges. Later events draw on top.
void render_video(const SceneSpec& spec, std::span<const AssetEntry> assets, const RirBank& bank,
                  const FrameGeometry& g, double fps, const FrameSink& sink);

/// Stamps one tile onto a canvas centered at `center` (horizontal wrap,
/// vertical crop). Exposed for frame-level tests.
void stamp_tile(Image& canvas, const Image& tile, Pixel center);

}  // namespace seldkit
