#include "seldkit/synth.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <random>
#include <sstream>
#include <stdexcept>
#include <tuple>

#include "seldkit/errors.hpp"
#include "seldkit/fsio.hpp"

namespace seldkit {

namespace {

constexpr int kMaxSampleAttempts = 10000;

/// Deterministic sampling helpers on top of the standard-mandated
/// mt19937_64 stream, so scenes reproduce byte-for-byte everywhere.
class SceneRng {
public:
    explicit SceneRng(std::uint64_t seed) : engine_(seed) {}

    double uniform() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }

    double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }

    std::size_t index(std::size_t n) { return static_cast<std::size_t>(engine_() % n); }

private:
    std::mt19937_64 engine_;
};

std::vector<std::string> split_fields(const std::string& line) {
    std::vector<std::string> fields;
    std::size_t start = 0;
    while (true) {
        const std::size_t comma = line.find(',', start);
        if (comma == std::string::npos) {
            fields.push_back(line.substr(start));
            break;
        }
        fields.push_back(line.substr(start, comma - start));
        start = comma + 1;
    }
    return fields;
}

std::filesystem::path resolve(const std::filesystem::path& base, const std::string& p) {
    const std::filesystem::path path(p);
    return path.is_absolute() ? path : base / path;
}

// Whole-field numeric parses; partial matches like "3x" are errors.
int parse_int_field(const std::string& field, const std::string& file, long line_no,
                    const char* what) {
    try {
        std::size_t used = 0;
        const int v = std::stoi(field, &used);
        if (used != field.size()) throw std::invalid_argument(field);
        return v;
    } catch (const std::exception&) {
        throw ParseError(file, line_no, std::string("bad ") + what + " '" + field + "'");
    }
}

double parse_double_field(const std::string& field, const std::string& file, long line_no,
                          const char* what) {
    try {
        std::size_t used = 0;
        const double v = std::stod(field, &used);
        if (used != field.size()) throw std::invalid_argument(field);
        return v;
    } catch (const std::exception&) {
        throw ParseError(file, line_no, std::string("bad ") + what + " '" + field + "'");
    }
}

}  // namespace

std::vector<AssetEntry> load_asset_manifest(const std::filesystem::path& path) {
    const std::string file = path.string();
    const std::filesystem::path base = path.has_parent_path() ? path.parent_path() : ".";
    std::istringstream in(read_file(path));

    std::vector<AssetEntry> assets;
    std::string line;
    long line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line.empty() || line.front() == '#') continue;

        const auto fields = split_fields(line);
        if (fields.size() < 2 || fields.size() > 3) {
            throw ParseError(file, line_no, "expected `path,class_idx[,tile_frames_dir]`");
        }
        AssetEntry entry;
        entry.audio_path = resolve(base, fields[0]);
        entry.class_idx = parse_int_field(fields[1], file, line_no, "class index");
        if (entry.class_idx < 0 || entry.class_idx >= kNumClasses) {
            throw RangeError(file, line_no, "class " + std::to_string(entry.class_idx) +
                                                " outside 0.." + std::to_string(kNumClasses - 1));
        }
        if (fields.size() == 3 && !fields[2].empty()) {
            entry.tile_frames_dir = resolve(base, fields[2]);
        }
        const MonoClip clip = read_mono_wav(entry.audio_path);
        entry.duration_s = clip.duration_s();
        assets.push_back(std::move(entry));
    }
    if (assets.empty()) {
        throw std::runtime_error(file + ": empty asset manifest");
    }
    return assets;
}

RirBank RirBank::anechoic_grid(int sample_rate) {
    RirBank bank;
    for (int el = -80; el <= 80; el += 20) {
        for (int az = -180; az < 180; az += 10) {
            bank.entries.push_back(delta_rir(Doa(az, el), sample_rate));
        }
    }
    return bank;
}

RirBank RirBank::load_manifest(const std::filesystem::path& path) {
    const std::string file = path.string();
    const std::filesystem::path base = path.has_parent_path() ? path.parent_path() : ".";
    std::istringstream in(read_file(path));

    RirBank bank;
    std::string line;
    long line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line.empty() || line.front() == '#') continue;

        const auto fields = split_fields(line);
        if (fields.size() != 5) {
            throw ParseError(file, line_no, "expected `path,azimuth,elevation,distance,room_id`");
        }
        const double azimuth = parse_double_field(fields[1], file, line_no, "azimuth");
        const double elevation = parse_double_field(fields[2], file, line_no, "elevation");
        if (elevation < -90.0 || elevation > 90.0) {
            throw RangeError(file, line_no, "elevation outside [-90, 90]");
        }

        const WavData wav = read_wav(resolve(base, fields[0]));
        if (wav.channels.size() != 4) {
            throw NotFoaError(fields[0] + ": RIR must have 4 channels, found " +
                              std::to_string(wav.channels.size()));
        }
        Rir rir;
        for (int c = 0; c < 4; ++c) rir.ir[static_cast<std::size_t>(c)] = wav.channels[static_cast<std::size_t>(c)];
        rir.doa = Doa(azimuth, elevation);
        rir.room_id = fields[4];
        rir.sample_rate = wav.sample_rate;
        if (!fields[3].empty()) {
            rir.distance_m = parse_double_field(fields[3], file, line_no, "distance");
        }
        bank.entries.push_back(std::move(rir));
    }
    if (bank.entries.empty()) {
        throw std::runtime_error(file + ": empty RIR manifest");
    }
    return bank;
}

const Rir& nearest_rir(const RirBank& bank, const Doa& d) {
    if (bank.entries.empty()) {
        throw std::invalid_argument("nearest_rir: empty bank");
    }
    std::size_t best = 0;
    double best_dist = angular_distance(bank.entries[0].doa, d);
    for (std::size_t i = 1; i < bank.entries.size(); ++i) {
        const double dist = angular_distance(bank.entries[i].doa, d);
        if (dist < best_dist) {
            best = i;
            best_dist = dist;
        }
    }
    return bank.entries[best];
}

int scene_frame_count(double duration_s) {
    return static_cast<int>(std::ceil(duration_s / kMetadataFrameSeconds - 1e-9));
}

std::pair<int, int> event_frame_span(double onset_s, double duration_s, int total_frames) {
    int first = static_cast<int>(std::floor(onset_s / kMetadataFrameSeconds + 1e-9));
    int last =
        static_cast<int>(std::ceil((onset_s + duration_s) / kMetadataFrameSeconds - 1e-9)) - 1;
    first = std::max(first, 0);
    last = std::min(last, total_frames - 1);
    if (last < first) return {0, -1};
    return {first, last};
}

SceneSpec sample_scene(std::uint64_t seed, std::span<const AssetEntry> assets, const RirBank& bank,
                       double duration_s, int max_polyphony) {
    if (assets.empty()) {
        throw std::invalid_argument("sample_scene: no assets");
    }
    if (bank.entries.empty()) {
        throw std::invalid_argument("sample_scene: empty RIR bank");
    }
    if (max_polyphony < 1) {
        throw std::invalid_argument("sample_scene: max_polyphony must be >= 1");
    }

    SceneRng rng(seed);
    SceneSpec spec;
    spec.duration_s = duration_s;
    spec.seed = seed;

    const int total_frames = scene_frame_count(duration_s);
    std::vector<int> occupancy(static_cast<std::size_t>(std::max(total_frames, 1)), 0);

    // Density default: roughly one event per ten seconds and polyphony slot.
    const int max_events =
        std::max(1, static_cast<int>(std::llround(duration_s * max_polyphony / 10.0)));
    const int target = 1 + static_cast<int>(rng.index(static_cast<std::size_t>(max_events)));

    int attempts = 0;
    while (static_cast<int>(spec.events.size()) < target) {
        if (++attempts > kMaxSampleAttempts) {
            if (spec.events.empty()) {
                throw InfeasibleSceneError("sample_scene: no placement found in " +
                                           std::to_string(kMaxSampleAttempts) + " attempts");
            }
            break;  // keep what fits
        }
        const std::size_t asset_idx = rng.index(assets.size());
        const AssetEntry& asset = assets[asset_idx];
        if (asset.duration_s <= 0.0 || asset.duration_s > duration_s) continue;

        const double onset = rng.uniform(0.0, duration_s - asset.duration_s);
        const auto [first, last] = event_frame_span(onset, asset.duration_s, total_frames);
        bool fits = true;
        for (int f = first; f <= last && fits; ++f) {
            fits = occupancy[static_cast<std::size_t>(f)] < max_polyphony;
        }
        if (!fits) continue;

        for (int f = first; f <= last; ++f) ++occupancy[static_cast<std::size_t>(f)];
        const Rir& rir = bank.entries[rng.index(bank.entries.size())];
        spec.events.push_back({asset_idx, onset, rir.doa, 1.0});
    }
    return spec;
}

RenderedAudio render_audio(const SceneSpec& spec, std::span<const AssetEntry> assets,
                           const RirBank& bank) {
    const int total_frames = scene_frame_count(spec.duration_s);
    std::vector<std::pair<FoaClip, double>> placed;
    std::vector<SeldEvent> events;

    for (std::size_t i = 0; i < spec.events.size(); ++i) {
        const SceneEvent& ev = spec.events[i];
        const AssetEntry& asset = assets[ev.asset_index];
        MonoClip mono = read_mono_wav(asset.audio_path);
        if (mono.sample_rate != spec.sample_rate) {
            throw SampleRateMismatchError(spec.sample_rate, mono.sample_rate);
        }
        const Rir& rir = nearest_rir(bank, ev.doa);
        FoaClip rendered = convolve_rir(mono, rir);
        if (ev.gain != 1.0) {
            for (auto& ch : rendered.channels) {
                for (double& s : ch) s *= ev.gain;
            }
        }

        const auto [first, last] = event_frame_span(ev.onset_s, mono.duration_s(), total_frames);
        for (int f = first; f <= last; ++f) {
            events.push_back({f, asset.class_idx, static_cast<int>(i), rir.doa});
        }
        placed.emplace_back(std::move(rendered), ev.onset_s);
    }

    FoaClip mix = mix_events(placed, spec.duration_s, spec.sample_rate);
    double peak = 0.0;
    for (const auto& ch : mix.channels) {
        for (double s : ch) peak = std::max(peak, std::abs(s));
    }
    if (peak > 0.0) {
        mix = peak_normalize(mix, 0.95);
    }

    std::sort(events.begin(), events.end(), [](const SeldEvent& a, const SeldEvent& b) {
        return std::tie(a.frame, a.class_idx, a.source_idx) <
               std::tie(b.frame, b.class_idx, b.source_idx);
    });
    return {std::move(mix), std::move(events)};
}

std::array<std::uint8_t, 3> class_color(int class_idx) {
    static constexpr std::array<std::array<std::uint8_t, 3>, kNumClasses> kPalette{{
        {230, 25, 75},    // red
        {60, 180, 75},    // green
        {255, 225, 25},   // yellow
        {0, 130, 200},    // blue
        {245, 130, 48},   // orange
        {145, 30, 180},   // purple
        {70, 240, 240},   // cyan
        {240, 50, 230},   // magenta
        {210, 245, 60},   // lime
        {250, 190, 212},  // pink
        {0, 128, 128},    // teal
        {220, 190, 255},  // lavender
        {170, 110, 40},   // brown
    }};
    return kPalette[static_cast<std::size_t>(class_idx % kNumClasses)];
}

void stamp_tile(Image& canvas, const Image& tile, Pixel center) {
    const int half = tile.width / 2;
    for (int ty = 0; ty < tile.height; ++ty) {
        const int y = center.y - half + ty;
        if (y < 0 || y >= canvas.height) continue;  // crop at the poles
        for (int tx = 0; tx < tile.width; ++tx) {
            int x = (center.x - half + tx) % canvas.width;
            if (x < 0) x += canvas.width;  // wrap across the azimuth seam
            const std::uint8_t* src = tile.pixel(tx, ty);
            std::uint8_t* dst = canvas.pixel(x, y);
            dst[0] = src[0];
            dst[1] = src[1];
            dst[2] = src[2];
        }
    }
}

namespace {

Image solid_tile(int class_idx) {
    Image tile = Image::black(kTileSize, kTileSize);
    const auto color = class_color(class_idx);
    for (std::size_t i = 0; i < tile.data.size(); i += 3) {
        tile.data[i] = color[0];
        tile.data[i + 1] = color[1];
        tile.data[i + 2] = color[2];
    }
    return tile;
}

std::vector<Image> load_tile_frames(const std::filesystem::path& dir) {
    std::vector<std::filesystem::path> files;
    for (const auto& entry : std::filesystem::directory_iterator(dir)) {
        if (entry.is_regular_file() && entry.path().extension() == ".ppm") {
            files.push_back(entry.path());
        }
    }
    std::sort(files.begin(), files.end());
    std::vector<Image> frames;
    frames.reserve(files.size());
    for (const auto& f : files) {
        Image img = read_ppm(f);
        if (img.width != kTileSize || img.height != kTileSize) {
            img = resize_nearest(img, kTileSize, kTileSize);
        }
        frames.push_back(std::move(img));
    }
    return frames;
}

}  // namespace

void render_video(const SceneSpec& spec, std::span<const AssetEntry> assets, const RirBank& bank,
                  const FrameGeometry& g, double fps, const FrameSink& sink) {
    if (fps <= 0.0) {
        throw std::invalid_argument("render_video: fps must be positive");
    }

    struct ActiveEvent {
        double onset_s;
        double end_s;
        Pixel center;
        const std::vector<Image>* frames;  // nullptr -> solid tile
        Image solid;
    };

    std::map<std::size_t, std::vector<Image>> tile_cache;
    std::vector<ActiveEvent> actives;
    actives.reserve(spec.events.size());
    for (const SceneEvent& ev : spec.events) {
        const AssetEntry& asset = assets[ev.asset_index];
        ActiveEvent a;
        a.onset_s = ev.onset_s;
        a.end_s = ev.onset_s + asset.duration_s;
        a.center = project_equirect(nearest_rir(bank, ev.doa).doa, g);
        a.frames = nullptr;
        if (asset.tile_frames_dir) {
            auto it = tile_cache.find(ev.asset_index);
            if (it == tile_cache.end()) {
                it = tile_cache.emplace(ev.asset_index, load_tile_frames(*asset.tile_frames_dir))
                         .first;
            }
            if (!it->second.empty()) a.frames = &it->second;
        }
        if (a.frames == nullptr) a.solid = solid_tile(asset.class_idx);
        actives.push_back(std::move(a));
    }

    const auto frame_count = static_cast<int>(std::llround(spec.duration_s * fps));
    for (int idx = 0; idx < frame_count; ++idx) {
        // A frame represents the display interval [t, t + 1/fps); an event
        // overlapping any part of it is drawn, which keeps every labeled
        // 100 ms frame backed by visible pixels.
        const double t = idx / fps;
        Image canvas = Image::black(g.width, g.height);
        for (const ActiveEvent& a : actives) {
            if (t >= a.end_s || t + 1.0 / fps <= a.onset_s) continue;
            const Image* tile = &a.solid;
            if (a.frames != nullptr) {
                const auto local =
                    static_cast<std::size_t>(std::max(0.0, (t - a.onset_s) * fps));
                tile = &(*a.frames)[local % a.frames->size()];
            }
            stamp_tile(canvas, *tile, a.center);
        }
        sink(idx, canvas);
    }
}

}  // namespace seldkit
