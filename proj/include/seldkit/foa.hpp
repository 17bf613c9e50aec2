#pragma once

#include <array>
#include <filesystem>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "seldkit/geo.hpp"
#include "seldkit/wav.hpp"

namespace seldkit {

inline constexpr int kDefaultSampleRate = 24000;

/// ACN channel indices for first-order Ambisonics.
enum FoaChannel : int { kW = 0, kY = 1, kZ = 2, kX = 3 };

struct MonoClip {
    std::vector<double> samples;
    int sample_rate = kDefaultSampleRate;

    double duration_s() const {
        return static_cast<double>(samples.size()) / sample_rate;
    }
};

/// 4-channel first-order Ambisonics buffer, ACN order (W, Y, Z, X) with
/// SN3D normalization.
struct FoaClip {
    std::array<std::vector<double>, 4> channels;
    int sample_rate = kDefaultSampleRate;

    static FoaClip silence(std::size_t frames, int sample_rate);

    std::size_t frames() const { return channels[0].size(); }
};

/// Measured (or synthetic) spatial room impulse response.
struct Rir {
    std::array<std::vector<double>, 4> ir;  // ACN/SN3D, 4 x L
    Doa doa;
    std::string room_id;
    std::optional<double> distance_m;
    int sample_rate = kDefaultSampleRate;

    std::size_t taps() const { return ir[0].size(); }
};

/// A single-tap RIR whose channel gains are the SN3D gains of `d`;
/// convolving with it reproduces encode_foa_anechoic bit for bit.
Rir delta_rir(const Doa& d, int sample_rate = kDefaultSampleRate, std::string room_id = "anechoic");

/// Free-field SN3D panner: W = s, Y = s sin(az) cos(el), Z = s sin(el),
/// X = s cos(az) cos(el).
FoaClip encode_foa_anechoic(const MonoClip& m, const Doa& d);

enum class ConvMode {
    kAuto,    // direct for kernels up to 512 taps, overlap-add FFT above
    kDirect,
    kFft,
};

/// Full linear convolution, output length |x| + |h| - 1.
std::vector<double> convolve(std::span<const double> x, std::span<const double> h,
                             ConvMode mode = ConvMode::kAuto);

/// Convolves a dry mono clip with each RIR channel. Sample rates must match
/// (no silent resampling); output keeps the full T + L - 1 tail.
FoaClip convolve_rir(const MonoClip& m, const Rir& r, ConvMode mode = ConvMode::kAuto);

/// Sums events into a clip of round(duration * sr) samples. Each event is
/// added sample-accurately at its onset; anything past the end is truncated.
/// No normalization is applied.
FoaClip mix_events(const std::vector<std::pair<FoaClip, double>>& placed, double duration_s,
                   int sample_rate);

/// Scales all channels by the same factor so the global peak equals
/// `target`; throws SilentClipError on all-zero input.
FoaClip peak_normalize(const FoaClip& c, double target);

FoaClip read_foa_wav(const std::filesystem::path& path);
void write_foa_wav(const std::filesystem::path& path, const FoaClip& c,
                   WavFormat format = WavFormat::kPcm16);
MonoClip read_mono_wav(const std::filesystem::path& path);
void write_mono_wav(const std::filesystem::path& path, const MonoClip& m,
                    WavFormat format = WavFormat::kPcm16);

}  // namespace seldkit
