#pragma once

#include <filesystem>
#include <vector>

namespace seldkit {

enum class WavFormat {
    kPcm16,
    kFloat32,
};

struct WavData {
    int sample_rate = 0;
    std::vector<std::vector<double>> channels;  // de-interleaved, one vector per channel

    std::size_t frames() const { return channels.empty() ? 0 : channels.front().size(); }
};

/// Reads a RIFF/WAVE file. Supports PCM16, IEEE float32 and the EXTENSIBLE
/// wrappers of either; other codecs are rejected.
WavData read_wav(const std::filesystem::path& path);

/// Writes a canonical WAV (44-byte header, single data chunk). PCM16 samples
/// are clamped to [-1, 1] and rounded half away from zero. The write is
/// atomic.
void write_wav(const std::filesystem::path& path, const std::vector<std::vector<double>>& channels,
               int sample_rate, WavFormat format = WavFormat::kPcm16);

}  // namespace seldkit
