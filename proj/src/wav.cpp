#include "seldkit/wav.hpp"

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <cstring>
#include <stdexcept>

#include "seldkit/fsio.hpp"

namespace seldkit {

namespace {

constexpr std::uint16_t kFormatPcm = 0x0001;
constexpr std::uint16_t kFormatFloat = 0x0003;
constexpr std::uint16_t kFormatExtensible = 0xFFFE;

std::uint16_t read_u16(const std::string& b, std::size_t off) {
    return static_cast<std::uint16_t>(static_cast<std::uint8_t>(b[off]) |
                                      (static_cast<std::uint8_t>(b[off + 1]) << 8));
}

std::uint32_t read_u32(const std::string& b, std::size_t off) {
    return static_cast<std::uint32_t>(static_cast<std::uint8_t>(b[off])) |
           (static_cast<std::uint32_t>(static_cast<std::uint8_t>(b[off + 1])) << 8) |
           (static_cast<std::uint32_t>(static_cast<std::uint8_t>(b[off + 2])) << 16) |
           (static_cast<std::uint32_t>(static_cast<std::uint8_t>(b[off + 3])) << 24);
}

void append_u16(std::string& b, std::uint16_t v) {
    b.push_back(static_cast<char>(v & 0xFF));
    b.push_back(static_cast<char>((v >> 8) & 0xFF));
}

void append_u32(std::string& b, std::uint32_t v) {
    b.push_back(static_cast<char>(v & 0xFF));
    b.push_back(static_cast<char>((v >> 8) & 0xFF));
    b.push_back(static_cast<char>((v >> 16) & 0xFF));
    b.push_back(static_cast<char>((v >> 24) & 0xFF));
}

double decode_pcm16(const std::string& b, std::size_t off) {
    const auto raw = static_cast<std::int16_t>(read_u16(b, off));
    return raw / 32768.0;
}

double decode_f32(const std::string& b, std::size_t off) {
    std::uint32_t bits = read_u32(b, off);
    float f;
    std::memcpy(&f, &bits, sizeof f);
    return f;
}

}  // namespace

WavData read_wav(const std::filesystem::path& path) {
    const std::string buf = read_file(path);
    auto fail = [&](const std::string& why) -> std::runtime_error {
        return std::runtime_error(path.string() + ": " + why);
    };
    if (buf.size() < 12 || buf.compare(0, 4, "RIFF") != 0 || buf.compare(8, 4, "WAVE") != 0) {
        throw fail("not a RIFF/WAVE file");
    }

    std::uint16_t format_tag = 0;
    std::uint16_t num_channels = 0;
    std::uint32_t sample_rate = 0;
    std::uint16_t bits_per_sample = 0;
    bool have_fmt = false;
    std::size_t data_off = 0;
    std::size_t data_len = 0;

    std::size_t pos = 12;
    while (pos + 8 <= buf.size()) {
        const std::string id = buf.substr(pos, 4);
        const std::uint32_t size = read_u32(buf, pos + 4);
        const std::size_t body = pos + 8;
        if (body + size > buf.size()) {
            throw fail("truncated chunk '" + id + "'");
        }
        if (id == "fmt ") {
            if (size < 16) throw fail("fmt chunk too small");
            format_tag = read_u16(buf, body);
            num_channels = read_u16(buf, body + 2);
            sample_rate = read_u32(buf, body + 4);
            bits_per_sample = read_u16(buf, body + 14);
            if (format_tag == kFormatExtensible) {
                if (size < 40) throw fail("extensible fmt chunk too small");
                format_tag = read_u16(buf, body + 24);  // first bytes of the sub-format GUID
            }
            have_fmt = true;
        } else if (id == "data") {
            data_off = body;
            data_len = size;
        }
        pos = body + size + (size & 1);  // chunks are word-aligned
    }

    if (!have_fmt) throw fail("missing fmt chunk");
    if (data_off == 0) throw fail("missing data chunk");
    if (num_channels == 0) throw fail("zero channels");
    if (sample_rate == 0) throw fail("zero sample rate");

    std::size_t bytes_per_sample;
    if (format_tag == kFormatPcm && bits_per_sample == 16) {
        bytes_per_sample = 2;
    } else if (format_tag == kFormatFloat && bits_per_sample == 32) {
        bytes_per_sample = 4;
    } else {
        throw fail("unsupported encoding (want PCM16 or float32), format tag " +
                   std::to_string(format_tag) + ", " + std::to_string(bits_per_sample) + " bits");
    }

    const std::size_t frame_bytes = bytes_per_sample * num_channels;
    const std::size_t frames = data_len / frame_bytes;

    WavData out;
    out.sample_rate = static_cast<int>(sample_rate);
    out.channels.assign(num_channels, std::vector<double>(frames));
    for (std::size_t f = 0; f < frames; ++f) {
        std::size_t off = data_off + f * frame_bytes;
        for (std::uint16_t c = 0; c < num_channels; ++c, off += bytes_per_sample) {
            out.channels[c][f] =
                bytes_per_sample == 2 ? decode_pcm16(buf, off) : decode_f32(buf, off);
        }
    }
    return out;
}

void write_wav(const std::filesystem::path& path, const std::vector<std::vector<double>>& channels,
               int sample_rate, WavFormat format) {
    if (channels.empty()) {
        throw std::invalid_argument("write_wav: no channels");
    }
    const std::size_t frames = channels.front().size();
    for (const auto& ch : channels) {
        if (ch.size() != frames) {
            throw std::invalid_argument("write_wav: channel length mismatch");
        }
    }
    if (sample_rate <= 0) {
        throw std::invalid_argument("write_wav: sample rate must be positive");
    }

    const std::uint16_t num_channels = static_cast<std::uint16_t>(channels.size());
    const std::uint16_t bits = format == WavFormat::kPcm16 ? 16 : 32;
    const std::uint16_t block_align = static_cast<std::uint16_t>(num_channels * bits / 8);
    const std::uint32_t data_bytes = static_cast<std::uint32_t>(frames * block_align);

    std::string out;
    out.reserve(44 + data_bytes);
    out += "RIFF";
    append_u32(out, 36 + data_bytes);
    out += "WAVE";
    out += "fmt ";
    append_u32(out, 16);
    append_u16(out, format == WavFormat::kPcm16 ? kFormatPcm : kFormatFloat);
    append_u16(out, num_channels);
    append_u32(out, static_cast<std::uint32_t>(sample_rate));
    append_u32(out, static_cast<std::uint32_t>(sample_rate) * block_align);
    append_u16(out, block_align);
    append_u16(out, bits);
    out += "data";
    append_u32(out, data_bytes);

    for (std::size_t f = 0; f < frames; ++f) {
        for (const auto& ch : channels) {
            const double s = ch[f];
            if (format == WavFormat::kPcm16) {
                const long raw = std::lround(std::clamp(s, -1.0, 1.0) * 32768.0);
                const auto q = static_cast<std::int16_t>(std::clamp(raw, -32768L, 32767L));
                append_u16(out, static_cast<std::uint16_t>(q));
            } else {
                const float fv = static_cast<float>(s);
                std::uint32_t bitsv;
                std::memcpy(&bitsv, &fv, sizeof bitsv);
                append_u32(out, bitsv);
            }
        }
    }
    write_file_atomic(path, out);
}

}  // namespace seldkit
