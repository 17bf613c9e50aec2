#include "seldkit/foa.hpp"

#include <cmath>
#include <complex>
#include <stdexcept>

#include "seldkit/errors.hpp"

namespace seldkit {

namespace {

constexpr std::size_t kDirectConvMaxTaps = 512;

std::size_t next_pow2(std::size_t n) {
    std::size_t p = 1;
    while (p < n) p <<= 1;
    return p;
}

// Iterative radix-2 FFT, in place. `n` must be a power of two.
void fft_inplace(std::vector<std::complex<double>>& a, bool inverse) {
    const std::size_t n = a.size();
    for (std::size_t i = 1, j = 0; i < n; ++i) {
        std::size_t bit = n >> 1;
        for (; j & bit; bit >>= 1) j ^= bit;
        j ^= bit;
        if (i < j) std::swap(a[i], a[j]);
    }
    for (std::size_t len = 2; len <= n; len <<= 1) {
        const double ang = (inverse ? 2.0 : -2.0) * kPi / static_cast<double>(len);
        const std::complex<double> wl(std::cos(ang), std::sin(ang));
        for (std::size_t i = 0; i < n; i += len) {
            std::complex<double> w(1.0, 0.0);
            for (std::size_t k = 0; k < len / 2; ++k) {
                const std::complex<double> u = a[i + k];
                const std::complex<double> v = a[i + k + len / 2] * w;
                a[i + k] = u + v;
                a[i + k + len / 2] = u - v;
                w *= wl;
            }
        }
    }
    if (inverse) {
        const double inv_n = 1.0 / static_cast<double>(n);
        for (auto& c : a) c *= inv_n;
    }
}

std::vector<double> convolve_direct(std::span<const double> x, std::span<const double> h) {
    std::vector<double> y(x.size() + h.size() - 1, 0.0);
    for (std::size_t i = 0; i < x.size(); ++i) {
        const double xi = x[i];
        if (xi == 0.0) continue;
        for (std::size_t j = 0; j < h.size(); ++j) {
            y[i + j] += xi * h[j];
        }
    }
    return y;
}

std::vector<double> convolve_overlap_add(std::span<const double> x, std::span<const double> h) {
    const std::size_t taps = h.size();
    const std::size_t fft_size = next_pow2(std::max<std::size_t>(2 * taps, 1024));
    const std::size_t block = fft_size - (taps - 1);

    std::vector<std::complex<double>> kernel(fft_size, 0.0);
    for (std::size_t i = 0; i < taps; ++i) kernel[i] = h[i];
    fft_inplace(kernel, false);

    std::vector<double> y(x.size() + taps - 1, 0.0);
    std::vector<std::complex<double>> work(fft_size);
    for (std::size_t start = 0; start < x.size(); start += block) {
        const std::size_t n = std::min(block, x.size() - start);
        std::fill(work.begin(), work.end(), std::complex<double>(0.0, 0.0));
        for (std::size_t i = 0; i < n; ++i) work[i] = x[start + i];
        fft_inplace(work, false);
        for (std::size_t i = 0; i < fft_size; ++i) work[i] *= kernel[i];
        fft_inplace(work, true);
        const std::size_t out_len = std::min(n + taps - 1, y.size() - start);
        for (std::size_t i = 0; i < out_len; ++i) y[start + i] += work[i].real();
    }
    return y;
}

}  // namespace

FoaClip FoaClip::silence(std::size_t frames, int sample_rate) {
    FoaClip c;
    c.sample_rate = sample_rate;
    for (auto& ch : c.channels) ch.assign(frames, 0.0);
    return c;
}

Rir delta_rir(const Doa& d, int sample_rate, std::string room_id) {
    const Vec3 v = doa_to_unit_vec(d);
    Rir r;
    r.ir[kW] = {1.0};
    r.ir[kY] = {v.y};
    r.ir[kZ] = {v.z};
    r.ir[kX] = {v.x};
    r.doa = d;
    r.room_id = std::move(room_id);
    r.sample_rate = sample_rate;
    return r;
}

FoaClip encode_foa_anechoic(const MonoClip& m, const Doa& d) {
    if (m.samples.empty()) {
        throw EmptyClipError("encode_foa_anechoic: empty input clip");
    }
    const Vec3 v = doa_to_unit_vec(d);
    FoaClip out;
    out.sample_rate = m.sample_rate;
    const std::array<double, 4> gains{1.0, v.y, v.z, v.x};
    for (int c = 0; c < 4; ++c) {
        auto& ch = out.channels[c];
        ch.resize(m.samples.size());
        const double g = gains[c];
        for (std::size_t i = 0; i < m.samples.size(); ++i) {
            ch[i] = m.samples[i] * g;
        }
    }
    return out;
}

std::vector<double> convolve(std::span<const double> x, std::span<const double> h, ConvMode mode) {
    if (x.empty() || h.empty()) {
        throw EmptyClipError("convolve: empty signal or kernel");
    }
    const bool direct =
        mode == ConvMode::kDirect || (mode == ConvMode::kAuto && h.size() <= kDirectConvMaxTaps);
    return direct ? convolve_direct(x, h) : convolve_overlap_add(x, h);
}

FoaClip convolve_rir(const MonoClip& m, const Rir& r, ConvMode mode) {
    if (m.samples.empty()) {
        throw EmptyClipError("convolve_rir: empty input clip");
    }
    if (r.taps() == 0) {
        throw EmptyClipError("convolve_rir: empty impulse response");
    }
    for (const auto& ch : r.ir) {
        if (ch.size() != r.taps()) {
            throw NotFoaError("convolve_rir: RIR channels differ in length");
        }
    }
    if (m.sample_rate != r.sample_rate) {
        throw SampleRateMismatchError(m.sample_rate, r.sample_rate);
    }
    FoaClip out;
    out.sample_rate = m.sample_rate;
    for (int c = 0; c < 4; ++c) {
        out.channels[c] = convolve(m.samples, r.ir[c], mode);
    }
    return out;
}

FoaClip mix_events(const std::vector<std::pair<FoaClip, double>>& placed, double duration_s,
                   int sample_rate) {
    if (duration_s < 0.0 || sample_rate <= 0) {
        throw std::invalid_argument("mix_events: bad duration or sample rate");
    }
    const auto total = static_cast<std::size_t>(std::llround(duration_s * sample_rate));
    FoaClip out = FoaClip::silence(total, sample_rate);
    for (const auto& [clip, onset_s] : placed) {
        if (onset_s < 0.0) {
            throw std::invalid_argument("mix_events: negative onset");
        }
        if (clip.sample_rate != sample_rate) {
            throw SampleRateMismatchError(sample_rate, clip.sample_rate);
        }
        const auto start = static_cast<std::size_t>(std::llround(onset_s * sample_rate));
        if (start >= total) continue;
        const std::size_t n = std::min(clip.frames(), total - start);
        for (int c = 0; c < 4; ++c) {
            const auto& src = clip.channels[c];
            auto& dst = out.channels[c];
            for (std::size_t i = 0; i < n; ++i) {
                dst[start + i] += src[i];
            }
        }
    }
    return out;
}

FoaClip peak_normalize(const FoaClip& c, double target) {
    double peak = 0.0;
    for (const auto& ch : c.channels) {
        for (double s : ch) {
            peak = std::max(peak, std::abs(s));
        }
    }
    if (peak == 0.0) {
        throw SilentClipError("peak_normalize: clip is silent");
    }
    const double scale = target / peak;
    FoaClip out = c;
    for (auto& ch : out.channels) {
        for (double& s : ch) s *= scale;
    }
    return out;
}

FoaClip read_foa_wav(const std::filesystem::path& path) {
    WavData w = read_wav(path);
    if (w.channels.size() != 4) {
        throw NotFoaError(path.string() + ": expected 4 channels, found " +
                          std::to_string(w.channels.size()));
    }
    FoaClip c;
    c.sample_rate = w.sample_rate;
    for (int i = 0; i < 4; ++i) c.channels[i] = std::move(w.channels[i]);
    return c;
}

void write_foa_wav(const std::filesystem::path& path, const FoaClip& c, WavFormat format) {
    std::vector<std::vector<double>> chans(c.channels.begin(), c.channels.end());
    write_wav(path, chans, c.sample_rate, format);
}

MonoClip read_mono_wav(const std::filesystem::path& path) {
    WavData w = read_wav(path);
    if (w.channels.size() != 1) {
        throw std::runtime_error(path.string() + ": expected mono, found " +
                                 std::to_string(w.channels.size()) + " channels");
    }
    return {std::move(w.channels[0]), w.sample_rate};
}

void write_mono_wav(const std::filesystem::path& path, const MonoClip& m, WavFormat format) {
    write_wav(path, {m.samples}, m.sample_rate, format);
}

}  // namespace seldkit
