#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <random>

#include "seldkit/errors.hpp"
#include "seldkit/foa.hpp"
#include "seldkit/fsio.hpp"
#include "seldkit/wav.hpp"

using namespace seldkit;
namespace fs = std::filesystem;

namespace {

struct TempDir {
    fs::path path;
    TempDir() {
        path = fs::temp_directory_path() /
               ("seldkit_wav_" + std::to_string(std::random_device{}()));
        fs::create_directories(path);
    }
    ~TempDir() {
        std::error_code ec;
        fs::remove_all(path, ec);
    }
};

}  // namespace

TEST_CASE("float32 WAV round trip is lossless for float-representable data") {
    TempDir tmp;
    std::mt19937 rng(1);
    std::uniform_real_distribution<double> amp(-1.0, 1.0);
    std::vector<std::vector<double>> channels(4, std::vector<double>(256));
    for (auto& ch : channels) {
        for (auto& s : ch) s = static_cast<float>(amp(rng));
    }

    const fs::path p = tmp.path / "f32.wav";
    write_wav(p, channels, 24000, WavFormat::kFloat32);
    const WavData back = read_wav(p);
    CHECK(back.sample_rate == 24000);
    REQUIRE(back.channels.size() == 4);
    REQUIRE(back.frames() == 256);
    for (int c = 0; c < 4; ++c) {
        for (std::size_t i = 0; i < 256; ++i) {
            CHECK(back.channels[c][i] == channels[c][i]);
        }
    }
}

TEST_CASE("PCM16 WAV round trip within one quantization step") {
    TempDir tmp;
    std::mt19937 rng(2);
    std::uniform_real_distribution<double> amp(-1.0, 1.0);
    std::vector<std::vector<double>> channels(1, std::vector<double>(500));
    for (auto& s : channels[0]) s = amp(rng);

    const fs::path p = tmp.path / "pcm16.wav";
    write_wav(p, channels, 24000);
    const WavData back = read_wav(p);
    REQUIRE(back.channels.size() == 1);
    for (std::size_t i = 0; i < 500; ++i) {
        CHECK(std::abs(back.channels[0][i] - channels[0][i]) <= 1.0 / 32768.0);
    }
}

TEST_CASE("PCM16 clamps out-of-range samples") {
    TempDir tmp;
    const fs::path p = tmp.path / "clip.wav";
    write_wav(p, {{2.0, -3.0, 1.0, -1.0}}, 24000);
    const WavData back = read_wav(p);
    CHECK(back.channels[0][0] == doctest::Approx(32767.0 / 32768.0));
    CHECK(back.channels[0][1] == doctest::Approx(-1.0));
    CHECK(back.channels[0][2] == doctest::Approx(32767.0 / 32768.0));
    CHECK(back.channels[0][3] == doctest::Approx(-1.0));
}

TEST_CASE("writes are byte-deterministic") {
    TempDir tmp;
    std::mt19937 rng(3);
    std::uniform_real_distribution<double> amp(-1.0, 1.0);
    std::vector<std::vector<double>> channels(4, std::vector<double>(128));
    for (auto& ch : channels) {
        for (auto& s : ch) s = amp(rng);
    }
    write_wav(tmp.path / "a.wav", channels, 24000);
    write_wav(tmp.path / "b.wav", channels, 24000);
    CHECK(read_file(tmp.path / "a.wav") == read_file(tmp.path / "b.wav"));
}

TEST_CASE("malformed files are rejected") {
    TempDir tmp;

    SUBCASE("not RIFF") {
        const fs::path p = tmp.path / "bad.wav";
        write_file_atomic(p, "this is not a wav file at all............");
        CHECK_THROWS_WITH_AS(read_wav(p), doctest::Contains("not a RIFF"), std::runtime_error);
    }

    SUBCASE("truncated data chunk") {
        const fs::path good = tmp.path / "good.wav";
        write_wav(good, {{0.1, 0.2, 0.3, 0.4}}, 24000);
        std::string bytes = read_file(good);
        bytes.resize(bytes.size() - 3);
        const fs::path bad = tmp.path / "trunc.wav";
        write_file_atomic(bad, bytes);
        CHECK_THROWS_AS(read_wav(bad), std::runtime_error);
    }

    SUBCASE("missing file") { CHECK_THROWS_AS(read_wav(tmp.path / "nope.wav"), std::runtime_error); }
}

TEST_CASE("FOA adapters enforce channel counts") {
    TempDir tmp;
    const fs::path mono = tmp.path / "mono.wav";
    write_mono_wav(mono, MonoClip{{0.0, 0.1, -0.1}, 24000});
    CHECK_THROWS_AS(read_foa_wav(mono), NotFoaError);

    const fs::path quad = tmp.path / "quad.wav";
    FoaClip c = FoaClip::silence(16, 24000);
    c.channels[kX][3] = 0.25;
    write_foa_wav(quad, c, WavFormat::kFloat32);
    const FoaClip back = read_foa_wav(quad);
    CHECK(back.sample_rate == 24000);
    CHECK(back.frames() == 16);
    CHECK(back.channels[kX][3] == doctest::Approx(0.25));
    CHECK_THROWS_AS(read_mono_wav(quad), std::runtime_error);
}
