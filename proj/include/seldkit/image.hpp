#pragma once

#include <cstdint>
#include <filesystem>
#include <vector>

namespace seldkit {

/// 8-bit RGB raster, row-major, 3 bytes per pixel.
struct Image {
    int width = 0;
    int height = 0;
    std::vector<std::uint8_t> data;

    static Image black(int width, int height) {
        Image img;
        img.width = width;
        img.height = height;
        img.data.assign(static_cast<std::size_t>(width) * height * 3, 0);
        return img;
    }

    std::uint8_t* pixel(int x, int y) {
        return data.data() + (static_cast<std::size_t>(y) * width + x) * 3;
    }

    const std::uint8_t* pixel(int x, int y) const {
        return data.data() + (static_cast<std::size_t>(y) * width + x) * 3;
    }

    friend bool operator==(const Image&, const Image&) = default;
};

/// Binary PPM (P6, maxval 255) reader/writer. Comments in the header are
/// accepted on read; writes are atomic (temp file + rename).
Image read_ppm(const std::filesystem::path& path);
void write_ppm(const std::filesystem::path& path, const Image& img);

/// Nearest-neighbour resample (used to bring tile assets to 50x50).
Image resize_nearest(const Image& src, int width, int height);

}  // namespace seldkit
