#include "seldkit/image.hpp"

#include <cctype>
#include <stdexcept>
#include <string>

#include "seldkit/fsio.hpp"

namespace seldkit {

namespace {

// Reads one whitespace-delimited token, skipping '#' comments.
std::string next_token(const std::string& buf, std::size_t& pos) {
    while (pos < buf.size()) {
        if (std::isspace(static_cast<unsigned char>(buf[pos]))) {
            ++pos;
        } else if (buf[pos] == '#') {
            while (pos < buf.size() && buf[pos] != '\n') ++pos;
        } else {
            break;
        }
    }
    const std::size_t start = pos;
    while (pos < buf.size() && !std::isspace(static_cast<unsigned char>(buf[pos]))) ++pos;
    return buf.substr(start, pos - start);
}

}  // namespace

Image read_ppm(const std::filesystem::path& path) {
    const std::string buf = read_file(path);
    std::size_t pos = 0;
    if (next_token(buf, pos) != "P6") {
        throw std::runtime_error(path.string() + ": not a binary PPM (P6)");
    }
    Image img;
    try {
        img.width = std::stoi(next_token(buf, pos));
        img.height = std::stoi(next_token(buf, pos));
        const int maxval = std::stoi(next_token(buf, pos));
        if (maxval != 255) {
            throw std::runtime_error("unsupported maxval " + std::to_string(maxval));
        }
    } catch (const std::invalid_argument&) {
        throw std::runtime_error(path.string() + ": malformed PPM header");
    }
    if (img.width <= 0 || img.height <= 0) {
        throw std::runtime_error(path.string() + ": bad PPM dimensions");
    }
    ++pos;  // single whitespace byte after maxval
    const std::size_t need = static_cast<std::size_t>(img.width) * img.height * 3;
    if (buf.size() - pos < need) {
        throw std::runtime_error(path.string() + ": truncated PPM pixel data");
    }
    img.data.assign(buf.begin() + static_cast<std::ptrdiff_t>(pos),
                    buf.begin() + static_cast<std::ptrdiff_t>(pos + need));
    return img;
}

void write_ppm(const std::filesystem::path& path, const Image& img) {
    std::string out = "P6\n" + std::to_string(img.width) + " " + std::to_string(img.height) +
                      "\n255\n";
    out.append(reinterpret_cast<const char*>(img.data.data()), img.data.size());
    write_file_atomic(path, out);
}

Image resize_nearest(const Image& src, int width, int height) {
    Image dst;
    dst.width = width;
    dst.height = height;
    dst.data.resize(static_cast<std::size_t>(width) * height * 3);
    for (int y = 0; y < height; ++y) {
        const int sy = static_cast<int>((static_cast<long long>(y) * src.height) / height);
        for (int x = 0; x < width; ++x) {
            const int sx = static_cast<int>((static_cast<long long>(x) * src.width) / width);
            const std::uint8_t* s = src.pixel(sx, sy);
            std::uint8_t* d = dst.pixel(x, y);
            d[0] = s[0];
            d[1] = s[1];
            d[2] = s[2];
        }
    }
    return dst;
}

}  // namespace seldkit
