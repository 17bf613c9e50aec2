#include "seldkit/labels.hpp"

#include <algorithm>
#include <cmath>
#include <cstring>
#include <map>
#include <numeric>
#include <stdexcept>

#include "seldkit/errors.hpp"
#include "seldkit/fsio.hpp"

namespace seldkit {

MultiAccdoaTensor MultiAccdoaTensor::zeros(int frames) {
    MultiAccdoaTensor t;
    t.frames = frames;
    t.values.assign(static_cast<std::size_t>(frames) * kTracks * kNumClasses * 3, 0.0);
    return t;
}

MultiAccdoaTensor encode_multi_accdoa(std::span<const SeldEvent> events, int frames) {
    MultiAccdoaTensor t = MultiAccdoaTensor::zeros(frames);

    std::map<std::pair<int, int>, std::vector<const SeldEvent*>> groups;
    for (const SeldEvent& e : events) {
        if (e.frame < 0 || e.frame >= frames) {
            throw std::out_of_range("encode_multi_accdoa: event frame " +
                                    std::to_string(e.frame) + " outside 0.." +
                                    std::to_string(frames - 1));
        }
        groups[{e.frame, e.class_idx}].push_back(&e);
    }

    for (auto& [key, group] : groups) {
        if (group.size() > MultiAccdoaTensor::kTracks) {
            throw TooManySourcesError("frame " + std::to_string(key.first) + " class " +
                                      std::to_string(key.second) + " has " +
                                      std::to_string(group.size()) +
                                      " sources, the format holds 3");
        }
        std::sort(group.begin(), group.end(), [](const SeldEvent* a, const SeldEvent* b) {
            return a->source_idx < b->source_idx;
        });
        for (std::size_t slot = 0; slot < group.size(); ++slot) {
            const Vec3 v = doa_to_unit_vec(group[slot]->doa);
            t.at(key.first, static_cast<int>(slot), key.second, 0) = v.x;
            t.at(key.first, static_cast<int>(slot), key.second, 1) = v.y;
            t.at(key.first, static_cast<int>(slot), key.second, 2) = v.z;
        }
    }
    return t;
}

std::vector<SeldEvent> decode_multi_accdoa(const MultiAccdoaTensor& t, double threshold) {
    std::vector<SeldEvent> events;
    for (int frame = 0; frame < t.frames; ++frame) {
        for (int track = 0; track < MultiAccdoaTensor::kTracks; ++track) {
            for (int cls = 0; cls < kNumClasses; ++cls) {
                const Vec3 v{t.at(frame, track, cls, 0), t.at(frame, track, cls, 1),
                             t.at(frame, track, cls, 2)};
                if (v.norm() > threshold) {
                    events.push_back({frame, cls, track, unit_vec_to_doa(v)});
                }
            }
        }
    }
    return events;
}

BoundingBox::BoundingBox(double cx_, double cy_, double w_, double h_) {
    cx = std::clamp(cx_, 0.0, 1.0);
    cy = std::clamp(cy_, 0.0, 1.0);
    w = std::clamp(w_, 0.0, 1.0);
    h = std::clamp(h_, 0.0, 1.0);
}

VisualEmbedding encode_visual_boxes(std::span<const BoundingBox> boxes, std::size_t* dropped) {
    std::vector<std::size_t> keep(boxes.size());
    std::iota(keep.begin(), keep.end(), 0);
    if (boxes.size() > VisualEmbedding::kMaxBoxes) {
        // Keep the six largest by area, preserving input order.
        std::stable_sort(keep.begin(), keep.end(), [&](std::size_t a, std::size_t b) {
            return boxes[a].area() > boxes[b].area();
        });
        keep.resize(VisualEmbedding::kMaxBoxes);
        std::sort(keep.begin(), keep.end());
    }
    if (dropped != nullptr) {
        *dropped = boxes.size() - keep.size();
    }

    constexpr int n = VisualEmbedding::kBins;
    VisualEmbedding emb;
    for (std::size_t slot = 0; slot < keep.size(); ++slot) {
        const BoundingBox& box = boxes[keep[slot]];
        const double centers[2] = {box.cx * (n - 1), box.cy * (n - 1)};
        const double sigmas[2] = {std::max(box.w * (n - 1) / 2.0, 1.0),
                                  std::max(box.h * (n - 1) / 2.0, 1.0)};
        for (int axis = 0; axis < 2; ++axis) {
            for (int bin = 0; bin < n; ++bin) {
                const double d = bin - centers[axis];
                emb.at(axis, static_cast<int>(slot), bin) =
                    std::exp(-(d * d) / (2.0 * sigmas[axis] * sigmas[axis]));
            }
        }
    }
    return emb;
}

std::vector<std::vector<BoundingBox>> read_boxes_csv(const std::filesystem::path& path) {
    const std::string file = path.string();
    const std::string buf = read_file(path);

    std::vector<std::vector<BoundingBox>> per_frame;
    long line_no = 0;
    std::size_t pos = 0;
    while (pos < buf.size()) {
        std::size_t eol = buf.find('\n', pos);
        if (eol == std::string::npos) eol = buf.size();
        std::string line = buf.substr(pos, eol - pos);
        pos = eol + 1;
        ++line_no;
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line.empty()) continue;

        double fields[5];
        int n = 0;
        std::size_t start = 0;
        while (n < 5) {
            std::size_t comma = line.find(',', start);
            const std::string field =
                comma == std::string::npos ? line.substr(start) : line.substr(start, comma - start);
            try {
                std::size_t used = 0;
                fields[n] = std::stod(field, &used);
                if (used != field.size()) throw std::invalid_argument(field);
            } catch (const std::exception&) {
                throw ParseError(file, line_no, "bad field '" + field + "'");
            }
            ++n;
            if (comma == std::string::npos) break;
            start = comma + 1;
        }
        if (n != 5) {
            throw ParseError(file, line_no, "expected 5 fields (frame,cx,cy,w,h)");
        }
        const double frame_field = fields[0];
        if (frame_field < 0 || frame_field != std::floor(frame_field)) {
            throw RangeError(file, line_no, "bad frame index");
        }
        const auto frame = static_cast<std::size_t>(frame_field);
        if (per_frame.size() <= frame) per_frame.resize(frame + 1);
        per_frame[frame].emplace_back(fields[1], fields[2], fields[3], fields[4]);
    }
    return per_frame;
}

namespace {

void append_u32le(std::string& out, std::uint32_t v) {
    out.push_back(static_cast<char>(v & 0xFF));
    out.push_back(static_cast<char>((v >> 8) & 0xFF));
    out.push_back(static_cast<char>((v >> 16) & 0xFF));
    out.push_back(static_cast<char>((v >> 24) & 0xFF));
}

std::uint32_t read_u32le(const std::string& b, std::size_t off) {
    return static_cast<std::uint32_t>(static_cast<std::uint8_t>(b[off])) |
           (static_cast<std::uint32_t>(static_cast<std::uint8_t>(b[off + 1])) << 8) |
           (static_cast<std::uint32_t>(static_cast<std::uint8_t>(b[off + 2])) << 16) |
           (static_cast<std::uint32_t>(static_cast<std::uint8_t>(b[off + 3])) << 24);
}

}  // namespace

void write_tensor(const std::filesystem::path& path, const std::array<std::uint32_t, 4>& dims,
                  std::span<const float> values) {
    const std::size_t expect = static_cast<std::size_t>(dims[0]) * dims[1] * dims[2] * dims[3];
    if (values.size() != expect) {
        throw std::invalid_argument("write_tensor: dims disagree with value count");
    }
    std::string out;
    out.reserve(32 + values.size() * 4);
    append_u32le(out, kTensorMagic);
    append_u32le(out, kTensorVersion);
    for (std::uint32_t d : dims) append_u32le(out, d);
    append_u32le(out, 0);
    append_u32le(out, 0);
    for (float v : values) {
        std::uint32_t bits;
        std::memcpy(&bits, &v, sizeof bits);
        append_u32le(out, bits);
    }
    write_file_atomic(path, out);
}

TensorFile read_tensor(const std::filesystem::path& path) {
    const std::string buf = read_file(path);
    if (buf.size() < 32) {
        throw std::runtime_error(path.string() + ": truncated tensor header");
    }
    if (read_u32le(buf, 0) != kTensorMagic) {
        throw std::runtime_error(path.string() + ": bad tensor magic");
    }
    if (read_u32le(buf, 4) != kTensorVersion) {
        throw std::runtime_error(path.string() + ": unsupported tensor version");
    }
    TensorFile t;
    std::size_t count = 1;
    for (int i = 0; i < 4; ++i) {
        t.dims[static_cast<std::size_t>(i)] = read_u32le(buf, 8 + 4 * static_cast<std::size_t>(i));
        count *= t.dims[static_cast<std::size_t>(i)];
    }
    if (buf.size() != 32 + count * 4) {
        throw std::runtime_error(path.string() + ": tensor size disagrees with header");
    }
    t.values.resize(count);
    for (std::size_t i = 0; i < count; ++i) {
        const std::uint32_t bits = read_u32le(buf, 32 + i * 4);
        float v;
        std::memcpy(&v, &bits, sizeof v);
        t.values[i] = v;
    }
    return t;
}

void write_accdoa_tensor(const std::filesystem::path& path, const MultiAccdoaTensor& t) {
    std::vector<float> values(t.values.size());
    for (std::size_t i = 0; i < t.values.size(); ++i) {
        values[i] = static_cast<float>(t.values[i]);
    }
    write_tensor(path,
                 {static_cast<std::uint32_t>(t.frames), MultiAccdoaTensor::kTracks, kNumClasses, 3},
                 values);
}

void write_visual_tensor(const std::filesystem::path& path,
                         std::span<const VisualEmbedding> per_frame) {
    std::vector<float> values;
    values.reserve(per_frame.size() * 2 * VisualEmbedding::kMaxBoxes * VisualEmbedding::kBins);
    for (const VisualEmbedding& emb : per_frame) {
        for (double v : emb.values) values.push_back(static_cast<float>(v));
    }
    write_tensor(path,
                 {static_cast<std::uint32_t>(per_frame.size()), 2, VisualEmbedding::kMaxBoxes,
                  VisualEmbedding::kBins},
                 values);
}

}  // namespace seldkit
