#include "seldkit/metadata.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <sstream>
#include <string>
#include <tuple>

#include "seldkit/errors.hpp"
#include "seldkit/fsio.hpp"

namespace seldkit {

namespace {

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

long parse_int(const std::string& field, const std::string& file, long line_no,
               const char* what) {
    long v = 0;
    const char* first = field.data();
    const char* last = field.data() + field.size();
    auto [ptr, ec] = std::from_chars(first, last, v);
    if (ec != std::errc{} || ptr != last) {
        throw ParseError(file, line_no, std::string("bad ") + what + " '" + field + "'");
    }
    return v;
}

double parse_angle(const std::string& field, const std::string& file, long line_no,
                   const char* what) {
    std::size_t used = 0;
    double v = 0.0;
    try {
        v = std::stod(field, &used);
    } catch (const std::exception&) {
        throw ParseError(file, line_no, std::string("bad ") + what + " '" + field + "'");
    }
    if (used != field.size()) {
        throw ParseError(file, line_no, std::string("bad ") + what + " '" + field + "'");
    }
    return v;
}

}  // namespace

std::vector<SeldEvent> read_metadata(const std::filesystem::path& path) {
    const std::string file = path.string();
    std::istringstream in(read_file(path));

    std::vector<SeldEvent> events;
    std::string line;
    long line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line.empty()) continue;

        const auto fields = split_fields(line);
        if (fields.size() != 5) {
            throw ParseError(file, line_no,
                             "expected 5 fields, found " + std::to_string(fields.size()));
        }
        const long frame = parse_int(fields[0], file, line_no, "frame");
        const long class_idx = parse_int(fields[1], file, line_no, "class");
        const long source_idx = parse_int(fields[2], file, line_no, "source");
        const double azimuth = parse_angle(fields[3], file, line_no, "azimuth");
        const double elevation = parse_angle(fields[4], file, line_no, "elevation");

        if (frame < 0) throw RangeError(file, line_no, "negative frame index");
        if (class_idx < 0 || class_idx >= kNumClasses) {
            throw RangeError(file, line_no, "class " + std::to_string(class_idx) +
                                                " outside 0.." + std::to_string(kNumClasses - 1));
        }
        if (source_idx < 0) throw RangeError(file, line_no, "negative source index");
        if (azimuth < -180.0 || azimuth > 180.0) {
            throw RangeError(file, line_no, "azimuth outside [-180, 180]");
        }
        if (elevation < -90.0 || elevation > 90.0) {
            throw RangeError(file, line_no, "elevation outside [-90, 90]");
        }
        events.push_back({static_cast<int>(frame), static_cast<int>(class_idx),
                          static_cast<int>(source_idx), Doa(azimuth, elevation)});
    }
    return events;
}

std::string format_metadata(std::span<const SeldEvent> events) {
    std::vector<SeldEvent> sorted(events.begin(), events.end());
    std::sort(sorted.begin(), sorted.end(), [](const SeldEvent& a, const SeldEvent& b) {
        return std::tie(a.frame, a.class_idx, a.source_idx) <
               std::tie(b.frame, b.class_idx, b.source_idx);
    });

    std::string out;
    for (const SeldEvent& e : sorted) {
        out += std::to_string(e.frame);
        out += ',';
        out += std::to_string(e.class_idx);
        out += ',';
        out += std::to_string(e.source_idx);
        out += ',';
        out += std::to_string(std::lround(e.doa.azimuth()));    // half away from zero
        out += ',';
        out += std::to_string(std::lround(e.doa.elevation()));
        out += '\n';
    }
    return out;
}

void write_metadata(std::span<const SeldEvent> events, const std::filesystem::path& path) {
    write_file_atomic(path, format_metadata(events));
}

}  // namespace seldkit
