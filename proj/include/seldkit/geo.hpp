#pragma once

#include <cmath>

#include "seldkit/errors.hpp"

namespace seldkit {

inline constexpr double kPi = 3.14159265358979323846;

constexpr double deg_to_rad(double deg) { return deg * (kPi / 180.0); }
constexpr double rad_to_deg(double rad) { return rad * (180.0 / kPi); }

/// Wraps an angle in degrees into [-180, 180).
double wrap_degrees(double deg);

struct Vec3 {
    double x = 0.0;
    double y = 0.0;
    double z = 0.0;

    double norm() const { return std::sqrt(x * x + y * y + z * z); }
};

inline double dot(const Vec3& a, const Vec3& b) { return a.x * b.x + a.y * b.y + a.z * b.z; }

inline Vec3 cross(const Vec3& a, const Vec3& b) {
    return {a.y * b.z - a.z * b.y, a.z * b.x - a.x * b.z, a.x * b.y - a.y * b.x};
}

/// Direction of arrival in degrees. Azimuth is stored wrapped into
/// [-180, 180) and increases counterclockwise (to the left in an
/// equirectangular image); elevation lies in [-90, 90]. At the poles the
/// azimuth is canonicalized to 0 so every direction has one representation.
class Doa {
public:
    Doa() = default;

    Doa(double azimuth_deg, double elevation_deg) {
        if (!std::isfinite(azimuth_deg) ||
            !(std::abs(elevation_deg) <= 90.0 + kElevationSlack)) {
            throw std::invalid_argument("invalid direction: azimuth " +
                                        std::to_string(azimuth_deg) + ", elevation " +
                                        std::to_string(elevation_deg));
        }
        elevation_ = elevation_deg > 90.0 ? 90.0 : (elevation_deg < -90.0 ? -90.0 : elevation_deg);
        azimuth_ = std::abs(elevation_) == 90.0 ? 0.0 : wrap_degrees(azimuth_deg);
    }

    double azimuth() const { return azimuth_; }
    double elevation() const { return elevation_; }

    friend bool operator==(const Doa&, const Doa&) = default;

private:
    // Tolerates fp dust from inverse trig without admitting bogus angles.
    static constexpr double kElevationSlack = 1e-9;

    double azimuth_ = 0.0;
    double elevation_ = 0.0;
};

/// Equirectangular full-sphere frame: width must be exactly twice the height.
struct FrameGeometry {
    FrameGeometry() = default;

    FrameGeometry(int width_px, int height_px) : width(width_px), height(height_px) {
        if (height <= 0 || width != 2 * height) {
            throw std::invalid_argument("equirectangular geometry requires width == 2*height");
        }
    }

    int width = 1920;
    int height = 960;

    friend bool operator==(const FrameGeometry&, const FrameGeometry&) = default;
};

struct Pixel {
    int x = 0;
    int y = 0;

    friend bool operator==(const Pixel&, const Pixel&) = default;
};

Vec3 doa_to_unit_vec(const Doa& d);

/// Inverse of doa_to_unit_vec. The input need not be normalized; throws
/// ZeroVectorError when the norm is at or below 1e-12.
Doa unit_vec_to_doa(const Vec3& v);

/// Great-circle angle between two directions, in [0, 180] degrees.
double angular_distance(const Doa& a, const Doa& b);

/// Maps a direction onto pixel indices: column (0.5 - az/360)*width wrapped
/// into [0, width), row (0.5 - el/180)*height clamped into [0, height-1],
/// both floored.
Pixel project_equirect(const Doa& d, const FrameGeometry& g);

}  // namespace seldkit
