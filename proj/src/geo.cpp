#include "seldkit/geo.hpp"

#include <algorithm>

namespace seldkit {

double wrap_degrees(double deg) {
    // std::remainder is exact and lands in [-180, 180]; fold the closed
    // upper end back onto -180 to keep the half-open convention.
    double w = std::remainder(deg, 360.0);
    if (w == 180.0) {
        w = -180.0;
    }
    return w == 0.0 ? 0.0 : w;  // normalize -0.0
}

Vec3 doa_to_unit_vec(const Doa& d) {
    const double az = deg_to_rad(d.azimuth());
    const double el = deg_to_rad(d.elevation());
    const double cos_el = std::cos(el);
    return {std::cos(az) * cos_el, std::sin(az) * cos_el, std::sin(el)};
}

Doa unit_vec_to_doa(const Vec3& v) {
    const double n = v.norm();
    if (n <= 1e-12) {
        throw ZeroVectorError("cannot derive a direction from a zero vector");
    }
    const double horizontal = std::hypot(v.x, v.y);
    const double elevation = rad_to_deg(std::atan2(v.z, horizontal));
    const double azimuth = horizontal == 0.0 ? 0.0 : rad_to_deg(std::atan2(v.y, v.x));
    return {azimuth, elevation};
}

double angular_distance(const Doa& a, const Doa& b) {
    const Vec3 u = doa_to_unit_vec(a);
    const Vec3 v = doa_to_unit_vec(b);
    // atan2 of (|u x v|, u.v) is accurate for both tiny and near-180 angles.
    return rad_to_deg(std::atan2(cross(u, v).norm(), dot(u, v)));
}

Pixel project_equirect(const Doa& d, const FrameGeometry& g) {
    double u = (0.5 - d.azimuth() / 360.0) * g.width;
    if (u >= g.width) {
        u -= g.width;  // azimuth -180 lands exactly on the seam
    }
    int x = static_cast<int>(std::floor(u));
    if (x >= g.width) {
        x = 0;
    }

    double v = (0.5 - d.elevation() / 180.0) * g.height;
    v = std::clamp(v, 0.0, static_cast<double>(g.height - 1));
    const int y = static_cast<int>(std::floor(v));
    return {x, y};
}

}  // namespace seldkit
