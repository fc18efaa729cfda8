#pragma once

#include <Eigen/Core>
#include <Eigen/Geometry>

#include <cmath>

namespace berrytop {

using Vec3 = Eigen::Vector3d;
using Mat3 = Eigen::Matrix3d;

/// Spin branch relative to the local field: aligned (+1) or anti-aligned (-1).
enum class Branch : int { Aligned = 1, AntiAligned = -1 };

inline double sign(Branch b) { return static_cast<double>(static_cast<int>(b)); }
inline Branch flipped(Branch b) { return b == Branch::Aligned ? Branch::AntiAligned : Branch::Aligned; }
Branch branch_from_int(int value);

/// Wu-Yang chart. North is singular on the -z axis, South on the +z axis.
enum class Chart { North, South };

enum class Space { B, K };

const char* to_string(Chart chart);
const char* to_string(Space space);

struct KVector {
    double kx = 0.0;
    double ky = 0.0;
    double kz = 0.0;

    Vec3 vec() const { return {kx, ky, kz}; }
    double norm() const { return std::sqrt(kx * kx + ky * ky + kz * kz); }
    bool finite() const { return std::isfinite(kx) && std::isfinite(ky) && std::isfinite(kz); }
    static KVector from(const Vec3& v) { return {v.x(), v.y(), v.z()}; }
};

struct BVector {
    double bx = 0.0;
    double by = 0.0;
    double bz = 0.0;

    Vec3 vec() const { return {bx, by, bz}; }
    double magnitude() const { return std::sqrt(bx * bx + by * by + bz * bz); }
    bool finite() const { return std::isfinite(bx) && std::isfinite(by) && std::isfinite(bz); }
    static BVector from(const Vec3& v) { return {v.x(), v.y(), v.z()}; }
};

}  // namespace berrytop
