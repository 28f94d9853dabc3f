#pragma once

#include <cmath>

namespace lyphc {

struct Vec3 {
    double x = 0, y = 0, z = 0;

    Vec3 operator+(const Vec3& o) const { return {x + o.x, y + o.y, z + o.z}; }
    Vec3 operator-(const Vec3& o) const { return {x - o.x, y - o.y, z - o.z}; }
    Vec3 operator*(double s) const { return {x * s, y * s, z * s}; }
    Vec3 operator/(double s) const { return {x / s, y / s, z / s}; }
    Vec3& operator+=(const Vec3& o) {
        x += o.x;
        y += o.y;
        z += o.z;
        return *this;
    }
    friend bool operator==(const Vec3&, const Vec3&) = default;
};

inline double dot(const Vec3& a, const Vec3& b) { return a.x * b.x + a.y * b.y + a.z * b.z; }
inline Vec3 cross(const Vec3& a, const Vec3& b) {
    return {a.y * b.z - a.z * b.y, a.z * b.x - a.x * b.z, a.x * b.y - a.y * b.x};
}
inline double norm(const Vec3& a) { return std::sqrt(dot(a, a)); }
inline Vec3 normalized(const Vec3& a, const Vec3& fallback = {1, 0, 0}) {
    double n = norm(a);
    return n > 1e-300 ? a / n : fallback;
}
inline Vec3 lerp(const Vec3& a, const Vec3& b, double t) { return a + (b - a) * t; }

/// A link or wire trajectory: straight segment, quadratic Bezier, or a planar
/// arc (z of the start point) around a center with radius interpolated
/// linearly in angle between the two ends.
class Curve {
public:
    enum class Kind { Line, Bezier, Arc };

    static Curve line(Vec3 a, Vec3 b);
    static Curve bezier(Vec3 a, Vec3 control, Vec3 b);
    /// Bezier whose control point is the chord midpoint moved sideways by a
    /// quarter of the chord length (in the xy plane).
    static Curve default_spline(Vec3 a, Vec3 b);
    /// Counter-clockwise arc from a to b around `center`.
    static Curve arc(Vec3 a, Vec3 b, Vec3 center);
    /// Counter-clockwise half circle over the chord.
    static Curve default_arc(Vec3 a, Vec3 b);

    Kind kind() const noexcept { return kind_; }
    Vec3 start() const { return at(0); }
    Vec3 end() const { return at(1); }

    /// Point at curve parameter t in [0, 1].
    Vec3 at(double t) const;
    Vec3 derivative(double t) const;

    double length() const;
    /// Arc length from the start to parameter t.
    double length_to(double t) const;
    /// Parameter whose arc length from the start is `fraction` of the total.
    double param_at_fraction(double fraction) const;
    Vec3 at_fraction(double fraction) const { return at(param_at_fraction(fraction)); }

private:
    Kind kind_ = Kind::Line;
    Vec3 a_, b_, c_;  // ends and control point / center
    double theta0_ = 0, sweep_ = 0, r0_ = 0, r1_ = 0;
};

}  // namespace lyphc
