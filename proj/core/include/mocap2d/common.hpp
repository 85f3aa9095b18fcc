#pragma once

#include <cmath>
#include <stdexcept>
#include <string>

namespace mocap2d {

// Domain error carrying a stable machine-readable name (used for CLI exit
// diagnostics and test assertions).
class Error : public std::runtime_error {
public:
    Error(std::string name, const std::string& message)
        : std::runtime_error(message), name_(std::move(name)) {}

    const std::string& name() const { return name_; }

private:
    std::string name_;
};

constexpr double kPi = 3.14159265358979323846;

inline double deg_to_rad(double d) { return d * kPi / 180.0; }
inline double rad_to_deg(double r) { return r * 180.0 / kPi; }

// Wrap an angle in degrees into (-180, 180].
inline double wrap_degrees(double d) {
    d = std::fmod(d, 360.0);
    if (d <= -180.0) d += 360.0;
    if (d > 180.0) d -= 360.0;
    return d;
}

struct Vec2 {
    double x = 0.0;
    double y = 0.0;

    Vec2 operator+(const Vec2& o) const { return {x + o.x, y + o.y}; }
    Vec2 operator-(const Vec2& o) const { return {x - o.x, y - o.y}; }
    Vec2 operator*(double s) const { return {x * s, y * s}; }
    double length() const { return std::hypot(x, y); }
    bool operator==(const Vec2&) const = default;
};

struct Vec3 {
    double x = 0.0;
    double y = 0.0;
    double z = 0.0;

    Vec3 operator+(const Vec3& o) const { return {x + o.x, y + o.y, z + o.z}; }
    Vec3 operator-(const Vec3& o) const { return {x - o.x, y - o.y, z - o.z}; }
    Vec3 operator*(double s) const { return {x * s, y * s, z * s}; }
    double dot(const Vec3& o) const { return x * o.x + y * o.y + z * o.z; }
    double length() const { return std::sqrt(dot(*this)); }
    double operator[](int i) const { return i == 0 ? x : (i == 1 ? y : z); }
};

// Row-major 3x3 matrix.
struct Mat3 {
    double m[3][3] = {{1, 0, 0}, {0, 1, 0}, {0, 0, 1}};

    static Mat3 identity() { return Mat3{}; }

    static Mat3 rotation_x(double degrees) {
        double c = std::cos(deg_to_rad(degrees)), s = std::sin(deg_to_rad(degrees));
        Mat3 r;
        r.m[1][1] = c; r.m[1][2] = -s;
        r.m[2][1] = s; r.m[2][2] = c;
        return r;
    }

    static Mat3 rotation_y(double degrees) {
        double c = std::cos(deg_to_rad(degrees)), s = std::sin(deg_to_rad(degrees));
        Mat3 r;
        r.m[0][0] = c; r.m[0][2] = s;
        r.m[2][0] = -s; r.m[2][2] = c;
        return r;
    }

    static Mat3 rotation_z(double degrees) {
        double c = std::cos(deg_to_rad(degrees)), s = std::sin(deg_to_rad(degrees));
        Mat3 r;
        r.m[0][0] = c; r.m[0][1] = -s;
        r.m[1][0] = s; r.m[1][1] = c;
        return r;
    }

    Mat3 operator*(const Mat3& o) const {
        Mat3 r;
        for (int i = 0; i < 3; ++i)
            for (int j = 0; j < 3; ++j) {
                double v = 0.0;
                for (int k = 0; k < 3; ++k) v += m[i][k] * o.m[k][j];
                r.m[i][j] = v;
            }
        return r;
    }

    Vec3 operator*(const Vec3& v) const {
        return {m[0][0] * v.x + m[0][1] * v.y + m[0][2] * v.z,
                m[1][0] * v.x + m[1][1] * v.y + m[1][2] * v.z,
                m[2][0] * v.x + m[2][1] * v.y + m[2][2] * v.z};
    }

    Mat3 transposed() const {
        Mat3 r;
        for (int i = 0; i < 3; ++i)
            for (int j = 0; j < 3; ++j) r.m[i][j] = m[j][i];
        return r;
    }
};

// 2D affine transform: p' = (m00*x + m01*y + tx, m10*x + m11*y + ty).
struct Affine2 {
    double m00 = 1.0, m01 = 0.0, tx = 0.0;
    double m10 = 0.0, m11 = 1.0, ty = 0.0;

    static Affine2 identity() { return Affine2{}; }

    static Affine2 translation(Vec2 t) {
        Affine2 a;
        a.tx = t.x; a.ty = t.y;
        return a;
    }

    static Affine2 rotation(double degrees) {
        double c = std::cos(deg_to_rad(degrees)), s = std::sin(deg_to_rad(degrees));
        Affine2 a;
        a.m00 = c; a.m01 = -s;
        a.m10 = s; a.m11 = c;
        return a;
    }

    static Affine2 scale(Vec2 s) {
        Affine2 a;
        a.m00 = s.x; a.m11 = s.y;
        return a;
    }

    Affine2 operator*(const Affine2& o) const {
        Affine2 r;
        r.m00 = m00 * o.m00 + m01 * o.m10;
        r.m01 = m00 * o.m01 + m01 * o.m11;
        r.m10 = m10 * o.m00 + m11 * o.m10;
        r.m11 = m10 * o.m01 + m11 * o.m11;
        r.tx = m00 * o.tx + m01 * o.ty + tx;
        r.ty = m10 * o.tx + m11 * o.ty + ty;
        return r;
    }

    Vec2 apply(Vec2 p) const {
        return {m00 * p.x + m01 * p.y + tx, m10 * p.x + m11 * p.y + ty};
    }

    bool operator==(const Affine2& o) const {
        return m00 == o.m00 && m01 == o.m01 && m10 == o.m10 && m11 == o.m11 &&
               tx == o.tx && ty == o.ty;
    }
};

}  // namespace mocap2d
