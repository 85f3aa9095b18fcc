// Independent reference implementations used only to check the library:
// explicit 4x4 matrix-stack forward kinematics, textbook two-pass covariance,
// and direct projection variance. Deliberately shares no code with core.
#pragma once

#include <array>
#include <cmath>
#include <string>
#include <vector>

#include "mocap2d/bvh.hpp"

namespace oracles {

using Mat4 = std::array<std::array<double, 4>, 4>;

inline Mat4 mat4_identity() {
    Mat4 m{};
    for (int i = 0; i < 4; ++i) m[i][i] = 1.0;
    return m;
}

inline Mat4 mat4_mul(const Mat4& a, const Mat4& b) {
    Mat4 r{};
    for (int i = 0; i < 4; ++i)
        for (int j = 0; j < 4; ++j)
            for (int k = 0; k < 4; ++k) r[i][j] += a[i][k] * b[k][j];
    return r;
}

inline Mat4 mat4_translate(double x, double y, double z) {
    Mat4 m = mat4_identity();
    m[0][3] = x;
    m[1][3] = y;
    m[2][3] = z;
    return m;
}

inline Mat4 mat4_rot(char axis, double degrees) {
    double a = degrees * M_PI / 180.0;
    double c = std::cos(a), s = std::sin(a);
    Mat4 m = mat4_identity();
    switch (axis) {
        case 'X': m[1][1] = c; m[1][2] = -s; m[2][1] = s; m[2][2] = c; break;
        case 'Y': m[0][0] = c; m[0][2] = s; m[2][0] = -s; m[2][2] = c; break;
        case 'Z': m[0][0] = c; m[0][1] = -s; m[1][0] = s; m[1][1] = c; break;
    }
    return m;
}

struct OraclePose {
    std::string name;
    double x, y, z;
};

inline void fk_walk(const mocap2d::bvh::Joint& joint, Mat4 stack,
                    const std::vector<double>& frame, std::size_t& cursor,
                    std::vector<OraclePose>& out) {
    stack = mat4_mul(stack, mat4_translate(joint.offset.x, joint.offset.y, joint.offset.z));
    for (auto c : joint.channels) {
        double v = frame[cursor++];
        switch (c) {
            case mocap2d::bvh::Channel::Xposition:
                stack = mat4_mul(stack, mat4_translate(v, 0, 0)); break;
            case mocap2d::bvh::Channel::Yposition:
                stack = mat4_mul(stack, mat4_translate(0, v, 0)); break;
            case mocap2d::bvh::Channel::Zposition:
                stack = mat4_mul(stack, mat4_translate(0, 0, v)); break;
            case mocap2d::bvh::Channel::Xrotation:
                stack = mat4_mul(stack, mat4_rot('X', v)); break;
            case mocap2d::bvh::Channel::Yrotation:
                stack = mat4_mul(stack, mat4_rot('Y', v)); break;
            case mocap2d::bvh::Channel::Zrotation:
                stack = mat4_mul(stack, mat4_rot('Z', v)); break;
        }
    }
    out.push_back({joint.name, stack[0][3], stack[1][3], stack[2][3]});
    for (const auto& child : joint.children) fk_walk(child, stack, frame, cursor, out);
    if (joint.end_site_offset) {
        Mat4 end = mat4_mul(stack, mat4_translate(joint.end_site_offset->x,
                                                  joint.end_site_offset->y,
                                                  joint.end_site_offset->z));
        out.push_back({joint.name + "_End", end[0][3], end[1][3], end[2][3]});
    }
}

inline std::vector<OraclePose> forward_kinematics(const mocap2d::bvh::Document& doc,
                                                  std::size_t frame_index) {
    std::vector<OraclePose> out;
    std::size_t cursor = 0;
    fk_walk(doc.root, mat4_identity(), doc.motion.frames[frame_index], cursor, out);
    return out;
}

// Textbook two-pass covariance: mean first, then cross products.
inline std::array<std::array<double, 3>, 3> covariance_two_pass(
    const std::vector<mocap2d::Vec3>& points) {
    double mean[3] = {0, 0, 0};
    for (const auto& p : points) {
        mean[0] += p.x;
        mean[1] += p.y;
        mean[2] += p.z;
    }
    for (double& m : mean) m /= static_cast<double>(points.size());

    std::array<std::array<double, 3>, 3> cov{};
    for (const auto& p : points) {
        double d[3] = {p.x - mean[0], p.y - mean[1], p.z - mean[2]};
        for (int i = 0; i < 3; ++i)
            for (int j = 0; j < 3; ++j) cov[i][j] += d[i] * d[j];
    }
    for (int i = 0; i < 3; ++i)
        for (int j = 0; j < 3; ++j) cov[i][j] /= static_cast<double>(points.size());
    return cov;
}

// Total variance of the points after dropping one coordinate: 'F' keeps (x,y),
// 'S' keeps (z,y).
inline double projected_variance(const std::vector<mocap2d::Vec3>& points, char plane) {
    std::vector<std::pair<double, double>> projected;
    for (const auto& p : points)
        projected.emplace_back(plane == 'F' ? p.x : p.z, p.y);
    double mu = 0, mv = 0;
    for (auto [u, v] : projected) {
        mu += u;
        mv += v;
    }
    mu /= static_cast<double>(projected.size());
    mv /= static_cast<double>(projected.size());
    double var = 0;
    for (auto [u, v] : projected)
        var += (u - mu) * (u - mu) + (v - mv) * (v - mv);
    return var / static_cast<double>(projected.size());
}

}  // namespace oracles
