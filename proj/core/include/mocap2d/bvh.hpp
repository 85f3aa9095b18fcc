#pragma once

#include <optional>
#include <string>
#include <vector>

#include "mocap2d/common.hpp"

namespace mocap2d::bvh {

enum class Channel {
    Xposition,
    Yposition,
    Zposition,
    Xrotation,
    Yrotation,
    Zrotation,
};

bool is_rotation(Channel c);
const char* channel_name(Channel c);

struct Joint {
    std::string name;
    Vec3 offset;
    std::vector<Channel> channels;
    std::vector<Joint> children;
    std::optional<Vec3> end_site_offset;
};

struct Motion {
    double frame_time = 1.0 / 30.0;  // seconds per frame, > 0
    std::vector<std::vector<double>> frames;

    std::size_t frame_count() const { return frames.size(); }
};

struct Document {
    Joint root;
    Motion motion;

    std::size_t channel_count() const;
};

struct JointPose {
    std::string joint_name;
    Vec3 world_position;
    Mat3 world_rotation;
};

// Internal naming for end sites, so they can be projected like joints.
std::string end_site_name(const std::string& parent_joint);

Document parse(const std::string& text);
std::string serialize(const Document& doc);

// World-space poses for every joint plus end sites, depth-first order.
// Rotation channels are intrinsic, applied in declared channel order, degrees.
std::vector<JointPose> forward_kinematics(const Document& doc, std::size_t frame_index);

// Resample to 1/target_fps seconds per frame. Position channels interpolate
// linearly; rotation channels along the shortest angular path per channel.
Document resample(const Document& doc, double target_fps);

}  // namespace mocap2d::bvh
