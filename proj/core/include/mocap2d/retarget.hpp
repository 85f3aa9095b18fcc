#pragma once

#include <map>
#include <string>
#include <vector>

#include "mocap2d/bvh.hpp"
#include "mocap2d/common.hpp"
#include "mocap2d/plane_select.hpp"
#include "mocap2d/rig.hpp"

namespace mocap2d::retarget {

struct JointMap {
    // Entry order matters: when several descendants of a joint are mapped,
    // the one listed first provides the bone direction.
    std::vector<std::pair<std::string, std::string>> entries;  // bvh joint -> rig bone
    double scale = 1.0;   // pixels per BVH unit
    bool flip_y = false;  // BVH Y-up vs. screen Y-down

    const std::string* bone_for(const std::string& joint) const;
};

// Plain text: "bvh_joint = rig_bone" lines plus "scale =" / "flip_y =" directives.
JointMap parse_joint_map(const std::string& text);

enum class Property { Rotation, TranslateX, TranslateY };
enum class Interpolation { Linear, Stepped };

const char* property_name(Property p);

struct Key {
    double time = 0.0;  // seconds
    double value = 0.0;
};

struct Timeline {
    std::string bone;
    Property property = Property::Rotation;
    Interpolation interpolation = Interpolation::Linear;
    std::vector<Key> keys;  // strictly ascending times

    double sample(double time) const;
};

struct AnimationClip {
    std::string name;
    std::string skeleton_id;
    double duration = 0.0;  // seconds
    double fps = 30.0;      // extraction rate
    std::vector<Timeline> timelines;
};

Vec2 project_joint(const Vec3& position, plane::ProjectionPlane plane, bool flip_y);

// Angle of (child - parent) counterclockwise from +X, in (-180, 180].
double bone_angle_2d(Vec2 parent_pt, Vec2 child_pt);

// Shift each value by a multiple of 360 so consecutive steps stay within 180.
std::vector<double> unwrap_angles(const std::vector<double>& series);

AnimationClip extract_clip(const bvh::Document& doc,
                           const std::vector<plane::PlaneAssignment>& assignments,
                           const JointMap& jmap, const rig::Rig& target,
                           const std::string& name);

Timeline decimate_keyframes(const Timeline& timeline, double tolerance);

// Decimates rotation timelines with tolerance_degrees and TranslateX/Y pairs
// jointly with tolerance_pixels, so paired translations keep matching times.
AnimationClip decimate_clip(const AnimationClip& clip, double tolerance_degrees,
                            double tolerance_pixels);

enum class SampleMode { Clamp, Loop };

rig::PoseValues sample_clip(const AnimationClip& clip, double time,
                            SampleMode mode = SampleMode::Clamp);

}  // namespace mocap2d::retarget
