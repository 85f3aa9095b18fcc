#pragma once

#include <array>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "mocap2d/common.hpp"

namespace mocap2d::rig {

struct Bone {
    std::string name;
    std::optional<std::string> parent;
    double length = 0.0;             // pixels
    double rest_rotation = 0.0;      // degrees
    Vec2 rest_translation;           // pixels
    Vec2 rest_scale{1.0, 1.0};

    bool operator==(const Bone&) const = default;
};

struct Slot {
    std::string name;
    std::string bone;
    int draw_order_index = 0;
    std::optional<std::string> active_attachment;
};

struct VertexWeight {
    std::string bone;
    double weight = 0.0;
};

struct MeshAttachment {
    std::string name;
    std::vector<Vec2> vertices;                         // rest pose, pixels
    std::vector<std::array<int, 3>> triangles;
    std::vector<Vec2> uvs;                              // per vertex, [0,1]
    std::vector<std::vector<VertexWeight>> weights;     // per vertex
    std::string texture_ref;
};

struct Skin {
    std::string name;
    std::map<std::string, std::string> entries;  // slot -> attachment
};

struct Rig {
    std::string skeleton_id;
    std::vector<Bone> bones;
    std::vector<Slot> slots;
    std::vector<MeshAttachment> attachments;
    std::vector<Skin> skins;  // must include "default"
    std::map<std::string, std::string> textures;  // texture_ref -> image path

    const Bone* find_bone(const std::string& name) const;
    const Slot* find_slot(const std::string& name) const;
    const MeshAttachment* find_attachment(const std::string& name) const;
    const Skin* find_skin(const std::string& name) const;
};

// Per-bone offsets from rest; absent bones are at rest.
struct PoseValues {
    std::map<std::string, double> rotation;      // degrees
    std::map<std::string, Vec2> translation;     // pixels
};

struct Violation {
    std::string code;
    std::string path;
    std::string message;
};

using ValidationReport = std::vector<Violation>;

// Empty report iff the rig satisfies every structural invariant.
ValidationReport validate(const Rig& rig);

// Renormalizes vertex weights whose sums fall in [0.9, 1.1]; returns the
// validation report for anything it could not fix.
ValidationReport normalize_weights(Rig& rig);

// child world = parent world * T(rest_translation + offset)
//             * R(rest_rotation + offset) * S(rest_scale)
std::map<std::string, Affine2> world_transforms(const Rig& rig, const PoseValues& pose);

// Linear blend skinning of one attachment under the given pose.
std::vector<Vec2> skin_vertices(const Rig& rig, const PoseValues& pose,
                                const std::string& attachment);

// Copy of the rig with each slot's active attachment resolved through the
// named skin, falling back to "default" for slots the skin omits.
Rig attach_skin(const Rig& rig, const std::string& skin_name);

}  // namespace mocap2d::rig
