// Shared test fixtures: programmatically built BVH documents, rigs, and clips.
#pragma once

#include <algorithm>
#include <cmath>
#include <random>
#include <string>
#include <vector>

#include "mocap2d/bvh.hpp"
#include "mocap2d/retarget.hpp"
#include "mocap2d/rig.hpp"

namespace fixtures {

using mocap2d::Vec2;
using mocap2d::Vec3;

inline std::string minimal_bvh_text() {
    return "HIERARCHY\n"
           "ROOT Hips\n"
           "{\n"
           "  OFFSET 0 0 0\n"
           "  CHANNELS 3 Zrotation Xrotation Yrotation\n"
           "  End Site\n"
           "  {\n"
           "    OFFSET 0 10 0\n"
           "  }\n"
           "}\n"
           "MOTION\n"
           "Frames: 1\n"
           "Frame Time: 0.033333\n"
           "0 0 0\n";
}

// ----- 31-joint CMU-style humanoid ------------------------------------------

namespace detail {

inline mocap2d::bvh::Joint joint(const std::string& name, Vec3 offset, bool rotating = true) {
    mocap2d::bvh::Joint j;
    j.name = name;
    j.offset = offset;
    if (rotating)
        j.channels = {mocap2d::bvh::Channel::Zrotation, mocap2d::bvh::Channel::Xrotation,
                      mocap2d::bvh::Channel::Yrotation};
    return j;
}

inline mocap2d::bvh::Joint leaf(const std::string& name, Vec3 offset, Vec3 end) {
    auto j = joint(name, offset);
    j.end_site_offset = end;
    return j;
}

}  // namespace detail

// CMU-style layout: 6 root channels plus 3 rotation channels on each of the
// other 30 joints (96 channels total).
inline mocap2d::bvh::Document humanoid31() {
    using detail::joint;
    using detail::leaf;
    namespace b = mocap2d::bvh;

    b::Joint hips = joint("Hips", {0, 0, 0});
    hips.channels = {b::Channel::Xposition, b::Channel::Yposition, b::Channel::Zposition,
                     b::Channel::Zrotation, b::Channel::Xrotation, b::Channel::Yrotation};

    auto leg = [&](const std::string& side, double sx) {
        b::Joint hip_joint = joint(side + "HipJoint", {sx * 1.5, -1.0, 0});
        b::Joint up_leg = joint(side + "UpLeg", {sx * 0.5, -1.5, 0});
        b::Joint lower = joint(side + "Leg", {0, -7.0, 0});
        b::Joint foot = joint(side + "Foot", {0, -7.0, 0});
        b::Joint toe = leaf(side + "ToeBase", {0, -1.0, 2.0}, {0, 0, 1.0});
        foot.children.push_back(toe);
        lower.children.push_back(foot);
        up_leg.children.push_back(lower);
        hip_joint.children.push_back(up_leg);
        return hip_joint;
    };
    auto arm = [&](const std::string& side, const std::string& thumb, double sx) {
        b::Joint shoulder = joint(side + "Shoulder", {sx * 1.5, 1.0, 0});
        b::Joint upper = joint(side + "Arm", {sx * 3.0, 0, 0});
        b::Joint fore = joint(side + "ForeArm", {sx * 5.0, 0, 0});
        b::Joint hand = joint(side + "Hand", {sx * 4.0, 0, 0});
        b::Joint finger_base = joint(side + "FingerBase", {sx * 1.0, 0, 0});
        b::Joint index1 = leaf(side + "HandIndex1", {sx * 0.7, 0, 0}, {sx * 0.5, 0, 0});
        b::Joint thumb_j = leaf(thumb, {sx * 0.5, -0.5, 0.5}, {sx * 0.4, 0, 0.3});
        finger_base.children.push_back(index1);
        hand.children.push_back(finger_base);
        hand.children.push_back(thumb_j);
        fore.children.push_back(hand);
        upper.children.push_back(fore);
        shoulder.children.push_back(upper);
        return shoulder;
    };

    b::Joint lower_back = joint("LowerBack", {0, 1.5, 0});
    b::Joint spine = joint("Spine", {0, 2.0, 0});
    b::Joint spine1 = joint("Spine1", {0, 2.0, 0});
    b::Joint neck = joint("Neck", {0, 1.5, 0});
    b::Joint neck1 = joint("Neck1", {0, 1.0, 0});
    b::Joint head = leaf("Head", {0, 1.5, 0}, {0, 1.8, 0});
    neck1.children.push_back(head);
    neck.children.push_back(neck1);
    spine1.children.push_back(neck);
    spine1.children.push_back(arm("Left", "LThumb", 1.0));
    spine1.children.push_back(arm("Right", "RThumb", -1.0));
    spine.children.push_back(spine1);
    lower_back.children.push_back(spine);

    hips.children.push_back(leg("Left", 1.0));
    hips.children.push_back(leg("Right", -1.0));
    hips.children.push_back(lower_back);

    b::Document doc;
    doc.root = hips;
    doc.motion.frame_time = 1.0 / 120.0;
    std::mt19937 rng(7);
    std::uniform_real_distribution<double> angle(-40.0, 40.0);
    for (int f = 0; f < 4; ++f) {
        std::vector<double> row(96);
        row[0] = f * 0.1;
        row[1] = 17.0;
        row[2] = f * 0.05;
        for (std::size_t c = 3; c < row.size(); ++c) row[c] = angle(rng);
        doc.motion.frames.push_back(row);
    }
    return doc;
}

// ----- walk fixture: simpler humanoid with sinusoidal gait -------------------

inline mocap2d::bvh::Document walk_bvh(int frames = 80) {
    using detail::joint;
    using detail::leaf;
    namespace b = mocap2d::bvh;

    b::Joint hips = joint("Hips", {0, 0, 0});
    hips.channels = {b::Channel::Xposition, b::Channel::Yposition, b::Channel::Zposition,
                     b::Channel::Zrotation, b::Channel::Xrotation, b::Channel::Yrotation};

    auto leg = [&](const std::string& side, double sx) {
        b::Joint up = joint(side + "UpLeg", {sx * 1.2, -0.5, 0});
        b::Joint lower = joint(side + "Leg", {0, -6.0, 0});
        b::Joint foot = leaf(side + "Foot", {0, -6.0, 0}, {0, -1.0, 2.0});
        lower.children.push_back(foot);
        up.children.push_back(lower);
        return up;
    };
    auto arm = [&](const std::string& side, double sx) {
        b::Joint upper = joint(side + "Arm", {sx * 2.0, 0, 0});
        b::Joint fore = leaf(side + "ForeArm", {sx * 4.5, 0, 0}, {sx * 4.0, 0, 0});
        upper.children.push_back(fore);
        return upper;
    };

    b::Joint head = leaf("Head", {0, 1.5, 0}, {0, 2.0, 0});
    b::Joint neck = joint("Neck", {0, 1.0, 0});
    neck.children.push_back(head);
    b::Joint spine = joint("Spine", {0, 4.0, 0});
    spine.children.push_back(neck);
    spine.children.push_back(arm("Left", 1.0));
    spine.children.push_back(arm("Right", -1.0));

    hips.children.push_back(spine);
    hips.children.push_back(leg("Left", 1.0));
    hips.children.push_back(leg("Right", -1.0));

    b::Document doc;
    doc.root = hips;
    doc.motion.frame_time = 1.0 / 30.0;

    // Channel layout (depth-first): Hips(6), Spine, Neck, Head, LeftArm,
    // LeftForeArm, RightArm, RightForeArm, LeftUpLeg, LeftLeg, LeftFoot,
    // RightUpLeg, RightLeg, RightFoot — each 3 channels Z X Y.
    for (int f = 0; f < frames; ++f) {
        double phase = 2.0 * mocap2d::kPi * f / 40.0;
        std::vector<double> row(6 + 13 * 3, 0.0);
        row[1] = 14.0 + 0.3 * std::sin(2 * phase);  // hip bob
        row[3] = 2.0 * std::sin(phase);             // hips Z sway
        auto set = [&](int joint_index, double z, double x, double y) {
            row[static_cast<std::size_t>(6 + joint_index * 3)] = z;
            row[static_cast<std::size_t>(6 + joint_index * 3 + 1)] = x;
            row[static_cast<std::size_t>(6 + joint_index * 3 + 2)] = y;
        };
        set(0, 1.0 * std::sin(phase), 0, 0);                       // Spine
        set(1, 0.5 * std::sin(phase + 0.4), 0, 0);                 // Neck
        set(2, 0.5 * std::sin(phase + 0.8), 0, 0);                 // Head
        set(3, 0, 30.0 * std::sin(phase), 0);                      // LeftArm (X swing)
        set(4, 0, 15.0 * std::sin(phase) - 10.0, 0);               // LeftForeArm
        set(5, 0, -30.0 * std::sin(phase), 0);                     // RightArm
        set(6, 0, -15.0 * std::sin(phase) - 10.0, 0);              // RightForeArm
        set(7, 0, 35.0 * std::sin(phase), 0);                      // LeftUpLeg (X swing)
        set(8, 0, std::max(0.0, 25.0 * std::sin(phase + 1.2)), 0); // LeftLeg
        set(9, 0, 10.0 * std::sin(phase + 2.0), 0);                // LeftFoot
        set(10, 0, -35.0 * std::sin(phase), 0);                    // RightUpLeg
        set(11, 0, std::max(0.0, -25.0 * std::sin(phase + 1.2)), 0);
        set(12, 0, -10.0 * std::sin(phase + 2.0), 0);
        doc.motion.frames.push_back(row);
    }
    return doc;
}

// Joint map covering the walk fixture.
inline mocap2d::retarget::JointMap walk_joint_map() {
    mocap2d::retarget::JointMap map;
    map.scale = 10.0;
    map.flip_y = true;
    map.entries = {
        {"Hips", "hips"},           {"Spine", "spine"},       {"Neck", "neck"},
        {"Head", "head"},           {"LeftArm", "arm_l"},     {"LeftForeArm", "forearm_l"},
        {"RightArm", "arm_r"},      {"RightForeArm", "forearm_r"},
        {"LeftUpLeg", "upleg_l"},   {"LeftLeg", "leg_l"},     {"LeftFoot", "foot_l"},
        {"RightUpLeg", "upleg_r"},  {"RightLeg", "leg_r"},    {"RightFoot", "foot_r"},
    };
    return map;
}

// Rig matching walk_joint_map topology; bone rest rotations chosen so the
// rest pose roughly matches the character's silhouette.
inline mocap2d::rig::Rig walk_rig(const std::string& skeleton_id = "walker-v1") {
    using mocap2d::rig::Bone;
    mocap2d::rig::Rig r;
    r.skeleton_id = skeleton_id;
    auto bone = [&](const std::string& name, const char* parent, double rot,
                    Vec2 pos, double length) {
        Bone b;
        b.name = name;
        if (parent) b.parent = parent;
        b.rest_rotation = rot;
        b.rest_translation = pos;
        b.length = length;
        r.bones.push_back(b);
    };
    bone("hips", nullptr, 0, {0, 0}, 10);
    bone("spine", "hips", 90, {0, 0}, 40);
    bone("neck", "spine", 0, {40, 0}, 10);
    bone("head", "neck", 0, {10, 0}, 20);
    bone("arm_l", "spine", -90, {40, 20}, 45);
    bone("forearm_l", "arm_l", 0, {45, 0}, 40);
    bone("arm_r", "spine", -90, {40, -20}, 45);
    bone("forearm_r", "arm_r", 0, {45, 0}, 40);
    bone("upleg_l", "hips", -90, {12, -5}, 60);
    bone("leg_l", "upleg_l", 0, {60, 0}, 60);
    bone("foot_l", "leg_l", 45, {60, 0}, 20);
    bone("upleg_r", "hips", -90, {-12, -5}, 60);
    bone("leg_r", "upleg_r", 0, {60, 0}, 60);
    bone("foot_r", "leg_r", 45, {60, 0}, 20);
    r.skins.push_back({"default", {}});
    return r;
}

// ----- 30-bone fixture rig with meshes, 2 skins, 2 clips ---------------------

inline mocap2d::rig::Rig fixture_rig30(const std::string& skeleton_id = "fixture-30") {
    using namespace mocap2d::rig;
    Rig r;
    r.skeleton_id = skeleton_id;

    Bone root;
    root.name = "b0";
    root.length = 10;
    r.bones.push_back(root);
    // Three chains of bones off the root, 29 child bones total.
    int made = 1;
    for (int chain = 0; chain < 3; ++chain) {
        std::string parent = "b0";
        for (int i = 0; i < (chain == 2 ? 9 : 10); ++i) {
            Bone b;
            b.name = "b" + std::to_string(made++);
            b.parent = parent;
            b.length = 8;
            b.rest_rotation = 10.0 * chain - 5.0 * i;
            b.rest_translation = {8.0, chain - 1.0};
            b.rest_scale = {1.0, 1.0};
            parent = b.name;
            r.bones.push_back(b);
        }
    }

    auto quad = [&](const std::string& name, const std::string& bone_a,
                    const std::string& bone_b, const std::string& texture) {
        MeshAttachment m;
        m.name = name;
        m.texture_ref = texture;
        m.vertices = {{0, 0}, {20, 0}, {20, 20}, {0, 20}, {10, 10}};
        m.uvs = {{0, 0}, {1, 0}, {1, 1}, {0, 1}, {0.5, 0.5}};
        m.triangles = {{0, 1, 4}, {1, 2, 4}, {2, 3, 4}, {3, 0, 4}};
        m.weights = {{{bone_a, 1.0}},
                     {{bone_a, 0.7}, {bone_b, 0.3}},
                     {{bone_b, 1.0}},
                     {{bone_a, 0.5}, {bone_b, 0.5}},
                     {{bone_a, 0.25}, {bone_b, 0.75}}};
        r.attachments.push_back(m);
    };
    quad("torso_mesh", "b1", "b2", "torso");
    quad("torso_armor", "b1", "b2", "armor");
    quad("limb_mesh", "b11", "b12", "limb");
    quad("tail_mesh", "b21", "b22", "tail");

    r.slots.push_back({"torso", "b1", 0, std::string("torso_mesh")});
    r.slots.push_back({"limb", "b11", 1, std::string("limb_mesh")});
    r.slots.push_back({"tail", "b21", 2, std::string("tail_mesh")});

    Skin def;
    def.name = "default";
    def.entries = {{"torso", "torso_mesh"}, {"limb", "limb_mesh"}, {"tail", "tail_mesh"}};
    Skin armor;
    armor.name = "armor";
    armor.entries = {{"torso", "torso_armor"}};
    r.skins = {def, armor};
    r.textures = {{"torso", "torso.png"}, {"armor", "armor.png"},
                  {"limb", "limb.png"}, {"tail", "tail.png"}};
    return r;
}

inline mocap2d::retarget::AnimationClip fixture_clip_walk(
    const std::string& skeleton_id = "fixture-30") {
    using namespace mocap2d::retarget;
    AnimationClip clip;
    clip.name = "walk";
    clip.skeleton_id = skeleton_id;
    clip.fps = 30.0;
    clip.duration = 1.0;

    for (const char* bone : {"b1", "b2", "b11", "b12", "b21"}) {
        Timeline tl;
        tl.bone = bone;
        tl.property = Property::Rotation;
        for (int k = 0; k <= 30; ++k) {
            double t = k / 30.0;
            tl.keys.push_back({t, 25.0 * std::sin(2.0 * mocap2d::kPi * t + bone[1])});
        }
        clip.timelines.push_back(tl);
    }
    Timeline tx, ty;
    tx.bone = ty.bone = "b0";
    tx.property = Property::TranslateX;
    ty.property = Property::TranslateY;
    for (int k = 0; k <= 30; ++k) {
        double t = k / 30.0;
        tx.keys.push_back({t, 5.0 * t});
        ty.keys.push_back({t, std::sin(2.0 * mocap2d::kPi * t)});
    }
    clip.timelines.push_back(tx);
    clip.timelines.push_back(ty);
    return clip;
}

inline mocap2d::retarget::AnimationClip fixture_clip_idle(
    const std::string& skeleton_id = "fixture-30") {
    using namespace mocap2d::retarget;
    AnimationClip clip;
    clip.name = "idle";
    clip.skeleton_id = skeleton_id;
    clip.fps = 30.0;
    clip.duration = 0.5;
    Timeline tl;
    tl.bone = "b1";
    tl.property = Property::Rotation;
    tl.interpolation = Interpolation::Stepped;
    tl.keys = {{0.0, 0.0}, {0.25, 6.0}, {0.5, 0.0}};
    clip.timelines.push_back(tl);
    return clip;
}

// 2-joint swing: child Zrotation ramps 0 -> 90 degrees over the frames.
inline mocap2d::bvh::Document two_joint_swing(int frames = 31) {
    namespace b = mocap2d::bvh;
    b::Joint child = detail::joint("Lower", {10, 0, 0});
    child.channels = {b::Channel::Zrotation};
    child.end_site_offset = Vec3{10, 0, 0};

    b::Joint root = detail::joint("Upper", {0, 0, 0});
    root.channels = {b::Channel::Zrotation};
    root.children.push_back(child);

    b::Document doc;
    doc.root = root;
    doc.motion.frame_time = 1.0 / 30.0;
    for (int f = 0; f < frames; ++f)
        doc.motion.frames.push_back({0.0, 90.0 * f / (frames - 1)});
    return doc;
}

inline mocap2d::rig::Rig two_bone_rig(const std::string& skeleton_id = "swing-v1") {
    mocap2d::rig::Rig r;
    r.skeleton_id = skeleton_id;
    mocap2d::rig::Bone a, b;
    a.name = "upper";
    a.length = 10;
    b.name = "lower";
    b.parent = "upper";
    b.rest_translation = {10, 0};
    b.length = 10;
    r.bones = {a, b};
    r.skins.push_back({"default", {}});
    return r;
}

inline mocap2d::retarget::JointMap two_joint_map() {
    mocap2d::retarget::JointMap map;
    map.entries = {{"Upper", "upper"}, {"Lower", "lower"}};
    return map;
}

// ----- randomized chains for FK oracle comparison ----------------------------

inline mocap2d::bvh::Joint random_joint(std::mt19937& rng, int depth, int& counter,
                                        bool rotations_only) {
    namespace b = mocap2d::bvh;
    std::uniform_real_distribution<double> offset(-5.0, 5.0);
    std::uniform_int_distribution<int> channel_count(1, rotations_only ? 3 : 6);
    std::uniform_int_distribution<int> branch(0, 2);

    b::Joint j;
    j.name = "j" + std::to_string(counter++);
    j.offset = {offset(rng), offset(rng), offset(rng)};

    std::vector<b::Channel> pool =
        rotations_only
            ? std::vector<b::Channel>{b::Channel::Xrotation, b::Channel::Yrotation,
                                      b::Channel::Zrotation}
            : std::vector<b::Channel>{b::Channel::Xposition, b::Channel::Yposition,
                                      b::Channel::Zposition, b::Channel::Xrotation,
                                      b::Channel::Yrotation, b::Channel::Zrotation};
    std::shuffle(pool.begin(), pool.end(), rng);
    pool.resize(static_cast<std::size_t>(channel_count(rng)));
    j.channels = pool;

    int children = depth >= 6 ? 0 : (depth == 0 ? 1 : branch(rng) % 2 + (depth < 3 ? 1 : 0));
    for (int c = 0; c < children; ++c)
        j.children.push_back(random_joint(rng, depth + 1, counter, rotations_only));
    if (j.children.empty()) j.end_site_offset = Vec3{offset(rng), offset(rng), offset(rng)};
    return j;
}

inline mocap2d::bvh::Document random_chain_doc(std::mt19937& rng, int frames = 3,
                                               bool rotations_only = false) {
    mocap2d::bvh::Document doc;
    int counter = 0;
    doc.root = random_joint(rng, 0, counter, rotations_only);
    doc.motion.frame_time = 1.0 / 60.0;
    std::uniform_real_distribution<double> value(-170.0, 170.0);
    std::size_t channels = doc.channel_count();
    for (int f = 0; f < frames; ++f) {
        std::vector<double> row(channels);
        for (auto& v : row) v = value(rng);
        doc.motion.frames.push_back(row);
    }
    return doc;
}

}  // namespace fixtures
