#pragma once

#include <string>
#include <vector>

#include "mocap2d/retarget.hpp"
#include "mocap2d/rig.hpp"

namespace mocap2d::interchange {

// Native rig schema (see docs/formats.md). Weights whose sums land in
// [0.9, 1.1] are renormalized on load; anything worse is rejected.
rig::Rig load_rig(const std::string& text);
std::string save_rig(const rig::Rig& r);

retarget::AnimationClip load_clip(const std::string& text);
std::string save_clip(const retarget::AnimationClip& clip);

// Spine-3.8-compatible JSON subset: skeleton header, bones, slots, skins with
// weighted mesh attachments, and bone rotate/translate animations. Export is
// byte-deterministic; import is its inverse on the subset.
std::string export_spine_json(const rig::Rig& r,
                              const std::vector<retarget::AnimationClip>& clips);

std::pair<rig::Rig, std::vector<retarget::AnimationClip>> import_spine_json(
    const std::string& text);

struct SegmentationRegion {
    std::string label;   // head, torso, left_arm, ..., clothing, accessory:<name>
    std::string image;   // path, relative to the manifest
    Vec2 anchor;         // pixels
    int z_order = 0;
};

struct SegmentationManifest {
    std::vector<SegmentationRegion> regions;
};

// base_dir resolves relative image paths for the existence check.
SegmentationManifest load_segmentation_manifest(const std::string& text,
                                                const std::string& base_dir);

// One bone + slot + unit quad per region, draw order by z_order; seeds a rig
// for manual weight authoring.
rig::Rig scaffold_rig(const SegmentationManifest& manifest,
                      const std::string& skeleton_id);

}  // namespace mocap2d::interchange
