#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include "mocap2d/image.hpp"
#include "mocap2d/retarget.hpp"
#include "mocap2d/rig.hpp"

namespace mocap2d::render {

enum class RenderMode { SkeletonLines, MeshWireframe, Textured };

struct Camera {
    Vec2 translate;     // pixels
    double scale = 1.0; // uniform, rig units to pixels

    Vec2 to_pixels(Vec2 p) const { return {p.x * scale + translate.x,
                                           p.y * scale + translate.y}; }
};

struct RenderOptions {
    int width = 256;
    int height = 256;
    Rgba background{255, 255, 255, 255};
    RenderMode mode = RenderMode::SkeletonLines;
    Camera camera;
};

// Textures resolved from rig.textures (texture_ref -> PNG path); only needed
// for Textured mode.
using TextureSet = std::map<std::string, FrameImage>;

TextureSet load_textures(const rig::Rig& r, const std::string& base_dir);

FrameImage render_frame(const rig::Rig& r, const rig::PoseValues& pose,
                        const RenderOptions& opts,
                        const TextureSet* textures = nullptr);

// ceil(duration * fps) + 1 frames sampled uniformly from t = 0;
// per-frame delay is round(100 / fps) centiseconds.
std::vector<std::uint8_t> render_clip_gif(const rig::Rig& r,
                                          const retarget::AnimationClip& clip,
                                          const RenderOptions& opts, double fps,
                                          const TextureSet* textures = nullptr);

}  // namespace mocap2d::render
