#include "mocap2d/render.hpp"

#include <algorithm>
#include <cmath>

namespace mocap2d::render {

namespace {

void draw_line(FrameImage& image, Vec2 a, Vec2 b, Rgba color) {
    int x0 = static_cast<int>(std::lround(a.x));
    int y0 = static_cast<int>(std::lround(a.y));
    int x1 = static_cast<int>(std::lround(b.x));
    int y1 = static_cast<int>(std::lround(b.y));
    int dx = std::abs(x1 - x0), sx = x0 < x1 ? 1 : -1;
    int dy = -std::abs(y1 - y0), sy = y0 < y1 ? 1 : -1;
    int err = dx + dy;
    for (;;) {
        image.set(x0, y0, color);
        if (x0 == x1 && y0 == y1) break;
        int e2 = 2 * err;
        if (e2 >= dy) { err += dy; x0 += sx; }
        if (e2 <= dx) { err += dx; y0 += sy; }
    }
}

struct Edge {
    double x, y;
};

// Fill a triangle with nearest-neighbor texture sampling; vertices in pixel
// space with per-vertex uvs.
void fill_triangle(FrameImage& image, const Vec2 p[3], const Vec2 uv[3],
                   const FrameImage* texture, Rgba flat_color) {
    double min_x = std::min({p[0].x, p[1].x, p[2].x});
    double max_x = std::max({p[0].x, p[1].x, p[2].x});
    double min_y = std::min({p[0].y, p[1].y, p[2].y});
    double max_y = std::max({p[0].y, p[1].y, p[2].y});
    int x0 = std::max(0, static_cast<int>(std::floor(min_x)));
    int x1 = std::min(image.width - 1, static_cast<int>(std::ceil(max_x)));
    int y0 = std::max(0, static_cast<int>(std::floor(min_y)));
    int y1 = std::min(image.height - 1, static_cast<int>(std::ceil(max_y)));

    double denom = (p[1].y - p[2].y) * (p[0].x - p[2].x) +
                   (p[2].x - p[1].x) * (p[0].y - p[2].y);
    if (std::abs(denom) < 1e-12) return;  // degenerate triangle

    for (int y = y0; y <= y1; ++y) {
        for (int x = x0; x <= x1; ++x) {
            double px = x + 0.5, py = y + 0.5;
            double w0 = ((p[1].y - p[2].y) * (px - p[2].x) +
                         (p[2].x - p[1].x) * (py - p[2].y)) / denom;
            double w1 = ((p[2].y - p[0].y) * (px - p[2].x) +
                         (p[0].x - p[2].x) * (py - p[2].y)) / denom;
            double w2 = 1.0 - w0 - w1;
            if (w0 < 0 || w1 < 0 || w2 < 0) continue;
            Rgba color = flat_color;
            if (texture) {
                double u = w0 * uv[0].x + w1 * uv[1].x + w2 * uv[2].x;
                double v = w0 * uv[0].y + w1 * uv[1].y + w2 * uv[2].y;
                int tx = std::clamp(static_cast<int>(u * texture->width),
                                    0, texture->width - 1);
                int ty = std::clamp(static_cast<int>(v * texture->height),
                                    0, texture->height - 1);
                color = texture->get(tx, ty);
            }
            image.set(x, y, color);
        }
    }
}

std::vector<const rig::Slot*> slots_in_draw_order(const rig::Rig& r) {
    std::vector<const rig::Slot*> slots;
    for (const auto& s : r.slots) slots.push_back(&s);
    std::sort(slots.begin(), slots.end(),
              [](const rig::Slot* a, const rig::Slot* b) {
                  return a->draw_order_index < b->draw_order_index;
              });
    return slots;
}

}  // namespace

TextureSet load_textures(const rig::Rig& r, const std::string& base_dir) {
    TextureSet textures;
    for (const auto& [name, path] : r.textures) {
        std::string full = base_dir.empty() ? path : base_dir + "/" + path;
        textures[name] = read_png(full);
    }
    return textures;
}

FrameImage render_frame(const rig::Rig& r, const rig::PoseValues& pose,
                        const RenderOptions& opts, const TextureSet* textures) {
    FrameImage image(opts.width, opts.height, opts.background);
    if (!(opts.camera.scale > 0))
        throw Error("InvalidArgument", "camera scale must be > 0");

    auto world = rig::world_transforms(r, pose);

    if (opts.mode == RenderMode::SkeletonLines) {
        const Rgba bone_color{40, 40, 200, 255};
        for (const auto& b : r.bones) {
            const Affine2& xf = world.at(b.name);
            Vec2 origin = xf.apply({0, 0});
            Vec2 tip = xf.apply({b.length, 0});
            draw_line(image, opts.camera.to_pixels(origin), opts.camera.to_pixels(tip),
                      bone_color);
        }
        return image;
    }

    for (const rig::Slot* slot : slots_in_draw_order(r)) {
        if (!slot->active_attachment) continue;
        const rig::MeshAttachment* mesh = r.find_attachment(*slot->active_attachment);
        if (!mesh) continue;
        auto deformed = rig::skin_vertices(r, pose, mesh->name);
        for (auto& v : deformed) v = opts.camera.to_pixels(v);

        if (opts.mode == RenderMode::MeshWireframe) {
            const Rgba wire{30, 160, 30, 255};
            for (const auto& t : mesh->triangles) {
                for (int e = 0; e < 3; ++e)
                    draw_line(image, deformed[static_cast<std::size_t>(t[e])],
                              deformed[static_cast<std::size_t>(t[(e + 1) % 3])], wire);
            }
        } else {  // Textured
            const FrameImage* texture = nullptr;
            if (textures) {
                auto it = textures->find(mesh->texture_ref);
                if (it != textures->end()) texture = &it->second;
            }
            if (!texture)
                throw Error("MissingTexture",
                            "no texture for '" + mesh->texture_ref + "' (attachment '" +
                                mesh->name + "')");
            for (const auto& t : mesh->triangles) {
                Vec2 p[3] = {deformed[static_cast<std::size_t>(t[0])],
                             deformed[static_cast<std::size_t>(t[1])],
                             deformed[static_cast<std::size_t>(t[2])]};
                Vec2 uv[3] = {mesh->uvs[static_cast<std::size_t>(t[0])],
                              mesh->uvs[static_cast<std::size_t>(t[1])],
                              mesh->uvs[static_cast<std::size_t>(t[2])]};
                fill_triangle(image, p, uv, texture, Rgba{});
            }
        }
    }
    return image;
}

std::vector<std::uint8_t> render_clip_gif(const rig::Rig& r,
                                          const retarget::AnimationClip& clip,
                                          const RenderOptions& opts, double fps,
                                          const TextureSet* textures) {
    if (!(fps > 0))
        throw Error("InvalidArgument", "fps must be > 0");
    if (clip.skeleton_id != r.skeleton_id)
        throw Error("SkeletonMismatch",
                    "clip targets skeleton '" + clip.skeleton_id + "', rig is '" +
                        r.skeleton_id + "'");

    auto frame_count =
        static_cast<std::size_t>(std::ceil(clip.duration * fps - 1e-9)) + 1;
    std::vector<FrameImage> frames;
    frames.reserve(frame_count);
    for (std::size_t i = 0; i < frame_count; ++i) {
        double t = static_cast<double>(i) / fps;
        auto pose = retarget::sample_clip(clip, t, retarget::SampleMode::Clamp);
        frames.push_back(render_frame(r, pose, opts, textures));
    }
    int delay = static_cast<int>(std::lround(100.0 / fps));
    return encode_gif(frames, delay);
}

}  // namespace mocap2d::render
