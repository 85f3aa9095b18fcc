#include <doctest.h>

#include <filesystem>

#include "mocap2d/render.hpp"
#include "fixtures.hpp"
#include "gif_decode.hpp"

using namespace mocap2d;
using render::FrameImage;
using render::RenderMode;
using render::RenderOptions;
using render::Rgba;

namespace {

rig::Rig one_bone_rig(double length) {
    rig::Rig r;
    r.skeleton_id = "one";
    rig::Bone b;
    b.name = "root";
    b.length = length;
    r.bones.push_back(b);
    r.skins.push_back({"default", {}});
    return r;
}

// Two overlapping textured quads on independent root-child bones.
rig::Rig overlap_rig() {
    rig::Rig r;
    r.skeleton_id = "overlap";
    rig::Bone root, a, b;
    root.name = "root";
    a.name = "a";
    a.parent = "root";
    b.name = "b";
    b.parent = "root";
    r.bones = {root, a, b};
    auto quad = [&](const std::string& name, const std::string& bone, Vec2 lo, Vec2 hi,
                    const std::string& tex) {
        rig::MeshAttachment m;
        m.name = name;
        m.texture_ref = tex;
        m.vertices = {{lo.x, lo.y}, {hi.x, lo.y}, {hi.x, hi.y}, {lo.x, hi.y}};
        m.uvs = {{0, 0}, {1, 0}, {1, 1}, {0, 1}};
        m.triangles = {{0, 1, 2}, {0, 2, 3}};
        m.weights.assign(4, {{bone, 1.0}});
        r.attachments.push_back(m);
    };
    quad("under", "a", {4, 4}, {24, 24}, "red");
    quad("over", "b", {12, 12}, {32, 32}, "blue");
    r.slots.push_back({"under", "a", 0, std::string("under")});
    r.slots.push_back({"over", "b", 1, std::string("over")});
    r.skins.push_back({"default", {{"under", "under"}, {"over", "over"}}});
    r.textures = {{"red", "red.png"}, {"blue", "blue.png"}};
    return r;
}

FrameImage solid(int w, int h, Rgba c) { return FrameImage(w, h, c); }

int count_non_background(const FrameImage& img, Rgba bg) {
    int n = 0;
    for (int y = 0; y < img.height; ++y)
        for (int x = 0; x < img.width; ++x)
            if (!(img.get(x, y) == bg)) ++n;
    return n;
}

}  // namespace

TEST_CASE("image buffer basics and PNG round trip") {
    FrameImage img(3, 2, Rgba{10, 20, 30, 255});
    CHECK(img.pixels.size() == 3u * 2u * 4u);
    img.set(2, 1, Rgba{200, 100, 50, 255});
    CHECK(img.get(2, 1) == Rgba{200, 100, 50, 255});
    CHECK(img.get(0, 0) == Rgba{10, 20, 30, 255});
    CHECK_FALSE(img.in_bounds(3, 0));
    CHECK_THROWS_AS(FrameImage(0, 5), Error);

    auto path = (std::filesystem::temp_directory_path() / "mocap2d_png_test.png").string();
    render::write_png(img, path);
    auto back = render::read_png(path);
    REQUIRE(back.width == img.width);
    REQUIRE(back.height == img.height);
    CHECK(back.pixels == img.pixels);
    std::filesystem::remove(path);

    CHECK_THROWS_AS((void)render::read_png("/nonexistent/nope.png"), Error);
}

TEST_CASE("empty rig renders pure background") {
    rig::Rig r;
    r.skeleton_id = "empty";
    rig::Bone b;
    b.name = "root";
    r.bones.push_back(b);  // zero-length bone paints a single pixel at most
    r.skins.push_back({"default", {}});

    RenderOptions opts;
    opts.width = 32;
    opts.height = 32;
    opts.mode = RenderMode::MeshWireframe;  // nothing to draw without slots
    auto img = render::render_frame(r, {}, opts);
    CHECK(count_non_background(img, opts.background) == 0);
}

TEST_CASE("skeleton line stays inside the dilated segment box") {
    auto r = one_bone_rig(10);
    RenderOptions opts;
    opts.width = 64;
    opts.height = 64;
    opts.mode = RenderMode::SkeletonLines;
    opts.camera.translate = {32, 32};
    auto img = render::render_frame(r, {}, opts);

    int painted = 0;
    for (int y = 0; y < 64; ++y)
        for (int x = 0; x < 64; ++x) {
            if (img.get(x, y) == opts.background) continue;
            ++painted;
            CHECK(x >= 31);
            CHECK(x <= 43);
            CHECK(y >= 31);
            CHECK(y <= 33);
        }
    CHECK(painted >= 10);
}

TEST_CASE("rendering is deterministic") {
    auto r = fixtures::fixture_rig30();
    auto pose = retarget::sample_clip(fixtures::fixture_clip_walk(), 0.4);
    RenderOptions opts;
    opts.width = 96;
    opts.height = 96;
    opts.mode = RenderMode::MeshWireframe;
    opts.camera.translate = {48, 48};
    auto a = render::render_frame(r, pose, opts);
    auto b = render::render_frame(r, pose, opts);
    CHECK(a.pixels == b.pixels);
    CHECK(count_non_background(a, opts.background) > 0);
}

TEST_CASE("textured mode honors slot draw order and flags missing textures") {
    auto r = overlap_rig();
    render::TextureSet textures;
    textures["red"] = solid(4, 4, Rgba{204, 0, 0, 255});
    textures["blue"] = solid(4, 4, Rgba{0, 0, 204, 255});

    RenderOptions opts;
    opts.width = 40;
    opts.height = 40;
    opts.mode = RenderMode::Textured;
    auto img = render::render_frame(r, {}, opts, &textures);

    // Overlap region belongs to the higher draw-order slot.
    CHECK(img.get(18, 18) == Rgba{0, 0, 204, 255});
    // Exclusive regions keep their own texture.
    CHECK(img.get(6, 6) == Rgba{204, 0, 0, 255});
    CHECK(img.get(30, 30) == Rgba{0, 0, 204, 255});
    // Outside both quads: background.
    CHECK(img.get(1, 1) == opts.background);

    textures.erase("blue");
    try {
        (void)render::render_frame(r, {}, opts, &textures);
        FAIL("expected MissingTexture");
    } catch (const Error& e) {
        CHECK(e.name() == "MissingTexture");
        CHECK(std::string(e.what()).find("blue") != std::string::npos);
    }
}

TEST_CASE("gif frame counts follow the fencepost rule") {
    auto r = one_bone_rig(8);
    retarget::AnimationClip clip;
    clip.name = "c";
    clip.skeleton_id = "one";
    clip.duration = 1.0;
    clip.fps = 10.0;
    retarget::Timeline tl;
    tl.bone = "root";
    tl.property = retarget::Property::Rotation;
    tl.keys = {{0.0, 0.0}, {1.0, 90.0}};
    clip.timelines.push_back(tl);

    RenderOptions opts;
    opts.width = 24;
    opts.height = 24;
    opts.camera.translate = {12, 12};
    auto bytes = render::render_clip_gif(r, clip, opts, 10.0);
    auto gif = gif_decode::decode(bytes);
    CHECK(gif.width == 24);
    CHECK(gif.height == 24);
    REQUIRE(gif.frames.size() == 11);
    for (const auto& f : gif.frames) CHECK(f.delay_cs == 10);

    auto still = clip;
    still.duration = 0.0;
    still.timelines.clear();
    auto one = gif_decode::decode(render::render_clip_gif(r, still, opts, 10.0));
    CHECK(one.frames.size() == 1);

    auto wrong = clip;
    wrong.skeleton_id = "other";
    try {
        (void)render::render_clip_gif(r, wrong, opts, 10.0);
        FAIL("expected SkeletonMismatch");
    } catch (const Error& e) {
        CHECK(e.name() == "SkeletonMismatch");
    }
}

TEST_CASE("walk clip animates: first and last GIF frames differ") {
    auto r = fixtures::fixture_rig30();
    auto clip = fixtures::fixture_clip_walk();
    RenderOptions opts;
    opts.width = 64;
    opts.height = 64;
    opts.mode = RenderMode::SkeletonLines;
    opts.camera.translate = {8, 32};
    auto gif = gif_decode::decode(render::render_clip_gif(r, clip, opts, 15.0));
    REQUIRE(gif.frames.size() == 16);
    CHECK(gif.frames.front().rgb != gif.frames.back().rgb);

    // Pure background pixels quantize exactly (255 is on the 6-level cube).
    bool background_ok = false;
    const auto& rgb = gif.frames.front().rgb;
    for (std::size_t i = 0; i + 2 < rgb.size(); i += 3)
        if (rgb[i] == 255 && rgb[i + 1] == 255 && rgb[i + 2] == 255) background_ok = true;
    CHECK(background_ok);
}

TEST_CASE("gif encoding round-trips cube-aligned colors exactly") {
    std::vector<FrameImage> frames;
    frames.push_back(solid(8, 8, Rgba{51, 102, 204, 255}));
    frames.push_back(solid(8, 8, Rgba{255, 0, 153, 255}));
    auto gif = gif_decode::decode(render::encode_gif(frames, 7));
    REQUIRE(gif.frames.size() == 2);
    CHECK(gif.frames[0].delay_cs == 7);
    CHECK(gif.frames[0].rgb[0] == 51);
    CHECK(gif.frames[0].rgb[1] == 102);
    CHECK(gif.frames[0].rgb[2] == 204);
    CHECK(gif.frames[1].rgb[0] == 255);
    CHECK(gif.frames[1].rgb[1] == 0);
    CHECK(gif.frames[1].rgb[2] == 153);
}
