#include <benchmark/benchmark.h>

#include <functional>
#include <random>

#include "mocap2d/bvh.hpp"
#include "mocap2d/plane_select.hpp"
#include "mocap2d/render.hpp"
#include "mocap2d/retarget.hpp"
#include "mocap2d/rig.hpp"
#include "fixtures.hpp"

using namespace mocap2d;

namespace {

struct RetargetInput {
    bvh::Document doc;
    rig::Rig target;
    retarget::JointMap jmap;
    std::vector<plane::PlaneAssignment> assignments;
};

// 1000 random frames on a 31-joint, 96-channel humanoid, with a rig and
// joint map mirroring the hierarchy.
RetargetInput make_retarget_input() {
    RetargetInput in;
    in.doc = fixtures::humanoid31();
    in.doc.motion.frames.clear();
    std::mt19937 rng(42);
    std::uniform_real_distribution<double> angle(-40.0, 40.0);
    for (int f = 0; f < 1000; ++f) {
        std::vector<double> row(96);
        for (auto& v : row) v = angle(rng);
        in.doc.motion.frames.push_back(row);
    }

    in.target.skeleton_id = "humanoid31";
    std::function<void(const bvh::Joint&, const std::string&)> walk =
        [&](const bvh::Joint& j, const std::string& parent) {
            rig::Bone b;
            b.name = "bn_" + j.name;
            if (!parent.empty()) b.parent = parent;
            b.length = 5;
            b.rest_translation = {j.offset.x, j.offset.y};
            in.target.bones.push_back(b);
            in.jmap.entries.emplace_back(j.name, b.name);
            for (const auto& child : j.children) walk(child, b.name);
        };
    walk(in.doc.root, "");
    in.target.skins.push_back({"default", {}});

    auto classes = plane::classify_joints(in.doc, plane::default_class_rules());
    in.assignments = plane::assign_projection_planes(in.doc, classes);
    return in;
}

void bm_retarget_1000x31(benchmark::State& state) {
    auto in = make_retarget_input();
    for (auto _ : state) {
        auto clip = retarget::extract_clip(in.doc, in.assignments, in.jmap, in.target,
                                           "bench");
        benchmark::DoNotOptimize(clip);
    }
}
BENCHMARK(bm_retarget_1000x31)->Unit(benchmark::kMillisecond);

void bm_render_gif_60x512(benchmark::State& state) {
    auto doc = fixtures::walk_bvh(60);
    auto classes = plane::classify_joints(doc, plane::default_class_rules());
    auto assignments = plane::assign_projection_planes(doc, classes);
    auto clip = retarget::extract_clip(doc, assignments, fixtures::walk_joint_map(),
                                       fixtures::walk_rig(), "walk");
    render::RenderOptions opts;
    opts.width = 512;
    opts.height = 512;
    opts.mode = render::RenderMode::SkeletonLines;
    opts.camera.translate = {256, 256};
    for (auto _ : state) {
        auto bytes = render::render_clip_gif(fixtures::walk_rig(), clip, opts, 30.0);
        benchmark::DoNotOptimize(bytes);
    }
}
BENCHMARK(bm_render_gif_60x512)->Unit(benchmark::kMillisecond);

void bm_fk_humanoid(benchmark::State& state) {
    auto doc = fixtures::humanoid31();
    for (auto _ : state) {
        for (std::size_t f = 0; f < doc.motion.frames.size(); ++f) {
            auto poses = bvh::forward_kinematics(doc, f);
            benchmark::DoNotOptimize(poses);
        }
    }
}
BENCHMARK(bm_fk_humanoid);

}  // namespace

BENCHMARK_MAIN();
