// mocap2d: BVH-to-2D retargeting pipeline CLI.
//
// Subcommands: inspect, retarget, export, render, search, validate.
// Exit codes: 0 success, 1 domain error, 2 usage error.

#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>

#include <CLI11.hpp>
#include <json.hpp>

#include "mocap2d/bvh.hpp"
#include "mocap2d/interchange.hpp"
#include "mocap2d/motion_library.hpp"
#include "mocap2d/plane_select.hpp"
#include "mocap2d/render.hpp"
#include "mocap2d/retarget.hpp"
#include "mocap2d/rig.hpp"

namespace fs = std::filesystem;
using nlohmann::ordered_json;

namespace {

struct UsageError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

std::string read_file(const std::string& path) {
    if (!fs::exists(path))
        throw UsageError("no such file: " + path);
    std::ifstream in(path, std::ios::binary);
    if (!in)
        throw UsageError("cannot read: " + path);
    std::stringstream buf;
    buf << in.rdbuf();
    return buf.str();
}

void write_file(const std::string& path, const std::string& data) {
    std::ofstream out(path, std::ios::binary);
    if (!out)
        throw UsageError("cannot write: " + path);
    out << data;
}

void write_file(const std::string& path, const std::vector<std::uint8_t>& data) {
    std::ofstream out(path, std::ios::binary);
    if (!out)
        throw UsageError("cannot write: " + path);
    out.write(reinterpret_cast<const char*>(data.data()),
              static_cast<std::streamsize>(data.size()));
}

mocap2d::plane::ClassRules rules_from_flag(const std::string& plane_rules_path) {
    if (plane_rules_path.empty())
        return mocap2d::plane::default_class_rules();
    return mocap2d::plane::parse_class_rules(read_file(plane_rules_path));
}

void print_joint_tree(const mocap2d::bvh::Joint& joint, int depth) {
    std::cout << std::string(static_cast<std::size_t>(depth) * 2, ' ') << joint.name;
    if (!joint.channels.empty()) {
        std::cout << " [";
        for (std::size_t i = 0; i < joint.channels.size(); ++i)
            std::cout << (i ? " " : "") << mocap2d::bvh::channel_name(joint.channels[i]);
        std::cout << "]";
    }
    std::cout << "\n";
    for (const auto& c : joint.children) print_joint_tree(c, depth + 1);
    if (joint.end_site_offset)
        std::cout << std::string(static_cast<std::size_t>(depth + 1) * 2, ' ')
                  << mocap2d::bvh::end_site_name(joint.name) << "\n";
}

int joint_count(const mocap2d::bvh::Joint& j) {
    int n = 1;
    for (const auto& c : j.children) n += joint_count(c);
    return n;
}

int cmd_inspect(const std::string& bvh_path, const std::string& plane_rules,
                bool as_json) {
    auto doc = mocap2d::bvh::parse(read_file(bvh_path));
    auto rules = rules_from_flag(plane_rules);
    auto classes = mocap2d::plane::classify_joints(doc, rules);
    auto assignments = mocap2d::plane::assign_projection_planes(doc, classes);

    double duration = doc.motion.frame_time *
                      static_cast<double>(doc.motion.frames.empty()
                                              ? 0
                                              : doc.motion.frames.size() - 1);
    if (as_json) {
        ordered_json out;
        out["joint_count"] = joint_count(doc.root);
        out["channel_count"] = doc.channel_count();
        out["frame_count"] = doc.motion.frames.size();
        out["fps"] = 1.0 / doc.motion.frame_time;
        out["duration"] = duration;
        out["planes"] = ordered_json::array();
        for (const auto& a : assignments)
            out["planes"].push_back({{"joint", a.joint_name},
                                     {"class", mocap2d::plane::class_name(a.body_class)},
                                     {"plane", mocap2d::plane::plane_name(a.plane)},
                                     {"retained_variance_ratio", a.retained_variance_ratio}});
        std::cout << out.dump(2) << "\n";
        return 0;
    }

    std::cout << "joints: " << joint_count(doc.root) << "\n";
    std::cout << "channels: " << doc.channel_count() << "\n";
    std::cout << "frames: " << doc.motion.frames.size() << "\n";
    std::cout << "fps: " << 1.0 / doc.motion.frame_time << "\n";
    std::cout << "duration: " << duration << " s\n";
    std::cout << "\nhierarchy:\n";
    print_joint_tree(doc.root, 0);
    std::cout << "\nprojection planes:\n";
    for (const auto& a : assignments)
        std::cout << "  " << a.joint_name << ": " << mocap2d::plane::plane_name(a.plane)
                  << " (" << mocap2d::plane::class_name(a.body_class)
                  << ", retained " << a.retained_variance_ratio << ")\n";
    return 0;
}

int cmd_retarget(const std::string& bvh_path, const std::string& rig_path,
                 const std::string& map_path, const std::string& out_path,
                 const std::string& plane_rules, double tolerance, double fps,
                 const std::string& clip_name, bool verbose) {
    auto doc = mocap2d::bvh::parse(read_file(bvh_path));
    if (fps > 0) doc = mocap2d::bvh::resample(doc, fps);

    auto rig = mocap2d::interchange::load_rig(read_file(rig_path));
    auto jmap = mocap2d::retarget::parse_joint_map(read_file(map_path));
    auto rules = rules_from_flag(plane_rules);
    auto classes = mocap2d::plane::classify_joints(doc, rules);
    auto assignments = mocap2d::plane::assign_projection_planes(doc, classes);

    std::string name = clip_name.empty() ? fs::path(bvh_path).stem().string() : clip_name;
    auto clip = mocap2d::retarget::extract_clip(doc, assignments, jmap, rig, name);
    clip = mocap2d::retarget::decimate_clip(clip, tolerance, tolerance);

    if (verbose) {
        std::size_t keys = 0;
        for (const auto& tl : clip.timelines) keys += tl.keys.size();
        std::cerr << "clip '" << clip.name << "': " << clip.timelines.size()
                  << " timelines, " << keys << " keys, " << clip.duration << " s\n";
    }
    write_file(out_path, mocap2d::interchange::save_clip(clip));
    return 0;
}

int cmd_export(const std::string& rig_path, const std::vector<std::string>& clip_paths,
               const std::string& out_path) {
    auto rig = mocap2d::interchange::load_rig(read_file(rig_path));
    std::vector<mocap2d::retarget::AnimationClip> clips;
    for (const auto& p : clip_paths)
        clips.push_back(mocap2d::interchange::load_clip(read_file(p)));
    write_file(out_path, mocap2d::interchange::export_spine_json(rig, clips));
    return 0;
}

int cmd_render(const std::string& rig_path, const std::string& clip_path,
               const std::string& out_path, const std::string& mode,
               const std::string& size, double fps, double cam_scale,
               const std::vector<double>& cam_offset) {
    auto rig = mocap2d::interchange::load_rig(read_file(rig_path));
    auto clip = mocap2d::interchange::load_clip(read_file(clip_path));

    mocap2d::render::RenderOptions opts;
    if (std::sscanf(size.c_str(), "%dx%d", &opts.width, &opts.height) != 2 ||
        opts.width < 1 || opts.height < 1)
        throw UsageError("--size must be WxH");
    if (mode == "skeleton") opts.mode = mocap2d::render::RenderMode::SkeletonLines;
    else if (mode == "wireframe") opts.mode = mocap2d::render::RenderMode::MeshWireframe;
    else if (mode == "textured") opts.mode = mocap2d::render::RenderMode::Textured;
    else throw UsageError("--mode must be skeleton, wireframe, or textured");
    opts.camera.scale = cam_scale;
    opts.camera.translate = cam_offset.size() == 2
                                ? mocap2d::Vec2{cam_offset[0], cam_offset[1]}
                                : mocap2d::Vec2{opts.width / 2.0, opts.height / 2.0};

    mocap2d::render::TextureSet textures;
    const mocap2d::render::TextureSet* texture_ptr = nullptr;
    if (opts.mode == mocap2d::render::RenderMode::Textured) {
        textures = mocap2d::render::load_textures(rig, fs::path(rig_path).parent_path().string());
        texture_ptr = &textures;
    }

    if (out_path.size() > 4 && out_path.substr(out_path.size() - 4) == ".gif") {
        auto gif = mocap2d::render::render_clip_gif(rig, clip, opts, fps, texture_ptr);
        write_file(out_path, gif);
    } else {
        fs::create_directories(out_path);
        auto frame_count =
            static_cast<std::size_t>(std::ceil(clip.duration * fps - 1e-9)) + 1;
        for (std::size_t i = 0; i < frame_count; ++i) {
            double t = static_cast<double>(i) / fps;
            auto pose = mocap2d::retarget::sample_clip(clip, t);
            auto image = mocap2d::render::render_frame(rig, pose, opts, texture_ptr);
            char name[32];
            std::snprintf(name, sizeof(name), "frame_%05zu.png", i);
            mocap2d::render::write_png(image, (fs::path(out_path) / name).string());
        }
    }
    return 0;
}

int cmd_search(const std::string& library_dir, const std::string& tags_path,
               const std::string& query, int k, bool as_json) {
    std::string tags = tags_path.empty()
                           ? (fs::path(library_dir) / "tags.json").string()
                           : tags_path;
    auto lib = mocap2d::library::index_library(library_dir, tags);
    for (const auto& w : lib.warnings) std::cerr << "warning: " << w << "\n";
    auto results = mocap2d::library::search(lib, query, static_cast<std::size_t>(k));

    if (as_json) {
        ordered_json out = ordered_json::array();
        for (const auto& r : results)
            out.push_back({{"id", r.entry.id},
                           {"path", r.entry.bvh_path},
                           {"score", r.score},
                           {"duration", r.entry.duration},
                           {"joint_count", r.entry.joint_count}});
        std::cout << out.dump(2) << "\n";
        return 0;
    }
    if (results.empty()) {
        std::cout << "no matches\n";
        return 0;
    }
    for (const auto& r : results)
        std::cout << r.entry.id << "  score=" << r.score << "  duration=" << r.entry.duration
                  << "s  (" << r.entry.bvh_path << ")\n";
    return 0;
}

int cmd_validate(const std::string& rig_path, bool as_json) {
    // Validation reports structural problems instead of refusing to parse, so
    // read the raw JSON leniently first and fall back to the loader's error.
    mocap2d::rig::Rig rig;
    try {
        rig = mocap2d::interchange::load_rig(read_file(rig_path));
    } catch (const mocap2d::Error& e) {
        if (as_json) {
            ordered_json out;
            out["valid"] = false;
            out["errors"] = ordered_json::array({{{"code", e.name()}, {"message", e.what()}}});
            std::cout << out.dump(2) << "\n";
        } else {
            std::cout << "invalid: " << e.name() << ": " << e.what() << "\n";
        }
        return 1;
    }
    auto report = mocap2d::rig::validate(rig);
    if (as_json) {
        ordered_json out;
        out["valid"] = report.empty();
        out["errors"] = ordered_json::array();
        for (const auto& v : report)
            out["errors"].push_back(
                {{"code", v.code}, {"path", v.path}, {"message", v.message}});
        std::cout << out.dump(2) << "\n";
    } else if (report.empty()) {
        std::cout << "ok\n";
    } else {
        for (const auto& v : report)
            std::cout << v.code << " " << v.path << ": " << v.message << "\n";
    }
    return report.empty() ? 0 : 1;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"2D skeletal animation retargeting pipeline"};
    app.require_subcommand(1);

    bool verbose = false;
    bool as_json = false;
    unsigned seed = 0;
    std::string plane_rules;
    app.add_flag("--verbose", verbose, "chatty diagnostics on stderr");
    app.add_option("--seed", seed, "seed for randomized utilities");
    app.add_option("--plane-rules", plane_rules, "joint classification rules file");

    auto* inspect = app.add_subcommand("inspect", "BVH stats and plane assignments");
    std::string bvh_path;
    inspect->add_option("--bvh", bvh_path, "BVH file")->required();
    inspect->add_flag("--json", as_json, "machine-readable output");

    auto* retarget_cmd = app.add_subcommand("retarget", "extract a 2D clip from BVH");
    std::string rig_path, map_path, out_path, clip_name;
    double tolerance = 0.5, fps = 0.0;
    retarget_cmd->add_option("--bvh", bvh_path, "BVH file")->required();
    retarget_cmd->add_option("--rig", rig_path, "target rig JSON")->required();
    retarget_cmd->add_option("--map", map_path, "joint map file")->required();
    retarget_cmd->add_option("--out", out_path, "output clip JSON")->required();
    retarget_cmd->add_option("--tolerance", tolerance, "keyframe decimation tolerance");
    retarget_cmd->add_option("--fps", fps, "resample BVH to this rate first");
    retarget_cmd->add_option("--name", clip_name, "clip name (default: BVH stem)");

    auto* export_cmd = app.add_subcommand("export", "write Spine-compatible JSON");
    std::vector<std::string> clip_paths;
    export_cmd->add_option("--rig", rig_path, "rig JSON")->required();
    export_cmd->add_option("--clip", clip_paths, "clip JSON (repeatable)");
    export_cmd->add_option("--out", out_path, "output Spine JSON")->required();

    auto* render_cmd = app.add_subcommand("render", "rasterize a clip to PNG/GIF");
    std::string mode = "skeleton", size = "256x256", clip_path;
    double render_fps = 30.0, cam_scale = 1.0;
    std::vector<double> cam_offset;
    render_cmd->add_option("--rig", rig_path, "rig JSON")->required();
    render_cmd->add_option("--clip", clip_path, "clip JSON")->required();
    render_cmd->add_option("--out", out_path, "output .gif file or PNG directory")->required();
    render_cmd->add_option("--mode", mode, "skeleton | wireframe | textured");
    render_cmd->add_option("--size", size, "WxH pixels");
    render_cmd->add_option("--fps", render_fps, "playback rate");
    render_cmd->add_option("--camera-scale", cam_scale, "rig units to pixels");
    render_cmd->add_option("--camera-offset", cam_offset, "camera translate x y")
        ->expected(2);

    auto* search_cmd = app.add_subcommand("search", "query the motion library");
    std::string library_dir, tags_path, query;
    int k = 5;
    search_cmd->add_option("--library", library_dir, "BVH library directory")->required();
    search_cmd->add_option("--query", query, "action description")->required();
    search_cmd->add_option("-k", k, "max results");
    search_cmd->add_option("--tags", tags_path, "tags file (default <library>/tags.json)");
    search_cmd->add_flag("--json", as_json, "machine-readable output");

    auto* validate_cmd = app.add_subcommand("validate", "check a rig file");
    validate_cmd->add_option("--rig", rig_path, "rig JSON")->required();
    validate_cmd->add_flag("--json", as_json, "machine-readable output");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        if (e.get_exit_code() == 0) return app.exit(e);
        app.exit(e);
        return 2;
    }

    try {
        if (inspect->parsed()) return cmd_inspect(bvh_path, plane_rules, as_json);
        if (retarget_cmd->parsed())
            return cmd_retarget(bvh_path, rig_path, map_path, out_path, plane_rules,
                                tolerance, fps, clip_name, verbose);
        if (export_cmd->parsed()) return cmd_export(rig_path, clip_paths, out_path);
        if (render_cmd->parsed())
            return cmd_render(rig_path, clip_path, out_path, mode, size, render_fps,
                              cam_scale, cam_offset);
        if (search_cmd->parsed())
            return cmd_search(library_dir, tags_path, query, k, as_json);
        if (validate_cmd->parsed()) return cmd_validate(rig_path, as_json);
    } catch (const UsageError& e) {
        std::cerr << "usage error: " << e.what() << "\n";
        return 2;
    } catch (const mocap2d::Error& e) {
        std::cerr << e.name() << ": " << e.what() << "\n";
        return 1;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
    return 0;
}
