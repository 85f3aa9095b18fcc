#include "mocap2d/retarget.hpp"

#include <algorithm>
#include <cmath>
#include <set>
#include <sstream>

namespace mocap2d::retarget {

const std::string* JointMap::bone_for(const std::string& joint) const {
    for (const auto& [src, dst] : entries)
        if (src == joint) return &dst;
    return nullptr;
}

const char* property_name(Property p) {
    switch (p) {
        case Property::Rotation: return "rotation";
        case Property::TranslateX: return "translate_x";
        case Property::TranslateY: return "translate_y";
    }
    return "?";
}

namespace {

std::string trim(const std::string& s) {
    std::size_t b = s.find_first_not_of(" \t\r\n");
    if (b == std::string::npos) return "";
    std::size_t e = s.find_last_not_of(" \t\r\n");
    return s.substr(b, e - b + 1);
}

}  // namespace

JointMap parse_joint_map(const std::string& text) {
    JointMap map;
    std::istringstream in(text);
    std::string line;
    int lineno = 0;
    std::set<std::string> sources, targets;
    while (std::getline(in, line)) {
        ++lineno;
        auto hash = line.find('#');
        if (hash != std::string::npos) line = line.substr(0, hash);
        line = trim(line);
        if (line.empty()) continue;
        auto eq = line.find('=');
        if (eq == std::string::npos)
            throw Error("MalformedJointMap",
                        "line " + std::to_string(lineno) + ": expected 'key = value'");
        std::string key = trim(line.substr(0, eq));
        std::string value = trim(line.substr(eq + 1));
        if (key.empty() || value.empty())
            throw Error("MalformedJointMap",
                        "line " + std::to_string(lineno) + ": empty key or value");
        if (key == "scale") {
            map.scale = std::stod(value);
            if (!(map.scale > 0))
                throw Error("MalformedJointMap", "scale must be > 0");
        } else if (key == "flip_y") {
            if (value == "true") map.flip_y = true;
            else if (value == "false") map.flip_y = false;
            else throw Error("MalformedJointMap", "flip_y must be true or false");
        } else {
            if (!sources.insert(key).second)
                throw Error("MalformedJointMap", "joint '" + key + "' mapped twice");
            if (!targets.insert(value).second)
                throw Error("MalformedJointMap",
                            "bone '" + value + "' is the target of two joints");
            map.entries.emplace_back(key, value);
        }
    }
    return map;
}

double Timeline::sample(double time) const {
    if (keys.empty()) return 0.0;
    if (time <= keys.front().time) return keys.front().value;
    if (time >= keys.back().time) return keys.back().value;
    auto it = std::upper_bound(keys.begin(), keys.end(), time,
                               [](double t, const Key& k) { return t < k.time; });
    const Key& hi = *it;
    const Key& lo = *(it - 1);
    if (interpolation == Interpolation::Stepped) return lo.value;
    double u = (time - lo.time) / (hi.time - lo.time);
    return lo.value + (hi.value - lo.value) * u;
}

Vec2 project_joint(const Vec3& position, plane::ProjectionPlane plane, bool flip_y) {
    double y = flip_y ? -position.y : position.y;
    if (plane == plane::ProjectionPlane::Frontal) return {position.x, y};
    return {position.z, y};
}

double bone_angle_2d(Vec2 parent_pt, Vec2 child_pt) {
    Vec2 d = child_pt - parent_pt;
    if (d.length() < 1e-9)
        throw Error("DegenerateBone", "coincident points");
    double deg = rad_to_deg(std::atan2(d.y, d.x));
    if (deg <= -180.0) deg += 360.0;
    return deg;
}

std::vector<double> unwrap_angles(const std::vector<double>& series) {
    std::vector<double> out;
    out.reserve(series.size());
    for (std::size_t i = 0; i < series.size(); ++i) {
        if (i == 0) {
            out.push_back(series[0]);
        } else {
            double delta = wrap_degrees(series[i] - series[i - 1]);
            out.push_back(out.back() + delta);
        }
    }
    return out;
}

namespace {

struct BvhNode {
    std::string name;
    int parent = -1;
    std::vector<int> children;
    bool is_end_site = false;
};

void flatten(const bvh::Joint& j, int parent, std::vector<BvhNode>& nodes) {
    int self = static_cast<int>(nodes.size());
    nodes.push_back({j.name, parent, {}, false});
    if (parent >= 0) nodes[static_cast<std::size_t>(parent)].children.push_back(self);
    for (const auto& c : j.children) flatten(c, self, nodes);
    if (j.end_site_offset) {
        int es = static_cast<int>(nodes.size());
        nodes.push_back({bvh::end_site_name(j.name), self, {}, true});
        nodes[static_cast<std::size_t>(self)].children.push_back(es);
    }
}

// Mapped descendants of `node` reachable without crossing another mapped
// joint; each candidate carries its joint-map entry index for tie-breaking.
void first_mapped_descendants(const std::vector<BvhNode>& nodes, int node,
                              const std::map<std::string, std::size_t>& map_index,
                              std::vector<std::pair<std::size_t, int>>& out) {
    for (int child : nodes[static_cast<std::size_t>(node)].children) {
        auto it = map_index.find(nodes[static_cast<std::size_t>(child)].name);
        if (it != map_index.end())
            out.emplace_back(it->second, child);
        else
            first_mapped_descendants(nodes, child, map_index, out);
    }
}

int bone_depth(const rig::Rig& r, const std::string& bone) {
    int depth = 0;
    const rig::Bone* b = r.find_bone(bone);
    while (b && b->parent) {
        b = r.find_bone(*b->parent);
        ++depth;
    }
    return depth;
}

}  // namespace

AnimationClip extract_clip(const bvh::Document& doc,
                           const std::vector<plane::PlaneAssignment>& assignments,
                           const JointMap& jmap, const rig::Rig& target,
                           const std::string& name) {
    if (doc.motion.frames.empty())
        throw Error("EmptyMotion", "BVH document has no frames");

    std::vector<BvhNode> nodes;
    flatten(doc.root, -1, nodes);
    std::map<std::string, int> node_index;
    for (std::size_t i = 0; i < nodes.size(); ++i)
        node_index[nodes[i].name] = static_cast<int>(i);

    std::map<std::string, std::size_t> map_index;
    for (std::size_t i = 0; i < jmap.entries.size(); ++i) {
        const auto& [src, dst] = jmap.entries[i];
        if (!node_index.count(src))
            throw Error("UnmappedJoint", "joint map source '" + src + "' not in BVH document");
        if (!target.find_bone(dst))
            throw Error("SkeletonMismatch",
                        "joint map target '" + dst + "' not in skeleton '" +
                            target.skeleton_id + "'");
        map_index[src] = i;
    }

    std::map<std::string, plane::ProjectionPlane> plane_of;
    for (const auto& a : assignments) plane_of[a.joint_name] = a.plane;

    // Per mapped joint, the node whose projected position defines the bone
    // direction: first mapped descendant, else the end site, else first child.
    std::map<std::string, int> direction_target;
    for (const auto& [src, dst] : jmap.entries) {
        int ni = node_index.at(src);
        std::vector<std::pair<std::size_t, int>> candidates;
        first_mapped_descendants(nodes, ni, map_index, candidates);
        if (!candidates.empty()) {
            auto best = *std::min_element(candidates.begin(), candidates.end());
            direction_target[src] = best.second;
        } else if (!nodes[static_cast<std::size_t>(ni)].children.empty()) {
            direction_target[src] = nodes[static_cast<std::size_t>(ni)].children.front();
        } else {
            throw Error("UnmappedJoint",
                        "joint '" + src + "' has no descendant or end site for a direction");
        }
    }

    const std::size_t frame_count = doc.motion.frames.size();
    const double dt = doc.motion.frame_time;

    // Stage 1: per-frame projected world angles for each mapped joint.
    std::map<std::string, std::vector<double>> world_angles;
    std::vector<Vec2> projected_root(frame_count);
    for (std::size_t f = 0; f < frame_count; ++f) {
        auto poses = bvh::forward_kinematics(doc, f);
        for (const auto& [src, dst] : jmap.entries) {
            int ji = node_index.at(src);
            int ti = direction_target.at(src);
            auto pl = plane_of.count(src) ? plane_of.at(src)
                                          : plane::ProjectionPlane::Frontal;
            Vec2 p0 = project_joint(poses[static_cast<std::size_t>(ji)].world_position, pl,
                                    jmap.flip_y);
            Vec2 p1 = project_joint(poses[static_cast<std::size_t>(ti)].world_position, pl,
                                    jmap.flip_y);
            auto& series = world_angles[src];
            try {
                series.push_back(bone_angle_2d(p0, p1));
            } catch (const Error&) {
                if (!series.empty()) {
                    series.push_back(series.back());
                } else {
                    // Frame-0 degenerate bone: fall back to the rig rest angle.
                    double rest = 0.0;
                    const rig::Bone* b = target.find_bone(dst);
                    while (b) {
                        rest += b->rest_rotation;
                        b = b->parent ? target.find_bone(*b->parent) : nullptr;
                    }
                    series.push_back(rest);
                }
            }
        }
        // Root translation.
        auto root_pl = plane_of.count(doc.root.name) ? plane_of.at(doc.root.name)
                                                     : plane::ProjectionPlane::Frontal;
        projected_root[f] = project_joint(poses[0].world_position, root_pl, jmap.flip_y);
    }

    // Stage 2: recover local rotation offsets, parents before children.
    std::vector<std::pair<std::string, std::string>> order(jmap.entries.begin(),
                                                           jmap.entries.end());
    std::stable_sort(order.begin(), order.end(),
                     [&](const auto& a, const auto& b) {
                         return bone_depth(target, a.second) < bone_depth(target, b.second);
                     });

    std::map<std::string, std::vector<double>> local_offsets;  // keyed by rig bone
    for (const auto& [src, dst] : order) {
        const auto& world = world_angles.at(src);
        std::vector<double> offsets(frame_count);
        const rig::Bone* bone = target.find_bone(dst);
        for (std::size_t f = 0; f < frame_count; ++f) {
            double parent_world = 0.0;
            const rig::Bone* a = bone->parent ? target.find_bone(*bone->parent) : nullptr;
            while (a) {
                parent_world += a->rest_rotation;
                if (auto it = local_offsets.find(a->name); it != local_offsets.end())
                    parent_world += it->second[f];
                a = a->parent ? target.find_bone(*a->parent) : nullptr;
            }
            offsets[f] = world[f] - parent_world - bone->rest_rotation;
        }
        local_offsets[dst] = unwrap_angles(offsets);
    }

    AnimationClip clip;
    clip.name = name;
    clip.skeleton_id = target.skeleton_id;
    clip.duration = dt * static_cast<double>(frame_count - 1);
    clip.fps = 1.0 / dt;

    for (const auto& [src, dst] : jmap.entries) {
        Timeline tl;
        tl.bone = dst;
        tl.property = Property::Rotation;
        tl.keys.reserve(frame_count);
        const auto& offsets = local_offsets.at(dst);
        for (std::size_t f = 0; f < frame_count; ++f)
            tl.keys.push_back({dt * static_cast<double>(f), offsets[f]});
        clip.timelines.push_back(std::move(tl));
    }

    // Root bone translation from the projected root position, rest-anchored
    // at frame 0.
    if (const std::string* root_bone = jmap.bone_for(doc.root.name)) {
        Timeline tx, ty;
        tx.bone = ty.bone = *root_bone;
        tx.property = Property::TranslateX;
        ty.property = Property::TranslateY;
        Vec2 origin = projected_root[0];
        for (std::size_t f = 0; f < frame_count; ++f) {
            Vec2 p = (projected_root[f] - origin) * jmap.scale;
            double t = dt * static_cast<double>(f);
            tx.keys.push_back({t, p.x});
            ty.keys.push_back({t, p.y});
        }
        clip.timelines.push_back(std::move(tx));
        clip.timelines.push_back(std::move(ty));
    }
    return clip;
}

namespace {

// Shared greedy pass over one or two value tracks with common key times.
// Returns surviving key indices.
std::vector<std::size_t> decimate_indices(const std::vector<Key>& keys,
                                          const std::vector<const std::vector<Key>*>& tracks,
                                          Interpolation interp, double tolerance) {
    std::vector<std::size_t> kept;
    kept.push_back(0);
    std::size_t left = 0;
    for (std::size_t i = 1; i + 1 < keys.size(); ++i) {
        // Try skipping keys (left, i]: every skipped key must replay within
        // tolerance from survivors `left` and `i + 1`.
        bool removable = true;
        for (std::size_t j = left + 1; j <= i && removable; ++j) {
            for (const auto* track : tracks) {
                double replay;
                if (interp == Interpolation::Stepped) {
                    replay = (*track)[left].value;
                } else {
                    double u = (keys[j].time - keys[left].time) /
                               (keys[i + 1].time - keys[left].time);
                    replay = (*track)[left].value +
                             ((*track)[i + 1].value - (*track)[left].value) * u;
                }
                if (std::abs(replay - (*track)[j].value) > tolerance) {
                    removable = false;
                    break;
                }
            }
        }
        if (!removable) {
            kept.push_back(i);
            left = i;
        }
    }
    if (keys.size() > 1) kept.push_back(keys.size() - 1);
    return kept;
}

}  // namespace

Timeline decimate_keyframes(const Timeline& timeline, double tolerance) {
    if (tolerance < 0)
        throw Error("InvalidTolerance", "tolerance must be >= 0");
    if (tolerance == 0.0 || timeline.keys.size() <= 2) return timeline;

    auto kept = decimate_indices(timeline.keys, {&timeline.keys},
                                 timeline.interpolation, tolerance);
    Timeline out;
    out.bone = timeline.bone;
    out.property = timeline.property;
    out.interpolation = timeline.interpolation;
    out.keys.reserve(kept.size());
    for (std::size_t i : kept) out.keys.push_back(timeline.keys[i]);
    return out;
}

AnimationClip decimate_clip(const AnimationClip& clip, double tolerance_degrees,
                            double tolerance_pixels) {
    AnimationClip out = clip;
    out.timelines.clear();

    // Translate pairs on the same bone are decimated with a shared survivor
    // set so export can merge them into one keyed track.
    std::map<std::string, std::pair<const Timeline*, const Timeline*>> pairs;
    for (const auto& tl : clip.timelines) {
        if (tl.property == Property::TranslateX) pairs[tl.bone].first = &tl;
        if (tl.property == Property::TranslateY) pairs[tl.bone].second = &tl;
    }

    for (const auto& tl : clip.timelines) {
        if (tl.property == Property::Rotation) {
            out.timelines.push_back(decimate_keyframes(tl, tolerance_degrees));
            continue;
        }
        auto& pair = pairs[tl.bone];
        if (pair.first && pair.second && pair.first->keys.size() == pair.second->keys.size()) {
            if (tl.property == Property::TranslateY) continue;  // handled with X
            if (tolerance_pixels == 0.0 || tl.keys.size() <= 2) {
                out.timelines.push_back(*pair.first);
                out.timelines.push_back(*pair.second);
                continue;
            }
            auto kept = decimate_indices(pair.first->keys,
                                         {&pair.first->keys, &pair.second->keys},
                                         tl.interpolation, tolerance_pixels);
            for (const Timeline* src : {pair.first, pair.second}) {
                Timeline d;
                d.bone = src->bone;
                d.property = src->property;
                d.interpolation = src->interpolation;
                for (std::size_t i : kept) d.keys.push_back(src->keys[i]);
                out.timelines.push_back(std::move(d));
            }
        } else {
            out.timelines.push_back(decimate_keyframes(tl, tolerance_pixels));
        }
    }
    return out;
}

rig::PoseValues sample_clip(const AnimationClip& clip, double time, SampleMode mode) {
    double t = time;
    if (clip.duration > 0) {
        if (mode == SampleMode::Loop) {
            t = std::fmod(t, clip.duration);
            if (t < 0) t += clip.duration;
        } else {
            t = std::clamp(t, 0.0, clip.duration);
        }
    } else {
        t = 0.0;
    }

    rig::PoseValues pose;
    for (const auto& tl : clip.timelines) {
        double v = tl.sample(t);
        switch (tl.property) {
            case Property::Rotation: pose.rotation[tl.bone] = v; break;
            case Property::TranslateX: pose.translation[tl.bone].x = v; break;
            case Property::TranslateY: pose.translation[tl.bone].y = v; break;
        }
    }
    return pose;
}

}  // namespace mocap2d::retarget
