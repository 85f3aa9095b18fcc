#include "mocap2d/rig.hpp"

#include <algorithm>
#include <cmath>
#include <set>

namespace mocap2d::rig {

const Bone* Rig::find_bone(const std::string& name) const {
    for (const auto& b : bones)
        if (b.name == name) return &b;
    return nullptr;
}

const Slot* Rig::find_slot(const std::string& name) const {
    for (const auto& s : slots)
        if (s.name == name) return &s;
    return nullptr;
}

const MeshAttachment* Rig::find_attachment(const std::string& name) const {
    for (const auto& a : attachments)
        if (a.name == name) return &a;
    return nullptr;
}

const Skin* Rig::find_skin(const std::string& name) const {
    for (const auto& s : skins)
        if (s.name == name) return &s;
    return nullptr;
}

namespace {

void check_bones(const Rig& rig, ValidationReport& report) {
    std::set<std::string> names;
    int roots = 0;
    for (std::size_t i = 0; i < rig.bones.size(); ++i) {
        const Bone& b = rig.bones[i];
        std::string path = "/bones/" + std::to_string(i);
        if (!names.insert(b.name).second)
            report.push_back({"DuplicateBoneName", path, "bone '" + b.name + "' declared twice"});
        if (!b.parent) ++roots;
        if (b.length < 0)
            report.push_back({"NegativeLength", path, "bone '" + b.name + "' has negative length"});
    }
    for (std::size_t i = 0; i < rig.bones.size(); ++i) {
        const Bone& b = rig.bones[i];
        if (b.parent && !rig.find_bone(*b.parent))
            report.push_back({"UnknownParent", "/bones/" + std::to_string(i),
                              "bone '" + b.name + "' references unknown parent '" + *b.parent + "'"});
    }
    if (!rig.bones.empty() && roots == 0)
        report.push_back({"MissingRoot", "/bones", "no root bone"});
    if (roots > 1)
        report.push_back({"MultipleRoots", "/bones", std::to_string(roots) + " root bones"});
    if (rig.bones.empty())
        report.push_back({"MissingRoot", "/bones", "rig has no bones"});

    // Cycle check: walk parents with a step bound.
    for (std::size_t i = 0; i < rig.bones.size(); ++i) {
        const Bone* b = &rig.bones[i];
        std::size_t steps = 0;
        while (b && b->parent && steps <= rig.bones.size()) {
            b = rig.find_bone(*b->parent);
            ++steps;
        }
        if (steps > rig.bones.size())
            report.push_back({"CycleDetected", "/bones/" + std::to_string(i),
                              "bone '" + rig.bones[i].name + "' is part of a parent cycle"});
    }
}

void check_slots(const Rig& rig, ValidationReport& report) {
    std::set<std::string> names;
    std::set<int> orders;
    for (std::size_t i = 0; i < rig.slots.size(); ++i) {
        const Slot& s = rig.slots[i];
        std::string path = "/slots/" + std::to_string(i);
        if (!names.insert(s.name).second)
            report.push_back({"DuplicateSlotName", path, "slot '" + s.name + "' declared twice"});
        if (!rig.find_bone(s.bone))
            report.push_back({"UnknownBoneInSlot", path,
                              "slot '" + s.name + "' references unknown bone '" + s.bone + "'"});
        if (s.active_attachment && !rig.find_attachment(*s.active_attachment))
            report.push_back({"UnknownAttachment", path,
                              "slot '" + s.name + "' references unknown attachment '" +
                                  *s.active_attachment + "'"});
        orders.insert(s.draw_order_index);
        if (s.draw_order_index < 0 || s.draw_order_index >= static_cast<int>(rig.slots.size()))
            report.push_back({"DrawOrderNotPermutation", path,
                              "draw_order_index " + std::to_string(s.draw_order_index) +
                                  " outside 0.." + std::to_string(rig.slots.size() - 1)});
    }
    if (orders.size() != rig.slots.size())
        report.push_back({"DrawOrderNotPermutation", "/slots",
                          "draw_order_index values are not a permutation"});
}

void check_attachments(const Rig& rig, ValidationReport& report) {
    std::set<std::string> names;
    for (std::size_t i = 0; i < rig.attachments.size(); ++i) {
        const MeshAttachment& a = rig.attachments[i];
        std::string path = "/attachments/" + std::to_string(i);
        if (!names.insert(a.name).second)
            report.push_back({"DuplicateAttachmentName", path,
                              "attachment '" + a.name + "' declared twice"});
        if (a.uvs.size() != a.vertices.size())
            report.push_back({"UvCountMismatch", path,
                              "attachment '" + a.name + "' has " + std::to_string(a.uvs.size()) +
                                  " uvs for " + std::to_string(a.vertices.size()) + " vertices"});
        if (a.weights.size() != a.vertices.size())
            report.push_back({"WeightCountMismatch", path,
                              "attachment '" + a.name + "' has " + std::to_string(a.weights.size()) +
                                  " weight lists for " + std::to_string(a.vertices.size()) +
                                  " vertices"});
        for (std::size_t t = 0; t < a.triangles.size(); ++t)
            for (int idx : a.triangles[t])
                if (idx < 0 || idx >= static_cast<int>(a.vertices.size()))
                    report.push_back({"TriangleIndexOutOfRange",
                                      path + "/triangles/" + std::to_string(t),
                                      "index " + std::to_string(idx) + " out of range"});
        for (std::size_t u = 0; u < a.uvs.size(); ++u)
            if (a.uvs[u].x < 0 || a.uvs[u].x > 1 || a.uvs[u].y < 0 || a.uvs[u].y > 1)
                report.push_back({"UvOutOfRange", path + "/uvs/" + std::to_string(u),
                                  "uv outside [0,1]"});
        for (std::size_t v = 0; v < a.weights.size(); ++v) {
            double sum = 0;
            for (const auto& w : a.weights[v]) {
                sum += w.weight;
                if (w.weight < 0)
                    report.push_back({"NegativeWeight", path + "/weights/" + std::to_string(v),
                                      "negative weight on bone '" + w.bone + "'"});
                if (!rig.find_bone(w.bone))
                    report.push_back({"UnknownBoneInWeights",
                                      path + "/weights/" + std::to_string(v),
                                      "unknown bone '" + w.bone + "'"});
            }
            if (std::abs(sum - 1.0) > 1e-6)
                report.push_back({"WeightSumViolation", path + "/weights/" + std::to_string(v),
                                  "attachment '" + a.name + "' vertex " + std::to_string(v) +
                                      " weights sum to " + std::to_string(sum)});
        }
    }
}

void check_skins(const Rig& rig, ValidationReport& report) {
    if (!rig.find_skin("default"))
        report.push_back({"MissingDefaultSkin", "/skins", "no skin named 'default'"});
    std::set<std::string> names;
    for (std::size_t i = 0; i < rig.skins.size(); ++i) {
        const Skin& s = rig.skins[i];
        std::string path = "/skins/" + std::to_string(i);
        if (!names.insert(s.name).second)
            report.push_back({"DuplicateSkinName", path, "skin '" + s.name + "' declared twice"});
        for (const auto& [slot, attachment] : s.entries) {
            if (!rig.find_slot(slot))
                report.push_back({"UnknownSlotInSkin", path,
                                  "skin '" + s.name + "' references unknown slot '" + slot + "'"});
            if (!rig.find_attachment(attachment))
                report.push_back({"UnknownAttachmentInSkin", path,
                                  "skin '" + s.name + "' references unknown attachment '" +
                                      attachment + "'"});
        }
    }
}

Affine2 local_transform(const Bone& b, const PoseValues& pose) {
    Vec2 t = b.rest_translation;
    double r = b.rest_rotation;
    if (auto it = pose.translation.find(b.name); it != pose.translation.end())
        t = t + it->second;
    if (auto it = pose.rotation.find(b.name); it != pose.rotation.end())
        r += it->second;
    return Affine2::translation(t) * Affine2::rotation(r) * Affine2::scale(b.rest_scale);
}

}  // namespace

ValidationReport validate(const Rig& rig) {
    ValidationReport report;
    check_bones(rig, report);
    check_slots(rig, report);
    check_attachments(rig, report);
    check_skins(rig, report);
    return report;
}

ValidationReport normalize_weights(Rig& rig) {
    for (auto& a : rig.attachments) {
        for (auto& vertex : a.weights) {
            double sum = 0;
            for (const auto& w : vertex) sum += w.weight;
            if (std::abs(sum - 1.0) > 1e-6 && sum >= 0.9 && sum <= 1.1) {
                for (auto& w : vertex) w.weight /= sum;
            }
        }
    }
    return validate(rig);
}

std::map<std::string, Affine2> world_transforms(const Rig& rig, const PoseValues& pose) {
    for (const auto& [name, _] : pose.rotation)
        if (!rig.find_bone(name))
            throw Error("UnknownBoneInPose", "pose rotates unknown bone '" + name + "'");
    for (const auto& [name, _] : pose.translation)
        if (!rig.find_bone(name))
            throw Error("UnknownBoneInPose", "pose translates unknown bone '" + name + "'");

    std::map<std::string, Affine2> world;
    // Bones may be listed in any order; resolve until fixpoint.
    std::size_t resolved = 0;
    while (resolved < rig.bones.size()) {
        std::size_t before = resolved;
        for (const auto& b : rig.bones) {
            if (world.count(b.name)) continue;
            Affine2 parent = Affine2::identity();
            if (b.parent) {
                auto it = world.find(*b.parent);
                if (it == world.end()) continue;
                parent = it->second;
            }
            world[b.name] = parent * local_transform(b, pose);
            ++resolved;
        }
        if (resolved == before)
            throw Error("CycleDetected", "bone hierarchy contains a cycle or missing parent");
    }
    return world;
}

std::vector<Vec2> skin_vertices(const Rig& rig, const PoseValues& pose,
                                const std::string& attachment) {
    const MeshAttachment* mesh = rig.find_attachment(attachment);
    if (!mesh)
        throw Error("UnknownAttachment", "no attachment named '" + attachment + "'");

    auto posed = world_transforms(rig, pose);
    auto rest = world_transforms(rig, PoseValues{});

    // Per bone: posed world * inverse(rest world).
    std::map<std::string, Affine2> deform;
    for (const auto& [name, rest_xf] : rest) {
        double det = rest_xf.m00 * rest_xf.m11 - rest_xf.m01 * rest_xf.m10;
        Affine2 inv;
        inv.m00 = rest_xf.m11 / det;
        inv.m01 = -rest_xf.m01 / det;
        inv.m10 = -rest_xf.m10 / det;
        inv.m11 = rest_xf.m00 / det;
        inv.tx = -(inv.m00 * rest_xf.tx + inv.m01 * rest_xf.ty);
        inv.ty = -(inv.m10 * rest_xf.tx + inv.m11 * rest_xf.ty);
        deform[name] = posed.at(name) * inv;
    }

    std::vector<Vec2> out;
    out.reserve(mesh->vertices.size());
    for (std::size_t v = 0; v < mesh->vertices.size(); ++v) {
        Vec2 p = mesh->vertices[v];
        Vec2 acc{0, 0};
        for (const auto& w : mesh->weights[v])
            acc = acc + deform.at(w.bone).apply(p) * w.weight;
        out.push_back(acc);
    }
    return out;
}

Rig attach_skin(const Rig& rig, const std::string& skin_name) {
    const Skin* skin = rig.find_skin(skin_name);
    if (!skin)
        throw Error("UnknownSkin", "no skin named '" + skin_name + "'");
    const Skin* fallback = rig.find_skin("default");

    Rig out = rig;
    for (auto& slot : out.slots) {
        auto it = skin->entries.find(slot.name);
        if (it != skin->entries.end()) {
            slot.active_attachment = it->second;
        } else if (fallback) {
            auto fit = fallback->entries.find(slot.name);
            if (fit != fallback->entries.end())
                slot.active_attachment = fit->second;
        }
    }
    return out;
}

}  // namespace mocap2d::rig
