#include "mocap2d/interchange.hpp"

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <set>

#include <json.hpp>

namespace mocap2d::interchange {

using nlohmann::json;
using nlohmann::ordered_json;

namespace {

// Up to 6 fractional digits; rounding keeps round trips within 1e-6 and
// lets the serializer print the shortest representation.
double r6(double v) {
    double r = std::round(v * 1e6) / 1e6;
    return r == 0.0 ? 0.0 : r;  // avoid -0
}

[[noreturn]] void schema_error(const std::string& path, const std::string& msg) {
    throw Error("SchemaViolation", path + ": " + msg);
}

const json& require(const json& obj, const char* key, const std::string& path) {
    if (!obj.is_object() || !obj.contains(key))
        schema_error(path, std::string("missing key '") + key + "'");
    return obj.at(key);
}

double require_number(const json& obj, const char* key, const std::string& path) {
    const json& v = require(obj, key, path);
    if (!v.is_number()) schema_error(path + "/" + key, "expected a number");
    return v.get<double>();
}

std::string require_string(const json& obj, const char* key, const std::string& path) {
    const json& v = require(obj, key, path);
    if (!v.is_string()) schema_error(path + "/" + key, "expected a string");
    return v.get<std::string>();
}

json parse_json(const std::string& text) {
    json doc = json::parse(text, nullptr, false);
    if (doc.is_discarded())
        schema_error("/", "not valid JSON");
    return doc;
}

void raise_validation(const rig::ValidationReport& report) {
    if (report.empty()) return;
    static const std::set<std::string> reference_codes = {
        "UnknownParent",         "UnknownBoneInSlot",  "UnknownAttachment",
        "UnknownBoneInWeights",  "UnknownSlotInSkin",  "UnknownAttachmentInSkin",
    };
    std::string msg;
    for (const auto& v : report) {
        if (!msg.empty()) msg += "; ";
        msg += v.code + " at " + v.path + " (" + v.message + ")";
    }
    const std::string& name =
        reference_codes.count(report.front().code) ? "InvalidReference" : "SchemaViolation";
    throw Error(name, msg);
}

Affine2 inverse(const Affine2& a) {
    double det = a.m00 * a.m11 - a.m01 * a.m10;
    Affine2 inv;
    inv.m00 = a.m11 / det;
    inv.m01 = -a.m01 / det;
    inv.m10 = -a.m10 / det;
    inv.m11 = a.m00 / det;
    inv.tx = -(inv.m00 * a.tx + inv.m01 * a.ty);
    inv.ty = -(inv.m10 * a.tx + inv.m11 * a.ty);
    return inv;
}

}  // namespace

rig::Rig load_rig(const std::string& text) {
    json doc = parse_json(text);
    rig::Rig r;
    r.skeleton_id = require_string(doc, "skeleton_id", "/");

    const json& bones = require(doc, "bones", "/");
    if (!bones.is_array()) schema_error("/bones", "expected an array");
    for (std::size_t i = 0; i < bones.size(); ++i) {
        const json& b = bones[i];
        std::string path = "/bones/" + std::to_string(i);
        rig::Bone bone;
        bone.name = require_string(b, "name", path);
        if (b.contains("parent") && !b.at("parent").is_null())
            bone.parent = b.at("parent").get<std::string>();
        bone.length = b.value("length", 0.0);
        bone.rest_rotation = b.value("rotation", 0.0);
        bone.rest_translation = {b.value("x", 0.0), b.value("y", 0.0)};
        bone.rest_scale = {b.value("scaleX", 1.0), b.value("scaleY", 1.0)};
        r.bones.push_back(std::move(bone));
    }

    if (doc.contains("slots")) {
        const json& slots = doc.at("slots");
        if (!slots.is_array()) schema_error("/slots", "expected an array");
        for (std::size_t i = 0; i < slots.size(); ++i) {
            const json& s = slots[i];
            std::string path = "/slots/" + std::to_string(i);
            rig::Slot slot;
            slot.name = require_string(s, "name", path);
            slot.bone = require_string(s, "bone", path);
            slot.draw_order_index = static_cast<int>(require_number(s, "order", path));
            if (s.contains("attachment") && !s.at("attachment").is_null())
                slot.active_attachment = s.at("attachment").get<std::string>();
            r.slots.push_back(std::move(slot));
        }
    }

    if (doc.contains("attachments")) {
        const json& attachments = doc.at("attachments");
        if (!attachments.is_array()) schema_error("/attachments", "expected an array");
        for (std::size_t i = 0; i < attachments.size(); ++i) {
            const json& a = attachments[i];
            std::string path = "/attachments/" + std::to_string(i);
            rig::MeshAttachment mesh;
            mesh.name = require_string(a, "name", path);
            mesh.texture_ref = require_string(a, "texture", path);
            for (const auto& v : require(a, "vertices", path))
                mesh.vertices.push_back({v.at(0).get<double>(), v.at(1).get<double>()});
            for (const auto& t : require(a, "triangles", path))
                mesh.triangles.push_back(
                    {t.at(0).get<int>(), t.at(1).get<int>(), t.at(2).get<int>()});
            for (const auto& uv : require(a, "uvs", path))
                mesh.uvs.push_back({uv.at(0).get<double>(), uv.at(1).get<double>()});
            for (const auto& vertex : require(a, "weights", path)) {
                std::vector<rig::VertexWeight> ws;
                for (const auto& w : vertex)
                    ws.push_back({w.at(0).get<std::string>(), w.at(1).get<double>()});
                mesh.weights.push_back(std::move(ws));
            }
            r.attachments.push_back(std::move(mesh));
        }
    }

    const json& skins = require(doc, "skins", "/");
    if (!skins.is_array()) schema_error("/skins", "expected an array");
    for (std::size_t i = 0; i < skins.size(); ++i) {
        const json& s = skins[i];
        std::string path = "/skins/" + std::to_string(i);
        rig::Skin skin;
        skin.name = require_string(s, "name", path);
        for (const auto& [slot, attachment] : require(s, "entries", path).items())
            skin.entries[slot] = attachment.get<std::string>();
        r.skins.push_back(std::move(skin));
    }
    if (!r.find_skin("default"))
        schema_error("/skins", "no skin named 'default'");

    if (doc.contains("textures"))
        for (const auto& [name, p] : doc.at("textures").items())
            r.textures[name] = p.get<std::string>();

    raise_validation(rig::normalize_weights(r));
    return r;
}

std::string save_rig(const rig::Rig& r) {
    ordered_json doc;
    doc["skeleton_id"] = r.skeleton_id;
    doc["bones"] = ordered_json::array();
    for (const auto& b : r.bones) {
        ordered_json jb;
        jb["name"] = b.name;
        if (b.parent) jb["parent"] = *b.parent;
        jb["length"] = r6(b.length);
        jb["rotation"] = r6(b.rest_rotation);
        jb["x"] = r6(b.rest_translation.x);
        jb["y"] = r6(b.rest_translation.y);
        jb["scaleX"] = r6(b.rest_scale.x);
        jb["scaleY"] = r6(b.rest_scale.y);
        doc["bones"].push_back(std::move(jb));
    }
    doc["slots"] = ordered_json::array();
    for (const auto& s : r.slots) {
        ordered_json js;
        js["name"] = s.name;
        js["bone"] = s.bone;
        js["order"] = s.draw_order_index;
        if (s.active_attachment) js["attachment"] = *s.active_attachment;
        doc["slots"].push_back(std::move(js));
    }
    doc["attachments"] = ordered_json::array();
    for (const auto& a : r.attachments) {
        ordered_json ja;
        ja["name"] = a.name;
        ja["texture"] = a.texture_ref;
        ja["vertices"] = ordered_json::array();
        for (const auto& v : a.vertices) ja["vertices"].push_back({r6(v.x), r6(v.y)});
        ja["triangles"] = ordered_json::array();
        for (const auto& t : a.triangles) ja["triangles"].push_back({t[0], t[1], t[2]});
        ja["uvs"] = ordered_json::array();
        for (const auto& uv : a.uvs) ja["uvs"].push_back({r6(uv.x), r6(uv.y)});
        ja["weights"] = ordered_json::array();
        for (const auto& vertex : a.weights) {
            ordered_json jv = ordered_json::array();
            for (const auto& w : vertex) jv.push_back({w.bone, r6(w.weight)});
            ja["weights"].push_back(std::move(jv));
        }
        doc["attachments"].push_back(std::move(ja));
    }
    doc["skins"] = ordered_json::array();
    for (const auto& s : r.skins) {
        ordered_json js;
        js["name"] = s.name;
        js["entries"] = ordered_json::object();
        for (const auto& [slot, attachment] : s.entries) js["entries"][slot] = attachment;
        doc["skins"].push_back(std::move(js));
    }
    doc["textures"] = ordered_json::object();
    for (const auto& [name, path] : r.textures) doc["textures"][name] = path;
    return doc.dump(2) + "\n";
}

namespace {

retarget::Property property_from_name(const std::string& s, const std::string& path) {
    if (s == "rotation") return retarget::Property::Rotation;
    if (s == "translate_x") return retarget::Property::TranslateX;
    if (s == "translate_y") return retarget::Property::TranslateY;
    schema_error(path, "unknown property '" + s + "'");
}

}  // namespace

retarget::AnimationClip load_clip(const std::string& text) {
    json doc = parse_json(text);
    retarget::AnimationClip clip;
    clip.name = require_string(doc, "name", "/");
    clip.skeleton_id = require_string(doc, "skeleton_id", "/");
    clip.duration = require_number(doc, "duration", "/");
    clip.fps = require_number(doc, "fps", "/");
    const json& timelines = require(doc, "timelines", "/");
    if (!timelines.is_array()) schema_error("/timelines", "expected an array");
    for (std::size_t i = 0; i < timelines.size(); ++i) {
        const json& t = timelines[i];
        std::string path = "/timelines/" + std::to_string(i);
        retarget::Timeline tl;
        tl.bone = require_string(t, "bone", path);
        tl.property = property_from_name(require_string(t, "property", path), path);
        std::string interp = t.value("interpolation", "linear");
        if (interp == "linear") tl.interpolation = retarget::Interpolation::Linear;
        else if (interp == "stepped") tl.interpolation = retarget::Interpolation::Stepped;
        else schema_error(path, "unknown interpolation '" + interp + "'");
        double prev = -1.0;
        for (const auto& k : require(t, "keys", path)) {
            double time = k.at(0).get<double>();
            if (time <= prev && !tl.keys.empty())
                schema_error(path + "/keys", "key times must be strictly increasing");
            prev = time;
            tl.keys.push_back({time, k.at(1).get<double>()});
        }
        clip.timelines.push_back(std::move(tl));
    }
    return clip;
}

std::string save_clip(const retarget::AnimationClip& clip) {
    ordered_json doc;
    doc["name"] = clip.name;
    doc["skeleton_id"] = clip.skeleton_id;
    doc["duration"] = r6(clip.duration);
    doc["fps"] = r6(clip.fps);
    doc["timelines"] = ordered_json::array();
    for (const auto& tl : clip.timelines) {
        ordered_json jt;
        jt["bone"] = tl.bone;
        jt["property"] = retarget::property_name(tl.property);
        jt["interpolation"] =
            tl.interpolation == retarget::Interpolation::Stepped ? "stepped" : "linear";
        jt["keys"] = ordered_json::array();
        for (const auto& k : tl.keys) jt["keys"].push_back({r6(k.time), r6(k.value)});
        doc["timelines"].push_back(std::move(jt));
    }
    return doc.dump(2) + "\n";
}

namespace {

constexpr const char* kSpineVersion = "3.8";

}  // namespace

std::string export_spine_json(const rig::Rig& r,
                              const std::vector<retarget::AnimationClip>& clips) {
    for (const auto& c : clips)
        if (c.skeleton_id != r.skeleton_id)
            throw Error("SkeletonMismatch",
                        "clip '" + c.name + "' targets skeleton '" + c.skeleton_id +
                            "', rig is '" + r.skeleton_id + "'");
    double fps = clips.empty() ? 30.0 : clips.front().fps;
    for (const auto& c : clips)
        if (std::abs(c.fps - fps) > 1e-9)
            throw Error("UnsupportedFeature",
                        "mixed clip fps in one document (clip '" + c.name + "')");

    auto rest_world = rig::world_transforms(r, rig::PoseValues{});

    ordered_json doc;
    doc["skeleton"] = {{"hash", r.skeleton_id},
                       {"spine", kSpineVersion},
                       {"fps", r6(fps)},
                       {"images", ""}};

    // Bone array index is the reference space for weighted vertices.
    std::map<std::string, int> bone_index;
    doc["bones"] = ordered_json::array();
    for (const auto& b : r.bones) {
        bone_index[b.name] = static_cast<int>(doc["bones"].size());
        ordered_json jb;
        jb["name"] = b.name;
        if (b.parent) jb["parent"] = *b.parent;
        jb["length"] = r6(b.length);
        jb["rotation"] = r6(b.rest_rotation);
        jb["x"] = r6(b.rest_translation.x);
        jb["y"] = r6(b.rest_translation.y);
        jb["scaleX"] = r6(b.rest_scale.x);
        jb["scaleY"] = r6(b.rest_scale.y);
        doc["bones"].push_back(std::move(jb));
    }

    // Spine slot order is the draw order.
    std::vector<const rig::Slot*> slots;
    for (const auto& s : r.slots) slots.push_back(&s);
    std::sort(slots.begin(), slots.end(),
              [](const rig::Slot* a, const rig::Slot* b) {
                  return a->draw_order_index < b->draw_order_index;
              });
    doc["slots"] = ordered_json::array();
    for (const rig::Slot* s : slots) {
        ordered_json js;
        js["name"] = s->name;
        js["bone"] = s->bone;
        if (s->active_attachment) js["attachment"] = *s->active_attachment;
        doc["slots"].push_back(std::move(js));
    }

    doc["skins"] = ordered_json::array();
    for (const auto& skin : r.skins) {
        ordered_json js;
        js["name"] = skin.name;
        js["attachments"] = ordered_json::object();
        for (const auto& [slot, attachment_name] : skin.entries) {
            const rig::MeshAttachment* mesh = r.find_attachment(attachment_name);
            if (!mesh)
                throw Error("UnsupportedFeature",
                            "skin '" + skin.name + "' references missing attachment '" +
                                attachment_name + "'");
            ordered_json jm;
            jm["type"] = "mesh";
            jm["path"] = mesh->texture_ref;
            ordered_json uvs = ordered_json::array();
            for (const auto& uv : mesh->uvs) {
                uvs.push_back(r6(uv.x));
                uvs.push_back(r6(uv.y));
            }
            jm["uvs"] = std::move(uvs);
            ordered_json tris = ordered_json::array();
            for (const auto& t : mesh->triangles)
                for (int idx : t) tris.push_back(idx);
            jm["triangles"] = std::move(tris);
            // Weighted encoding: [boneCount, (boneIndex, x, y, weight)*] per
            // vertex, with x/y in the bone's setup-pose space.
            ordered_json verts = ordered_json::array();
            for (std::size_t v = 0; v < mesh->vertices.size(); ++v) {
                const auto& ws = mesh->weights[v];
                verts.push_back(static_cast<int>(ws.size()));
                for (const auto& w : ws) {
                    Vec2 local = inverse(rest_world.at(w.bone)).apply(mesh->vertices[v]);
                    verts.push_back(bone_index.at(w.bone));
                    verts.push_back(r6(local.x));
                    verts.push_back(r6(local.y));
                    verts.push_back(r6(w.weight));
                }
            }
            jm["vertices"] = std::move(verts);
            jm["hull"] = 0;
            js["attachments"][slot][attachment_name] = std::move(jm);
        }
        doc["skins"].push_back(std::move(js));
    }

    doc["animations"] = ordered_json::object();
    for (const auto& clip : clips) {
        ordered_json bones = ordered_json::object();
        // Group timelines per bone; rotate first, then the translate pair.
        std::map<std::string, const retarget::Timeline*> rotate, tx, ty;
        for (const auto& tl : clip.timelines) {
            switch (tl.property) {
                case retarget::Property::Rotation: rotate[tl.bone] = &tl; break;
                case retarget::Property::TranslateX: tx[tl.bone] = &tl; break;
                case retarget::Property::TranslateY: ty[tl.bone] = &tl; break;
            }
        }
        std::set<std::string> bone_names;
        for (const auto& [b, _] : rotate) bone_names.insert(b);
        for (const auto& [b, _] : tx) bone_names.insert(b);
        for (const auto& [b, _] : ty) bone_names.insert(b);

        for (const auto& name : bone_names) {
            ordered_json jb = ordered_json::object();
            if (auto it = rotate.find(name); it != rotate.end()) {
                const retarget::Timeline& tl = *it->second;
                ordered_json keys = ordered_json::array();
                for (std::size_t k = 0; k < tl.keys.size(); ++k) {
                    ordered_json jk;
                    jk["time"] = r6(tl.keys[k].time);
                    jk["angle"] = r6(tl.keys[k].value);
                    if (tl.interpolation == retarget::Interpolation::Stepped &&
                        k + 1 < tl.keys.size())
                        jk["curve"] = "stepped";
                    keys.push_back(std::move(jk));
                }
                jb["rotate"] = std::move(keys);
            }
            const retarget::Timeline* x = tx.count(name) ? tx.at(name) : nullptr;
            const retarget::Timeline* y = ty.count(name) ? ty.at(name) : nullptr;
            if (x || y) {
                if (!x || !y || x->keys.size() != y->keys.size())
                    throw Error("UnsupportedFeature",
                                "bone '" + name + "' has unpaired translate timelines");
                for (std::size_t k = 0; k < x->keys.size(); ++k)
                    if (std::abs(x->keys[k].time - y->keys[k].time) > 1e-9)
                        throw Error("UnsupportedFeature",
                                    "bone '" + name + "' translate timelines disagree on key times");
                ordered_json keys = ordered_json::array();
                for (std::size_t k = 0; k < x->keys.size(); ++k) {
                    ordered_json jk;
                    jk["time"] = r6(x->keys[k].time);
                    jk["x"] = r6(x->keys[k].value);
                    jk["y"] = r6(y->keys[k].value);
                    if (x->interpolation == retarget::Interpolation::Stepped &&
                        k + 1 < x->keys.size())
                        jk["curve"] = "stepped";
                    keys.push_back(std::move(jk));
                }
                jb["translate"] = std::move(keys);
            }
            bones[name] = std::move(jb);
        }
        doc["animations"][clip.name] = {{"bones", std::move(bones)}};
    }
    return doc.dump(2) + "\n";
}

namespace {

retarget::Interpolation interpolation_of(const json& keys, const std::string& path) {
    bool any_stepped = false, any_linear = false;
    for (std::size_t k = 0; k < keys.size(); ++k) {
        const json& jk = keys[k];
        if (jk.contains("curve")) {
            const json& c = jk.at("curve");
            if (c.is_string() && c.get<std::string>() == "stepped") {
                any_stepped = true;
            } else {
                throw Error("UnsupportedFeature",
                            "bezier curve at " + path + "/" + std::to_string(k));
            }
        } else if (k + 1 < keys.size()) {
            any_linear = true;
        }
    }
    if (any_stepped && any_linear)
        throw Error("UnsupportedFeature", "mixed per-key curves at " + path);
    return any_stepped ? retarget::Interpolation::Stepped : retarget::Interpolation::Linear;
}

}  // namespace

std::pair<rig::Rig, std::vector<retarget::AnimationClip>> import_spine_json(
    const std::string& text) {
    json doc = parse_json(text);
    static const std::set<std::string> supported = {"skeleton", "bones", "slots",
                                                    "skins", "animations"};
    for (const auto& [key, _] : doc.items())
        if (!supported.count(key))
            throw Error("UnsupportedFeature", "section '" + key + "' at /" + key);

    rig::Rig r;
    const json& header = require(doc, "skeleton", "/");
    r.skeleton_id = header.value("hash", "");
    double fps = header.value("fps", 30.0);

    std::vector<std::string> bone_names;
    for (const auto& jb : require(doc, "bones", "/")) {
        rig::Bone b;
        b.name = require_string(jb, "name", "/bones");
        if (jb.contains("parent")) b.parent = jb.at("parent").get<std::string>();
        b.length = jb.value("length", 0.0);
        b.rest_rotation = jb.value("rotation", 0.0);
        b.rest_translation = {jb.value("x", 0.0), jb.value("y", 0.0)};
        b.rest_scale = {jb.value("scaleX", 1.0), jb.value("scaleY", 1.0)};
        bone_names.push_back(b.name);
        r.bones.push_back(std::move(b));
    }

    if (doc.contains("slots")) {
        int order = 0;
        for (const auto& js : doc.at("slots")) {
            rig::Slot s;
            s.name = require_string(js, "name", "/slots");
            s.bone = require_string(js, "bone", "/slots");
            s.draw_order_index = order++;
            if (js.contains("attachment"))
                s.active_attachment = js.at("attachment").get<std::string>();
            r.slots.push_back(std::move(s));
        }
    }

    auto rest_world = rig::world_transforms(r, rig::PoseValues{});

    if (doc.contains("skins")) {
        const json& skins = doc.at("skins");
        if (!skins.is_array())
            throw Error("UnsupportedFeature", "pre-3.8 object-form skins at /skins");
        for (const auto& jskin : skins) {
            rig::Skin skin;
            skin.name = require_string(jskin, "name", "/skins");
            if (jskin.contains("attachments")) {
                for (const auto& [slot, slot_attachments] : jskin.at("attachments").items()) {
                    for (const auto& [att_name, jm] : slot_attachments.items()) {
                        std::string path = "/skins/" + skin.name + "/" + slot + "/" + att_name;
                        std::string type = jm.value("type", "region");
                        if (type != "mesh")
                            throw Error("UnsupportedFeature",
                                        "attachment type '" + type + "' at " + path);
                        skin.entries[slot] = att_name;
                        if (r.find_attachment(att_name)) continue;  // shared mesh

                        rig::MeshAttachment mesh;
                        mesh.name = att_name;
                        mesh.texture_ref = jm.value("path", att_name);
                        const json& uvs = require(jm, "uvs", path);
                        for (std::size_t i = 0; i + 1 < uvs.size(); i += 2)
                            mesh.uvs.push_back(
                                {uvs[i].get<double>(), uvs[i + 1].get<double>()});
                        const json& tris = require(jm, "triangles", path);
                        for (std::size_t i = 0; i + 2 < tris.size(); i += 3)
                            mesh.triangles.push_back({tris[i].get<int>(),
                                                      tris[i + 1].get<int>(),
                                                      tris[i + 2].get<int>()});
                        const json& verts = require(jm, "vertices", path);
                        if (verts.size() == mesh.uvs.size() * 2)
                            throw Error("UnsupportedFeature",
                                        "unweighted mesh vertices at " + path);
                        std::size_t cursor = 0;
                        while (cursor < verts.size()) {
                            int count = verts[cursor++].get<int>();
                            Vec2 rest{0, 0};
                            std::vector<rig::VertexWeight> ws;
                            for (int c = 0; c < count; ++c) {
                                int bi = verts[cursor++].get<int>();
                                double lx = verts[cursor++].get<double>();
                                double ly = verts[cursor++].get<double>();
                                double w = verts[cursor++].get<double>();
                                if (bi < 0 || bi >= static_cast<int>(bone_names.size()))
                                    schema_error(path, "bone index out of range");
                                const std::string& bname =
                                    bone_names[static_cast<std::size_t>(bi)];
                                rest = rest + rest_world.at(bname).apply({lx, ly}) * w;
                                ws.push_back({bname, w});
                            }
                            mesh.vertices.push_back(rest);
                            mesh.weights.push_back(std::move(ws));
                        }
                        r.attachments.push_back(std::move(mesh));
                    }
                }
            }
            r.skins.push_back(std::move(skin));
        }
    }
    if (!r.find_skin("default")) {
        // An empty document may legitimately have no skins; synthesize the
        // default so the rig invariant holds.
        r.skins.insert(r.skins.begin(), rig::Skin{"default", {}});
    }
    for (const auto& a : r.attachments) r.textures[a.texture_ref] = a.texture_ref;

    std::vector<retarget::AnimationClip> clips;
    if (doc.contains("animations")) {
        for (const auto& [clip_name, janim] : doc.at("animations").items()) {
            retarget::AnimationClip clip;
            clip.name = clip_name;
            clip.skeleton_id = r.skeleton_id;
            clip.fps = fps;
            for (const auto& [section, _] : janim.items())
                if (section != "bones")
                    throw Error("UnsupportedFeature",
                                "section '" + section + "' at /animations/" + clip_name +
                                    "/" + section);
            double max_time = 0.0;
            if (janim.contains("bones")) {
                for (const auto& [bone, jtimelines] : janim.at("bones").items()) {
                    for (const auto& [prop, keys] : jtimelines.items()) {
                        std::string path = "/animations/" + clip_name + "/bones/" + bone +
                                           "/" + prop;
                        if (prop == "rotate") {
                            retarget::Timeline tl;
                            tl.bone = bone;
                            tl.property = retarget::Property::Rotation;
                            tl.interpolation = interpolation_of(keys, path);
                            for (const auto& jk : keys) {
                                double t = jk.value("time", 0.0);
                                tl.keys.push_back({t, jk.value("angle", 0.0)});
                                max_time = std::max(max_time, t);
                            }
                            clip.timelines.push_back(std::move(tl));
                        } else if (prop == "translate") {
                            retarget::Timeline x, y;
                            x.bone = y.bone = bone;
                            x.property = retarget::Property::TranslateX;
                            y.property = retarget::Property::TranslateY;
                            x.interpolation = y.interpolation = interpolation_of(keys, path);
                            for (const auto& jk : keys) {
                                double t = jk.value("time", 0.0);
                                x.keys.push_back({t, jk.value("x", 0.0)});
                                y.keys.push_back({t, jk.value("y", 0.0)});
                                max_time = std::max(max_time, t);
                            }
                            clip.timelines.push_back(std::move(x));
                            clip.timelines.push_back(std::move(y));
                        } else {
                            throw Error("UnsupportedFeature",
                                        "timeline '" + prop + "' at " + path);
                        }
                    }
                }
            }
            clip.duration = max_time;
            clips.push_back(std::move(clip));
        }
    }
    raise_validation(rig::normalize_weights(r));
    return {std::move(r), std::move(clips)};
}

SegmentationManifest load_segmentation_manifest(const std::string& text,
                                                const std::string& base_dir) {
    json doc = parse_json(text);
    static const std::set<std::string> known_labels = {
        "head", "torso", "left_arm", "right_arm", "left_leg", "right_leg", "clothing"};

    SegmentationManifest manifest;
    std::set<std::string> labels;
    std::set<int> z_orders;
    const json& regions = require(doc, "regions", "/");
    if (!regions.is_array()) schema_error("/regions", "expected an array");
    for (std::size_t i = 0; i < regions.size(); ++i) {
        const json& jr = regions[i];
        std::string path = "/regions/" + std::to_string(i);
        SegmentationRegion region;
        region.label = require_string(jr, "label", path);
        bool accessory = region.label.rfind("accessory:", 0) == 0;
        if (!accessory && !known_labels.count(region.label))
            schema_error(path + "/label", "unknown label '" + region.label + "'");
        if (!accessory && !labels.insert(region.label).second)
            throw Error("DuplicateLabel", "label '" + region.label + "' at " + path);
        region.image = require_string(jr, "image", path);
        const json& anchor = require(jr, "anchor", path);
        region.anchor = {anchor.at(0).get<double>(), anchor.at(1).get<double>()};
        region.z_order = static_cast<int>(require_number(jr, "z_order", path));
        if (!z_orders.insert(region.z_order).second)
            schema_error(path + "/z_order", "duplicate z_order " +
                                               std::to_string(region.z_order));
        std::filesystem::path img = std::filesystem::path(base_dir) / region.image;
        if (!std::filesystem::exists(img))
            throw Error("MissingImage", "image '" + img.string() + "' at " + path);
        manifest.regions.push_back(std::move(region));
    }
    return manifest;
}

rig::Rig scaffold_rig(const SegmentationManifest& manifest,
                      const std::string& skeleton_id) {
    rig::Rig r;
    r.skeleton_id = skeleton_id;
    r.bones.push_back({"root", std::nullopt, 0.0, 0.0, {0, 0}, {1, 1}});

    std::vector<const SegmentationRegion*> ordered;
    for (const auto& region : manifest.regions) ordered.push_back(&region);
    std::sort(ordered.begin(), ordered.end(),
              [](const SegmentationRegion* a, const SegmentationRegion* b) {
                  return a->z_order < b->z_order;
              });

    rig::Skin default_skin;
    default_skin.name = "default";
    int order = 0;
    for (const SegmentationRegion* region : ordered) {
        std::string bone_name = region->label;
        std::replace(bone_name.begin(), bone_name.end(), ':', '_');

        r.bones.push_back({bone_name, "root", 0.0, 0.0, region->anchor, {1, 1}});

        rig::MeshAttachment quad;
        quad.name = bone_name + "_mesh";
        quad.texture_ref = bone_name;
        quad.vertices = {{region->anchor.x - 50, region->anchor.y - 50},
                         {region->anchor.x + 50, region->anchor.y - 50},
                         {region->anchor.x + 50, region->anchor.y + 50},
                         {region->anchor.x - 50, region->anchor.y + 50}};
        quad.uvs = {{0, 0}, {1, 0}, {1, 1}, {0, 1}};
        quad.triangles = {{0, 1, 2}, {0, 2, 3}};
        quad.weights.assign(4, {{bone_name, 1.0}});
        r.attachments.push_back(std::move(quad));

        r.slots.push_back({bone_name, bone_name, order++, bone_name + "_mesh"});
        default_skin.entries[bone_name] = bone_name + "_mesh";
        r.textures[bone_name] = region->image;
    }
    r.skins.push_back(std::move(default_skin));
    return r;
}

}  // namespace mocap2d::interchange
