#include "mocap2d/plane_select.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <sstream>

namespace mocap2d::plane {

const char* plane_name(ProjectionPlane p) {
    return p == ProjectionPlane::Frontal ? "Frontal" : "Side";
}

const char* class_name(BodyPartClass c) {
    return c == BodyPartClass::HeadTorso ? "HeadTorso" : "Limb";
}

ClassRules default_class_rules() {
    return {
        {"Head", BodyPartClass::HeadTorso},  {"Neck", BodyPartClass::HeadTorso},
        {"Spine", BodyPartClass::HeadTorso}, {"Hips", BodyPartClass::HeadTorso},
        {"Chest", BodyPartClass::HeadTorso}, {"Arm", BodyPartClass::Limb},
        {"Leg", BodyPartClass::Limb},        {"Hand", BodyPartClass::Limb},
        {"Foot", BodyPartClass::Limb},       {"Shoulder", BodyPartClass::Limb},
        {"Knee", BodyPartClass::Limb},       {"Elbow", BodyPartClass::Limb},
    };
}

namespace {

std::string to_lower(std::string s) {
    std::transform(s.begin(), s.end(), s.begin(),
                   [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
    return s;
}

std::string trim(const std::string& s) {
    std::size_t b = s.find_first_not_of(" \t\r\n");
    if (b == std::string::npos) return "";
    std::size_t e = s.find_last_not_of(" \t\r\n");
    return s.substr(b, e - b + 1);
}

}  // namespace

ClassRules parse_class_rules(const std::string& text) {
    ClassRules rules;
    std::istringstream in(text);
    std::string line;
    int lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        auto hash = line.find('#');
        if (hash != std::string::npos) line = line.substr(0, hash);
        line = trim(line);
        if (line.empty()) continue;
        auto eq = line.find('=');
        if (eq == std::string::npos)
            throw Error("MalformedRules",
                        "line " + std::to_string(lineno) + ": expected key=class");
        std::string key = trim(line.substr(0, eq));
        std::string cls = trim(line.substr(eq + 1));
        if (key.empty())
            throw Error("MalformedRules", "line " + std::to_string(lineno) + ": empty key");
        if (cls == "HeadTorso")
            rules.emplace_back(key, BodyPartClass::HeadTorso);
        else if (cls == "Limb")
            rules.emplace_back(key, BodyPartClass::Limb);
        else
            throw Error("MalformedRules",
                        "line " + std::to_string(lineno) + ": unknown class '" + cls + "'");
    }
    return rules;
}

std::pair<Vec3, Mat3> covariance_matrix(const std::vector<Vec3>& points) {
    if (points.empty())
        throw Error("EmptyInput", "covariance of zero points");
    const double n = static_cast<double>(points.size());
    Vec3 mean;
    for (const auto& p : points) mean = mean + p;
    mean = mean * (1.0 / n);

    Mat3 cov;
    for (int i = 0; i < 3; ++i)
        for (int j = 0; j < 3; ++j) cov.m[i][j] = 0.0;
    for (const auto& p : points) {
        Vec3 d = p - mean;
        for (int i = 0; i < 3; ++i)
            for (int j = 0; j < 3; ++j) cov.m[i][j] += d[i] * d[j] / n;
    }
    return {mean, cov};
}

PrincipalAxes principal_axes(const Vec3& mean, const Mat3& covariance) {
    for (int i = 0; i < 3; ++i)
        for (int j = i + 1; j < 3; ++j)
            if (std::abs(covariance.m[i][j] - covariance.m[j][i]) > 1e-9)
                throw Error("NotSymmetric", "covariance matrix is not symmetric");

    // Cyclic Jacobi: rotate away the largest off-diagonal element until the
    // off-diagonal norm drops below 1e-12 relative to the matrix scale.
    double a[3][3];
    double v[3][3] = {{1, 0, 0}, {0, 1, 0}, {0, 0, 1}};
    for (int i = 0; i < 3; ++i)
        for (int j = 0; j < 3; ++j) a[i][j] = covariance.m[i][j];

    double scale = 0.0;
    for (int i = 0; i < 3; ++i)
        for (int j = 0; j < 3; ++j) scale = std::max(scale, std::abs(a[i][j]));
    double threshold = std::max(scale, 1.0) * 1e-13;

    for (int sweep = 0; sweep < 64; ++sweep) {
        double off = std::sqrt(a[0][1] * a[0][1] + a[0][2] * a[0][2] + a[1][2] * a[1][2]);
        if (off < threshold) break;
        for (int p = 0; p < 3; ++p) {
            for (int q = p + 1; q < 3; ++q) {
                if (std::abs(a[p][q]) < threshold * 1e-3) continue;
                double theta = (a[q][q] - a[p][p]) / (2.0 * a[p][q]);
                double t = (theta >= 0 ? 1.0 : -1.0) /
                           (std::abs(theta) + std::sqrt(theta * theta + 1.0));
                double c = 1.0 / std::sqrt(t * t + 1.0);
                double s = t * c;
                for (int k = 0; k < 3; ++k) {
                    double akp = a[k][p], akq = a[k][q];
                    a[k][p] = c * akp - s * akq;
                    a[k][q] = s * akp + c * akq;
                }
                for (int k = 0; k < 3; ++k) {
                    double apk = a[p][k], aqk = a[q][k];
                    a[p][k] = c * apk - s * aqk;
                    a[q][k] = s * apk + c * aqk;
                }
                for (int k = 0; k < 3; ++k) {
                    double vkp = v[k][p], vkq = v[k][q];
                    v[k][p] = c * vkp - s * vkq;
                    v[k][q] = s * vkp + c * vkq;
                }
            }
        }
    }

    PrincipalAxes out;
    out.mean = mean;
    out.covariance = covariance;

    std::array<int, 3> order = {0, 1, 2};
    double lambda[3] = {a[0][0], a[1][1], a[2][2]};
    std::sort(order.begin(), order.end(),
              [&](int x, int y) { return lambda[x] > lambda[y]; });

    for (int i = 0; i < 3; ++i) {
        double l = lambda[order[i]];
        if (l < 0 && l > -1e-9) l = 0.0;
        out.eigenvalues[i] = l;
        Vec3 ev{v[0][order[i]], v[1][order[i]], v[2][order[i]]};
        // Sign convention: largest-magnitude component non-negative.
        int arg = 0;
        double best = std::abs(ev.x);
        if (std::abs(ev.y) > best) { best = std::abs(ev.y); arg = 1; }
        if (std::abs(ev.z) > best) arg = 2;
        if (ev[arg] < 0) ev = ev * -1.0;
        out.eigenvectors[i] = ev;
    }
    return out;
}

std::map<std::string, BodyPartClass> classify_joints(const bvh::Document& doc,
                                                     const ClassRules& rules) {
    ClassRules lowered;
    lowered.reserve(rules.size());
    for (const auto& [key, cls] : rules) lowered.emplace_back(to_lower(key), cls);

    std::map<std::string, BodyPartClass> out;
    auto classify = [&](const std::string& name) {
        std::string n = to_lower(name);
        for (const auto& [key, cls] : lowered)
            if (n.find(key) != std::string::npos) return cls;
        return BodyPartClass::Limb;
    };
    std::vector<const bvh::Joint*> stack{&doc.root};
    while (!stack.empty()) {
        const bvh::Joint* j = stack.back();
        stack.pop_back();
        out[j->name] = classify(j->name);
        if (j->end_site_offset) {
            std::string en = bvh::end_site_name(j->name);
            out[en] = classify(en);
        }
        for (const auto& c : j->children) stack.push_back(&c);
    }
    return out;
}

namespace {

// Depth-first ordered (name, parent-index) pairs, end sites included,
// matching the order forward_kinematics emits poses.
void pose_order(const bvh::Joint& j, int parent, std::vector<std::pair<std::string, int>>& out) {
    int self = static_cast<int>(out.size());
    out.emplace_back(j.name, parent);
    for (const auto& c : j.children) pose_order(c, self, out);
    if (j.end_site_offset)
        out.emplace_back(bvh::end_site_name(j.name), self);
}

std::map<std::string, std::vector<Vec3>> relative_trajectories(const bvh::Document& doc) {
    std::vector<std::pair<std::string, int>> order;
    pose_order(doc.root, -1, order);

    std::map<std::string, std::vector<Vec3>> rel;
    for (const auto& [name, parent] : order)
        rel[name].reserve(doc.motion.frames.size());

    for (std::size_t f = 0; f < doc.motion.frames.size(); ++f) {
        auto poses = bvh::forward_kinematics(doc, f);
        for (std::size_t i = 0; i < order.size(); ++i) {
            int parent = order[i].second;
            Vec3 p = poses[i].world_position;
            if (parent >= 0)
                p = p - poses[static_cast<std::size_t>(parent)].world_position;
            rel[order[i].first].push_back(p);
        }
    }
    // Root trajectory is centered on its own mean.
    auto& root_traj = rel[doc.root.name];
    Vec3 mean;
    for (const auto& p : root_traj) mean = mean + p;
    mean = mean * (1.0 / static_cast<double>(root_traj.size()));
    for (auto& p : root_traj) p = p - mean;
    return rel;
}

}  // namespace

std::vector<PlaneAssignment> assign_projection_planes(
    const bvh::Document& doc, const std::map<std::string, BodyPartClass>& classes) {
    if (doc.motion.frames.empty())
        throw Error("NoFrames", "plane assignment needs at least one frame");

    auto rel = relative_trajectories(doc);

    std::vector<std::pair<std::string, int>> order;
    pose_order(doc.root, -1, order);

    std::vector<PlaneAssignment> out;
    out.reserve(order.size());
    for (const auto& [name, parent] : order) {
        auto [mean, cov] = covariance_matrix(rel[name]);
        double frontal = cov.m[0][0] + cov.m[1][1];
        double side = cov.m[2][2] + cov.m[1][1];
        double total = cov.m[0][0] + cov.m[1][1] + cov.m[2][2];

        PlaneAssignment a;
        a.joint_name = name;
        auto it = classes.find(name);
        a.body_class = it != classes.end() ? it->second : BodyPartClass::Limb;

        if (a.body_class == BodyPartClass::HeadTorso) {
            a.plane = ProjectionPlane::Frontal;
        } else {
            a.plane = (side - frontal > 1e-9) ? ProjectionPlane::Side
                                              : ProjectionPlane::Frontal;
        }
        double retained = (a.plane == ProjectionPlane::Frontal) ? frontal : side;
        a.retained_variance_ratio = total > 0.0 ? retained / total : 1.0;
        out.push_back(std::move(a));
    }
    return out;
}

std::map<std::string, PrincipalAxes> trajectory_axes(const bvh::Document& doc) {
    if (doc.motion.frames.empty())
        throw Error("NoFrames", "trajectory axes need at least one frame");
    auto rel = relative_trajectories(doc);
    std::map<std::string, PrincipalAxes> out;
    for (const auto& [name, traj] : rel) {
        auto [mean, cov] = covariance_matrix(traj);
        out[name] = principal_axes(mean, cov);
    }
    return out;
}

}  // namespace mocap2d::plane
