#include "mocap2d/bvh.hpp"

#include <algorithm>
#include <charconv>
#include <cstdio>
#include <set>
#include <sstream>

namespace mocap2d::bvh {

bool is_rotation(Channel c) {
    return c == Channel::Xrotation || c == Channel::Yrotation || c == Channel::Zrotation;
}

const char* channel_name(Channel c) {
    switch (c) {
        case Channel::Xposition: return "Xposition";
        case Channel::Yposition: return "Yposition";
        case Channel::Zposition: return "Zposition";
        case Channel::Xrotation: return "Xrotation";
        case Channel::Yrotation: return "Yrotation";
        case Channel::Zrotation: return "Zrotation";
    }
    return "?";
}

std::string end_site_name(const std::string& parent_joint) {
    return parent_joint + "_End";
}

namespace {

std::optional<Channel> channel_from_name(const std::string& s) {
    static const std::pair<const char*, Channel> table[] = {
        {"Xposition", Channel::Xposition}, {"Yposition", Channel::Yposition},
        {"Zposition", Channel::Zposition}, {"Xrotation", Channel::Xrotation},
        {"Yrotation", Channel::Yrotation}, {"Zrotation", Channel::Zrotation},
    };
    for (const auto& [name, ch] : table)
        if (s == name) return ch;
    return std::nullopt;
}

class Tokenizer {
public:
    explicit Tokenizer(const std::string& text) : text_(text) {}

    std::string next() {
        skip_ws();
        std::size_t start = pos_;
        while (pos_ < text_.size() && !std::isspace(static_cast<unsigned char>(text_[pos_])))
            ++pos_;
        return text_.substr(start, pos_ - start);
    }

    std::string peek() {
        std::size_t save = pos_;
        std::string tok = next();
        pos_ = save;
        return tok;
    }

    bool eof() {
        skip_ws();
        return pos_ >= text_.size();
    }

    // Remainder of the current line, trimmed.
    std::string rest_of_line() {
        while (pos_ < text_.size() && (text_[pos_] == ' ' || text_[pos_] == '\t')) ++pos_;
        std::size_t start = pos_;
        while (pos_ < text_.size() && text_[pos_] != '\n' && text_[pos_] != '\r') ++pos_;
        std::size_t end = pos_;
        while (end > start && std::isspace(static_cast<unsigned char>(text_[end - 1]))) --end;
        return text_.substr(start, end - start);
    }

private:
    void skip_ws() {
        while (pos_ < text_.size() && std::isspace(static_cast<unsigned char>(text_[pos_])))
            ++pos_;
    }

    const std::string& text_;
    std::size_t pos_ = 0;
};

double parse_number(const std::string& tok, const char* context) {
    try {
        std::size_t used = 0;
        double v = std::stod(tok, &used);
        if (used != tok.size()) throw std::invalid_argument(tok);
        return v;
    } catch (const std::exception&) {
        throw Error("MalformedHierarchy",
                    std::string("expected a number in ") + context + ", got '" + tok + "'");
    }
}

void expect(Tokenizer& tok, const char* literal) {
    std::string t = tok.next();
    if (t != literal)
        throw Error("MalformedHierarchy",
                    std::string("expected '") + literal + "', got '" + t + "'");
}

Vec3 parse_offset(Tokenizer& tok) {
    expect(tok, "OFFSET");
    Vec3 v;
    v.x = parse_number(tok.next(), "OFFSET");
    v.y = parse_number(tok.next(), "OFFSET");
    v.z = parse_number(tok.next(), "OFFSET");
    return v;
}

struct ParseState {
    std::set<std::string> joint_names;
    std::size_t total_channels = 0;
};

Joint parse_joint(Tokenizer& tok, ParseState& state, bool is_root) {
    Joint joint;
    joint.name = tok.next();
    if (joint.name.empty())
        throw Error("MalformedHierarchy", "missing joint name");
    if (!state.joint_names.insert(joint.name).second)
        throw Error("DuplicateJointName", "duplicate joint name '" + joint.name + "'");

    expect(tok, "{");
    joint.offset = parse_offset(tok);

    if (tok.peek() == "CHANNELS") {
        tok.next();
        long n = static_cast<long>(parse_number(tok.next(), "CHANNELS"));
        if (n < 0 || n > 6)
            throw Error("MalformedHierarchy", "channel count out of range for joint '" + joint.name + "'");
        std::set<Channel> seen;
        for (long i = 0; i < n; ++i) {
            std::string name = tok.next();
            auto ch = channel_from_name(name);
            if (!ch)
                throw Error("MalformedHierarchy", "unknown channel name '" + name + "'");
            if (!seen.insert(*ch).second)
                throw Error("MalformedHierarchy",
                            "channel '" + name + "' repeated on joint '" + joint.name + "'");
            joint.channels.push_back(*ch);
        }
    } else if (is_root) {
        // Root channels are conventionally present; absent is still legal (0-6).
    }
    state.total_channels += joint.channels.size();

    for (;;) {
        std::string t = tok.next();
        if (t == "JOINT") {
            joint.children.push_back(parse_joint(tok, state, false));
        } else if (t == "End") {
            std::string site = tok.next();
            if (site != "Site")
                throw Error("MalformedHierarchy", "expected 'End Site', got 'End " + site + "'");
            expect(tok, "{");
            joint.end_site_offset = parse_offset(tok);
            expect(tok, "}");
        } else if (t == "}") {
            break;
        } else if (t.empty()) {
            throw Error("MalformedHierarchy", "unexpected end of HIERARCHY (brace mismatch)");
        } else {
            throw Error("MalformedHierarchy", "unexpected token '" + t + "' in joint '" + joint.name + "'");
        }
    }

    if (joint.children.empty() && !joint.end_site_offset)
        throw Error("MalformedHierarchy",
                    "leaf joint '" + joint.name + "' has no End Site");
    return joint;
}

std::size_t count_channels(const Joint& j) {
    std::size_t n = j.channels.size();
    for (const auto& c : j.children) n += count_channels(c);
    return n;
}

void serialize_joint(std::ostringstream& out, const Joint& joint, int depth, bool is_root) {
    std::string indent(static_cast<std::size_t>(depth) * 2, ' ');
    out << indent << (is_root ? "ROOT " : "JOINT ") << joint.name << "\n";
    out << indent << "{\n";
    std::string inner(static_cast<std::size_t>(depth + 1) * 2, ' ');
    char buf[128];
    std::snprintf(buf, sizeof(buf), "OFFSET %.6f %.6f %.6f",
                  joint.offset.x, joint.offset.y, joint.offset.z);
    out << inner << buf << "\n";
    if (!joint.channels.empty()) {
        out << inner << "CHANNELS " << joint.channels.size();
        for (Channel c : joint.channels) out << ' ' << channel_name(c);
        out << "\n";
    }
    for (const auto& child : joint.children)
        serialize_joint(out, child, depth + 1, false);
    if (joint.end_site_offset) {
        out << inner << "End Site\n" << inner << "{\n";
        std::snprintf(buf, sizeof(buf), "OFFSET %.6f %.6f %.6f",
                      joint.end_site_offset->x, joint.end_site_offset->y,
                      joint.end_site_offset->z);
        out << inner << "  " << buf << "\n";
        out << inner << "}\n";
    }
    out << indent << "}\n";
}

void fk_walk(const Joint& joint, const Vec3& parent_pos, const Mat3& parent_rot,
             const std::vector<double>& frame, std::size_t& cursor,
             std::vector<JointPose>& out) {
    Vec3 pos = parent_pos + parent_rot * joint.offset;
    Mat3 rot = parent_rot;
    for (Channel c : joint.channels) {
        double v = frame[cursor++];
        switch (c) {
            case Channel::Xposition: pos = pos + rot * Vec3{v, 0, 0}; break;
            case Channel::Yposition: pos = pos + rot * Vec3{0, v, 0}; break;
            case Channel::Zposition: pos = pos + rot * Vec3{0, 0, v}; break;
            case Channel::Xrotation: rot = rot * Mat3::rotation_x(v); break;
            case Channel::Yrotation: rot = rot * Mat3::rotation_y(v); break;
            case Channel::Zrotation: rot = rot * Mat3::rotation_z(v); break;
        }
    }
    out.push_back({joint.name, pos, rot});
    for (const auto& child : joint.children)
        fk_walk(child, pos, rot, frame, cursor, out);
    if (joint.end_site_offset)
        out.push_back({end_site_name(joint.name), pos + rot * *joint.end_site_offset, rot});
}

void collect_channel_kinds(const Joint& j, std::vector<bool>& rotational) {
    for (Channel c : j.channels) rotational.push_back(is_rotation(c));
    for (const auto& child : j.children) collect_channel_kinds(child, rotational);
}

}  // namespace

std::size_t Document::channel_count() const {
    return count_channels(root);
}

Document parse(const std::string& text) {
    Tokenizer tok(text);

    expect(tok, "HIERARCHY");
    expect(tok, "ROOT");

    ParseState state;
    Document doc;
    doc.root = parse_joint(tok, state, true);

    std::string t = tok.next();
    if (t != "MOTION")
        throw Error("MissingMotionSection",
                    t.empty() ? "missing MOTION section" : "expected MOTION, got '" + t + "'");

    expect(tok, "Frames:");
    long frame_count = static_cast<long>(parse_number(tok.next(), "Frames:"));
    if (frame_count < 0)
        throw Error("MalformedHierarchy", "negative frame count");

    std::string ft = tok.next();
    if (ft == "Frame") {
        std::string time_kw = tok.next();
        if (time_kw != "Time:")
            throw Error("MalformedHierarchy", "expected 'Frame Time:', got 'Frame " + time_kw + "'");
    } else {
        throw Error("MalformedHierarchy", "expected 'Frame Time:' line");
    }
    doc.motion.frame_time = parse_number(tok.next(), "Frame Time:");
    if (!(doc.motion.frame_time > 0))
        throw Error("MalformedHierarchy", "Frame Time must be > 0");

    std::size_t per_frame = state.total_channels;
    doc.motion.frames.reserve(static_cast<std::size_t>(frame_count));
    for (long f = 0; f < frame_count; ++f) {
        std::vector<double> row;
        row.reserve(per_frame);
        // Values are read by count, not by line, so any whitespace layout
        // (tabs, CRLF, wrapped rows) is accepted.
        for (std::size_t i = 0; i < per_frame; ++i) {
            if (tok.eof())
                throw Error("ChannelCountMismatch",
                            "frame " + std::to_string(f) + " has " + std::to_string(row.size()) +
                                " values, expected " + std::to_string(per_frame));
            std::string v = tok.next();
            try {
                std::size_t used = 0;
                double d = std::stod(v, &used);
                if (used != v.size()) throw std::invalid_argument(v);
                row.push_back(d);
            } catch (const std::exception&) {
                throw Error("ChannelCountMismatch",
                            "frame " + std::to_string(f) + ": non-numeric value '" + v + "'");
            }
        }
        doc.motion.frames.push_back(std::move(row));
    }
    if (!tok.eof()) {
        std::string extra = tok.next();
        throw Error("ChannelCountMismatch",
                    "trailing data after last frame: '" + extra + "'");
    }
    return doc;
}

std::string serialize(const Document& doc) {
    std::ostringstream out;
    out << "HIERARCHY\n";
    serialize_joint(out, doc.root, 0, true);
    out << "MOTION\n";
    out << "Frames: " << doc.motion.frames.size() << "\n";
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%.9f", doc.motion.frame_time);
    out << "Frame Time: " << buf << "\n";
    for (const auto& row : doc.motion.frames) {
        for (std::size_t i = 0; i < row.size(); ++i) {
            if (i) out << ' ';
            std::snprintf(buf, sizeof(buf), "%.6f", row[i]);
            out << buf;
        }
        out << "\n";
    }
    return out.str();
}

std::vector<JointPose> forward_kinematics(const Document& doc, std::size_t frame_index) {
    if (frame_index >= doc.motion.frames.size())
        throw Error("FrameOutOfRange",
                    "frame " + std::to_string(frame_index) + " of " +
                        std::to_string(doc.motion.frames.size()));
    std::vector<JointPose> out;
    std::size_t cursor = 0;
    fk_walk(doc.root, Vec3{}, Mat3::identity(), doc.motion.frames[frame_index], cursor, out);
    return out;
}

Document resample(const Document& doc, double target_fps) {
    if (!(target_fps > 0))
        throw Error("InvalidFps", "target fps must be > 0");
    if (doc.motion.frames.empty())
        throw Error("FrameOutOfRange", "cannot resample empty motion");

    std::vector<bool> rotational;
    collect_channel_kinds(doc.root, rotational);

    double src_dt = doc.motion.frame_time;
    double duration = src_dt * static_cast<double>(doc.motion.frames.size() - 1);
    double dst_dt = 1.0 / target_fps;
    auto count = static_cast<std::size_t>(std::llround(duration / dst_dt)) + 1;

    Document out;
    out.root = doc.root;
    out.motion.frame_time = dst_dt;
    out.motion.frames.reserve(count);

    for (std::size_t i = 0; i < count; ++i) {
        double t = std::min(static_cast<double>(i) * dst_dt, duration);
        double pos = t / src_dt;
        auto lo = static_cast<std::size_t>(std::floor(pos));
        lo = std::min(lo, doc.motion.frames.size() - 1);
        std::size_t hi = std::min(lo + 1, doc.motion.frames.size() - 1);
        double u = pos - static_cast<double>(lo);

        const auto& a = doc.motion.frames[lo];
        const auto& b = doc.motion.frames[hi];
        std::vector<double> row(a.size());
        for (std::size_t c = 0; c < a.size(); ++c) {
            if (rotational[c]) {
                double delta = wrap_degrees(b[c] - a[c]);
                row[c] = a[c] + delta * u;
            } else {
                row[c] = a[c] + (b[c] - a[c]) * u;
            }
        }
        out.motion.frames.push_back(std::move(row));
    }
    return out;
}

}  // namespace mocap2d::bvh
