#include "mocap2d/motion_library.hpp"

#include <algorithm>
#include <cctype>
#include <filesystem>
#include <fstream>
#include <set>
#include <sstream>

#include <json.hpp>

#include "mocap2d/bvh.hpp"

namespace mocap2d::library {

namespace fs = std::filesystem;

std::vector<std::string> tokenize(const std::string& text) {
    std::vector<std::string> tokens;
    std::string current;
    for (char c : text) {
        if (std::isalnum(static_cast<unsigned char>(c))) {
            current += static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
        } else if (!current.empty()) {
            tokens.push_back(current);
            current.clear();
        }
    }
    if (!current.empty()) tokens.push_back(current);
    return tokens;
}

MotionLibrary index_library(const std::string& root_dir, const std::string& tags_path) {
    std::ifstream tags_in(tags_path);
    if (!tags_in)
        throw Error("MissingTagsFile", "cannot read tags file '" + tags_path + "'");
    std::stringstream buf;
    buf << tags_in.rdbuf();
    nlohmann::json tags = nlohmann::json::parse(buf.str(), nullptr, false);
    if (tags.is_discarded() || !tags.is_object())
        throw Error("MissingTagsFile", "tags file '" + tags_path + "' is not a JSON object");

    MotionLibrary lib;
    for (const auto& [file_name, tag_list] : tags.items()) {
        fs::path path = fs::path(root_dir) / file_name;
        std::ifstream in(path);
        if (!in) {
            lib.warnings.push_back(file_name + ": file not found");
            continue;
        }
        std::stringstream content;
        content << in.rdbuf();

        MotionEntry entry;
        entry.id = fs::path(file_name).stem().string();
        entry.bvh_path = path.string();
        for (const auto& tag : tag_list) {
            std::string t = tag.get<std::string>();
            std::transform(t.begin(), t.end(), t.begin(),
                           [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
            entry.tags.push_back(t);
        }
        if (entry.tags.empty()) {
            lib.warnings.push_back(file_name + ": no tags");
            continue;
        }
        try {
            bvh::Document doc = bvh::parse(content.str());
            entry.duration = doc.motion.frame_time *
                             static_cast<double>(doc.motion.frames.empty()
                                                     ? 0
                                                     : doc.motion.frames.size() - 1);
            int joints = 0;
            std::vector<const bvh::Joint*> stack{&doc.root};
            while (!stack.empty()) {
                const bvh::Joint* j = stack.back();
                stack.pop_back();
                ++joints;
                for (const auto& c : j->children) stack.push_back(&c);
            }
            entry.joint_count = joints;
        } catch (const Error& e) {
            lib.warnings.push_back(file_name + ": " + e.name() + ": " + e.what());
            continue;
        }
        for (const auto& tag : entry.tags)
            lib.tag_index[tag].push_back(entry.id);
        lib.entries.push_back(std::move(entry));
    }
    if (lib.entries.empty())
        throw Error("EmptyLibrary", "no valid BVH entries under '" + root_dir + "'");
    return lib;
}

std::vector<SearchResult> search(const MotionLibrary& lib, const std::string& query,
                                 std::size_t k) {
    if (k < 1)
        throw Error("InvalidArgument", "k must be >= 1");

    auto tokens = tokenize(query);
    std::set<std::string> unique(tokens.begin(), tokens.end());
    std::vector<SearchResult> results;
    if (unique.empty()) return results;

    for (const auto& entry : lib.entries) {
        std::set<std::string> tags(entry.tags.begin(), entry.tags.end());
        std::size_t hits = 0;
        for (const auto& t : unique)
            if (tags.count(t)) ++hits;
        if (hits == 0) continue;
        results.push_back({entry, static_cast<double>(hits) /
                                      static_cast<double>(unique.size())});
    }
    std::stable_sort(results.begin(), results.end(),
                     [](const SearchResult& a, const SearchResult& b) {
                         if (a.score != b.score) return a.score > b.score;
                         if (a.entry.duration != b.entry.duration)
                             return a.entry.duration < b.entry.duration;
                         return a.entry.id < b.entry.id;
                     });
    if (results.size() > k) results.resize(k);
    return results;
}

}  // namespace mocap2d::library
