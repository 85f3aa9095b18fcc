#pragma once

#include <map>
#include <string>
#include <vector>

#include "mocap2d/common.hpp"

namespace mocap2d::library {

struct MotionEntry {
    std::string id;
    std::string bvh_path;
    std::vector<std::string> tags;  // lowercase
    double duration = 0.0;          // seconds
    int joint_count = 0;
};

struct MotionLibrary {
    std::vector<MotionEntry> entries;
    std::map<std::string, std::vector<std::string>> tag_index;  // tag -> entry ids
    std::vector<std::string> warnings;                          // skipped files
};

// Tags file: JSON map of file name -> tag array, living beside the BVH files.
MotionLibrary index_library(const std::string& root_dir, const std::string& tags_path);

struct SearchResult {
    MotionEntry entry;
    double score = 0.0;  // |query tokens ∩ tags| / |query tokens|
};

// Token overlap scoring; ties break by shorter duration, then id order.
std::vector<SearchResult> search(const MotionLibrary& lib, const std::string& query,
                                 std::size_t k);

std::vector<std::string> tokenize(const std::string& text);

}  // namespace mocap2d::library
