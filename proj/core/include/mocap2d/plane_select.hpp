#pragma once

#include <array>
#include <map>
#include <string>
#include <vector>

#include "mocap2d/bvh.hpp"
#include "mocap2d/common.hpp"

namespace mocap2d::plane {

enum class BodyPartClass { HeadTorso, Limb };

enum class ProjectionPlane {
    Frontal,  // XY
    Side,     // ZY
};

const char* plane_name(ProjectionPlane p);
const char* class_name(BodyPartClass c);

struct PrincipalAxes {
    Vec3 mean;
    Mat3 covariance;
    std::array<double, 3> eigenvalues{};       // sorted descending
    std::array<Vec3, 3> eigenvectors{};        // orthonormal, paired with eigenvalues
};

struct PlaneAssignment {
    std::string joint_name;
    ProjectionPlane plane = ProjectionPlane::Frontal;
    double retained_variance_ratio = 1.0;
    BodyPartClass body_class = BodyPartClass::Limb;
};

// Ordered substring rules, first match wins; matching is case-insensitive.
using ClassRules = std::vector<std::pair<std::string, BodyPartClass>>;

ClassRules default_class_rules();

// Plain-text "substring=HeadTorso|Limb" lines; '#' starts a comment.
ClassRules parse_class_rules(const std::string& text);

std::pair<Vec3, Mat3> covariance_matrix(const std::vector<Vec3>& points);

// Eigen-decomposition of a symmetric 3x3 matrix by cyclic Jacobi sweeps.
// Eigenvalues clamped at 0 if within -1e-9, sorted descending; each
// eigenvector's largest-magnitude component is made non-negative.
PrincipalAxes principal_axes(const Vec3& mean, const Mat3& covariance);

std::map<std::string, BodyPartClass> classify_joints(const bvh::Document& doc,
                                                     const ClassRules& rules);

// One assignment per joint and end site. HeadTorso joints always get Frontal;
// Limb joints get whichever of Frontal/Side retains more trajectory variance
// of the joint's parent-relative world positions, ties to Frontal.
std::vector<PlaneAssignment> assign_projection_planes(
    const bvh::Document& doc, const std::map<std::string, BodyPartClass>& classes);

// Diagnostic: principal axes of each joint's parent-relative trajectory.
std::map<std::string, PrincipalAxes> trajectory_axes(const bvh::Document& doc);

}  // namespace mocap2d::plane
