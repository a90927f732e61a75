#pragma once

#include "poseanim/body_model.hpp"
#include "poseanim/tensor.hpp"

#include <array>
#include <limits>
#include <utility>
#include <vector>

namespace poseanim::render {

using body::BodyModelLite;
using body::BodyParams;
using body::MatX3;
using body::Matrix3d;
using body::Mesh;
using body::Vector3d;

struct Camera {
    double fx = 0, fy = 0;
    double cx = 0, cy = 0;
    Matrix3d rotation = Matrix3d::Identity();
    Vector3d translation = Vector3d::Zero();
    int height = 0, width = 0;

    void validate() const;
    /// Frontal view of the default puppet at a given resolution.
    static Camera default_for(int height, int width);
};

struct RenderingMap {
    int height = 0, width = 0;
    Tensor<double> pixels;  // H×W×3 in [0,1]
    Tensor<double> depth;   // H×W, meters, +inf where empty

    RenderingMap() = default;
    RenderingMap(int h, int w)
        : height(h), width(w), pixels({h, w, 3}), depth(Tensor<double>::full({h, w}, std::numeric_limits<double>::infinity())) {}
};

struct SkeletonMap {
    int height = 0, width = 0;
    Tensor<double> pixels;  // H×W×3, background exactly 0

    SkeletonMap() = default;
    SkeletonMap(int h, int w) : height(h), width(w), pixels({h, w, 3}) {}
};

/// Frames sharing one identity (β, ψ) with per-frame pose.
struct PoseSequence {
    std::vector<BodyParams> params;
    Camera camera;

    void validate() const;  // all frames share β and ψ exactly
    int frame_count() const { return static_cast<int>(params.size()); }
};

struct ProjectedPoints {
    Eigen::Matrix<double, Eigen::Dynamic, 2> uv;
    Eigen::VectorXd depth;
    std::vector<char> valid;  // false where camera-space z <= 1e-6
};

/// Pinhole projection u = fx·x/z + cx, v = fy·y/z + cy in camera coordinates.
ProjectedPoints project(const Camera& camera, const MatX3& points3d);

/// DWPose-style fixed limb palette (RGB in [0,1]), assigned by limb index mod 10.
extern const std::array<std::array<double, 3>, 10> kSkeletonPalette;
/// Neutral gray used for identity-free condition rendering maps.
extern const std::array<double, 3> kNeutralPartColor;
/// Fixed light direction for the Lambert term.
Vector3d light_direction();

/// Z-buffered flat-shaded triangle rasterization. part_colors has one RGB
/// triple per part id; pixel color = part color · max(0, n·l).
RenderingMap rasterize(const Mesh& mesh, const Camera& camera,
                       const std::vector<std::array<double, 3>>& part_colors);
/// All parts in neutral gray (condition-map variant).
RenderingMap rasterize_neutral(const Mesh& mesh, const Camera& camera);

/// Projects posed joints, draws 2px Bresenham limbs and radius-3 joint discs.
SkeletonMap draw_skeleton(const BodyModelLite& model, const BodyParams& params, const Camera& camera);

/// Shape swap: β/ψ from the reference, θ and root translation from the driver.
PoseSequence retarget_params(const BodyParams& reference, const PoseSequence& driving);

std::vector<std::pair<RenderingMap, SkeletonMap>> render_pose_sequence(
    const BodyModelLite& model, const PoseSequence& seq,
    const std::vector<std::array<double, 3>>& part_colors);

}  // namespace poseanim::render
