#pragma once

#include "poseanim/tensor.hpp"

#include <Eigen/Dense>

#include <filesystem>
#include <string>
#include <utility>
#include <vector>

namespace poseanim::body {

using Eigen::Matrix3d;
using Eigen::Matrix4d;
using Eigen::MatrixXd;
using Eigen::Vector3d;
using Eigen::VectorXd;

using MatX3 = Eigen::Matrix<double, Eigen::Dynamic, 3>;

struct KinematicTree {
    std::vector<int> parent;                       // parent[0] == -1, parent[k] < k
    std::vector<std::string> joint_names;
    std::vector<std::pair<int, int>> limb_list;    // joint index pairs for skeleton drawing

    int joint_count() const { return static_cast<int>(parent.size()); }
    void validate() const;
};

/// Simplified SMPL-X-style body: rest template + linear shape/expression
/// bases, a joint regressor, and blend-skinning weights. Immutable after
/// construction; all math in double.
struct BodyModelLite {
    MatX3 template_vertices;        // N×3, meters
    Tensor<double> shape_basis;     // N×3×S
    Tensor<double> expression_basis;// N×3×E (E may be 0)
    MatrixXd joint_regressor;       // K×N, row-stochastic
    MatrixXd skinning_weights;      // N×K, row-stochastic
    Eigen::Matrix<int, Eigen::Dynamic, 3> faces;  // F×3
    KinematicTree tree;
    std::vector<int> part_id;       // length N

    int vertex_count() const { return static_cast<int>(template_vertices.rows()); }
    int joint_count() const { return tree.joint_count(); }
    int face_count() const { return static_cast<int>(faces.rows()); }
    int shape_dim() const { return shape_basis.rank() == 3 ? static_cast<int>(shape_basis.dim(2)) : 0; }
    int expr_dim() const { return expression_basis.rank() == 3 ? static_cast<int>(expression_basis.dim(2)) : 0; }
    int part_count() const;
    void validate() const;
};

/// β/θ/ψ + root translation. Validated at construction: finite values and
/// per-joint axis-angle norm below 2π.
struct BodyParams {
    VectorXd beta;
    MatX3 theta;            // K×3 axis-angle, row 0 is the global orientation
    VectorXd psi;
    Vector3d root_translation = Vector3d::Zero();

    static BodyParams make(VectorXd beta, MatX3 theta, VectorXd psi, Vector3d root_translation);
    static BodyParams rest(const BodyModelLite& model);
};

struct Mesh {
    MatX3 vertices;
    Eigen::Matrix<int, Eigen::Dynamic, 3> faces;
    std::vector<int> part_id;
};

/// Axis-angle to rotation matrix; series limit near zero angle.
Matrix3d rodrigues(const Vector3d& axis_angle);

/// template + shape_basis·beta + expression_basis·psi.
MatX3 shaped_template(const BodyModelLite& model, const VectorXd& beta, const VectorXd& psi);

/// joint_regressor · vertices.
MatX3 joint_locations(const BodyModelLite& model, const MatX3& shaped_vertices);

/// World transform per joint; transform[k] maps the joint's rest-local frame
/// so its translation column is the posed joint position.
std::vector<Matrix4d> forward_kinematics(const KinematicTree& tree, const MatX3& theta,
                                         const MatX3& rest_joints, const Vector3d& root_translation);

/// Linear blend skinning M(β,θ,ψ).
Mesh lbs_deform(const BodyModelLite& model, const BodyParams& params);

/// Posed joint positions (translation columns of forward kinematics).
MatX3 posed_joints(const BodyModelLite& model, const BodyParams& params);

/// ∂R/∂v_i of rodrigues at v (Gallego–Yezzi form; cross-product limit at v→0).
Matrix3d rodrigues_derivative(const Vector3d& axis_angle, int i);

/// Analytic Jacobians of lbs_deform vertices, one direction at a time.
MatX3 lbs_jacobian_beta(const BodyModelLite& model, const BodyParams& params, int shape_index);
MatX3 lbs_jacobian_theta(const BodyModelLite& model, const BodyParams& params, int joint, int axis);

/// Built-in procedural humanoid: 8 joints, ~400 vertices from cylinders and
/// spheres, 4 shape directions (height, limb length, girth, head size), E=0.
BodyModelLite make_capsule_puppet();

/// Part labels used by the capsule puppet (indices into per-part palettes).
enum PuppetPart { kPartTorso = 0, kPartHead = 1, kPartLeftArm = 2, kPartRightArm = 3,
                  kPartLeftLeg = 4, kPartRightLeg = 5 };
constexpr int kPuppetPartCount = 6;

void save_model(const std::filesystem::path& dir, const BodyModelLite& model);
BodyModelLite load_model(const std::filesystem::path& dir);

}  // namespace poseanim::body
