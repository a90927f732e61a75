#include "poseanim/body_model.hpp"

#include "poseanim/array_io.hpp"

#include <cmath>
#include <numbers>

namespace poseanim::body {

void KinematicTree::validate() const {
    if (parent.empty() || parent[0] != -1) throw std::invalid_argument("tree: parent[0] must be -1");
    for (std::size_t k = 1; k < parent.size(); ++k)
        if (parent[k] < 0 || parent[k] >= static_cast<int>(k))
            throw std::invalid_argument("tree: parents must be topologically ordered");
    for (auto [a, b] : limb_list)
        if (a < 0 || b < 0 || a >= joint_count() || b >= joint_count())
            throw std::invalid_argument("tree: limb references invalid joint");
}

int BodyModelLite::part_count() const {
    int m = 0;
    for (int p : part_id) m = std::max(m, p + 1);
    return m;
}

void BodyModelLite::validate() const {
    tree.validate();
    const int n = vertex_count(), k = joint_count();
    if (n < 3 * k) throw std::invalid_argument("model: need at least 3 vertices per joint");
    if (joint_regressor.rows() != k || joint_regressor.cols() != n)
        throw std::invalid_argument("model: joint_regressor must be K×N");
    if (skinning_weights.rows() != n || skinning_weights.cols() != k)
        throw std::invalid_argument("model: skinning_weights must be N×K");
    if (static_cast<int>(part_id.size()) != n) throw std::invalid_argument("model: part_id length mismatch");
    if (shape_basis.rank() != 3 || shape_basis.dim(0) != n || shape_basis.dim(1) != 3)
        throw std::invalid_argument("model: shape_basis must be N×3×S");
    if (expression_basis.rank() != 3 || expression_basis.dim(0) != n || expression_basis.dim(1) != 3)
        throw std::invalid_argument("model: expression_basis must be N×3×E");
    for (int i = 0; i < k; ++i) {
        if (joint_regressor.row(i).minCoeff() < 0) throw std::invalid_argument("model: joint_regressor negative");
        if (std::abs(joint_regressor.row(i).sum() - 1.0) > 1e-9)
            throw std::invalid_argument("model: joint_regressor row not stochastic");
    }
    for (int i = 0; i < n; ++i) {
        if (skinning_weights.row(i).minCoeff() < 0) throw std::invalid_argument("model: skinning_weights negative");
        if (std::abs(skinning_weights.row(i).sum() - 1.0) > 1e-9)
            throw std::invalid_argument("model: skinning_weights row not stochastic");
    }
    for (int f = 0; f < face_count(); ++f)
        for (int c = 0; c < 3; ++c)
            if (faces(f, c) < 0 || faces(f, c) >= n) throw std::invalid_argument("model: face index out of range");
}

BodyParams BodyParams::make(VectorXd beta, MatX3 theta, VectorXd psi, Vector3d root_translation) {
    if (!beta.allFinite() || !theta.allFinite() || !psi.allFinite() || !root_translation.allFinite())
        throw std::invalid_argument("BodyParams: non-finite value");
    for (int k = 0; k < theta.rows(); ++k)
        if (theta.row(k).norm() >= 2.0 * std::numbers::pi)
            throw std::invalid_argument("BodyParams: joint rotation magnitude must be below 2π");
    BodyParams p;
    p.beta = std::move(beta);
    p.theta = std::move(theta);
    p.psi = std::move(psi);
    p.root_translation = root_translation;
    return p;
}

BodyParams BodyParams::rest(const BodyModelLite& model) {
    return make(VectorXd::Zero(model.shape_dim()), MatX3::Zero(model.joint_count(), 3),
                VectorXd::Zero(model.expr_dim()), Vector3d::Zero());
}

Matrix3d rodrigues(const Vector3d& axis_angle) {
    if (!axis_angle.allFinite()) throw std::invalid_argument("rodrigues: non-finite input");
    const double angle2 = axis_angle.squaredNorm();
    Matrix3d k;
    k << 0, -axis_angle.z(), axis_angle.y(),
         axis_angle.z(), 0, -axis_angle.x(),
         -axis_angle.y(), axis_angle.x(), 0;
    // R = I + a·K̂ + b·K̂², with a = sin(t)/t and b = (1-cos(t))/t² expanded
    // in series below the switch point so the zero-angle limit is smooth.
    double a, b;
    if (angle2 < 1e-16) {
        a = 1.0 - angle2 / 6.0;
        b = 0.5 - angle2 / 24.0;
    } else {
        const double t = std::sqrt(angle2);
        a = std::sin(t) / t;
        b = (1.0 - std::cos(t)) / angle2;
    }
    return Matrix3d::Identity() + a * k + b * (k * k);
}

MatX3 shaped_template(const BodyModelLite& model, const VectorXd& beta, const VectorXd& psi) {
    if (beta.size() != model.shape_dim())
        throw std::invalid_argument("shaped_template: beta length mismatch");
    if (psi.size() != model.expr_dim())
        throw std::invalid_argument("shaped_template: psi length mismatch");
    MatX3 v = model.template_vertices;
    const int n = model.vertex_count();
    const int s = model.shape_dim(), e = model.expr_dim();
    for (int i = 0; i < n; ++i)
        for (int c = 0; c < 3; ++c) {
            double d = 0;
            for (int j = 0; j < s; ++j) d += model.shape_basis.at(i, c, j) * beta[j];
            for (int j = 0; j < e; ++j) d += model.expression_basis.at(i, c, j) * psi[j];
            v(i, c) += d;
        }
    return v;
}

MatX3 joint_locations(const BodyModelLite& model, const MatX3& shaped_vertices) {
    if (shaped_vertices.rows() != model.vertex_count())
        throw std::invalid_argument("joint_locations: vertex count mismatch");
    return model.joint_regressor * shaped_vertices;
}

std::vector<Matrix4d> forward_kinematics(const KinematicTree& tree, const MatX3& theta,
                                         const MatX3& rest_joints, const Vector3d& root_translation) {
    tree.validate();
    const int k = tree.joint_count();
    if (theta.rows() != k || rest_joints.rows() != k)
        throw std::invalid_argument("forward_kinematics: joint count mismatch");
    std::vector<Matrix4d> world(static_cast<std::size_t>(k), Matrix4d::Identity());
    for (int j = 0; j < k; ++j) {
        Matrix4d local = Matrix4d::Identity();
        local.topLeftCorner<3, 3>() = rodrigues(theta.row(j).transpose());
        if (j == 0) {
            local.topRightCorner<3, 1>() = rest_joints.row(0).transpose() + root_translation;
            world[0] = local;
        } else {
            local.topRightCorner<3, 1>() =
                (rest_joints.row(j) - rest_joints.row(tree.parent[static_cast<std::size_t>(j)])).transpose();
            world[static_cast<std::size_t>(j)] = world[static_cast<std::size_t>(tree.parent[static_cast<std::size_t>(j)])] * local;
        }
    }
    return world;
}

Mesh lbs_deform(const BodyModelLite& model, const BodyParams& params) {
    if (params.theta.rows() != model.joint_count())
        throw std::invalid_argument("lbs_deform: theta joint count mismatch");
    const MatX3 shaped = shaped_template(model, params.beta, params.psi);
    const MatX3 rest_j = joint_locations(model, shaped);
    const auto world = forward_kinematics(model.tree, params.theta, rest_j, params.root_translation);

    const int k = model.joint_count(), n = model.vertex_count();
    // Skinning transforms: world composed with the inverse rest placement.
    std::vector<Matrix4d> skin(static_cast<std::size_t>(k));
    for (int j = 0; j < k; ++j) {
        Matrix4d unrest = Matrix4d::Identity();
        unrest.topRightCorner<3, 1>() = -rest_j.row(j).transpose();
        skin[static_cast<std::size_t>(j)] = world[static_cast<std::size_t>(j)] * unrest;
    }

    Mesh out;
    out.vertices.resize(n, 3);
    for (int i = 0; i < n; ++i) {
        Eigen::Vector4d h(shaped(i, 0), shaped(i, 1), shaped(i, 2), 1.0);
        Eigen::Vector4d acc = Eigen::Vector4d::Zero();
        for (int j = 0; j < k; ++j) {
            const double w = model.skinning_weights(i, j);
            if (w != 0.0) acc += w * (skin[static_cast<std::size_t>(j)] * h);
        }
        out.vertices.row(i) = acc.head<3>().transpose();
    }
    out.faces = model.faces;
    out.part_id = model.part_id;
    return out;
}

MatX3 posed_joints(const BodyModelLite& model, const BodyParams& params) {
    const MatX3 shaped = shaped_template(model, params.beta, params.psi);
    const MatX3 rest_j = joint_locations(model, shaped);
    const auto world = forward_kinematics(model.tree, params.theta, rest_j, params.root_translation);
    MatX3 j(model.joint_count(), 3);
    for (int i = 0; i < model.joint_count(); ++i)
        j.row(i) = world[static_cast<std::size_t>(i)].topRightCorner<3, 1>().transpose();
    return j;
}

Matrix3d rodrigues_derivative(const Vector3d& v, int i) {
    if (i < 0 || i > 2) throw std::invalid_argument("rodrigues_derivative: axis index out of range");
    auto hat = [](const Vector3d& a) {
        Matrix3d m;
        m << 0, -a.z(), a.y(), a.z(), 0, -a.x(), -a.y(), a.x(), 0;
        return m;
    };
    const double n2 = v.squaredNorm();
    const Vector3d e = Vector3d::Unit(i);
    if (n2 < 1e-12) return hat(e);
    const Matrix3d r = rodrigues(v);
    const Vector3d term = v.cross((Matrix3d::Identity() - r) * e);
    return (v[i] * hat(v) + hat(term)) / n2 * r;
}

namespace {

struct LbsDifferential {
    MatX3 d_shaped;   // N×3
    MatX3 d_rest;     // K×3
    int rot_joint = -1;
    int rot_axis = -1;
};

/// Shared forward-accumulation path for both analytic Jacobians.
MatX3 lbs_directional(const BodyModelLite& model, const BodyParams& params, const LbsDifferential& diff) {
    const MatX3 shaped = shaped_template(model, params.beta, params.psi);
    const MatX3 rest_j = joint_locations(model, shaped);
    const int k = model.joint_count(), n = model.vertex_count();

    std::vector<Matrix4d> local(static_cast<std::size_t>(k)), d_local(static_cast<std::size_t>(k), Matrix4d::Zero());
    for (int j = 0; j < k; ++j) {
        Matrix4d l = Matrix4d::Identity();
        l.topLeftCorner<3, 3>() = rodrigues(params.theta.row(j).transpose());
        Matrix4d dl = Matrix4d::Zero();
        if (j == diff.rot_joint)
            dl.topLeftCorner<3, 3>() = rodrigues_derivative(params.theta.row(j).transpose(), diff.rot_axis);
        if (j == 0) {
            l.topRightCorner<3, 1>() = rest_j.row(0).transpose() + params.root_translation;
            dl.topRightCorner<3, 1>() = diff.d_rest.row(0).transpose();
        } else {
            const int p = model.tree.parent[static_cast<std::size_t>(j)];
            l.topRightCorner<3, 1>() = (rest_j.row(j) - rest_j.row(p)).transpose();
            dl.topRightCorner<3, 1>() = (diff.d_rest.row(j) - diff.d_rest.row(p)).transpose();
        }
        local[static_cast<std::size_t>(j)] = l;
        d_local[static_cast<std::size_t>(j)] = dl;
    }

    std::vector<Matrix4d> world(static_cast<std::size_t>(k)), d_world(static_cast<std::size_t>(k));
    world[0] = local[0];
    d_world[0] = d_local[0];
    for (int j = 1; j < k; ++j) {
        const auto p = static_cast<std::size_t>(model.tree.parent[static_cast<std::size_t>(j)]);
        world[static_cast<std::size_t>(j)] = world[p] * local[static_cast<std::size_t>(j)];
        d_world[static_cast<std::size_t>(j)] =
            d_world[p] * local[static_cast<std::size_t>(j)] + world[p] * d_local[static_cast<std::size_t>(j)];
    }

    MatX3 out = MatX3::Zero(n, 3);
    for (int i = 0; i < n; ++i) {
        const Eigen::Vector4d h(shaped(i, 0), shaped(i, 1), shaped(i, 2), 1.0);
        const Eigen::Vector4d dh(diff.d_shaped(i, 0), diff.d_shaped(i, 1), diff.d_shaped(i, 2), 0.0);
        Eigen::Vector4d acc = Eigen::Vector4d::Zero();
        for (int j = 0; j < k; ++j) {
            const double w = model.skinning_weights(i, j);
            if (w == 0.0) continue;
            Matrix4d unrest = Matrix4d::Identity();
            unrest.topRightCorner<3, 1>() = -rest_j.row(j).transpose();
            Matrix4d d_unrest = Matrix4d::Zero();
            d_unrest.topRightCorner<3, 1>() = -diff.d_rest.row(j).transpose();
            const auto sj = static_cast<std::size_t>(j);
            acc += w * ((d_world[sj] * unrest + world[sj] * d_unrest) * h + world[sj] * unrest * dh);
        }
        out.row(i) = acc.head<3>().transpose();
    }
    return out;
}

}  // namespace

MatX3 lbs_jacobian_beta(const BodyModelLite& model, const BodyParams& params, int shape_index) {
    if (shape_index < 0 || shape_index >= model.shape_dim())
        throw std::invalid_argument("lbs_jacobian_beta: shape index out of range");
    LbsDifferential diff;
    diff.d_shaped.resize(model.vertex_count(), 3);
    for (int i = 0; i < model.vertex_count(); ++i)
        for (int c = 0; c < 3; ++c) diff.d_shaped(i, c) = model.shape_basis.at(i, c, shape_index);
    diff.d_rest = model.joint_regressor * diff.d_shaped;
    return lbs_directional(model, params, diff);
}

MatX3 lbs_jacobian_theta(const BodyModelLite& model, const BodyParams& params, int joint, int axis) {
    if (joint < 0 || joint >= model.joint_count() || axis < 0 || axis > 2)
        throw std::invalid_argument("lbs_jacobian_theta: index out of range");
    LbsDifferential diff;
    diff.d_shaped = MatX3::Zero(model.vertex_count(), 3);
    diff.d_rest = MatX3::Zero(model.joint_count(), 3);
    diff.rot_joint = joint;
    diff.rot_axis = axis;
    return lbs_directional(model, params, diff);
}

namespace {

constexpr int kSeg = 10;  // vertices per ring

struct Builder {
    std::vector<Vector3d> verts;
    std::vector<Eigen::Vector3i> faces;
    std::vector<int> part;

    int add_vertex(const Vector3d& v, int p) {
        verts.push_back(v);
        part.push_back(p);
        return static_cast<int>(verts.size()) - 1;
    }
    void add_face(int a, int b, int c) { faces.push_back({a, b, c}); }

    /// Ring of kSeg vertices around axis (u,w ⟂ axis) at center c.
    std::vector<int> add_ring(const Vector3d& c, const Vector3d& u, const Vector3d& w, double radius, int p) {
        std::vector<int> ids;
        for (int s = 0; s < kSeg; ++s) {
            const double a = 2.0 * std::numbers::pi * s / kSeg;
            ids.push_back(add_vertex(c + radius * (std::cos(a) * u + std::sin(a) * w), p));
        }
        return ids;
    }
    void connect_rings(const std::vector<int>& r0, const std::vector<int>& r1) {
        for (int s = 0; s < kSeg; ++s) {
            const int t = (s + 1) % kSeg;
            add_face(r0[static_cast<std::size_t>(s)], r1[static_cast<std::size_t>(s)], r1[static_cast<std::size_t>(t)]);
            add_face(r0[static_cast<std::size_t>(s)], r1[static_cast<std::size_t>(t)], r0[static_cast<std::size_t>(t)]);
        }
    }
    void cap(const std::vector<int>& ring, const Vector3d& center, int p) {
        const int c = add_vertex(center, p);
        for (int s = 0; s < kSeg; ++s)
            add_face(ring[static_cast<std::size_t>(s)], ring[static_cast<std::size_t>((s + 1) % kSeg)], c);
    }

    /// Tube from p0 to p1. Returns the ring vertex ids, first ring at p0.
    std::vector<std::vector<int>> add_tube(const Vector3d& p0, const Vector3d& p1, double radius,
                                           int nrings, int p) {
        const Vector3d axis = (p1 - p0).normalized();
        Vector3d u = std::abs(axis.x()) < 0.9 ? Vector3d::UnitX() : Vector3d::UnitY();
        u = (u - u.dot(axis) * axis).normalized();
        const Vector3d w = axis.cross(u);
        std::vector<std::vector<int>> rings;
        for (int r = 0; r < nrings; ++r) {
            const double t = static_cast<double>(r) / (nrings - 1);
            rings.push_back(add_ring(p0 + t * (p1 - p0), u, w, radius, p));
        }
        for (int r = 0; r + 1 < nrings; ++r) connect_rings(rings[static_cast<std::size_t>(r)], rings[static_cast<std::size_t>(r + 1)]);
        cap(rings.front(), p0, p);
        cap(rings.back(), p1, p);
        return rings;
    }
};

}  // namespace

BodyModelLite make_capsule_puppet() {
    Builder b;

    // Torso tube with rings pinned at the joint heights so the regressor can
    // place pelvis/spine/chest at ring centroids.
    const double torso_r = 0.16;
    const std::vector<double> torso_y = {-0.06, 0.0, 0.11, 0.22, 0.33, 0.45, 0.52};
    std::vector<std::vector<int>> torso_rings;
    for (double y : torso_y)
        torso_rings.push_back(b.add_ring({0, y, 0}, Vector3d::UnitX(), Vector3d::UnitZ(), torso_r, kPartTorso));
    for (std::size_t r = 0; r + 1 < torso_rings.size(); ++r) b.connect_rings(torso_rings[r], torso_rings[r + 1]);
    b.cap(torso_rings.front(), {0, torso_y.front(), 0}, kPartTorso);
    b.cap(torso_rings.back(), {0, torso_y.back(), 0}, kPartTorso);

    // Head: latitude/longitude sphere; bottom ring doubles as the neck pivot.
    const Vector3d head_c(0, 0.70, 0);
    const double head_r = 0.10;
    std::vector<std::vector<int>> head_rings;
    const int head_lat = 5;
    for (int i = 0; i < head_lat; ++i) {
        const double phi = std::numbers::pi * (i + 1) / (head_lat + 1);  // from bottom pole
        const Vector3d c = head_c - Vector3d(0, head_r * std::cos(phi), 0);
        head_rings.push_back(
            b.add_ring(c, Vector3d::UnitX(), Vector3d::UnitZ(), head_r * std::sin(phi), kPartHead));
    }
    for (int i = 0; i + 1 < head_lat; ++i) b.connect_rings(head_rings[static_cast<std::size_t>(i)], head_rings[static_cast<std::size_t>(i + 1)]);
    b.cap(head_rings.front(), head_c - Vector3d(0, head_r, 0), kPartHead);
    b.cap(head_rings.back(), head_c + Vector3d(0, head_r, 0), kPartHead);

    // Single-segment limbs (elbows/knees omitted).
    const Vector3d l_shoulder(-0.24, 0.44, 0), r_shoulder(0.24, 0.44, 0);
    const Vector3d l_hand(-0.36, 0.02, 0), r_hand(0.36, 0.02, 0);
    const Vector3d l_hip(-0.10, -0.02, 0), r_hip(0.10, -0.02, 0);
    const Vector3d l_foot(-0.13, -0.88, 0), r_foot(0.13, -0.88, 0);
    auto l_arm_rings = b.add_tube(l_shoulder, l_hand, 0.05, 5, kPartLeftArm);
    auto r_arm_rings = b.add_tube(r_shoulder, r_hand, 0.05, 5, kPartRightArm);
    auto l_leg_rings = b.add_tube(l_hip, l_foot, 0.07, 6, kPartLeftLeg);
    auto r_leg_rings = b.add_tube(r_hip, r_foot, 0.07, 6, kPartRightLeg);

    BodyModelLite m;
    const int n = static_cast<int>(b.verts.size());
    m.template_vertices.resize(n, 3);
    for (int i = 0; i < n; ++i) m.template_vertices.row(i) = b.verts[static_cast<std::size_t>(i)].transpose();
    m.faces.resize(static_cast<int>(b.faces.size()), 3);
    for (std::size_t f = 0; f < b.faces.size(); ++f) m.faces.row(static_cast<int>(f)) = b.faces[f].transpose();
    m.part_id = b.part;

    // Kinematic tree: pelvis, spine, chest, head, arms, legs.
    m.tree.parent = {-1, 0, 1, 2, 2, 2, 0, 0};
    m.tree.joint_names = {"pelvis", "spine", "chest", "head", "l_arm", "r_arm", "l_leg", "r_leg"};
    m.tree.limb_list = {{0, 1}, {1, 2}, {2, 3}, {2, 4}, {2, 5}, {0, 6}, {0, 7}};
    const int k = m.tree.joint_count();

    // Joint regressor: uniform over a ring whose centroid is the joint.
    m.joint_regressor = MatrixXd::Zero(k, n);
    auto set_row = [&](int joint, const std::vector<int>& ids) {
        for (int i : ids) m.joint_regressor(joint, i) = 1.0 / static_cast<double>(ids.size());
    };
    set_row(0, torso_rings[1]);       // pelvis ring at y=0
    set_row(1, torso_rings[3]);       // spine ring at y=0.22
    set_row(2, torso_rings[5]);       // chest ring at y=0.45
    set_row(3, head_rings.front());   // neck pivot under the head
    set_row(4, l_arm_rings.front());
    set_row(5, r_arm_rings.front());
    set_row(6, l_leg_rings.front());
    set_row(7, r_leg_rings.front());

    // Skinning: limbs/head rigid to their joint; torso blends pelvis/spine/chest by height.
    m.skinning_weights = MatrixXd::Zero(n, k);
    const double y_pelvis = 0.0, y_spine = 0.22, y_chest = 0.45;
    for (int i = 0; i < n; ++i) {
        switch (m.part_id[static_cast<std::size_t>(i)]) {
            case kPartHead: m.skinning_weights(i, 3) = 1; break;
            case kPartLeftArm: m.skinning_weights(i, 4) = 1; break;
            case kPartRightArm: m.skinning_weights(i, 5) = 1; break;
            case kPartLeftLeg: m.skinning_weights(i, 6) = 1; break;
            case kPartRightLeg: m.skinning_weights(i, 7) = 1; break;
            case kPartTorso: {
                const double y = m.template_vertices(i, 1);
                if (y <= y_pelvis) {
                    m.skinning_weights(i, 0) = 1;
                } else if (y <= y_spine) {
                    const double t = (y - y_pelvis) / (y_spine - y_pelvis);
                    m.skinning_weights(i, 0) = 1 - t;
                    m.skinning_weights(i, 1) = t;
                } else if (y <= y_chest) {
                    const double t = (y - y_spine) / (y_chest - y_spine);
                    m.skinning_weights(i, 1) = 1 - t;
                    m.skinning_weights(i, 2) = t;
                } else {
                    m.skinning_weights(i, 2) = 1;
                }
                break;
            }
        }
    }

    // Shape basis: height, limb length, girth, head size.
    const int S = 4;
    m.shape_basis = Tensor<double>({n, 3, S});
    for (int i = 0; i < n; ++i) {
        const Vector3d v = m.template_vertices.row(i).transpose();
        const int p = m.part_id[static_cast<std::size_t>(i)];
        // 0: height — vertical stretch about the pelvis.
        m.shape_basis.at(i, 1, 0) = 0.06 * v.y();
        // 1: limb length — stretch arms and legs away from their attachment.
        Vector3d attach = Vector3d::Zero();
        bool limb = true;
        switch (p) {
            case kPartLeftArm: attach = l_shoulder; break;
            case kPartRightArm: attach = r_shoulder; break;
            case kPartLeftLeg: attach = l_hip; break;
            case kPartRightLeg: attach = r_hip; break;
            default: limb = false;
        }
        if (limb) {
            const Vector3d d = 0.08 * (v - attach);
            for (int c = 0; c < 3; ++c) m.shape_basis.at(i, c, 1) = d[c];
        }
        // 2: girth — radial torso offset in the xz plane.
        if (p == kPartTorso) {
            const double r = std::hypot(v.x(), v.z());
            if (r > 1e-9) {
                m.shape_basis.at(i, 0, 2) = 0.04 * v.x() / r;
                m.shape_basis.at(i, 2, 2) = 0.04 * v.z() / r;
            }
        }
        // 3: head size — scale about the head center.
        if (p == kPartHead) {
            const Vector3d d = 0.20 * (v - head_c);
            for (int c = 0; c < 3; ++c) m.shape_basis.at(i, c, 3) = d[c];
        }
    }
    m.expression_basis = Tensor<double>({n, 3, 0});

    m.validate();
    return m;
}

void save_model(const std::filesystem::path& dir, const BodyModelLite& model) {
    model.validate();
    const int n = model.vertex_count(), k = model.joint_count(), f = model.face_count();
    ArrayDirWriter w(dir);

    Tensor<double> tv({n, 3});
    for (int i = 0; i < n; ++i)
        for (int c = 0; c < 3; ++c) tv.at(i, c) = model.template_vertices(i, c);
    w.add_f64("template_vertices", tv);
    w.add_f64("shape_basis", model.shape_basis);
    w.add_f64("expression_basis", model.expression_basis);

    Tensor<double> jr({k, n});
    for (int i = 0; i < k; ++i)
        for (int j = 0; j < n; ++j) jr.at(i, j) = model.joint_regressor(i, j);
    w.add_f64("joint_regressor", jr);

    Tensor<double> sw({n, k});
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < k; ++j) sw.at(i, j) = model.skinning_weights(i, j);
    w.add_f64("skinning_weights", sw);

    Tensor<double> fc({f, 3});
    for (int i = 0; i < f; ++i)
        for (int c = 0; c < 3; ++c) fc.at(i, c) = model.faces(i, c);
    w.add_f64("faces", fc);

    Tensor<double> par({k});
    for (int i = 0; i < k; ++i) par[i] = model.tree.parent[static_cast<std::size_t>(i)];
    w.add_f64("parent", par);

    Tensor<double> pid({n});
    for (int i = 0; i < n; ++i) pid[i] = model.part_id[static_cast<std::size_t>(i)];
    w.add_f64("part_id", pid);

    const int l = static_cast<int>(model.tree.limb_list.size());
    Tensor<double> limbs({l, 2});
    for (int i = 0; i < l; ++i) {
        limbs.at(i, 0) = model.tree.limb_list[static_cast<std::size_t>(i)].first;
        limbs.at(i, 1) = model.tree.limb_list[static_cast<std::size_t>(i)].second;
    }
    w.add_f64("limb_list", limbs);
    w.finish();
}

BodyModelLite load_model(const std::filesystem::path& dir) {
    ArrayDirReader r(dir);
    BodyModelLite m;
    auto tv = r.get_f64("template_vertices");
    const int n = static_cast<int>(tv.dim(0));
    m.template_vertices.resize(n, 3);
    for (int i = 0; i < n; ++i)
        for (int c = 0; c < 3; ++c) m.template_vertices(i, c) = tv.at(i, c);
    m.shape_basis = r.get_f64("shape_basis");
    m.expression_basis = r.get_f64("expression_basis");

    auto jr = r.get_f64("joint_regressor");
    const int k = static_cast<int>(jr.dim(0));
    m.joint_regressor.resize(k, n);
    for (int i = 0; i < k; ++i)
        for (int j = 0; j < n; ++j) m.joint_regressor(i, j) = jr.at(i, j);

    auto sw = r.get_f64("skinning_weights");
    m.skinning_weights.resize(n, k);
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < k; ++j) m.skinning_weights(i, j) = sw.at(i, j);

    auto fc = r.get_f64("faces");
    m.faces.resize(static_cast<int>(fc.dim(0)), 3);
    for (int i = 0; i < fc.dim(0); ++i)
        for (int c = 0; c < 3; ++c) m.faces(i, c) = static_cast<int>(fc.at(i, c));

    auto par = r.get_f64("parent");
    m.tree.parent.resize(static_cast<std::size_t>(par.numel()));
    for (std::int64_t i = 0; i < par.numel(); ++i) m.tree.parent[static_cast<std::size_t>(i)] = static_cast<int>(par[i]);
    for (int i = 0; i < k; ++i) m.tree.joint_names.push_back("joint" + std::to_string(i));

    auto pid = r.get_f64("part_id");
    m.part_id.resize(static_cast<std::size_t>(pid.numel()));
    for (std::int64_t i = 0; i < pid.numel(); ++i) m.part_id[static_cast<std::size_t>(i)] = static_cast<int>(pid[i]);

    if (r.has("limb_list")) {
        auto limbs = r.get_f64("limb_list");
        for (std::int64_t i = 0; i < limbs.dim(0); ++i)
            m.tree.limb_list.push_back({static_cast<int>(limbs.at(i, 0)), static_cast<int>(limbs.at(i, 1))});
    }
    m.validate();
    return m;
}

}  // namespace poseanim::body
