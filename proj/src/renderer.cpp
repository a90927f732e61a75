#include "poseanim/renderer.hpp"

#include <algorithm>
#include <cmath>

namespace poseanim::render {

void Camera::validate() const {
    if (fx <= 0 || fy <= 0) throw std::invalid_argument("camera: focal lengths must be positive");
    if (height <= 0 || width <= 0) throw std::invalid_argument("camera: bad image size");
    if ((rotation.transpose() * rotation - Matrix3d::Identity()).cwiseAbs().maxCoeff() > 1e-9)
        throw std::invalid_argument("camera: rotation not orthonormal");
}

Camera Camera::default_for(int height, int width) {
    Camera c;
    c.height = height;
    c.width = width;
    // Flip y and z so that world-up maps to image-up and the puppet, standing
    // near the origin, sits in front of the camera.
    c.rotation << 1, 0, 0, 0, -1, 0, 0, 0, -1;
    const Vector3d position(0.0, 0.0, 2.6);  // world-space camera center
    c.translation = -c.rotation * position;
    c.fx = c.fy = 1.35 * height;
    c.cx = width / 2.0;
    c.cy = height / 2.0;
    c.validate();
    return c;
}

void PoseSequence::validate() const {
    for (std::size_t f = 1; f < params.size(); ++f) {
        if (params[f].beta != params[0].beta || params[f].psi != params[0].psi)
            throw std::invalid_argument("pose sequence: frames must share beta and psi");
    }
    camera.validate();
}

ProjectedPoints project(const Camera& camera, const MatX3& points3d) {
    camera.validate();
    const int m = static_cast<int>(points3d.rows());
    ProjectedPoints out;
    out.uv.resize(m, 2);
    out.depth.resize(m);
    out.valid.assign(static_cast<std::size_t>(m), 1);
    for (int i = 0; i < m; ++i) {
        const Vector3d pc = camera.rotation * points3d.row(i).transpose() + camera.translation;
        out.depth[i] = pc.z();
        if (pc.z() <= 1e-6) {
            out.valid[static_cast<std::size_t>(i)] = 0;
            out.uv(i, 0) = out.uv(i, 1) = 0;
            continue;
        }
        out.uv(i, 0) = camera.fx * pc.x() / pc.z() + camera.cx;
        out.uv(i, 1) = camera.fy * pc.y() / pc.z() + camera.cy;
    }
    return out;
}

const std::array<std::array<double, 3>, 10> kSkeletonPalette = {{
    {1.00, 0.00, 0.00},
    {1.00, 0.60, 0.00},
    {1.00, 1.00, 0.00},
    {0.20, 1.00, 0.20},
    {0.00, 1.00, 1.00},
    {0.30, 0.50, 1.00},
    {0.60, 0.20, 1.00},
    {1.00, 0.30, 0.80},
    {0.80, 1.00, 0.40},
    {0.40, 0.80, 0.80},
}};

const std::array<double, 3> kNeutralPartColor = {0.7, 0.7, 0.7};

Vector3d light_direction() { return Vector3d(0.3, 0.3, -1.0).normalized(); }

RenderingMap rasterize(const Mesh& mesh, const Camera& camera,
                       const std::vector<std::array<double, 3>>& part_colors) {
    camera.validate();
    if (!mesh.vertices.allFinite()) throw std::invalid_argument("rasterize: non-finite mesh");
    RenderingMap map(camera.height, camera.width);

    const int n = static_cast<int>(mesh.vertices.rows());
    MatX3 cam_pts(n, 3);
    for (int i = 0; i < n; ++i)
        cam_pts.row(i) = (camera.rotation * mesh.vertices.row(i).transpose() + camera.translation).transpose();

    const Vector3d l = light_direction();
    for (int f = 0; f < mesh.faces.rows(); ++f) {
        const int ia = mesh.faces(f, 0), ib = mesh.faces(f, 1), ic = mesh.faces(f, 2);
        const Vector3d a = cam_pts.row(ia), bb = cam_pts.row(ib), cc = cam_pts.row(ic);
        if (a.z() <= 1e-6 || bb.z() <= 1e-6 || cc.z() <= 1e-6) continue;

        auto to_screen = [&](const Vector3d& p) {
            return Eigen::Vector2d(camera.fx * p.x() / p.z() + camera.cx, camera.fy * p.y() / p.z() + camera.cy);
        };
        const Eigen::Vector2d sa = to_screen(a), sb = to_screen(bb), sc = to_screen(cc);

        const double area = (sb.x() - sa.x()) * (sc.y() - sa.y()) - (sb.y() - sa.y()) * (sc.x() - sa.x());
        if (area == 0.0) continue;  // degenerate triangle

        Vector3d normal = (bb - a).cross(cc - a);
        const double nn = normal.norm();
        if (nn == 0.0) continue;
        normal /= nn;
        if (normal.z() > 0) normal = -normal;  // face the camera
        const double lambert = std::max(0.0, normal.dot(l));

        const auto& base = part_colors.at(static_cast<std::size_t>(mesh.part_id.at(static_cast<std::size_t>(ia))));
        const double r = base[0] * lambert, g = base[1] * lambert, b = base[2] * lambert;

        const int x0 = std::max(0, static_cast<int>(std::floor(std::min({sa.x(), sb.x(), sc.x()}))));
        const int x1 = std::min(camera.width - 1, static_cast<int>(std::ceil(std::max({sa.x(), sb.x(), sc.x()}))));
        const int y0 = std::max(0, static_cast<int>(std::floor(std::min({sa.y(), sb.y(), sc.y()}))));
        const int y1 = std::min(camera.height - 1, static_cast<int>(std::ceil(std::max({sa.y(), sb.y(), sc.y()}))));

        for (int y = y0; y <= y1; ++y) {
            for (int x = x0; x <= x1; ++x) {
                const double px = x + 0.5, py = y + 0.5;
                const double w0 = ((sb.x() - sa.x()) * (py - sa.y()) - (sb.y() - sa.y()) * (px - sa.x())) / area;
                const double w1 = ((sc.x() - sb.x()) * (py - sb.y()) - (sc.y() - sb.y()) * (px - sb.x())) / area;
                const double w2 = ((sa.x() - sc.x()) * (py - sc.y()) - (sa.y() - sc.y()) * (px - sc.x())) / area;
                if (w0 < 0 || w1 < 0 || w2 < 0) continue;
                // Barycentrics w.r.t. (a,b,c): weight of a vertex is the
                // sub-area opposite to it.
                const double ba = w1, bc = w0, bcc = w2;
                const double z = ba * a.z() + bcc * bb.z() + bc * cc.z();
                double& zb = map.depth.at(y, x);
                if (z < zb) {
                    zb = z;
                    map.pixels.at(y, x, 0) = r;
                    map.pixels.at(y, x, 1) = g;
                    map.pixels.at(y, x, 2) = b;
                }
            }
        }
    }
    return map;
}

RenderingMap rasterize_neutral(const Mesh& mesh, const Camera& camera) {
    int parts = 0;
    for (int p : mesh.part_id) parts = std::max(parts, p + 1);
    std::vector<std::array<double, 3>> colors(static_cast<std::size_t>(std::max(parts, 1)), kNeutralPartColor);
    return rasterize(mesh, camera, colors);
}

namespace {

void put_pixel(SkeletonMap& map, int x, int y, const std::array<double, 3>& c) {
    if (x < 0 || y < 0 || x >= map.width || y >= map.height) return;
    map.pixels.at(y, x, 0) = c[0];
    map.pixels.at(y, x, 1) = c[1];
    map.pixels.at(y, x, 2) = c[2];
}

/// Bresenham thickened to 2px (each step also paints x+1 and y+1 neighbours).
void draw_line(SkeletonMap& map, int x0, int y0, int x1, int y1, const std::array<double, 3>& c) {
    const int dx = std::abs(x1 - x0), sx = x0 < x1 ? 1 : -1;
    const int dy = -std::abs(y1 - y0), sy = y0 < y1 ? 1 : -1;
    int err = dx + dy;
    int x = x0, y = y0;
    while (true) {
        put_pixel(map, x, y, c);
        put_pixel(map, x + 1, y, c);
        put_pixel(map, x, y + 1, c);
        put_pixel(map, x + 1, y + 1, c);
        if (x == x1 && y == y1) break;
        const int e2 = 2 * err;
        if (e2 >= dy) {
            err += dy;
            x += sx;
        }
        if (e2 <= dx) {
            err += dx;
            y += sy;
        }
    }
}

void draw_disc(SkeletonMap& map, int cx, int cy, int radius, const std::array<double, 3>& c) {
    for (int y = -radius; y <= radius; ++y)
        for (int x = -radius; x <= radius; ++x)
            if (x * x + y * y <= radius * radius) put_pixel(map, cx + x, cy + y, c);
}

}  // namespace

SkeletonMap draw_skeleton(const BodyModelLite& model, const BodyParams& params, const Camera& camera) {
    camera.validate();
    SkeletonMap map(camera.height, camera.width);
    const MatX3 joints = body::posed_joints(model, params);
    const ProjectedPoints pj = project(camera, joints);

    for (std::size_t li = 0; li < model.tree.limb_list.size(); ++li) {
        const auto [ja, jb] = model.tree.limb_list[li];
        if (!pj.valid[static_cast<std::size_t>(ja)] || !pj.valid[static_cast<std::size_t>(jb)]) continue;
        const auto& c = kSkeletonPalette[li % kSkeletonPalette.size()];
        draw_line(map, static_cast<int>(std::lround(pj.uv(ja, 0))), static_cast<int>(std::lround(pj.uv(ja, 1))),
                  static_cast<int>(std::lround(pj.uv(jb, 0))), static_cast<int>(std::lround(pj.uv(jb, 1))), c);
    }
    for (int j = 0; j < model.joint_count(); ++j) {
        if (!pj.valid[static_cast<std::size_t>(j)]) continue;
        const auto& c = kSkeletonPalette[static_cast<std::size_t>(j) % kSkeletonPalette.size()];
        draw_disc(map, static_cast<int>(std::lround(pj.uv(j, 0))), static_cast<int>(std::lround(pj.uv(j, 1))), 3, c);
    }
    return map;
}

PoseSequence retarget_params(const BodyParams& reference, const PoseSequence& driving) {
    driving.validate();
    PoseSequence out;
    out.camera = driving.camera;
    for (const auto& frame : driving.params) {
        if (frame.beta.size() != reference.beta.size() || frame.psi.size() != reference.psi.size())
            throw std::invalid_argument("retarget_params: shape/expression dimension mismatch");
        out.params.push_back(
            BodyParams::make(reference.beta, frame.theta, reference.psi, frame.root_translation));
    }
    return out;
}

std::vector<std::pair<RenderingMap, SkeletonMap>> render_pose_sequence(
    const BodyModelLite& model, const PoseSequence& seq,
    const std::vector<std::array<double, 3>>& part_colors) {
    seq.validate();
    std::vector<std::pair<RenderingMap, SkeletonMap>> out;
    out.reserve(seq.params.size());
    for (const auto& p : seq.params) {
        const Mesh mesh = body::lbs_deform(model, p);
        out.emplace_back(rasterize(mesh, seq.camera, part_colors), draw_skeleton(model, p, seq.camera));
    }
    return out;
}

}  // namespace poseanim::render
