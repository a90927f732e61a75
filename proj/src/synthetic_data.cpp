#include "poseanim/synthetic_data.hpp"

#include "poseanim/array_io.hpp"
#include "poseanim/png_io.hpp"

#include <nlohmann/json.hpp>

#include <cmath>
#include <fstream>
#include <numbers>

namespace poseanim::data {

namespace fs = std::filesystem;
using json = nlohmann::json;

body::VectorXd IdentitySpec::identity_code() const {
    body::VectorXd code(code_length());
    code.head(beta.size()) = beta;
    for (std::size_t p = 0; p < palette.size(); ++p)
        for (int c = 0; c < 3; ++c) code[beta.size() + 3 * static_cast<Eigen::Index>(p) + c] = palette[p][static_cast<std::size_t>(c)];
    return code;
}

IdentitySpec sample_identity(Rng& rng, int shape_dim, int part_count) {
    std::uniform_real_distribution<double> beta_dist(-2.0, 2.0);
    std::uniform_real_distribution<double> color_dist(0.2, 1.0);
    IdentitySpec s;
    s.beta.resize(shape_dim);
    for (int i = 0; i < shape_dim; ++i) s.beta[i] = beta_dist(rng);
    s.palette.resize(static_cast<std::size_t>(part_count));
    for (auto& col : s.palette)
        for (double& v : col) v = color_dist(rng);
    return s;
}

MotionScript sample_motion(Rng& rng, int joint_count) {
    std::uniform_real_distribution<double> amp(0.0, kMaxJointAmplitude);
    std::uniform_real_distribution<double> freq(0.5, 1.5);
    std::uniform_real_distribution<double> ph(0.0, 2.0 * std::numbers::pi);
    MotionScript m;
    m.amplitude.resize(joint_count, 3);
    m.frequency.resize(joint_count, 3);
    m.phase.resize(joint_count, 3);
    for (int k = 0; k < joint_count; ++k)
        for (int a = 0; a < 3; ++a) {
            m.amplitude(k, a) = amp(rng);
            m.frequency(k, a) = freq(rng);
            m.phase(k, a) = ph(rng);
        }
    // Keep the global orientation gentle so the puppet stays in frame.
    m.amplitude.row(0) *= 0.25;
    std::uniform_real_distribution<double> drift(0.0, 0.08);
    for (int a = 0; a < 3; ++a) {
        m.drift_amplitude[a] = a == 2 ? 0.0 : drift(rng);  // no depth drift
        m.drift_frequency[a] = freq(rng);
        m.drift_phase[a] = ph(rng);
    }
    return m;
}

render::PoseSequence realize_motion(const MotionScript& script, const IdentitySpec& identity, int frames,
                                    const render::Camera& camera) {
    if (frames < 1) throw std::invalid_argument("realize_motion: need at least one frame");
    const int k = static_cast<int>(script.amplitude.rows());
    render::PoseSequence seq;
    seq.camera = camera;
    for (int f = 0; f < frames; ++f) {
        body::MatX3 theta(k, 3);
        const double t = static_cast<double>(f) / frames;
        for (int j = 0; j < k; ++j)
            for (int a = 0; a < 3; ++a)
                theta(j, a) = script.amplitude(j, a) *
                              std::sin(2.0 * std::numbers::pi * script.frequency(j, a) * t + script.phase(j, a));
        body::Vector3d root;
        for (int a = 0; a < 3; ++a)
            root[a] = script.drift_amplitude[a] *
                      std::sin(2.0 * std::numbers::pi * script.drift_frequency[a] * t + script.drift_phase[a]);
        seq.params.push_back(body::BodyParams::make(identity.beta, theta, body::VectorXd(0), root));
    }
    seq.validate();
    return seq;
}

namespace {

void copy_frame(Tensor<float>& dst, int frame, const Tensor<double>& pixels) {
    const std::int64_t n = pixels.numel();
    float* out = dst.data() + frame * n;
    for (std::int64_t i = 0; i < n; ++i) out[i] = static_cast<float>(pixels[i]);
}

Tensor<float> to_f32(const Tensor<double>& t) {
    Tensor<float> out(t.shape());
    for (std::int64_t i = 0; i < t.numel(); ++i) out[i] = static_cast<float>(t[i]);
    return out;
}

}  // namespace

ClipSample generate_clip(const body::BodyModelLite& model, const IdentitySpec& identity,
                         const MotionScript& motion, const render::Camera& camera, int frames,
                         int height, int width) {
    if (camera.height != height || camera.width != width)
        throw std::invalid_argument("generate_clip: camera resolution mismatch");
    ClipSample clip;
    clip.identity = identity;
    clip.params = realize_motion(motion, identity, frames, camera);
    clip.frames = Tensor<float>({frames, height, width, 3});
    clip.render_maps = Tensor<float>({frames, height, width, 3});
    clip.skeleton_maps = Tensor<float>({frames, height, width, 3});

    for (int f = 0; f < frames; ++f) {
        const body::Mesh mesh = body::lbs_deform(model, clip.params.params[static_cast<std::size_t>(f)]);
        copy_frame(clip.frames, f, render::rasterize(mesh, camera, identity.palette).pixels);
        copy_frame(clip.render_maps, f, render::rasterize_neutral(mesh, camera).pixels);
        copy_frame(clip.skeleton_maps, f,
                   render::draw_skeleton(model, clip.params.params[static_cast<std::size_t>(f)], camera).pixels);
    }

    const body::BodyParams rest = body::BodyParams::make(
        identity.beta, body::MatX3::Zero(model.joint_count(), 3), body::VectorXd(0), body::Vector3d::Zero());
    const body::Mesh rest_mesh = body::lbs_deform(model, rest);
    clip.reference_frame = to_f32(render::rasterize(rest_mesh, camera, identity.palette).pixels);
    return clip;
}

void build_dataset(const body::BodyModelLite& model, int count, std::uint64_t seed,
                   const fs::path& out_dir, const DataConfig& config) {
    fs::create_directories(out_dir);
    const render::Camera camera = render::Camera::default_for(config.height, config.width);
    const int kk = model.joint_count();

    json manifest;
    manifest["format_version"] = 1;
    manifest["seed"] = seed;
    manifest["config"] = {{"frames_per_clip", config.frames_per_clip},
                          {"height", config.height},
                          {"width", config.width}};
    manifest["clips"] = json::array();

    for (int i = 0; i < count; ++i) {
        // Per-clip derived seed keeps clips independent and parallelizable.
        std::seed_seq sseq{static_cast<std::uint64_t>(i), seed};
        Rng rng(0);
        rng.seed(sseq);
        const IdentitySpec identity = sample_identity(rng, model.shape_dim(), model.part_count());
        const MotionScript motion = sample_motion(rng, kk);
        const ClipSample clip =
            generate_clip(model, identity, motion, camera, config.frames_per_clip, config.height, config.width);

        char name[32];
        std::snprintf(name, sizeof(name), "clip%04d", i);
        const fs::path clip_dir = out_dir / name;
        try {
            ArrayDirWriter w(clip_dir);
            w.add_f32("frames", clip.frames);
            w.add_f32("render", clip.render_maps);
            w.add_f32("skeleton", clip.skeleton_maps);
            w.add_f32("reference", clip.reference_frame);

            Tensor<double> code({clip.identity.code_length()});
            const auto cv = clip.identity.identity_code();
            for (int j = 0; j < cv.size(); ++j) code[j] = cv[j];
            w.add_f64("identity", code);

            Tensor<double> params({config.frames_per_clip, 3 * kk + 3});
            for (int f = 0; f < config.frames_per_clip; ++f) {
                const auto& p = clip.params.params[static_cast<std::size_t>(f)];
                for (int j = 0; j < kk; ++j)
                    for (int a = 0; a < 3; ++a) params.at(f, 3 * j + a) = p.theta(j, a);
                for (int a = 0; a < 3; ++a) params.at(f, 3 * kk + a) = p.root_translation[a];
            }
            w.add_f64("params", params);
            w.finish();

            write_png_image(clip_dir / "preview_frame.png",
                            Tensor<float>({config.height, config.width, 3},
                                          std::vector<float>(clip.frames.data(), clip.frames.data() + static_cast<std::size_t>(config.height) * config.width * 3)));
            write_png_image(clip_dir / "preview_render.png",
                            Tensor<float>({config.height, config.width, 3},
                                          std::vector<float>(clip.render_maps.data(), clip.render_maps.data() + static_cast<std::size_t>(config.height) * config.width * 3)));
            write_png_image(clip_dir / "preview_skeleton.png",
                            Tensor<float>({config.height, config.width, 3},
                                          std::vector<float>(clip.skeleton_maps.data(), clip.skeleton_maps.data() + static_cast<std::size_t>(config.height) * config.width * 3)));
        } catch (const std::exception& e) {
            throw std::runtime_error("build_dataset: failed writing " + clip_dir.string() + ": " + e.what());
        }

        json entry;
        entry["dir"] = name;
        const auto code = clip.identity.identity_code();
        entry["identity_code"] = std::vector<double>(code.data(), code.data() + code.size());
        entry["shape_dim"] = model.shape_dim();
        manifest["clips"].push_back(entry);
    }

    std::ofstream mf(out_dir / "manifest.json");
    if (!mf) throw std::runtime_error("build_dataset: cannot write manifest in " + out_dir.string());
    mf << manifest.dump(2) << "\n";
}

std::vector<ClipSample> load_dataset(const fs::path& dir) {
    std::ifstream mf(dir / "manifest.json");
    if (!mf) throw std::runtime_error("load_dataset: missing manifest.json in " + dir.string());
    json manifest = json::parse(mf);
    const int frames = manifest["config"]["frames_per_clip"];
    const int height = manifest["config"]["height"];
    const int width = manifest["config"]["width"];
    const render::Camera camera = render::Camera::default_for(height, width);

    std::vector<ClipSample> out;
    for (const auto& entry : manifest["clips"]) {
        ArrayDirReader r(dir / entry["dir"].get<std::string>());
        ClipSample clip;
        clip.frames = r.get_f32("frames");
        clip.render_maps = r.get_f32("render");
        clip.skeleton_maps = r.get_f32("skeleton");
        clip.reference_frame = r.get_f32("reference");

        auto code = r.get_f64("identity");
        const int shape_dim = entry["shape_dim"];
        clip.identity.beta.resize(shape_dim);
        for (int i = 0; i < shape_dim; ++i) clip.identity.beta[i] = code[i];
        const int parts = static_cast<int>((code.numel() - shape_dim) / 3);
        clip.identity.palette.resize(static_cast<std::size_t>(parts));
        for (int p = 0; p < parts; ++p)
            for (int c = 0; c < 3; ++c)
                clip.identity.palette[static_cast<std::size_t>(p)][static_cast<std::size_t>(c)] = code[shape_dim + 3 * p + c];

        auto params = r.get_f64("params");
        const int kk = static_cast<int>((params.dim(1) - 3) / 3);
        clip.params.camera = camera;
        for (int f = 0; f < frames; ++f) {
            body::MatX3 theta(kk, 3);
            for (int j = 0; j < kk; ++j)
                for (int a = 0; a < 3; ++a) theta(j, a) = params.at(f, 3 * j + a);
            body::Vector3d root(params.at(f, 3 * kk + 0), params.at(f, 3 * kk + 1), params.at(f, 3 * kk + 2));
            clip.params.params.push_back(
                body::BodyParams::make(clip.identity.beta, theta, body::VectorXd(0), root));
        }
        out.push_back(std::move(clip));
    }
    return out;
}

}  // namespace poseanim::data
