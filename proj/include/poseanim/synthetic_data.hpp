#pragma once

#include "poseanim/body_model.hpp"
#include "poseanim/renderer.hpp"
#include "poseanim/tensor.hpp"

#include <array>
#include <filesystem>
#include <random>
#include <vector>

namespace poseanim::data {

using Rng = std::mt19937_64;

/// Ground-truth identity: shape vector plus a per-part color palette. The
/// concatenation is the identity code fed to the identity encoder.
struct IdentitySpec {
    body::VectorXd beta;
    std::vector<std::array<double, 3>> palette;  // one RGB per body part, in [0,1]

    body::VectorXd identity_code() const;
    int code_length() const { return static_cast<int>(beta.size() + 3 * palette.size()); }
};

/// Per-joint, per-axis sinusoids plus a root translation drift.
struct MotionScript {
    Eigen::MatrixXd amplitude;  // K×3, radians, capped
    Eigen::MatrixXd frequency;  // K×3, cycles per clip
    Eigen::MatrixXd phase;      // K×3
    body::Vector3d drift_amplitude = body::Vector3d::Zero();
    body::Vector3d drift_frequency = body::Vector3d::Zero();
    body::Vector3d drift_phase = body::Vector3d::Zero();
};

constexpr double kMaxJointAmplitude = 0.45;  // keeps frame-to-frame steps under 0.35 rad

struct ClipSample {
    Tensor<float> frames;           // T×H×W×3, identity palette
    Tensor<float> render_maps;      // T×H×W×3, neutral shading (identity-free)
    Tensor<float> skeleton_maps;    // T×H×W×3
    Tensor<float> reference_frame;  // H×W×3, rest pose with identity palette
    IdentitySpec identity;
    render::PoseSequence params;
};

struct DataConfig {
    int frames_per_clip = 14;
    int height = 64;
    int width = 96;
};

IdentitySpec sample_identity(Rng& rng, int shape_dim, int part_count);
MotionScript sample_motion(Rng& rng, int joint_count);
/// θ_f[k] = A[k]·sin(2π·freq[k]·f/T + phase[k]) per axis, plus root drift.
render::PoseSequence realize_motion(const MotionScript& script, const IdentitySpec& identity, int frames,
                                    const render::Camera& camera);

ClipSample generate_clip(const body::BodyModelLite& model, const IdentitySpec& identity,
                         const MotionScript& motion, const render::Camera& camera, int frames,
                         int height, int width);

/// Writes `count` clips under out_dir (manifest.json index + per-clip array
/// dirs + preview PNGs). Byte-deterministic for a given (seed, config).
void build_dataset(const body::BodyModelLite& model, int count, std::uint64_t seed,
                   const std::filesystem::path& out_dir, const DataConfig& config);

std::vector<ClipSample> load_dataset(const std::filesystem::path& dir);

}  // namespace poseanim::data
