#pragma once

#include "poseanim/tensor.hpp"

#include <string>
#include <vector>

namespace poseanim::metrics {

/// Predicted/target frames, H×W×3 in [0,1]. Values are clamped on
/// construction; shapes must match.
struct FramePair {
    Tensor<double> predicted;
    Tensor<double> target;

    FramePair(Tensor<double> pred, Tensor<double> targ);
};

/// Mean absolute difference over all elements.
double l1_error(const FramePair& pair);

/// 10·log10(1/MSE) at data range 1.0; identical frames return the 100 dB cap.
double psnr(const FramePair& pair);

/// Windowed SSIM: 11×11 Gaussian (σ=1.5), K1=0.01, K2=0.03, data range 1.0,
/// per-channel then averaged, valid-region convolution.
double ssim(const FramePair& pair);

constexpr double kPsnrCap = 100.0;

struct MetricsReport {
    std::vector<std::pair<std::string, double>> lines;  // name=value, in emit order
    std::string to_table() const;
    std::string to_machine_text() const;  // one "name=value" per line
};

}  // namespace poseanim::metrics
