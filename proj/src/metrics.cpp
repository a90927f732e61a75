#include "poseanim/metrics.hpp"

#include <cmath>
#include <iomanip>
#include <sstream>

namespace poseanim::metrics {

namespace {
Tensor<double> clamped(Tensor<double> t) {
    for (std::int64_t i = 0; i < t.numel(); ++i) t[i] = std::clamp(t[i], 0.0, 1.0);
    return t;
}
}  // namespace

FramePair::FramePair(Tensor<double> pred, Tensor<double> targ)
    : predicted(clamped(std::move(pred))), target(clamped(std::move(targ))) {
    if (!predicted.same_shape(target))
        throw std::invalid_argument("FramePair: shape mismatch " + shape_str(predicted.shape()) + " vs " +
                                    shape_str(target.shape()));
    if (predicted.rank() != 3 || predicted.dim(2) != 3)
        throw std::invalid_argument("FramePair: frames must be H×W×3");
}

double l1_error(const FramePair& pair) {
    double acc = 0;
    for (std::int64_t i = 0; i < pair.predicted.numel(); ++i)
        acc += std::abs(pair.predicted[i] - pair.target[i]);
    return acc / static_cast<double>(pair.predicted.numel());
}

double psnr(const FramePair& pair) {
    double mse = 0;
    for (std::int64_t i = 0; i < pair.predicted.numel(); ++i) {
        const double d = pair.predicted[i] - pair.target[i];
        mse += d * d;
    }
    mse /= static_cast<double>(pair.predicted.numel());
    if (mse == 0.0) return kPsnrCap;
    return std::min(kPsnrCap, 10.0 * std::log10(1.0 / mse));
}

double ssim(const FramePair& pair) {
    const int h = static_cast<int>(pair.predicted.dim(0));
    const int w = static_cast<int>(pair.predicted.dim(1));
    constexpr int kWin = 11;
    if (h < kWin || w < kWin) throw std::invalid_argument("ssim: image smaller than 11×11 window");

    // 11-tap Gaussian, σ=1.5, normalized.
    double g[kWin];
    double gsum = 0;
    for (int i = 0; i < kWin; ++i) {
        const double d = i - (kWin - 1) / 2.0;
        g[i] = std::exp(-d * d / (2.0 * 1.5 * 1.5));
        gsum += g[i];
    }
    for (double& v : g) v /= gsum;

    constexpr double c1 = 0.01 * 0.01, c2 = 0.03 * 0.03;
    double total = 0;
    std::int64_t count = 0;
    for (int ch = 0; ch < 3; ++ch) {
        for (int y = 0; y + kWin <= h; ++y) {
            for (int x = 0; x + kWin <= w; ++x) {
                double mu1 = 0, mu2 = 0, s11 = 0, s22 = 0, s12 = 0;
                for (int i = 0; i < kWin; ++i) {
                    for (int j = 0; j < kWin; ++j) {
                        const double wgt = g[i] * g[j];
                        const double a = pair.predicted.at(y + i, x + j, ch);
                        const double b = pair.target.at(y + i, x + j, ch);
                        mu1 += wgt * a;
                        mu2 += wgt * b;
                        s11 += wgt * a * a;
                        s22 += wgt * b * b;
                        s12 += wgt * a * b;
                    }
                }
                const double var1 = s11 - mu1 * mu1;
                const double var2 = s22 - mu2 * mu2;
                const double cov = s12 - mu1 * mu2;
                total += ((2 * mu1 * mu2 + c1) * (2 * cov + c2)) /
                         ((mu1 * mu1 + mu2 * mu2 + c1) * (var1 + var2 + c2));
                ++count;
            }
        }
    }
    return total / static_cast<double>(count);
}

std::string MetricsReport::to_table() const {
    std::ostringstream os;
    os << std::left;
    for (const auto& [k, v] : lines) os << std::setw(28) << k << std::setprecision(8) << v << "\n";
    return os.str();
}

std::string MetricsReport::to_machine_text() const {
    std::ostringstream os;
    for (const auto& [k, v] : lines) os << k << "=" << std::setprecision(12) << v << "\n";
    return os.str();
}

}  // namespace poseanim::metrics
