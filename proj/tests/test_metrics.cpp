#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "poseanim/metrics.hpp"

#include <cmath>
#include <random>

using namespace poseanim;
using namespace poseanim::metrics;

namespace {

Tensor<double> random_frame(int h, int w, std::mt19937_64& rng) {
    Tensor<double> t({h, w, 3});
    std::uniform_real_distribution<double> u(0.0, 1.0);
    for (std::int64_t i = 0; i < t.numel(); ++i) t[i] = u(rng);
    return t;
}

/// Independent SSIM oracle: direct double loops, no separability tricks.
double ssim_bruteforce(const Tensor<double>& a, const Tensor<double>& b) {
    const int h = static_cast<int>(a.shape()[0]);
    const int w = static_cast<int>(a.shape()[1]);
    const int half = 5;
    double weight[11][11];
    double wsum = 0;
    for (int i = 0; i < 11; ++i)
        for (int j = 0; j < 11; ++j) {
            const double di = i - half, dj = j - half;
            weight[i][j] = std::exp(-(di * di + dj * dj) / (2.0 * 1.5 * 1.5));
            wsum += weight[i][j];
        }
    for (int i = 0; i < 11; ++i)
        for (int j = 0; j < 11; ++j) weight[i][j] /= wsum;

    const double c1 = 0.01 * 0.01, c2 = 0.03 * 0.03;
    double total = 0;
    std::int64_t count = 0;
    for (int c = 0; c < 3; ++c)
        for (int y = half; y + half < h; ++y)
            for (int x = half; x + half < w; ++x) {
                double mu_a = 0, mu_b = 0;
                for (int i = -half; i <= half; ++i)
                    for (int j = -half; j <= half; ++j) {
                        mu_a += weight[i + half][j + half] * a.at(y + i, x + j, c);
                        mu_b += weight[i + half][j + half] * b.at(y + i, x + j, c);
                    }
                double va = 0, vb = 0, cov = 0;
                for (int i = -half; i <= half; ++i)
                    for (int j = -half; j <= half; ++j) {
                        const double da = a.at(y + i, x + j, c) - mu_a;
                        const double db = b.at(y + i, x + j, c) - mu_b;
                        va += weight[i + half][j + half] * da * da;
                        vb += weight[i + half][j + half] * db * db;
                        cov += weight[i + half][j + half] * da * db;
                    }
                total += ((2 * mu_a * mu_b + c1) * (2 * cov + c2)) /
                         ((mu_a * mu_a + mu_b * mu_b + c1) * (va + vb + c2));
                ++count;
            }
    return total / static_cast<double>(count);
}

}  // namespace

TEST_CASE("l1 basics") {
    Tensor<double> a({4, 4, 3});
    Tensor<double> b({4, 4, 3});
    for (std::int64_t i = 0; i < a.numel(); ++i) { a[i] = 0.5; b[i] = 0.25; }
    CHECK(l1_error(FramePair(a, b)) == doctest::Approx(0.25).epsilon(1e-12));
    CHECK(l1_error(FramePair(a, a)) == 0.0);
    // Symmetric in its arguments.
    CHECK(l1_error(FramePair(a, b)) == l1_error(FramePair(b, a)));
}

TEST_CASE("psnr analytic values exact to 1e-9") {
    Tensor<double> zero({8, 8, 3});
    zero.fill(0.0);
    Tensor<double> off({8, 8, 3});

    off.fill(0.1);
    CHECK(std::abs(psnr(FramePair(zero, off)) - 20.0) < 1e-9);

    off.fill(0.01);
    CHECK(std::abs(psnr(FramePair(zero, off)) - 40.0) < 1e-9);

    CHECK(psnr(FramePair(zero, zero)) == kPsnrCap);
}

TEST_CASE("psnr symmetry and monotonicity") {
    std::mt19937_64 rng(7);
    const auto a = random_frame(16, 16, rng);
    const auto b = random_frame(16, 16, rng);
    CHECK(psnr(FramePair(a, b)) == doctest::Approx(psnr(FramePair(b, a))).epsilon(1e-14));

    Tensor<double> near = a;
    for (std::int64_t i = 0; i < near.numel(); ++i) near[i] = std::min(1.0, near[i] + 0.001);
    CHECK(psnr(FramePair(a, near)) > psnr(FramePair(a, b)));
}

TEST_CASE("ssim of identical frames is 1") {
    std::mt19937_64 rng(11);
    const auto a = random_frame(20, 24, rng);
    CHECK(ssim(FramePair(a, a)) == doctest::Approx(1.0).epsilon(1e-12));
}

TEST_CASE("ssim matches brute-force oracle to 1e-8") {
    std::mt19937_64 rng(13);
    const auto a = random_frame(24, 20, rng);
    const auto b = random_frame(24, 20, rng);
    CHECK(std::abs(ssim(FramePair(a, b)) - ssim_bruteforce(a, b)) < 1e-8);

    // Correlated pair (smooth ramp vs noisy ramp) for a second data point.
    Tensor<double> r1({18, 22, 3}), r2({18, 22, 3});
    std::normal_distribution<double> n(0.0, 0.05);
    for (int y = 0; y < 18; ++y)
        for (int x = 0; x < 22; ++x)
            for (int c = 0; c < 3; ++c) {
                const double v = (y + x) / 40.0;
                r1.at(y, x, c) = v;
                r2.at(y, x, c) = std::clamp(v + n(rng), 0.0, 1.0);
            }
    CHECK(std::abs(ssim(FramePair(r1, r2)) - ssim_bruteforce(r1, r2)) < 1e-8);
    CHECK(ssim(FramePair(r1, r2)) > ssim(FramePair(a, b)));
}

TEST_CASE("ssim symmetry and flip invariance") {
    std::mt19937_64 rng(17);
    const auto a = random_frame(16, 20, rng);
    const auto b = random_frame(16, 20, rng);
    CHECK(ssim(FramePair(a, b)) == doctest::Approx(ssim(FramePair(b, a))).epsilon(1e-12));

    // Horizontal flip of both frames leaves SSIM unchanged.
    Tensor<double> af({16, 20, 3}), bf({16, 20, 3});
    for (int y = 0; y < 16; ++y)
        for (int x = 0; x < 20; ++x)
            for (int c = 0; c < 3; ++c) {
                af.at(y, x, c) = a.at(y, 19 - x, c);
                bf.at(y, x, c) = b.at(y, 19 - x, c);
            }
    CHECK(ssim(FramePair(af, bf)) == doctest::Approx(ssim(FramePair(a, b))).epsilon(1e-12));
}

TEST_CASE("frame pair validation") {
    Tensor<double> a({8, 8, 3});
    Tensor<double> wrong({8, 9, 3});
    CHECK_THROWS(FramePair(a, wrong));
    Tensor<double> flat({8 * 8 * 3});
    CHECK_THROWS(FramePair(a, flat));

    // Out-of-range inputs are clamped, not rejected.
    Tensor<double> hot({8, 8, 3});
    hot.fill(2.0);
    Tensor<double> one({8, 8, 3});
    one.fill(1.0);
    CHECK(l1_error(FramePair(hot, one)) == 0.0);
}

TEST_CASE("metrics report formatting") {
    MetricsReport report;
    report.lines = {{"l1", 0.25}, {"psnr", 20.0}};
    const auto machine = report.to_machine_text();
    CHECK(machine.find("l1=") != std::string::npos);
    CHECK(machine.find("psnr=") != std::string::npos);
    CHECK_FALSE(report.to_table().empty());
}
