#pragma once

#include "poseanim/tensor.hpp"

#include <cstdint>
#include <filesystem>
#include <vector>

namespace poseanim {

/// Minimal RGB8 PNG writer (zlib-backed, no interlace).
void write_png_rgb8(const std::filesystem::path& path, int height, int width,
                    const std::vector<std::uint8_t>& rgb);

/// [0,1] float image H×W×3 -> PNG with round(v*255).
template <typename T>
void write_png_image(const std::filesystem::path& path, const Tensor<T>& image) {
    if (image.rank() != 3 || image.dim(2) != 3)
        throw std::invalid_argument("write_png_image: want H×W×3, got " + shape_str(image.shape()));
    const int h = static_cast<int>(image.dim(0)), w = static_cast<int>(image.dim(1));
    std::vector<std::uint8_t> rgb(static_cast<std::size_t>(h) * w * 3);
    for (std::int64_t i = 0; i < image.numel(); ++i) {
        double v = static_cast<double>(image[i]);
        v = v < 0 ? 0 : (v > 1 ? 1 : v);
        rgb[static_cast<std::size_t>(i)] = static_cast<std::uint8_t>(v * 255.0 + 0.5);
    }
    write_png_rgb8(path, h, w, rgb);
}

}  // namespace poseanim
