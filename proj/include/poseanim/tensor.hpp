#pragma once

#include <Eigen/Core>

#include <cstdint>
#include <numeric>
#include <sstream>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace poseanim {

using Shape = std::vector<std::int64_t>;

inline std::int64_t shape_numel(const Shape& s) {
    std::int64_t n = 1;
    for (auto d : s) {
        if (d < 0) throw std::invalid_argument("negative dimension in shape");
        n *= d;
    }
    return n;
}

inline std::string shape_str(const Shape& s) {
    std::ostringstream os;
    os << "[";
    for (std::size_t i = 0; i < s.size(); ++i) os << (i ? " " : "") << s[i];
    os << "]";
    return os.str();
}

/// Dense row-major nd-array. The workhorse container for both network math
/// and file IO; geometry code uses Eigen types directly.
template <typename T>
class Tensor {
  public:
    Tensor() = default;
    explicit Tensor(Shape shape)
        : shape_(std::move(shape)), data_(static_cast<std::size_t>(shape_numel(shape_)), T(0)) {}
    Tensor(Shape shape, std::vector<T> data) : shape_(std::move(shape)), data_(std::move(data)) {
        if (static_cast<std::int64_t>(data_.size()) != shape_numel(shape_))
            throw std::invalid_argument("tensor data size does not match shape " + shape_str(shape_));
    }

    static Tensor full(Shape shape, T v) {
        Tensor t(std::move(shape));
        t.fill(v);
        return t;
    }

    const Shape& shape() const { return shape_; }
    int rank() const { return static_cast<int>(shape_.size()); }
    std::int64_t dim(int i) const { return shape_.at(static_cast<std::size_t>(i)); }
    std::int64_t numel() const { return static_cast<std::int64_t>(data_.size()); }
    bool empty() const { return data_.empty(); }

    T* data() { return data_.data(); }
    const T* data() const { return data_.data(); }
    T& operator[](std::int64_t i) { return data_[static_cast<std::size_t>(i)]; }
    const T& operator[](std::int64_t i) const { return data_[static_cast<std::size_t>(i)]; }

    void fill(T v) { std::fill(data_.begin(), data_.end(), v); }

    /// Reinterpret with a new shape of equal element count.
    void set_shape(Shape s) {
        if (shape_numel(s) != numel())
            throw std::invalid_argument("reshape " + shape_str(shape_) + " -> " + shape_str(s) +
                                        ": element count mismatch");
        shape_ = std::move(s);
    }
    Tensor reshaped(Shape s) const {
        Tensor t = *this;
        t.set_shape(std::move(s));
        return t;
    }

    std::int64_t offset(std::initializer_list<std::int64_t> idx) const {
        std::int64_t off = 0;
        int i = 0;
        for (auto v : idx) off = off * shape_[static_cast<std::size_t>(i++)] + v;
        return off;
    }
    template <typename... I>
    T& at(I... idx) {
        return data_[static_cast<std::size_t>(offset({static_cast<std::int64_t>(idx)...}))];
    }
    template <typename... I>
    const T& at(I... idx) const {
        return data_[static_cast<std::size_t>(offset({static_cast<std::int64_t>(idx)...}))];
    }

    using MatMap = Eigen::Map<Eigen::Matrix<T, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>>;
    using CMatMap = Eigen::Map<const Eigen::Matrix<T, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>>;
    using VecMap = Eigen::Map<Eigen::Matrix<T, Eigen::Dynamic, 1>>;
    using CVecMap = Eigen::Map<const Eigen::Matrix<T, Eigen::Dynamic, 1>>;

    MatMap mat(std::int64_t rows, std::int64_t cols) {
        if (rows * cols != numel()) throw std::invalid_argument("mat view size mismatch");
        return MatMap(data(), rows, cols);
    }
    CMatMap mat(std::int64_t rows, std::int64_t cols) const {
        if (rows * cols != numel()) throw std::invalid_argument("mat view size mismatch");
        return CMatMap(data(), rows, cols);
    }
    /// View with the last dimension as columns.
    MatMap rows_by_last() {
        std::int64_t c = rank() > 0 ? shape_.back() : 1;
        return mat(c ? numel() / c : 0, c);
    }
    CMatMap rows_by_last() const {
        std::int64_t c = rank() > 0 ? shape_.back() : 1;
        return mat(c ? numel() / c : 0, c);
    }
    VecMap vec() { return VecMap(data(), numel()); }
    CVecMap vec() const { return CVecMap(data(), numel()); }

    bool same_shape(const Tensor& o) const { return shape_ == o.shape_; }

    bool all_finite() const {
        for (const T& v : data_)
            if (!std::isfinite(static_cast<double>(v))) return false;
        return true;
    }

  private:
    Shape shape_;
    std::vector<T> data_;
};

using Tensorf = Tensor<float>;
using Tensord = Tensor<double>;

template <typename T>
void require_shape(const Tensor<T>& t, const Shape& s, const char* what) {
    if (t.shape() != s)
        throw std::invalid_argument(std::string(what) + ": expected shape " + shape_str(s) + ", got " +
                                    shape_str(t.shape()));
}

/// Generic axis permutation, row-major. permute(x, {2,0,1}) puts old axis 2 first.
template <typename T>
Tensor<T> permute(const Tensor<T>& x, const std::vector<int>& axes) {
    const int r = x.rank();
    if (static_cast<int>(axes.size()) != r) throw std::invalid_argument("permute: axes rank mismatch");
    Shape out_shape(static_cast<std::size_t>(r));
    for (int i = 0; i < r; ++i) out_shape[static_cast<std::size_t>(i)] = x.dim(axes[static_cast<std::size_t>(i)]);
    Tensor<T> out(out_shape);
    if (x.numel() == 0) return out;

    std::vector<std::int64_t> in_strides(static_cast<std::size_t>(r), 1);
    for (int i = r - 2; i >= 0; --i)
        in_strides[static_cast<std::size_t>(i)] = in_strides[static_cast<std::size_t>(i + 1)] * x.dim(i + 1);

    std::vector<std::int64_t> idx(static_cast<std::size_t>(r), 0);
    const std::int64_t n = out.numel();
    for (std::int64_t o = 0; o < n; ++o) {
        std::int64_t src = 0;
        for (int i = 0; i < r; ++i)
            src += idx[static_cast<std::size_t>(i)] * in_strides[static_cast<std::size_t>(axes[static_cast<std::size_t>(i)])];
        out[o] = x[src];
        for (int i = r - 1; i >= 0; --i) {
            if (++idx[static_cast<std::size_t>(i)] < out_shape[static_cast<std::size_t>(i)]) break;
            idx[static_cast<std::size_t>(i)] = 0;
        }
    }
    return out;
}

inline std::vector<int> inverse_axes(const std::vector<int>& axes) {
    std::vector<int> inv(axes.size());
    for (std::size_t i = 0; i < axes.size(); ++i) inv[static_cast<std::size_t>(axes[i])] = static_cast<int>(i);
    return inv;
}

}  // namespace poseanim
