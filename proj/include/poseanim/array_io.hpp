#pragma once

#include "poseanim/tensor.hpp"

#include <filesystem>
#include <map>
#include <string>
#include <vector>

namespace poseanim {

/// Directory of named arrays: a text manifest ("name = dtype d0 d1 ...")
/// plus one raw little-endian binary file per array, row-major.
/// Used for body models, checkpoints and dataset clips.
class ArrayDirWriter {
  public:
    explicit ArrayDirWriter(const std::filesystem::path& dir);
    void add_f64(const std::string& name, const Tensor<double>& t);
    void add_f32(const std::string& name, const Tensor<float>& t);
    void add_scalar(const std::string& name, double v);
    /// Writes the manifest; call once, last.
    void finish();

  private:
    void add_raw(const std::string& name, const std::string& dtype, const Shape& shape, const void* data,
                 std::size_t bytes);
    std::filesystem::path dir_;
    std::vector<std::string> lines_;
    bool finished_ = false;
};

class ArrayDirReader {
  public:
    explicit ArrayDirReader(const std::filesystem::path& dir);
    bool has(const std::string& name) const;
    Tensor<double> get_f64(const std::string& name) const;
    Tensor<float> get_f32(const std::string& name) const;
    double get_scalar(const std::string& name) const;
    std::vector<std::string> names() const;

  private:
    struct Entry {
        std::string dtype;
        Shape shape;
    };
    const Entry& entry(const std::string& name) const;
    std::filesystem::path dir_;
    std::map<std::string, Entry> entries_;
    std::vector<std::string> order_;
};

void write_file_bytes(const std::filesystem::path& path, const void* data, std::size_t bytes);
std::vector<char> read_file_bytes(const std::filesystem::path& path);

}  // namespace poseanim
