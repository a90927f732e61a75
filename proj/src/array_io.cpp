#include "poseanim/array_io.hpp"

#include <cstring>
#include <fstream>
#include <sstream>

namespace poseanim {

namespace fs = std::filesystem;

void write_file_bytes(const fs::path& path, const void* data, std::size_t bytes) {
    std::ofstream f(path, std::ios::binary | std::ios::trunc);
    if (!f) throw std::runtime_error("cannot open for write: " + path.string());
    f.write(static_cast<const char*>(data), static_cast<std::streamsize>(bytes));
    if (!f) throw std::runtime_error("write failed: " + path.string());
}

std::vector<char> read_file_bytes(const fs::path& path) {
    std::ifstream f(path, std::ios::binary | std::ios::ate);
    if (!f) throw std::runtime_error("cannot open for read: " + path.string());
    std::vector<char> buf(static_cast<std::size_t>(f.tellg()));
    f.seekg(0);
    f.read(buf.data(), static_cast<std::streamsize>(buf.size()));
    if (!f) throw std::runtime_error("read failed: " + path.string());
    return buf;
}

ArrayDirWriter::ArrayDirWriter(const fs::path& dir) : dir_(dir) { fs::create_directories(dir_); }

void ArrayDirWriter::add_raw(const std::string& name, const std::string& dtype, const Shape& shape,
                             const void* data, std::size_t bytes) {
    if (name.find_first_of(" =/\\") != std::string::npos)
        throw std::invalid_argument("bad array name: " + name);
    write_file_bytes(dir_ / (name + ".bin"), data, bytes);
    std::ostringstream line;
    line << name << " = " << dtype;
    for (auto d : shape) line << " " << d;
    lines_.push_back(line.str());
}

void ArrayDirWriter::add_f64(const std::string& name, const Tensor<double>& t) {
    add_raw(name, "f64", t.shape(), t.data(), static_cast<std::size_t>(t.numel()) * sizeof(double));
}

void ArrayDirWriter::add_f32(const std::string& name, const Tensor<float>& t) {
    add_raw(name, "f32", t.shape(), t.data(), static_cast<std::size_t>(t.numel()) * sizeof(float));
}

void ArrayDirWriter::add_scalar(const std::string& name, double v) {
    add_f64(name, Tensor<double>({1}, {v}));
}

void ArrayDirWriter::finish() {
    if (finished_) throw std::logic_error("ArrayDirWriter::finish called twice");
    finished_ = true;
    std::ostringstream out;
    for (const auto& l : lines_) out << l << "\n";
    const std::string s = out.str();
    write_file_bytes(dir_ / "manifest.txt", s.data(), s.size());
}

ArrayDirReader::ArrayDirReader(const fs::path& dir) : dir_(dir) {
    std::ifstream f(dir_ / "manifest.txt");
    if (!f) throw std::runtime_error("missing manifest: " + (dir_ / "manifest.txt").string());
    std::string line;
    while (std::getline(f, line)) {
        if (line.empty()) continue;
        std::istringstream is(line);
        std::string name, eq, dtype;
        is >> name >> eq >> dtype;
        if (eq != "=") throw std::runtime_error("malformed manifest line: " + line);
        Entry e;
        e.dtype = dtype;
        std::int64_t d;
        while (is >> d) e.shape.push_back(d);
        entries_[name] = e;
        order_.push_back(name);
    }
}

bool ArrayDirReader::has(const std::string& name) const { return entries_.count(name) != 0; }

const ArrayDirReader::Entry& ArrayDirReader::entry(const std::string& name) const {
    auto it = entries_.find(name);
    if (it == entries_.end()) throw std::runtime_error("array not in manifest: " + name + " (" + dir_.string() + ")");
    return it->second;
}

std::vector<std::string> ArrayDirReader::names() const { return order_; }

Tensor<double> ArrayDirReader::get_f64(const std::string& name) const {
    const Entry& e = entry(name);
    if (e.dtype != "f64") throw std::runtime_error("array " + name + " has dtype " + e.dtype + ", wanted f64");
    auto bytes = read_file_bytes(dir_ / (name + ".bin"));
    Tensor<double> t(e.shape);
    if (bytes.size() != static_cast<std::size_t>(t.numel()) * sizeof(double))
        throw std::runtime_error("array " + name + ": file size does not match manifest shape");
    std::memcpy(t.data(), bytes.data(), bytes.size());
    return t;
}

Tensor<float> ArrayDirReader::get_f32(const std::string& name) const {
    const Entry& e = entry(name);
    if (e.dtype != "f32") throw std::runtime_error("array " + name + " has dtype " + e.dtype + ", wanted f32");
    auto bytes = read_file_bytes(dir_ / (name + ".bin"));
    Tensor<float> t(e.shape);
    if (bytes.size() != static_cast<std::size_t>(t.numel()) * sizeof(float))
        throw std::runtime_error("array " + name + ": file size does not match manifest shape");
    std::memcpy(t.data(), bytes.data(), bytes.size());
    return t;
}

double ArrayDirReader::get_scalar(const std::string& name) const {
    auto t = get_f64(name);
    if (t.numel() != 1) throw std::runtime_error("array " + name + " is not a scalar");
    return t[0];
}

}  // namespace poseanim
