// Binary model file primitives.
//
// Every model file starts with the magic string "PATHSRL", a format version
// and a file-kind byte. Integers are little-endian; floating point values
// are IEEE double bit patterns, little-endian, written row-major for
// matrices. The full layout is documented in docs/model_format.md.
#pragma once

#include <bit>
#include <cstdint>
#include <cstring>
#include <fstream>
#include <istream>
#include <ostream>
#include <string>
#include <vector>

#include "pathsrl/dict.hpp"
#include "pathsrl/errors.hpp"
#include "pathsrl/lstm.hpp"

namespace pathsrl {

inline constexpr char kMagic[] = "PATHSRL";  // 7 bytes, no terminator on disk
inline constexpr std::uint32_t kFormatVersion = 1;

enum class FileKind : std::uint8_t {
  SrlNetwork = 0,
  PredicateClassifier = 1,
  Reranker = 2,
};

class BinaryWriter {
 public:
  explicit BinaryWriter(std::ostream& out) : out_(out) {}

  void u8(std::uint8_t v) { out_.put(static_cast<char>(v)); }
  void u32(std::uint32_t v) {
    for (int i = 0; i < 4; ++i) u8(static_cast<std::uint8_t>(v >> (8 * i)));
  }
  void u64(std::uint64_t v) {
    for (int i = 0; i < 8; ++i) u8(static_cast<std::uint8_t>(v >> (8 * i)));
  }
  void f64(double v) { u64(std::bit_cast<std::uint64_t>(v)); }
  void str(const std::string& s) {
    u64(s.size());
    out_.write(s.data(), static_cast<std::streamsize>(s.size()));
  }
  void header(FileKind kind) {
    out_.write(kMagic, 7);
    u32(kFormatVersion);
    u8(static_cast<std::uint8_t>(kind));
  }
  void vec(const Vec& v) {
    u64(static_cast<std::uint64_t>(v.size()));
    for (Eigen::Index i = 0; i < v.size(); ++i) f64(v(i));
  }
  void mat(const Mat& m) {
    u64(static_cast<std::uint64_t>(m.rows()));
    u64(static_cast<std::uint64_t>(m.cols()));
    for (Eigen::Index r = 0; r < m.rows(); ++r)
      for (Eigen::Index c = 0; c < m.cols(); ++c) f64(m(r, c));
  }
  void dict(const Dict& d) {
    u64(static_cast<std::uint64_t>(d.size()));
    for (const std::string& item : d.items()) str(item);
  }

 private:
  std::ostream& out_;
};

class BinaryReader {
 public:
  explicit BinaryReader(std::istream& in) : in_(in) {}

  std::uint8_t u8() {
    int c = in_.get();
    if (c == EOF) throw ValidationError("unexpected end of model file");
    return static_cast<std::uint8_t>(c);
  }
  std::uint32_t u32() {
    std::uint32_t v = 0;
    for (int i = 0; i < 4; ++i) v |= static_cast<std::uint32_t>(u8()) << (8 * i);
    return v;
  }
  std::uint64_t u64() {
    std::uint64_t v = 0;
    for (int i = 0; i < 8; ++i) v |= static_cast<std::uint64_t>(u8()) << (8 * i);
    return v;
  }
  double f64() { return std::bit_cast<double>(u64()); }
  std::string str() {
    const std::uint64_t n = u64();
    std::string s(n, '\0');
    in_.read(s.data(), static_cast<std::streamsize>(n));
    if (static_cast<std::uint64_t>(in_.gcount()) != n)
      throw ValidationError("unexpected end of model file");
    return s;
  }
  FileKind header() {
    char magic[7];
    in_.read(magic, 7);
    if (in_.gcount() != 7 || std::memcmp(magic, kMagic, 7) != 0)
      throw ValidationError("not a model file (bad magic)");
    const std::uint32_t version = u32();
    if (version != kFormatVersion)
      throw ValidationError("unsupported model format version " + std::to_string(version));
    return static_cast<FileKind>(u8());
  }
  void expect(FileKind kind) {
    if (header() != kind) throw ValidationError("unexpected model file kind");
  }
  Vec vec() {
    const std::uint64_t n = u64();
    Vec v(static_cast<Eigen::Index>(n));
    for (std::uint64_t i = 0; i < n; ++i) v(static_cast<Eigen::Index>(i)) = f64();
    return v;
  }
  Mat mat() {
    const std::uint64_t rows = u64();
    const std::uint64_t cols = u64();
    Mat m(static_cast<Eigen::Index>(rows), static_cast<Eigen::Index>(cols));
    for (std::uint64_t r = 0; r < rows; ++r)
      for (std::uint64_t c = 0; c < cols; ++c)
        m(static_cast<Eigen::Index>(r), static_cast<Eigen::Index>(c)) = f64();
    return m;
  }
  Dict dict() {
    const std::uint64_t n = u64();
    std::vector<std::string> items;
    items.reserve(n);
    for (std::uint64_t i = 0; i < n; ++i) items.push_back(str());
    return Dict::from_items(std::move(items), /*frozen=*/true);
  }

 private:
  std::istream& in_;
};

inline std::ofstream open_for_write(const std::string& path) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw IoError("cannot write " + path);
  return out;
}

inline std::ifstream open_for_read(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot read " + path);
  return in;
}

}  // namespace pathsrl
