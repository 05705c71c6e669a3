#include "sgrace/matrix_io.hpp"

#include <bit>
#include <cstring>
#include <fstream>
#include <vector>

#include "sgrace/types.hpp"

namespace sgrace {

namespace {

constexpr char kMagic[4] = {'S', 'G', 'R', 'C'};

void put_u16(std::vector<unsigned char>& buf, uint16_t v) {
  buf.push_back(static_cast<unsigned char>(v & 0xff));
  buf.push_back(static_cast<unsigned char>((v >> 8) & 0xff));
}

void put_u32(std::vector<unsigned char>& buf, uint32_t v) {
  for (int i = 0; i < 4; ++i) buf.push_back(static_cast<unsigned char>((v >> (8 * i)) & 0xff));
}

uint16_t get_u16(const unsigned char* p) {
  return static_cast<uint16_t>(p[0] | (p[1] << 8));
}

uint32_t get_u32(const unsigned char* p) {
  return static_cast<uint32_t>(p[0]) | (static_cast<uint32_t>(p[1]) << 8) |
         (static_cast<uint32_t>(p[2]) << 16) | (static_cast<uint32_t>(p[3]) << 24);
}

}  // namespace

void write_matrix(const std::filesystem::path& path, const Eigen::MatrixXd& m) {
  std::vector<unsigned char> buf;
  buf.reserve(16 + static_cast<size_t>(m.size()) * 4);
  buf.insert(buf.end(), kMagic, kMagic + 4);
  put_u16(buf, kDumpFormatVersion);
  put_u16(buf, 0);  // reserved
  put_u32(buf, static_cast<uint32_t>(m.rows()));
  put_u32(buf, static_cast<uint32_t>(m.cols()));
  for (Eigen::Index r = 0; r < m.rows(); ++r) {
    for (Eigen::Index c = 0; c < m.cols(); ++c) {
      uint32_t bits = std::bit_cast<uint32_t>(static_cast<float>(m(r, c)));
      put_u32(buf, bits);
    }
  }
  std::ofstream f(path, std::ios::binary | std::ios::trunc);
  if (!f) throw Error("cannot open for writing: " + path.string());
  f.write(reinterpret_cast<const char*>(buf.data()), static_cast<std::streamsize>(buf.size()));
  if (!f) throw Error("write failed: " + path.string());
}

Eigen::MatrixXd read_matrix(const std::filesystem::path& path) {
  std::ifstream f(path, std::ios::binary);
  if (!f) throw Error("cannot open: " + path.string());
  std::vector<unsigned char> buf((std::istreambuf_iterator<char>(f)),
                                 std::istreambuf_iterator<char>());
  if (buf.size() < 16) throw Error("truncated dump header: " + path.string());
  if (std::memcmp(buf.data(), kMagic, 4) != 0) {
    throw Error("bad magic (expected SGRC): " + path.string());
  }
  uint16_t version = get_u16(buf.data() + 4);
  if (version != kDumpFormatVersion) {
    throw Error("unsupported dump version " + std::to_string(version) + ": " + path.string());
  }
  uint32_t rows = get_u32(buf.data() + 8);
  uint32_t cols = get_u32(buf.data() + 12);
  size_t expect = 16 + static_cast<size_t>(rows) * cols * 4;
  if (buf.size() != expect) {
    throw Error("dump size mismatch (" + std::to_string(buf.size()) + " vs " +
                std::to_string(expect) + "): " + path.string());
  }
  Eigen::MatrixXd m(rows, cols);
  const unsigned char* p = buf.data() + 16;
  for (uint32_t r = 0; r < rows; ++r) {
    for (uint32_t c = 0; c < cols; ++c) {
      m(r, c) = static_cast<double>(std::bit_cast<float>(get_u32(p)));
      p += 4;
    }
  }
  return m;
}

}  // namespace sgrace
