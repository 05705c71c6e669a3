#pragma once

#include <Eigen/Dense>
#include <cstdint>
#include <filesystem>

namespace sgrace {

// Embedding dump format: 16-byte little-endian header
//   bytes 0..3   magic "SGRC"
//   bytes 4..5   format version (u16)
//   bytes 6..7   reserved, zero
//   bytes 8..11  rows (u32)
//   bytes 12..15 cols (u32)
// followed by row-major 32-bit little-endian floats. The in-memory path is
// 64-bit; dumps are 32-bit by design.
inline constexpr uint16_t kDumpFormatVersion = 1;

void write_matrix(const std::filesystem::path& path, const Eigen::MatrixXd& m);
Eigen::MatrixXd read_matrix(const std::filesystem::path& path);

}  // namespace sgrace
