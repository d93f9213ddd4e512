#pragma once

#include <cstdint>
#include <filesystem>
#include <span>
#include <vector>

#include "fkp/grid.hpp"

namespace fkp::io {

/// Equation parameters stored alongside a field.
struct FieldMeta {
  double alpha = 2.0;
  double c = 1.0;
  double sigma = -1.0;
};

struct StoredField {
  RealField field;
  FieldMeta meta;
};

inline constexpr char kFieldMagic[4] = {'F', 'K', 'P', 'L'};
inline constexpr std::uint32_t kFieldVersion = 1;
inline constexpr std::size_t kFieldHeaderBytes = 4 + 4 + 4 + 4 + 5 * 8;

/// Little-endian layout: "FKPL", u32 version, u32 nx, u32 ny, f64 lx, f64 ly,
/// f64 alpha, f64 c, f64 sigma, then nx*ny f64 values row-major.
std::vector<std::uint8_t> encode_field(const RealField& field, const FieldMeta& meta);

/// Throws ErrorCode::magic_mismatch, version_mismatch or truncated_file; other
/// corruption is reported as invalid_field with the byte offset.
StoredField decode_field(std::span<const std::uint8_t> bytes);

void save_field(const std::filesystem::path& path, const RealField& field, const FieldMeta& meta);
StoredField load_field(const std::filesystem::path& path);

}  // namespace fkp::io
