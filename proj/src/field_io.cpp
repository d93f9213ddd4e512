#include "fkp/field_io.hpp"

#include <bit>
#include <cmath>
#include <cstring>
#include <fstream>
#include <iterator>
#include <optional>
#include <sstream>

#include "fkp/error.hpp"

namespace fkp::io {

namespace {

template <typename T>
void put_le(std::vector<std::uint8_t>& out, T value) {
  std::uint8_t raw[sizeof(T)];
  std::memcpy(raw, &value, sizeof(T));
  if constexpr (std::endian::native == std::endian::big) {
    for (std::size_t i = 0; i < sizeof(T); ++i) out.push_back(raw[sizeof(T) - 1 - i]);
  } else {
    out.insert(out.end(), raw, raw + sizeof(T));
  }
}

template <typename T>
T get_le(std::span<const std::uint8_t> bytes, std::size_t offset) {
  std::uint8_t raw[sizeof(T)];
  for (std::size_t i = 0; i < sizeof(T); ++i) {
    raw[i] = std::endian::native == std::endian::big ? bytes[offset + sizeof(T) - 1 - i]
                                                      : bytes[offset + i];
  }
  T value;
  std::memcpy(&value, raw, sizeof(T));
  return value;
}

[[noreturn]] void corrupt(std::size_t offset, const std::string& what) {
  std::ostringstream os;
  os << "field file: " << what << " at byte offset " << offset;
  throw Error(ErrorCode::invalid_field, os.str());
}

}  // namespace

std::vector<std::uint8_t> encode_field(const RealField& field, const FieldMeta& meta) {
  const SpectralGrid& g = field.grid();
  std::vector<std::uint8_t> out;
  out.reserve(kFieldHeaderBytes + 8 * g.size());
  out.insert(out.end(), std::begin(kFieldMagic), std::end(kFieldMagic));
  put_le<std::uint32_t>(out, kFieldVersion);
  put_le<std::uint32_t>(out, static_cast<std::uint32_t>(g.nx()));
  put_le<std::uint32_t>(out, static_cast<std::uint32_t>(g.ny()));
  put_le<double>(out, g.lx());
  put_le<double>(out, g.ly());
  put_le<double>(out, meta.alpha);
  put_le<double>(out, meta.c);
  put_le<double>(out, meta.sigma);
  for (double v : field.values()) put_le<double>(out, v);
  return out;
}

StoredField decode_field(std::span<const std::uint8_t> bytes) {
  if (bytes.size() < 4) {
    throw Error(ErrorCode::truncated_file, "field file: shorter than the magic bytes");
  }
  if (std::memcmp(bytes.data(), kFieldMagic, 4) != 0) {
    throw Error(ErrorCode::magic_mismatch, "field file: magic bytes are not FKPL");
  }
  if (bytes.size() < kFieldHeaderBytes) {
    std::ostringstream os;
    os << "field file: header truncated at byte offset " << bytes.size();
    throw Error(ErrorCode::truncated_file, os.str());
  }
  const auto version = get_le<std::uint32_t>(bytes, 4);
  if (version != kFieldVersion) {
    std::ostringstream os;
    os << "field file: version " << version << " (expected " << kFieldVersion << ")";
    throw Error(ErrorCode::version_mismatch, os.str());
  }
  const auto nx = get_le<std::uint32_t>(bytes, 8);
  const auto ny = get_le<std::uint32_t>(bytes, 12);
  const double lx = get_le<double>(bytes, 16);
  const double ly = get_le<double>(bytes, 24);
  FieldMeta meta;
  meta.alpha = get_le<double>(bytes, 32);
  meta.c = get_le<double>(bytes, 40);
  meta.sigma = get_le<double>(bytes, 48);

  std::optional<SpectralGrid> grid;
  try {
    grid.emplace(nx, ny, lx, ly);
  } catch (const Error& e) {
    corrupt(8, std::string("invalid grid header (") + e.what() + ")");
  }
  const std::size_t expected = kFieldHeaderBytes + 8 * grid->size();
  if (bytes.size() < expected) {
    std::ostringstream os;
    os << "field file: payload truncated at byte offset " << bytes.size() << " (expected "
       << expected << " bytes)";
    throw Error(ErrorCode::truncated_file, os.str());
  }
  if (bytes.size() > expected) corrupt(expected, "trailing bytes");

  std::vector<double> values(grid->size());
  for (std::size_t i = 0; i < values.size(); ++i) {
    const std::size_t offset = kFieldHeaderBytes + 8 * i;
    values[i] = get_le<double>(bytes, offset);
    if (!std::isfinite(values[i])) corrupt(offset, "non-finite value");
  }
  return {RealField(*grid, std::move(values)), meta};
}

void save_field(const std::filesystem::path& path, const RealField& field, const FieldMeta& meta) {
  const auto bytes = encode_field(field, meta);
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw Error(ErrorCode::io_failure, "cannot open " + path.string() + " for writing");
  out.write(reinterpret_cast<const char*>(bytes.data()), static_cast<std::streamsize>(bytes.size()));
  if (!out) throw Error(ErrorCode::io_failure, "write failed for " + path.string());
}

StoredField load_field(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorCode::io_failure, "cannot open " + path.string());
  std::vector<std::uint8_t> bytes((std::istreambuf_iterator<char>(in)),
                                  std::istreambuf_iterator<char>());
  return decode_field(bytes);
}

}  // namespace fkp::io
