#include "seedgrow/volume.hpp"

#include <algorithm>
#include <bit>
#include <cstring>
#include <filesystem>
#include <fstream>

#include <json.hpp>

namespace seedgrow {

namespace fs = std::filesystem;
using nlohmann::json;

void require_finite(const VolumeF& v, const std::string& what) {
  for (float x : v.data())
    if (!std::isfinite(x)) throw std::runtime_error(what + ": non-finite voxel value");
}

void require_binary(const VolumeU8& mask, const std::string& what) {
  for (uint8_t x : mask.data())
    if (x > 1) throw std::runtime_error(what + ": mask is not binary");
}

std::size_t count_set(const VolumeU8& mask) {
  std::size_t n = 0;
  for (uint8_t x : mask.data()) n += (x != 0);
  return n;
}

double masked_mean(const VolumeF& vol, const VolumeU8& mask) {
  if (!vol.same_geometry(mask)) throw std::invalid_argument("masked_mean: geometry mismatch");
  double sum = 0.0;
  std::size_t n = 0;
  for (std::size_t i = 0; i < vol.size(); ++i) {
    if (mask[i]) {
      sum += vol[i];
      ++n;
    }
  }
  if (n == 0) throw std::invalid_argument("masked_mean: empty mask");
  return sum / static_cast<double>(n);
}

double masked_percentile(const VolumeF& vol, const VolumeU8& mask, double p) {
  if (!vol.same_geometry(mask))
    throw std::invalid_argument("masked_percentile: geometry mismatch");
  if (!(p >= 0.0 && p <= 100.0))
    throw std::invalid_argument("masked_percentile: p outside [0, 100]");
  std::vector<float> vals;
  vals.reserve(vol.size() / 4);
  for (std::size_t i = 0; i < vol.size(); ++i)
    if (mask[i]) vals.push_back(vol[i]);
  if (vals.empty()) throw std::invalid_argument("masked_percentile: empty mask");
  std::sort(vals.begin(), vals.end());
  const double rank = p / 100.0 * static_cast<double>(vals.size() - 1);
  const auto lo = static_cast<std::size_t>(rank);
  const auto hi = std::min(lo + 1, vals.size() - 1);
  const double frac = rank - static_cast<double>(lo);
  return static_cast<double>(vals[lo]) + frac * (static_cast<double>(vals[hi]) - vals[lo]);
}

namespace {

constexpr const char* kOrder = "C-zyx";
constexpr const char* kEndian = "little";

json read_header(const std::string& stem) {
  const fs::path hpath = stem + ".json";
  std::ifstream in(hpath);
  if (!in) throw std::runtime_error("volume: cannot open header " + hpath.string());
  json h;
  try {
    in >> h;
  } catch (const json::exception& e) {
    throw std::runtime_error("volume: malformed header " + hpath.string() + ": " + e.what());
  }
  for (const char* key : {"shape", "spacing_mm", "dtype", "order", "endianness", "data"})
    if (!h.contains(key))
      throw std::runtime_error("volume: header " + hpath.string() + " missing field '" + key + "'");
  if (h["order"] != kOrder)
    throw std::runtime_error("volume: unsupported storage order " + h["order"].dump());
  if (h["endianness"] != kEndian)
    throw std::runtime_error("volume: unsupported endianness " + h["endianness"].dump());
  return h;
}

std::vector<unsigned char> read_payload(const std::string& stem, const json& header,
                                        std::size_t expected_bytes) {
  const fs::path dir = fs::path(stem).parent_path();
  const fs::path rpath = dir / header["data"].get<std::string>();
  std::ifstream in(rpath, std::ios::binary);
  if (!in) throw std::runtime_error("volume: cannot open data file " + rpath.string());
  std::vector<unsigned char> bytes((std::istreambuf_iterator<char>(in)),
                                   std::istreambuf_iterator<char>());
  if (bytes.size() != expected_bytes)
    throw std::runtime_error("volume: " + rpath.string() + " holds " +
                             std::to_string(bytes.size()) + " bytes, header implies " +
                             std::to_string(expected_bytes));
  return bytes;
}

std::array<int, 3> header_shape(const json& h) {
  auto v = h["shape"].get<std::vector<int>>();
  if (v.size() != 3) throw std::runtime_error("volume: shape must have 3 components");
  return {v[0], v[1], v[2]};
}

std::array<double, 3> header_spacing(const json& h) {
  auto v = h["spacing_mm"].get<std::vector<double>>();
  if (v.size() != 3) throw std::runtime_error("volume: spacing_mm must have 3 components");
  return {v[0], v[1], v[2]};
}

float f32_from_le(const unsigned char* p) {
  uint32_t u = static_cast<uint32_t>(p[0]) | static_cast<uint32_t>(p[1]) << 8 |
               static_cast<uint32_t>(p[2]) << 16 | static_cast<uint32_t>(p[3]) << 24;
  return std::bit_cast<float>(u);
}

void f32_to_le(float f, unsigned char* p) {
  const auto u = std::bit_cast<uint32_t>(f);
  p[0] = static_cast<unsigned char>(u);
  p[1] = static_cast<unsigned char>(u >> 8);
  p[2] = static_cast<unsigned char>(u >> 16);
  p[3] = static_cast<unsigned char>(u >> 24);
}

void write_header(const std::string& stem, const std::array<int, 3>& shape,
                  const std::array<double, 3>& spacing, const char* dtype) {
  json h;
  h["shape"] = shape;
  h["spacing_mm"] = spacing;
  h["dtype"] = dtype;
  h["order"] = kOrder;
  h["endianness"] = kEndian;
  h["data"] = fs::path(stem).filename().string() + ".raw";
  std::ofstream out(stem + ".json");
  if (!out) throw std::runtime_error("volume: cannot write header " + stem + ".json");
  out << h.dump(2) << "\n";
  if (!out) throw std::runtime_error("volume: failed writing header " + stem + ".json");
}

void write_payload(const std::string& stem, const unsigned char* bytes, std::size_t n) {
  std::ofstream out(stem + ".raw", std::ios::binary);
  if (!out) throw std::runtime_error("volume: cannot write data file " + stem + ".raw");
  out.write(reinterpret_cast<const char*>(bytes), static_cast<std::streamsize>(n));
  if (!out) throw std::runtime_error("volume: failed writing data file " + stem + ".raw");
}

}  // namespace

VolumeDtype peek_volume_dtype(const std::string& stem) {
  const json h = read_header(stem);
  const auto d = h["dtype"].get<std::string>();
  if (d == "f32") return VolumeDtype::f32;
  if (d == "u8") return VolumeDtype::u8;
  throw std::runtime_error("volume: unknown dtype '" + d + "' in " + stem + ".json");
}

VolumeF read_volume_f32(const std::string& stem) {
  const json h = read_header(stem);
  if (h["dtype"].get<std::string>() != "f32")
    throw std::runtime_error("volume: expected dtype f32 in " + stem + ".json, got " +
                             h["dtype"].dump());
  const auto shape = header_shape(h);
  VolumeF vol(shape, header_spacing(h));
  const auto bytes = read_payload(stem, h, vol.size() * 4);
  for (std::size_t i = 0; i < vol.size(); ++i) vol[i] = f32_from_le(&bytes[i * 4]);
  require_finite(vol, "volume " + stem);
  return vol;
}

VolumeU8 read_volume_u8(const std::string& stem) {
  const json h = read_header(stem);
  if (h["dtype"].get<std::string>() != "u8")
    throw std::runtime_error("volume: expected dtype u8 in " + stem + ".json, got " +
                             h["dtype"].dump());
  const auto shape = header_shape(h);
  VolumeU8 vol(shape, header_spacing(h));
  const auto bytes = read_payload(stem, h, vol.size());
  std::memcpy(vol.data().data(), bytes.data(), bytes.size());
  return vol;
}

void write_volume(const VolumeF& vol, const std::string& stem) {
  require_finite(vol, "volume " + stem);
  write_header(stem, vol.shape(), vol.spacing_mm(), "f32");
  std::vector<unsigned char> bytes(vol.size() * 4);
  for (std::size_t i = 0; i < vol.size(); ++i) f32_to_le(vol[i], &bytes[i * 4]);
  write_payload(stem, bytes.data(), bytes.size());
}

void write_volume(const VolumeU8& vol, const std::string& stem) {
  write_header(stem, vol.shape(), vol.spacing_mm(), "u8");
  write_payload(stem, vol.data().data(), vol.size());
}

}  // namespace seedgrow
