// 3D scalar grids with voxel spacing, the shared container of the pipeline.
#pragma once

#include <array>
#include <cmath>
#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

namespace seedgrow {

/// Integer voxel index, axis order (z, y, x); z is the slowest-varying
/// (transversal slice) axis, x the fastest.
struct VoxelCoord {
  int z = 0;
  int y = 0;
  int x = 0;

  friend bool operator==(const VoxelCoord&, const VoxelCoord&) = default;
  friend auto operator<=>(const VoxelCoord&, const VoxelCoord&) = default;
};

/// A 3D scalar grid stored in C order (z slowest, x fastest) together with
/// its voxel spacing in millimeters. T is float for image data and uint8_t
/// for label masks.
template <class T>
class VolumeT {
 public:
  VolumeT() = default;

  VolumeT(std::array<int, 3> shape, std::array<double, 3> spacing_mm, T fill = T{})
      : shape_(shape), spacing_(spacing_mm) {
    validate_geometry();
    data_.assign(size(), fill);
  }

  VolumeT(std::array<int, 3> shape, std::array<double, 3> spacing_mm, std::vector<T> data)
      : shape_(shape), spacing_(spacing_mm), data_(std::move(data)) {
    validate_geometry();
    if (data_.size() != size())
      throw std::invalid_argument("volume: data length does not match shape");
  }

  const std::array<int, 3>& shape() const { return shape_; }
  const std::array<double, 3>& spacing_mm() const { return spacing_; }
  int nz() const { return shape_[0]; }
  int ny() const { return shape_[1]; }
  int nx() const { return shape_[2]; }

  std::size_t size() const {
    return static_cast<std::size_t>(shape_[0]) * shape_[1] * shape_[2];
  }
  /// Volume of one voxel in mm^3.
  double voxel_mm3() const { return spacing_[0] * spacing_[1] * spacing_[2]; }

  bool in_bounds(int z, int y, int x) const {
    return z >= 0 && z < shape_[0] && y >= 0 && y < shape_[1] && x >= 0 && x < shape_[2];
  }
  bool in_bounds(const VoxelCoord& c) const { return in_bounds(c.z, c.y, c.x); }

  std::size_t index(int z, int y, int x) const {
    return (static_cast<std::size_t>(z) * shape_[1] + y) * shape_[2] + x;
  }

  T& at(int z, int y, int x) { return data_[index(z, y, x)]; }
  const T& at(int z, int y, int x) const { return data_[index(z, y, x)]; }
  T& at(const VoxelCoord& c) { return at(c.z, c.y, c.x); }
  const T& at(const VoxelCoord& c) const { return at(c.z, c.y, c.x); }
  T& operator[](std::size_t i) { return data_[i]; }
  const T& operator[](std::size_t i) const { return data_[i]; }

  std::vector<T>& data() { return data_; }
  const std::vector<T>& data() const { return data_; }

  bool same_geometry(const VolumeT& other) const {
    return shape_ == other.shape_ && spacing_ == other.spacing_;
  }
  template <class U>
  bool same_geometry(const VolumeT<U>& other) const {
    return shape_ == other.shape() && spacing_ == other.spacing_mm();
  }

 private:
  void validate_geometry() const {
    for (int s : shape_)
      if (s < 1) throw std::invalid_argument("volume: shape components must be >= 1");
    for (double s : spacing_)
      if (!(s > 0.0)) throw std::invalid_argument("volume: spacing components must be > 0");
  }

  std::array<int, 3> shape_{1, 1, 1};
  std::array<double, 3> spacing_{1.0, 1.0, 1.0};
  std::vector<T> data_;
};

using VolumeF = VolumeT<float>;
using VolumeU8 = VolumeT<uint8_t>;

/// Throws if a real volume contains NaN or Inf.
void require_finite(const VolumeF& v, const std::string& what);

/// Throws unless the mask holds only values {0, 1}.
void require_binary(const VolumeU8& mask, const std::string& what);

/// Number of set voxels in a mask.
std::size_t count_set(const VolumeU8& mask);

/// Mean of vol over set voxels of mask. Throws on empty mask.
double masked_mean(const VolumeF& vol, const VolumeU8& mask);

/// p-th percentile (p in [0, 100]) of vol restricted to the mask, using
/// linear interpolation between order statistics at rank p/100 * (n - 1).
/// Throws on empty mask or p outside [0, 100].
double masked_percentile(const VolumeF& vol, const VolumeU8& mask, double p);

// --- On-disk format -------------------------------------------------------
//
// A volume <stem> is stored as the pair <stem>.json + <stem>.raw.  The JSON
// header carries shape [z,y,x], spacing_mm [z,y,x], dtype ("f32" | "u8"),
// order "C-zyx", endianness "little" and the relative name of the data file.
// The raw payload is the grid in C order, little-endian, 4 bytes per voxel
// for f32 and 1 byte for u8.

enum class VolumeDtype { f32, u8 };

/// Reads the header of <stem>.json and returns its declared dtype.
VolumeDtype peek_volume_dtype(const std::string& stem);

/// Reads <stem>.json + <stem>.raw as a real (f32) volume. Rejects NaN data,
/// header/payload size mismatches and unknown dtypes.
VolumeF read_volume_f32(const std::string& stem);

/// Reads <stem>.json + <stem>.raw as a label (u8) volume.
VolumeU8 read_volume_u8(const std::string& stem);

/// Writes <stem>.json + <stem>.raw. Bit-exact round trip with read_volume_*.
void write_volume(const VolumeF& vol, const std::string& stem);
void write_volume(const VolumeU8& vol, const std::string& stem);

}  // namespace seedgrow
