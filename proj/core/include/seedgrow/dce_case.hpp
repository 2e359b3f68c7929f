// One patient timepoint: precontrast, postcontrast series, breast mask and
// optional ground truth, plus the case.json manifest tying the files together.
#pragma once

#include <optional>
#include <string>
#include <vector>

#include "seedgrow/volume.hpp"

namespace seedgrow {

/// Analytic description of one ground-truth tumor component.
struct TumorTruth {
  int id = 0;                      // label value in gt_tumor
  double analytic_volume_mm3 = 0;  // exact ellipsoid volume
  std::array<double, 3> center_mm{};
  std::array<double, 3> semi_axes_mm{};
  double washin = 0;
  double washout = 0;
};

struct DceCase {
  std::string case_id;
  VolumeF pre;
  std::vector<VolumeF> post;  // ordered, length >= 2
  VolumeU8 breast_mask;
  std::optional<VolumeU8> gt_tumor;   // component labels 1..N, 0 = background
  std::optional<VolumeU8> gt_vessel;  // binary
  std::optional<VolumeU8> gt_benign;  // binary
  std::vector<TumorTruth> tumor_truth;
  // Present on cases produced by NAC simulation.
  std::optional<double> nac_shrink_factor;

  bool has_ground_truth() const { return gt_tumor.has_value(); }

  /// Throws unless all member volumes share geometry, post has length >= 2
  /// and the masks are binary.
  void validate() const;
};

/// Writes all case volumes into dir plus a dir/case.json manifest listing the
/// member files and the analytic ground-truth volumes.
void write_case(const DceCase& c, const std::string& dir);

/// Loads a case from its manifest path (either .../case.json or the directory
/// containing it).
DceCase read_case(const std::string& manifest_path);

}  // namespace seedgrow
