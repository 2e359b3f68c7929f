// Separable Gaussian filtering on volumes.
#pragma once

#include "seedgrow/volume.hpp"

namespace seedgrow {

/// Separable Gaussian blur with per-axis std in voxels, taps truncated at
/// 3 sigma and renormalized at the volume borders. sigma <= 0 on an axis
/// skips that axis.
VolumeF gaussian_blur(const VolumeF& vol, std::array<double, 3> sigma_vox);

/// Mask-normalized blur: blur(vol * mask) / blur(mask), evaluated where
/// blur(mask) > 0 (everywhere inside the mask); 0 elsewhere. Avoids the
/// attenuation a plain blur shows at the mask boundary.
VolumeF masked_gaussian_blur(const VolumeF& vol, const VolumeU8& mask,
                             std::array<double, 3> sigma_vox);

}  // namespace seedgrow
