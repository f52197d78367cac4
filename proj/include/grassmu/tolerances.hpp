#pragma once

namespace grassmu {

// Combined absolute/relative threshold for treating a singular value as zero.
struct RankTolerance {
  double atol = 1e-12;
  double rtol = 1e-9;

  double threshold(double sigma_max) const { return atol + rtol * sigma_max; }
};

}  // namespace grassmu
