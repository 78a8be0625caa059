#pragma once

#include <vector>

#include "aperiodica/convolution.hpp"

namespace aperiodica::conv_detail {

/// One quadrature tap of a truncated kernel: lattice offset, its row-major
/// flat delta, and the trapezoid weight already multiplied into the kernel
/// value. Taps whose weighted value is exactly zero are dropped.
struct Tap {
  std::vector<Index> off;
  Index flat = 0;
  double weight = 0.0;
};

std::vector<Tap> build_taps(const Kernel& k, const Grid& g, const char* what);

}  // namespace aperiodica::conv_detail
