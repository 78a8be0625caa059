#pragma once

#include <span>

#include "aperiodica/grid.hpp"

namespace aperiodica {

struct ScanStats {
  double sup = 0.0;
  std::size_t points = 0; // admissible points inspected
};

struct ShiftScanOptions {
  const std::uint8_t* mask = nullptr;         // restricts the base point t
  const std::uint8_t* mask_shifted = nullptr; // restricts t + delta
  Index decimate = 1;                         // index stride per axis
  double early_exit_above = kInf;             // stop once the sup exceeds this
};

/// sup over admissible t of ||F(t + delta) - c F(t)|| where delta is given in
/// integer grid steps per axis. Admissible: both endpoints in bounds, valid,
/// and allowed by the masks. points == 0 means the scan saw nothing.
ScanStats sup_shift_defect(const SampledFunction& f, std::span<const Index> delta, Complex c,
                           const ShiftScanOptions& opt = {});

/// sup over admissible t of ||F(t)||.
ScanStats sup_norm(const SampledFunction& f, const std::uint8_t* mask = nullptr,
                   Index decimate = 1);

/// sup over admissible t of ||F(t) - G(t)|| for two functions on one grid.
ScanStats sup_difference(const SampledFunction& f, const SampledFunction& g,
                         const std::uint8_t* mask = nullptr, Index decimate = 1);

/// Pointwise ||F(t+delta) - c F(t)|| written into out (quiet NaN where the
/// pair is unavailable). out.size() must equal f.size().
void shift_defect_field(const SampledFunction& f, std::span<const Index> delta, Complex c,
                        std::span<double> out);

/// Largest one-step finite-difference slope max_j ||F(t+h_j e_j)-F(t)|| / h_j.
double lipschitz_estimate(const SampledFunction& f);

} // namespace aperiodica
