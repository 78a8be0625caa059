#pragma once

#include <complex>
#include <cstdint>
#include <limits>
#include <string>
#include <vector>

namespace aperiodica {

using Complex = std::complex<double>;
using RVec = std::vector<double>;
using Index = std::int64_t;

inline constexpr double kInf = std::numeric_limits<double>::infinity();

/// Three-way outcome of a numerical classification. Indeterminate is
/// first-class: it is returned whenever the evidence is inconclusive
/// (non-monotone tail margins, capped searches), never silently coerced.
enum class Verdict { Pass, Fail, Indeterminate };

const char* to_string(Verdict v);

/// Norm applied to the value block of a single grid point.
enum class ValueNorm { Euclidean, Sup };

double vector_norm(const Complex* v, int width, ValueNorm kind);

} // namespace aperiodica
