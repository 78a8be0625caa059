#include "aperiodica/types.hpp"

#include <algorithm>
#include <cmath>

namespace aperiodica {

const char* to_string(Verdict v) {
  switch (v) {
    case Verdict::Pass: return "pass";
    case Verdict::Fail: return "fail";
    case Verdict::Indeterminate: return "indeterminate";
  }
  return "?";
}

double vector_norm(const Complex* v, int width, ValueNorm kind) {
  double acc = 0.0;
  if (kind == ValueNorm::Euclidean) {
    for (int k = 0; k < width; ++k) acc += std::norm(v[k]);
  } else {
    for (int k = 0; k < width; ++k) acc = std::max(acc, std::norm(v[k]));
  }
  return std::sqrt(acc);
}

} // namespace aperiodica
