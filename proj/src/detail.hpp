#pragma once

// Internal helpers shared by the checker translation units. Not installed;
// everything here may change without notice.

#include <functional>
#include <vector>

#include "aperiodica/grid.hpp"

namespace aperiodica::detail {

/// Empty mask means "the whole grid"; anything else must fit it exactly.
DomainSubset resolve_set(const Grid& g, const DomainSubset& s, const char* what);

void require_unbounded(const Grid& g, const Domain& dom, const DomainSubset& s,
                       const char* what);

/// Ladder fallback chain: explicit > spec-provided > default_tail_ladder.
std::vector<double> resolve_ladder(const Domain& dom, std::vector<double> ladder,
                                   const std::vector<double>& fallback);

double max_extent(const Grid& g);
double min_step(const Grid& g);

std::vector<DomainSubset> tail_masks(const Grid& g, const DomainSubset& d,
                                     const std::vector<double>& ladder);

struct TauCandidate {
  std::size_t flat = 0;
  double abs = 0.0;
};

/// I' points inside B(t0, l), the zero shift excluded, nearest the origin
/// first: small shifts are both the likeliest witnesses and the cheapest to
/// certify on a truncated window.
std::vector<TauCandidate> ball_candidates(const Grid& g, const DomainSubset& ip, const RVec& t0,
                                          double l, int cap);

/// Ball centers drawn evenly from I' within the reach, hardest (outermost)
/// first so undersized radii fail fast.
std::vector<std::size_t> sample_centers(const Grid& g, const DomainSubset& ip, double reach,
                                        int cap);

/// Nonzero I' points with |tau| <= tau_max split into k_bands annuli of equal
/// width, each band sorted nearest-origin first and capped at cap entries.
/// Bands may come back empty; widening tau_max is the caller's business.
std::vector<std::vector<TauCandidate>> banded_candidates(const Grid& g, const DomainSubset& ip,
                                                         double tau_max, int k_bands, int cap);

/// Work-queue loop over [0, count). workers <= 1 runs inline.
void parallel_for(std::size_t count, int workers, const std::function<void(std::size_t)>& body);

} // namespace aperiodica::detail
