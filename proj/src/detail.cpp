#include "detail.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <stdexcept>
#include <thread>

#include "aperiodica/asymptotic.hpp"

namespace aperiodica::detail {

DomainSubset resolve_set(const Grid& g, const DomainSubset& s, const char* what) {
  if (s.mask.empty()) return DomainSubset::all(g);
  if (s.mask.size() != g.size())
    throw std::invalid_argument(std::string(what) + ": mask does not fit the grid");
  return s;
}

void require_unbounded(const Grid& g, const Domain& dom, const DomainSubset& s,
                       const char* what) {
  if (!s.reaches_outer_shell(g, dom))
    throw std::invalid_argument(std::string(what) + ": set never reaches the outer shell");
}

std::vector<double> resolve_ladder(const Domain& dom, std::vector<double> ladder,
                                   const std::vector<double>& fallback) {
  if (ladder.empty()) ladder = fallback.empty() ? default_tail_ladder(dom) : fallback;
  for (std::size_t i = 0; i < ladder.size(); ++i) {
    if (ladder[i] <= 0.0 || (i > 0 && ladder[i] <= ladder[i - 1]))
      throw std::invalid_argument("tail ladder must be positive and strictly increasing");
  }
  return ladder;
}

double max_extent(const Grid& g) {
  double e = 0.0;
  for (int j = 0; j < g.dim(); ++j)
    e = std::max(e, static_cast<double>(g.count[j] - 1) * g.step[j]);
  return e;
}

double min_step(const Grid& g) {
  double h = g.step[0];
  for (int j = 1; j < g.dim(); ++j) h = std::min(h, g.step[j]);
  return h;
}

std::vector<DomainSubset> tail_masks(const Grid& g, const DomainSubset& d,
                                     const std::vector<double>& ladder) {
  std::vector<DomainSubset> tails;
  tails.reserve(ladder.size());
  for (double T : ladder) tails.push_back(d.tail(g, T));
  return tails;
}

std::vector<TauCandidate> ball_candidates(const Grid& g, const DomainSubset& ip, const RVec& t0,
                                          double l, int cap) {
  const int n = g.dim();
  std::vector<Index> lo(n), hi(n), idx(n);
  for (int j = 0; j < n; ++j) {
    lo[j] = std::max<Index>(0, static_cast<Index>(std::ceil((t0[j] - l - g.origin[j]) / g.step[j])));
    hi[j] = std::min<Index>(g.count[j] - 1,
                            static_cast<Index>(std::floor((t0[j] + l - g.origin[j]) / g.step[j])));
    if (lo[j] > hi[j]) return {};
    idx[j] = lo[j];
  }
  const std::vector<Index> strides = g.strides();
  const double zero_sq = 0.0625 * min_step(g) * min_step(g);
  const double l_sq = l * l;

  std::vector<TauCandidate> out;
  while (true) {
    std::size_t flat = 0;
    for (int j = 0; j < n; ++j) flat += static_cast<std::size_t>(idx[j] * strides[j]);
    if (ip.mask[flat]) {
      double d_sq = 0.0, a_sq = 0.0;
      for (int j = 0; j < n; ++j) {
        const double tj = g.coord(j, idx[j]);
        d_sq += (tj - t0[j]) * (tj - t0[j]);
        a_sq += tj * tj;
      }
      if (d_sq <= l_sq && a_sq > zero_sq)
        out.push_back({flat, std::sqrt(a_sq)});
    }
    int j = n - 1;
    while (j >= 0 && ++idx[j] > hi[j]) {
      idx[j] = lo[j];
      --j;
    }
    if (j < 0) break;
  }
  std::sort(out.begin(), out.end(), [](const TauCandidate& a, const TauCandidate& b) {
    return a.abs != b.abs ? a.abs < b.abs : a.flat < b.flat;
  });
  if (cap > 0 && out.size() > static_cast<std::size_t>(cap)) out.resize(static_cast<std::size_t>(cap));
  return out;
}

std::vector<std::size_t> sample_centers(const Grid& g, const DomainSubset& ip, double reach,
                                        int cap) {
  std::vector<std::size_t> flats;
  for (std::size_t i = 0; i < g.size(); ++i)
    if (ip.mask[i] && g.point_abs(i) <= reach) flats.push_back(i);
  if (cap > 0 && flats.size() > static_cast<std::size_t>(cap)) {
    std::vector<std::size_t> picked;
    picked.reserve(static_cast<std::size_t>(cap));
    const double stride = static_cast<double>(flats.size()) / cap;
    for (int k = 0; k < cap; ++k)
      picked.push_back(flats[static_cast<std::size_t>(k * stride)]);
    flats = std::move(picked);
  }
  std::sort(flats.begin(), flats.end(), [&g](std::size_t a, std::size_t b) {
    return g.point_abs(a) > g.point_abs(b);
  });
  return flats;
}

std::vector<std::vector<TauCandidate>> banded_candidates(const Grid& g, const DomainSubset& ip,
                                                         double tau_max, int k_bands, int cap) {
  std::vector<std::vector<TauCandidate>> banded(static_cast<std::size_t>(k_bands));
  const int n = g.dim();
  const std::vector<Index> strides = g.strides();
  const double w = tau_max / k_bands;
  std::vector<Index> lo(n), hi(n), idx(n);
  for (int j = 0; j < n; ++j) {
    lo[j] = std::max<Index>(
        0, static_cast<Index>(std::ceil((-tau_max - g.origin[j]) / g.step[j])));
    hi[j] = std::min<Index>(g.count[j] - 1,
                            static_cast<Index>(std::floor((tau_max - g.origin[j]) / g.step[j])));
    if (lo[j] > hi[j]) return banded;
    idx[j] = lo[j];
  }
  const double zero_sq = 0.0625 * min_step(g) * min_step(g);
  while (true) {
    std::size_t flat = 0;
    for (int j = 0; j < n; ++j) flat += static_cast<std::size_t>(idx[j] * strides[j]);
    if (ip.mask[flat]) {
      double a_sq = 0.0;
      for (int j = 0; j < n; ++j) {
        const double tj = g.coord(j, idx[j]);
        a_sq += tj * tj;
      }
      const double a = std::sqrt(a_sq);
      if (a_sq > zero_sq && a <= tau_max) {
        const int band = std::min(k_bands - 1, static_cast<int>(a / w));
        banded[static_cast<std::size_t>(band)].push_back({flat, a});
      }
    }
    int j = n - 1;
    while (j >= 0 && ++idx[j] > hi[j]) {
      idx[j] = lo[j];
      --j;
    }
    if (j < 0) break;
  }
  for (auto& cands : banded) {
    std::sort(cands.begin(), cands.end(), [](const TauCandidate& a, const TauCandidate& b) {
      return a.abs != b.abs ? a.abs < b.abs : a.flat < b.flat;
    });
    if (cap > 0 && cands.size() > static_cast<std::size_t>(cap))
      cands.resize(static_cast<std::size_t>(cap));
  }
  return banded;
}

void parallel_for(std::size_t count, int workers, const std::function<void(std::size_t)>& body) {
  const int hw = static_cast<int>(std::thread::hardware_concurrency());
  const int used = std::max(1, std::min(workers, hw > 0 ? hw : 1));
  if (used == 1 || count < 2) {
    for (std::size_t i = 0; i < count; ++i) body(i);
    return;
  }
  std::atomic<std::size_t> next{0};
  std::vector<std::thread> pool;
  pool.reserve(static_cast<std::size_t>(used));
  for (int w = 0; w < used; ++w)
    pool.emplace_back([&] {
      for (;;) {
        const std::size_t i = next.fetch_add(1);
        if (i >= count) return;
        body(i);
      }
    });
  for (auto& t : pool) t.join();
}

} // namespace aperiodica::detail
