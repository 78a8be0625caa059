#pragma once

#include <map>
#include <utility>

#include "aperiodica/grid.hpp"

namespace aperiodica {

struct TruncationInfo {
  int cutoff = 0;     // series length / stored coordinates, entry specific
  double delta = 0.0; // documented sup-norm tail bound on the default window
  std::string note;
};

struct CorpusParams {
  int dim = 0;              // 0 selects the entry default
  std::vector<Complex> cs;  // per-axis factors where the entry takes them
  std::vector<int> qs;      // odd series parameters
  int cutoff = -1;          // -1 selects the entry default
  double radius = 0.0;      // window radius override (0 = default)
  double step = 0.0;        // grid step override (0 = default)
  std::vector<double> aux;  // entry-specific scalars
  std::vector<std::pair<Complex, RVec>> terms; // trig polynomial terms
};

struct CorpusEntry {
  std::string id;
  int input_dim = 1;
  int width = 1;
  ValueNorm norm_kind = ValueNorm::Euclidean;
  PointFn eval;
  Domain default_domain;
  RVec default_step;
  TruncationInfo truncation;
  std::map<std::string, std::string> expected; // documented behavior notes
  std::vector<std::pair<Complex, RVec>> trig_terms; // exact terms when the entry is one
};

/// Builds a catalog entry by id; throws std::invalid_argument for unknown ids
/// or parameter combinations the entry cannot honor.
CorpusEntry corpus_entry(const std::string& id, const CorpusParams& params = {});

std::vector<std::string> corpus_ids();

SampledFunction sample_corpus(const CorpusEntry& e);
SampledFunction sample_corpus(const CorpusEntry& e, const Domain& d, const Grid& g);

/// Pointwise a F + b G for two samples on one grid (valid where both are).
SampledFunction combine(const SampledFunction& f, const SampledFunction& g, Complex a, Complex b);

/// Pointwise scalar multiply.
SampledFunction scale(const SampledFunction& f, Complex a);

} // namespace aperiodica
