#pragma once

#include <string_view>

#include "nys/common.hpp"

namespace nys {

// Which kernel-matrix columns to keep. All indexing is 0-based: a
// sequential window starting at j covers {j, ..., j+m-1} with
// j in [0, n-m].
enum class SubsampleMode {
  SequentialAt,      // contiguous window at a fixed start
  RandomStart,       // contiguous window, start uniform on {0, ..., n-m}
  PositionalFirst,   // start 0
  PositionalMiddle,  // start floor((n-m)/2), centering the window
  PositionalLast,    // start n-m
  Strided,           // {start, start+(gap+1), ...}; gap 0 is sequential
};

struct SubsampleSpec {
  SubsampleMode mode{SubsampleMode::RandomStart};
  Index m{1};
  Index start{0};  // SequentialAt / Strided
  Index gap{0};    // Strided: distance between kept indices is gap+1

  static SubsampleSpec sequential_at(Index m, Index start);
  static SubsampleSpec random_start(Index m);
  static SubsampleSpec positional(Index m, std::string_view which);  // first|middle|last
  static SubsampleSpec strided(Index m, Index start, Index gap);

  void validate() const;
};

const char* subsample_mode_name(SubsampleMode mode);

// Strictly increasing 0-based indices into the training sequence.
struct IndexSet {
  std::vector<Index> indices;

  Index size() const { return static_cast<Index>(indices.size()); }
};

// Turns the spec into concrete indices for a dataset of size n. RandomStart
// consumes exactly one draw from rng (so sweeps stay reproducible when
// resolutions are reordered); the other modes consume none.
//
// Infeasible specs (window or stride overrunning the sequence) raise
// std::invalid_argument stating the maximal feasible m.
IndexSet resolve(const SubsampleSpec& spec, Index n, Rng& rng);

}  // namespace nys
