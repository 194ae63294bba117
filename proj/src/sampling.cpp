#include "nys/sampling.hpp"

#include <string>

namespace nys {

SubsampleSpec SubsampleSpec::sequential_at(Index m, Index start) {
  SubsampleSpec s;
  s.mode = SubsampleMode::SequentialAt;
  s.m = m;
  s.start = start;
  s.validate();
  return s;
}

SubsampleSpec SubsampleSpec::random_start(Index m) {
  SubsampleSpec s;
  s.mode = SubsampleMode::RandomStart;
  s.m = m;
  s.validate();
  return s;
}

SubsampleSpec SubsampleSpec::positional(Index m, std::string_view which) {
  SubsampleSpec s;
  s.m = m;
  if (which == "first") {
    s.mode = SubsampleMode::PositionalFirst;
  } else if (which == "middle") {
    s.mode = SubsampleMode::PositionalMiddle;
  } else if (which == "last") {
    s.mode = SubsampleMode::PositionalLast;
  } else {
    throw std::invalid_argument("positional subsample must be first, middle or last, got '" +
                                std::string(which) + "'");
  }
  s.validate();
  return s;
}

SubsampleSpec SubsampleSpec::strided(Index m, Index start, Index gap) {
  SubsampleSpec s;
  s.mode = SubsampleMode::Strided;
  s.m = m;
  s.start = start;
  s.gap = gap;
  s.validate();
  return s;
}

void SubsampleSpec::validate() const {
  if (m < 1) {
    throw std::invalid_argument("subsample size m must be >= 1, got " + format_num(m));
  }
  if (start < 0) {
    throw std::invalid_argument("subsample start must be >= 0, got " + format_num(start));
  }
  if (gap < 0) {
    throw std::invalid_argument("subsample gap must be >= 0, got " + format_num(gap));
  }
}

const char* subsample_mode_name(SubsampleMode mode) {
  switch (mode) {
    case SubsampleMode::SequentialAt: return "sequential";
    case SubsampleMode::RandomStart: return "random";
    case SubsampleMode::PositionalFirst: return "first";
    case SubsampleMode::PositionalMiddle: return "middle";
    case SubsampleMode::PositionalLast: return "last";
    case SubsampleMode::Strided: return "strided";
  }
  return "?";
}

namespace {

[[noreturn]] void throw_infeasible(const SubsampleSpec& spec, Index n, Index max_m) {
  throw std::invalid_argument(std::string("subsample mode '") + subsample_mode_name(spec.mode) +
                              "' with m=" + format_num(spec.m) + " is infeasible for n=" +
                              format_num(n) + "; maximal feasible m is " +
                              format_num(std::max<Index>(max_m, 0)));
}

IndexSet contiguous(Index start, Index m) {
  IndexSet out;
  out.indices.resize(static_cast<size_t>(m));
  for (Index i = 0; i < m; ++i) out.indices[static_cast<size_t>(i)] = start + i;
  return out;
}

}  // namespace

IndexSet resolve(const SubsampleSpec& spec, Index n, Rng& rng) {
  spec.validate();
  if (n < 1) {
    throw std::invalid_argument("subsample resolution requires n >= 1, got " + format_num(n));
  }
  if (spec.m > n) {
    throw_infeasible(spec, n, n);
  }
  switch (spec.mode) {
    case SubsampleMode::SequentialAt: {
      if (spec.start + spec.m > n) throw_infeasible(spec, n, n - spec.start);
      return contiguous(spec.start, spec.m);
    }
    case SubsampleMode::RandomStart: {
      const Index start = rng.pick_index(n - spec.m + 1);
      return contiguous(start, spec.m);
    }
    case SubsampleMode::PositionalFirst:
      return contiguous(0, spec.m);
    case SubsampleMode::PositionalMiddle:
      return contiguous((n - spec.m) / 2, spec.m);
    case SubsampleMode::PositionalLast:
      return contiguous(n - spec.m, spec.m);
    case SubsampleMode::Strided: {
      const Index stride = spec.gap + 1;
      // last index: start + (m-1) * stride must stay within [0, n-1]
      if (spec.start > n - 1 || spec.start + (spec.m - 1) * stride > n - 1) {
        const Index max_m = (spec.start > n - 1) ? 0 : (n - 1 - spec.start) / stride + 1;
        throw_infeasible(spec, n, max_m);
      }
      IndexSet out;
      out.indices.resize(static_cast<size_t>(spec.m));
      for (Index i = 0; i < spec.m; ++i) {
        out.indices[static_cast<size_t>(i)] = spec.start + i * stride;
      }
      return out;
    }
  }
  throw std::invalid_argument("unknown subsample mode");
}

}  // namespace nys
