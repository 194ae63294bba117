#pragma once

#include "nys/common.hpp"

namespace nys {

// Supervised pairs built by delay embedding: row i of inputs is a point in
// R^d, targets[i] the value to predict.
struct EmbeddedDataset {
  PointMat inputs;
  Vec targets;

  Index n() const { return inputs.rows(); }
  Index dim() const { return inputs.cols(); }

  void validate() const {
    if (inputs.rows() != targets.size()) {
      throw std::invalid_argument("dataset: inputs (" + format_num(inputs.rows()) +
                                  ") and targets (" + format_num(targets.size()) +
                                  ") differ in length");
    }
    if (inputs.rows() < 1 || inputs.cols() < 1) {
      throw std::invalid_argument("dataset: must hold at least one point of dimension >= 1");
    }
    if (!inputs.allFinite() || !targets.allFinite()) {
      throw std::invalid_argument("dataset: all values must be finite");
    }
  }

  // Rows [from, from+count) as a standalone dataset.
  EmbeddedDataset slice(Index from, Index count) const {
    EmbeddedDataset out;
    out.inputs = inputs.middleRows(from, count);
    out.targets = targets.segment(from, count);
    return out;
  }
};

}  // namespace nys
