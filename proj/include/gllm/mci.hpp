#pragma once

#include "gllm/inference.hpp"
#include "gllm/loglinear.hpp"
#include "gllm/tabular.hpp"

namespace gllm {

/// Outcome of testing whether the factors in `tested` are mutually
/// independent given every other factor.
struct MciTestRecord {
  VarSet tested;
  VarSet conditioning;
  GeneratingClass model;
  TestOutcome outcome;
  int iterations = 0;
  friend bool operator==(const MciTestRecord&, const MciTestRecord&) = default;
};

/// One term {x} ∪ (all \ s) per x in s. s = all gives complete independence,
/// |s| = 1 the saturated model.
GeneratingClass mci_generating_class(std::size_t num_factors, VarSet s);

/// Fits mci_generating_class(s) and tests it against the saturated model.
/// Throws ConvergenceError when IPF does not converge.
MciTestRecord mci_test(const ContingencyTable& table, VarSet s, double alpha = kDefaultAlpha,
                       const IpfSettings& ipf = {});

}  // namespace gllm
