#pragma once

#include <optional>
#include <string>
#include <variant>
#include <vector>

#include "gllm/graphs.hpp"
#include "gllm/inference.hpp"
#include "gllm/loglinear.hpp"
#include "gllm/mci.hpp"
#include "gllm/tabular.hpp"

namespace gllm {

/// One row of a candidate-edge comparison: the current model plus the bare
/// two-factor term for `edge`, compared to the current model.
struct EdgeCandidate {
  Edge edge;
  GeneratingClass model;
  double g2 = 0.0;
  std::size_t df = 0;
  double delta_g2 = 0.0;
  std::size_t delta_df = 0;
  double p_value = 1.0;
  int iterations = 0;
  friend bool operator==(const EdgeCandidate&, const EdgeCandidate&) = default;
};

/// Working state of the forward search.
///
/// `model` is always the maximal-clique class of `graph`. `temp_amis` is the
/// ordered work list of candidate independent sets; `amis` holds the sets whose
/// mutual conditional independence the data supported, in acceptance order.
struct SelectionState {
  UndirectedGraph graph;
  GeneratingClass model;
  VarSetFamily temp_amis;
  VarSetFamily amis;
  friend bool operator==(const SelectionState&, const SelectionState&) = default;
};

enum class PruneReason {
  kSubsumedByAmis,   // split child inside an accepted set
  kDuplicateInTemp,  // split child already queued
  kRemovedFromAmis,  // accepted set swallowed by a larger accepted set
  kAmisMemberSplit,  // accepted set broken up by a committed edge
};

struct PruneEvent {
  VarSet set;
  PruneReason reason = PruneReason::kSubsumedByAmis;
  /// The set responsible, when there is one.
  VarSet by;
  friend bool operator==(const PruneEvent&, const PruneEvent&) = default;
};

struct MciStep {
  MciTestRecord record;
  friend bool operator==(const MciStep&, const MciStep&) = default;
};

struct EdgeSearchStep {
  VarSet tested;
  GeneratingClass base_model;
  double base_g2 = 0.0;
  std::size_t base_df = 0;
  std::vector<EdgeCandidate> candidates;
  std::optional<Edge> chosen;
  friend bool operator==(const EdgeSearchStep&, const EdgeSearchStep&) = default;
};

struct CommitStep {
  Edge edge;
  /// Clique closure after the edge, refitted.
  GeneratingClass model;
  double g2 = 0.0;
  std::size_t df = 0;
  /// Previous model's deviance minus the refitted one.
  double delta_g2 = 0.0;
  std::size_t delta_df = 0;
  int iterations = 0;
  std::vector<PruneEvent> pruned;
  VarSetFamily temp_amis;
  VarSetFamily amis;
  friend bool operator==(const CommitStep&, const CommitStep&) = default;
};

struct AcceptStep {
  VarSet set;
  /// Accepted although its MCI test failed, because no edge reached alpha.
  bool forced = false;
  std::vector<PruneEvent> pruned;
  VarSetFamily temp_amis;
  VarSetFamily amis;
  friend bool operator==(const AcceptStep&, const AcceptStep&) = default;
};

using SelectionStep = std::variant<MciStep, EdgeSearchStep, CommitStep, AcceptStep>;

struct SelectionTrace {
  std::vector<std::string> factor_names;
  /// Short labels used for rendering sets and models.
  std::vector<std::string> labels;
  double alpha = kDefaultAlpha;
  IpfSettings ipf;
  GeneratingClass start_model;
  double start_g2 = 0.0;
  std::size_t start_df = 0;
  std::vector<SelectionStep> steps;
  SelectionState final_state;
  std::vector<std::string> warnings;

  friend bool operator==(const SelectionTrace& a, const SelectionTrace& b) {
    return a.factor_names == b.factor_names && a.labels == b.labels && a.alpha == b.alpha &&
           a.ipf.tol == b.ipf.tol && a.ipf.max_iter == b.ipf.max_iter && a.start_model == b.start_model &&
           a.start_g2 == b.start_g2 && a.start_df == b.start_df && a.steps == b.steps &&
           a.final_state == b.final_state && a.warnings == b.warnings;
  }
};

/// Empty graph, complete-independence model, temp_amis = [all factors].
SelectionState initial_state(const ContingencyTable& table);
SelectionState initial_state(std::vector<std::string> factor_names);

/// Scores every non-edge pair inside `s` against `current` (the fit of
/// state.model) and picks the smallest p-value not above alpha; ties go to the
/// larger deviance drop, then to the earlier pair.
EdgeSearchStep most_significant_edge(const ContingencyTable& table, const SelectionState& state,
                                     const FitResult& current, VarSet s, double alpha = kDefaultAlpha,
                                     const IpfSettings& ipf = {});
EdgeSearchStep most_significant_edge(const ContingencyTable& table, const SelectionState& state, VarSet s,
                                     double alpha = kDefaultAlpha, const IpfSettings& ipf = {});

struct CommitOutcome {
  SelectionState state;
  std::vector<PruneEvent> pruned;
  std::vector<std::string> warnings;
};

/// Adds the edge, recomputes the clique model and splits every queued set that
/// holds both endpoints into its two children (in place, sorted). Children
/// inside an accepted set or already queued are dropped. An accepted set that
/// holds both endpoints is removed and its children are queued at the end,
/// with a warning. Does not refit; throws if the edge is already present.
CommitOutcome commit_edge(const SelectionState& state, Edge edge);

struct AcceptOutcome {
  SelectionState state;
  std::vector<PruneEvent> pruned;
};

/// Moves `s` from the work list to the accepted sets, unless an accepted set
/// already contains it. Accepted sets strictly inside `s` are dropped.
AcceptOutcome accept_set(const SelectionState& state, VarSet s);

/// The full forward search. Throws ConvergenceError when any fit fails to
/// converge, std::invalid_argument for fewer than two factors or alpha outside (0, 1).
SelectionTrace forward_select(const ContingencyTable& table, double alpha = kDefaultAlpha,
                              const IpfSettings& ipf = {});

/// Re-applies the commit and accept steps of a trace to the initial state.
SelectionState replay(const SelectionTrace& trace);

const char* to_string(PruneReason reason);
PruneReason prune_reason_from_string(std::string_view text);

}  // namespace gllm
