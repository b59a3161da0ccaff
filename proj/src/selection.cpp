#include "gllm/selection.hpp"

#include <algorithm>
#include <array>
#include <stdexcept>

namespace gllm {

namespace {

std::vector<std::string> labels_of(const ContingencyTable& table) { return factor_abbreviations(table.factors()); }

bool subsumed(VarSet s, const VarSetFamily& family, VarSet* by) {
  for (auto m : family)
    if (s.subset_of(m)) {
      if (by) *by = m;
      return true;
    }
  return false;
}

bool queued(VarSet s, const VarSetFamily& list) { return std::find(list.begin(), list.end(), s) != list.end(); }

FitResult fit_or_throw(const ContingencyTable& table, const GeneratingClass& gc, const IpfSettings& ipf) {
  auto fit = ipf_fit(table, gc, ipf);
  if (!fit.converged)
    throw ConvergenceError("IPF did not converge for model " + format_model(gc, labels_of(table)) + " after " +
                           std::to_string(fit.iterations) + " sweeps (margin error " +
                           std::to_string(fit.max_margin_error) + ")");
  return fit;
}

// The two children of `t` for a split on `edge`, in canonical order.
std::array<VarSet, 2> split_children(VarSet t, Edge edge) {
  auto a = t.without(edge.first);
  auto b = t.without(edge.second);
  if (canonical_less(b, a)) std::swap(a, b);
  return {a, b};
}

}  // namespace

SelectionState initial_state(std::vector<std::string> factor_names) {
  SelectionState state;
  const auto p = factor_names.size();
  state.graph = UndirectedGraph(std::move(factor_names));
  state.model = GeneratingClass::independence(p);
  state.temp_amis = {VarSet::first(p)};
  return state;
}

SelectionState initial_state(const ContingencyTable& table) { return initial_state(table.factor_names()); }

EdgeSearchStep most_significant_edge(const ContingencyTable& table, const SelectionState& state,
                                     const FitResult& current, VarSet s, double alpha, const IpfSettings& ipf) {
  EdgeSearchStep step;
  step.tested = s;
  step.base_model = state.model;
  step.base_g2 = current.g2;
  step.base_df = current.df;

  const auto members = s.indices();
  for (std::size_t i = 0; i < members.size(); ++i)
    for (std::size_t j = i + 1; j < members.size(); ++j) {
      const Edge edge(members[i], members[j]);
      if (state.graph.adjacent(edge.first, edge.second)) continue;
      EdgeCandidate cand;
      cand.edge = edge;
      cand.model = state.model.with_term(edge.as_set());
      const auto fit = fit_or_throw(table, cand.model, ipf);
      const auto test = deviance_difference(current, fit, alpha);
      cand.g2 = fit.g2;
      cand.df = fit.df;
      cand.delta_g2 = test.statistic;
      cand.delta_df = test.df;
      cand.p_value = test.p_value;
      cand.iterations = fit.iterations;
      step.candidates.push_back(std::move(cand));
    }

  const EdgeCandidate* best = nullptr;
  for (const auto& c : step.candidates) {
    if (c.p_value > alpha) continue;
    // Candidates are generated in pair order, so strict comparisons keep the earlier pair on full ties.
    if (best == nullptr || c.p_value < best->p_value ||
        (c.p_value == best->p_value && c.delta_g2 > best->delta_g2))
      best = &c;
  }
  if (best) step.chosen = best->edge;
  return step;
}

EdgeSearchStep most_significant_edge(const ContingencyTable& table, const SelectionState& state, VarSet s,
                                     double alpha, const IpfSettings& ipf) {
  return most_significant_edge(table, state, fit_or_throw(table, state.model, ipf), s, alpha, ipf);
}

CommitOutcome commit_edge(const SelectionState& state, Edge edge) {
  if (state.graph.adjacent(edge.first, edge.second))
    throw std::invalid_argument("edge " + state.graph.vertices().at(edge.first) + "-" +
                                state.graph.vertices().at(edge.second) + " is already present");
  CommitOutcome out;
  auto& next = out.state;
  next.graph = state.graph;
  next.graph.add_edge(edge.first, edge.second);
  next.model = graphical_model_of(next.graph);

  const auto both = edge.as_set();
  const auto& labels = state.graph.vertices();

  VarSetFamily reopened;
  for (auto m : state.amis) {
    if (m.contains_all(both)) {
      out.pruned.push_back({m, PruneReason::kAmisMemberSplit, both});
      out.warnings.push_back("edge " + labels[edge.first] + "-" + labels[edge.second] +
                             " lies inside accepted set " + format_set(m, labels) + "; set reopened");
      reopened.push_back(m);
    } else {
      next.amis.push_back(m);
    }
  }

  VarSetFamily untouched;
  for (auto t : state.temp_amis)
    if (!t.contains_all(both)) untouched.push_back(t);

  auto place = [&](VarSet child) {
    VarSet by;
    if (subsumed(child, next.amis, &by)) {
      out.pruned.push_back({child, PruneReason::kSubsumedByAmis, by});
    } else if (queued(child, untouched) || queued(child, next.temp_amis)) {
      out.pruned.push_back({child, PruneReason::kDuplicateInTemp, child});
    } else {
      next.temp_amis.push_back(child);
    }
  };

  for (auto t : state.temp_amis) {
    if (!t.contains_all(both)) {
      next.temp_amis.push_back(t);
      continue;
    }
    for (auto child : split_children(t, edge)) place(child);
  }
  for (auto m : reopened)
    for (auto child : split_children(m, edge)) place(child);
  return out;
}

AcceptOutcome accept_set(const SelectionState& state, VarSet s) {
  AcceptOutcome out;
  out.state = state;
  auto& next = out.state;
  if (auto it = std::find(next.temp_amis.begin(), next.temp_amis.end(), s); it != next.temp_amis.end())
    next.temp_amis.erase(it);

  VarSet by;
  if (subsumed(s, next.amis, &by)) {
    out.pruned.push_back({s, PruneReason::kSubsumedByAmis, by});
    return out;
  }
  VarSetFamily kept;
  for (auto m : next.amis) {
    if (m.strict_subset_of(s))
      out.pruned.push_back({m, PruneReason::kRemovedFromAmis, s});
    else
      kept.push_back(m);
  }
  kept.push_back(s);
  next.amis = std::move(kept);
  return out;
}

SelectionTrace forward_select(const ContingencyTable& table, double alpha, const IpfSettings& ipf) {
  if (table.num_factors() < 2) throw std::invalid_argument("forward selection needs at least two factors");
  if (!(alpha > 0.0 && alpha < 1.0)) throw std::invalid_argument("alpha must lie in (0, 1)");

  SelectionTrace trace;
  trace.factor_names = table.factor_names();
  trace.labels = labels_of(table);
  trace.alpha = alpha;
  trace.ipf = ipf;

  auto state = initial_state(table);
  auto current = fit_or_throw(table, state.model, ipf);
  trace.start_model = state.model;
  trace.start_g2 = current.g2;
  trace.start_df = current.df;

  while (!state.temp_amis.empty()) {
    const auto s = state.temp_amis.front();
    auto mci = mci_test(table, s, alpha, ipf);
    const bool supported = mci.outcome.supported;
    trace.steps.emplace_back(MciStep{std::move(mci)});

    if (supported) {
      auto accepted = accept_set(state, s);
      state = std::move(accepted.state);
      trace.steps.emplace_back(AcceptStep{s, false, std::move(accepted.pruned), state.temp_amis, state.amis});
      continue;
    }

    auto search = most_significant_edge(table, state, current, s, alpha, ipf);
    const auto chosen = search.chosen;
    trace.steps.emplace_back(std::move(search));

    if (!chosen) {
      trace.warnings.push_back("MCI test rejected " + format_set(s, trace.labels) +
                               " but no edge inside it reached alpha; set accepted");
      auto accepted = accept_set(state, s);
      state = std::move(accepted.state);
      trace.steps.emplace_back(AcceptStep{s, true, std::move(accepted.pruned), state.temp_amis, state.amis});
      continue;
    }

    auto committed = commit_edge(state, *chosen);
    state = std::move(committed.state);
    for (auto& w : committed.warnings) trace.warnings.push_back(std::move(w));
    auto refit = fit_or_throw(table, state.model, ipf);
    CommitStep step;
    step.edge = *chosen;
    step.model = state.model;
    step.g2 = refit.g2;
    step.df = refit.df;
    step.delta_g2 = current.g2 - refit.g2;
    step.delta_df = current.df - refit.df;
    step.iterations = refit.iterations;
    step.pruned = std::move(committed.pruned);
    step.temp_amis = state.temp_amis;
    step.amis = state.amis;
    trace.steps.emplace_back(std::move(step));
    current = std::move(refit);
  }

  auto final_amis = state.amis;
  canonicalize(final_amis);
  const auto expected = maximal_independent_sets(state.graph);
  if (final_amis != expected) {
    std::string want;
    for (auto m : expected) want += " " + format_set(m, trace.labels);
    trace.warnings.push_back("accepted sets differ from the maximal independent sets of the final graph:" + want);
  }
  trace.final_state = std::move(state);
  return trace;
}

SelectionState replay(const SelectionTrace& trace) {
  auto state = initial_state(trace.factor_names);
  for (const auto& step : trace.steps) {
    if (const auto* c = std::get_if<CommitStep>(&step))
      state = commit_edge(state, c->edge).state;
    else if (const auto* a = std::get_if<AcceptStep>(&step))
      state = accept_set(state, a->set).state;
  }
  return state;
}

const char* to_string(PruneReason reason) {
  switch (reason) {
    case PruneReason::kSubsumedByAmis:
      return "subsumed_by_amis";
    case PruneReason::kDuplicateInTemp:
      return "duplicate_in_temp";
    case PruneReason::kRemovedFromAmis:
      return "removed_from_amis";
    case PruneReason::kAmisMemberSplit:
      return "amis_member_split";
  }
  return "unknown";
}

PruneReason prune_reason_from_string(std::string_view text) {
  for (auto r : {PruneReason::kSubsumedByAmis, PruneReason::kDuplicateInTemp, PruneReason::kRemovedFromAmis,
                 PruneReason::kAmisMemberSplit})
    if (text == to_string(r)) return r;
  throw std::invalid_argument("unknown prune reason '" + std::string(text) + "'");
}

}  // namespace gllm
