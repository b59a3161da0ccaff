#pragma once

#include <string>

#include "json.hpp"

#include "gllm/loglinear.hpp"
#include "gllm/mci.hpp"
#include "gllm/selection.hpp"

namespace gllm {

/// Fixed four decimals, the precision used by every rendered statistic.
std::string fixed4(double value);

std::string render_fit_text(const FitResult& fit, std::span<const std::string> labels);
nlohmann::json fit_to_json(const FitResult& fit, std::span<const std::string> labels);

std::string render_mci_text(const MciTestRecord& rec, std::span<const std::string> labels);
nlohmann::json mci_to_json(const MciTestRecord& rec, std::span<const std::string> labels);

/// Step-by-step narrative followed by `model:`, `amis:` and any `warning:`
/// lines. `show_state` adds the work list and accepted sets after every move.
std::string render_trace_text(const SelectionTrace& trace, bool show_state = false);

/// Sets and models are written with the trace labels; the `factors` and
/// `labels` arrays carry the mapping back to factor names.
nlohmann::json trace_to_json(const SelectionTrace& trace);
SelectionTrace trace_from_json(const nlohmann::json& doc);

/// Final AMIS in canonical order, e.g. "{A,B,F} {B,D,F}".
std::string format_family(VarSetFamily family, std::span<const std::string> labels);

}  // namespace gllm
