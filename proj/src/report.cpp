#include "gllm/report.hpp"

#include <cstdio>
#include <sstream>
#include <stdexcept>

namespace gllm {

using nlohmann::json;

std::string fixed4(double value) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.4f", value);
  return buf;
}

std::string format_family(VarSetFamily family, std::span<const std::string> labels) {
  canonicalize(family);
  if (family.empty()) return "(empty)";
  std::string out;
  for (auto s : family) {
    if (!out.empty()) out += ' ';
    out += format_set(s, labels);
  }
  return out;
}

namespace {

std::string yes_no(bool b) { return b ? "yes" : "no"; }

// Ordered list rendering; the work list order matters.
std::string format_list(const VarSetFamily& list, std::span<const std::string> labels) {
  if (list.empty()) return "(empty)";
  std::string out;
  for (auto s : list) {
    if (!out.empty()) out += ' ';
    out += format_set(s, labels);
  }
  return out;
}

json set_to_json(VarSet s, std::span<const std::string> labels) {
  json out = json::array();
  for (auto i : s.indices()) out.push_back(labels[i]);
  return out;
}

json family_to_json(const VarSetFamily& f, std::span<const std::string> labels) {
  json out = json::array();
  for (auto s : f) out.push_back(set_to_json(s, labels));
  return out;
}

json edge_to_json(Edge e, std::span<const std::string> labels) { return json::array({labels[e.first], labels[e.second]}); }

std::size_t label_index(const std::string& label, std::span<const std::string> labels) {
  for (std::size_t i = 0; i < labels.size(); ++i)
    if (labels[i] == label) return i;
  throw std::invalid_argument("trace JSON names unknown factor '" + label + "'");
}

VarSet set_from_json(const json& j, std::span<const std::string> labels) {
  VarSet s;
  for (const auto& x : j) s = s.with(label_index(x.get<std::string>(), labels));
  return s;
}

VarSetFamily family_from_json(const json& j, std::span<const std::string> labels) {
  VarSetFamily out;
  for (const auto& x : j) out.push_back(set_from_json(x, labels));
  return out;
}

Edge edge_from_json(const json& j, std::span<const std::string> labels) {
  if (!j.is_array() || j.size() != 2) throw std::invalid_argument("trace JSON: edge must be a pair");
  return Edge(label_index(j[0].get<std::string>(), labels), label_index(j[1].get<std::string>(), labels));
}

json model_to_json(const GeneratingClass& gc, std::span<const std::string> labels) {
  return family_to_json(gc.terms(), labels);
}

GeneratingClass model_from_json(const json& j, std::span<const std::string> labels) {
  return GeneratingClass::from_terms(family_from_json(j, labels), labels.size());
}

json pruned_to_json(const std::vector<PruneEvent>& events, std::span<const std::string> labels) {
  json out = json::array();
  for (const auto& e : events)
    out.push_back({{"set", set_to_json(e.set, labels)}, {"reason", to_string(e.reason)}, {"by", set_to_json(e.by, labels)}});
  return out;
}

std::vector<PruneEvent> pruned_from_json(const json& j, std::span<const std::string> labels) {
  std::vector<PruneEvent> out;
  for (const auto& e : j)
    out.push_back({set_from_json(e.at("set"), labels), prune_reason_from_string(e.at("reason").get<std::string>()),
                   set_from_json(e.at("by"), labels)});
  return out;
}

struct StepToJson {
  std::span<const std::string> labels;

  json operator()(const MciStep& s) const {
    const auto& r = s.record;
    return {{"type", "mci"},
            {"tested", set_to_json(r.tested, labels)},
            {"conditioning", set_to_json(r.conditioning, labels)},
            {"model", model_to_json(r.model, labels)},
            {"model_text", format_model(r.model, labels)},
            {"statistic", r.outcome.statistic},
            {"df", r.outcome.df},
            {"p_value", r.outcome.p_value},
            {"supported", r.outcome.supported},
            {"iterations", r.iterations}};
  }

  json operator()(const EdgeSearchStep& s) const {
    json cands = json::array();
    for (const auto& c : s.candidates)
      cands.push_back({{"edge", edge_to_json(c.edge, labels)},
                       {"model", model_to_json(c.model, labels)},
                       {"model_text", format_model(c.model, labels)},
                       {"g2", c.g2},
                       {"df", c.df},
                       {"delta_g2", c.delta_g2},
                       {"delta_df", c.delta_df},
                       {"p_value", c.p_value},
                       {"iterations", c.iterations}});
    return {{"type", "edge_search"},
            {"tested", set_to_json(s.tested, labels)},
            {"base_model", model_to_json(s.base_model, labels)},
            {"base_model_text", format_model(s.base_model, labels)},
            {"base_g2", s.base_g2},
            {"base_df", s.base_df},
            {"candidates", std::move(cands)},
            {"chosen", s.chosen ? edge_to_json(*s.chosen, labels) : json(nullptr)}};
  }

  json operator()(const CommitStep& s) const {
    return {{"type", "commit"},
            {"edge", edge_to_json(s.edge, labels)},
            {"model", model_to_json(s.model, labels)},
            {"model_text", format_model(s.model, labels)},
            {"g2", s.g2},
            {"df", s.df},
            {"delta_g2", s.delta_g2},
            {"delta_df", s.delta_df},
            {"iterations", s.iterations},
            {"pruned", pruned_to_json(s.pruned, labels)},
            {"temp_amis", family_to_json(s.temp_amis, labels)},
            {"amis", family_to_json(s.amis, labels)}};
  }

  json operator()(const AcceptStep& s) const {
    return {{"type", "accept"},
            {"set", set_to_json(s.set, labels)},
            {"forced", s.forced},
            {"pruned", pruned_to_json(s.pruned, labels)},
            {"temp_amis", family_to_json(s.temp_amis, labels)},
            {"amis", family_to_json(s.amis, labels)}};
  }
};

SelectionStep step_from_json(const json& j, std::span<const std::string> labels) {
  const auto type = j.at("type").get<std::string>();
  if (type == "mci") {
    MciStep s;
    s.record.tested = set_from_json(j.at("tested"), labels);
    s.record.conditioning = set_from_json(j.at("conditioning"), labels);
    s.record.model = model_from_json(j.at("model"), labels);
    s.record.outcome.statistic = j.at("statistic").get<double>();
    s.record.outcome.df = j.at("df").get<std::size_t>();
    s.record.outcome.p_value = j.at("p_value").get<double>();
    s.record.outcome.supported = j.at("supported").get<bool>();
    s.record.iterations = j.at("iterations").get<int>();
    return s;
  }
  if (type == "edge_search") {
    EdgeSearchStep s;
    s.tested = set_from_json(j.at("tested"), labels);
    s.base_model = model_from_json(j.at("base_model"), labels);
    s.base_g2 = j.at("base_g2").get<double>();
    s.base_df = j.at("base_df").get<std::size_t>();
    for (const auto& c : j.at("candidates")) {
      EdgeCandidate e;
      e.edge = edge_from_json(c.at("edge"), labels);
      e.model = model_from_json(c.at("model"), labels);
      e.g2 = c.at("g2").get<double>();
      e.df = c.at("df").get<std::size_t>();
      e.delta_g2 = c.at("delta_g2").get<double>();
      e.delta_df = c.at("delta_df").get<std::size_t>();
      e.p_value = c.at("p_value").get<double>();
      e.iterations = c.at("iterations").get<int>();
      s.candidates.push_back(std::move(e));
    }
    if (!j.at("chosen").is_null()) s.chosen = edge_from_json(j.at("chosen"), labels);
    return s;
  }
  if (type == "commit") {
    CommitStep s;
    s.edge = edge_from_json(j.at("edge"), labels);
    s.model = model_from_json(j.at("model"), labels);
    s.g2 = j.at("g2").get<double>();
    s.df = j.at("df").get<std::size_t>();
    s.delta_g2 = j.at("delta_g2").get<double>();
    s.delta_df = j.at("delta_df").get<std::size_t>();
    s.iterations = j.at("iterations").get<int>();
    s.pruned = pruned_from_json(j.at("pruned"), labels);
    s.temp_amis = family_from_json(j.at("temp_amis"), labels);
    s.amis = family_from_json(j.at("amis"), labels);
    return s;
  }
  if (type == "accept") {
    AcceptStep s;
    s.set = set_from_json(j.at("set"), labels);
    s.forced = j.at("forced").get<bool>();
    s.pruned = pruned_from_json(j.at("pruned"), labels);
    s.temp_amis = family_from_json(j.at("temp_amis"), labels);
    s.amis = family_from_json(j.at("amis"), labels);
    return s;
  }
  throw std::invalid_argument("trace JSON: unknown step type '" + type + "'");
}

std::string edge_label(Edge e, std::span<const std::string> labels) { return join_labels(e.as_set(), labels); }

void render_prunes(std::ostream& out, const std::vector<PruneEvent>& events, std::span<const std::string> labels) {
  for (const auto& e : events)
    out << "  pruned " << format_set(e.set, labels) << " (" << to_string(e.reason) << ' ' << format_set(e.by, labels)
        << ")\n";
}

void render_state(std::ostream& out, const VarSetFamily& temp, const VarSetFamily& amis,
                  std::span<const std::string> labels) {
  out << "  tempAMIS: " << format_list(temp, labels) << '\n';
  out << "  AMIS: " << format_list(amis, labels) << '\n';
}

}  // namespace

std::string render_fit_text(const FitResult& fit, std::span<const std::string> labels) {
  std::ostringstream out;
  out << "model: " << format_model(fit.model, labels) << '\n'
      << "df: " << fit.df << '\n'
      << "G2: " << fixed4(fit.g2) << '\n'
      << "X2: " << fixed4(fit.x2) << '\n'
      << "p-value: " << fixed4(fit.p_value) << '\n'
      << "iterations: " << fit.iterations << '\n'
      << "converged: " << yes_no(fit.converged) << '\n';
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.3g", fit.max_margin_error);
  out << "max margin error: " << buf << '\n';
  return out.str();
}

json fit_to_json(const FitResult& fit, std::span<const std::string> labels) {
  return {{"model", format_model(fit.model, labels)},
          {"model_terms", model_to_json(fit.model, labels)},
          {"df", fit.df},
          {"g2", fit.g2},
          {"x2", fit.x2},
          {"p_value", fit.p_value},
          {"iterations", fit.iterations},
          {"converged", fit.converged},
          {"max_margin_error", fit.max_margin_error},
          {"expected", fit.expected.counts()}};
}

std::string render_mci_text(const MciTestRecord& rec, std::span<const std::string> labels) {
  std::ostringstream out;
  out << "tested: " << format_set(rec.tested, labels) << '\n'
      << "given: " << format_set(rec.conditioning, labels) << '\n'
      << "model: " << format_model(rec.model, labels) << '\n'
      << "G2: " << fixed4(rec.outcome.statistic) << '\n'
      << "df: " << rec.outcome.df << '\n'
      << "p-value: " << fixed4(rec.outcome.p_value) << '\n'
      << "supported: " << yes_no(rec.outcome.supported) << '\n';
  return out.str();
}

json mci_to_json(const MciTestRecord& rec, std::span<const std::string> labels) {
  json j = StepToJson{labels}(MciStep{rec});
  j.erase("type");
  return j;
}

std::string render_trace_text(const SelectionTrace& trace, bool show_state) {
  const std::span<const std::string> labels = trace.labels;
  std::ostringstream out;
  out << "factors:";
  for (std::size_t i = 0; i < labels.size(); ++i) out << ' ' << labels[i] << '=' << trace.factor_names[i];
  out << '\n';
  out << "alpha: " << fixed4(trace.alpha) << '\n';
  out << "start: " << format_model(trace.start_model, labels) << " df " << trace.start_df << " G2 "
      << fixed4(trace.start_g2) << '\n';

  for (const auto& step : trace.steps) {
    if (const auto* m = std::get_if<MciStep>(&step)) {
      const auto& r = m->record;
      out << "mci " << format_set(r.tested, labels) << " given " << format_set(r.conditioning, labels) << ": "
          << format_model(r.model, labels) << " G2 " << fixed4(r.outcome.statistic) << " df " << r.outcome.df
          << " p " << fixed4(r.outcome.p_value) << (r.outcome.supported ? " -> supported" : " -> not supported")
          << '\n';
    } else if (const auto* e = std::get_if<EdgeSearchStep>(&step)) {
      out << "edges in " << format_set(e->tested, labels) << " vs " << format_model(e->base_model, labels) << " (df "
          << e->base_df << ", G2 " << fixed4(e->base_g2) << ")\n";
      char row[256];
      std::snprintf(row, sizeof row, "  %-6s %4s %12s %12s %4s %8s  %s\n", "edge", "df", "G2", "dG2", "ddf", "p-value",
                    "model");
      out << row;
      for (const auto& c : e->candidates) {
        std::snprintf(row, sizeof row, "  %-6s %4zu %12s %12s %4zu %8s  ", edge_label(c.edge, labels).c_str(), c.df,
                      fixed4(c.g2).c_str(), fixed4(c.delta_g2).c_str(), c.delta_df, fixed4(c.p_value).c_str());
        out << row << format_model(c.model, labels) << '\n';
      }
      out << "chosen: " << (e->chosen ? edge_label(*e->chosen, labels) : std::string("none")) << '\n';
    } else if (const auto* c = std::get_if<CommitStep>(&step)) {
      out << "commit " << edge_label(c->edge, labels) << ": " << format_model(c->model, labels) << " df " << c->df
          << " G2 " << fixed4(c->g2) << " dG2 " << fixed4(c->delta_g2) << " ddf " << c->delta_df << '\n';
      render_prunes(out, c->pruned, labels);
      if (show_state) render_state(out, c->temp_amis, c->amis, labels);
    } else if (const auto* a = std::get_if<AcceptStep>(&step)) {
      out << "accept " << format_set(a->set, labels) << (a->forced ? " (forced: no significant edge)" : "") << '\n';
      render_prunes(out, a->pruned, labels);
      if (show_state) render_state(out, a->temp_amis, a->amis, labels);
    }
  }

  out << "model: " << format_model(trace.final_state.model, labels) << '\n';
  out << "amis: " << format_family(trace.final_state.amis, labels) << '\n';
  for (const auto& w : trace.warnings) out << "warning: " << w << '\n';
  return out.str();
}

json trace_to_json(const SelectionTrace& trace) {
  const std::span<const std::string> labels = trace.labels;
  json steps = json::array();
  for (const auto& step : trace.steps) steps.push_back(std::visit(StepToJson{labels}, step));

  VarSetFamily amis = trace.final_state.amis;
  canonicalize(amis);
  json edges = json::array();
  for (const auto& e : trace.final_state.graph.edges()) edges.push_back(edge_to_json(e, labels));

  return {{"factors", trace.factor_names},
          {"labels", trace.labels},
          {"alpha", trace.alpha},
          {"ipf", {{"tol", trace.ipf.tol}, {"max_iter", trace.ipf.max_iter}}},
          {"start", {{"model", model_to_json(trace.start_model, labels)}, {"g2", trace.start_g2}, {"df", trace.start_df}}},
          {"steps", std::move(steps)},
          {"final_model", format_model(trace.final_state.model, labels)},
          {"amis", family_to_json(amis, labels)},
          {"warnings", trace.warnings},
          {"final_state",
           {{"edges", std::move(edges)},
            {"model", model_to_json(trace.final_state.model, labels)},
            {"temp_amis", family_to_json(trace.final_state.temp_amis, labels)},
            {"amis", family_to_json(trace.final_state.amis, labels)}}}};
}

SelectionTrace trace_from_json(const json& doc) {
  SelectionTrace t;
  t.factor_names = doc.at("factors").get<std::vector<std::string>>();
  t.labels = doc.at("labels").get<std::vector<std::string>>();
  if (t.labels.size() != t.factor_names.size()) throw std::invalid_argument("trace JSON: factors and labels differ in length");
  const std::span<const std::string> labels = t.labels;
  t.alpha = doc.at("alpha").get<double>();
  t.ipf.tol = doc.at("ipf").at("tol").get<double>();
  t.ipf.max_iter = doc.at("ipf").at("max_iter").get<int>();
  t.start_model = model_from_json(doc.at("start").at("model"), labels);
  t.start_g2 = doc.at("start").at("g2").get<double>();
  t.start_df = doc.at("start").at("df").get<std::size_t>();
  for (const auto& s : doc.at("steps")) t.steps.push_back(step_from_json(s, labels));
  t.warnings = doc.at("warnings").get<std::vector<std::string>>();

  const auto& fs = doc.at("final_state");
  t.final_state.graph = UndirectedGraph(t.factor_names);
  for (const auto& e : fs.at("edges")) {
    const auto edge = edge_from_json(e, labels);
    t.final_state.graph.add_edge(edge.first, edge.second);
  }
  t.final_state.model = model_from_json(fs.at("model"), labels);
  t.final_state.temp_amis = family_from_json(fs.at("temp_amis"), labels);
  t.final_state.amis = family_from_json(fs.at("amis"), labels);
  return t;
}

}  // namespace gllm
