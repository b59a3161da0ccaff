#include "gllm/varset.hpp"

#include <algorithm>
#include <stdexcept>

namespace gllm {

void canonicalize(VarSetFamily& family) {
  std::sort(family.begin(), family.end(), CanonicalLess{});
  family.erase(std::unique(family.begin(), family.end()), family.end());
}

VarSetFamily maximal_members(VarSetFamily family) {
  canonicalize(family);
  VarSetFamily out;
  for (auto s : family) {
    const bool dominated = std::any_of(family.begin(), family.end(),
                                       [s](VarSet o) { return s.strict_subset_of(o); });
    if (!dominated) out.push_back(s);
  }
  return out;
}

bool is_antichain(std::span<const VarSet> family) {
  for (std::size_t i = 0; i < family.size(); ++i)
    for (std::size_t j = 0; j < family.size(); ++j)
      if (i != j && family[i].subset_of(family[j])) return false;
  return true;
}

namespace {

const std::string& label_at(std::span<const std::string> labels, std::size_t i) {
  if (i >= labels.size()) throw std::out_of_range("set member has no label");
  return labels[i];
}

bool all_single_char(VarSet s, std::span<const std::string> labels) {
  for (auto i : s.indices())
    if (label_at(labels, i).size() != 1) return false;
  return true;
}

}  // namespace

std::string format_set(VarSet s, std::span<const std::string> labels) {
  std::string out = "{";
  bool first = true;
  for (auto i : s.indices()) {
    if (!first) out += ',';
    out += label_at(labels, i);
    first = false;
  }
  out += '}';
  return out;
}

std::string join_labels(VarSet s, std::span<const std::string> labels) {
  const bool compact = all_single_char(s, labels);
  std::string out;
  for (auto i : s.indices()) {
    if (!compact && !out.empty()) out += ',';
    out += label_at(labels, i);
  }
  return out;
}

}  // namespace gllm
