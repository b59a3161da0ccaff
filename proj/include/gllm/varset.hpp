#pragma once

#include <bit>
#include <cstdint>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

namespace gllm {

/// Hard limit on the number of factors (vertices) a model can carry.
inline constexpr std::size_t kMaxVariables = 64;

/// A set of variable positions (factor indices or vertex indices), stored as a
/// bitmask. Position i refers to the i-th factor/vertex of the owning table or
/// graph.
class VarSet {
 public:
  constexpr VarSet() = default;
  constexpr explicit VarSet(std::uint64_t bits) : bits_(bits) {}

  static VarSet single(std::size_t i) {
    check_index(i);
    return VarSet(std::uint64_t{1} << i);
  }
  static VarSet pair(std::size_t i, std::size_t j) { return single(i) | single(j); }
  /// {0, ..., n-1}
  static VarSet first(std::size_t n) {
    if (n > kMaxVariables) throw std::out_of_range("VarSet: too many variables");
    return VarSet(n == kMaxVariables ? ~std::uint64_t{0} : (std::uint64_t{1} << n) - 1);
  }
  static VarSet of(std::initializer_list<std::size_t> idx) {
    VarSet s;
    for (auto i : idx) s = s | single(i);
    return s;
  }

  constexpr std::uint64_t bits() const { return bits_; }
  constexpr bool empty() const { return bits_ == 0; }
  constexpr std::size_t size() const { return static_cast<std::size_t>(std::popcount(bits_)); }
  bool contains(std::size_t i) const { return i < kMaxVariables && ((bits_ >> i) & 1U) != 0; }
  constexpr bool contains_all(VarSet o) const { return (bits_ & o.bits_) == o.bits_; }
  constexpr bool subset_of(VarSet o) const { return o.contains_all(*this); }
  constexpr bool strict_subset_of(VarSet o) const { return subset_of(o) && bits_ != o.bits_; }
  constexpr bool intersects(VarSet o) const { return (bits_ & o.bits_) != 0; }

  VarSet with(std::size_t i) const { return *this | single(i); }
  VarSet without(std::size_t i) const { return VarSet(bits_ & ~single(i).bits_); }

  /// Indices in increasing order.
  std::vector<std::size_t> indices() const {
    std::vector<std::size_t> out;
    out.reserve(size());
    for (auto b = bits_; b != 0; b &= b - 1) out.push_back(static_cast<std::size_t>(std::countr_zero(b)));
    return out;
  }
  std::size_t lowest() const {
    if (bits_ == 0) throw std::logic_error("VarSet::lowest on empty set");
    return static_cast<std::size_t>(std::countr_zero(bits_));
  }

  friend constexpr VarSet operator|(VarSet a, VarSet b) { return VarSet(a.bits_ | b.bits_); }
  friend constexpr VarSet operator&(VarSet a, VarSet b) { return VarSet(a.bits_ & b.bits_); }
  /// Set difference.
  friend constexpr VarSet operator-(VarSet a, VarSet b) { return VarSet(a.bits_ & ~b.bits_); }
  friend constexpr bool operator==(VarSet a, VarSet b) = default;

 private:
  static void check_index(std::size_t i) {
    if (i >= kMaxVariables) throw std::out_of_range("VarSet: index out of range");
  }

  std::uint64_t bits_ = 0;
};

/// Lexicographic order on the increasing index sequences; a proper prefix sorts
/// first, so {0} < {0,1} < {0,2} < {1}.
inline bool canonical_less(VarSet a, VarSet b) {
  auto x = a.bits();
  auto y = b.bits();
  while (x != 0 && y != 0) {
    const int lx = std::countr_zero(x);
    const int ly = std::countr_zero(y);
    if (lx != ly) return lx < ly;
    x &= x - 1;
    y &= y - 1;
  }
  return x == 0 && y != 0;
}

struct CanonicalLess {
  bool operator()(VarSet a, VarSet b) const { return canonical_less(a, b); }
};

using VarSetFamily = std::vector<VarSet>;

/// Sorts canonically and removes duplicates.
void canonicalize(VarSetFamily& family);

/// Keeps only members not strictly contained in another member, canonically sorted.
VarSetFamily maximal_members(VarSetFamily family);

bool is_antichain(std::span<const VarSet> family);

/// "{A,B,F}" using the given labels.
std::string format_set(VarSet s, std::span<const std::string> labels);

/// "AC" when every label is one character, otherwise "a,c".
std::string join_labels(VarSet s, std::span<const std::string> labels);

}  // namespace gllm
