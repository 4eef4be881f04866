// Order-sorted sort poset with connected components and synthesized kinds.
#ifndef VUNIFY_SORTS_HPP
#define VUNIFY_SORTS_HPP

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

namespace vunify {

using SortId = int32_t;

/// Poset of sorts partitioned into connected components. Every component gets
/// a synthesized top sort (its "kind", printed [MaxSort]) sitting strictly
/// above all declared sorts, so variables and intermediate terms can always be
/// typed inside their component.
class SortGraph {
 public:
  /// Adds a user sort; returns its id. Idempotent on repeated names.
  SortId add_sort(const std::string& name);

  /// Declares lower < upper. Both sorts must already exist.
  void add_subsort(SortId lower, SortId upper);

  /// Computes the reflexive-transitive closure, checks acyclicity, partitions
  /// into components and synthesizes one kind per component. Must be called
  /// once after all declarations; further add_sort calls are rejected.
  void finalize();

  bool finalized() const { return finalized_; }

  std::optional<SortId> find(const std::string& name) const;
  const std::string& name(SortId s) const { return names_[s]; }
  int size() const { return static_cast<int>(names_.size()); }

  bool leq(SortId a, SortId b) const { return leq_[a][b]; }
  int component(SortId s) const { return component_[s]; }
  bool same_component(SortId a, SortId b) const { return component_[a] == component_[b]; }
  /// The synthesized top sort of s's component.
  SortId kind_of(SortId s) const { return kind_of_component_[component_[s]]; }
  bool is_kind(SortId s) const { return is_kind_[s]; }
  int component_count() const { return static_cast<int>(kind_of_component_.size()); }
  SortId kind_of_component(int c) const { return kind_of_component_[c]; }
  /// User-declared sorts, in declaration order.
  std::vector<SortId> user_sorts() const;
  /// Declared subsort edges, as given (used by the theory printer).
  const std::vector<std::pair<SortId, SortId>>& subsort_edges() const { return edges_; }

 private:
  std::vector<std::string> names_;
  std::vector<std::pair<SortId, SortId>> edges_;
  std::vector<std::vector<bool>> leq_;
  std::vector<int> component_;
  std::vector<SortId> kind_of_component_;
  std::vector<bool> is_kind_;
  bool finalized_ = false;
};

}  // namespace vunify

#endif
