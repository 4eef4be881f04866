#include "vunify/sorts.hpp"

#include <algorithm>
#include <map>
#include <numeric>

#include "vunify/errors.hpp"

namespace vunify {

SortId SortGraph::add_sort(const std::string& name) {
  if (finalized_) throw TheoryError("cannot add sort '" + name + "' after finalize");
  for (SortId i = 0; i < static_cast<SortId>(names_.size()); ++i)
    if (names_[i] == name) return i;
  names_.push_back(name);
  return static_cast<SortId>(names_.size() - 1);
}

void SortGraph::add_subsort(SortId lower, SortId upper) {
  if (finalized_) throw TheoryError("cannot add subsort after finalize");
  if (lower == upper) return;
  edges_.emplace_back(lower, upper);
}

std::optional<SortId> SortGraph::find(const std::string& name) const {
  for (SortId i = 0; i < static_cast<SortId>(names_.size()); ++i)
    if (names_[i] == name) return i;
  return std::nullopt;
}

std::vector<SortId> SortGraph::user_sorts() const {
  std::vector<SortId> out;
  for (SortId i = 0; i < static_cast<SortId>(names_.size()); ++i)
    if (!is_kind_[i]) out.push_back(i);
  return out;
}

void SortGraph::finalize() {
  if (finalized_) return;
  const int n_user = static_cast<int>(names_.size());

  // Union-find over the user sorts to identify the connected components.
  std::vector<int> uf(n_user);
  std::iota(uf.begin(), uf.end(), 0);
  auto root = [&](int x) {
    while (uf[x] != x) x = uf[x] = uf[uf[x]];
    return x;
  };
  for (auto [lo, hi] : edges_) uf[root(lo)] = root(hi);

  std::map<int, int> comp_index;
  component_.assign(n_user, -1);
  for (int i = 0; i < n_user; ++i) {
    int r = root(i);
    auto it = comp_index.find(r);
    if (it == comp_index.end()) it = comp_index.emplace(r, static_cast<int>(comp_index.size())).first;
    component_[i] = it->second;
  }
  const int n_comp = static_cast<int>(comp_index.size());

  // Reflexive-transitive closure of < on the user sorts.
  std::vector<std::vector<bool>> lt(n_user, std::vector<bool>(n_user, false));
  for (int i = 0; i < n_user; ++i) lt[i][i] = true;
  for (auto [lo, hi] : edges_) lt[lo][hi] = true;
  for (int k = 0; k < n_user; ++k)
    for (int i = 0; i < n_user; ++i)
      if (lt[i][k])
        for (int j = 0; j < n_user; ++j)
          if (lt[k][j]) lt[i][j] = true;
  for (int i = 0; i < n_user; ++i)
    for (int j = 0; j < n_user; ++j)
      if (i != j && lt[i][j] && lt[j][i])
        throw TheoryError("subsort cycle between '" + names_[i] + "' and '" + names_[j] + "'");

  // One synthesized kind per component, named after its maximal user sorts.
  is_kind_.assign(n_user, false);
  kind_of_component_.assign(n_comp, -1);
  for (int c = 0; c < n_comp; ++c) {
    std::vector<int> maximal;
    for (int i = 0; i < n_user; ++i) {
      if (component_[i] != c) continue;
      bool is_max = true;
      for (int j = 0; j < n_user && is_max; ++j)
        if (j != i && component_[j] == c && lt[i][j]) is_max = false;
      if (is_max) maximal.push_back(i);
    }
    std::string kind_name = "[";
    for (size_t k = 0; k < maximal.size(); ++k) {
      if (k) kind_name += ",";
      kind_name += names_[maximal[k]];
    }
    kind_name += "]";
    names_.push_back(kind_name);
    is_kind_.push_back(true);
    component_.push_back(c);
    kind_of_component_[c] = static_cast<SortId>(names_.size() - 1);
  }

  const int n = static_cast<int>(names_.size());
  leq_.assign(n, std::vector<bool>(n, false));
  for (int i = 0; i < n_user; ++i)
    for (int j = 0; j < n_user; ++j) leq_[i][j] = lt[i][j];
  for (int i = 0; i < n; ++i) {
    leq_[i][i] = true;
    leq_[i][kind_of_component_[component_[i]]] = true;
  }
  finalized_ = true;
}

}  // namespace vunify
