#pragma once

#include <cstddef>
#include <cstdint>
#include <map>
#include <utility>
#include <vector>

#include "pgm/core/types.hpp"

namespace pgm {

struct PdagEdge {
  VarId from;
  VarId to;
  bool directed;  // when false, from < to

  friend bool operator==(const PdagEdge&, const PdagEdge&) = default;
};

/// Graph with directed and undirected edges, at most one per pair.
///
/// Stored as an n x n mark matrix: i -> j is mark(i,j) && !mark(j,i), an
/// undirected edge sets both marks.
class PdagGraph {
 public:
  explicit PdagGraph(std::size_t n = 0) : n_(n), mark_(n * n, 0) {}

  static PdagGraph complete(std::size_t n);
  static PdagGraph from_parents(const std::vector<std::vector<VarId>>& parents);

  std::size_t size() const noexcept { return n_; }

  bool adjacent(VarId i, VarId j) const { return mark(i, j) || mark(j, i); }
  bool has_arrow(VarId i, VarId j) const { return mark(i, j) && !mark(j, i); }
  bool undirected(VarId i, VarId j) const { return mark(i, j) && mark(j, i); }

  void add_undirected(VarId i, VarId j);
  /// Makes the edge between i and j point i -> j (adding it if absent).
  void orient(VarId i, VarId j);
  void remove(VarId i, VarId j);

  /// Adjacent vertices in ascending id order.
  std::vector<VarId> neighbors(VarId i) const;
  std::vector<PdagEdge> edges() const;
  std::size_t edge_count() const;

  friend bool operator==(const PdagGraph&, const PdagGraph&) = default;

 private:
  bool mark(VarId i, VarId j) const { return mark_[index(i, j)] != 0; }
  std::size_t index(VarId i, VarId j) const;

  std::size_t n_;
  std::vector<std::uint8_t> mark_;
};

/// Separating sets of removed edges, keyed by the unordered pair.
class SepsetMap {
 public:
  void set(VarId i, VarId j, std::vector<VarId> sepset);
  const std::vector<VarId>* find(VarId i, VarId j) const;
  bool contains(VarId i, VarId j) const { return find(i, j) != nullptr; }
  std::size_t size() const noexcept { return sets_.size(); }
  const std::map<std::pair<VarId, VarId>, std::vector<VarId>>& entries() const noexcept { return sets_; }

  friend bool operator==(const SepsetMap&, const SepsetMap&) = default;

 private:
  std::map<std::pair<VarId, VarId>, std::vector<VarId>> sets_;
};

}  // namespace pgm
