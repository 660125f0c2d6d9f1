#include "pgm/learn/pdag.hpp"

#include <algorithm>

#include "pgm/core/error.hpp"

namespace pgm {

PdagGraph PdagGraph::complete(std::size_t n) {
  PdagGraph g(n);
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = i + 1; j < n; ++j) g.add_undirected(static_cast<VarId>(i), static_cast<VarId>(j));
  }
  return g;
}

PdagGraph PdagGraph::from_parents(const std::vector<std::vector<VarId>>& parents) {
  PdagGraph g(parents.size());
  for (std::size_t v = 0; v < parents.size(); ++v) {
    for (VarId p : parents[v]) g.orient(p, static_cast<VarId>(v));
  }
  return g;
}

std::size_t PdagGraph::index(VarId i, VarId j) const {
  const auto n = static_cast<VarId>(n_);
  if (i < 0 || j < 0 || i >= n || j >= n || i == j) {
    throw Error(ErrorCode::kInvalidArgument,
                "invalid graph vertex pair (" + std::to_string(i) + ", " + std::to_string(j) + ")");
  }
  return static_cast<std::size_t>(i) * n_ + static_cast<std::size_t>(j);
}

void PdagGraph::add_undirected(VarId i, VarId j) {
  mark_[index(i, j)] = 1;
  mark_[index(j, i)] = 1;
}

void PdagGraph::orient(VarId i, VarId j) {
  mark_[index(i, j)] = 1;
  mark_[index(j, i)] = 0;
}

void PdagGraph::remove(VarId i, VarId j) {
  mark_[index(i, j)] = 0;
  mark_[index(j, i)] = 0;
}

std::vector<VarId> PdagGraph::neighbors(VarId i) const {
  std::vector<VarId> out;
  for (std::size_t j = 0; j < n_; ++j) {
    const auto v = static_cast<VarId>(j);
    if (v != i && adjacent(i, v)) out.push_back(v);
  }
  return out;
}

std::vector<PdagEdge> PdagGraph::edges() const {
  std::vector<PdagEdge> out;
  for (std::size_t i = 0; i < n_; ++i) {
    for (std::size_t j = i + 1; j < n_; ++j) {
      const auto a = static_cast<VarId>(i);
      const auto b = static_cast<VarId>(j);
      if (undirected(a, b)) {
        out.push_back({a, b, false});
      } else if (has_arrow(a, b)) {
        out.push_back({a, b, true});
      } else if (has_arrow(b, a)) {
        out.push_back({b, a, true});
      }
    }
  }
  return out;
}

std::size_t PdagGraph::edge_count() const {
  std::size_t count = 0;
  for (std::size_t i = 0; i < n_; ++i) {
    for (std::size_t j = i + 1; j < n_; ++j) {
      if (mark_[i * n_ + j] || mark_[j * n_ + i]) ++count;
    }
  }
  return count;
}

void SepsetMap::set(VarId i, VarId j, std::vector<VarId> sepset) {
  std::sort(sepset.begin(), sepset.end());
  sets_[{std::min(i, j), std::max(i, j)}] = std::move(sepset);
}

const std::vector<VarId>* SepsetMap::find(VarId i, VarId j) const {
  const auto it = sets_.find({std::min(i, j), std::max(i, j)});
  return it == sets_.end() ? nullptr : &it->second;
}

}  // namespace pgm
