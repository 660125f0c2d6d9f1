#include "pgm/approx/layout.hpp"

namespace pgm {

SamplingLayout::SamplingLayout(const Network& net) {
  const std::size_t n = net.size();
  position_.assign(n, 0);
  marg_offset_.assign(n, 0);
  for (std::size_t v = 0; v < n; ++v) {
    marg_offset_[v] = marg_size_;
    marg_size_ += static_cast<std::size_t>(net.variables()[v].cardinality());
  }
  for (VarId v : net.topological_order()) {
    FusedNode node;
    node.var = v;
    node.card = net.variable(v).cardinality();
    node.offset = rows_.size();
    const PotentialTable& cpt = net.cpt(v);
    // Parents in ascending id order, then the node itself fastest.
    std::vector<int> cards;
    std::vector<std::size_t> canonical_strides;
    for (std::size_t k = 0; k < cpt.scope().size(); ++k) {
      if (cpt.scope()[k] == v) continue;
      node.parents.push_back(cpt.scope()[k]);
      cards.push_back(cpt.cards()[k]);
      canonical_strides.push_back(cpt.strides()[k]);
    }
    node.parent_strides.assign(node.parents.size(), 1);
    for (std::size_t k = node.parents.size(); k-- > 1;) {
      node.parent_strides[k - 1] = node.parent_strides[k] * static_cast<std::size_t>(cards[k]);
    }
    for (int c : cards) node.configs *= static_cast<std::size_t>(c);
    cards.push_back(node.card);
    canonical_strides.push_back(cpt.strides()[static_cast<std::size_t>(cpt.position(v))]);
    for (std::size_t idx : strided_offsets(cards, canonical_strides)) rows_.push_back(cpt.values()[idx]);
    position_[static_cast<std::size_t>(v)] = nodes_.size();
    nodes_.push_back(std::move(node));
  }
}

int draw_state(const double* row, int card, double u) noexcept {
  double cum = 0.0;
  int last_positive = 0;
  for (int s = 0; s < card; ++s) {
    if (row[s] <= 0.0) continue;
    cum += row[s];
    last_positive = s;
    if (u < cum) return s;
  }
  return last_positive;
}

}  // namespace pgm
