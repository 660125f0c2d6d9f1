#pragma once

#include <cstdint>
#include <random>
#include <vector>

#include "pgm/core/network.hpp"

namespace pgm::testing {

/// A -> B with P(A=true)=0.3, P(B=true|A=true)=0.9, P(B=true|A=false)=0.2.
Network ab_network();

/// A -> B -> C, uniform A, P(B=A)=0.9, P(C=B)=0.9.
Network chain3();

/// Fixed binary benchmark over A..H with v-structures A->C<-B and E->G<-F,
/// a loop through B, and every edge shifting its child by >= 0.3.
Network benchmark8();

/// Same graph as benchmark8 with skewed CPTs, for rare-evidence runs.
Network rare8();

/// Evidence used with benchmark8 (probability above 0.01).
Evidence benchmark8_evidence();

/// Evidence used with rare8 (probability below 1e-3).
Evidence rare8_evidence();

struct RandomNetOptions {
  int n = 8;
  int max_parents = 3;
  double edge_prob = 0.4;
  int min_card = 2;
  int max_card = 2;
  /// Shuffle ids so that they are not a topological order.
  bool shuffle_ids = true;
};

/// Random DAG with Dirichlet(1) CPT rows.
Network random_network(std::mt19937_64& rng, const RandomNetOptions& opts);

/// Random polytree (the skeleton is a tree) with Dirichlet(1) rows.
Network random_polytree(std::mt19937_64& rng, int n, int card = 2);

/// Chain X0 -> X1 -> ... with moderate CPT entries in [0.2, 0.8].
Network moderate_chain(int n);

/// Random evidence on up to max_vars variables, drawn uniformly over states.
Evidence random_evidence(std::mt19937_64& rng, const Network& net, int max_vars);

}  // namespace pgm::testing
