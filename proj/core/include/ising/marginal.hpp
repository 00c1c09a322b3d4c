#pragma once

#include <vector>

namespace ising {

// Distribution over {-1,+1}^U for an ordered vertex set U. Configuration c is
// indexed by bits: bit k of c set <=> x_{vertices[k]} = +1, so prob.size() ==
// 2^|U|.
struct SpinMarginal {
  std::vector<int> vertices;
  std::vector<double> prob;
};

// Total variation distance (1/2) sum |p - q|. The two marginals must be over
// the same vertex sequence and each normalized within 1e-9.
double tv_distance(const SpinMarginal& p, const SpinMarginal& q);

}  // namespace ising
