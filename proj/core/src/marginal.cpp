#include "ising/marginal.hpp"

#include <cmath>
#include <stdexcept>

namespace ising {

double tv_distance(const SpinMarginal& p, const SpinMarginal& q) {
  if (p.vertices != q.vertices)
    throw std::invalid_argument("tv_distance: vertex sets differ");
  if (p.prob.size() != q.prob.size())
    throw std::invalid_argument("tv_distance: support size mismatch");
  double sp = 0.0, sq = 0.0, tv = 0.0;
  for (size_t i = 0; i < p.prob.size(); ++i) {
    sp += p.prob[i];
    sq += q.prob[i];
    tv += std::fabs(p.prob[i] - q.prob[i]);
  }
  if (std::fabs(sp - 1.0) > 1e-9 || std::fabs(sq - 1.0) > 1e-9)
    throw std::invalid_argument("tv_distance: inputs not normalized");
  return 0.5 * tv;
}

}  // namespace ising
