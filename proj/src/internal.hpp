/// Shared internals: the conjugate-lag kernel used by both fusion paths and
/// the lattice argmax with the common tie rules.
#pragma once

#include <limits>

#include "coopsense/fusion_location.hpp"
#include "coopsense/types.hpp"

namespace coopsense::detail {

/// out(k-1) = 1/(L-k) sum_a x(a) conj(x(a+k)) for k = 1..L-1.
CVec conjugate_lag_means(const CVec& x);

/// Highest weight wins; exact ties go to the node nearest the lattice
/// center, then to the lowest row-major (iy, ix) index.
template <class WeightFn>
Vec2 lattice_argmax(const Lattice& lat, WeightFn&& weight_of) {
  const int n = lat.per_axis();
  double best_w = -std::numeric_limits<double>::infinity();
  double best_d2 = std::numeric_limits<double>::infinity();
  Vec2 best = lat.center;
  for (int iy = 0; iy < n; ++iy) {
    for (int ix = 0; ix < n; ++ix) {
      const Vec2 node = lat.node(ix, iy);
      const double w = weight_of(node);
      if (w > best_w) {
        best_w = w;
        best_d2 = (node - lat.center).squaredNorm();
        best = node;
      } else if (w == best_w) {
        const double d2 = (node - lat.center).squaredNorm();
        if (d2 < best_d2) {
          best_d2 = d2;
          best = node;
        }
      }
    }
  }
  return best;
}

}  // namespace coopsense::detail
