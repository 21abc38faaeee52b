#pragma once

#include <cstdint>

#include "cnngp/dataset.hpp"
#include "cnngp/random.hpp"

namespace bench {

inline cnngp::Dataset synthetic(cnngp::Index n, std::uint64_t seed = 3) {
  cnngp::RandomStream rng(seed);
  cnngp::Dataset d;
  d.coords.resize(n, 2);
  d.x.resize(n, 2);
  d.y.resize(n, 2);
  for (cnngp::Index i = 0; i < n; ++i) {
    d.coords(i, 0) = rng.uniform();
    d.coords(i, 1) = rng.uniform();
    d.x(i, 0) = 1.0;
    d.x(i, 1) = rng.normal();
    d.y(i, 0) = 1.0 - 2.0 * d.x(i, 1) + rng.normal();
    d.y(i, 1) = 1.0 + 2.0 * d.x(i, 1) + rng.normal();
  }
  return d;
}

}  // namespace bench
