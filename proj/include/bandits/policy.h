#pragma once

#include <cstddef>

#include "bandits/rng.h"

namespace bandits {

// K-armed interaction contract: select() draws the arm for this round, then
// observe() reports the loss in [0,1] of that arm only. Calls alternate
// strictly. Stochastic policies read rewards as 1 - loss.
class Policy {
 public:
  virtual ~Policy() = default;

  virtual std::size_t arms() const = 0;
  virtual std::size_t select(Rng& rng) = 0;
  virtual void observe(std::size_t arm, double loss, Rng& rng) = 0;
};

}  // namespace bandits
