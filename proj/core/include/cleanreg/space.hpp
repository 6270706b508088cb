#pragma once

#include <cmath>

#include "cleanreg/ints.hpp"

namespace cleanreg {

// Catalytic-machine cost of simulating a clean register program of time t,
// space s, n inputs over a ring of size ring_size, with unit constants:
//   pure space      log2 t + log2 n + log2 |R|
//   catalytic space s * log2 |R|
struct SpaceReport {
  uint64_t time = 0;
  uint64_t registers = 0;
  uint64_t inputs = 0;
  u128 ring_size = 2;

  double pure_space_units() const {
    return std::log2(double(time)) + std::log2(double(inputs)) +
           std::log2(double(ring_size));
  }
  double catalytic_space_units() const {
    return double(registers) * std::log2(double(ring_size));
  }
};

}  // namespace cleanreg
