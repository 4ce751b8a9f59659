#pragma once

namespace bset {

// Kahan compensated accumulator. Long series of small block probabilities
// lose low-order bits under plain += ; the compensation term carries them.
struct KahanSum {
  double sum = 0.0;
  double carry = 0.0;

  void add(double value) noexcept {
    const double y = value - carry;
    const double t = sum + y;
    carry = (t - sum) - y;
    sum = t;
  }

  double value() const noexcept { return sum; }
};

}  // namespace bset
