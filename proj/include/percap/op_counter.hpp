#ifndef PERCAP_OP_COUNTER_HPP
#define PERCAP_OP_COUNTER_HPP

#include <cstdint>

namespace percap {

// Tally of scalar floating-point multiplications performed by a permanent
// algorithm. Additions and subtractions are free under this metric, as are
// scalings by integer combinatorial constants (binomial coefficients and
// factorial normalizations); integer-power weights are counted.
class OpCounter {
  public:
    void add(std::uint64_t n = 1) noexcept { multiplications_ += n; }
    std::uint64_t multiplications() const noexcept { return multiplications_; }
    void reset() noexcept { multiplications_ = 0; }

  private:
    std::uint64_t multiplications_ = 0;
};

} // namespace percap

#endif
