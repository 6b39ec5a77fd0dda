#include "aircomp/quantizer.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

namespace aircomp {

namespace {
// Absolute slack for range checks at the interval endpoints; float noise in
// upstream pre-processing must not masquerade as a wrong range declaration.
double range_tolerance(double pi_max) {
  return 1e-9 * (pi_max > 1.0 ? pi_max : 1.0);
}
}  // namespace

int DyadicQuantizer::integer_bits_for(double pi_max) {
  if (pi_max < 0.0)
    throw std::invalid_argument("quantizer: pi_max must be nonnegative");
  if (pi_max == 0.0) return 0;  // constant-zero range needs no integer bits
  return std::ilogb(pi_max);
}

DyadicQuantizer::DyadicQuantizer(int b, double pi_max, double shift)
    : b_(b), pi_max_(pi_max), shift_(shift) {
  if (b < 1 || b > 62) throw std::invalid_argument("quantizer: need 1 <= b <= 62");
  if (!(pi_max >= 0.0) || !std::isfinite(pi_max))
    throw std::invalid_argument("quantizer: bad pi_max");
  if (!std::isfinite(shift))
    throw std::invalid_argument("quantizer: bad shift");
  v_ = integer_bits_for(pi_max);
  eta_ = b_ - v_ - 1;
  if (eta_ < 0)
    throw std::invalid_argument(
        "quantizer: b too small for the integer part (need b >= v + 1 = " +
        std::to_string(v_ + 1) + ")");
}

std::uint64_t DyadicQuantizer::max_level() const {
  return (std::uint64_t{1} << b_) - 1;
}

std::uint64_t DyadicQuantizer::quantize(double xi) const {
  double value = xi + shift_;
  double tol = range_tolerance(pi_max_);
  if (!(value >= -tol) || !(value <= pi_max_ + tol))
    throw std::out_of_range("quantizer: value outside declared range");
  if (value < 0.0) value = 0.0;
  if (value > pi_max_) value = pi_max_;
  double scaled = std::ldexp(value, eta_);
  auto level = static_cast<std::uint64_t>(scaled);  // floor: value >= 0
  return level;
}

double DyadicQuantizer::dequantize_sum(std::uint64_t digit_sum,
                                       int count) const {
  if (count < 1) throw std::invalid_argument("quantizer: count must be >= 1");
  std::uint64_t limit = static_cast<std::uint64_t>(count) * max_level();
  if (digit_sum > limit)
    throw std::out_of_range("quantizer: digit sum out of range (wraparound?)");
  return std::ldexp(static_cast<double>(digit_sum), -eta_) - count * shift_;
}

double DyadicQuantizer::max_error() const { return std::ldexp(1.0, -eta_); }

}  // namespace aircomp
