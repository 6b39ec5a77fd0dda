#pragma once

#include <cstdint>

namespace aircomp {

// Common b-bit dyadic quantizer shared by every node. Values are shifted by
// `shift` into the nonnegative working range [0, pi_max] and truncated to
// eta fractional bits: level = floor((value + shift) * 2^eta). The split
// b = eta + v + 1 reserves v + 1 bits for the integer part, where
// v = floor(log2(pi_max)) (v = 0 for the degenerate pi_max = 0).
//
// Truncation is one-sided: the reconstructed value never exceeds the input
// and the error is strictly below 2^-eta.
class DyadicQuantizer {
 public:
  // pi_max is the maximum of the shifted (nonnegative) working range.
  DyadicQuantizer(int b, double pi_max, double shift);

  int bits() const { return b_; }
  int integer_part_bits() const { return v_; }
  int fractional_depth() const { return eta_; }
  double pi_max() const { return pi_max_; }
  double shift() const { return shift_; }

  std::uint64_t max_level() const;  // 2^b - 1

  // Quantizes a raw (unshifted) value; the shift is applied internally.
  // Out-of-range input signals a wrong range declaration upstream and
  // throws.
  std::uint64_t quantize(double xi) const;

  // Reconstructs the sum of `count` pre-processed values from the integer
  // digit-sum S of their quantization levels, undoing the shifts:
  // S * 2^-eta - count * shift. S out of range signals wraparound upstream.
  double dequantize_sum(std::uint64_t digit_sum, int count) const;

  // Single-value reconstruction (count = 1).
  double dequantize(std::uint64_t level) const { return dequantize_sum(level, 1); }

  // Worst-case reconstruction error 2^-eta; the realized error is always
  // strictly below this.
  double max_error() const;

  // v = floor(log2(pi_max)), with the pi_max = 0 convention v = 0.
  static int integer_bits_for(double pi_max);

 private:
  int b_;
  int v_;
  int eta_;
  double pi_max_;
  double shift_;
};

}  // namespace aircomp
