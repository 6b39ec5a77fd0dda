#include "aircomp/source_coding.hpp"

#include <cmath>
#include <stdexcept>

#include "aircomp/modmath.hpp"

namespace aircomp {

PackingParams derive_packing(int b0, int num_summands, std::uint64_t p,
                             int k) {
  if (b0 < 1 || b0 > 62) throw std::invalid_argument("packing: need 1 <= b0 <= 62");
  if (num_summands < 1) throw std::invalid_argument("packing: need N >= 1");
  if (k < 1) throw std::invalid_argument("packing: need k >= 1");
  if (!is_prime_u64(p)) throw std::invalid_argument("packing: p must be prime");
  if (p >= (std::uint64_t{1} << 62))
    throw std::invalid_argument("packing: p too large");

  unsigned __int128 q128 =
      static_cast<unsigned __int128>(num_summands) *
          ((static_cast<unsigned __int128>(1) << b0) - 1) +
      1;
  if (q128 > (static_cast<unsigned __int128>(1) << 62))
    throw std::overflow_error("packing: digit base overflows");
  std::uint64_t q = static_cast<std::uint64_t>(q128);
  if (p < q)
    throw std::invalid_argument(
        "packing: p < q, no wraparound-free packing; raise p");

  // Largest tau with q^tau <= p.
  int tau = 0;
  unsigned __int128 power = 1;
  while (power * q <= p) {
    power *= q;
    ++tau;
    if (tau > 62) break;
  }

  PackingParams params;
  params.b0 = b0;
  params.num_summands = num_summands;
  params.q = q;
  params.p = p;
  params.tau = tau;
  params.k = k;
  params.T = k * tau;
  return params;
}

Message pack(const PackingParams& params,
             std::span<const std::uint64_t> readings) {
  if (static_cast<int>(readings.size()) != params.T)
    throw std::invalid_argument("pack: need exactly T readings");
  std::uint64_t max_reading = (std::uint64_t{1} << params.b0) - 1;
  for (auto r : readings) {
    if (r > max_reading) throw std::out_of_range("pack: reading out of range");
  }
  Message message(params.k, 0);
  for (int c = 0; c < params.k; ++c) {
    unsigned __int128 component = 0;
    unsigned __int128 weight = 1;
    for (int t = 0; t < params.tau; ++t) {
      component += weight * readings[c * params.tau + t];
      weight *= params.q;
    }
    // component <= q^tau - 1 <= p - 1 by construction
    message[c] = static_cast<std::uint64_t>(component);
  }
  return message;
}

bool try_unpack_sum(const PackingParams& params, const Message& g,
                    std::vector<std::uint64_t>& out) {
  if (static_cast<int>(g.size()) != params.k)
    throw std::invalid_argument("unpack_sum: message length != k");
  out.assign(params.T, 0);
  for (int c = 0; c < params.k; ++c) {
    if (g[c] >= params.p)
      throw std::invalid_argument("unpack_sum: component not in Z_p");
    std::uint64_t v = g[c];
    for (int t = 0; t < params.tau; ++t) {
      std::uint64_t digit = (t + 1 == params.tau) ? v : v % params.q;
      if (digit >= params.q) return false;  // wraparound upstream
      out[c * params.tau + t] = digit;
      v /= params.q;
    }
  }
  return true;
}

std::vector<std::uint64_t> unpack_sum(const PackingParams& params,
                                      const Message& g) {
  std::vector<std::uint64_t> digits;
  if (!try_unpack_sum(params, g, digits))
    throw std::domain_error("unpack_sum: digit overflows base q (corrupted sum)");
  return digits;
}

std::uint64_t choose_prime(std::uint64_t q, int n, int k, double target_rate) {
  if (k < 1 || n < 1) throw std::invalid_argument("choose_prime: bad n or k");
  double bits = n * target_rate / k;
  std::uint64_t floor_p = q;
  if (bits > 0.0) {
    if (bits > 61.0) throw std::overflow_error("choose_prime: rate too high");
    auto from_rate = static_cast<std::uint64_t>(std::ceil(std::exp2(bits)));
    if (from_rate > floor_p) floor_p = from_rate;
  }
  return next_prime_at_least(floor_p);
}

}  // namespace aircomp
