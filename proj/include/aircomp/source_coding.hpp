#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "aircomp/lattice.hpp"

namespace aircomp {

// Base-q packing of quantizer outputs into Z_p^k messages. The digit base
// q = N*(2^b0 - 1) + 1 makes per-slot digit sums of up to N readings carry-
// free, and tau digits per symbol fit whenever q^tau <= p, so the modulo-p
// sum of up to N packed messages never wraps around.
struct PackingParams {
  int b0 = 0;            // quantizer bits per reading
  int num_summands = 0;  // N, the most messages ever added on the channel
  std::uint64_t q = 0;   // digit base
  std::uint64_t p = 0;   // prime channel alphabet
  int tau = 0;           // readings packed per symbol
  int k = 0;             // symbols per message
  int T = 0;             // readings per block, k * tau
};

// tau is the exact largest integer with q^tau <= p (slightly better than the
// conservative log2(p)/(b0 + log2 N) bound, which it always dominates).
// Throws if p < q, i.e. no packing exists and the caller must raise p.
PackingParams derive_packing(int b0, int num_summands, std::uint64_t p, int k);

// Packs T readings (each in {0, ..., 2^b0 - 1}) into a Z_p^k message;
// component c = sum_t readings[c*tau + t] * q^t.
Message pack(const PackingParams& params,
             std::span<const std::uint64_t> readings);

// Digit-wise decomposition of a modulo-p sum of at most N packed messages.
// On success out holds the T exact per-slot digit sums, each in
// {0, ..., q-1}. Returns false if a digit overflows the base, which means
// the input was not a valid sum (an upstream decoding error).
bool try_unpack_sum(const PackingParams& params, const Message& g,
                    std::vector<std::uint64_t>& out);

// Throwing wrapper around try_unpack_sum.
std::vector<std::uint64_t> unpack_sum(const PackingParams& params,
                                      const Message& g);

// Smallest prime admitting both the packing base and a target message rate
// of n*R_target bits per codeword spread over k symbols:
// p = min prime >= max(q, 2^(n*R_target/k)).
std::uint64_t choose_prime(std::uint64_t q, int n, int k, double target_rate);

}  // namespace aircomp
