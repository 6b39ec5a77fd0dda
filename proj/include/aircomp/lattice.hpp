#pragma once

#include <cstdint>
#include <memory>
#include <vector>

namespace aircomp {

using Vec = std::vector<double>;
using Message = std::vector<std::uint64_t>;  // element of Z_p^k

// Largest codebook the exact maximum-likelihood decoder will enumerate.
inline constexpr std::uint64_t kMaxEnumerableCodebook = 1'000'000;

// Rounds to the nearest integer; exact halves go to the even integer.
// This is the tie-break used by every lattice quantizer here, so boundary
// behaviour is deterministic and testable.
double round_half_even(double x);

// Construction-A fine lattice gamma*(C + p*Z^n) over the linear code
// C = { w*G mod p : w in Z_p^k }, nested around the cubic shaping lattice
// gamma*p*Z^n. Immutable after construction; safe to share across threads.
class ConstructionALattice {
 public:
  // generator is k x n row-major over Z_p; must have rank k mod p.
  ConstructionALattice(int n, std::uint64_t p, int k,
                       std::vector<std::uint64_t> generator, double gamma);

  // Systematic [I_k | A] generator, A drawn uniformly over Z_p from the seed.
  // Always full rank thanks to the identity block.
  static ConstructionALattice systematic(int n, std::uint64_t p, int k,
                                         double gamma, std::uint64_t seed);

  // k = n with identity generator: the fine lattice degenerates to
  // gamma*Z^n ("uncoded"). Decoding is closed-form for this shape.
  static ConstructionALattice cubic(int n, std::uint64_t p, double gamma);

  int n() const { return n_; }
  std::uint64_t p() const { return p_; }
  int k() const { return k_; }
  double gamma() const { return gamma_; }
  bool uncoded() const { return uncoded_; }
  std::uint64_t g(int row, int col) const { return gen_[row * n_ + col]; }
  const std::vector<std::uint64_t>& generator() const { return gen_; }

  ConstructionALattice with_gamma(double gamma) const;

  // p^k; throws if it overflows or exceeds the enumeration guard (callers
  // that only need the theoretical size use log_codebook_size).
  std::uint64_t codebook_size() const;
  double log2_codebook_size() const;

  // w*G mod p for w in Z_p^k.
  std::vector<std::uint64_t> code_coefficients(const Message& w) const;

 private:
  int n_;
  std::uint64_t p_;
  int k_;
  std::vector<std::uint64_t> gen_;
  double gamma_;
  bool uncoded_;
};

// Outcome of quantizing onto the fine lattice: the nearest lattice point and
// the message labelling its coset mod the shaping lattice.
struct FineQuantization {
  Message message;
  Vec point;
};

// Nested pair (coding lattice, shaping lattice) with the shaping second
// moment tied to the transmit power constraint.
class NestedLatticePair {
 public:
  NestedLatticePair(ConstructionALattice lattice, double power);

  const ConstructionALattice& lattice() const { return lattice_; }
  int n() const { return lattice_.n(); }
  std::uint64_t p() const { return lattice_.p(); }
  int k() const { return lattice_.k(); }
  double gamma() const { return lattice_.gamma(); }
  double power() const { return power_; }
  // Exact second moment of the cubic shaping lattice, (gamma*p)^2 / 12.
  double sigma2_shaping() const;
  double coarse_step() const { return lattice_.gamma() * lattice_.p(); }

  // Nearest shaping-lattice point, coordinate-wise.
  Vec nearest_point_coarse(const Vec& y) const;

  // y - Q_s(y); coordinates land in [-gamma*p/2, gamma*p/2], the right
  // endpoint reachable only on exact rounding ties (which go to even).
  Vec mod_shaping(const Vec& y) const;

  // Linearity-preserving encoder: mod_shaping(gamma * (w*G mod p)).
  Vec encode(const Message& w) const;

  // Exact ML decoding: nearest fine-lattice point, reduced mod shaping,
  // mapped back through the encoder inverse. Enumerates the p^k cosets
  // with a closed-form inner minimisation, except for uncoded pairs where
  // the whole decode is coordinate-wise rounding. Ties resolve to the
  // lexicographically smallest message.
  Message decode_ml(const Vec& y) const;

  // Nearest fine-lattice point together with its coset message.
  FineQuantization quantize_fine(const Vec& y) const;

  // (k/n) * log2(p) in bits per channel use.
  double message_rate() const;

  // All p^k codewords (guarded by kMaxEnumerableCodebook).
  std::vector<Vec> codebook() const;

  // Monte Carlo estimate of the shaping second moment: uniform samples on
  // the fundamental cube reduced into the Voronoi region.
  double second_moment_mc(std::size_t num_samples, std::uint64_t seed) const;

  // Monte Carlo estimate of P(z escapes the coding-lattice Voronoi cell
  // around 0) for z ~ N(0, sigma_z2 * I_n); the decoding error probability
  // is bounded by this for every transmitted codeword sum.
  double empirical_goodness(double sigma_z2, std::size_t trials,
                            std::uint64_t seed) const;

 private:
  ConstructionALattice lattice_;
  double power_;
  // Lazily built coefficient table (p^k x n) for repeated ML decodes.
  // Installed with an atomic compare-exchange so concurrent decoders never
  // block each other and all observe one table.
  mutable std::shared_ptr<const std::vector<std::uint32_t>> coeff_table_;
  std::shared_ptr<const std::vector<std::uint32_t>> coeff_table() const;
};

// Rescales gamma so the shaping second moment equals P exactly:
// gamma = sqrt(12 P) / p.
NestedLatticePair scale_to_power(const ConstructionALattice& lattice,
                                 double P);

}  // namespace aircomp
