#include "aircomp/lattice.hpp"

#include <atomic>
#include <cmath>
#include <cstring>
#include <limits>
#include <stdexcept>

#include "aircomp/modmath.hpp"
#include "aircomp/rng.hpp"

namespace aircomp {

double round_half_even(double x) {
  double f = std::floor(x);
  double d = x - f;
  if (d > 0.5) return f + 1.0;
  if (d < 0.5) return f;
  return std::fmod(f, 2.0) == 0.0 ? f : f + 1.0;
}

namespace {

// Rank of a k x n matrix over Z_p by Gaussian elimination.
int rank_mod_p(std::vector<std::uint64_t> m, int k, int n, std::uint64_t p) {
  int rank = 0;
  for (int col = 0; col < n && rank < k; ++col) {
    int pivot = -1;
    for (int row = rank; row < k; ++row) {
      if (m[row * n + col] % p != 0) {
        pivot = row;
        break;
      }
    }
    if (pivot < 0) continue;
    for (int j = 0; j < n; ++j) std::swap(m[pivot * n + j], m[rank * n + j]);
    std::uint64_t inv = powmod_u64(m[rank * n + col] % p, p - 2, p);
    for (int j = 0; j < n; ++j) m[rank * n + j] = mulmod_u64(m[rank * n + j] % p, inv, p);
    for (int row = 0; row < k; ++row) {
      if (row == rank) continue;
      std::uint64_t factor = m[row * n + col] % p;
      if (factor == 0) continue;
      for (int j = 0; j < n; ++j) {
        std::uint64_t sub = mulmod_u64(factor, m[rank * n + j], p);
        m[row * n + j] = (m[row * n + j] + p - sub) % p;
      }
    }
    ++rank;
  }
  return rank;
}

void check_dimension(const Vec& y, int n, const char* what) {
  if (static_cast<int>(y.size()) != n)
    throw std::invalid_argument(std::string(what) + ": dimension mismatch");
  for (double v : y) {
    if (!std::isfinite(v))
      throw std::invalid_argument(std::string(what) + ": non-finite input");
  }
}

}  // namespace

ConstructionALattice::ConstructionALattice(int n, std::uint64_t p, int k,
                                           std::vector<std::uint64_t> generator,
                                           double gamma)
    : n_(n), p_(p), k_(k), gen_(std::move(generator)), gamma_(gamma) {
  if (n < 1) throw std::invalid_argument("lattice: n must be >= 1");
  if (k < 1 || k > n) throw std::invalid_argument("lattice: need 1 <= k <= n");
  if (!is_prime_u64(p)) throw std::invalid_argument("lattice: p must be prime");
  if (!(gamma > 0.0)) throw std::invalid_argument("lattice: gamma must be > 0");
  if (gen_.size() != static_cast<std::size_t>(k) * n)
    throw std::invalid_argument("lattice: generator must be k x n");
  for (auto& v : gen_) v %= p;
  if (rank_mod_p(gen_, k_, n_, p_) != k_)
    throw std::invalid_argument("lattice: generator not full rank mod p");
  uncoded_ = (k_ == n_);
  if (uncoded_) {
    for (int i = 0; i < k_ && uncoded_; ++i)
      for (int j = 0; j < n_ && uncoded_; ++j)
        if (gen_[i * n_ + j] != (i == j ? 1u : 0u)) uncoded_ = false;
  }
}

ConstructionALattice ConstructionALattice::systematic(int n, std::uint64_t p,
                                                      int k, double gamma,
                                                      std::uint64_t seed) {
  if (k < 1 || k > n) throw std::invalid_argument("lattice: need 1 <= k <= n");
  Rng rng(derive_seed(seed, {0x6c61747431ULL}));
  std::vector<std::uint64_t> gen(static_cast<std::size_t>(k) * n, 0);
  for (int i = 0; i < k; ++i) gen[i * n + i] = 1;
  for (int i = 0; i < k; ++i)
    for (int j = k; j < n; ++j) gen[i * n + j] = rng.next_below(p);
  return ConstructionALattice(n, p, k, std::move(gen), gamma);
}

ConstructionALattice ConstructionALattice::cubic(int n, std::uint64_t p,
                                                 double gamma) {
  std::vector<std::uint64_t> gen(static_cast<std::size_t>(n) * n, 0);
  for (int i = 0; i < n; ++i) gen[i * n + i] = 1;
  return ConstructionALattice(n, p, n, std::move(gen), gamma);
}

ConstructionALattice ConstructionALattice::with_gamma(double gamma) const {
  return ConstructionALattice(n_, p_, k_, gen_, gamma);
}

std::uint64_t ConstructionALattice::codebook_size() const {
  std::uint64_t size = 1;
  for (int i = 0; i < k_; ++i) {
    if (size > kMaxEnumerableCodebook / p_ + 1)
      throw std::domain_error("lattice: p^k exceeds enumeration guard");
    size *= p_;
  }
  if (size > kMaxEnumerableCodebook)
    throw std::domain_error("lattice: p^k exceeds enumeration guard");
  return size;
}

double ConstructionALattice::log2_codebook_size() const {
  return k_ * std::log2(static_cast<double>(p_));
}

std::vector<std::uint64_t> ConstructionALattice::code_coefficients(
    const Message& w) const {
  if (static_cast<int>(w.size()) != k_)
    throw std::invalid_argument("lattice: message length != k");
  for (auto v : w) {
    if (v >= p_)
      throw std::invalid_argument("lattice: message component out of Z_p");
  }
  std::vector<std::uint64_t> c(n_, 0);
  for (int j = 0; j < n_; ++j) {
    unsigned __int128 acc = 0;
    for (int i = 0; i < k_; ++i)
      acc += static_cast<unsigned __int128>(w[i]) * gen_[i * n_ + j];
    c[j] = static_cast<std::uint64_t>(acc % p_);
  }
  return c;
}

NestedLatticePair::NestedLatticePair(ConstructionALattice lattice, double power)
    : lattice_(std::move(lattice)), power_(power) {
  if (!(power > 0.0)) throw std::invalid_argument("pair: power must be > 0");
}

double NestedLatticePair::sigma2_shaping() const {
  double step = coarse_step();
  return step * step / 12.0;
}

Vec NestedLatticePair::nearest_point_coarse(const Vec& y) const {
  check_dimension(y, n(), "nearest_point_coarse");
  double step = coarse_step();
  Vec out(y.size());
  for (std::size_t j = 0; j < y.size(); ++j)
    out[j] = step * round_half_even(y[j] / step);
  return out;
}

Vec NestedLatticePair::mod_shaping(const Vec& y) const {
  check_dimension(y, n(), "mod_shaping");
  double step = coarse_step();
  Vec out(y.size());
  for (std::size_t j = 0; j < y.size(); ++j)
    out[j] = y[j] - step * round_half_even(y[j] / step);
  return out;
}

Vec NestedLatticePair::encode(const Message& w) const {
  auto c = lattice_.code_coefficients(w);
  double g = gamma();
  double pd = static_cast<double>(p());
  Vec x(c.size());
  for (std::size_t j = 0; j < c.size(); ++j) {
    double cj = static_cast<double>(c[j]);
    x[j] = g * (cj - pd * round_half_even(cj / pd));
  }
  return x;
}

std::shared_ptr<const std::vector<std::uint32_t>> NestedLatticePair::coeff_table()
    const {
  auto existing = std::atomic_load_explicit(&coeff_table_, std::memory_order_acquire);
  if (existing) return existing;

  std::uint64_t size = lattice_.codebook_size();
  int nn = n();
  int kk = k();
  std::vector<std::uint32_t> t(size * nn);
  Message w(kk, 0);
  for (std::uint64_t r = 0;; ++r) {
    auto c = lattice_.code_coefficients(w);
    for (int j = 0; j < nn; ++j) t[r * nn + j] = static_cast<std::uint32_t>(c[j]);
    // odometer: last component fastest => rows in lexicographic order
    int i = kk - 1;
    while (i >= 0 && ++w[i] == p()) w[i--] = 0;
    if (i < 0) break;
  }
  auto built = std::make_shared<const std::vector<std::uint32_t>>(std::move(t));
  std::shared_ptr<const std::vector<std::uint32_t>> expected;
  if (std::atomic_compare_exchange_strong(&coeff_table_, &expected, built))
    return built;
  return expected;
}

Message NestedLatticePair::decode_ml(const Vec& y) const {
  check_dimension(y, n(), "decode_ml");
  const int nn = n();
  const int kk = k();
  const double g = gamma();
  const double pd = static_cast<double>(p());

  if (lattice_.uncoded()) {
    // Fine lattice is gamma*Z^n: quantize coordinate-wise, reduce mod p.
    Message w(nn);
    for (int j = 0; j < nn; ++j) {
      double m = round_half_even(y[j] / g);
      long long mi = static_cast<long long>(m);
      long long r = mi % static_cast<long long>(p());
      if (r < 0) r += static_cast<long long>(p());
      w[j] = static_cast<std::uint64_t>(r);
    }
    return w;
  }

  const std::uint64_t size = lattice_.codebook_size();
  const auto table_ptr = coeff_table();
  const auto& table = *table_ptr;
  std::vector<double> u(nn);
  for (int j = 0; j < nn; ++j) u[j] = y[j] / g;

  double best = std::numeric_limits<double>::infinity();
  std::uint64_t best_row = 0;

  if (kk == 1) {
    // One coset per field element; residue tables would not pay off.
    for (std::uint64_t r = 0; r < size; ++r) {
      const std::uint32_t* c = &table[r * nn];
      double d = 0.0;
      for (int j = 0; j < nn; ++j) {
        double t = u[j] - c[j];
        t -= pd * round_half_even(t / pd);
        d += t * t;
        if (d >= best) break;
      }
      if (d < best) {
        best = d;
        best_row = r;
      }
    }
  } else {
    // Distance from u[j] to residue class a + p*Z, tabulated once per call.
    std::vector<double> residue(static_cast<std::size_t>(nn) * p());
    for (int j = 0; j < nn; ++j) {
      for (std::uint64_t a = 0; a < p(); ++a) {
        double t = u[j] - static_cast<double>(a);
        t -= pd * round_half_even(t / pd);
        residue[j * p() + a] = t * t;
      }
    }
    for (std::uint64_t r = 0; r < size; ++r) {
      const std::uint32_t* c = &table[r * nn];
      double d = 0.0;
      for (int j = 0; j < nn; ++j) {
        d += residue[static_cast<std::size_t>(j) * p() + c[j]];
        if (d >= best) break;
      }
      if (d < best) {
        best = d;
        best_row = r;
      }
    }
  }

  // Row index back to the message (lexicographic order, last digit fastest).
  Message w(kk);
  std::uint64_t rem = best_row;
  for (int i = kk - 1; i >= 0; --i) {
    w[i] = rem % p();
    rem /= p();
  }
  return w;
}

FineQuantization NestedLatticePair::quantize_fine(const Vec& y) const {
  Message w = decode_ml(y);
  auto c = lattice_.code_coefficients(w);
  const double g = gamma();
  const double pd = static_cast<double>(p());
  Vec point(y.size());
  for (std::size_t j = 0; j < y.size(); ++j) {
    double t = y[j] / g - static_cast<double>(c[j]);
    point[j] = g * (static_cast<double>(c[j]) + pd * round_half_even(t / pd));
  }
  return {std::move(w), std::move(point)};
}

double NestedLatticePair::message_rate() const {
  return (static_cast<double>(k()) / n()) * std::log2(static_cast<double>(p()));
}

std::vector<Vec> NestedLatticePair::codebook() const {
  std::uint64_t size = lattice_.codebook_size();
  std::vector<Vec> words;
  words.reserve(size);
  Message w(k(), 0);
  for (std::uint64_t r = 0;; ++r) {
    words.push_back(encode(w));
    int i = k() - 1;
    while (i >= 0 && ++w[i] == p()) w[i--] = 0;
    if (i < 0) break;
  }
  return words;
}

double NestedLatticePair::second_moment_mc(std::size_t num_samples,
                                           std::uint64_t seed) const {
  if (num_samples < 1)
    throw std::invalid_argument("second_moment_mc: need >= 1 sample");
  Rng rng(derive_seed(seed, {0x7365636d6fULL}));
  const double step = coarse_step();
  const int nn = n();
  double acc = 0.0;
  for (std::size_t s = 0; s < num_samples; ++s) {
    double norm2 = 0.0;
    for (int j = 0; j < nn; ++j) {
      double x = rng.next_uniform(0.0, step);
      x -= step * round_half_even(x / step);
      norm2 += x * x;
    }
    acc += norm2 / nn;
  }
  return acc / static_cast<double>(num_samples);
}

double NestedLatticePair::empirical_goodness(double sigma_z2,
                                             std::size_t trials,
                                             std::uint64_t seed) const {
  if (sigma_z2 < 0.0)
    throw std::invalid_argument("empirical_goodness: negative variance");
  if (trials < 1) throw std::invalid_argument("empirical_goodness: no trials");
  Rng rng(derive_seed(seed, {0x676f6f64ULL}));
  const double sigma = std::sqrt(sigma_z2);
  const int nn = n();
  std::size_t escapes = 0;
  Vec z(nn);
  for (std::size_t t = 0; t < trials; ++t) {
    for (int j = 0; j < nn; ++j) z[j] = rng.next_gaussian(sigma);
    FineQuantization q = quantize_fine(z);
    bool at_origin = true;
    for (auto v : q.message) {
      if (v != 0) {
        at_origin = false;
        break;
      }
    }
    if (at_origin) {
      for (double v : q.point) {
        if (v != 0.0) {
          at_origin = false;
          break;
        }
      }
    }
    if (!at_origin) ++escapes;
  }
  return static_cast<double>(escapes) / static_cast<double>(trials);
}

NestedLatticePair scale_to_power(const ConstructionALattice& lattice,
                                 double P) {
  if (!(P > 0.0)) throw std::invalid_argument("scale_to_power: P must be > 0");
  double gamma = std::sqrt(12.0 * P) / static_cast<double>(lattice.p());
  return NestedLatticePair(lattice.with_gamma(gamma), P);
}

}  // namespace aircomp
