#pragma once

#include <cstdint>
#include <utility>
#include <vector>

#include "aircomp/lattice.hpp"
#include "aircomp/rng.hpp"

namespace aircomp {

// Clustered network layout: N nodes organized into possibly overlapping
// clusters, each served by one fusion center.
class ClusterTopology {
 public:
  ClusterTopology(int num_nodes, std::vector<std::vector<int>> clusters);

  static ClusterTopology single(int num_nodes);

  int num_nodes() const { return num_nodes_; }
  int num_clusters() const { return static_cast<int>(clusters_.size()); }
  const std::vector<int>& cluster(int l) const { return clusters_[l]; }
  const std::vector<std::vector<int>>& clusters() const { return clusters_; }
  int cluster_size(int l) const { return static_cast<int>(clusters_[l].size()); }
  int max_cluster_size() const;

  // Nodes heard by more than one fusion center.
  std::vector<int> common_nodes() const;

 private:
  int num_nodes_;
  std::vector<std::vector<int>> clusters_;
};

struct ChannelConfig {
  double power = 1.0;      // P, energy per channel use per node
  double sigma_z2 = 1.0;   // noise variance; 0 selects the noiseless mode
  int block_length = 1;    // n
  std::uint64_t seed = 1;  // master seed for noise streams
  // Per-node gains are fixed at 1.0 in this channel model; the field exists
  // so configs stay forward-compatible, but other values are rejected.
  std::vector<double> gains;
};

void validate(const ChannelConfig& config);

// Exact coordinate-wise sum of equal-length signals.
Vec superpose(const std::vector<Vec>& signals);

// One multiple-access use of the channel: sum of the given node signals plus
// i.i.d. Gaussian noise drawn from the provided stream. With sigma_z2 == 0
// no noise is drawn and the sum is returned exactly.
Vec transmit(const std::vector<Vec>& signals, const ChannelConfig& config,
             Rng& noise_stream);

// Average power check sum(x^2) <= n * P, with a 1e-9 relative slack.
bool check_power(const Vec& x, const ChannelConfig& config);

struct TdmaSchedule {
  // slot l is owned by cluster slot_cluster[l]; one slot per cluster.
  std::vector<int> slot_cluster;
  // Disjoint cluster pairs that a smarter schedule could activate together.
  // Reported only; the naive schedule never merges them.
  std::vector<std::pair<int, int>> merge_opportunities;
};

// Naive time division: cluster l active in slot l, all slots equal length.
TdmaSchedule tdma_schedule(const ClusterTopology& topology);

}  // namespace aircomp
