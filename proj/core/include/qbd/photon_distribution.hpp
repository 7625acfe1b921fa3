#pragma once

#include <cstddef>
#include <span>
#include <vector>

namespace qbd {

// Diagonal of the cavity density matrix, p(n) for n = 0..n_max.
//
// Always normalized: construction rejects inputs whose total differs from 1 by
// more than kNormTolerance. Round-off negatives down to -kNegativeTolerance are
// clamped to zero; anything more negative is rejected.
class PhotonDistribution {
 public:
  static constexpr double kNormTolerance = 1e-10;
  static constexpr double kNegativeTolerance = 1e-12;

  explicit PhotonDistribution(std::vector<double> probs);

  // Rescales a non-negative weight vector to unit total.
  static PhotonDistribution normalize(std::vector<double> weights);

  static PhotonDistribution fock(std::size_t n, std::size_t n_max);
  // Bose-Einstein distribution with mean nbar, truncated at n_max and renormalized.
  static PhotonDistribution thermal(double nbar, std::size_t n_max);
  static PhotonDistribution poisson(double mean, std::size_t n_max);

  std::size_t n_max() const noexcept { return probs_.size() - 1; }
  std::size_t size() const noexcept { return probs_.size(); }
  double operator[](std::size_t n) const { return probs_[n]; }
  std::span<const double> probs() const noexcept { return probs_; }
  double tail_mass() const noexcept { return probs_.back(); }

  friend bool operator==(const PhotonDistribution&, const PhotonDistribution&) = default;

 private:
  std::vector<double> probs_;
};

double l1_distance(const PhotonDistribution& a, const PhotonDistribution& b);

}  // namespace qbd
