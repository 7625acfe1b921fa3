#include "qbd/photon_distribution.hpp"

#include <cmath>
#include <numeric>
#include <string>

#include "qbd/errors.hpp"

namespace qbd {

namespace {

void clamp_round_off(std::vector<double>& probs) {
  if (probs.empty()) throw ContractError("photon distribution needs at least one level");
  for (std::size_t n = 0; n < probs.size(); ++n) {
    double& p = probs[n];
    if (!std::isfinite(p)) throw ContractError("non-finite probability at n=" + std::to_string(n));
    if (p < 0.0) {
      if (p < -PhotonDistribution::kNegativeTolerance)
        throw ContractError("negative probability " + std::to_string(p) + " at n=" +
                            std::to_string(n));
      p = 0.0;
    }
  }
}

}  // namespace

PhotonDistribution::PhotonDistribution(std::vector<double> probs) : probs_(std::move(probs)) {
  clamp_round_off(probs_);
  const double total = std::accumulate(probs_.begin(), probs_.end(), 0.0);
  if (std::abs(total - 1.0) > kNormTolerance)
    throw ContractError("photon distribution is not normalized (total " + std::to_string(total) +
                        ")");
}

PhotonDistribution PhotonDistribution::normalize(std::vector<double> weights) {
  clamp_round_off(weights);
  const double total = std::accumulate(weights.begin(), weights.end(), 0.0);
  if (!(total > 0.0)) throw ContractError("cannot normalize a distribution with zero total");
  for (double& w : weights) w /= total;
  return PhotonDistribution(std::move(weights));
}

PhotonDistribution PhotonDistribution::fock(std::size_t n, std::size_t n_max) {
  if (n > n_max) throw ContractError("Fock level exceeds truncation");
  std::vector<double> p(n_max + 1, 0.0);
  p[n] = 1.0;
  return PhotonDistribution(std::move(p));
}

PhotonDistribution PhotonDistribution::thermal(double nbar, std::size_t n_max) {
  if (!(nbar >= 0.0) || !std::isfinite(nbar)) throw ContractError("thermal mean must be >= 0");
  std::vector<double> p(n_max + 1);
  const double ratio = nbar / (nbar + 1.0);
  double term = 1.0;
  for (auto& x : p) {
    x = term;
    term *= ratio;
  }
  return normalize(std::move(p));
}

PhotonDistribution PhotonDistribution::poisson(double mean, std::size_t n_max) {
  if (!(mean >= 0.0) || !std::isfinite(mean)) throw ContractError("Poisson mean must be >= 0");
  std::vector<double> p(n_max + 1);
  double term = std::exp(-mean);
  for (std::size_t n = 0; n <= n_max; ++n) {
    p[n] = term;
    term *= mean / static_cast<double>(n + 1);
  }
  return normalize(std::move(p));
}

double l1_distance(const PhotonDistribution& a, const PhotonDistribution& b) {
  if (a.size() != b.size()) throw ContractError("l1_distance: truncation levels differ");
  double d = 0.0;
  for (std::size_t n = 0; n < a.size(); ++n) d += std::abs(a[n] - b[n]);
  return d;
}

}  // namespace qbd
