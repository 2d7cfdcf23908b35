#pragma once

#include <cstdint>
#include <functional>
#include <span>
#include <vector>

#include "polylin/vec3.hpp"

namespace polylin {

// Resolution knobs. Counts are per direction.
struct QuadratureSpec {
  int n_interval = 24;       // bounded directions (speeds, inner products)
  int n_semi = 16;           // semi-infinite energy directions
  int sphere_order = 7;
  int n_plane_radial = 6;    // k2 plane, radial
  int n_plane_angular = 6;   // k2 plane, angular
  int n_chi = 6;             // k2 normal coordinate, per side of the kink
  int n_k2_energy = 10;      // k2 internal-energy sum
  int n_split = 8;           // r and R fractions
  int n_mu = 8;              // relative angle in isotropic assembly
  int n_velocity = 6;        // Hermite points per axis in collision integrals
  int n_pair_velocity = 4;   // same, for the pre-collision pair in weak forms
  int n_pair_energy = 4;
  int n_pair_split = 4;
  int pair_sphere_order = 3;
  double v_max = 8.0;
  double I_max = 30.0;
  std::int64_t mc_samples = 1'000'000;
  std::uint64_t mc_seed = 20240607;

  void validate() const;
};

struct Rule {
  std::vector<double> nodes;
  std::vector<double> weights;
  std::size_t size() const { return nodes.size(); }
  double apply(const std::function<double(double)>& f) const;
};

struct SphereRule {
  std::vector<Vec3> nodes;
  std::vector<double> weights;
  std::size_t size() const { return nodes.size(); }
};

// Gauss-Legendre on [a, b].
Rule interval_rule(int n, double a, double b);

// Gauss rule for int_0^inf x^exponent e^{-x/scale} p(x) dx.
Rule semi_infinite_rule(int n, double scale, double exponent = 0.0);

// Same nodes, weights for the plain integral int_0^inf F(x) dx. Accurate when
// F behaves like x^exponent e^{-x/scale} times a smooth factor.
Rule semi_infinite_plain_rule(int n, double scale, double exponent = 0.0);

// Gauss-Hermite nodes for a normal density with given centre and standard
// deviation; weights are for the plain integral over the real line.
Rule gaussian_plain_rule(int n, double center, double sd);

// Gauss in cos(theta) times uniform in phi; exact for harmonics of degree <= order.
SphereRule sphere_rule(int order);

// Fixed-order pairwise summation.
double pairwise_sum(std::span<const double> v);

// Counter-based stream: draw k of sample i is a pure function of (seed, i, k).
class Stream {
 public:
  Stream(std::uint64_t seed, std::uint64_t index);
  double uniform();  // in (0, 1)
  double normal();
  std::uint64_t next_u64();

 private:
  std::uint64_t key_;
  std::uint64_t counter_ = 0;
};

struct McResult {
  double estimate = 0.0;
  double stderr_ = 0.0;
  std::int64_t samples = 0;
};

// Mean of fn(stream_i) over i < n; deterministic for any thread count.
McResult mc_mean(std::int64_t n, std::uint64_t seed, const std::function<double(Stream&)>& fn);

enum class Sampler { StandardNormal1, StandardNormal3, Uniform1, Uniform3 };

// Mean of f(x) with x drawn from the named sampler.
McResult mc_integrate(const std::function<double(std::span<const double>)>& f, Sampler sampler,
                      std::int64_t n, std::uint64_t seed);

}  // namespace polylin
