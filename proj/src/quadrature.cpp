#include "polylin/quadrature.hpp"

#include <Eigen/Dense>
#include <cmath>
#include <numbers>
#include <stdexcept>
#include <string>

namespace polylin {

void QuadratureSpec::validate() const {
  for (int c : {n_interval, n_semi, sphere_order, n_plane_radial, n_plane_angular, n_chi, n_k2_energy, n_split,
                n_mu, n_velocity, n_pair_velocity, n_pair_energy, n_pair_split,
                pair_sphere_order})
    if (c < 2) throw std::invalid_argument("quadrature counts must be >= 2");
  if (!(v_max > 0) || !(I_max > 0)) throw std::invalid_argument("truncation bounds must be positive");
  if (mc_samples < 2) throw std::invalid_argument("mc_samples must be >= 2");
}

double Rule::apply(const std::function<double(double)>& f) const {
  double s = 0.0;
  for (std::size_t i = 0; i < nodes.size(); ++i) s += weights[i] * f(nodes[i]);
  return s;
}

Rule interval_rule(int n, double a, double b) {
  if (n < 1) throw std::invalid_argument("interval_rule: n must be >= 1");
  if (!(a < b)) throw std::invalid_argument("interval_rule: degenerate interval");
  Rule r;
  r.nodes.resize(n);
  r.weights.resize(n);
  const double mid = 0.5 * (a + b), half = 0.5 * (b - a);
  for (int i = 0; i < (n + 1) / 2; ++i) {
    double x = std::cos(std::numbers::pi * (i + 0.75) / (n + 0.5));
    double dp = 0.0;
    for (int it = 0; it < 100; ++it) {
      double p0 = 1.0, p1 = x;
      for (int k = 2; k <= n; ++k) {
        double p2 = ((2.0 * k - 1.0) * x * p1 - (k - 1.0) * p0) / k;
        p0 = p1;
        p1 = p2;
      }
      if (n == 1) { p1 = x; p0 = 1.0; }
      dp = n * (x * p1 - p0) / (x * x - 1.0);
      double dx = p1 / dp;
      x -= dx;
      if (std::abs(dx) < 1e-16) break;
    }
    {
      double p0 = 1.0, p1 = x;
      for (int k = 2; k <= n; ++k) {
        double p2 = ((2.0 * k - 1.0) * x * p1 - (k - 1.0) * p0) / k;
        p0 = p1;
        p1 = p2;
      }
      dp = n == 1 ? 1.0 : n * (x * p1 - p0) / (x * x - 1.0);
    }
    double w = 2.0 / ((1.0 - x * x) * dp * dp);
    if (n == 1) { x = 0.0; w = 2.0; }
    r.nodes[i] = mid - half * x;
    r.nodes[n - 1 - i] = mid + half * x;
    r.weights[i] = r.weights[n - 1 - i] = half * w;
  }
  return r;
}

namespace {

// Eigenvalues/first components of a symmetric tridiagonal Jacobi matrix.
void golub_welsch(const std::vector<double>& diag, const std::vector<double>& off,
                  std::vector<double>& x, std::vector<double>& v0sq) {
  const int n = static_cast<int>(diag.size());
  Eigen::MatrixXd J = Eigen::MatrixXd::Zero(n, n);
  for (int i = 0; i < n; ++i) J(i, i) = diag[i];
  for (int i = 0; i + 1 < n; ++i) J(i, i + 1) = J(i + 1, i) = off[i];
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(J);
  x.resize(n);
  v0sq.resize(n);
  for (int i = 0; i < n; ++i) {
    x[i] = es.eigenvalues()(i);
    v0sq[i] = es.eigenvectors()(0, i) * es.eigenvectors()(0, i);
  }
}

}  // namespace

Rule semi_infinite_rule(int n, double scale, double exponent) {
  if (n < 1) throw std::invalid_argument("semi_infinite_rule: n must be >= 1");
  if (!(scale > 0)) throw std::invalid_argument("semi_infinite_rule: scale must be positive");
  if (!(exponent > -1)) throw std::invalid_argument("semi_infinite_rule: exponent must exceed -1");
  const double a = exponent;
  std::vector<double> d(n), e(n > 1 ? n - 1 : 0), x, v;
  for (int k = 0; k < n; ++k) d[k] = 2.0 * k + a + 1.0;
  for (int k = 1; k < n; ++k) e[k - 1] = std::sqrt(k * (k + a));
  golub_welsch(d, e, x, v);
  Rule r;
  r.nodes.resize(n);
  r.weights.resize(n);
  const double lw = std::lgamma(n + a + 1.0) - std::lgamma(n + 1.0);
  for (int i = 0; i < n; ++i) {
    double xi = x[i];
    // Newton polish on L_n^(a), weights from its derivative.
    double dl = 0.0;
    for (int it = 0; it < 6; ++it) {
      double l0 = 1.0, l1 = 1.0 + a - xi;
      for (int k = 1; k < n; ++k) {
        double l2 = ((2.0 * k + 1.0 + a - xi) * l1 - (k + a) * l0) / (k + 1.0);
        l0 = l1;
        l1 = l2;
      }
      if (n == 1) l0 = 1.0;
      dl = (n * l1 - (n + a) * l0) / xi;
      double dx = l1 / dl;
      if (!std::isfinite(dx) || std::abs(dx) > 1e-3 * (1.0 + xi)) break;
      xi -= dx;
      if (std::abs(dx) < 1e-15 * xi) break;
    }
    double l0 = 1.0, l1 = 1.0 + a - xi;
    for (int k = 1; k < n; ++k) {
      double l2 = ((2.0 * k + 1.0 + a - xi) * l1 - (k + a) * l0) / (k + 1.0);
      l0 = l1;
      l1 = l2;
    }
    dl = (n * l1 - (n + a) * l0) / xi;
    double w = std::exp(lw) / (xi * dl * dl);
    if (!std::isfinite(w) || !(w > 0)) w = std::tgamma(a + 1.0) * v[i];
    r.nodes[i] = scale * xi;
    r.weights[i] = std::pow(scale, a + 1.0) * w;
  }
  return r;
}

Rule semi_infinite_plain_rule(int n, double scale, double exponent) {
  Rule r = semi_infinite_rule(n, scale, exponent);
  for (std::size_t i = 0; i < r.size(); ++i)
    r.weights[i] *= std::exp(r.nodes[i] / scale) * std::pow(r.nodes[i], -exponent);
  return r;
}

Rule gaussian_plain_rule(int n, double center, double sd) {
  if (n < 1) throw std::invalid_argument("gaussian_plain_rule: n must be >= 1");
  if (!(sd > 0)) throw std::invalid_argument("gaussian_plain_rule: sd must be positive");
  std::vector<double> d(n, 0.0), e(n > 1 ? n - 1 : 0), z, v;
  for (int k = 1; k < n; ++k) e[k - 1] = std::sqrt(static_cast<double>(k));
  golub_welsch(d, e, z, v);
  Rule r;
  r.nodes.resize(n);
  r.weights.resize(n);
  for (int i = 0; i < n; ++i) {
    // symmetrize so the rule is exactly even about the centre
    double zi = 0.5 * (z[i] - z[n - 1 - i]);
    double vi = 0.5 * (v[i] + v[n - 1 - i]);
    r.nodes[i] = center + sd * zi;
    r.weights[i] = vi * sd * std::sqrt(2.0 * std::numbers::pi) * std::exp(0.5 * zi * zi);
  }
  return r;
}

SphereRule sphere_rule(int order) {
  if (order < 1) throw std::invalid_argument("sphere_rule: order must be >= 1");
  const int nt = order / 2 + 1, np = order + 1;
  Rule ct = interval_rule(nt, -1.0, 1.0);
  SphereRule s;
  for (int i = 0; i < nt; ++i) {
    double c = ct.nodes[i], st = std::sqrt(std::max(0.0, 1.0 - c * c));
    for (int j = 0; j < np; ++j) {
      double phi = 2.0 * std::numbers::pi * (j + 0.5) / np;
      s.nodes.push_back({st * std::cos(phi), st * std::sin(phi), c});
      s.weights.push_back(ct.weights[i] * 2.0 * std::numbers::pi / np);
    }
  }
  return s;
}

double pairwise_sum(std::span<const double> v) {
  if (v.size() <= 8) {
    double s = 0.0;
    for (double x : v) s += x;
    return s;
  }
  std::size_t h = v.size() / 2;
  return pairwise_sum(v.subspan(0, h)) + pairwise_sum(v.subspan(h));
}

namespace {
constexpr std::uint64_t splitmix(std::uint64_t z) {
  z += 0x9e3779b97f4a7c15ULL;
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}
}  // namespace

Stream::Stream(std::uint64_t seed, std::uint64_t index)
    : key_(splitmix(splitmix(seed) ^ (index * 0xd1b54a32d192ed03ULL))) {}

std::uint64_t Stream::next_u64() { return splitmix(key_ + 0x632be59bd9b4e019ULL * ++counter_); }

double Stream::uniform() { return (static_cast<double>(next_u64() >> 11) + 0.5) * 0x1.0p-53; }

double Stream::normal() {
  double u1 = uniform(), u2 = uniform();
  return std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * std::numbers::pi * u2);
}

McResult mc_mean(std::int64_t n, std::uint64_t seed, const std::function<double(Stream&)>& fn) {
  if (n < 1) throw std::invalid_argument("mc_mean: need at least one sample");
  constexpr std::int64_t block = 4096;
  const std::int64_t nb = (n + block - 1) / block;
  std::vector<double> s1(nb), s2(nb);
  std::vector<std::string> bad(nb);
#pragma omp parallel for schedule(dynamic)
  for (std::int64_t b = 0; b < nb; ++b) {
    double a1 = 0.0, a2 = 0.0;
    try {
      for (std::int64_t i = b * block; i < std::min(n, (b + 1) * block); ++i) {
        Stream st(seed, static_cast<std::uint64_t>(i));
        double v = fn(st);
        if (!std::isfinite(v)) throw std::runtime_error("mc_mean: non-finite sample value");
        a1 += v;
        a2 += v * v;
      }
    } catch (const std::exception& e) {
      bad[b] = e.what();
    }
    s1[b] = a1;
    s2[b] = a2;
  }
  for (const auto& b : bad)
    if (!b.empty()) throw std::runtime_error(b);
  McResult r;
  r.samples = n;
  const double dn = static_cast<double>(n);
  r.estimate = pairwise_sum(s1) / dn;
  double var = pairwise_sum(s2) / dn - r.estimate * r.estimate;
  if (var < 0 || n < 2) var = 0.0;
  r.stderr_ = std::sqrt(var * dn / (dn - 1.0) / dn);
  // constant integrands: cancellation noise is not variance
  if (var <= 1e-15 * r.estimate * r.estimate) r.stderr_ = 0.0;
  return r;
}

McResult mc_integrate(const std::function<double(std::span<const double>)>& f, Sampler sampler,
                      std::int64_t n, std::uint64_t seed) {
  return mc_mean(n, seed, [&](Stream& st) {
    double x[3];
    int d = 1;
    switch (sampler) {
      case Sampler::StandardNormal1: x[0] = st.normal(); break;
      case Sampler::StandardNormal3: d = 3; for (double& v : x) v = st.normal(); break;
      case Sampler::Uniform1: x[0] = st.uniform(); break;
      case Sampler::Uniform3: d = 3; for (double& v : x) v = st.uniform(); break;
    }
    return f(std::span<const double>(x, d));
  });
}

}  // namespace polylin
