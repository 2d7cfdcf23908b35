#include "polylin/spectral.hpp"

#include <algorithm>
#include <array>
#include <bit>
#include <cmath>
#include <cstring>
#include <fstream>
#include <map>
#include <numbers>
#include <sstream>
#include <stdexcept>

#include "detail.hpp"

namespace polylin {

std::string to_string(GridMode mode) { return mode == GridMode::Isotropic ? "isotropic" : "full"; }

GridMode parse_mode(const std::string& name) {
  if (name == "isotropic") return GridMode::Isotropic;
  if (name == "full") return GridMode::Full;
  throw std::invalid_argument("unknown grid mode '" + name + "' (isotropic|full)");
}

std::vector<double> Grid::coordinates(std::size_t i) const {
  const PhasePoint& p = points[i];
  if (mode == GridMode::Isotropic) return {p.v.z, p.I};
  return {p.v.x, p.v.y, p.v.z, p.I};
}

void Grid::validate() const {
  if (points.empty() || points.size() != weights.size()) throw std::invalid_argument("grid: empty or inconsistent");
  for (std::size_t i = 0; i < points.size(); ++i) {
    if (!points[i].valid() || !(weights[i] > 0)) throw std::invalid_argument("grid: invalid node or weight");
    for (std::size_t j = 0; j < i; ++j)
      if (points[i].v == points[j].v && points[i].I == points[j].I)
        throw std::invalid_argument("grid: coincident nodes");
  }
}

Grid isotropic_grid(int n_speed, int n_energy, const GasModel& gas, SpeedNodes nodes, double v_max) {
  if (n_speed < 1 || n_energy < 1) throw std::invalid_argument("isotropic grid: empty");
  Rule e = semi_infinite_plain_rule(n_energy, 1.0, gas.a());
  Grid g;
  g.mode = GridMode::Isotropic;
  g.dim_a = n_speed;
  g.dim_b = n_energy;
  std::vector<double> s, ws;
  if (nodes == SpeedNodes::Legendre) {
    if (!(v_max > 0)) throw std::invalid_argument("isotropic grid: v_max must be positive");
    Rule r = interval_rule(n_speed, 0.0, v_max / std::sqrt(gas.m));
    for (std::size_t i = 0; i < r.size(); ++i) {
      s.push_back(r.nodes[i]);
      ws.push_back(r.nodes[i] * r.nodes[i] * r.weights[i]);
    }
  } else {
    // Gauss rule for s^2 e^{-m s^2/2} ds in x = m s^2 / 2
    Rule r = semi_infinite_plain_rule(n_speed, 1.0, 0.5);
    for (std::size_t i = 0; i < r.size(); ++i) {
      s.push_back(std::sqrt(2.0 * r.nodes[i] / gas.m));
      ws.push_back(std::sqrt(2.0) / std::pow(gas.m, 1.5) * std::sqrt(r.nodes[i]) * r.weights[i]);
    }
  }
  for (std::size_t i = 0; i < s.size(); ++i)
    for (std::size_t j = 0; j < e.size(); ++j) {
      g.points.push_back({{0, 0, s[i]}, e.nodes[j]});
      g.weights.push_back(4.0 * std::numbers::pi * ws[i] * e.weights[j]);
    }
  return g;
}

Grid full_grid(int n_velocity, int n_energy, const GasModel& gas) {
  if (n_velocity < 1 || n_energy < 1) throw std::invalid_argument("full grid: empty");
  Rule v = gaussian_plain_rule(n_velocity, 0.0, 1.0 / std::sqrt(gas.m));
  Rule e = semi_infinite_plain_rule(n_energy, 1.0, gas.a());
  Grid g;
  g.mode = GridMode::Full;
  g.dim_a = n_velocity;
  g.dim_b = n_energy;
  for (std::size_t a = 0; a < v.size(); ++a)
    for (std::size_t b = 0; b < v.size(); ++b)
      for (std::size_t c = 0; c < v.size(); ++c)
        for (std::size_t j = 0; j < e.size(); ++j) {
          g.points.push_back({{v.nodes[a], v.nodes[b], v.nodes[c]}, e.nodes[j]});
          g.weights.push_back(v.weights[a] * v.weights[b] * v.weights[c] * e.weights[j]);
        }
  return g;
}

namespace {

std::string meta_string(const GasModel& gas, const ScatteringModel& model, const QuadratureSpec& q) {
  std::ostringstream os;
  os.precision(17);
  os << "m=" << gas.m << " delta=" << gas.delta << " model=" << to_string(model.variant())
     << " prefactor=" << model.prefactor() << " alpha=" << model.alpha() << " n_mu=" << q.n_mu
     << " n_split=" << q.n_split << " plane=" << q.n_plane_radial << "x" << q.n_plane_angular
     << " n_chi=" << q.n_chi << " n_k2_energy=" << q.n_k2_energy;
  return os.str();
}

// Index of a node on its 1-d axis (full grids are products).
struct FullIndex {
  std::array<int, 3> v;
  int e;
};

FullIndex full_index(const Grid& g, std::size_t i) {
  const int nb = g.dim_b, na = g.dim_a;
  int e = static_cast<int>(i % nb), rest = static_cast<int>(i / nb);
  int c = rest % na;
  rest /= na;
  int b = rest % na, a = rest / na;
  return {{a, b, c}, e};
}

// Canonical label of the pair (i, j) under axis permutations and reflections,
// which map the product grid onto itself and leave the kernel unchanged.
std::array<int, 8> full_key(const Grid& g, std::size_t i, std::size_t j, bool mirror) {
  FullIndex p = full_index(g, i), q = full_index(g, j);
  const int n = g.dim_a;
  std::array<std::pair<int, int>, 3> ax;
  for (int k = 0; k < 3; ++k) {
    std::pair<int, int> u{p.v[k], q.v[k]}, w{n - 1 - p.v[k], n - 1 - q.v[k]};
    ax[k] = std::min(u, w);
  }
  std::sort(ax.begin(), ax.end());
  std::array<int, 8> key{ax[0].first, ax[0].second, ax[1].first, ax[1].second, ax[2].first, ax[2].second, p.e, q.e};
  if (mirror) {
    // swapping the arguments: (p,q) -> (q,p) on every axis
    std::array<std::pair<int, int>, 3> bx;
    for (int k = 0; k < 3; ++k) {
      std::pair<int, int> u{q.v[k], p.v[k]}, w{n - 1 - q.v[k], n - 1 - p.v[k]};
      bx[k] = std::min(u, w);
    }
    std::sort(bx.begin(), bx.end());
    std::array<int, 8> alt{bx[0].first, bx[0].second, bx[1].first, bx[1].second, bx[2].first, bx[2].second, q.e, p.e};
    key = std::min(key, alt);
  }
  return key;
}

}  // namespace

NystromOperator assemble_with(const Grid& grid, const KernelFn& kernel, const std::function<double(const PhasePoint&)>& nu,
                              int n_mu, AssemblyOptions opt) {
  grid.validate();
  const int n = static_cast<int>(grid.size());
  NystromOperator op;
  op.grid = grid;
  op.Kmat = Eigen::MatrixXd::Zero(n, n);
  op.nu = Eigen::VectorXd::Zero(n);
  std::vector<std::string> err(n);

#pragma omp parallel for schedule(dynamic)
  for (int i = 0; i < n; ++i) {
    try {
      op.nu(i) = nu(grid.points[i]);
    } catch (const std::exception& e) {
      err[i] = e.what();
    }
  }

  if (grid.mode == GridMode::Isotropic) {
    // mu = 1 - 2 t^2 resolves the cusp of k at coincident velocities
    Rule t = interval_rule(n_mu, 0.0, 1.0), mu;
    for (std::size_t k = 0; k < t.size(); ++k) {
      mu.nodes.push_back(1.0 - 2.0 * t.nodes[k] * t.nodes[k]);
      mu.weights.push_back(4.0 * t.nodes[k] * t.weights[k]);
    }
    // work list of (i, j)
    std::vector<std::pair<int, int>> work;
    for (int i = 0; i < n; ++i)
      for (int j = opt.mirror ? i : 0; j < n; ++j) work.emplace_back(i, j);
    std::vector<double> kbar(work.size());
#pragma omp parallel for schedule(dynamic)
    for (std::size_t w = 0; w < work.size(); ++w) {
      const auto [i, j] = work[w];
      try {
        const PhasePoint& x = grid.points[i];
        const double sy = grid.points[j].v.z;
        double acc = 0.0;
        for (std::size_t k = 0; k < mu.size(); ++k) {
          const double c = mu.nodes[k], st = std::sqrt(1.0 - c * c);
          acc += mu.weights[k] * kernel(x, {{sy * st, 0.0, sy * c}, grid.points[j].I});
        }
        kbar[w] = 0.5 * acc;
      } catch (const std::exception& e) {
        err[i] = e.what();
      }
    }
    for (std::size_t w = 0; w < work.size(); ++w) {
      const auto [i, j] = work[w];
      op.Kmat(i, j) = kbar[w] * grid.weights[j];
      if (opt.mirror) op.Kmat(j, i) = kbar[w] * grid.weights[i];
    }
  } else {
    std::map<std::array<int, 8>, std::size_t> index;
    std::vector<std::pair<int, int>> reps;
    std::vector<std::size_t> slot(static_cast<std::size_t>(n) * n);
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j) {
        auto key = full_key(grid, i, j, opt.mirror);
        auto [it, fresh] = index.emplace(key, reps.size());
        if (fresh) reps.emplace_back(i, j);
        slot[static_cast<std::size_t>(i) * n + j] = it->second;
      }
    std::vector<double> vals(reps.size());
#pragma omp parallel for schedule(dynamic)
    for (std::size_t r = 0; r < reps.size(); ++r) {
      try {
        vals[r] = kernel(grid.points[reps[r].first], grid.points[reps[r].second]);
      } catch (const std::exception& e) {
        err[reps[r].first] = e.what();
      }
    }
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j) op.Kmat(i, j) = vals[slot[static_cast<std::size_t>(i) * n + j]] * grid.weights[j];
  }
  for (const auto& e : err)
    if (!e.empty()) throw std::runtime_error("assembly: " + e);
  return op;
}

NystromOperator assemble(const Grid& grid, const GasModel& gas, const ScatteringModel& model,
                         const QuadratureSpec& quad, AssemblyOptions opt) {
  if (!model.angle_independent() && grid.mode == GridMode::Isotropic)
    throw std::invalid_argument("isotropic assembly needs an angle-independent model");
  KernelContext ctx(gas, model, quad);
  NystromOperator op = assemble_with(
      grid, [&](const PhasePoint& x, const PhasePoint& y) { return ctx.k2(x, y) - ctx.k1(x, y); },
      [&](const PhasePoint& p) { return ctx.nu(p); }, quad.n_mu, opt);
  op.meta = meta_string(gas, model, quad);
  return op;
}

namespace {
Eigen::VectorXd sqrt_weights(const Grid& g) {
  Eigen::VectorXd d(g.size());
  for (std::size_t i = 0; i < g.size(); ++i) d(i) = std::sqrt(g.weights[i]);
  return d;
}

Eigen::MatrixXd similarity_K(const NystromOperator& op, double* correction) {
  const Eigen::VectorXd d = sqrt_weights(op.grid);
  Eigen::MatrixXd A = d.asDiagonal() * op.Kmat * d.cwiseInverse().asDiagonal();
  const double amax = A.cwiseAbs().maxCoeff();
  const double asym = (A - A.transpose()).cwiseAbs().maxCoeff();
  if (correction) *correction = amax > 0 ? 0.5 * asym / amax : 0.0;
  return 0.5 * (A + A.transpose());
}
}  // namespace

Eigen::MatrixXd symmetrized_K(const NystromOperator& op) { return similarity_K(op, nullptr); }

SymmetrizedL symmetrized_L(const NystromOperator& op) {
  SymmetrizedL out;
  Eigen::MatrixXd A = similarity_K(op, &out.correction);
  if (out.correction > 1e-6)
    throw std::runtime_error("symmetrized_L: kernel asymmetry " + std::to_string(out.correction) + " exceeds 1e-6");
  out.L = -A;
  out.L.diagonal() += op.nu;
  return out;
}

Eigenpairs eigendecompose(const Eigen::MatrixXd& mat) {
  if (mat.rows() != mat.cols()) throw std::invalid_argument("eigendecompose: matrix not square");
  const double scale = std::max(1.0, mat.cwiseAbs().maxCoeff());
  if ((mat - mat.transpose()).cwiseAbs().maxCoeff() > 1e-12 * scale)
    throw std::invalid_argument("eigendecompose: matrix not symmetric");
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(mat);
  if (es.info() != Eigen::Success) throw std::runtime_error("eigendecompose: solver failed");
  Eigenpairs ep;
  ep.values = es.eigenvalues().reverse();
  ep.vectors = es.eigenvectors().rowwise().reverse();
  return ep;
}

std::vector<std::string> kernel_basis_names(GridMode mode) {
  if (mode == GridMode::Isotropic) return {"sqrtM", "energy_sqrtM"};
  return {"sqrtM", "xi_x_sqrtM", "xi_y_sqrtM", "xi_z_sqrtM", "energy_sqrtM"};
}

Eigen::VectorXd kernel_basis(const Grid& grid, const GasModel& gas, std::size_t index) {
  Eigen::VectorXd v(grid.size());
  const bool iso = grid.mode == GridMode::Isotropic;
  for (std::size_t i = 0; i < grid.size(); ++i) {
    const PhasePoint& p = grid.points[i];
    const double sm = sqrt_maxwellian(gas, p);
    double f = 1.0;
    if (iso) {
      f = index == 0 ? 1.0 : invariant(InvariantIndex::Energy, p, gas);
    } else {
      f = invariant(kInvariants[index], p, gas);
    }
    v(i) = f * sm;
  }
  return v;
}

std::vector<double> nullspace_residuals(const NystromOperator& op, const GasModel& gas) {
  const SymmetrizedL sl = symmetrized_L(op);
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(sl.L, Eigen::EigenvaluesOnly);
  const double lnorm = es.eigenvalues().cwiseAbs().maxCoeff();
  const Eigen::VectorXd d = sqrt_weights(op.grid);
  std::vector<double> out;
  for (std::size_t k = 0; k < kernel_basis_names(op.grid.mode).size(); ++k) {
    Eigen::VectorXd psi = d.cwiseProduct(kernel_basis(op.grid, gas, k));
    out.push_back((sl.L * psi).norm() / (lnorm * psi.norm()));
  }
  return out;
}

Coercivity coercivity_estimate(const NystromOperator& op) {
  const SymmetrizedL sl = symmetrized_L(op);
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(sl.L);
  const int n = static_cast<int>(sl.L.rows());
  Coercivity c;
  c.null_dim = op.grid.mode == GridMode::Isotropic ? 2 : 5;
  if (n <= c.null_dim) throw std::invalid_argument("coercivity_estimate: grid too small");
  c.complement = es.eigenvectors().rightCols(n - c.null_dim);
  Eigen::MatrixXd A = c.complement.transpose() * sl.L * c.complement;
  Eigen::MatrixXd N = c.complement.transpose() * op.nu.asDiagonal() * c.complement;
  A = 0.5 * (A + A.transpose());
  N = 0.5 * (N + N.transpose());
  Eigen::GeneralizedSelfAdjointEigenSolver<Eigen::MatrixXd> gs(A, N, Eigen::EigenvaluesOnly);
  c.lambda = gs.eigenvalues().minCoeff();
  return c;
}

SvdReport svd_decay(const NystromOperator& op) {
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(symmetrized_K(op), Eigen::EigenvaluesOnly);
  SvdReport r;
  for (int i = 0; i < es.eigenvalues().size(); ++i) r.values.push_back(std::abs(es.eigenvalues()(i)));
  std::sort(r.values.begin(), r.values.end(), std::greater<>());
  const std::size_t n = r.values.size();
  const double s1 = r.values.front();
  if (s1 > 0) {
    r.ratio_quarter = r.values[std::max<std::size_t>(n / 4, 1) - 1] / s1;
    r.ratio_half = r.values[std::max<std::size_t>(n / 2, 1) - 1] / s1;
    r.ratio_full = r.values[n - 1] / s1;
  }
  return r;
}

std::vector<double> lgd_truncation_probe(const GasModel& gas, const ScatteringModel& model, const QuadratureSpec& quad,
                                         const std::vector<int>& N_list) {
  for (std::size_t i = 0; i < N_list.size(); ++i)
    if (N_list[i] < 1 || (i > 0 && N_list[i] <= N_list[i - 1]))
      throw std::invalid_argument("truncation probe: N list must be positive and increasing");
  KernelContext ctx(gas, model, quad);
  const SphereRule dirs = sphere_rule(quad.sphere_order);
  const Rule energy = semi_infinite_plain_rule(quad.n_semi / 2 + 1, 2.0, 0.5 * gas.a());
  const std::vector<double> speeds{0.5, 2.5, 5.0}, energies{0.5, 2.0};

  // int_{|g| < radius} k2(x, x - g) dg dI*
  auto ball = [&](const PhasePoint& x, double radius, int n_radial) {
    Rule rr = interval_rule(n_radial, 0.0, radius);
    double acc = 0.0;
    for (std::size_t i = 0; i < rr.size(); ++i)
      for (std::size_t d = 0; d < dirs.size(); ++d)
        for (std::size_t e = 0; e < energy.size(); ++e) {
          const PhasePoint y{x.v - rr.nodes[i] * dirs.nodes[d], energy.nodes[e]};
          acc += rr.weights[i] * rr.nodes[i] * rr.nodes[i] * dirs.weights[d] * energy.weights[e] * ctx.k2(x, y);
        }
    return acc;
  };

  std::vector<double> out;
  for (int N : N_list) {
    std::vector<double> vals(speeds.size() * energies.size());
#pragma omp parallel for schedule(dynamic)
    for (int k = 0; k < static_cast<int>(vals.size()); ++k) {
      const PhasePoint x{{0, 0, speeds[k / energies.size()]}, energies[k % energies.size()]};
      const double s = x.v.z;
      vals[k] = s > N ? ball(x, s + quad.v_max / std::sqrt(gas.m), 2 * quad.n_interval / 3)
                      : ball(x, 1.0 / N, quad.n_plane_radial);
    }
    out.push_back(*std::max_element(vals.begin(), vals.end()));
  }
  return out;
}

namespace {

template <class T>
void put(std::ostream& os, T v) {
  static_assert(std::is_arithmetic_v<T>);
  unsigned char b[sizeof(T)];
  std::memcpy(b, &v, sizeof(T));
  if constexpr (std::endian::native == std::endian::big) std::reverse(b, b + sizeof(T));
  os.write(reinterpret_cast<const char*>(b), sizeof(T));
}

template <class T>
T get(std::istream& is) {
  unsigned char b[sizeof(T)];
  if (!is.read(reinterpret_cast<char*>(b), sizeof(T))) throw std::runtime_error("BLOP: truncated file");
  if constexpr (std::endian::native == std::endian::big) std::reverse(b, b + sizeof(T));
  T v;
  std::memcpy(&v, b, sizeof(T));
  return v;
}

}  // namespace

// Layout: "BLOP", u32 version, u8 mode, u32 dim_a, u32 dim_b, u32 n, u32 coordinate
// dimension, coordinates (n x cdim), weights (n), nu (n), Kmat row-major (n x n).
void write_blop(const std::string& path, const NystromOperator& op) {
  std::ofstream os(path, std::ios::binary | std::ios::trunc);
  if (!os) throw std::runtime_error("cannot open '" + path + "' for writing");
  const auto n = static_cast<std::uint32_t>(op.grid.size());
  os.write("BLOP", 4);
  put<std::uint32_t>(os, kBlopVersion);
  put<std::uint8_t>(os, static_cast<std::uint8_t>(op.grid.mode));
  put<std::uint32_t>(os, op.grid.dim_a);
  put<std::uint32_t>(os, op.grid.dim_b);
  put<std::uint32_t>(os, n);
  put<std::uint32_t>(os, static_cast<std::uint32_t>(op.grid.coordinate_dim()));
  for (std::uint32_t i = 0; i < n; ++i)
    for (double c : op.grid.coordinates(i)) put<double>(os, c);
  for (double w : op.grid.weights) put<double>(os, w);
  for (std::uint32_t i = 0; i < n; ++i) put<double>(os, op.nu(i));
  for (std::uint32_t i = 0; i < n; ++i)
    for (std::uint32_t j = 0; j < n; ++j) put<double>(os, op.Kmat(i, j));
  if (!os) throw std::runtime_error("write to '" + path + "' failed");
}

NystromOperator read_blop(const std::string& path) {
  std::ifstream is(path, std::ios::binary);
  if (!is) throw std::runtime_error("cannot open '" + path + "'");
  char magic[4];
  if (!is.read(magic, 4) || std::memcmp(magic, "BLOP", 4) != 0) throw std::runtime_error("BLOP: bad magic");
  if (get<std::uint32_t>(is) != kBlopVersion) throw std::runtime_error("BLOP: unsupported version");
  NystromOperator op;
  const auto mode = get<std::uint8_t>(is);
  if (mode > 1) throw std::runtime_error("BLOP: bad mode byte");
  op.grid.mode = static_cast<GridMode>(mode);
  op.grid.dim_a = get<std::uint32_t>(is);
  op.grid.dim_b = get<std::uint32_t>(is);
  const auto n = get<std::uint32_t>(is);
  const auto cdim = get<std::uint32_t>(is);
  if (cdim != op.grid.coordinate_dim()) throw std::runtime_error("BLOP: coordinate dimension mismatch");
  for (std::uint32_t i = 0; i < n; ++i) {
    double c[4];
    for (std::uint32_t k = 0; k < cdim; ++k) c[k] = get<double>(is);
    op.grid.points.push_back(cdim == 2 ? PhasePoint{{0, 0, c[0]}, c[1]} : PhasePoint{{c[0], c[1], c[2]}, c[3]});
  }
  for (std::uint32_t i = 0; i < n; ++i) op.grid.weights.push_back(get<double>(is));
  op.nu.resize(n);
  for (std::uint32_t i = 0; i < n; ++i) op.nu(i) = get<double>(is);
  op.Kmat.resize(n, n);
  for (std::uint32_t i = 0; i < n; ++i)
    for (std::uint32_t j = 0; j < n; ++j) op.Kmat(i, j) = get<double>(is);
  return op;
}

}  // namespace polylin
