#pragma once

#include <Eigen/Dense>
#include <cstdint>
#include <functional>
#include <string>
#include <vector>

#include "polylin/linearized.hpp"

namespace polylin {

enum class GridMode : std::uint8_t { Isotropic = 0, Full = 1 };

std::string to_string(GridMode mode);
GridMode parse_mode(const std::string& name);

struct Grid {
  GridMode mode = GridMode::Isotropic;
  std::uint32_t dim_a = 0;  // speeds (isotropic) or velocity nodes per axis (full)
  std::uint32_t dim_b = 0;  // energies
  std::vector<PhasePoint> points;  // isotropic nodes sit on the z axis
  std::vector<double> weights;     // dxi dI volume weights

  std::size_t size() const { return points.size(); }
  // (s, I) or (xi_x, xi_y, xi_z, I)
  std::vector<double> coordinates(std::size_t i) const;
  std::size_t coordinate_dim() const { return mode == GridMode::Isotropic ? 2 : 4; }
  void validate() const;
};

enum class SpeedNodes { Laguerre, Legendre };
// Speeds: Gauss rule for s^2 e^{-m s^2/2} (Laguerre) or Gauss-Legendre on (0, v_max).
// Energies: Gauss-Laguerre nodes for I^a e^{-I}.
Grid isotropic_grid(int n_speed, int n_energy, const GasModel& gas, SpeedNodes nodes = SpeedNodes::Laguerre,
                    double v_max = 8.0);
// Gauss-Hermite velocity nodes per axis, Gauss-Laguerre energies.
Grid full_grid(int n_velocity, int n_energy, const GasModel& gas);

struct NystromOperator {
  Grid grid;
  Eigen::MatrixXd Kmat;  // kernel value times weight of the column node
  Eigen::VectorXd nu;
  std::string meta;
};

struct AssemblyOptions {
  // Fill the lower triangle from the upper one via the exact kernel symmetry.
  bool mirror = false;
};

using KernelFn = std::function<double(const PhasePoint&, const PhasePoint&)>;

NystromOperator assemble(const Grid& grid, const GasModel& gas, const ScatteringModel& model,
                         const QuadratureSpec& quad, AssemblyOptions opt = {});
// Assembly with an arbitrary kernel and frequency (test stubs).
NystromOperator assemble_with(const Grid& grid, const KernelFn& kernel, const std::function<double(const PhasePoint&)>& nu,
                              int n_mu = 8, AssemblyOptions opt = {});

struct SymmetrizedL {
  Eigen::MatrixXd L;
  double correction = 0.0;  // max |A - A^T| / (2 max |A|) before averaging
};

SymmetrizedL symmetrized_L(const NystromOperator& op);
// D^{1/2} K D^{-1/2}, averaged with its transpose.
Eigen::MatrixXd symmetrized_K(const NystromOperator& op);

struct Eigenpairs {
  Eigen::VectorXd values;   // descending
  Eigen::MatrixXd vectors;  // columns
};

Eigenpairs eigendecompose(const Eigen::MatrixXd& mat);

// Null-space basis functions for the grid mode.
std::vector<std::string> kernel_basis_names(GridMode mode);
Eigen::VectorXd kernel_basis(const Grid& grid, const GasModel& gas, std::size_t index);

std::vector<double> nullspace_residuals(const NystromOperator& op, const GasModel& gas);

struct Coercivity {
  double lambda = 0.0;
  int null_dim = 0;
  Eigen::MatrixXd complement;  // orthonormal basis of the null complement (symmetrized coordinates)
};

Coercivity coercivity_estimate(const NystromOperator& op);

struct SvdReport {
  std::vector<double> values;  // descending
  double ratio_quarter = 0.0, ratio_half = 0.0, ratio_full = 0.0;
};

SvdReport svd_decay(const NystromOperator& op);

// sup over a probe grid of int k2 (1 - 1_{h_N}) dxi* dI*, h_N = {|xi - xi*| >= 1/N, |xi| <= N}.
std::vector<double> lgd_truncation_probe(const GasModel& gas, const ScatteringModel& model, const QuadratureSpec& quad,
                                         const std::vector<int>& N_list);

void write_blop(const std::string& path, const NystromOperator& op);
NystromOperator read_blop(const std::string& path);
inline constexpr std::uint32_t kBlopVersion = 1;

}  // namespace polylin
