#pragma once

#include <map>
#include <string>
#include <vector>

#include "polylin/config.hpp"
#include "polylin/spectral.hpp"

namespace polylin {

// Every tolerance used by the checks. Upper bounds are multiplied by the
// global scale, lower bounds (gap factors) divided by it.
struct ToleranceEntry {
  const char* name;
  double value;
  bool lower_bound;
};
const std::vector<ToleranceEntry>& tolerance_table();
bool tolerance_known(const std::string& name);

class Tolerances {
 public:
  explicit Tolerances(double scale = 1.0, std::map<std::string, double> overrides = {});
  double operator()(const std::string& name) const;
  double scale() const { return scale_; }

 private:
  double scale_;
  std::map<std::string, double> overrides_;
};

struct Check {
  std::string name;
  double value = 0.0;
  double tolerance = 0.0;
  std::string relation;  // "<=", ">=", "<", ">"
  bool pass = false;
};

Check make_check(std::string name, double value, double tolerance, const std::string& relation);
bool all_pass(const std::vector<Check>& checks);

// Inputs shared by the check groups.
struct VerifyContext {
  RunConfig cfg;
  ScatteringModel model;
  Tolerances tol;
  explicit VerifyContext(const RunConfig& c);
  VerifyContext(const RunConfig& c, const ScatteringModel& m);
};

// (|xi|, I) scan points; factor > 1 extends the ranges at the same spacing.
std::vector<PhasePoint> nu_scan_points(const NuScan& scan, double factor = 1.0);

std::vector<Check> check_kinematics(const VerifyContext& ctx, int samples = 100000);
std::vector<Check> check_models(const VerifyContext& ctx, int samples = 10000);
std::vector<Check> check_orthogonality(const VerifyContext& ctx);
std::vector<Check> check_entropy(const VerifyContext& ctx);
std::vector<Check> check_nu_closed_form(const VerifyContext& ctx);
std::vector<Check> check_nu_routes(const VerifyContext& ctx, const std::vector<double>& alphas);
std::vector<Check> check_nu_envelopes(const VerifyContext& ctx, const std::vector<double>& alphas);
std::vector<Check> check_kernel_symmetry(const VerifyContext& ctx, int pairs = 1000);
std::vector<Check> check_hs_norm(const VerifyContext& ctx);

// Matrix value of <h, L h> for a field sampled on the grid nodes.
double matrix_quadratic_form(const NystromOperator& op, const std::function<double(const PhasePoint&)>& h);
std::vector<Check> check_weak_form(const VerifyContext& ctx, const NystromOperator& op);
std::vector<Check> check_structure(const VerifyContext& ctx, const NystromOperator& op);
std::vector<Check> check_coercivity(const VerifyContext& ctx, const NystromOperator& op, const std::string& tag = "");
std::vector<Check> check_svd_refinement(const VerifyContext& ctx, const NystromOperator& op);
std::vector<Check> check_full_mode(const VerifyContext& ctx);
std::vector<Check> check_truncation(const VerifyContext& ctx);

const std::vector<std::string>& suite_names();
// One suite or "all"; throws std::invalid_argument for an unknown name.
std::vector<Check> run_suite(const std::string& suite, const VerifyContext& ctx);

}  // namespace polylin
