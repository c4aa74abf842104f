#pragma once

#include <functional>
#include <string>
#include <vector>

#include "brgcl/param.hpp"

namespace brgcl {

struct GradCheckReport {
  real_t max_rel_err = 0;
  std::size_t worst_param = 0;
  std::size_t worst_entry = 0;
  real_t tol = 0;
  bool passed = false;
};

/// Central-difference gradient verification with step h = 1e-5.
///
/// `loss_fn` must be deterministic, return the scalar loss, and overwrite each
/// param's grad with the analytic gradient of that loss. The checker snapshots
/// the analytic gradients from one clean evaluation, then perturbs each entry
/// by +-h and compares (L+ - L-) / 2h against the snapshot using relative
/// error |a - n| / max(1, |a|, |n|). Parameter values are restored afterwards.
GradCheckReport finite_diff_check(const std::function<real_t()>& loss_fn,
                                  const std::vector<Param*>& params, real_t tol);

struct GradSuiteResult {
  std::string name;
  GradCheckReport report;
};

/// The standard randomized gradient suite: GCN encoder, MLP classifier, both
/// contrastive losses, their combination, and row normalization, on small
/// instances (N <= 16, dims <= 8) across `seeds` random seeds at tolerance
/// 1e-4. Shared by the gradcheck CLI subcommand and the acceptance checks.
std::vector<GradSuiteResult> run_gradient_suite(std::size_t seeds, real_t tol = real_t(1e-4));

}  // namespace brgcl
