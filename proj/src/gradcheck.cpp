#include "brgcl/gradcheck.hpp"

#include <cmath>

namespace brgcl {

GradCheckReport finite_diff_check(const std::function<real_t()>& loss_fn,
                                  const std::vector<Param*>& params, real_t tol) {
  constexpr double h = 1e-5;
  GradCheckReport report;
  report.tol = tol;

  for (Param* p : params) p->zero_grad();
  loss_fn();
  std::vector<Matrix> analytic;
  analytic.reserve(params.size());
  for (Param* p : params) analytic.push_back(p->grad);

  for (std::size_t pi = 0; pi < params.size(); ++pi) {
    Param& p = *params[pi];
    for (std::size_t e = 0; e < p.value.size(); ++e) {
      real_t saved = p.value.data[e];
      p.value.data[e] = saved + static_cast<real_t>(h);
      real_t lp = loss_fn();
      p.value.data[e] = saved - static_cast<real_t>(h);
      real_t lm = loss_fn();
      p.value.data[e] = saved;

      double numeric = (static_cast<double>(lp) - static_cast<double>(lm)) / (2.0 * h);
      double a = static_cast<double>(analytic[pi].data[e]);
      double rel = std::abs(a - numeric) / std::max({1.0, std::abs(a), std::abs(numeric)});
      if (rel > report.max_rel_err) {
        report.max_rel_err = static_cast<real_t>(rel);
        report.worst_param = pi;
        report.worst_entry = e;
      }
    }
  }

  for (Param* p : params) p->zero_grad();
  loss_fn();

  report.passed = report.max_rel_err <= tol;
  return report;
}

}  // namespace brgcl
