// Copyright 2026 The reasonsat Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>
#include <vector>

#include <Eigen/Dense>

namespace reasonsat {

struct Coefficient {
  std::string name;
  double estimate = 0.0;
  double std_error = 0.0;
  double z = 0.0;
  double p_value = 1.0;
  /// False when the column was constant or collinear on the sample.
  bool estimable = true;
};

struct RegressionResult {
  std::vector<Coefficient> coefficients;
  std::size_t n = 0;
  bool converged = false;
  /// Coefficients diverging because some column separates the outcomes.
  bool separation = false;
  double log_likelihood = 0.0;
  int iterations = 0;
  std::string warning;

  const Coefficient* find(const std::string& name) const;
};

struct FitOptions {
  double score_tolerance = 1e-8;
  int max_iterations = 100;
  /// |coefficient| above this at the end of the fit is read as separation.
  double divergence_bound = 15.0;
};

class RankDeficiencyError : public std::runtime_error {
 public:
  explicit RankDeficiencyError(std::vector<std::string> columns);
  const std::vector<std::string>& columns() const noexcept { return columns_; }

 private:
  std::vector<std::string> columns_;
};

/// Maximum-likelihood logistic regression by iteratively reweighted least
/// squares. Standard errors come from the inverse information at the optimum;
/// p-values are two-sided Wald tests against the standard normal.
RegressionResult logistic_fit(const Eigen::MatrixXd& design, const Eigen::VectorXd& outcomes,
                              const std::vector<std::string>& names,
                              const FitOptions& options = {});

/// Same fit, but constant non-intercept columns and columns collinear with
/// earlier ones are dropped first and reported as inestimable. Column 0 is
/// taken to be the intercept.
RegressionResult logistic_fit_dropping(const Eigen::MatrixXd& design,
                                       const Eigen::VectorXd& outcomes,
                                       const std::vector<std::string>& names,
                                       const FitOptions& options = {});

double logistic_log_likelihood(const Eigen::MatrixXd& design, const Eigen::VectorXd& outcomes,
                               const Eigen::VectorXd& beta);

/// Two-sided normal tail probability P(|Z| >= |z|).
double two_sided_p(double z);

}  // namespace reasonsat
