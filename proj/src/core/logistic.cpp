// Copyright 2026 The reasonsat Authors
// SPDX-License-Identifier: Apache-2.0

#include "reasonsat/logistic.hpp"

#include <algorithm>
#include <cmath>

#include "reasonsat/cnf.hpp"

namespace reasonsat {

const Coefficient* RegressionResult::find(const std::string& name) const {
  for (const auto& c : coefficients) {
    if (c.name == name) return &c;
  }
  return nullptr;
}

namespace {

std::string join(const std::vector<std::string>& items) {
  std::string out;
  for (const auto& s : items) out += (out.empty() ? "" : ", ") + s;
  return out;
}

// log(1 + exp(x)) without overflow.
double softplus(double x) { return x > 0 ? x + std::log1p(std::exp(-x)) : std::log1p(std::exp(x)); }

double sigmoid(double x) {
  if (x >= 0) return 1.0 / (1.0 + std::exp(-x));
  const double e = std::exp(x);
  return e / (1.0 + e);
}

}  // namespace

RankDeficiencyError::RankDeficiencyError(std::vector<std::string> columns)
    : std::runtime_error("design matrix is rank deficient; collinear columns: " + join(columns)),
      columns_(std::move(columns)) {}

double two_sided_p(double z) { return std::erfc(std::abs(z) / std::sqrt(2.0)); }

double logistic_log_likelihood(const Eigen::MatrixXd& design, const Eigen::VectorXd& outcomes,
                               const Eigen::VectorXd& beta) {
  const Eigen::VectorXd eta = design * beta;
  double ll = 0.0;
  for (Eigen::Index i = 0; i < eta.size(); ++i) ll += outcomes[i] * eta[i] - softplus(eta[i]);
  return ll;
}

RegressionResult logistic_fit(const Eigen::MatrixXd& design, const Eigen::VectorXd& outcomes,
                              const std::vector<std::string>& names, const FitOptions& options) {
  const Eigen::Index n = design.rows();
  const Eigen::Index p = design.cols();
  if (outcomes.size() != n) throw ContractViolation("outcome vector length differs from design rows");
  if (static_cast<Eigen::Index>(names.size()) != p) {
    throw ContractViolation("one name per design column is required");
  }
  if (n == 0 || p == 0) throw ContractViolation("logistic fit needs at least one row and column");
  for (Eigen::Index i = 0; i < n; ++i) {
    if (outcomes[i] != 0.0 && outcomes[i] != 1.0) throw ContractViolation("outcomes must be 0 or 1");
  }

  Eigen::ColPivHouseholderQR<Eigen::MatrixXd> qr(design);
  if (qr.rank() < p) {
    std::vector<std::string> collinear;
    const auto& perm = qr.colsPermutation().indices();
    for (Eigen::Index k = qr.rank(); k < p; ++k) collinear.push_back(names[perm[k]]);
    std::sort(collinear.begin(), collinear.end());
    throw RankDeficiencyError(std::move(collinear));
  }

  RegressionResult result;
  result.n = static_cast<std::size_t>(n);
  Eigen::VectorXd beta = Eigen::VectorXd::Zero(p);
  double ll = logistic_log_likelihood(design, outcomes, beta);
  Eigen::MatrixXd information(p, p);

  auto information_at = [&](const Eigen::VectorXd& b, Eigen::VectorXd& score) {
    const Eigen::VectorXd eta = design * b;
    Eigen::VectorXd weights(n);
    Eigen::VectorXd residual(n);
    for (Eigen::Index i = 0; i < n; ++i) {
      const double mu = sigmoid(eta[i]);
      weights[i] = mu * (1.0 - mu);
      residual[i] = outcomes[i] - mu;
    }
    score = design.transpose() * residual;
    return Eigen::MatrixXd(design.transpose() * weights.asDiagonal() * design);
  };

  Eigen::VectorXd score(p);
  for (int iter = 0; iter < options.max_iterations; ++iter) {
    information = information_at(beta, score);
    if (score.cwiseAbs().maxCoeff() < options.score_tolerance) {
      result.converged = true;
      break;
    }
    result.iterations = iter + 1;
    Eigen::VectorXd step = information.ldlt().solve(score);
    if (!step.allFinite()) break;
    // Newton steps on the concave log-likelihood; halve if one overshoots.
    double scale = 1.0;
    Eigen::VectorXd candidate = beta + step;
    double candidate_ll = logistic_log_likelihood(design, outcomes, candidate);
    for (int h = 0; h < 30 && candidate_ll < ll - 1e-12; ++h) {
      scale *= 0.5;
      candidate = beta + scale * step;
      candidate_ll = logistic_log_likelihood(design, outcomes, candidate);
    }
    beta = candidate;
    ll = candidate_ll;
  }
  if (!result.converged) {
    information = information_at(beta, score);
    result.converged = score.cwiseAbs().maxCoeff() < options.score_tolerance;
  }
  result.log_likelihood = ll;

  if (beta.cwiseAbs().maxCoeff() > options.divergence_bound) {
    result.separation = true;
    result.warning = "coefficients diverge: outcomes are (quasi-)separated by the covariates";
  } else if (!result.converged) {
    result.warning = "IRLS did not reach the score tolerance";
  }

  const Eigen::MatrixXd covariance = information.ldlt().solve(Eigen::MatrixXd::Identity(p, p));
  for (Eigen::Index j = 0; j < p; ++j) {
    Coefficient c;
    c.name = names[j];
    c.estimate = beta[j];
    c.std_error = std::sqrt(std::max(covariance(j, j), 0.0));
    c.z = c.std_error > 0 ? c.estimate / c.std_error : 0.0;
    c.p_value = c.std_error > 0 ? two_sided_p(c.z) : 1.0;
    result.coefficients.push_back(std::move(c));
  }
  return result;
}

RegressionResult logistic_fit_dropping(const Eigen::MatrixXd& design,
                                       const Eigen::VectorXd& outcomes,
                                       const std::vector<std::string>& names,
                                       const FitOptions& options) {
  const Eigen::Index p = design.cols();
  std::vector<Eigen::Index> kept;
  for (Eigen::Index j = 0; j < p; ++j) {
    if (j == 0) {
      kept.push_back(j);
      continue;
    }
    const auto col = design.col(j);
    const bool constant = design.rows() == 0 || (col.array() == col[0]).all();
    if (constant) continue;
    // Keep column j only if it adds rank to the columns kept so far.
    Eigen::MatrixXd trial(design.rows(), static_cast<Eigen::Index>(kept.size()) + 1);
    for (std::size_t k = 0; k < kept.size(); ++k) trial.col(static_cast<Eigen::Index>(k)) = design.col(kept[k]);
    trial.col(trial.cols() - 1) = col;
    Eigen::ColPivHouseholderQR<Eigen::MatrixXd> qr(trial);
    if (qr.rank() == trial.cols()) kept.push_back(j);
  }

  Eigen::MatrixXd reduced(design.rows(), static_cast<Eigen::Index>(kept.size()));
  std::vector<std::string> reduced_names;
  for (std::size_t k = 0; k < kept.size(); ++k) {
    reduced.col(static_cast<Eigen::Index>(k)) = design.col(kept[k]);
    reduced_names.push_back(names[kept[k]]);
  }
  RegressionResult fit = logistic_fit(reduced, outcomes, reduced_names, options);

  RegressionResult out = fit;
  out.coefficients.clear();
  std::size_t next = 0;
  for (Eigen::Index j = 0; j < p; ++j) {
    if (next < kept.size() && kept[next] == j) {
      out.coefficients.push_back(fit.coefficients[next++]);
    } else {
      Coefficient c;
      c.name = names[j];
      c.estimable = false;
      c.std_error = std::nan("");
      c.estimate = std::nan("");
      c.z = std::nan("");
      c.p_value = std::nan("");
      out.coefficients.push_back(std::move(c));
    }
  }
  return out;
}

}  // namespace reasonsat
