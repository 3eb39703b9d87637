#pragma once

#include <Eigen/Dense>
#include <cstdint>
#include <optional>
#include <ostream>
#include <string>
#include <utility>
#include <vector>

#include "wordorder/vectors.hpp"

namespace wordorder {

struct LinearModel {
  Eigen::VectorXd beta;
  double intercept = 0.0;
};

// Least squares on the column-augmented system [X 1].  With more rows than
// columns and full column rank this is the unique OLS solution; otherwise
// the minimum-norm solution over [beta; intercept] is returned, which keeps
// the fit deterministic when the vectors have more dimensions than there are
// languages.  ridge > 0 adds an L2 penalty on beta (never on the intercept)
// and solves the regularized normal equations instead.
// Throws on empty input or non-finite entries.
LinearModel train_linear(const Eigen::MatrixXd& X, const Eigen::VectorXd& y,
                         double ridge = 0.0);

// X * beta + intercept per row; predictions are not clamped to [0,1].
Eigen::VectorXd predict_linear(const LinearModel& model,
                               const Eigen::MatrixXd& X);

struct LogisticOptions {
  double lambda = 1.0;  // L2 strength on beta; the intercept is unregularized
  int max_iter = 10000;
  double tol = 1e-6;  // stop when the gradient max-norm drops below this
  // When set, receives the regularized NLL at the start point and after
  // every accepted step.
  std::vector<double>* objective_trace = nullptr;
};

struct LogisticModel {
  Eigen::VectorXd beta;
  double beta0 = 0.0;
  double lambda = 0.0;
  int iterations_run = 0;
  bool converged = false;
};

// Regularized negative log-likelihood NLL(beta, beta0) + lambda/2 * |beta|^2
// and its analytic gradient, exposed so the optimum can be verified
// externally.
double logistic_objective(const Eigen::MatrixXd& X, const Eigen::VectorXd& y01,
                          const Eigen::VectorXd& beta, double beta0,
                          double lambda);
std::pair<Eigen::VectorXd, double> logistic_gradient(
    const Eigen::MatrixXd& X, const Eigen::VectorXd& y01,
    const Eigen::VectorXd& beta, double beta0, double lambda);

// Gradient descent with Armijo backtracking from beta = 0, beta0 = 0.  The
// objective never increases across accepted steps.  Labels must be exactly 0
// or 1.  With lambda = 0 on separable data the optimum is at infinity; the
// iteration cap keeps the norm finite and converged stays false.
LogisticModel train_logistic(const Eigen::MatrixXd& X,
                             const Eigen::VectorXd& y01,
                             const LogisticOptions& options = {});

// Element-wise sigmoid of X * beta + beta0, computed without overflow for
// scores up to +-1e3 and nudged into the open interval (0,1) at saturation.
Eigen::VectorXd predict_logistic(const LogisticModel& model,
                                 const Eigen::MatrixXd& X);

double mse(const Eigen::VectorXd& y_true, const Eigen::VectorXd& y_pred);

// 1 - SS_res / SS_tot about the mean of y_true; negative on bad held-out
// fits.  Throws when y_true is constant (SS_tot undefined) or shorter than 2.
double r2(const Eigen::VectorXd& y_true, const Eigen::VectorXd& y_pred);

struct SplitConfig {
  double train_fraction = 0.8;
  std::uint64_t seed = 0;
};

// Seeded shuffle, then split at round(train_fraction * n).  Throws when
// either side would be empty.  The same seed always produces the same
// membership.
std::pair<RegressionDataset, RegressionDataset> split(
    const RegressionDataset& dataset, const SplitConfig& config);

struct EvalReport {
  std::string feature;
  std::string vector_source;
  std::string model_kind;  // "linear", "logistic", "logistic-discrete"
  double mse = 0.0;
  // Absent when undefined: a logistic fit whose discretized training labels
  // were all one class reports no r2.
  std::optional<double> r2;
  int n_train = 0;
  int n_test = 0;
  std::uint64_t seed = 0;
};

struct EvalOptions {
  SplitConfig split;
  LogisticOptions logistic;
  double ridge = 0.0;
  // Standardize X columns to zero mean, unit variance using training-split
  // statistics only.
  bool standardize = false;
  // Additionally score logistic predictions against discretized test labels
  // as a third report.
  bool score_against_discrete = false;
};

// Trains a linear model on the continuous proportions and a logistic model
// on their discretized version, over the same training rows; both are scored
// on the held-out rows against the continuous true proportions (logistic
// predictions are probabilities).  Returns [linear, logistic] plus a
// "logistic-discrete" report when requested.
std::vector<EvalReport> evaluate_feature(const RegressionDataset& dataset,
                                         const EvalOptions& options);

// Report TSV: feature, vector_source, model, mse, r2, n_train, n_test, seed;
// an undefined r2 serializes as '-'.  A stamp comment line comes first.
void write_report_tsv(std::ostream& out, const std::vector<EvalReport>& reports,
                      std::uint64_t seed);

}  // namespace wordorder
