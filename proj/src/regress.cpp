#include "wordorder/regress.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>

#include "wordorder/common.hpp"
#include "wordorder/random.hpp"

namespace wordorder {

namespace {

void check_finite_system(const Eigen::MatrixXd& X, const Eigen::VectorXd& y) {
  if (X.rows() == 0 || X.cols() == 0 || y.size() == 0)
    throw std::invalid_argument("empty regression input");
  if (X.rows() != y.size())
    throw std::invalid_argument("X has " + std::to_string(X.rows()) +
                                " rows but y has " + std::to_string(y.size()) +
                                " entries");
  if (!X.allFinite() || !y.allFinite())
    throw std::invalid_argument("non-finite entries in regression input");
}

Eigen::MatrixXd augment_with_ones(const Eigen::MatrixXd& X) {
  Eigen::MatrixXd A(X.rows(), X.cols() + 1);
  A.leftCols(X.cols()) = X;
  A.col(X.cols()).setOnes();
  return A;
}

double stable_sigmoid(double score) {
  double p;
  if (score >= 0.0) {
    p = 1.0 / (1.0 + std::exp(-score));
  } else {
    const double e = std::exp(score);
    p = e / (1.0 + e);
  }
  // exp underflows past ~|745|; keep the contract that probabilities lie in
  // the open interval.
  constexpr double lo = std::numeric_limits<double>::min();
  constexpr double hi = 1.0 - std::numeric_limits<double>::epsilon() / 2;
  if (p < lo) p = lo;
  if (p > hi) p = hi;
  return p;
}

// log(1 + e^s) without overflow.
double softplus(double score) {
  if (score > 0.0) return score + std::log1p(std::exp(-score));
  return std::log1p(std::exp(score));
}

void check_labels(const Eigen::VectorXd& y01) {
  for (Eigen::Index i = 0; i < y01.size(); ++i)
    if (y01(i) != 0.0 && y01(i) != 1.0)
      throw std::invalid_argument("logistic label at " + std::to_string(i) +
                                  " is " + std::to_string(y01(i)) +
                                  ", expected 0 or 1");
}

Eigen::VectorXd discretize_vector(const Eigen::VectorXd& y) {
  Eigen::VectorXd out(y.size());
  for (Eigen::Index i = 0; i < y.size(); ++i) out(i) = discretize(y(i));
  return out;
}

bool is_constant(const Eigen::VectorXd& v) {
  for (Eigen::Index i = 1; i < v.size(); ++i)
    if (v(i) != v(0)) return false;
  return true;
}

// Column-wise standardization fitted on the training block only.
void standardize_in_place(Eigen::MatrixXd& train, Eigen::MatrixXd& test) {
  for (Eigen::Index j = 0; j < train.cols(); ++j) {
    const double mean = train.col(j).mean();
    const double var =
        (train.col(j).array() - mean).square().sum() /
        static_cast<double>(train.rows());
    const double scale = var > 0.0 ? std::sqrt(var) : 1.0;
    train.col(j) = (train.col(j).array() - mean) / scale;
    test.col(j) = (test.col(j).array() - mean) / scale;
  }
}

}  // namespace

LinearModel train_linear(const Eigen::MatrixXd& X, const Eigen::VectorXd& y,
                         double ridge) {
  check_finite_system(X, y);
  if (ridge < 0.0) throw std::invalid_argument("negative ridge strength");
  const Eigen::MatrixXd A = augment_with_ones(X);
  Eigen::VectorXd w;
  if (ridge > 0.0) {
    Eigen::MatrixXd normal = A.transpose() * A;
    for (Eigen::Index j = 0; j < X.cols(); ++j) normal(j, j) += ridge;
    w = normal.ldlt().solve(A.transpose() * y);
  } else {
    // Complete orthogonal decomposition returns the minimum-norm solution on
    // rank-deficient systems and the unique OLS solution otherwise.
    w = A.completeOrthogonalDecomposition().solve(y);
  }
  LinearModel model;
  model.beta = w.head(X.cols());
  model.intercept = w(X.cols());
  return model;
}

Eigen::VectorXd predict_linear(const LinearModel& model,
                               const Eigen::MatrixXd& X) {
  if (X.cols() != model.beta.size())
    throw std::invalid_argument("input has " + std::to_string(X.cols()) +
                                " columns, model expects " +
                                std::to_string(model.beta.size()));
  return ((X * model.beta).array() + model.intercept).matrix();
}

double logistic_objective(const Eigen::MatrixXd& X, const Eigen::VectorXd& y01,
                          const Eigen::VectorXd& beta, double beta0,
                          double lambda) {
  const Eigen::VectorXd scores = ((X * beta).array() + beta0).matrix();
  double nll = 0.0;
  for (Eigen::Index i = 0; i < scores.size(); ++i)
    nll += softplus(scores(i)) - y01(i) * scores(i);
  return nll + 0.5 * lambda * beta.squaredNorm();
}

std::pair<Eigen::VectorXd, double> logistic_gradient(
    const Eigen::MatrixXd& X, const Eigen::VectorXd& y01,
    const Eigen::VectorXd& beta, double beta0, double lambda) {
  const Eigen::VectorXd scores = ((X * beta).array() + beta0).matrix();
  Eigen::VectorXd residual(scores.size());
  for (Eigen::Index i = 0; i < scores.size(); ++i)
    residual(i) = stable_sigmoid(scores(i)) - y01(i);
  Eigen::VectorXd grad_beta = X.transpose() * residual + lambda * beta;
  return {std::move(grad_beta), residual.sum()};
}

LogisticModel train_logistic(const Eigen::MatrixXd& X,
                             const Eigen::VectorXd& y01,
                             const LogisticOptions& options) {
  check_finite_system(X, y01);
  check_labels(y01);
  if (options.lambda < 0.0)
    throw std::invalid_argument("negative logistic lambda");

  Eigen::VectorXd beta = Eigen::VectorXd::Zero(X.cols());
  double beta0 = 0.0;
  double objective =
      logistic_objective(X, y01, beta, beta0, options.lambda);
  if (options.objective_trace) options.objective_trace->push_back(objective);

  LogisticModel model;
  model.lambda = options.lambda;

  constexpr double armijo = 1e-4;
  constexpr double min_step = 1e-12;
  int iter = 0;
  for (; iter < options.max_iter; ++iter) {
    auto [grad_beta, grad_beta0] =
        logistic_gradient(X, y01, beta, beta0, options.lambda);
    const double grad_norm =
        std::max(grad_beta.size() > 0 ? grad_beta.cwiseAbs().maxCoeff() : 0.0,
                 std::abs(grad_beta0));
    if (grad_norm <= options.tol) {
      model.converged = true;
      break;
    }

    const double grad_sq = grad_beta.squaredNorm() + grad_beta0 * grad_beta0;
    double step = 1.0;
    bool accepted = false;
    while (step >= min_step) {
      const Eigen::VectorXd beta_try = beta - step * grad_beta;
      const double beta0_try = beta0 - step * grad_beta0;
      const double objective_try =
          logistic_objective(X, y01, beta_try, beta0_try, options.lambda);
      if (objective_try <= objective - armijo * step * grad_sq) {
        beta = beta_try;
        beta0 = beta0_try;
        objective = objective_try;
        accepted = true;
        break;
      }
      step *= 0.5;
    }
    if (!accepted) break;  // no descent step at machine precision
    if (options.objective_trace) options.objective_trace->push_back(objective);
  }

  if (!model.converged && iter < options.max_iter) {
    // Exited on a failed line search; report convergence state from the
    // final gradient.
    auto [grad_beta, grad_beta0] =
        logistic_gradient(X, y01, beta, beta0, options.lambda);
    const double grad_norm =
        std::max(grad_beta.size() > 0 ? grad_beta.cwiseAbs().maxCoeff() : 0.0,
                 std::abs(grad_beta0));
    model.converged = grad_norm <= options.tol;
  }
  model.beta = std::move(beta);
  model.beta0 = beta0;
  model.iterations_run = iter;
  return model;
}

Eigen::VectorXd predict_logistic(const LogisticModel& model,
                                 const Eigen::MatrixXd& X) {
  if (X.cols() != model.beta.size())
    throw std::invalid_argument("input has " + std::to_string(X.cols()) +
                                " columns, model expects " +
                                std::to_string(model.beta.size()));
  const Eigen::VectorXd scores = ((X * model.beta).array() + model.beta0).matrix();
  Eigen::VectorXd probabilities(scores.size());
  for (Eigen::Index i = 0; i < scores.size(); ++i)
    probabilities(i) = stable_sigmoid(scores(i));
  return probabilities;
}

double mse(const Eigen::VectorXd& y_true, const Eigen::VectorXd& y_pred) {
  if (y_true.size() == 0) throw std::invalid_argument("mse of empty vectors");
  if (y_true.size() != y_pred.size())
    throw std::invalid_argument("mse length mismatch: " +
                                std::to_string(y_true.size()) + " vs " +
                                std::to_string(y_pred.size()));
  return (y_true - y_pred).squaredNorm() / static_cast<double>(y_true.size());
}

double r2(const Eigen::VectorXd& y_true, const Eigen::VectorXd& y_pred) {
  if (y_true.size() < 2)
    throw std::invalid_argument("r2 needs at least 2 observations");
  if (y_true.size() != y_pred.size())
    throw std::invalid_argument("r2 length mismatch: " +
                                std::to_string(y_true.size()) + " vs " +
                                std::to_string(y_pred.size()));
  const double mean = y_true.mean();
  const double ss_tot = (y_true.array() - mean).square().sum();
  if (ss_tot == 0.0)
    throw std::invalid_argument("r2 undefined for constant y_true");
  const double ss_res = (y_true - y_pred).squaredNorm();
  return 1.0 - ss_res / ss_tot;
}

std::pair<RegressionDataset, RegressionDataset> split(
    const RegressionDataset& dataset, const SplitConfig& config) {
  const auto n = static_cast<std::size_t>(dataset.y.size());
  if (n < 2) throw std::invalid_argument("cannot split fewer than 2 rows");
  if (!(config.train_fraction > 0.0 && config.train_fraction < 1.0))
    throw std::invalid_argument("train_fraction must lie in (0,1)");

  const auto n_train = static_cast<std::size_t>(
      std::lround(config.train_fraction * static_cast<double>(n)));
  if (n_train == 0 || n_train >= n)
    throw std::invalid_argument(
        "split of " + std::to_string(n) + " rows at fraction " +
        std::to_string(config.train_fraction) + " leaves an empty side");

  const std::vector<std::size_t> order = shuffled_indices(n, config.seed);

  auto take = [&](std::size_t begin, std::size_t count) {
    RegressionDataset part;
    part.feature = dataset.feature;
    part.source = dataset.source;
    part.X.resize(static_cast<Eigen::Index>(count), dataset.X.cols());
    part.y.resize(static_cast<Eigen::Index>(count));
    part.languages.reserve(count);
    for (std::size_t k = 0; k < count; ++k) {
      const std::size_t row = order[begin + k];
      part.X.row(static_cast<Eigen::Index>(k)) =
          dataset.X.row(static_cast<Eigen::Index>(row));
      part.y(static_cast<Eigen::Index>(k)) =
          dataset.y(static_cast<Eigen::Index>(row));
      part.languages.push_back(dataset.languages[row]);
    }
    return part;
  };

  return {take(0, n_train), take(n_train, n - n_train)};
}

std::vector<EvalReport> evaluate_feature(const RegressionDataset& dataset,
                                         const EvalOptions& options) {
  auto [train, test] = split(dataset, options.split);
  if (options.standardize) standardize_in_place(train.X, test.X);

  EvalReport base;
  base.feature = dataset.feature;
  base.vector_source = dataset.source;
  base.n_train = static_cast<int>(train.y.size());
  base.n_test = static_cast<int>(test.y.size());
  base.seed = options.split.seed;

  std::vector<EvalReport> reports;

  const LinearModel linear = train_linear(train.X, train.y, options.ridge);
  const Eigen::VectorXd linear_pred = predict_linear(linear, test.X);
  EvalReport linear_report = base;
  linear_report.model_kind = "linear";
  linear_report.mse = mse(test.y, linear_pred);
  linear_report.r2 = r2(test.y, linear_pred);
  reports.push_back(std::move(linear_report));

  const Eigen::VectorXd train_labels = discretize_vector(train.y);
  const bool one_class = is_constant(train_labels);
  const LogisticModel logistic =
      train_logistic(train.X, train_labels, options.logistic);
  const Eigen::VectorXd logistic_pred = predict_logistic(logistic, test.X);
  EvalReport logistic_report = base;
  logistic_report.model_kind = "logistic";
  logistic_report.mse = mse(test.y, logistic_pred);
  if (!one_class) logistic_report.r2 = r2(test.y, logistic_pred);
  reports.push_back(std::move(logistic_report));

  if (options.score_against_discrete) {
    const Eigen::VectorXd test_labels = discretize_vector(test.y);
    EvalReport discrete_report = base;
    discrete_report.model_kind = "logistic-discrete";
    discrete_report.mse = mse(test_labels, logistic_pred);
    if (!one_class && !is_constant(test_labels))
      discrete_report.r2 = r2(test_labels, logistic_pred);
    reports.push_back(std::move(discrete_report));
  }
  return reports;
}

void write_report_tsv(std::ostream& out, const std::vector<EvalReport>& reports,
                      std::uint64_t seed) {
  write_stamp(out, seed);
  out << "feature\tvector_source\tmodel\tmse\tr2\tn_train\tn_test\tseed\n";
  for (const EvalReport& report : reports) {
    out << report.feature << '\t' << report.vector_source << '\t'
        << report.model_kind << '\t' << format_g17(report.mse) << '\t'
        << (report.r2 ? format_g17(*report.r2) : std::string("-")) << '\t'
        << report.n_train << '\t' << report.n_test << '\t' << report.seed
        << '\n';
  }
}

}  // namespace wordorder
