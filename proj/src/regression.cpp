#include "dpsea/regression.hpp"

#include <Eigen/Dense>
#include <cmath>
#include <stdexcept>

namespace dpsea {

std::size_t coefficient_count(ModelKind kind, std::size_t dimension) {
  switch (kind) {
    case ModelKind::Constant: return 1;
    case ModelKind::Linear: return dimension + 1;
    case ModelKind::DiagQuadratic: return 2 * dimension + 1;
  }
  return 1;
}

ModelKind select_kind(std::size_t sample_count, std::size_t dimension, double quadratic_factor) {
  const double d = static_cast<double>(dimension);
  if (static_cast<double>(sample_count) >= quadratic_factor * (d + 1.0)) {
    return ModelKind::DiagQuadratic;
  }
  if (sample_count >= dimension + 2) return ModelKind::Linear;
  return ModelKind::Constant;
}

void standardization(std::span<const Sample> samples, std::vector<double>& center,
                     std::vector<double>& scale) {
  const std::size_t dim = samples.front().x.size();
  const double n = static_cast<double>(samples.size());
  center.assign(dim, 0.0);
  scale.assign(dim, 0.0);
  for (const auto& s : samples) {
    for (std::size_t i = 0; i < dim; ++i) center[i] += s.x[i];
  }
  for (auto& c : center) c /= n;
  for (const auto& s : samples) {
    for (std::size_t i = 0; i < dim; ++i) {
      const double d = s.x[i] - center[i];
      scale[i] += d * d;
    }
  }
  for (std::size_t i = 0; i < dim; ++i) {
    const double spread = std::sqrt(scale[i] / n);
    scale[i] = spread > 1e-12 * std::max(1.0, std::abs(center[i])) ? spread : 1.0;
  }
}

namespace {

void basis_row(ModelKind kind, std::span<const double> z, double* row) {
  const std::size_t dim = z.size();
  row[0] = 1.0;
  if (kind == ModelKind::Constant) return;
  for (std::size_t i = 0; i < dim; ++i) row[1 + i] = z[i];
  if (kind == ModelKind::Linear) return;
  for (std::size_t i = 0; i < dim; ++i) row[1 + dim + i] = z[i] * z[i];
}

}  // namespace

RegressionModel fit(std::span<const Sample> samples, ModelKind kind, double lambda) {
  if (samples.empty()) throw std::invalid_argument("fit: no samples");
  if (!(lambda >= 0.0) || !std::isfinite(lambda)) {
    throw std::invalid_argument("fit: lambda must be finite and nonnegative");
  }
  const std::size_t dim = samples.front().x.size();
  for (const auto& s : samples) {
    if (s.x.size() != dim) throw std::invalid_argument("fit: ragged sample inputs");
    if (!std::isfinite(s.y)) throw std::invalid_argument("fit: non-finite sample value");
    for (double v : s.x) {
      if (!std::isfinite(v)) throw std::invalid_argument("fit: non-finite sample input");
    }
  }

  RegressionModel model;
  model.kind = kind;
  model.lambda = lambda;
  standardization(samples, model.center, model.scale);

  const std::size_t p = coefficient_count(kind, dim);
  const std::size_t n = samples.size();
  if (kind == ModelKind::Constant) {
    double mean = 0.0;
    for (const auto& s : samples) mean += s.y;
    model.coefficients = {mean / static_cast<double>(n)};
    return model;
  }
  Eigen::MatrixXd x(static_cast<Eigen::Index>(n), static_cast<Eigen::Index>(p));
  Eigen::VectorXd y(static_cast<Eigen::Index>(n));
  std::vector<double> z(dim);
  std::vector<double> row(p);
  for (std::size_t r = 0; r < n; ++r) {
    for (std::size_t i = 0; i < dim; ++i) {
      z[i] = (samples[r].x[i] - model.center[i]) / model.scale[i];
    }
    basis_row(kind, z, row.data());
    for (std::size_t c = 0; c < p; ++c) x(static_cast<Eigen::Index>(r), static_cast<Eigen::Index>(c)) = row[c];
    y(static_cast<Eigen::Index>(r)) = samples[r].y;
  }

  Eigen::VectorXd beta;
  bool solved = false;
  if (lambda > 0.0 && n >= p) {
    // Well-posed ridge: factor the regularized normal equations.
    Eigen::MatrixXd gram = Eigen::MatrixXd::Zero(x.cols(), x.cols());
    gram.selfadjointView<Eigen::Lower>().rankUpdate(x.transpose());
    for (Eigen::Index k = 1; k < gram.rows(); ++k) gram(k, k) += lambda;
    Eigen::LDLT<Eigen::MatrixXd> ldlt(gram);
    if (ldlt.info() == Eigen::Success && ldlt.isPositive()) {
      beta = ldlt.solve(x.transpose() * y);
      solved = beta.allFinite();
    }
  }
  if (!solved) {
    // Ridge as ordinary least squares on [X; sqrt(lambda) I_-0] with rhs [y; 0].
    const std::size_t penalized = lambda > 0.0 ? p - 1 : 0;
    Eigen::MatrixXd a = Eigen::MatrixXd::Zero(static_cast<Eigen::Index>(n + penalized),
                                              static_cast<Eigen::Index>(p));
    Eigen::VectorXd b = Eigen::VectorXd::Zero(a.rows());
    a.topRows(x.rows()) = x;
    b.head(y.size()) = y;
    const double root = std::sqrt(lambda);
    for (std::size_t k = 0; k < penalized; ++k) {
      a(static_cast<Eigen::Index>(n + k), static_cast<Eigen::Index>(k + 1)) = root;
    }
    beta = a.colPivHouseholderQr().solve(b);
  }
  model.coefficients.assign(beta.data(), beta.data() + beta.size());
  for (double& c : model.coefficients) {
    if (!std::isfinite(c)) c = 0.0;
  }
  return model;
}

double predict(const RegressionModel& model, std::span<const double> x) {
  const std::size_t dim = model.dimension();
  if (x.size() != dim) throw std::invalid_argument("predict: dimension mismatch");
  const auto& c = model.coefficients;
  double y = c[0];
  if (model.kind == ModelKind::Constant) return y;
  for (std::size_t i = 0; i < dim; ++i) {
    const double z = (x[i] - model.center[i]) / model.scale[i];
    y += c[1 + i] * z;
    if (model.kind == ModelKind::DiagQuadratic) y += c[1 + dim + i] * z * z;
  }
  return y;
}

Predictor::Predictor(const RegressionModel& model)
    : kind_(model.kind), coefficients_(model.coefficients), center_(model.center) {
  inv_scale_.reserve(model.scale.size());
  for (double s : model.scale) inv_scale_.push_back(1.0 / s);
}

double Predictor::operator()(std::span<const double> x) const {
  const std::size_t dim = center_.size();
  if (x.size() != dim) throw std::invalid_argument("predict: dimension mismatch");
  const double* c = coefficients_.data();
  double y = c[0];
  if (kind_ == ModelKind::Constant) return y;
  if (kind_ == ModelKind::Linear) {
    for (std::size_t i = 0; i < dim; ++i) y += c[1 + i] * ((x[i] - center_[i]) * inv_scale_[i]);
    return y;
  }
  // Two partial sums halve the dependency chain.
  double odd = 0.0;
  std::size_t i = 0;
  for (; i + 1 < dim; i += 2) {
    const double z0 = (x[i] - center_[i]) * inv_scale_[i];
    const double z1 = (x[i + 1] - center_[i + 1]) * inv_scale_[i + 1];
    y += z0 * (c[1 + i] + c[1 + dim + i] * z0);
    odd += z1 * (c[2 + i] + c[2 + dim + i] * z1);
  }
  if (i < dim) {
    const double z = (x[i] - center_[i]) * inv_scale_[i];
    y += z * (c[1 + i] + c[1 + dim + i] * z);
  }
  return y + odd;
}

std::vector<double> natural_coefficients(const RegressionModel& model) {
  const std::size_t dim = model.dimension();
  std::vector<double> out = model.coefficients;
  if (model.kind == ModelKind::Constant) return out;
  for (std::size_t i = 0; i < dim; ++i) {
    const double s = model.scale[i];
    const double m = model.center[i];
    const double lin = model.coefficients[1 + i];
    const double quad = model.kind == ModelKind::DiagQuadratic ? model.coefficients[1 + dim + i] : 0.0;
    // lin*(x-m)/s + quad*((x-m)/s)^2
    out[0] += -lin * m / s + quad * m * m / (s * s);
    out[1 + i] = lin / s - 2.0 * quad * m / (s * s);
    if (model.kind == ModelKind::DiagQuadratic) out[1 + dim + i] = quad / (s * s);
  }
  return out;
}

}  // namespace dpsea
