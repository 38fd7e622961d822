#pragma once

#include <span>
#include <vector>

namespace dpsea {

enum class ModelKind { Constant, Linear, DiagQuadratic };

/// Low-order polynomial surrogate fitted in standardized coordinates
/// z_i = (x_i - center_i) / scale_i. Coefficient layout:
///   Constant:      [b0]
///   Linear:        [b0, b_1..b_D]
///   DiagQuadratic: [b0, b_1..b_D, g_1..g_D]   (g_i multiplies z_i^2)
struct RegressionModel {
  ModelKind kind = ModelKind::Constant;
  std::vector<double> coefficients;
  double lambda = 0.0;
  std::vector<double> center;
  std::vector<double> scale;

  std::size_t dimension() const { return center.size(); }
};

struct Sample {
  std::vector<double> x;
  double y = 0.0;
};

std::size_t coefficient_count(ModelKind kind, std::size_t dimension);

/// DiagQuadratic when sample_count >= quadratic_factor * (D + 1), Linear when
/// sample_count >= D + 2, Constant otherwise.
ModelKind select_kind(std::size_t sample_count, std::size_t dimension,
                      double quadratic_factor = 2.0);

/// Per-coordinate mean and root-mean-square spread of the sample inputs.
/// A spread that is zero (up to rounding) is replaced by 1.
void standardization(std::span<const Sample> samples, std::vector<double>& center,
                     std::vector<double>& scale);

/// Ridge least squares; the intercept is not penalized. Throws
/// std::invalid_argument for empty input, ragged x or non-finite values.
RegressionModel fit(std::span<const Sample> samples, ModelKind kind, double lambda);

double predict(const RegressionModel& model, std::span<const double> x);

/// Repeated evaluation of one model with the scale reciprocals cached. Agrees
/// with predict() up to rounding.
class Predictor {
 public:
  explicit Predictor(const RegressionModel& model);
  double operator()(std::span<const double> x) const;

 private:
  ModelKind kind_;
  std::vector<double> coefficients_;
  std::vector<double> center_;
  std::vector<double> inv_scale_;
};

/// Coefficients re-expressed in raw x coordinates, same layout as
/// `coefficients`.
std::vector<double> natural_coefficients(const RegressionModel& model);

}  // namespace dpsea
