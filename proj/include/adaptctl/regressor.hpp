#pragma once

#include <cstddef>
#include <functional>
#include <string>
#include <variant>
#include <vector>

#include "adaptctl/linalg.hpp"

namespace adaptctl {

// beta(e) = 1, n_beta = 1.
struct ConstantRegressor {};

// beta(e) = c + M e.  Rows of M typically select +-e_i.
struct AffineRegressor {
  Vector constant;
  Matrix linear;
};

// beta_i(e) = c_i + M_i e + e^T H_i e.
struct QuadraticRegressor {
  Vector constant;
  Matrix linear;
  std::vector<Matrix> quadratic;  // one n x n matrix per row, may be empty
};

// Arbitrary callback. Usable in simulations only: no closed-form bound.
struct CustomRegressor {
  std::size_t n_beta = 0;
  std::function<Vector(const Vector&)> fn;
};

class Regressor {
 public:
  using Family = std::variant<ConstantRegressor, AffineRegressor, QuadraticRegressor, CustomRegressor>;

  Regressor() : family_(ConstantRegressor{}) {}
  explicit Regressor(Family family);

  static Regressor constant() { return Regressor(ConstantRegressor{}); }
  static Regressor affine(Vector c, Matrix m) { return Regressor(AffineRegressor{std::move(c), std::move(m)}); }

  const Family& family() const { return family_; }
  Eigen::Index n_beta() const;
  // State dimension the family was built for, or -1 if it accepts any.
  Eigen::Index n_state() const;
  bool certified() const { return !std::holds_alternative<CustomRegressor>(family_); }
  std::string name() const;

  Vector operator()(const Vector& e) const;

  // Non-decreasing alpha_beta with ||beta(x)|| <= alpha_beta(||x||).
  double growth_bound(double radius) const;

 private:
  Family family_;
};

}  // namespace adaptctl
