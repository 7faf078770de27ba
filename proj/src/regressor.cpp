#include "adaptctl/regressor.hpp"

#include <cmath>

#include "adaptctl/error.hpp"

namespace adaptctl {

namespace {

template <class... Ts>
struct Overloaded : Ts... {
  using Ts::operator()...;
};
template <class... Ts>
Overloaded(Ts...) -> Overloaded<Ts...>;

double spectral_norm(const Matrix& m) {
  if (m.size() == 0) return 0.0;
  return Eigen::JacobiSVD<Matrix>(m).singularValues()(0);
}

}  // namespace

Regressor::Regressor(Family family) : family_(std::move(family)) {
  std::visit(Overloaded{
                 [](const ConstantRegressor&) {},
                 [](const AffineRegressor& f) {
                   if (f.linear.rows() != f.constant.size())
                     throw ValidationError("affine regressor: constant and linear rows differ");
                 },
                 [](const QuadraticRegressor& f) {
                   if (f.linear.rows() != f.constant.size())
                     throw ValidationError("quadratic regressor: constant and linear rows differ");
                   if (!f.quadratic.empty() &&
                       f.quadratic.size() != static_cast<std::size_t>(f.constant.size()))
                     throw ValidationError("quadratic regressor: need one quadratic term per row");
                   for (const Matrix& h : f.quadratic)
                     if (h.rows() != f.linear.cols() || h.cols() != f.linear.cols())
                       throw ValidationError("quadratic regressor: quadratic term has wrong size");
                 },
                 [](const CustomRegressor& f) {
                   if (f.n_beta == 0 || !f.fn)
                     throw ValidationError("custom regressor needs n_beta > 0 and a callback");
                 },
             },
             family_);
}

Eigen::Index Regressor::n_beta() const {
  return std::visit(Overloaded{
                        [](const ConstantRegressor&) -> Eigen::Index { return 1; },
                        [](const AffineRegressor& f) { return f.constant.size(); },
                        [](const QuadraticRegressor& f) { return f.constant.size(); },
                        [](const CustomRegressor& f) { return static_cast<Eigen::Index>(f.n_beta); },
                    },
                    family_);
}

Eigen::Index Regressor::n_state() const {
  return std::visit(Overloaded{
                        [](const ConstantRegressor&) -> Eigen::Index { return -1; },
                        [](const AffineRegressor& f) { return f.linear.cols(); },
                        [](const QuadraticRegressor& f) { return f.linear.cols(); },
                        [](const CustomRegressor&) -> Eigen::Index { return -1; },
                    },
                    family_);
}

std::string Regressor::name() const {
  return std::visit(Overloaded{
                        [](const ConstantRegressor&) { return std::string("constant"); },
                        [](const AffineRegressor&) { return std::string("affine"); },
                        [](const QuadraticRegressor&) { return std::string("quadratic"); },
                        [](const CustomRegressor&) { return std::string("custom"); },
                    },
                    family_);
}

Vector Regressor::operator()(const Vector& e) const {
  return std::visit(Overloaded{
                        [](const ConstantRegressor&) -> Vector { return Vector::Ones(1); },
                        [&](const AffineRegressor& f) -> Vector { return f.constant + f.linear * e; },
                        [&](const QuadraticRegressor& f) -> Vector {
                          Vector out = f.constant + f.linear * e;
                          for (std::size_t i = 0; i < f.quadratic.size(); ++i)
                            out(static_cast<Eigen::Index>(i)) += e.dot(f.quadratic[i] * e);
                          return out;
                        },
                        [&](const CustomRegressor& f) -> Vector {
                          Vector out = f.fn(e);
                          if (out.size() != static_cast<Eigen::Index>(f.n_beta))
                            throw ValidationError("custom regressor returned the wrong size");
                          return out;
                        },
                    },
                    family_);
}

double Regressor::growth_bound(double radius) const {
  return std::visit(
      Overloaded{
          [](const ConstantRegressor&) { return 1.0; },
          [&](const AffineRegressor& f) {
            return f.constant.norm() + spectral_norm(f.linear) * radius;
          },
          [&](const QuadraticRegressor& f) {
            double quad = 0.0;
            for (const Matrix& h : f.quadratic) quad += std::pow(spectral_norm(h), 2);
            return f.constant.norm() + spectral_norm(f.linear) * radius +
                   std::sqrt(quad) * radius * radius;
          },
          [](const CustomRegressor&) -> double {
            throw ValidationError("custom regressor has no closed-form growth bound");
          },
      },
      family_);
}

}  // namespace adaptctl
