#pragma once

#include <complex>
#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <vector>

#include "adaptctl/linalg.hpp"

namespace adaptctl::kyp {

using Complex = std::complex<double>;
using ComplexVector = Eigen::VectorXcd;

// Ascending rad/s values starting at 0. The criteria quantify over all real
// omega; f(-w) = f(w) for a real system, so w >= 0 suffices.
struct FrequencyGrid {
  std::vector<double> omegas;

  // 0 followed by `points` log-spaced values over [lo, hi].
  static FrequencyGrid log_spaced(double lo = 1e-3, double hi = 1e4, std::size_t points = 4096);
  void validate() const;
};

// Every grid verdict carries how dense the search was.
struct GridReport {
  std::size_t points = 0;
  int refinement_levels = 0;
  std::size_t refined_intervals = 0;
};

// G(s) = N(s)/d(s), H(s) = v^T G(s) = h(s)/d(s), coefficients ascending,
// built by Faddeev-LeVerrier.
class RationalResponse {
 public:
  RationalResponse(const Matrix& a, const Vector& b, const Vector& v);

  struct Sample {
    double re_h = 0.0;
    double abs_h_sq = 0.0;
    double g_norm_sq = 0.0;
    // f(w, kappa, vartheta, v)
    double f(double kappa, double vartheta) const {
      return 2.0 * re_h + kappa * abs_h_sq - vartheta * g_norm_sq;
    }
  };

  struct Table {
    std::vector<double> omega;
    std::vector<double> re_h;
    std::vector<double> abs_h_sq;
    std::vector<double> g_norm_sq;
    std::size_t size() const { return omega.size(); }
    Sample at(std::size_t i) const { return {re_h[i], abs_h_sq[i], g_norm_sq[i]}; }
  };

  Table evaluate(std::span<const double> omega) const;
  Sample at(double omega) const;

  const std::vector<double>& den() const { return den_; }
  const std::vector<double>& h_num() const { return h_num_; }
  // n rows, n columns: row r holds the ascending coefficients of N_r(s).
  const Matrix& num() const { return num_; }

 private:
  std::vector<double> den_;
  std::vector<double> h_num_;
  Matrix num_;
  std::vector<double> num_rowmajor_;
};

// Exact solve of (jw I - A) x = B. Throws NumericalError when singular.
ComplexVector freq_response_G(const Matrix& a, const Vector& b, double omega);

// 2 Re{v^T G} + kappa |v^T G|^2 - vartheta ||G||^2 at one frequency.
double f_eval(double omega, double kappa, double vartheta, const Vector& v, const Matrix& a,
              const Vector& b);

struct SprReport {
  bool spr = false;
  bool poles_stable = false;
  bool re_positive = false;
  double min_re_h = 0.0;
  double omega_min_re_h = 0.0;
  double hf_limit = 0.0;    // lim w^2 Re H = -v^T A B
  double hf_numeric = 0.0;  // w^2 Re H at w = 1e6
  GridReport grid;
};

// Requires (A, B) controllable. Throws HypothesisError when -v^T A B = 0.
SprReport check_spr(const Matrix& a, const Vector& b, const Vector& v, const FrequencyGrid& grid);

struct CriteriaReport {
  bool band_criterion = false;  // f(w, kappa, kappa ||v||^2, v) > 0 on the grid
  double min_f = 0.0;
  double omega_min_f = 0.0;
  double limit = 0.0;  // analytic lim ||G||^-2 f
  std::vector<double> limit_numeric;  // at w = 1e4, 1e5, 1e6
  bool hf_criterion = false;
  GridReport grid;
  bool holds() const { return band_criterion && hf_criterion; }
};

// Throws NumericalError when the analytic high-frequency limit and the
// value at w = 1e6 differ by more than 1 %.
CriteriaReport check_frequency_criteria(const Matrix& a, const Vector& b, const Vector& v, double kappa,
                                    const FrequencyGrid& grid);

// [-2 v^T A B + kappa (v^T B)^2] / ||B||^2 - kappa ||v||^2.
double hf_criterion_limit(const Matrix& a, const Vector& b, const Vector& v, double kappa);

struct SupK {
  double value = 0.0;
  double omega = 0.0;  // argmin, +inf when the high-frequency limit is smallest
  GridReport grid;
};

// inf_w 2 Re H / (||v||^2 ||G||^2 - varrho |H|^2). Throws HypothesisError if
// H is not SPR.
SupK sup_K_bound(const Matrix& a, const Vector& b, const Vector& v, double varrho,
                 const FrequencyGrid& grid);

struct PsiFree {
  bool holds = false;
  std::optional<double> witness;
  double f_at_witness = 0.0;
  GridReport grid;
};

// Exists w with f(w, 0, kappa ||v||^2, v) <= 0.
PsiFree psi_free_criterion(const Matrix& a, const Vector& b, const Vector& v, double kappa,
                           const FrequencyGrid& grid);

struct LmiOptions {
  bool strict = true;          // residual < -1e-8 with psi = 0
  std::optional<double> psi;   // explicit psi, residual <= 0
  std::uint64_t seed = 0;
  std::size_t budget = 100000;  // residual eigenvalue evaluations
  int random_starts = 8;
};

struct LmiResult {
  SymMatrix P;
  SymMatrix Q;
  SymMatrix residual;  // A^T P + P A + (psi + kappa ||v||^2) I - kappa v v^T
  double lambda_max_residual = 0.0;
  std::size_t evaluations = 0;
};

// A^T P + P A + (psi + kappa ||v||^2) I - kappa v v^T.
SymMatrix lmi_residual(const Matrix& a, const SymMatrix& p, const Vector& v, double kappa,
                       double psi = 0.0);

// Searches {P : P B = v} for a point satisfying the LMI. Throws
// InfeasibleError carrying the best lambda_max when the budget runs out.
LmiResult find_P_lmi(const Matrix& a, const Vector& b, const Vector& v, double kappa,
                     const LmiOptions& opts = {});

struct KypVerdict {
  SprReport spr;
  SupK sup_K;
  double kappa = 0.0;
  CriteriaReport criteria;
  PsiFree psi_free;
  std::optional<LmiResult> lmi;
  std::optional<double> lmi_best;  // best lambda_max when the search failed
  bool feasible() const { return lmi.has_value(); }
};

// kappa = kappa_fraction * sup K, then the criteria, the psi-free test and the
// strict LMI search. The LMI is attempted only when the criteria hold.
KypVerdict certify(const Matrix& a, const Vector& b, const Vector& v, double varrho,
                   double kappa_fraction, const FrequencyGrid& grid, std::uint64_t seed = 0);

}  // namespace adaptctl::kyp
