#pragma once

#include <memory>
#include <optional>
#include <stdexcept>
#include <variant>
#include <vector>

#include "adaprox/linop.hpp"

namespace adaprox {

class NumericalError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// sign(r)|r|^e with the continuous extension 0 at r = 0.
double signed_pow(double r, double e);
// |r|^e, 0 at r = 0.
double abs_pow(double r, double e);

// psi(y) = 1/p ||y - b||_p^p
struct PNormResidual {
  double p = 2.0;
  Vector b;
};

// psi(y) = 1/m sum_j 1/p max{0, 1 - b_j y_j}^p
struct PowerHinge {
  double p = 1.5;
  Vector labels;
};

// psi(y) = 1/m sum_j ln(1 + exp(-b_j y_j))
struct Logistic {
  Vector labels;
};

// Rows [row_begin, row_end) of the stacked operator form block j.
struct MixtureBlock {
  std::size_t row_begin = 0;
  std::size_t row_end = 0;
  double p = 2.0;
};

// psi(y) = sum_j 1/p_j ||y_j - b_j||_{p_j}^{p_j} over row blocks of one stacked operator.
struct Mixture {
  std::vector<MixtureBlock> blocks;
  Vector b;
};

using Link = std::variant<PNormResidual, PowerHinge, Logistic, Mixture>;

struct LossEval {
  double value = 0.0;
  Vector grad;
  Vector image;  // A x, kept so callers can reuse it
};

// f(x) = psi(A x) + reg_weight/reg_power ||x||_{reg_power}^{reg_power}.
//
// Operator cost of each entry point:
//   image            1 forward
//   value_from_image 0
//   grad_from_image  1 transpose
//   value_grad       1 forward + 1 transpose
class SmoothLoss {
 public:
  SmoothLoss(std::shared_ptr<CountedOperator> op, Link link, double reg_weight = 0.0,
             double reg_power = 2.0);

  const CountedOperator& op() const { return *op_; }
  const std::shared_ptr<CountedOperator>& op_ptr() const { return op_; }
  const Link& link() const { return link_; }
  double reg_weight() const { return reg_weight_; }
  double reg_power() const { return reg_power_; }
  std::size_t dim() const { return op_->cols(); }

  Vector image(const Vector& x) const;
  double value_from_image(const Vector& x, const Vector& ax) const;
  Vector grad_from_image(const Vector& x, const Vector& ax) const;
  LossEval value_grad(const Vector& x) const;

  // Same link, operator with fresh counters over the same kernel.
  SmoothLoss with_fresh_operator() const;

 private:
  std::shared_ptr<CountedOperator> op_;
  Link link_;
  double reg_weight_ = 0.0;
  double reg_power_ = 2.0;
};

LossEval loss_value_grad(const SmoothLoss& f, const Vector& x);

class Regularizer {
 public:
  enum class Kind { zero, l1, ball };

  static Regularizer zero() { return Regularizer(Kind::zero, 0.0); }
  static Regularizer l1(double weight);
  static Regularizer ball(double radius);

  Kind kind() const { return kind_; }
  double weight() const { return param_; }
  double radius() const { return param_; }

  // Ball membership is tested with relative slack 1e-12 so that projected
  // points evaluate to 0 rather than +inf.
  double value(const Vector& x) const;
  Vector prox(double gamma, const Vector& v) const;

 private:
  Regularizer(Kind kind, double param) : kind_(kind), param_(param) {}
  Kind kind_;
  double param_;
};

Vector prox(const Regularizer& g, double gamma, const Vector& v);

struct Certificate {
  Vector x_star;
  double phi_star = 0.0;
};

struct CompositeProblem {
  SmoothLoss f;
  Regularizer g;
  std::optional<Certificate> certificate;

  std::size_t dim() const { return f.dim(); }
  double objective(const Vector& x) const;
  CompositeProblem with_fresh_operator() const;
};

// ||x - prox_g(1, x - grad f(x))||
double kkt_residual(const CompositeProblem& prob, const Vector& x);

// Checks the certificate invariant: kkt residual at x* and consistency of phi*.
bool certificate_holds(const CompositeProblem& prob, double kkt_tol = 1e-10, double rel_tol = 1e-12);

}  // namespace adaprox
