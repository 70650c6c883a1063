#include "adaprox/objectives.hpp"

#include <cmath>
#include <limits>
#include <string>

namespace adaprox {

namespace {

void check_power(double p, const char* what) {
  if (!(p > 1.0 && p <= 2.0)) throw std::invalid_argument(std::string(what) + " must lie in (1, 2]");
}

void check_labels(const Vector& labels) {
  for (Eigen::Index j = 0; j < labels.size(); ++j)
    if (labels[j] != 1.0 && labels[j] != -1.0)
      throw std::invalid_argument("labels must be exactly -1 or +1");
}

// ln(1 + e^z) without overflow
double softplus(double z) { return z > 0.0 ? z + std::log1p(std::exp(-z)) : std::log1p(std::exp(z)); }

double sigmoid(double z) {
  if (z >= 0.0) return 1.0 / (1.0 + std::exp(-z));
  const double e = std::exp(z);
  return e / (1.0 + e);
}

struct LinkValue {
  const Vector& y;
  double operator()(const PNormResidual& l) const {
    double s = 0.0;
    for (Eigen::Index i = 0; i < y.size(); ++i) s += abs_pow(y[i] - l.b[i], l.p);
    return s / l.p;
  }
  double operator()(const PowerHinge& l) const {
    double s = 0.0;
    for (Eigen::Index j = 0; j < y.size(); ++j) s += abs_pow(std::max(0.0, 1.0 - l.labels[j] * y[j]), l.p);
    return y.size() == 0 ? 0.0 : s / (l.p * static_cast<double>(y.size()));
  }
  double operator()(const Logistic& l) const {
    double s = 0.0;
    for (Eigen::Index j = 0; j < y.size(); ++j) s += softplus(-l.labels[j] * y[j]);
    return y.size() == 0 ? 0.0 : s / static_cast<double>(y.size());
  }
  double operator()(const Mixture& l) const {
    double total = 0.0;
    for (const auto& blk : l.blocks) {
      double s = 0.0;
      for (auto i = static_cast<Eigen::Index>(blk.row_begin); i < static_cast<Eigen::Index>(blk.row_end); ++i)
        s += abs_pow(y[i] - l.b[i], blk.p);
      total += s / blk.p;
    }
    return total;
  }
};

struct LinkGradient {
  const Vector& y;
  Vector operator()(const PNormResidual& l) const {
    Vector d(y.size());
    for (Eigen::Index i = 0; i < y.size(); ++i) d[i] = signed_pow(y[i] - l.b[i], l.p - 1.0);
    return d;
  }
  Vector operator()(const PowerHinge& l) const {
    Vector d(y.size());
    const double inv_m = 1.0 / static_cast<double>(std::max<Eigen::Index>(y.size(), 1));
    for (Eigen::Index j = 0; j < y.size(); ++j)
      d[j] = -inv_m * l.labels[j] * abs_pow(std::max(0.0, 1.0 - l.labels[j] * y[j]), l.p - 1.0);
    return d;
  }
  Vector operator()(const Logistic& l) const {
    Vector d(y.size());
    const double inv_m = 1.0 / static_cast<double>(std::max<Eigen::Index>(y.size(), 1));
    for (Eigen::Index j = 0; j < y.size(); ++j) d[j] = -inv_m * l.labels[j] * sigmoid(-l.labels[j] * y[j]);
    return d;
  }
  Vector operator()(const Mixture& l) const {
    Vector d = Vector::Zero(y.size());
    for (const auto& blk : l.blocks)
      for (auto i = static_cast<Eigen::Index>(blk.row_begin); i < static_cast<Eigen::Index>(blk.row_end); ++i)
        d[i] = signed_pow(y[i] - l.b[i], blk.p - 1.0);
    return d;
  }
};

void require_finite(const Vector& v, const char* what) {
  if (!v.allFinite()) throw NumericalError(std::string(what) + ": non-finite entries");
}

}  // namespace

double signed_pow(double r, double e) {
  if (r == 0.0) return 0.0;
  const double mag = std::exp(e * std::log(std::abs(r)));
  return r > 0.0 ? mag : -mag;
}

double abs_pow(double r, double e) {
  if (r == 0.0) return 0.0;
  return std::exp(e * std::log(std::abs(r)));
}

SmoothLoss::SmoothLoss(std::shared_ptr<CountedOperator> op, Link link, double reg_weight, double reg_power)
    : op_(std::move(op)), link_(std::move(link)), reg_weight_(reg_weight), reg_power_(reg_power) {
  if (!op_) throw std::invalid_argument("SmoothLoss: null operator");
  if (reg_weight_ < 0.0) throw std::invalid_argument("SmoothLoss: smooth regularizer weight must be >= 0");
  if (reg_weight_ > 0.0) check_power(reg_power_, "smooth regularizer power");
  const auto rows = static_cast<Eigen::Index>(op_->rows());
  std::visit(
      [rows](const auto& l) {
        using T = std::decay_t<decltype(l)>;
        if constexpr (std::is_same_v<T, PNormResidual>) {
          check_power(l.p, "p");
          if (l.b.size() != rows) throw DimensionError("PNormResidual: b must have one entry per row");
        } else if constexpr (std::is_same_v<T, PowerHinge>) {
          check_power(l.p, "p");
          if (l.labels.size() != rows) throw DimensionError("PowerHinge: one label per row required");
          check_labels(l.labels);
        } else if constexpr (std::is_same_v<T, Logistic>) {
          if (l.labels.size() != rows) throw DimensionError("Logistic: one label per row required");
          check_labels(l.labels);
        } else {
          if (l.b.size() != rows) throw DimensionError("Mixture: b must have one entry per row");
          std::size_t expect = 0;
          for (const auto& blk : l.blocks) {
            check_power(blk.p, "block power");
            if (blk.row_begin != expect || blk.row_end < blk.row_begin)
              throw std::invalid_argument("Mixture: blocks must tile the rows in order");
            expect = blk.row_end;
          }
          if (expect != static_cast<std::size_t>(rows))
            throw std::invalid_argument("Mixture: blocks must cover every row");
        }
      },
      link_);
}

Vector SmoothLoss::image(const Vector& x) const {
  require_finite(x, "loss input");
  return op_->apply(x);
}

double SmoothLoss::value_from_image(const Vector& x, const Vector& ax) const {
  double v = std::visit(LinkValue{ax}, link_);
  if (reg_weight_ > 0.0) {
    double s = 0.0;
    for (Eigen::Index i = 0; i < x.size(); ++i) s += abs_pow(x[i], reg_power_);
    v += reg_weight_ * s / reg_power_;
  }
  if (!std::isfinite(v)) throw NumericalError("loss value is not finite");
  return v;
}

Vector SmoothLoss::grad_from_image(const Vector& x, const Vector& ax) const {
  const Vector d = std::visit(LinkGradient{ax}, link_);
  require_finite(d, "link gradient");
  Vector g = op_->apply_transpose(d);
  if (reg_weight_ > 0.0)
    for (Eigen::Index i = 0; i < x.size(); ++i) g[i] += reg_weight_ * signed_pow(x[i], reg_power_ - 1.0);
  require_finite(g, "loss gradient");
  return g;
}

LossEval SmoothLoss::value_grad(const Vector& x) const {
  LossEval out;
  out.image = image(x);
  out.value = value_from_image(x, out.image);
  out.grad = grad_from_image(x, out.image);
  return out;
}

SmoothLoss SmoothLoss::with_fresh_operator() const {
  return SmoothLoss(op_->fresh_copy(), link_, reg_weight_, reg_power_);
}

LossEval loss_value_grad(const SmoothLoss& f, const Vector& x) { return f.value_grad(x); }

Regularizer Regularizer::l1(double weight) {
  if (!(weight >= 0.0)) throw std::invalid_argument("l1 weight must be >= 0");
  return Regularizer(Kind::l1, weight);
}

Regularizer Regularizer::ball(double radius) {
  if (!(radius > 0.0)) throw std::invalid_argument("ball radius must be > 0");
  return Regularizer(Kind::ball, radius);
}

double Regularizer::value(const Vector& x) const {
  switch (kind_) {
    case Kind::zero:
      return 0.0;
    case Kind::l1:
      return param_ * x.lpNorm<1>();
    case Kind::ball:
      return x.norm() <= param_ * (1.0 + 1e-12) ? 0.0 : std::numeric_limits<double>::infinity();
  }
  return 0.0;
}

Vector Regularizer::prox(double gamma, const Vector& v) const {
  if (!(gamma > 0.0)) throw std::invalid_argument("prox: gamma must be > 0");
  switch (kind_) {
    case Kind::zero:
      return v;
    case Kind::l1: {
      const double t = gamma * param_;
      Vector z(v.size());
      for (Eigen::Index i = 0; i < v.size(); ++i) {
        const double a = std::abs(v[i]) - t;
        z[i] = a > 0.0 ? std::copysign(a, v[i]) : 0.0;
      }
      return z;
    }
    case Kind::ball: {
      const double nrm = v.norm();
      if (nrm <= param_) return v;
      return (param_ / nrm) * v;
    }
  }
  return v;
}

Vector prox(const Regularizer& g, double gamma, const Vector& v) { return g.prox(gamma, v); }

double CompositeProblem::objective(const Vector& x) const {
  return f.value_from_image(x, f.image(x)) + g.value(x);
}

CompositeProblem CompositeProblem::with_fresh_operator() const {
  return CompositeProblem{f.with_fresh_operator(), g, certificate};
}

double kkt_residual(const CompositeProblem& prob, const Vector& x) {
  const LossEval e = prob.f.value_grad(x);
  return (x - prob.g.prox(1.0, x - e.grad)).norm();
}

bool certificate_holds(const CompositeProblem& prob, double kkt_tol, double rel_tol) {
  if (!prob.certificate) return false;
  const auto& c = *prob.certificate;
  if (kkt_residual(prob, c.x_star) > kkt_tol) return false;
  const double phi = prob.objective(c.x_star);
  return std::abs(phi - c.phi_star) <= rel_tol * std::max(1.0, std::abs(c.phi_star));
}

}  // namespace adaprox
