#include <algorithm>
#include <cmath>
#include <numeric>
#include <random>

#include "adaprox/data.hpp"

namespace adaprox {

namespace {

constexpr int kMaxColumnDraws = 200;
constexpr int kMaxResidualDraws = 200;

double uniform_sym(std::mt19937_64& rng) { return std::uniform_real_distribution<double>(-1.0, 1.0)(rng); }

void fill_column(DenseMatrix& a, Eigen::Index j, std::mt19937_64& rng) {
  for (Eigen::Index i = 0; i < a.rows(); ++i) a(i, j) = uniform_sym(rng);
}

}  // namespace

CompositeProblem GeneratedInstance::to_problem() const {
  auto op = std::make_shared<CountedOperator>(A);
  SmoothLoss f(op, PNormResidual{p, b});
  return CompositeProblem{std::move(f), Regularizer::l1(lambda), Certificate{x_star, phi_star}};
}

GeneratedInstance generate_pnorm_lasso(std::size_t m, std::size_t n, std::size_t k, double p, double lambda,
                                       std::uint64_t seed) {
  if (m == 0 || n == 0) throw std::invalid_argument("generate_pnorm_lasso: m and n must be positive");
  if (k > m) throw std::invalid_argument("generate_pnorm_lasso: k must not exceed m");
  if (m >= n) throw std::invalid_argument("generate_pnorm_lasso: need m < n");
  if (!(p > 1.0 && p <= 2.0)) throw std::invalid_argument("generate_pnorm_lasso: p must lie in (1, 2]");
  if (!(lambda > 0.0) || !std::isfinite(lambda)) throw std::invalid_argument("generate_pnorm_lasso: lambda must be positive");

  std::mt19937_64 rng(seed);
  const auto mi = static_cast<Eigen::Index>(m);
  const auto ni = static_cast<Eigen::Index>(n);

  GeneratedInstance out;
  out.p = p;
  out.lambda = lambda;
  DenseMatrix base(mi, ni);
  for (Eigen::Index i = 0; i < mi; ++i)
    for (Eigen::Index j = 0; j < ni; ++j) base(i, j) = uniform_sym(rng);

  std::vector<std::size_t> perm(n);
  std::iota(perm.begin(), perm.end(), std::size_t{0});
  for (std::size_t i = 0; i < k; ++i) {
    std::uniform_int_distribution<std::size_t> pick(i, n - 1);
    std::swap(perm[i], perm[pick(rng)]);
  }
  out.support.assign(perm.begin(), perm.begin() + static_cast<std::ptrdiff_t>(k));
  std::sort(out.support.begin(), out.support.end());
  std::vector<double> sign(n, 0.0);
  std::bernoulli_distribution coin(0.5);
  for (std::size_t j : out.support) sign[j] = coin(rng) ? 1.0 : -1.0;

  Vector r_star(mi), d(mi);
  bool built = false;
  for (int attempt = 0; attempt < kMaxResidualDraws && !built; ++attempt) {
    for (Eigen::Index i = 0; i < mi; ++i) {
      r_star[i] = uniform_sym(rng);
      d[i] = signed_pow(r_star[i], p - 1.0);
    }
    out.A = base;
    built = true;
    for (std::size_t j : out.support) {
      const auto col = static_cast<Eigen::Index>(j);
      bool ok = false;
      for (int draw = 0; draw < kMaxColumnDraws; ++draw) {
        if (draw > 0) fill_column(out.A, col, rng);
        const double ip = out.A.col(col).dot(d);
        if (ip == 0.0) continue;
        const double scale = -lambda * sign[j] / ip;
        if (std::abs(scale) * out.A.col(col).cwiseAbs().maxCoeff() > 1.0) continue;
        out.A.col(col) *= scale;
        ok = true;
        break;
      }
      if (!ok) {
        built = false;
        break;
      }
    }
  }
  if (!built)
    throw std::invalid_argument("generate_pnorm_lasso: could not place support columns; lambda too large for m");

  std::vector<char> on_support(n, 0);
  for (std::size_t j : out.support) on_support[j] = 1;
  const double cap = 0.9 * lambda;
  for (Eigen::Index j = 0; j < ni; ++j) {
    if (on_support[static_cast<std::size_t>(j)]) continue;
    const double ip = std::abs(out.A.col(j).dot(d));
    if (ip > cap) out.A.col(j) *= cap / ip;
  }

  out.x_star = Vector::Zero(ni);
  std::uniform_real_distribution<double> mag(0.0, 1.0);
  for (std::size_t j : out.support) out.x_star[static_cast<Eigen::Index>(j)] = sign[j] * (1.0 - mag(rng));

  const Vector ax = out.A * out.x_star;
  out.b = ax - r_star;

  auto tmp = std::make_shared<CountedOperator>(out.A);
  SmoothLoss f(tmp, PNormResidual{p, out.b});
  out.phi_star = f.value_from_image(out.x_star, ax) + lambda * out.x_star.lpNorm<1>();
  return out;
}

CompositeProblem generate_mixture(const MixtureSpec& spec) {
  if (spec.n == 0) throw std::invalid_argument("generate_mixture: n must be positive");
  if (spec.blocks.empty()) throw std::invalid_argument("generate_mixture: no blocks");
  if (!(spec.radius > 0.0)) throw std::invalid_argument("generate_mixture: radius must be positive");
  std::size_t rows = 0;
  for (const auto& [m, p] : spec.blocks) {
    if (m == 0) throw std::invalid_argument("generate_mixture: empty block");
    rows += m;
  }
  std::mt19937_64 rng(spec.seed);
  const auto ni = static_cast<Eigen::Index>(spec.n);
  DenseMatrix a(static_cast<Eigen::Index>(rows), ni);
  Mixture link;
  link.b.resize(static_cast<Eigen::Index>(rows));
  std::size_t at = 0;
  for (const auto& [m, p] : spec.blocks) {
    for (std::size_t i = at; i < at + m; ++i)
      for (Eigen::Index j = 0; j < ni; ++j) a(static_cast<Eigen::Index>(i), j) = uniform_sym(rng);
    for (std::size_t i = at; i < at + m; ++i) link.b[static_cast<Eigen::Index>(i)] = uniform_sym(rng);
    link.blocks.push_back(MixtureBlock{at, at + m, p});
    at += m;
  }
  auto op = std::make_shared<CountedOperator>(std::move(a));
  return CompositeProblem{SmoothLoss(op, std::move(link)), Regularizer::ball(spec.radius), std::nullopt};
}

CompositeProblem make_svm_problem(const LabeledDataset& data, double p, double lambda) {
  auto op = std::make_shared<CountedOperator>(data.features);
  return CompositeProblem{SmoothLoss(op, PowerHinge{p, data.labels}), Regularizer::l1(lambda), std::nullopt};
}

CompositeProblem make_logistic_problem(const LabeledDataset& data, double p, double lambda) {
  auto op = std::make_shared<CountedOperator>(data.features);
  return CompositeProblem{SmoothLoss(op, Logistic{data.labels}, lambda, p), Regularizer::zero(), std::nullopt};
}

}  // namespace adaprox
