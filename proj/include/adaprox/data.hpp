#pragma once

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "adaprox/objectives.hpp"

namespace adaprox {

class ParseError : public std::runtime_error {
 public:
  ParseError(std::size_t line, const std::string& what)
      : std::runtime_error("line " + std::to_string(line) + ": " + what), line_(line) {}
  std::size_t line() const { return line_; }

 private:
  std::size_t line_;
};

struct LabeledDataset {
  SparseMatrixCSR features;  // one row per example
  Vector labels;             // entries in {-1, +1}
};

// LibSVM text: "label idx:val idx:val ..." with 1-based strictly increasing
// indices. Blank lines and '#' comments are skipped. Two label values are
// remapped to -1 (smaller) and +1 (larger).
LabeledDataset parse_libsvm(std::istream& in);
LabeledDataset load_libsvm(const std::filesystem::path& path);
void write_libsvm(const LabeledDataset& data, std::ostream& out);

struct GeneratedInstance {
  DenseMatrix A;
  Vector b;
  double p = 1.5;
  double lambda = 1.0;
  Vector x_star;
  double phi_star = 0.0;
  std::vector<std::size_t> support;

  // 1/p ||Ax - b||_p^p + lambda ||x||_1 with the certificate attached.
  CompositeProblem to_problem() const;
};

// Random p-norm Lasso instance with known solution: the residual at x* and
// the column scaling are constructed so that the optimality conditions hold
// exactly (off-support correlations at most 0.9 lambda).
GeneratedInstance generate_pnorm_lasso(std::size_t m, std::size_t n, std::size_t k, double p, double lambda,
                                       std::uint64_t seed);

struct MixtureSpec {
  std::size_t n = 0;
  std::vector<std::pair<std::size_t, double>> blocks;  // (m_j, p_j)
  double radius = 0.1;
  std::uint64_t seed = 0;
};

// sum_j 1/p_j ||A^j x - b^j||^{p_j} over the ball of given radius; A^j, b^j
// uniform on [-1, 1]. No certificate.
CompositeProblem generate_mixture(const MixtureSpec& spec);

// Power-hinge SVM with l1 penalty lambda ||x||_1.
CompositeProblem make_svm_problem(const LabeledDataset& data, double p, double lambda);
// Logistic loss plus the smooth term lambda/p ||x||_p^p; no nonsmooth part.
CompositeProblem make_logistic_problem(const LabeledDataset& data, double p, double lambda);

}  // namespace adaprox
