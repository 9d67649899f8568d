#include "dsm/operators.hpp"

#include "dsm/random.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <sstream>

namespace dsm {

Vector OperatorProblem::regularized_residual(const Vector& u, double a) const {
  return eval(u) + a * u - rhs;
}

namespace {

constexpr Eigen::Index kMaxDim = 512;

OperatorProblem linear_problem(std::string name, DenseMatrix a, Vector f, bool symmetric) {
  OperatorProblem p;
  p.name = std::move(name);
  p.dim = a.rows();
  p.eval = [a](const Vector& u) -> Vector { return a * u; };
  p.jacobian = [a](const Vector&) -> DenseMatrix { return a; };
  p.rhs = std::move(f);
  p.symmetric_jacobian = symmetric;
  return p;
}

DenseMatrix random_matrix(Eigen::Index rows, Eigen::Index cols, SeededRng& rng) {
  DenseMatrix m(rows, cols);
  for (Eigen::Index i = 0; i < rows; ++i)
    for (Eigen::Index j = 0; j < cols; ++j) m(i, j) = rng.uniform(-1.0, 1.0);
  return m;
}

DenseMatrix random_orthogonal(Eigen::Index n, SeededRng& rng) {
  const DenseMatrix g = random_matrix(n, n, rng);
  const Eigen::HouseholderQR<DenseMatrix> qr(g);
  return qr.householderQ() * DenseMatrix::Identity(n, n);
}

void require_dim(const std::string& name, Eigen::Index n) {
  const auto [lo, hi] = allowed_dims(name);
  if (n < lo || n > hi) {
    std::ostringstream msg;
    msg << name << ": dimension " << n << " outside [" << lo << ", " << hi << "]";
    throw UsageError(msg.str());
  }
}

}  // namespace

OperatorProblem make_identity(Eigen::Index n, Vector f) {
  if (f.size() != n) throw UsageError("identity: rhs dimension mismatch");
  OperatorProblem p;
  p.name = "identity";
  p.dim = n;
  p.eval = [](const Vector& u) -> Vector { return u; };
  p.jacobian = [n](const Vector&) -> DenseMatrix { return DenseMatrix::Identity(n, n); };
  p.symmetric_jacobian = true;
  p.known_minimal_norm_solution = f;
  p.rhs = std::move(f);
  return p;
}

OperatorProblem make_identity(Eigen::Index n) { return make_identity(n, Vector::Zero(n)); }

OperatorProblem make_diag_cubic(Vector f) {
  OperatorProblem p;
  p.name = "diag_cubic";
  p.dim = f.size();
  p.eval = [](const Vector& u) -> Vector { return u.array().cube().matrix(); };
  p.jacobian = [](const Vector& u) -> DenseMatrix {
    return (3.0 * u.array().square()).matrix().asDiagonal();
  };
  p.symmetric_jacobian = true;
  p.known_minimal_norm_solution = f.unaryExpr([](double v) { return std::cbrt(v); });
  p.rhs = std::move(f);
  return p;
}

OperatorProblem make_diag_cubic(Eigen::Index n) {
  static constexpr double cycle[] = {8.0, -1.0, 0.125, 0.0};
  Vector f(n);
  for (Eigen::Index i = 0; i < n; ++i) f[i] = cycle[i % 4];
  return make_diag_cubic(std::move(f));
}

OperatorProblem make_psd_from_spectrum(const DenseMatrix& q, const Vector& lambda, Vector f) {
  const auto n = q.rows();
  if (q.cols() != n || lambda.size() != n || f.size() != n) {
    throw UsageError("psd_rank_deficient: inconsistent spectrum dimensions");
  }
  if ((lambda.array() < 0.0).any()) throw UsageError("psd_rank_deficient: negative eigenvalue");

  const DenseMatrix a = q * lambda.asDiagonal() * q.transpose();
  Vector pinv_diag(n);
  for (Eigen::Index i = 0; i < n; ++i) pinv_diag[i] = lambda[i] > 0.0 ? 1.0 / lambda[i] : 0.0;
  const Vector y = q * (pinv_diag.asDiagonal() * (q.transpose() * f));

  OperatorProblem p = linear_problem("psd_rank_deficient", a, std::move(f), true);
  p.known_minimal_norm_solution = y;
  for (Eigen::Index i = 0; i < n; ++i)
    if (lambda[i] == 0.0) p.null_space_basis.emplace_back(q.col(i));
  return p;
}

OperatorProblem make_psd_rank_deficient(Eigen::Index n, Eigen::Index rank, std::uint64_t seed) {
  if (rank < 1 || rank > n) throw UsageError("psd_rank_deficient: rank must lie in [1, n]");
  SeededRng rng(seed ^ 0x5eed0c01ULL);
  const DenseMatrix q = random_orthogonal(n, rng);
  Vector lambda = Vector::Zero(n);
  for (Eigen::Index i = 0; i < rank; ++i) {
    lambda[i] = rank == 1 ? 1.0 : 1.0 + 9.0 * static_cast<double>(i) / static_cast<double>(rank - 1);
  }
  const Vector z = rng.uniform_vector(n, -1.0, 1.0);
  const DenseMatrix a = q * lambda.asDiagonal() * q.transpose();
  Vector f = a * z;
  return make_psd_from_spectrum(q, lambda, std::move(f));
}

OperatorProblem make_fredholm_first_kind(Eigen::Index n) {
  const double dx = 1.0 / static_cast<double>(n);
  DenseMatrix a(n, n);
  Vector x(n);
  for (Eigen::Index i = 0; i < n; ++i) x[i] = (static_cast<double>(i) + 0.5) * dx;
  for (Eigen::Index i = 0; i < n; ++i)
    for (Eigen::Index j = 0; j < n; ++j) a(i, j) = dx * std::min(x[i], x[j]);

  const Vector u_true =
      x.unaryExpr([](double s) { return std::sin(std::numbers::pi * s) + 0.5 * s; });
  OperatorProblem p = linear_problem("fredholm_first_kind", a, a * u_true, true);
  // The midpoint kernel matrix is nonsingular, so u_true is the only solution.
  p.known_minimal_norm_solution = u_true;
  p.solution_rel_tol = 5e-2;
  return p;
}

OperatorProblem make_skew_perturbed(Eigen::Index n, std::uint64_t seed) {
  SeededRng rng(seed ^ 0x5eed0c02ULL);
  const DenseMatrix m = random_matrix(n, n, rng);
  const DenseMatrix s =
      m.transpose() * m / static_cast<double>(n) + 0.1 * DenseMatrix::Identity(n, n);
  const DenseMatrix g = random_matrix(n, n, rng);
  const DenseMatrix k = 0.5 * (g - g.transpose());
  const Vector z = rng.uniform_vector(n, -1.0, 1.0);
  OperatorProblem p = linear_problem("skew_perturbed", s + k, (s + k) * z, n == 1);
  p.known_minimal_norm_solution = z;
  return p;
}

OperatorProblem make_convex_gradient(Eigen::Index n, std::uint64_t seed) {
  SeededRng rng(seed ^ 0x5eed0c03ULL);
  const DenseMatrix c = random_matrix(n, n, rng);
  const DenseMatrix b = c.transpose() * c / static_cast<double>(n);
  const Vector z = rng.uniform_vector(n, -1.5, 1.5);

  OperatorProblem p;
  p.name = "convex_gradient";
  p.dim = n;
  p.eval = [b](const Vector& u) -> Vector {
    return (u.array().cube() + u.array()).matrix() + b * u;
  };
  p.jacobian = [b](const Vector& u) -> DenseMatrix {
    DenseMatrix j = b;
    j.diagonal().array() += 3.0 * u.array().square() + 1.0;
    return j;
  };
  p.rhs = p.eval(z);
  p.symmetric_jacobian = true;
  p.known_minimal_norm_solution = z;
  return p;
}

OperatorProblem make_negated_identity(Eigen::Index n) {
  OperatorProblem p;
  p.name = "negated_identity";
  p.dim = n;
  p.eval = [](const Vector& u) -> Vector { return -u; };
  p.jacobian = [n](const Vector&) -> DenseMatrix { return -DenseMatrix::Identity(n, n); };
  p.rhs = Vector::Zero(n);
  p.symmetric_jacobian = true;
  return p;
}

const std::vector<std::string>& problem_names() {
  static const std::vector<std::string> names = {
      "identity",      "diag_cubic",      "psd_rank_deficient", "fredholm_first_kind",
      "skew_perturbed", "convex_gradient", "negated_identity"};
  return names;
}

Eigen::Index default_dim(const std::string& name) {
  if (name == "identity") return 10;
  if (name == "diag_cubic") return 4;
  if (name == "psd_rank_deficient") return 20;
  if (name == "fredholm_first_kind") return 100;
  if (name == "skew_perturbed") return 10;
  if (name == "convex_gradient") return 10;
  if (name == "negated_identity") return 2;
  throw UsageError("unknown problem '" + name + "'");
}

std::pair<Eigen::Index, Eigen::Index> allowed_dims(const std::string& name) {
  default_dim(name);  // validates the name
  if (name == "psd_rank_deficient" || name == "fredholm_first_kind") return {2, kMaxDim};
  return {1, kMaxDim};
}

OperatorProblem make_problem(const std::string& name, Eigen::Index dim, std::uint64_t seed) {
  const Eigen::Index n = dim > 0 ? dim : default_dim(name);
  require_dim(name, n);
  if (name == "identity") return make_identity(n);
  if (name == "diag_cubic") return make_diag_cubic(n);
  if (name == "psd_rank_deficient") return make_psd_rank_deficient(n, n - n / 4, seed);
  if (name == "fredholm_first_kind") return make_fredholm_first_kind(n);
  if (name == "skew_perturbed") return make_skew_perturbed(n, seed);
  if (name == "convex_gradient") return make_convex_gradient(n, seed);
  return make_negated_identity(n);
}

std::vector<OperatorProblem> gallery(std::uint64_t seed) {
  std::vector<OperatorProblem> out;
  const auto& names = problem_names();
  for (std::size_t i = 0; i < 6; ++i) out.push_back(make_problem(names[i], 0, seed));
  return out;
}

MonotoneReport check_monotone(const OperatorProblem& p, int samples, double radius,
                              std::uint64_t seed) {
  if (samples < 1) throw UsageError("check_monotone: samples must be >= 1");
  if (!(radius > 0.0)) throw UsageError("check_monotone: radius must be positive");

  SeededRng rng(seed);
  MonotoneReport report{std::numeric_limits<double>::infinity(), true, samples, radius, seed};
  for (int k = 0; k < samples; ++k) {
    const Vector u = rng.in_ball(p.dim, radius);
    const Vector v = rng.in_ball(p.dim, radius);
    const Vector fu = p.eval(u);
    const Vector diff = u - v;
    const double pairing = inner(fu - p.eval(v), diff);
    const double eps = 1e-9 * (1.0 + fu.norm() * diff.norm());
    report.min_pairing = std::min(report.min_pairing, pairing);
    if (pairing < -eps) report.pass = false;
  }
  return report;
}

JacobianReport check_jacobian(const OperatorProblem& p, const Vector& point, double step) {
  if (!(step > 0.0)) throw UsageError("check_jacobian: step must be positive");
  const DenseMatrix analytic = p.jacobian(point);
  DenseMatrix fd(p.dim, p.dim);
  for (Eigen::Index j = 0; j < p.dim; ++j) {
    Vector plus = point;
    Vector minus = point;
    plus[j] += step;
    minus[j] -= step;
    fd.col(j) = (p.eval(plus) - p.eval(minus)) / (2.0 * step);
  }
  JacobianReport report;
  report.max_entry_error = p.dim == 0 ? 0.0 : (fd - analytic).cwiseAbs().maxCoeff();
  report.tolerance = 1e-4 * (1.0 + (p.dim == 0 ? 0.0 : analytic.cwiseAbs().maxCoeff()));
  report.pass = report.max_entry_error <= report.tolerance;
  return report;
}

}  // namespace dsm
