#include "noiselab/spectral.hpp"

#include <algorithm>
#include <cmath>
#include <cstring>
#include <limits>

#include "noiselab/errors.hpp"

namespace noiselab {

namespace {

std::uint64_t fnv1a(std::uint64_t hash, const void* data, std::size_t bytes) {
  const auto* p = static_cast<const unsigned char*>(data);
  for (std::size_t i = 0; i < bytes; ++i) {
    hash ^= p[i];
    hash *= 0x100000001b3ull;
  }
  return hash;
}

}  // namespace

GeneratorMatrix generator_matrix(const SchreierGraph& g) {
  const auto n = static_cast<Eigen::Index>(g.size());
  const double w = 1.0 / static_cast<double>(g.degree());
  GeneratorMatrix q{Eigen::MatrixXd::Zero(n, n)};
  for (std::size_t u = 0; u < g.degree(); ++u) {
    const auto image = g.image(u);
    for (Eigen::Index x = 0; x < n; ++x) {
      const auto y = static_cast<Eigen::Index>(image[static_cast<std::size_t>(x)]);
      if (y == x) continue;
      q.entries(x, x) += w;
      q.entries(x, y) -= w;
    }
  }
  return q;
}

Eigen::VectorXd apply_generator_matrix(const SchreierGraph& g, const Eigen::VectorXd& f) {
  Eigen::VectorXd out = Eigen::VectorXd::Zero(f.size());
  for (std::size_t u = 0; u < g.degree(); ++u) {
    const auto image = g.image(u);
    for (Eigen::Index x = 0; x < f.size(); ++x)
      out[x] += f[x] - f[image[static_cast<std::size_t>(x)]];
  }
  return out / static_cast<double>(g.degree());
}

Eigen::VectorXd apply_difference(const SchreierGraph& g, const Eigen::VectorXd& f,
                                 std::size_t u) {
  require(static_cast<std::size_t>(f.size()) == g.size(), ErrorCode::invalid_argument,
          "function size does not match the graph");
  require(u < g.degree(), ErrorCode::invalid_argument, "generator index out of range");
  const auto image = g.image(u);
  Eigen::VectorXd out(f.size());
  for (Eigen::Index x = 0; x < f.size(); ++x)
    out[x] = f[x] - f[image[static_cast<std::size_t>(x)]];
  return out;
}

// ---------------------------------------------------------------------------
// Spectrum

Spectrum::Spectrum(std::vector<double> eigenvalues, Eigen::MatrixXd eigenvectors,
                   double grouping_tolerance)
    : eigenvalues_(std::move(eigenvalues)),
      eigenvectors_(std::move(eigenvectors)),
      grouping_tolerance_(grouping_tolerance) {
  require(!eigenvalues_.empty(), ErrorCode::invalid_argument, "empty spectrum");
  require(eigenvectors_.rows() == static_cast<Eigen::Index>(eigenvalues_.size()) &&
              eigenvectors_.cols() == eigenvectors_.rows(),
          ErrorCode::invalid_argument, "eigenvector matrix has the wrong shape");
  require(std::is_sorted(eigenvalues_.begin(), eigenvalues_.end()),
          ErrorCode::invalid_argument, "eigenvalues must be ascending");

  group_of_.resize(eigenvalues_.size());
  for (std::size_t j = 0; j < eigenvalues_.size(); ++j) {
    if (groups_.empty() || eigenvalues_[j] - eigenvalues_[groups_.back().members.front()] >
                               grouping_tolerance_) {
      groups_.push_back({eigenvalues_[j], {}});
    }
    groups_.back().members.push_back(j);
    group_of_[j] = groups_.size() - 1;
  }
  for (auto& group : groups_) {
    double sum = 0.0;
    for (std::size_t j : group.members) sum += eigenvalues_[j];
    group.eigenvalue = sum / static_cast<double>(group.members.size());
  }
  if (groups_.front().members.front() == 0 && eigenvalues_[0] == 0.0)
    groups_.front().eigenvalue = 0.0;

  std::uint64_t h = 0xcbf29ce484222325ull;
  h = fnv1a(h, eigenvalues_.data(), eigenvalues_.size() * sizeof(double));
  h = fnv1a(h, eigenvectors_.data(),
            static_cast<std::size_t>(eigenvectors_.size()) * sizeof(double));
  fingerprint_ = h;
}

double Spectrum::gap() const { return size() > 1 ? eigenvalues_[1] : 0.0; }

double Spectrum::relaxation_time() const {
  return size() > 1 ? 1.0 / eigenvalues_[1] : std::numeric_limits<double>::infinity();
}

Eigen::VectorXd Spectrum::coefficients(const Eigen::VectorXd& f) const {
  require(f.size() == eigenvectors_.rows(), ErrorCode::invalid_argument,
          "function size does not match the spectrum");
  return eigenvectors_.transpose() * f / static_cast<double>(f.size());
}

Spectrum decompose(const SchreierGraph& g, std::optional<double> grouping_tolerance) {
  require(g.generators().inverse_closed(), ErrorCode::validation,
          "decompose needs an inverse-closed generator set");
  require(is_connected(g), ErrorCode::validation, "decompose needs a connected graph");

  const auto n = static_cast<Eigen::Index>(g.size());
  if (n == 1) {
    return Spectrum({0.0}, Eigen::MatrixXd::Ones(1, 1), grouping_tolerance.value_or(1e-8));
  }

  const GeneratorMatrix q = generator_matrix(g);
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver(q.entries);
  if (solver.info() != Eigen::Success)
    throw_error(ErrorCode::numeric, "symmetric eigensolver did not converge");

  std::vector<double> values(solver.eigenvalues().data(),
                             solver.eigenvalues().data() + n);
  Eigen::MatrixXd vectors = solver.eigenvectors() * std::sqrt(static_cast<double>(n));

  const double lambda_max = values.back();
  const double scale = std::max(1.0, lambda_max);
  require(std::abs(values[0]) <= 1e-8 * scale, ErrorCode::numeric,
          "smallest eigenvalue of -Q is not zero");
  require(values[1] > 1e-8 * scale, ErrorCode::numeric,
          "spectral gap vanishes although the graph is connected");
  values[0] = 0.0;
  vectors.col(0).setOnes();

  for (Eigen::Index j = 1; j < n; ++j) {
    auto col = vectors.col(j);
    const double threshold = 1e-9 * col.cwiseAbs().maxCoeff();
    for (Eigen::Index i = 0; i < n; ++i) {
      if (std::abs(col[i]) > threshold) {
        if (col[i] < 0) col = -col;
        break;
      }
    }
  }

  const Eigen::MatrixXd residual =
      q.entries * vectors - vectors * Eigen::Map<const Eigen::VectorXd>(values.data(), n).asDiagonal();
  const double worst = residual.cwiseAbs().maxCoeff();
  if (!(worst <= 1e-8 * scale))
    throw_error(ErrorCode::numeric, "eigenpair residual " + std::to_string(worst) +
                                        " exceeds tolerance");

  return Spectrum(std::move(values), std::move(vectors),
                  grouping_tolerance.value_or(1e-8 * scale));
}

std::vector<Eigenspace> eigenspaces(const Spectrum& s) { return s.eigenspaces(); }

Eigen::VectorXd apply_semigroup(const Spectrum& s, const Eigen::VectorXd& f, double t) {
  require(t >= 0.0, ErrorCode::invalid_argument, "semigroup time must be nonnegative");
  Eigen::VectorXd c = s.coefficients(f);
  for (Eigen::Index j = 0; j < c.size(); ++j)
    c[j] *= std::exp(-s.eigenvalue(static_cast<std::size_t>(j)) * t);
  return s.eigenvectors() * c;
}

RotationReport check_rotation_invariance(const Spectrum& s, const SchreierGraph& g,
                                         std::size_t u, double tol) {
  require(s.size() == g.size(), ErrorCode::invalid_argument,
          "spectrum does not belong to this graph");
  require(u < g.degree(), ErrorCode::invalid_argument, "generator index out of range");
  const auto n = static_cast<Eigen::Index>(g.size());
  const auto image = g.image(u);

  RotationReport report;
  report.generator = u;
  for (std::size_t k = 0; k < s.eigenspaces().size(); ++k) {
    const auto& space = s.eigenspaces()[k];
    const auto d = static_cast<Eigen::Index>(space.members.size());
    Eigen::MatrixXd basis(n, d), rotated(n, d);
    for (Eigen::Index i = 0; i < d; ++i) {
      const auto col = s.eigenvectors().col(static_cast<Eigen::Index>(space.members[static_cast<std::size_t>(i)]));
      basis.col(i) = col;
      for (Eigen::Index w = 0; w < n; ++w)
        rotated(w, i) = col[image[static_cast<std::size_t>(w)]];
    }
    const Eigen::MatrixXd gram = rotated.transpose() * rotated / static_cast<double>(n);
    const Eigen::MatrixXd coeffs = basis.transpose() * rotated / static_cast<double>(n);
    const Eigen::MatrixXd residual = rotated - basis * coeffs;

    RotationEigenspaceResult r;
    r.group = k;
    r.eigenvalue = space.eigenvalue;
    r.dimension = space.members.size();
    r.max_gram_error = (gram - Eigen::MatrixXd::Identity(d, d)).cwiseAbs().maxCoeff();
    r.max_projection_residual =
        (residual.colwise().squaredNorm() / static_cast<double>(n)).cwiseSqrt().maxCoeff();
    r.pass = r.max_gram_error < tol && r.max_projection_residual < tol;
    report.pass = report.pass && r.pass;
    report.eigenspaces.push_back(r);
  }
  return report;
}

// ---------------------------------------------------------------------------
// Norms / hypercontractivity

double lp_norm(const Eigen::VectorXd& f, double p) {
  require(p >= 1.0, ErrorCode::invalid_argument, "p-norm needs p >= 1");
  double acc = 0.0;
  for (Eigen::Index i = 0; i < f.size(); ++i) acc += std::pow(std::abs(f[i]), p);
  return std::pow(acc / static_cast<double>(f.size()), 1.0 / p);
}

HypercontractivityCheck hypercontractivity(const Spectrum& s, const Eigen::VectorXd& f,
                                           double t, double rho) {
  require(rho > 0.0, ErrorCode::invalid_argument, "rho must be positive");
  HypercontractivityCheck check;
  check.p = 1.0 + std::exp(-2.0 * rho * t);
  check.lhs = lp_norm(apply_semigroup(s, f, t), 2.0);
  check.rhs = lp_norm(f, check.p);
  return check;
}

}  // namespace noiselab
