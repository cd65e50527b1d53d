#pragma once

#include <cstdint>
#include <optional>
#include <vector>

#include <Eigen/Dense>

#include "noiselab/graph.hpp"

namespace noiselab {

/// Dense −Q = (1/|U|) Σ_u L_u, with L_u f(w) = f(w) − f(w_u).
struct GeneratorMatrix {
  Eigen::MatrixXd entries;
};

GeneratorMatrix generator_matrix(const SchreierGraph& g);

/// (−Q) f computed from the generator images, without forming the matrix.
Eigen::VectorXd apply_generator_matrix(const SchreierGraph& g, const Eigen::VectorXd& f);

/// L_u f.
Eigen::VectorXd apply_difference(const SchreierGraph& g, const Eigen::VectorXd& f,
                                 std::size_t u);

/// Uniform-measure inner product E[f g].
inline double inner(const Eigen::VectorXd& f, const Eigen::VectorXd& g) {
  return f.dot(g) / static_cast<double>(f.size());
}

struct Eigenspace {
  double eigenvalue = 0.0;
  std::vector<std::size_t> members;
};

/// Eigenvalues of −Q in ascending order with eigenvectors orthonormal under
/// the uniform inner product. Column j of `eigenvectors()` is ψ_j; ψ_0 ≡ 1.
/// Each ψ_j (j ≥ 1) has its first nonzero coordinate positive.
class Spectrum {
 public:
  Spectrum(std::vector<double> eigenvalues, Eigen::MatrixXd eigenvectors,
           double grouping_tolerance);

  std::size_t size() const { return eigenvalues_.size(); }
  const std::vector<double>& eigenvalues() const { return eigenvalues_; }
  double eigenvalue(std::size_t j) const { return eigenvalues_[j]; }
  const Eigen::MatrixXd& eigenvectors() const { return eigenvectors_; }
  Eigen::VectorXd vector(std::size_t j) const { return eigenvectors_.col(static_cast<Eigen::Index>(j)); }

  /// λ_1; zero for a single-state graph.
  double gap() const;
  /// 1/λ_1; infinity for a single-state graph.
  double relaxation_time() const;
  double max_eigenvalue() const { return eigenvalues_.back(); }
  double grouping_tolerance() const { return grouping_tolerance_; }

  /// Tolerance-grouped eigenspaces, sorted by eigenvalue.
  const std::vector<Eigenspace>& eigenspaces() const { return groups_; }
  /// Group index of eigenvector j.
  std::size_t group_of(std::size_t j) const { return group_of_[j]; }

  /// Hash of the eigen data; identifies the spectrum a FourierExpansion was
  /// computed against.
  std::uint64_t fingerprint() const { return fingerprint_; }

  /// ⟨f, ψ_j⟩ for every j.
  Eigen::VectorXd coefficients(const Eigen::VectorXd& f) const;

 private:
  std::vector<double> eigenvalues_;
  Eigen::MatrixXd eigenvectors_;
  double grouping_tolerance_;
  std::vector<Eigenspace> groups_;
  std::vector<std::size_t> group_of_;
  std::uint64_t fingerprint_ = 0;
};

/// Default grouping tolerance 1e−8 · max(1, λ_max) when `grouping_tolerance`
/// is not given. Throws ErrorCode::numeric if the eigensolver fails or the
/// residual check ‖(−Q)ψ − λψ‖∞ ≤ 1e−8 · max(1, λ_max) does not hold.
Spectrum decompose(const SchreierGraph& g,
                   std::optional<double> grouping_tolerance = std::nullopt);

std::vector<Eigenspace> eigenspaces(const Spectrum& s);

/// H_t f = Σ_j e^{−λ_j t} ⟨f, ψ_j⟩ ψ_j.
Eigen::VectorXd apply_semigroup(const Spectrum& s, const Eigen::VectorXd& f, double t);

struct RotationEigenspaceResult {
  std::size_t group = 0;
  double eigenvalue = 0.0;
  std::size_t dimension = 0;
  double max_gram_error = 0.0;
  double max_projection_residual = 0.0;
  bool pass = true;
};

struct RotationReport {
  std::size_t generator = 0;
  std::vector<RotationEigenspaceResult> eigenspaces;
  bool pass = true;
};

/// For every eigenspace, checks that ψ_{i,u}(w) := ψ_i(w_u) is again an
/// orthonormal basis of the same eigenspace.
RotationReport check_rotation_invariance(const Spectrum& s, const SchreierGraph& g,
                                         std::size_t u, double tol = 1e-8);

// ---------------------------------------------------------------------------
// Log-Sobolev constant

struct LogSobolevOptions {
  int restarts = 32;
  int max_iters = 2000;
  double tol = 1e-12;
  std::uint64_t seed = 0x5eed;
  unsigned threads = 1;
};

struct LogSobolevEstimate {
  /// min over nonconstant f of D(f) / Ent(f²), where
  /// D(f) = (1/|U|) Σ_u E[(f − f∘u)²] and Ent(h) = E[h log(h / E h)].
  double rho_hat = 0.0;
  /// Minimizing function (unit uniform norm); the constant function when the
  /// linearized limit λ_1 won.
  Eigen::VectorXd minimizer;
  int restarts_used = 0;
  bool converged = false;
  /// True when the bound came from the constant-direction limit λ_1.
  bool from_linear_limit = false;
  double lambda1 = 0.0;
  /// Value of 2·D/Cov(f², log f²) at the witness (the covariance form of the
  /// functional); NaN when the witness is constant.
  double covariance_form_at_witness = 0.0;
};

/// Ratio D(f)/Ent(f²); +inf when Ent(f²) vanishes.
double log_sobolev_ratio(const SchreierGraph& g, const Eigen::VectorXd& f);
double entropy_of_square(const Eigen::VectorXd& f);
double covariance_of_square_and_log(const Eigen::VectorXd& f);

LogSobolevEstimate estimate_log_sobolev(const SchreierGraph& g, const Spectrum& s,
                                        LogSobolevOptions options = {});

struct HypercontractivityCheck {
  double p = 0.0;
  double lhs = 0.0;  ///< ‖H_t f‖_2
  double rhs = 0.0;  ///< ‖f‖_p
};

/// ‖H_t f‖_2 against ‖f‖_p with p = 1 + e^{−2ρt}.
HypercontractivityCheck hypercontractivity(const Spectrum& s, const Eigen::VectorXd& f,
                                           double t, double rho);

double lp_norm(const Eigen::VectorXd& f, double p);

}  // namespace noiselab
