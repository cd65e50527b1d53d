#pragma once

#include <optional>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "noiselab/boolean.hpp"
#include "noiselab/graph.hpp"
#include "noiselab/spectral.hpp"

namespace noiselab {

/// Cov(f(X_0), f(X_t)) = Σ_{j≥1} e^{−λ_j t} \hat f(j)².
double exact_covariance(const Spectrum& s, const Eigen::VectorXd& f, double t);
double exact_covariance(const Spectrum& s, const BooleanFunction& f, double t);

/// Σ_{j≥1, λ_j < Λ} \hat f(j)² (strict cutoff).
double low_frequency_weight(const Spectrum& s, const Eigen::VectorXd& f, double lambda);
double low_frequency_weight(const Spectrum& s, const BooleanFunction& f, double lambda);

struct BoundParams {
  double r = 0.5;
  double lambda = 1.0;
  double T = 1.0;

  /// Throws invalid_argument unless r ∈ (0,1), Λ > 0, T > 0.
  void validate() const;
};

struct BoundReport {
  BoundParams params;
  double lhs = 0.0;
  double rhs_low_freq_term = 0.0;
  double rhs_tail_term = 0.0;
  double rhs = 0.0;
  double slack = 0.0;
};

/// Right-hand side only; lhs and slack are left at zero.
BoundReport bks_bound(double lambda1, double rho, double influence_sq_mean, double variance,
                      const BoundParams& p);

BoundReport evaluate_bound(const Spectrum& s, const SchreierGraph& g,
                              const BooleanFunction& f, double rho, const BoundParams& p);

struct BoundGrid {
  std::vector<double> r;
  std::vector<double> lambda;
  std::vector<double> T;
};

/// r ∈ {0.05, 0.10, …, 0.95} and Λ = λ_1·2^k, k = −3..6.
BoundGrid default_bound_grid(double lambda1, std::vector<double> T);

struct OptimizedBound {
  BoundReport best;
  std::size_t evaluated = 0;
};

/// Grid argmin of rhs; ties go to the lexicographically smallest (r, Λ, T).
OptimizedBound optimize_bound(const Spectrum& s, const SchreierGraph& g,
                              const BooleanFunction& f, double rho, const BoundGrid& grid,
                              unsigned threads = 1);

// ---------------------------------------------------------------------------
// Eigenspace identity: Σ_{i∈Ψ} 2λ|U| \hat f(i)² = Σ_{i∈Ψ} Σ_u ⟨L_u f, ψ_i⟩².

struct EigenspaceIdentityRow {
  std::size_t group = 0;
  double eigenvalue = 0.0;
  std::size_t dimension = 0;
  double lhs = 0.0;
  double rhs = 0.0;
  double abs_error = 0.0;
  bool pass = true;
};

struct EigenspaceIdentityReport {
  std::vector<EigenspaceIdentityRow> rows;
  double tolerance = 1e-8;
  bool pass = true;
};

/// Pass means |lhs − rhs| ≤ tol·max(1, |lhs|, |rhs|).
EigenspaceIdentityReport check_eigenspace_identity(const Spectrum& s, const SchreierGraph& g,
                                                   const Eigen::VectorXd& f,
                                                   double tol = 1e-8);

struct PerVectorIdentity {
  double eigenvalue = 0.0;      ///< Rayleigh quotient ⟨ψ, −Qψ⟩ / ⟨ψ, ψ⟩
  double eigen_residual = 0.0;  ///< ‖−Qψ − λψ‖_2 under the uniform measure
  double norm = 0.0;            ///< ⟨ψ, ψ⟩
  double coefficient = 0.0;     ///< ⟨f, ψ⟩
  std::vector<double> projections;  ///< ⟨L_u f, ψ⟩ per generator
  double lhs = 0.0;             ///< 2λ|U|⟨f, ψ⟩²
  double rhs = 0.0;             ///< Σ_u ⟨L_u f, ψ⟩²
  bool equal = false;           ///< |lhs − rhs| ≤ tol·max(1, |lhs|, |rhs|)
};

/// Per-vector form of the identity for an explicit eigenvector ψ.
PerVectorIdentity per_vector_identity(const SchreierGraph& g, const Eigen::VectorXd& f,
                                      const Eigen::VectorXd& psi, double tol = 1e-8);

struct Character {
  std::uint32_t subset = 0;  ///< bit k−1 set iff coordinate k is in the subset
  double eigenvalue = 0.0;   ///< 2|S|/n
  Eigen::VectorXd values;    ///< (−1)^{Σ_{k∈S} w_k}
};

/// Parity characters of torus(2, n) / hypercube(n), ordered by subset mask.
std::vector<Character> hypercube_characters(const SchreierGraph& g);

// ---------------------------------------------------------------------------
// Sensitivity diagnostics

struct SensitivityRow {
  double epsilon = 0.0;
  double t = 0.0;
  double cov = 0.0;
};

struct DiagnosticRow {
  double k = 0.0;
  double low_freq_weight = 0.0;  ///< Σ_{λ_i < k/T} \hat f(i)²
};

struct SensitivityProfile {
  double T = 0.0;
  std::vector<SensitivityRow> rows;
  std::vector<DiagnosticRow> diagnostics;
};

SensitivityProfile sensitivity_profile(const Spectrum& s, const BooleanFunction& f, double T,
                                       const std::vector<double>& epsilons,
                                       const std::vector<double>& ks = {});

// ---------------------------------------------------------------------------
// ρ selection

enum class RhoSource { user, family_bound, numerical };

std::string to_string(RhoSource source);

struct RhoChoice {
  double rho = 0.0;
  RhoSource source = RhoSource::numerical;
  std::optional<LogSobolevEstimate> estimate;
};

/// 4π²/(5m²n) for torus(m, n) and hypercube(n) (m = 2); nullopt otherwise.
std::optional<double> family_rho_bound(const SchreierGraph& g);

/// user value > family closed-form bound > numerical estimate.
RhoChoice resolve_rho(const SchreierGraph& g, const Spectrum& s, std::optional<double> user,
                      bool use_family_bound = true, LogSobolevOptions options = {});

}  // namespace noiselab
