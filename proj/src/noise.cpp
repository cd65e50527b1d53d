#include "noiselab/noise.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <numbers>
#include <tuple>

#include "noiselab/errors.hpp"
#include "noiselab/parallel.hpp"

namespace noiselab {

namespace {

void check_size(const Spectrum& s, const Eigen::VectorXd& f) {
  require(static_cast<std::size_t>(f.size()) == s.size(), ErrorCode::invalid_argument,
          "function size does not match the spectrum");
}

// Coefficients of f − E[f]; ψ_j ⊥ 1 for j ≥ 1, and a constant f maps to exact zeros.
Eigen::VectorXd centered_coefficients(const Spectrum& s, const Eigen::VectorXd& f) {
  return s.coefficients(f.array() - f.mean());
}

bool close(double a, double b, double tol) {
  return std::abs(a - b) <= tol * std::max({1.0, std::abs(a), std::abs(b)});
}

}  // namespace

double exact_covariance(const Spectrum& s, const Eigen::VectorXd& f, double t) {
  check_size(s, f);
  require(t >= 0.0, ErrorCode::invalid_argument, "time must be nonnegative");
  const Eigen::VectorXd c = centered_coefficients(s, f);
  double acc = 0.0;
  for (std::size_t j = 1; j < s.size(); ++j) {
    const double w = c[static_cast<Eigen::Index>(j)];
    acc += std::exp(-s.eigenvalue(j) * t) * w * w;
  }
  return acc;
}

double exact_covariance(const Spectrum& s, const BooleanFunction& f, double t) {
  return exact_covariance(s, f.as_vector(), t);
}

double low_frequency_weight(const Spectrum& s, const Eigen::VectorXd& f, double lambda) {
  check_size(s, f);
  require(lambda > 0.0, ErrorCode::invalid_argument, "cutoff must be positive");
  const Eigen::VectorXd c = centered_coefficients(s, f);
  double acc = 0.0;
  for (std::size_t j = 1; j < s.size() && s.eigenvalue(j) < lambda; ++j) {
    const double w = c[static_cast<Eigen::Index>(j)];
    acc += w * w;
  }
  return acc;
}

double low_frequency_weight(const Spectrum& s, const BooleanFunction& f, double lambda) {
  return low_frequency_weight(s, f.as_vector(), lambda);
}

void BoundParams::validate() const {
  require(r > 0.0 && r < 1.0, ErrorCode::invalid_argument, "r must lie in (0,1)");
  require(lambda > 0.0 && std::isfinite(lambda), ErrorCode::invalid_argument,
          "Lambda must be positive");
  require(T > 0.0 && std::isfinite(T), ErrorCode::invalid_argument, "T must be positive");
}

BoundReport bks_bound(double lambda1, double rho, double influence_sq_mean, double variance,
                      const BoundParams& p) {
  p.validate();
  require(lambda1 > 0.0, ErrorCode::invalid_argument, "lambda1 must be positive");
  require(rho > 0.0, ErrorCode::invalid_argument, "rho must be positive");
  require(influence_sq_mean >= 0.0 && influence_sq_mean <= 1.0, ErrorCode::invalid_argument,
          "mean squared influence must lie in [0,1]");
  require(variance >= 0.0 && variance <= 0.25 + 1e-15, ErrorCode::invalid_argument,
          "variance must lie in [0,1/4]");
  BoundReport rep;
  rep.params = p;
  rep.rhs_low_freq_term = std::exp(-p.lambda * std::log(p.r) / rho) / (2.0 * lambda1) *
                          std::pow(influence_sq_mean, 1.0 / (1.0 + p.r));
  rep.rhs_tail_term = variance * std::exp(-p.lambda * p.T);
  rep.rhs = rep.rhs_low_freq_term + rep.rhs_tail_term;
  return rep;
}

namespace {

struct BoundInputs {
  double lambda1;
  double influence_sq_mean;
  double variance;
  Eigen::VectorXd coefficients;
};

BoundInputs prepare(const Spectrum& s, const SchreierGraph& g, const BooleanFunction& f) {
  require(f.size() == g.size() && s.size() == g.size(), ErrorCode::invalid_argument,
          "graph, spectrum and function sizes differ");
  require(g.size() >= 2, ErrorCode::invalid_argument, "the bound needs at least two states");
  const InfluenceProfile prof = influence_profile(g, f);
  return {s.gap(), prof.sum_of_squares / static_cast<double>(g.degree()),
          mean_variance(f).variance, centered_coefficients(s, f.as_vector())};
}

BoundReport evaluate(const Spectrum& s, const BoundInputs& in, double rho,
                     const BoundParams& p) {
  BoundReport rep = bks_bound(in.lambda1, rho, in.influence_sq_mean, in.variance, p);
  double lhs = 0.0;
  for (std::size_t j = 1; j < s.size(); ++j) {
    const double w = in.coefficients[static_cast<Eigen::Index>(j)];
    lhs += std::exp(-s.eigenvalue(j) * p.T) * w * w;
  }
  rep.lhs = lhs;
  rep.slack = rep.rhs - lhs;
  return rep;
}

}  // namespace

BoundReport evaluate_bound(const Spectrum& s, const SchreierGraph& g,
                              const BooleanFunction& f, double rho, const BoundParams& p) {
  return evaluate(s, prepare(s, g, f), rho, p);
}

BoundGrid default_bound_grid(double lambda1, std::vector<double> T) {
  BoundGrid grid;
  for (int i = 1; i <= 19; ++i) grid.r.push_back(0.05 * i);
  for (int k = -3; k <= 6; ++k) grid.lambda.push_back(std::ldexp(lambda1, k));
  grid.T = std::move(T);
  return grid;
}

OptimizedBound optimize_bound(const Spectrum& s, const SchreierGraph& g,
                              const BooleanFunction& f, double rho, const BoundGrid& grid,
                              unsigned threads) {
  require(!grid.r.empty() && !grid.lambda.empty() && !grid.T.empty(),
          ErrorCode::invalid_argument, "bound grid is empty");
  const BoundInputs in = prepare(s, g, f);
  const std::size_t nr = grid.r.size(), nl = grid.lambda.size(), nt = grid.T.size();
  const std::size_t total = nr * nl * nt;
  std::vector<BoundReport> reports(total);
  parallel_for(total, threads, [&](std::size_t begin, std::size_t end) {
    for (std::size_t k = begin; k < end; ++k) {
      const BoundParams p{grid.r[k / (nl * nt)], grid.lambda[(k / nt) % nl], grid.T[k % nt]};
      reports[k] = evaluate(s, in, rho, p);
    }
  });

  auto key = [](const BoundReport& r) {
    return std::make_tuple(r.rhs, r.params.r, r.params.lambda, r.params.T);
  };
  std::size_t best = 0;
  for (std::size_t k = 1; k < total; ++k)
    if (key(reports[k]) < key(reports[best])) best = k;
  return {reports[best], total};
}

EigenspaceIdentityReport check_eigenspace_identity(const Spectrum& s, const SchreierGraph& g,
                                                   const Eigen::VectorXd& f, double tol) {
  check_size(s, f);
  require(s.size() == g.size(), ErrorCode::invalid_argument,
          "spectrum does not belong to this graph");
  const Eigen::VectorXd c = centered_coefficients(s, f);
  const auto degree = static_cast<double>(g.degree());

  // P(i, u) = ⟨L_u f, ψ_i⟩
  Eigen::MatrixXd diffs(f.size(), static_cast<Eigen::Index>(g.degree()));
  for (std::size_t u = 0; u < g.degree(); ++u)
    diffs.col(static_cast<Eigen::Index>(u)) = apply_difference(g, f, u);
  const Eigen::MatrixXd proj =
      s.eigenvectors().transpose() * diffs / static_cast<double>(f.size());

  EigenspaceIdentityReport rep;
  rep.tolerance = tol;
  for (std::size_t k = 0; k < s.eigenspaces().size(); ++k) {
    const Eigenspace& space = s.eigenspaces()[k];
    EigenspaceIdentityRow row;
    row.group = k;
    row.eigenvalue = space.eigenvalue;
    row.dimension = space.members.size();
    for (std::size_t j : space.members) {
      const auto i = static_cast<Eigen::Index>(j);
      row.lhs += 2.0 * s.eigenvalue(j) * degree * c[i] * c[i];
      row.rhs += proj.row(i).squaredNorm();
    }
    row.abs_error = std::abs(row.lhs - row.rhs);
    row.pass = close(row.lhs, row.rhs, tol);
    rep.pass = rep.pass && row.pass;
    rep.rows.push_back(row);
  }
  return rep;
}

PerVectorIdentity per_vector_identity(const SchreierGraph& g, const Eigen::VectorXd& f,
                                      const Eigen::VectorXd& psi, double tol) {
  require(static_cast<std::size_t>(f.size()) == g.size() && psi.size() == f.size(),
          ErrorCode::invalid_argument, "vector sizes do not match the graph");
  PerVectorIdentity out;
  out.norm = inner(psi, psi);
  require(out.norm > 0.0, ErrorCode::invalid_argument, "psi must be nonzero");
  const Eigen::VectorXd qpsi = apply_generator_matrix(g, psi);
  out.eigenvalue = inner(psi, qpsi) / out.norm;
  out.eigen_residual = std::sqrt(inner(qpsi - out.eigenvalue * psi, qpsi - out.eigenvalue * psi));
  out.coefficient = inner(f, psi);
  for (std::size_t u = 0; u < g.degree(); ++u) {
    const double p = inner(apply_difference(g, f, u), psi);
    out.projections.push_back(p);
    out.rhs += p * p;
  }
  out.lhs = 2.0 * out.eigenvalue * static_cast<double>(g.degree()) * out.coefficient *
            out.coefficient;
  out.equal = close(out.lhs, out.rhs, tol);
  return out;
}

std::vector<Character> hypercube_characters(const SchreierGraph& g) {
  const StateSpace& states = g.states();
  const bool cube = states.tag().family == Family::hypercube ||
                    (states.tag().family == Family::torus && states.tag().first == 2);
  require(cube, ErrorCode::invalid_argument, "parity characters need torus(2,n) or hypercube(n)");
  const int n = states.word_length();
  require(n <= 16, ErrorCode::size_limit, "too many characters");
  // With coordinate 1 least significant, the state index is the word itself.
  std::vector<Character> out;
  const std::uint32_t count = 1u << n;
  for (std::uint32_t mask = 0; mask < count; ++mask) {
    Character c;
    c.subset = mask;
    c.eigenvalue = 2.0 * std::popcount(mask) / n;
    c.values.resize(count);
    for (std::uint32_t w = 0; w < count; ++w)
      c.values[w] = std::popcount(mask & w) % 2 ? -1.0 : 1.0;
    out.push_back(std::move(c));
  }
  return out;
}

SensitivityProfile sensitivity_profile(const Spectrum& s, const BooleanFunction& f, double T,
                                       const std::vector<double>& epsilons,
                                       const std::vector<double>& ks) {
  require(T > 0.0, ErrorCode::invalid_argument, "T must be positive");
  SensitivityProfile prof;
  prof.T = T;
  const Eigen::VectorXd v = f.as_vector();
  for (double eps : epsilons) {
    require(eps >= 0.0, ErrorCode::invalid_argument, "epsilon must be nonnegative");
    prof.rows.push_back({eps, eps * T, exact_covariance(s, v, eps * T)});
  }
  for (double k : ks) {
    require(k > 0.0, ErrorCode::invalid_argument, "k must be positive");
    prof.diagnostics.push_back({k, low_frequency_weight(s, v, k / T)});
  }
  return prof;
}

std::string to_string(RhoSource source) {
  switch (source) {
    case RhoSource::user: return "user";
    case RhoSource::family_bound: return "family_bound";
    case RhoSource::numerical: return "numerical";
  }
  return "?";
}

std::optional<double> family_rho_bound(const SchreierGraph& g) {
  const FamilyTag& tag = g.states().tag();
  double m = 0.0, n = 0.0;
  if (tag.family == Family::torus) {
    m = tag.first;
    n = tag.second;
  } else if (tag.family == Family::hypercube) {
    m = 2.0;
    n = tag.first;
  } else {
    return std::nullopt;
  }
  return 4.0 * std::numbers::pi * std::numbers::pi / (5.0 * m * m * n);
}

RhoChoice resolve_rho(const SchreierGraph& g, const Spectrum& s, std::optional<double> user,
                      bool use_family_bound, LogSobolevOptions options) {
  if (user) {
    require(*user > 0.0, ErrorCode::invalid_argument, "rho must be positive");
    return {*user, RhoSource::user, std::nullopt};
  }
  if (use_family_bound) {
    if (auto b = family_rho_bound(g)) return {*b, RhoSource::family_bound, std::nullopt};
  }
  LogSobolevEstimate est = estimate_log_sobolev(g, s, options);
  const double rho = est.rho_hat;
  return {rho, RhoSource::numerical, std::move(est)};
}

}  // namespace noiselab
