#include <algorithm>
#include <cmath>
#include <limits>

#include "noiselab/errors.hpp"
#include "noiselab/parallel.hpp"
#include "noiselab/rng.hpp"
#include "noiselab/spectral.hpp"

namespace noiselab {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

// Below this Ent(f²)/E[f²] the ratio is dominated by cancellation; such
// points sit next to the constant direction, whose limit λ_1 is handled as a
// separate candidate.
constexpr double kEntropyFloor = 1e-13;

struct Evaluation {
  double value = kInf;
  Eigen::VectorXd gradient;
};

double dirichlet(const SchreierGraph& g, const Eigen::VectorXd& f, Eigen::VectorXd* af) {
  Eigen::VectorXd a = apply_generator_matrix(g, f);
  const double d = 2.0 * inner(f, a);
  if (af) *af = std::move(a);
  return d;
}

Evaluation evaluate(const SchreierGraph& g, const Eigen::VectorXd& f, bool with_gradient) {
  Evaluation e;
  Eigen::VectorXd af;
  const double d = dirichlet(g, f, &af);
  const double ent = entropy_of_square(f);
  const double mass = f.squaredNorm() / static_cast<double>(f.size());
  if (!(ent > kEntropyFloor * mass)) return e;
  e.value = d / ent;
  if (with_gradient) {
    const auto n = static_cast<double>(f.size());
    const Eigen::VectorXd grad_d = (4.0 / n) * af;
    Eigen::VectorXd grad_ent(f.size());
    for (Eigen::Index i = 0; i < f.size(); ++i) {
      const double sq = f[i] * f[i];
      grad_ent[i] = sq > 0.0 ? (2.0 / n) * f[i] * std::log(sq / mass) : 0.0;
    }
    e.gradient = (grad_d * ent - d * grad_ent) / (ent * ent);
  }
  return e;
}

Eigen::VectorXd to_sphere(Eigen::VectorXd f) {
  const double norm = std::sqrt(f.squaredNorm() / static_cast<double>(f.size()));
  return f / norm;
}

struct RunResult {
  double value = kInf;
  Eigen::VectorXd witness;
  bool converged = false;
};

// Projected gradient on the sphere E[f²] = 1 with Barzilai–Borwein trial
// steps and Armijo backtracking.
RunResult descend(const SchreierGraph& g, Eigen::VectorXd f, const LogSobolevOptions& opt) {
  const auto n = static_cast<double>(f.size());
  f = to_sphere(std::move(f));
  Evaluation cur = evaluate(g, f, true);
  RunResult run;
  if (!std::isfinite(cur.value)) return run;

  auto project = [&](const Eigen::VectorXd& grad, const Eigen::VectorXd& at) {
    return Eigen::VectorXd(grad - (grad.dot(at) / at.dot(at)) * at);
  };

  Eigen::VectorXd grad = project(cur.gradient, f);
  double step = n;  // gradient entries scale like 1/n on this sphere
  int stalls = 0;
  for (int iter = 0; iter < opt.max_iters; ++iter) {
    const double gnorm2 = grad.squaredNorm();
    if (gnorm2 * n * n < opt.tol * opt.tol) {
      run.converged = true;
      break;
    }
    double trial = step;
    Eigen::VectorXd next;
    Evaluation cand;
    bool accepted = false;
    for (int bt = 0; bt < 60; ++bt) {
      next = to_sphere(f - trial * grad);
      cand = evaluate(g, next, true);
      if (cand.value <= cur.value - 1e-4 * trial * gnorm2) {
        accepted = true;
        break;
      }
      trial *= 0.5;
    }
    if (!accepted) {
      // No descent left at machine precision.
      run.converged = true;
      break;
    }
    const Eigen::VectorXd next_grad = project(cand.gradient, next);
    const Eigen::VectorXd s = next - f;
    const Eigen::VectorXd y = next_grad - grad;
    const double sy = s.dot(y);
    step = sy > 0.0 ? std::clamp(s.squaredNorm() / sy, 1e-6 * n, 1e6 * n) : 2.0 * trial;

    const double improvement = cur.value - cand.value;
    f = std::move(next);
    cur = std::move(cand);
    grad = next_grad;
    if (improvement <= opt.tol * std::max(1.0, std::abs(cur.value))) {
      if (++stalls >= 5) {
        run.converged = true;
        break;
      }
    } else {
      stalls = 0;
    }
  }
  run.value = cur.value;
  run.witness = std::move(f);
  return run;
}

}  // namespace

double entropy_of_square(const Eigen::VectorXd& f) {
  const auto n = static_cast<double>(f.size());
  const double mass = f.squaredNorm() / n;
  if (mass <= 0.0) return 0.0;
  double acc = 0.0;
  for (Eigen::Index i = 0; i < f.size(); ++i) {
    const double sq = f[i] * f[i];
    if (sq > 0.0) acc += sq * std::log(sq / mass);
  }
  return acc / n;
}

double covariance_of_square_and_log(const Eigen::VectorXd& f) {
  const auto n = static_cast<double>(f.size());
  double e_sq = 0.0, e_log = 0.0, e_prod = 0.0;
  for (Eigen::Index i = 0; i < f.size(); ++i) {
    const double sq = f[i] * f[i];
    if (sq <= 0.0) return kInf;  // log 0
    const double l = std::log(sq);
    e_sq += sq;
    e_log += l;
    e_prod += sq * l;
  }
  return e_prod / n - (e_sq / n) * (e_log / n);
}

double log_sobolev_ratio(const SchreierGraph& g, const Eigen::VectorXd& f) {
  require(static_cast<std::size_t>(f.size()) == g.size(), ErrorCode::invalid_argument,
          "function size does not match the graph");
  const double ent = entropy_of_square(f);
  if (!(ent > 0.0)) return kInf;
  return dirichlet(g, f, nullptr) / ent;
}

LogSobolevEstimate estimate_log_sobolev(const SchreierGraph& g, const Spectrum& s,
                                        LogSobolevOptions options) {
  require(g.size() >= 2, ErrorCode::invalid_argument,
          "log-Sobolev estimation needs at least two states");
  require(s.size() == g.size(), ErrorCode::invalid_argument,
          "spectrum does not belong to this graph");
  require(options.restarts >= 0 && options.max_iters >= 1 && options.tol > 0.0,
          ErrorCode::invalid_argument, "invalid log-Sobolev options");

  const auto n = static_cast<Eigen::Index>(g.size());
  const std::size_t runs = static_cast<std::size_t>(options.restarts) + 1;
  std::vector<RunResult> results(runs);

  parallel_for(runs, options.threads, [&](std::size_t begin, std::size_t end) {
    for (std::size_t r = begin; r < end; ++r) {
      Eigen::VectorXd start(n);
      if (r == 0) {
        start = s.vector(1);
      } else {
        Stream rng(options.seed, r);
        const double scale = std::exp(std::log(0.05) + rng.uniform() * std::log(60.0));
        for (Eigen::Index i = 0; i < n; ++i) start[i] = 1.0 + scale * rng.normal();
      }
      results[r] = descend(g, std::move(start), options);
    }
  });

  LogSobolevEstimate est;
  est.lambda1 = s.gap();
  est.restarts_used = static_cast<int>(runs);
  std::size_t best = runs;
  for (std::size_t r = 0; r < runs; ++r)
    if (std::isfinite(results[r].value) &&
        (best == runs || results[r].value < results[best].value))
      best = r;

  if (best == runs || results[best].value >= est.lambda1) {
    est.rho_hat = est.lambda1;
    est.from_linear_limit = true;
    est.minimizer = Eigen::VectorXd::Ones(n);
    est.converged = true;
    est.covariance_form_at_witness = std::numeric_limits<double>::quiet_NaN();
  } else {
    est.rho_hat = results[best].value;
    est.minimizer = results[best].witness;
    est.converged = results[best].converged;
    const double cov = covariance_of_square_and_log(est.minimizer);
    est.covariance_form_at_witness =
        std::isfinite(cov) && cov > 0.0 ? 2.0 * dirichlet(g, est.minimizer, nullptr) / cov
                                        : std::numeric_limits<double>::quiet_NaN();
  }
  return est;
}

}  // namespace noiselab
