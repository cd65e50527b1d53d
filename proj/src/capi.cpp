#include "noiselab/noiselab.h"

#include <cmath>
#include <cstring>
#include <new>
#include <string>

#include "noiselab/boolean.hpp"
#include "noiselab/errors.hpp"
#include "noiselab/exclusion.hpp"
#include "noiselab/graph.hpp"
#include "noiselab/io.hpp"
#include "noiselab/noise.hpp"
#include "noiselab/simulate.hpp"
#include "noiselab/specs.hpp"
#include "noiselab/spectral.hpp"

namespace nl = noiselab;

struct nl_graph {
  nl::SchreierGraph g;
};
struct nl_spectrum {
  nl::Spectrum s;
};
struct nl_function {
  nl::BooleanFunction f;
};
struct nl_layered {
  nl::LayeredWalk lw;
};

namespace {

thread_local std::string last_error;

nl_status status_of(nl::ErrorCode code) {
  switch (code) {
    case nl::ErrorCode::invalid_argument: return NL_ERR_INVALID_ARGUMENT;
    case nl::ErrorCode::validation: return NL_ERR_VALIDATION;
    case nl::ErrorCode::size_limit: return NL_ERR_SIZE_LIMIT;
    case nl::ErrorCode::numeric: return NL_ERR_NUMERIC;
    case nl::ErrorCode::io: return NL_ERR_IO;
  }
  return NL_ERR_INTERNAL;
}

nl_status fail(nl_status status, const std::string& message) {
  last_error = message;
  return status;
}

struct BufferTooSmall {};

template <class Body>
nl_status guard(Body&& body) {
  try {
    last_error.clear();
    body();
    return NL_OK;
  } catch (const BufferTooSmall&) {
    return fail(NL_ERR_BUFFER_TOO_SMALL, "output buffer too small");
  } catch (const nl::Error& e) {
    return fail(status_of(e.code()), e.what());
  } catch (const std::bad_alloc&) {
    return fail(NL_ERR_SIZE_LIMIT, "out of memory");
  } catch (const std::exception& e) {
    return fail(NL_ERR_INTERNAL, e.what());
  } catch (...) {
    return fail(NL_ERR_INTERNAL, "unknown error");
  }
}

void need(const void* p, const char* what) {
  nl::require(p != nullptr, nl::ErrorCode::invalid_argument, std::string(what) + " is NULL");
}

// Count-query pattern shared by every array output.
template <class T, class Fill>
void emit(T* out, std::size_t capacity, std::size_t* count, std::size_t length, Fill&& fill) {
  need(count, "count");
  *count = length;
  if (out == nullptr) return;
  if (capacity < length) throw BufferTooSmall{};
  for (std::size_t i = 0; i < length; ++i) out[i] = fill(i);
}

void emit_string(const std::string& s, char* buf, std::size_t capacity, std::size_t* count) {
  need(count, "count");
  *count = s.size() + 1;
  if (buf == nullptr) return;
  if (capacity < s.size() + 1) throw BufferTooSmall{};
  std::memcpy(buf, s.c_str(), s.size() + 1);
}

Eigen::VectorXd to_vector(const double* data, std::size_t size) {
  need(data, "vector");
  return Eigen::Map<const Eigen::VectorXd>(data, static_cast<Eigen::Index>(size));
}

nl::LogSobolevOptions ls_options(const nl_ls_options* o) {
  nl::LogSobolevOptions opt;
  if (o) {
    opt.restarts = o->restarts;
    opt.max_iters = o->max_iters;
    opt.tol = o->tol;
    opt.seed = o->seed;
    opt.threads = o->threads;
  }
  return opt;
}

nl_ls_estimate ls_estimate(const nl::LogSobolevEstimate& e) {
  return {e.rho_hat, e.lambda1, e.covariance_form_at_witness, e.restarts_used,
          e.converged ? 1 : 0, e.from_linear_limit ? 1 : 0};
}

nl_bound_report bound_report(const nl::BoundReport& r) {
  return {r.params.r, r.params.lambda, r.params.T, r.lhs, r.rhs_low_freq_term,
          r.rhs_tail_term, r.rhs, r.slack};
}

nl::SimConfig sim_config(const nl_sim_config* c) {
  need(c, "config");
  nl::SimConfig cfg;
  cfg.samples = c->samples;
  cfg.t = c->t;
  cfg.seed = c->seed;
  cfg.antithetic = c->antithetic != 0;
  cfg.jumps = c->exponential_gaps ? nl::JumpMode::exponential_gaps : nl::JumpMode::poisson;
  cfg.threads = c->threads;
  return cfg;
}

nl_cov_estimate cov_estimate(const nl::CovEstimate& e) {
  return {e.mean, e.std_error, e.samples, e.seed, e.product_mean, e.pooled_mean};
}

}  // namespace

extern "C" {

NL_API const char* nl_version(void) { return NOISELAB_VERSION; }

NL_API const char* nl_last_error(void) { return last_error.c_str(); }

NL_API const char* nl_status_name(nl_status status) {
  switch (status) {
    case NL_OK: return "ok";
    case NL_ERR_INVALID_ARGUMENT: return "invalid_argument";
    case NL_ERR_VALIDATION: return "validation";
    case NL_ERR_SIZE_LIMIT: return "size_limit";
    case NL_ERR_NUMERIC: return "numeric";
    case NL_ERR_IO: return "io";
    case NL_ERR_BUFFER_TOO_SMALL: return "buffer_too_small";
    case NL_ERR_INTERNAL: return "internal";
  }
  return "unknown";
}

// ---- graphs

NL_API nl_status nl_graph_from_spec(const char* spec, size_t max_states, nl_graph** out) {
  return guard([&] {
    need(spec, "spec");
    need(out, "out");
    *out = new nl_graph{nl::graph_from_spec(spec, max_states ? max_states : nl::kDefaultMaxStates)};
  });
}

NL_API nl_status nl_graph_custom(size_t size, size_t count, const uint32_t* images,
                                 int auto_close_inverses, int allow_disconnected,
                                 nl_graph** out) {
  return guard([&] {
    need(out, "out");
    if (count > 0) need(images, "images");
    std::vector<nl::Permutation> gens;
    for (std::size_t u = 0; u < count; ++u)
      gens.emplace_back(images + u * size, images + (u + 1) * size);
    nl::CustomOptions opts;
    opts.auto_close_inverses = auto_close_inverses != 0;
    opts.allow_disconnected = allow_disconnected != 0;
    *out = new nl_graph{nl::build_custom(size, std::move(gens), {}, opts)};
  });
}

NL_API void nl_graph_free(nl_graph* g) { delete g; }

NL_API size_t nl_graph_size(const nl_graph* g) { return g ? g->g.size() : 0; }

NL_API size_t nl_graph_degree(const nl_graph* g) { return g ? g->g.degree() : 0; }

NL_API nl_status nl_graph_describe(const nl_graph* g, char* buf, size_t capacity, size_t* count) {
  return guard([&] {
    need(g, "graph");
    emit_string(g->g.states().tag().describe(), buf, capacity, count);
  });
}

NL_API nl_status nl_graph_state_label(const nl_graph* g, uint32_t state, char* buf,
                                      size_t capacity, size_t* count) {
  return guard([&] {
    need(g, "graph");
    emit_string(g->g.states().label(state), buf, capacity, count);
  });
}

NL_API nl_status nl_graph_generator_label(const nl_graph* g, size_t u, char* buf,
                                          size_t capacity, size_t* count) {
  return guard([&] {
    need(g, "graph");
    nl::require(u < g->g.degree(), nl::ErrorCode::invalid_argument, "generator out of range");
    emit_string(g->g.generators()[u].label, buf, capacity, count);
  });
}

NL_API nl_status nl_graph_generator_image(const nl_graph* g, size_t u, uint32_t* out,
                                          size_t capacity, size_t* count) {
  return guard([&] {
    need(g, "graph");
    nl::require(u < g->g.degree(), nl::ErrorCode::invalid_argument, "generator out of range");
    const auto image = g->g.image(u);
    emit(out, capacity, count, image.size(), [&](std::size_t i) { return image[i]; });
  });
}

NL_API nl_status nl_graph_generator_inverse(const nl_graph* g, size_t u, int64_t* inverse) {
  return guard([&] {
    need(g, "graph");
    need(inverse, "inverse");
    nl::require(u < g->g.degree(), nl::ErrorCode::invalid_argument, "generator out of range");
    const auto inv = g->g.generators().inverse_of(u);
    *inverse = inv ? static_cast<int64_t>(*inv) : -1;
  });
}

NL_API nl_status nl_graph_to_json(const nl_graph* g, char* buf, size_t capacity, size_t* count) {
  return guard([&] {
    need(g, "graph");
    emit_string(nl::graph_to_json(g->g), buf, capacity, count);
  });
}

NL_API nl_status nl_graph_validate(const nl_graph* g, nl_validation* out) {
  return guard([&] {
    need(g, "graph");
    need(out, "out");
    const nl::ValidationReport r = nl::validate(g->g);
    *out = {r.inverse_closed, r.connected, r.regular, r.undirected, r.degree,
            r.failures.size()};
  });
}

NL_API nl_status nl_graph_validation_messages(const nl_graph* g, char* buf, size_t capacity,
                                              size_t* count) {
  return guard([&] {
    need(g, "graph");
    std::string text;
    for (const auto& f : nl::validate(g->g).failures) text += f + "\n";
    emit_string(text, buf, capacity, count);
  });
}

// ---- spectrum

NL_API nl_status nl_spectrum_decompose(const nl_graph* g, double grouping_tolerance,
                                       nl_spectrum** out) {
  return guard([&] {
    need(g, "graph");
    need(out, "out");
    std::optional<double> tol;
    if (grouping_tolerance > 0.0) tol = grouping_tolerance;
    *out = new nl_spectrum{nl::decompose(g->g, tol)};
  });
}

NL_API void nl_spectrum_free(nl_spectrum* s) { delete s; }

NL_API size_t nl_spectrum_size(const nl_spectrum* s) { return s ? s->s.size() : 0; }

NL_API double nl_spectrum_gap(const nl_spectrum* s) { return s ? s->s.gap() : NAN; }

NL_API double nl_spectrum_relaxation_time(const nl_spectrum* s) {
  return s ? s->s.relaxation_time() : NAN;
}

NL_API double nl_spectrum_grouping_tolerance(const nl_spectrum* s) {
  return s ? s->s.grouping_tolerance() : NAN;
}

NL_API nl_status nl_spectrum_eigenvalues(const nl_spectrum* s, double* out, size_t capacity,
                                         size_t* count) {
  return guard([&] {
    need(s, "spectrum");
    emit(out, capacity, count, s->s.size(), [&](std::size_t j) { return s->s.eigenvalue(j); });
  });
}

NL_API nl_status nl_spectrum_vector(const nl_spectrum* s, size_t j, double* out,
                                    size_t capacity, size_t* count) {
  return guard([&] {
    need(s, "spectrum");
    nl::require(j < s->s.size(), nl::ErrorCode::invalid_argument, "eigenvector out of range");
    const auto col = s->s.eigenvectors().col(static_cast<Eigen::Index>(j));
    emit(out, capacity, count, s->s.size(),
         [&](std::size_t i) { return col[static_cast<Eigen::Index>(i)]; });
  });
}

NL_API nl_status nl_spectrum_groups(const nl_spectrum* s, size_t* out, size_t capacity,
                                    size_t* count) {
  return guard([&] {
    need(s, "spectrum");
    emit(out, capacity, count, s->s.size(), [&](std::size_t j) { return s->s.group_of(j); });
  });
}

NL_API nl_status nl_spectrum_to_csv(const nl_spectrum* s, char* buf, size_t capacity,
                                    size_t* count) {
  return guard([&] {
    need(s, "spectrum");
    emit_string(nl::spectrum_to_csv(s->s), buf, capacity, count);
  });
}

NL_API nl_status nl_spectrum_to_json(const nl_spectrum* s, int with_vectors, char* buf,
                                     size_t capacity, size_t* count) {
  return guard([&] {
    need(s, "spectrum");
    emit_string(nl::spectrum_to_json(s->s, with_vectors != 0), buf, capacity, count);
  });
}

NL_API nl_status nl_rotation_check(const nl_spectrum* s, const nl_graph* g, size_t u,
                                   double tol, nl_rotation_row* rows, size_t capacity,
                                   size_t* count, int* all_pass) {
  return guard([&] {
    need(s, "spectrum");
    need(g, "graph");
    const nl::RotationReport r = nl::check_rotation_invariance(s->s, g->g, u, tol);
    emit(rows, capacity, count, r.eigenspaces.size(), [&](std::size_t k) {
      const auto& e = r.eigenspaces[k];
      return nl_rotation_row{e.group, e.eigenvalue, e.dimension, e.max_gram_error,
                             e.max_projection_residual, e.pass ? 1 : 0};
    });
    if (all_pass) *all_pass = r.pass ? 1 : 0;
  });
}

// ---- Boolean functions

NL_API nl_status nl_function_from_spec(const nl_graph* g, const char* spec, nl_function** out) {
  return guard([&] {
    need(g, "graph");
    need(spec, "spec");
    need(out, "out");
    *out = new nl_function{nl::function_from_spec(g->g, spec)};
  });
}

NL_API nl_status nl_function_from_values(const uint8_t* values, size_t size, const char* name,
                                         nl_function** out) {
  return guard([&] {
    need(values, "values");
    need(out, "out");
    *out = new nl_function{nl::BooleanFunction(std::vector<std::uint8_t>(values, values + size),
                                               name ? name : "custom")};
  });
}

NL_API void nl_function_free(nl_function* f) { delete f; }

NL_API size_t nl_function_size(const nl_function* f) { return f ? f->f.size() : 0; }

NL_API nl_status nl_function_name(const nl_function* f, char* buf, size_t capacity,
                                  size_t* count) {
  return guard([&] {
    need(f, "function");
    emit_string(f->f.name(), buf, capacity, count);
  });
}

NL_API nl_status nl_function_values(const nl_function* f, uint8_t* out, size_t capacity,
                                    size_t* count) {
  return guard([&] {
    need(f, "function");
    emit(out, capacity, count, f->f.size(), [&](std::size_t i) { return f->f[i]; });
  });
}

NL_API nl_status nl_function_to_json(const nl_function* f, char* buf, size_t capacity,
                                     size_t* count) {
  return guard([&] {
    need(f, "function");
    emit_string(nl::function_to_json(f->f), buf, capacity, count);
  });
}

NL_API nl_status nl_function_mean_variance(const nl_function* f, double* mean,
                                           double* variance) {
  return guard([&] {
    need(f, "function");
    const nl::MeanVariance mv = nl::mean_variance(f->f);
    if (mean) *mean = mv.mean;
    if (variance) *variance = mv.variance;
  });
}

NL_API nl_status nl_influence_profile(const nl_graph* g, const nl_function* f,
                                      uint64_t* counts, double* influences, size_t capacity,
                                      size_t* count, nl_influence_summary* summary) {
  return guard([&] {
    need(g, "graph");
    need(f, "function");
    const nl::InfluenceProfile p = nl::influence_profile(g->g, f->f);
    emit(counts, capacity, count, p.counts.size(),
         [&](std::size_t u) { return static_cast<uint64_t>(p.counts[u]); });
    emit(influences, capacity, count, p.per_generator.size(),
         [&](std::size_t u) { return p.per_generator[u]; });
    if (summary) *summary = {p.size, p.total, p.sum_of_squares};
  });
}

NL_API nl_status nl_fourier(const nl_spectrum* s, const nl_function* f, double* out,
                            size_t capacity, size_t* count) {
  return guard([&] {
    need(s, "spectrum");
    need(f, "function");
    const nl::FourierExpansion e = nl::fourier(s->s, f->f);
    emit(out, capacity, count, static_cast<std::size_t>(e.coefficients.size()),
         [&](std::size_t j) { return e.coefficients[static_cast<Eigen::Index>(j)]; });
  });
}

// ---- noise

NL_API nl_status nl_exact_covariance(const nl_spectrum* s, const nl_function* f, double t,
                                     double* out) {
  return guard([&] {
    need(s, "spectrum");
    need(f, "function");
    need(out, "out");
    *out = nl::exact_covariance(s->s, f->f, t);
  });
}

NL_API nl_status nl_low_frequency_weight(const nl_spectrum* s, const nl_function* f,
                                         double lambda, double* out) {
  return guard([&] {
    need(s, "spectrum");
    need(f, "function");
    need(out, "out");
    *out = nl::low_frequency_weight(s->s, f->f, lambda);
  });
}

NL_API nl_status nl_bks_bound(double lambda1, double rho, double influence_sq_mean,
                              double variance, double r, double lambda, double T,
                              nl_bound_report* out) {
  return guard([&] {
    need(out, "out");
    *out = bound_report(
        nl::bks_bound(lambda1, rho, influence_sq_mean, variance, nl::BoundParams{r, lambda, T}));
  });
}

NL_API nl_status nl_evaluate_bound(const nl_spectrum* s, const nl_graph* g,
                                   const nl_function* f, double rho, double r, double lambda,
                                   double T, nl_bound_report* out) {
  return guard([&] {
    need(s, "spectrum");
    need(g, "graph");
    need(f, "function");
    need(out, "out");
    *out = bound_report(nl::evaluate_bound(s->s, g->g, f->f, rho, {r, lambda, T}));
  });
}

NL_API nl_status nl_optimize_bound(const nl_spectrum* s, const nl_graph* g,
                                   const nl_function* f, double rho, const double* r,
                                   size_t r_count, const double* lambda, size_t lambda_count,
                                   const double* T, size_t T_count, unsigned threads,
                                   nl_bound_report* out, size_t* evaluated) {
  return guard([&] {
    need(s, "spectrum");
    need(g, "graph");
    need(f, "function");
    need(out, "out");
    need(T, "T grid");
    nl::BoundGrid grid = nl::default_bound_grid(s->s.gap(), std::vector<double>(T, T + T_count));
    if (r) grid.r.assign(r, r + r_count);
    if (lambda) grid.lambda.assign(lambda, lambda + lambda_count);
    const nl::OptimizedBound best = nl::optimize_bound(s->s, g->g, f->f, rho, grid, threads);
    *out = bound_report(best.best);
    if (evaluated) *evaluated = best.evaluated;
  });
}

NL_API nl_status nl_eigenspace_identity(const nl_spectrum* s, const nl_graph* g,
                                        const nl_function* f, double tol,
                                        nl_eigenspace_row* rows, size_t capacity,
                                        size_t* count, int* all_pass) {
  return guard([&] {
    need(s, "spectrum");
    need(g, "graph");
    need(f, "function");
    const nl::EigenspaceIdentityReport r =
        nl::check_eigenspace_identity(s->s, g->g, f->f.as_vector(), tol);
    emit(rows, capacity, count, r.rows.size(), [&](std::size_t k) {
      const auto& e = r.rows[k];
      return nl_eigenspace_row{e.group, e.eigenvalue, e.dimension, e.lhs,
                               e.rhs,   e.abs_error,  e.pass ? 1 : 0};
    });
    if (all_pass) *all_pass = r.pass ? 1 : 0;
  });
}

NL_API nl_status nl_per_vector_identity(const nl_graph* g, const nl_function* f,
                                        const double* psi, size_t psi_size, double tol,
                                        nl_per_vector* out, double* projections,
                                        size_t capacity, size_t* count) {
  return guard([&] {
    need(g, "graph");
    need(f, "function");
    need(out, "out");
    const nl::PerVectorIdentity r =
        nl::per_vector_identity(g->g, f->f.as_vector(), to_vector(psi, psi_size), tol);
    *out = {r.eigenvalue, r.eigen_residual, r.norm, r.coefficient, r.lhs, r.rhs,
            r.equal ? 1 : 0};
    if (count)
      emit(projections, capacity, count, r.projections.size(),
           [&](std::size_t u) { return r.projections[u]; });
  });
}

NL_API nl_status nl_hypercube_character(const nl_graph* g, uint32_t mask, double* values,
                                        size_t capacity, size_t* count, double* eigenvalue) {
  return guard([&] {
    need(g, "graph");
    const auto chars = nl::hypercube_characters(g->g);
    nl::require(mask < chars.size(), nl::ErrorCode::invalid_argument, "subset mask out of range");
    const nl::Character& c = chars[mask];
    emit(values, capacity, count, static_cast<std::size_t>(c.values.size()),
         [&](std::size_t i) { return c.values[static_cast<Eigen::Index>(i)]; });
    if (eigenvalue) *eigenvalue = c.eigenvalue;
  });
}

NL_API nl_status nl_sensitivity_profile(const nl_spectrum* s, const nl_function* f, double T,
                                        const double* epsilons, size_t epsilon_count,
                                        double* cov, const double* ks, size_t k_count,
                                        double* low_freq) {
  return guard([&] {
    need(s, "spectrum");
    need(f, "function");
    if (epsilon_count) {
      need(epsilons, "epsilons");
      need(cov, "cov");
    }
    if (k_count) {
      need(ks, "ks");
      need(low_freq, "low_freq");
    }
    const nl::SensitivityProfile p =
        nl::sensitivity_profile(s->s, f->f, T, std::vector<double>(epsilons, epsilons + epsilon_count),
                                std::vector<double>(ks, ks + k_count));
    for (std::size_t i = 0; i < epsilon_count; ++i) cov[i] = p.rows[i].cov;
    for (std::size_t i = 0; i < k_count; ++i) low_freq[i] = p.diagnostics[i].low_freq_weight;
  });
}

// ---- log-Sobolev

NL_API void nl_ls_options_default(nl_ls_options* out) {
  if (!out) return;
  const nl::LogSobolevOptions d;
  *out = {d.restarts, d.max_iters, d.tol, d.seed, d.threads};
}

NL_API nl_status nl_estimate_log_sobolev(const nl_graph* g, const nl_spectrum* s,
                                         const nl_ls_options* options, nl_ls_estimate* out,
                                         double* minimizer, size_t capacity, size_t* count) {
  return guard([&] {
    need(g, "graph");
    need(s, "spectrum");
    need(out, "out");
    const nl::LogSobolevEstimate e = nl::estimate_log_sobolev(g->g, s->s, ls_options(options));
    *out = ls_estimate(e);
    if (count)
      emit(minimizer, capacity, count, static_cast<std::size_t>(e.minimizer.size()),
           [&](std::size_t i) { return e.minimizer[static_cast<Eigen::Index>(i)]; });
  });
}

NL_API nl_status nl_log_sobolev_ratio(const nl_graph* g, const double* f, size_t size,
                                      double* out) {
  return guard([&] {
    need(g, "graph");
    need(out, "out");
    *out = nl::log_sobolev_ratio(g->g, to_vector(f, size));
  });
}

NL_API nl_status nl_resolve_rho(const nl_graph* g, const nl_spectrum* s,
                                const double* user_rho, int use_family_bound,
                                const nl_ls_options* options, nl_rho_choice* out) {
  return guard([&] {
    need(g, "graph");
    need(s, "spectrum");
    need(out, "out");
    std::optional<double> user;
    if (user_rho) user = *user_rho;
    const nl::RhoChoice c =
        nl::resolve_rho(g->g, s->s, user, use_family_bound != 0, ls_options(options));
    *out = {};
    out->rho = c.rho;
    out->source = c.source == nl::RhoSource::user           ? NL_RHO_USER
                  : c.source == nl::RhoSource::family_bound ? NL_RHO_FAMILY_BOUND
                                                            : NL_RHO_NUMERICAL;
    out->has_estimate = c.estimate.has_value() ? 1 : 0;
    if (c.estimate) out->estimate = ls_estimate(*c.estimate);
  });
}

NL_API nl_status nl_family_rho_bound(const nl_graph* g, double* out) {
  return guard([&] {
    need(g, "graph");
    need(out, "out");
    const auto b = nl::family_rho_bound(g->g);
    nl::require(b.has_value(), nl::ErrorCode::invalid_argument,
                "no closed-form log-Sobolev bound for this family");
    *out = *b;
  });
}

NL_API nl_status nl_hypercontractivity(const nl_spectrum* s, const double* f, size_t size,
                                       double t, double rho, double* p, double* lhs,
                                       double* rhs) {
  return guard([&] {
    need(s, "spectrum");
    const nl::HypercontractivityCheck c = nl::hypercontractivity(s->s, to_vector(f, size), t, rho);
    if (p) *p = c.p;
    if (lhs) *lhs = c.lhs;
    if (rhs) *rhs = c.rhs;
  });
}

// ---- exclusion

NL_API nl_status nl_layered_build(int n, unsigned threads, double max_work, nl_layered** out) {
  return guard([&] {
    need(out, "out");
    nl::LayeredOptions opts;
    opts.threads = threads;
    if (max_work > 0.0) opts.max_work = max_work;
    *out = new nl_layered{nl::build_layered(n, opts)};
  });
}

NL_API void nl_layered_free(nl_layered* lw) { delete lw; }

NL_API int nl_layered_n(const nl_layered* lw) { return lw ? lw->lw.n() : 0; }

NL_API nl_status nl_layered_levels(const nl_layered* lw, const nl_function* f,
                                   nl_level_row* rows, size_t capacity, size_t* count) {
  return guard([&] {
    need(lw, "layered walk");
    need(f, "function");
    const auto stats = nl::level_stats(lw->lw, f->f);
    emit(rows, capacity, count, stats.size(), [&](std::size_t k) {
      return nl_level_row{stats[k].m, stats[k].p, stats[k].mean, stats[k].variance};
    });
  });
}

NL_API nl_status nl_layered_split(const nl_layered* lw, const nl_function* f, double t,
                                  nl_split* out) {
  return guard([&] {
    need(lw, "layered walk");
    need(f, "function");
    need(out, "out");
    const nl::CovarianceSplit c = nl::covariance_split(lw->lw, f->f, t);
    *out = {c.t, c.within, c.between, c.total};
  });
}

NL_API nl_status nl_layered_direct_covariance(const nl_layered* lw, const nl_function* f,
                                              double t, double* out) {
  return guard([&] {
    need(lw, "layered walk");
    need(f, "function");
    need(out, "out");
    *out = nl::exclusion_covariance(lw->lw, f->f, t);
  });
}

NL_API nl_status nl_layered_level_mean_variance(const nl_layered* lw, const nl_function* f,
                                                double* out) {
  return guard([&] {
    need(lw, "layered walk");
    need(f, "function");
    need(out, "out");
    *out = nl::level_mean_variance(lw->lw, f->f);
  });
}

NL_API nl_status nl_slice_influences(const nl_layered* lw, const nl_function* f,
                                     nl_slice_influence_row* rows, size_t capacity,
                                     size_t* count, nl_transposition_influence* totals,
                                     size_t totals_capacity, size_t* totals_count,
                                     double* max_mixture_error) {
  return guard([&] {
    need(lw, "layered walk");
    need(f, "function");
    const nl::SliceInfluenceTable t = nl::slice_influences(lw->lw, f->f);
    const std::size_t pairs = t.pairs.size();
    if (count)
      emit(rows, capacity, count, t.per_level.size() * pairs, [&](std::size_t k) {
        const std::size_t m = k / pairs, u = k % pairs;
        return nl_slice_influence_row{static_cast<int>(m), t.pairs[u].first, t.pairs[u].second,
                                      t.per_level[m][u]};
      });
    if (totals_count)
      emit(totals, totals_capacity, totals_count, pairs, [&](std::size_t u) {
        return nl_transposition_influence{t.pairs[u].first, t.pairs[u].second, t.mixture[u],
                                          t.direct[u]};
      });
    if (max_mixture_error) *max_mixture_error = t.max_mixture_error;
  });
}

NL_API nl_status nl_coordinate_influences(const nl_layered* lw, const nl_function* f,
                                          double* out, size_t capacity, size_t* count) {
  return guard([&] {
    need(lw, "layered walk");
    need(f, "function");
    const auto inf = nl::coordinate_influences(lw->lw.n(), f->f);
    emit(out, capacity, count, inf.size(), [&](std::size_t i) { return inf[i]; });
  });
}

NL_API nl_status nl_good_slice_set(const nl_layered* lw, const nl_function* f, double alpha,
                                   nl_good_slices* out, int* members, size_t capacity,
                                   size_t* count, double* level_sums) {
  return guard([&] {
    need(lw, "layered walk");
    need(f, "function");
    need(out, "out");
    const nl::GoodSliceSet g = nl::good_slice_set(lw->lw, f->f, alpha);
    *out = {g.alpha,       g.sum_sq_influence, g.sum_influence,  g.threshold,
            g.probability, g.bound,            g.bound_sum_form, g.bound_holds ? 1 : 0,
            g.transposition_sum_sq, g.transposition_limit};
    if (count)
      emit(members, capacity, count, g.member_levels.size(),
           [&](std::size_t k) { return g.member_levels[k]; });
    if (level_sums)
      for (std::size_t m = 0; m < g.level_sums.size(); ++m) level_sums[m] = g.level_sums[m];
  });
}

NL_API nl_status nl_slice_bound_check(const nl_layered* lw, const nl_function* f, int m,
                                      double C, double epsilon, double delta, double alpha,
                                      const nl_ls_options* options, nl_slice_bound* out) {
  return guard([&] {
    need(lw, "layered walk");
    need(f, "function");
    need(out, "out");
    const nl::SliceBoundCheck r =
        nl::slice_bound_check(lw->lw, f->f, m, C, epsilon, delta, alpha, ls_options(options));
    *out = {r.m,          r.applicable ? 1 : 0,
            r.C,          r.epsilon,
            r.delta,      r.lambda1,
            r.rho,        r.nominal_lambda1,
            r.nominal_rho_order, r.slice_influence_sq,
            r.influence_hypothesis ? 1 : 0, r.lhs,
            r.rhs,        r.best_r,
            r.closed_form, r.alpha,
            r.chain_cov,  r.chain_middle,
            r.chain_upper, r.holds ? 1 : 0};
  });
}

// ---- simulation

NL_API void nl_sim_config_default(nl_sim_config* out) {
  if (!out) return;
  const nl::SimConfig d;
  *out = {d.samples, d.t, d.seed, d.antithetic ? 1 : 0, 0, d.threads};
}

NL_API nl_status nl_empirical_covariance(const nl_graph* g, const nl_function* f,
                                         const nl_sim_config* cfg, nl_cov_estimate* out) {
  return guard([&] {
    need(g, "graph");
    need(f, "function");
    need(out, "out");
    *out = cov_estimate(nl::empirical_covariance(g->g, f->f, sim_config(cfg)));
  });
}

NL_API nl_status nl_empirical_exclusion_covariance(int n, const nl_function* f,
                                                   const nl_sim_config* cfg,
                                                   nl_cov_estimate* out) {
  return guard([&] {
    need(f, "function");
    need(out, "out");
    *out = cov_estimate(nl::empirical_exclusion_covariance(n, f->f, sim_config(cfg)));
  });
}

NL_API nl_status nl_simulate_walk(const nl_graph* g, uint32_t x0, double t, uint64_t seed,
                                  uint64_t stream, int exponential_gaps, uint32_t* out) {
  return guard([&] {
    need(g, "graph");
    need(out, "out");
    nl::Stream rng(seed, stream);
    *out = nl::simulate_walk(g->g, x0, t, rng,
                             exponential_gaps ? nl::JumpMode::exponential_gaps
                                              : nl::JumpMode::poisson);
  });
}

NL_API nl_status nl_end_state_counts(const nl_graph* g, uint32_t x0, const nl_sim_config* cfg,
                                     uint64_t* out, size_t capacity, size_t* count) {
  return guard([&] {
    need(g, "graph");
    const auto counts = nl::end_state_counts(g->g, x0, sim_config(cfg));
    emit(out, capacity, count, counts.size(), [&](std::size_t s) { return counts[s]; });
  });
}

}  // extern "C"
