#include <gtest/gtest.h>

#include <algorithm>
#include <cmath>
#include <cstring>
#include <string>
#include <thread>
#include <vector>

#include "noiselab/noiselab.h"

namespace {

struct GraphHandle {
  nl_graph* p = nullptr;
  ~GraphHandle() { nl_graph_free(p); }
};
struct SpectrumHandle {
  nl_spectrum* p = nullptr;
  ~SpectrumHandle() { nl_spectrum_free(p); }
};
struct FunctionHandle {
  nl_function* p = nullptr;
  ~FunctionHandle() { nl_function_free(p); }
};
struct LayeredHandle {
  nl_layered* p = nullptr;
  ~LayeredHandle() { nl_layered_free(p); }
};

}  // namespace

TEST(CApi, VersionAndStatusNames) {
  EXPECT_GT(std::strlen(nl_version()), 0u);
  EXPECT_STREQ(nl_status_name(NL_OK), "ok");
  for (int s = 1; s <= 7; ++s) EXPECT_GT(std::strlen(nl_status_name(static_cast<nl_status>(s))), 0u);
  EXPECT_STRNE(nl_status_name(NL_ERR_IO), nl_status_name(NL_ERR_NUMERIC));
}

TEST(CApi, ErrorsSetLastError) {
  nl_graph* g = nullptr;
  EXPECT_EQ(nl_graph_from_spec("torus:m=2", 0, &g), NL_ERR_INVALID_ARGUMENT);
  EXPECT_EQ(g, nullptr);
  EXPECT_NE(std::string(nl_last_error()).find("'n'"), std::string::npos);
  EXPECT_EQ(nl_graph_from_spec("torus:m=2,n=20", 0, &g), NL_ERR_SIZE_LIMIT);
  EXPECT_EQ(nl_graph_from_spec("custom:path=/nonexistent.json", 0, &g), NL_ERR_IO);
  EXPECT_EQ(nl_graph_from_spec(nullptr, 0, &g), NL_ERR_INVALID_ARGUMENT);
  EXPECT_EQ(nl_graph_from_spec("torus:m=2,n=2", 0, nullptr), NL_ERR_INVALID_ARGUMENT);
  const uint32_t images[] = {1, 2, 0};
  EXPECT_EQ(nl_graph_custom(3, 1, images, 0, 0, &g), NL_ERR_VALIDATION);
}

TEST(CApi, LastErrorIsPerThread) {
  nl_graph* g = nullptr;
  ASSERT_EQ(nl_graph_from_spec("nope", 0, &g), NL_ERR_INVALID_ARGUMENT);
  const std::string mine = nl_last_error();
  std::string other;
  std::thread([&] {
    nl_graph* h = nullptr;
    nl_graph_from_spec("torus:m=2,n=x", 0, &h);
    other = nl_last_error();
  }).join();
  EXPECT_EQ(nl_last_error(), mine);
  EXPECT_NE(other, mine);
}

TEST(CApi, CountQueryPattern) {
  GraphHandle g;
  ASSERT_EQ(nl_graph_from_spec("torus:m=3,n=2", 0, &g.p), NL_OK);
  EXPECT_EQ(nl_graph_size(g.p), 9u);
  EXPECT_EQ(nl_graph_degree(g.p), 4u);

  size_t count = 0;
  ASSERT_EQ(nl_graph_describe(g.p, nullptr, 0, &count), NL_OK);
  std::string small(2, '\0');
  EXPECT_EQ(nl_graph_describe(g.p, small.data(), small.size(), &count), NL_ERR_BUFFER_TOO_SMALL);
  std::vector<char> buf(count);
  ASSERT_EQ(nl_graph_describe(g.p, buf.data(), buf.size(), &count), NL_OK);
  EXPECT_EQ(std::strlen(buf.data()) + 1, count);

  ASSERT_EQ(nl_graph_generator_image(g.p, 0, nullptr, 0, &count), NL_OK);
  EXPECT_EQ(count, 9u);
  std::vector<uint32_t> img(count);
  ASSERT_EQ(nl_graph_generator_image(g.p, 0, img.data(), img.size(), &count), NL_OK);
  std::vector<bool> seen(9);
  for (uint32_t x : img) seen[x] = true;
  EXPECT_EQ(std::count(seen.begin(), seen.end(), true), 9);
  int64_t inv = -2;
  ASSERT_EQ(nl_graph_generator_inverse(g.p, 0, &inv), NL_OK);
  EXPECT_GE(inv, 0);
  EXPECT_EQ(nl_graph_generator_image(g.p, 99, nullptr, 0, &count), NL_ERR_INVALID_ARGUMENT);

  nl_validation v{};
  ASSERT_EQ(nl_graph_validate(g.p, &v), NL_OK);
  EXPECT_TRUE(v.inverse_closed && v.connected && v.regular && v.undirected);
  EXPECT_EQ(v.failures, 0u);
}

TEST(CApi, CustomGraphWithInverseClosure) {
  const uint32_t images[] = {1, 2, 3, 0};
  GraphHandle g;
  ASSERT_EQ(nl_graph_custom(4, 1, images, 1, 0, &g.p), NL_OK);
  EXPECT_EQ(nl_graph_degree(g.p), 2u);
  SpectrumHandle s;
  ASSERT_EQ(nl_spectrum_decompose(g.p, 0.0, &s.p), NL_OK);
  // Cycle of length 4 with steps +-1: eigenvalues 1 - cos(2 pi k / 4).
  EXPECT_NEAR(nl_spectrum_gap(s.p), 1.0, 1e-12);
}

TEST(CApi, SpectrumAndFunctions) {
  GraphHandle g;
  ASSERT_EQ(nl_graph_from_spec("hypercube:n=3", 0, &g.p), NL_OK);
  SpectrumHandle s;
  ASSERT_EQ(nl_spectrum_decompose(g.p, 0.0, &s.p), NL_OK);
  EXPECT_EQ(nl_spectrum_size(s.p), 8u);
  // One coordinate flip per generator: -Q has eigenvalues 2|S|/n.
  EXPECT_NEAR(nl_spectrum_gap(s.p), 2.0 / 3.0, 1e-12);
  EXPECT_NEAR(nl_spectrum_relaxation_time(s.p), 1.5, 1e-12);
  std::vector<double> ev(8);
  size_t count = 0;
  ASSERT_EQ(nl_spectrum_eigenvalues(s.p, ev.data(), ev.size(), &count), NL_OK);
  EXPECT_NEAR(ev[0], 0.0, 1e-12);
  EXPECT_NEAR(ev[7], 2.0, 1e-12);
  std::vector<double> psi0(8);
  ASSERT_EQ(nl_spectrum_vector(s.p, 0, psi0.data(), psi0.size(), &count), NL_OK);
  for (double x : psi0) EXPECT_NEAR(x, 1.0, 1e-12);

  FunctionHandle f;
  ASSERT_EQ(nl_function_from_spec(g.p, "parity", &f.p), NL_OK);
  double mean = 0, var = 0;
  ASSERT_EQ(nl_function_mean_variance(f.p, &mean, &var), NL_OK);
  EXPECT_EQ(mean, 0.5);
  EXPECT_EQ(var, 0.25);
  std::vector<uint64_t> counts(3);
  std::vector<double> infl(3);
  nl_influence_summary sum{};
  ASSERT_EQ(nl_influence_profile(g.p, f.p, counts.data(), infl.data(), 3, &count, &sum), NL_OK);
  for (size_t u = 0; u < 3; ++u) {
    EXPECT_EQ(counts[u], 8u);
    EXPECT_EQ(infl[u], 1.0);
  }
  EXPECT_EQ(sum.total, 3.0);

  double cov = 0;
  ASSERT_EQ(nl_exact_covariance(s.p, f.p, 0.5, &cov), NL_OK);
  EXPECT_NEAR(cov, 0.25 * std::exp(-1.0), 1e-14);
  EXPECT_EQ(nl_exact_covariance(s.p, f.p, -1.0, &cov), NL_ERR_INVALID_ARGUMENT);

  const uint8_t vals[] = {0, 1};
  nl_function* wrong = nullptr;
  ASSERT_EQ(nl_function_from_values(vals, 2, "w", &wrong), NL_OK);
  EXPECT_EQ(nl_exact_covariance(s.p, wrong, 1.0, &cov), NL_ERR_INVALID_ARGUMENT);
  nl_function_free(wrong);
  const uint8_t bad[] = {0, 2};
  EXPECT_EQ(nl_function_from_values(bad, 2, "b", &wrong), NL_ERR_INVALID_ARGUMENT);
}

TEST(CApi, BoundAndRho) {
  nl_bound_report r{};
  ASSERT_EQ(nl_bks_bound(1.0, 0.5, 0.1, 0.25, 0.5, 2.0, 3.0, &r), NL_OK);
  const double low = std::exp(-2.0 * std::log(0.5) / 0.5) / 2.0 * std::pow(0.1, 1.0 / 1.5);
  EXPECT_NEAR(r.rhs_low_freq_term, low, 1e-14);
  EXPECT_NEAR(r.rhs_tail_term, 0.25 * std::exp(-6.0), 1e-15);
  EXPECT_EQ(nl_bks_bound(1.0, 0.5, 0.1, 0.25, 1.5, 2.0, 3.0, &r), NL_ERR_INVALID_ARGUMENT);

  GraphHandle g;
  ASSERT_EQ(nl_graph_from_spec("torus:m=2,n=4", 0, &g.p), NL_OK);
  double fam = 0;
  ASSERT_EQ(nl_family_rho_bound(g.p, &fam), NL_OK);
  EXPECT_NEAR(fam, 4 * M_PI * M_PI / (5 * 4 * 4), 1e-14);
  SpectrumHandle s;
  ASSERT_EQ(nl_spectrum_decompose(g.p, 0.0, &s.p), NL_OK);
  nl_rho_choice choice{};
  ASSERT_EQ(nl_resolve_rho(g.p, s.p, nullptr, 1, nullptr, &choice), NL_OK);
  EXPECT_EQ(choice.source, NL_RHO_FAMILY_BOUND);
  const double user = 0.3;
  ASSERT_EQ(nl_resolve_rho(g.p, s.p, &user, 1, nullptr, &choice), NL_OK);
  EXPECT_EQ(choice.source, NL_RHO_USER);
  EXPECT_EQ(choice.rho, 0.3);

  FunctionHandle f;
  ASSERT_EQ(nl_function_from_spec(g.p, "tribes:l=2,k=2", &f.p), NL_OK);
  size_t evaluated = 0;
  const double T = 4.0;
  ASSERT_EQ(nl_optimize_bound(s.p, g.p, f.p, fam, nullptr, 0, nullptr, 0, &T, 1, 2, &r, &evaluated), NL_OK);
  EXPECT_GT(evaluated, 0u);
  EXPECT_GE(r.slack, 0.0);
  EXPECT_NEAR(r.rhs, r.rhs_low_freq_term + r.rhs_tail_term, 1e-15 * r.rhs);
}

TEST(CApi, LogSobolevTwoPoint) {
  GraphHandle g;
  ASSERT_EQ(nl_graph_from_spec("torus:m=2,n=1", 0, &g.p), NL_OK);
  SpectrumHandle s;
  ASSERT_EQ(nl_spectrum_decompose(g.p, 0.0, &s.p), NL_OK);
  nl_ls_options opt;
  nl_ls_options_default(&opt);
  nl_ls_estimate est{};
  ASSERT_EQ(nl_estimate_log_sobolev(g.p, s.p, &opt, &est, nullptr, 0, nullptr), NL_OK);
  EXPECT_NEAR(est.rho_hat, 2.0, 0.04);
  const double f[] = {1.0, 1.0};
  double ratio = 0;
  ASSERT_EQ(nl_log_sobolev_ratio(g.p, f, 2, &ratio), NL_OK);
  EXPECT_TRUE(std::isinf(ratio));
  EXPECT_EQ(nl_log_sobolev_ratio(g.p, f, 1, &ratio), NL_ERR_INVALID_ARGUMENT);
}

TEST(CApi, ExclusionAndSimulation) {
  LayeredHandle lw;
  ASSERT_EQ(nl_layered_build(4, 2, 0.0, &lw.p), NL_OK);
  EXPECT_EQ(nl_layered_n(lw.p), 4);
  GraphHandle cube;
  ASSERT_EQ(nl_graph_from_spec("hypercube:n=4", 0, &cube.p), NL_OK);
  FunctionHandle par;
  ASSERT_EQ(nl_function_from_spec(cube.p, "parity", &par.p), NL_OK);
  nl_split split{};
  ASSERT_EQ(nl_layered_split(lw.p, par.p, 1.0, &split), NL_OK);
  EXPECT_EQ(split.within, 0.0);
  EXPECT_NEAR(split.total, 0.25, 1e-14);

  size_t count = 0;
  ASSERT_EQ(nl_layered_levels(lw.p, par.p, nullptr, 0, &count), NL_OK);
  EXPECT_EQ(count, 5u);
  std::vector<nl_level_row> rows(count);
  ASSERT_EQ(nl_layered_levels(lw.p, par.p, rows.data(), rows.size(), &count), NL_OK);
  EXPECT_EQ(rows[2].p, 6.0 / 16.0);

  nl_sim_config cfg;
  nl_sim_config_default(&cfg);
  cfg.samples = 20000;
  cfg.t = 1.0;
  nl_cov_estimate a{}, b{};
  ASSERT_EQ(nl_empirical_exclusion_covariance(4, par.p, &cfg, &a), NL_OK);
  EXPECT_NEAR(a.mean, 0.25, 4 * a.std_error + 1e-3);

  GraphHandle sq;
  ASSERT_EQ(nl_graph_from_spec("torus:m=2,n=2", 0, &sq.p), NL_OK);
  FunctionHandle p2;
  ASSERT_EQ(nl_function_from_spec(sq.p, "parity", &p2.p), NL_OK);
  cfg.threads = 1;
  ASSERT_EQ(nl_empirical_covariance(sq.p, p2.p, &cfg, &a), NL_OK);
  cfg.threads = 4;
  ASSERT_EQ(nl_empirical_covariance(sq.p, p2.p, &cfg, &b), NL_OK);
  EXPECT_EQ(a.mean, b.mean);
  EXPECT_EQ(a.std_error, b.std_error);
  cfg.samples = 0;
  EXPECT_EQ(nl_empirical_covariance(sq.p, p2.p, &cfg, &a), NL_ERR_INVALID_ARGUMENT);

  uint32_t end = 99;
  ASSERT_EQ(nl_simulate_walk(sq.p, 2, 0.0, 1, 0, 0, &end), NL_OK);
  EXPECT_EQ(end, 2u);
  EXPECT_EQ(nl_simulate_walk(sq.p, 7, 1.0, 1, 0, 0, &end), NL_ERR_INVALID_ARGUMENT);
}
