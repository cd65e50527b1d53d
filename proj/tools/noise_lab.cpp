// noise-lab: command-line front end over the noiselab C API.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <ctime>
#include <fstream>
#include <functional>
#include <iostream>
#include <memory>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"
#include "noiselab/noiselab.h"

using nlohmann::json;

namespace {

constexpr int kExitOk = 0;
constexpr int kExitValidation = 1;
constexpr int kExitNumeric = 2;
constexpr int kExitUsage = 64;

struct Failure {
  nl_status status;
  std::string message;
};

void check(nl_status s) {
  if (s != NL_OK) throw Failure{s, nl_last_error()};
}

struct GraphDeleter {
  void operator()(nl_graph* p) const { nl_graph_free(p); }
};
struct SpectrumDeleter {
  void operator()(nl_spectrum* p) const { nl_spectrum_free(p); }
};
struct FunctionDeleter {
  void operator()(nl_function* p) const { nl_function_free(p); }
};
struct LayeredDeleter {
  void operator()(nl_layered* p) const { nl_layered_free(p); }
};
using Graph = std::unique_ptr<nl_graph, GraphDeleter>;
using SpectrumPtr = std::unique_ptr<nl_spectrum, SpectrumDeleter>;
using Function = std::unique_ptr<nl_function, FunctionDeleter>;
using Layered = std::unique_ptr<nl_layered, LayeredDeleter>;

Graph load_graph(const std::string& spec, std::size_t max_states) {
  nl_graph* g = nullptr;
  check(nl_graph_from_spec(spec.c_str(), max_states, &g));
  return Graph(g);
}

SpectrumPtr load_spectrum(const nl_graph* g) {
  nl_spectrum* s = nullptr;
  check(nl_spectrum_decompose(g, 0.0, &s));
  return SpectrumPtr(s);
}

Function load_function(const nl_graph* g, const std::string& spec) {
  nl_function* f = nullptr;
  check(nl_function_from_spec(g, spec.c_str(), &f));
  return Function(f);
}

template <class T, class Call>
std::vector<T> fetch(Call&& call) {
  std::size_t n = 0;
  check(call(nullptr, 0, &n));
  std::vector<T> out(n);
  check(call(out.data(), out.size(), &n));
  return out;
}

std::string fetch_string(const std::function<nl_status(char*, std::size_t, std::size_t*)>& call) {
  std::vector<char> buf = fetch<char>(call);
  return buf.empty() ? std::string() : std::string(buf.data());
}

std::string num(double x) {
  if (!std::isfinite(x)) return "null";
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  return buf;
}

// JSON text with every float at 17 significant digits; non-finite becomes null.
void dump(const json& j, std::string& out) {
  switch (j.type()) {
    case json::value_t::object: {
      out += '{';
      bool first = true;
      for (auto it = j.begin(); it != j.end(); ++it) {
        if (!first) out += ',';
        first = false;
        out += json(it.key()).dump();
        out += ':';
        dump(it.value(), out);
      }
      out += '}';
      break;
    }
    case json::value_t::array: {
      out += '[';
      for (std::size_t i = 0; i < j.size(); ++i) {
        if (i) out += ',';
        dump(j[i], out);
      }
      out += ']';
      break;
    }
    case json::value_t::number_float: out += num(j.get<double>()); break;
    default: out += j.dump(); break;
  }
}

std::string to_text(const json& j) {
  std::string out;
  dump(j, out);
  return out + "\n";
}

struct Common {
  std::string out;
  unsigned threads = 1;
  std::size_t max_states = 0;
  std::uint64_t seed = 1;
  std::vector<std::string> argv;
  std::string graph_spec;
  std::string fn_spec;
  json tolerances = json::object();
};

void write_output(const Common& c, const std::string& text) {
  if (c.out.empty()) {
    std::cout << text;
    return;
  }
  std::ofstream f(c.out, std::ios::binary | std::ios::trunc);
  if (!f) throw Failure{NL_ERR_IO, "cannot write " + c.out};
  f << text;

  json m;
  std::string cmd;
  for (const auto& a : c.argv) cmd += (cmd.empty() ? "" : " ") + a;
  m["command_line"] = cmd;
  m["graph_spec"] = c.graph_spec;
  m["function_spec"] = c.fn_spec;
  m["seed"] = c.seed;
  m["threads"] = c.threads;
  m["tolerances"] = c.tolerances;
  m["tool_version"] = nl_version();
  const auto now = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
  char stamp[32];
  std::strftime(stamp, sizeof stamp, "%Y-%m-%dT%H:%M:%SZ", std::gmtime(&now));
  m["wall_clock"] = stamp;
  m["output"] = c.out;
  std::ofstream mf(c.out + ".manifest.json", std::ios::binary | std::ios::trunc);
  if (!mf) throw Failure{NL_ERR_IO, "cannot write manifest for " + c.out};
  mf << to_text(m);
}

json with_manifest(const Common& c, json doc) {
  if (!c.out.empty()) doc["manifest"] = c.out + ".manifest.json";
  return doc;
}

std::vector<double> parse_list(const std::string& text, const char* what) {
  std::vector<double> out;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) {
    char* end = nullptr;
    const double v = std::strtod(item.c_str(), &end);
    if (item.empty() || *end != '\0' || !std::isfinite(v))
      throw Failure{NL_ERR_INVALID_ARGUMENT, std::string("bad number in ") + what + ": " + item};
    out.push_back(v);
  }
  if (out.empty()) throw Failure{NL_ERR_INVALID_ARGUMENT, std::string(what) + " is empty"};
  return out;
}

std::vector<double> read_vector_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Failure{NL_ERR_IO, "cannot open " + path};
  try {
    const json doc = json::parse(in);
    std::vector<double> v = doc.at("values").get<std::vector<double>>();
    if (doc.contains("size") && doc["size"].get<std::size_t>() != v.size())
      throw Failure{NL_ERR_INVALID_ARGUMENT, path + ": values length differs from size"};
    return v;
  } catch (const json::exception& e) {
    throw Failure{NL_ERR_INVALID_ARGUMENT, path + ": " + e.what()};
  }
}

std::string csv_header_rows(const std::string& header, const std::vector<std::string>& rows) {
  std::string out = header + "\n";
  for (const auto& r : rows) out += r + "\n";
  return out;
}

json validation_json(const nl_graph* g) {
  nl_validation v{};
  check(nl_graph_validate(g, &v));
  json j;
  j["inverse_closed"] = v.inverse_closed != 0;
  j["connected"] = v.connected != 0;
  j["regular"] = v.regular != 0;
  j["undirected"] = v.undirected != 0;
  j["degree"] = v.degree;
  std::string msgs = fetch_string(
      [&](char* b, std::size_t c, std::size_t* n) { return nl_graph_validation_messages(g, b, c, n); });
  json fails = json::array();
  std::stringstream ss(msgs);
  std::string line;
  while (std::getline(ss, line))
    if (!line.empty()) fails.push_back(line);
  j["failures"] = fails;
  return j;
}

// ---- subcommands

int cmd_graph(const Common& c, bool states) {
  Graph g = load_graph(c.graph_spec, c.max_states);
  json doc;
  doc["family"] = fetch_string(
      [&](char* b, std::size_t n, std::size_t* k) { return nl_graph_describe(g.get(), b, n, k); });
  doc["size"] = nl_graph_size(g.get());
  doc["degree"] = nl_graph_degree(g.get());
  json gens = json::array();
  for (std::size_t u = 0; u < nl_graph_degree(g.get()); ++u) {
    int64_t inv = -1;
    check(nl_graph_generator_inverse(g.get(), u, &inv));
    gens.push_back({{"index", u},
                    {"label", fetch_string([&](char* b, std::size_t n, std::size_t* k) {
                       return nl_graph_generator_label(g.get(), u, b, n, k);
                     })},
                    {"inverse", inv}});
  }
  doc["generators"] = gens;
  doc["validation"] = validation_json(g.get());
  if (states) {
    json labels = json::array();
    for (std::size_t x = 0; x < nl_graph_size(g.get()); ++x)
      labels.push_back(fetch_string([&](char* b, std::size_t n, std::size_t* k) {
        return nl_graph_state_label(g.get(), static_cast<uint32_t>(x), b, n, k);
      }));
    doc["states"] = labels;
  }
  write_output(c, to_text(with_manifest(c, doc)));
  return doc["validation"]["failures"].empty() ? kExitOk : kExitValidation;
}

int cmd_spectrum(const Common& c, const std::string& format, bool vectors) {
  Graph g = load_graph(c.graph_spec, c.max_states);
  SpectrumPtr s = load_spectrum(g.get());
  if (format == "csv") {
    write_output(c, fetch_string([&](char* b, std::size_t n, std::size_t* k) {
                   return nl_spectrum_to_csv(s.get(), b, n, k);
                 }));
    return kExitOk;
  }
  json doc;
  doc["size"] = nl_spectrum_size(s.get());
  doc["gap"] = nl_spectrum_gap(s.get());
  doc["relaxation_time"] = nl_spectrum_relaxation_time(s.get());
  doc["grouping_tolerance"] = nl_spectrum_grouping_tolerance(s.get());
  doc["eigenvalues"] = fetch<double>([&](double* o, std::size_t n, std::size_t* k) {
    return nl_spectrum_eigenvalues(s.get(), o, n, k);
  });
  doc["groups"] = fetch<std::size_t>([&](std::size_t* o, std::size_t n, std::size_t* k) {
    return nl_spectrum_groups(s.get(), o, n, k);
  });
  if (vectors) {
    json vecs = json::array();
    for (std::size_t j = 0; j < nl_spectrum_size(s.get()); ++j)
      vecs.push_back(fetch<double>([&](double* o, std::size_t n, std::size_t* k) {
        return nl_spectrum_vector(s.get(), j, o, n, k);
      }));
    doc["vectors"] = vecs;
  }
  write_output(c, to_text(with_manifest(c, doc)));
  return kExitOk;
}

int cmd_influence(const Common& c, const std::string& format) {
  Graph g = load_graph(c.graph_spec, c.max_states);
  Function f = load_function(g.get(), c.fn_spec);
  nl_influence_summary sum{};
  std::size_t n = 0;
  check(nl_influence_profile(g.get(), f.get(), nullptr, nullptr, 0, &n, nullptr));
  std::vector<uint64_t> counts(n);
  std::vector<double> inf(n);
  check(nl_influence_profile(g.get(), f.get(), counts.data(), inf.data(), n, &n, &sum));
  std::vector<std::string> labels;
  for (std::size_t u = 0; u < n; ++u)
    labels.push_back(fetch_string([&](char* b, std::size_t cap, std::size_t* k) {
      return nl_graph_generator_label(g.get(), u, b, cap, k);
    }));
  if (format == "csv") {
    std::vector<std::string> rows;
    for (std::size_t u = 0; u < n; ++u)
      rows.push_back(std::to_string(u) + "," + labels[u] + "," + std::to_string(counts[u]) + "," +
                     num(inf[u]));
    write_output(c, csv_header_rows("u,label,count,influence", rows));
    return kExitOk;
  }
  json doc;
  doc["size"] = sum.size;
  json per = json::array();
  for (std::size_t u = 0; u < n; ++u)
    per.push_back({{"u", u}, {"label", labels[u]}, {"count", counts[u]}, {"influence", inf[u]}});
  doc["per_generator"] = per;
  doc["total"] = sum.total;
  doc["sum_of_squares"] = sum.sum_of_squares;
  doc["mean_square"] = n ? sum.sum_of_squares / static_cast<double>(n) : 0.0;
  write_output(c, to_text(with_manifest(c, doc)));
  return kExitOk;
}

int cmd_fourier(const Common& c) {
  Graph g = load_graph(c.graph_spec, c.max_states);
  SpectrumPtr s = load_spectrum(g.get());
  Function f = load_function(g.get(), c.fn_spec);
  const auto coeffs = fetch<double>(
      [&](double* o, std::size_t n, std::size_t* k) { return nl_fourier(s.get(), f.get(), o, n, k); });
  const auto ev = fetch<double>([&](double* o, std::size_t n, std::size_t* k) {
    return nl_spectrum_eigenvalues(s.get(), o, n, k);
  });
  const auto groups = fetch<std::size_t>([&](std::size_t* o, std::size_t n, std::size_t* k) {
    return nl_spectrum_groups(s.get(), o, n, k);
  });
  std::vector<std::string> rows;
  for (std::size_t j = 0; j < coeffs.size(); ++j)
    rows.push_back(std::to_string(j) + "," + num(ev[j]) + "," + std::to_string(groups[j]) + "," +
                   num(coeffs[j]));
  write_output(c, csv_header_rows("index,eigenvalue,multiplicity_group,coefficient", rows));
  return kExitOk;
}

int cmd_cov(const Common& c, const std::string& t_list, const std::string& T_text,
            const std::string& eps_list, const std::string& k_list, const std::string& diag_out) {
  Graph g = load_graph(c.graph_spec, c.max_states);
  SpectrumPtr s = load_spectrum(g.get());
  Function f = load_function(g.get(), c.fn_spec);
  if (!t_list.empty()) {
    std::vector<std::string> rows;
    for (double t : parse_list(t_list, "--t")) {
      double v = 0.0;
      check(nl_exact_covariance(s.get(), f.get(), t, &v));
      rows.push_back(num(t) + "," + num(v));
    }
    write_output(c, csv_header_rows("t,cov", rows));
    return kExitOk;
  }
  if (T_text.empty() || eps_list.empty())
    throw Failure{NL_ERR_INVALID_ARGUMENT, "cov needs --t, or --T with --eps"};
  const double T = parse_list(T_text, "--T").at(0);
  const auto eps = parse_list(eps_list, "--eps");
  std::vector<double> ks;
  if (!k_list.empty()) ks = parse_list(k_list, "--k");
  std::vector<double> cov(eps.size()), lf(ks.size());
  check(nl_sensitivity_profile(s.get(), f.get(), T, eps.data(), eps.size(), cov.data(),
                               ks.data(), ks.size(), lf.data()));
  std::vector<std::string> rows;
  for (std::size_t i = 0; i < eps.size(); ++i)
    rows.push_back(num(eps[i]) + "," + num(eps[i] * T) + "," + num(cov[i]));
  write_output(c, csv_header_rows("epsilon,t,cov", rows));
  if (!ks.empty()) {
    std::vector<std::string> drows;
    for (std::size_t i = 0; i < ks.size(); ++i) drows.push_back(num(ks[i]) + "," + num(lf[i]));
    const std::string text = csv_header_rows("k,low_freq_weight", drows);
    if (diag_out.empty()) {
      std::cout << text;
    } else {
      Common d = c;
      d.out = diag_out;
      write_output(d, text);
    }
  }
  return kExitOk;
}

nl_ls_options ls_options(const Common& c, int restarts, int max_iters, double tol) {
  nl_ls_options o;
  nl_ls_options_default(&o);
  o.restarts = restarts;
  o.max_iters = max_iters;
  o.tol = tol;
  o.seed = c.seed;
  o.threads = c.threads;
  return o;
}

json ls_json(const nl_ls_estimate& e) {
  return {{"rho_hat", e.rho_hat},
          {"lambda1", e.lambda1},
          {"covariance_form_at_witness", e.covariance_form_at_witness},
          {"restarts_used", e.restarts_used},
          {"converged", e.converged != 0},
          {"from_linear_limit", e.from_linear_limit != 0}};
}

json bound_json(const nl_bound_report& r) {
  return {{"r", r.r},
          {"Lambda", r.lambda},
          {"T", r.T},
          {"lhs", r.lhs},
          {"rhs_low_freq_term", r.rhs_low_freq_term},
          {"rhs_tail_term", r.rhs_tail_term},
          {"rhs", r.rhs},
          {"slack", r.slack}};
}

const char* rho_source_name(nl_rho_source s) {
  switch (s) {
    case NL_RHO_USER: return "user";
    case NL_RHO_FAMILY_BOUND: return "family_bound";
    case NL_RHO_NUMERICAL: return "numerical";
  }
  return "?";
}

int cmd_bound(const Common& c, const std::string& r_text, const std::string& lambda_text,
              const std::string& T_text, std::optional<double> rho_user, bool numerical_rho,
              const nl_ls_options& lso) {
  Graph g = load_graph(c.graph_spec, c.max_states);
  SpectrumPtr s = load_spectrum(g.get());
  Function f = load_function(g.get(), c.fn_spec);
  nl_rho_choice rho{};
  check(nl_resolve_rho(g.get(), s.get(), rho_user ? &*rho_user : nullptr, numerical_rho ? 0 : 1,
                       &lso, &rho));

  const auto Ts = parse_list(T_text, "--T");
  const bool r_auto = r_text == "auto";
  const bool l_auto = lambda_text == "auto";
  std::vector<double> rs, ls;
  if (!r_auto) rs = parse_list(r_text, "--r");
  if (!l_auto) ls = parse_list(lambda_text, "--lambda");

  nl_bound_report best{};
  std::size_t evaluated = 0;
  check(nl_optimize_bound(s.get(), g.get(), f.get(), rho.rho, r_auto ? nullptr : rs.data(),
                          rs.size(), l_auto ? nullptr : ls.data(), ls.size(), Ts.data(),
                          Ts.size(), c.threads, &best, &evaluated));
  json doc = bound_json(best);
  doc["rho"] = rho.rho;
  doc["rho_source"] = rho_source_name(rho.source);
  if (rho.has_estimate) doc["rho_estimate"] = ls_json(rho.estimate);
  doc["lambda1"] = nl_spectrum_gap(s.get());
  doc["grid_points"] = evaluated;
  doc["optimized"] = evaluated > 1;
  write_output(c, to_text(with_manifest(c, doc)));
  return best.slack >= -1e-9 ? kExitOk : kExitNumeric;
}

int cmd_logsobolev(const Common& c, const nl_ls_options& lso, bool witness) {
  Graph g = load_graph(c.graph_spec, c.max_states);
  SpectrumPtr s = load_spectrum(g.get());
  nl_ls_estimate e{};
  std::size_t n = 0;
  check(nl_estimate_log_sobolev(g.get(), s.get(), &lso, &e, nullptr, 0, &n));
  json doc = ls_json(e);
  double fb = 0.0;
  if (nl_family_rho_bound(g.get(), &fb) == NL_OK) doc["family_bound"] = fb;
  if (witness) {
    std::vector<double> w(n);
    check(nl_estimate_log_sobolev(g.get(), s.get(), &lso, &e, w.data(), w.size(), &n));
    doc["minimizer"] = w;
  }
  write_output(c, to_text(with_manifest(c, doc)));
  return kExitOk;
}

int cmd_eigenspace(const Common& c, double tol, bool characters, const std::string& vector_path) {
  Graph g = load_graph(c.graph_spec, c.max_states);
  SpectrumPtr s = load_spectrum(g.get());
  Function f = load_function(g.get(), c.fn_spec);
  int all_pass = 0;
  std::size_t n = 0;
  check(nl_eigenspace_identity(s.get(), g.get(), f.get(), tol, nullptr, 0, &n, &all_pass));
  std::vector<nl_eigenspace_row> rows(n);
  check(nl_eigenspace_identity(s.get(), g.get(), f.get(), tol, rows.data(), n, &n, &all_pass));
  json doc;
  json spaces = json::array();
  for (const auto& r : rows)
    spaces.push_back({{"group", r.group},
                      {"eigenvalue", r.eigenvalue},
                      {"dimension", r.dimension},
                      {"lhs", r.lhs},
                      {"rhs", r.rhs},
                      {"abs_error", r.abs_error},
                      {"pass", r.pass != 0}});
  doc["eigenspaces"] = spaces;
  doc["tolerance"] = tol;
  doc["pass"] = all_pass != 0;

  auto per_vector = [&](const std::vector<double>& psi) {
    nl_per_vector pv{};
    std::size_t k = 0;
    check(nl_per_vector_identity(g.get(), f.get(), psi.data(), psi.size(), tol, &pv, nullptr, 0,
                                 &k));
    std::vector<double> proj(k);
    check(nl_per_vector_identity(g.get(), f.get(), psi.data(), psi.size(), tol, &pv, proj.data(),
                                 k, &k));
    return std::make_pair(pv, proj);
  };

  if (!vector_path.empty()) {
    const auto [pv, proj] = per_vector(read_vector_file(vector_path));
    doc["vector"] = {{"path", vector_path},
                     {"eigenvalue", pv.eigenvalue},
                     {"eigen_residual", pv.eigen_residual},
                     {"norm", pv.norm},
                     {"coefficient", pv.coefficient},
                     {"projections", proj},
                     {"lhs", pv.lhs},
                     {"rhs", pv.rhs},
                     {"equal", pv.equal != 0}};
  }
  if (characters) {
    const std::size_t size = nl_graph_size(g.get());
    json list = json::array();
    bool every = true;
    double worst = 0.0;
    for (std::size_t mask = 0; mask < size; ++mask) {
      double ev = 0.0;
      std::vector<double> chi(size);
      std::size_t k = 0;
      check(nl_hypercube_character(g.get(), static_cast<uint32_t>(mask), chi.data(), size, &k,
                                   &ev));
      const auto [pv, proj] = per_vector(chi);
      every = every && pv.equal;
      worst = std::max(worst, std::abs(pv.lhs - pv.rhs));
      list.push_back({{"subset", mask},
                      {"eigenvalue", ev},
                      {"lhs", pv.lhs},
                      {"rhs", pv.rhs},
                      {"equal", pv.equal != 0}});
    }
    doc["characters"] = {{"all_equal", every}, {"max_abs_error", worst}, {"rows", list}};
  }
  write_output(c, to_text(with_manifest(c, doc)));
  return all_pass ? kExitOk : kExitNumeric;
}

void write_aux_csv(const Common& c, const std::string& path, const std::string& text) {
  if (path.empty()) return;
  Common d = c;
  d.out = path;
  write_output(d, text);
}

int cmd_exclusion(const Common& c, int n, const std::string& t_list, double alpha,
                  const std::string& delta_list, const std::string& levels_out,
                  const std::string& influences_out, const std::string& split_out,
                  std::optional<int> slice_m, double C, double epsilon, double delta,
                  double chain_alpha, const nl_ls_options& lso) {
  Layered lw;
  {
    nl_layered* p = nullptr;
    check(nl_layered_build(n, c.threads, 0.0, &p));
    lw.reset(p);
  }
  Graph cube = load_graph("hypercube:n=" + std::to_string(n), c.max_states);
  Function f = load_function(cube.get(), c.fn_spec);

  json doc;
  doc["n"] = n;

  std::vector<std::string> split_rows;
  json split = json::array();
  for (double t : parse_list(t_list, "--t")) {
    nl_split sp{};
    double direct = 0.0;
    check(nl_layered_split(lw.get(), f.get(), t, &sp));
    check(nl_layered_direct_covariance(lw.get(), f.get(), t, &direct));
    split.push_back({{"t", t},
                     {"within", sp.within},
                     {"between", sp.between},
                     {"total", sp.total},
                     {"direct", direct}});
    split_rows.push_back(num(t) + "," + num(sp.within) + "," + num(sp.between) + "," +
                         num(sp.total));
  }
  doc["split"] = split;

  std::size_t k = 0;
  check(nl_layered_levels(lw.get(), f.get(), nullptr, 0, &k));
  std::vector<nl_level_row> levels(k);
  check(nl_layered_levels(lw.get(), f.get(), levels.data(), k, &k));
  std::vector<std::string> level_rows;
  for (const auto& l : levels)
    level_rows.push_back(std::to_string(l.m) + "," + num(l.p) + "," + num(l.mean) + "," +
                         num(l.variance));

  std::size_t rows_n = 0, totals_n = 0;
  double mix_err = 0.0;
  check(nl_slice_influences(lw.get(), f.get(), nullptr, 0, &rows_n, nullptr, 0, &totals_n,
                            &mix_err));
  std::vector<nl_slice_influence_row> srows(rows_n);
  std::vector<nl_transposition_influence> totals(totals_n);
  check(nl_slice_influences(lw.get(), f.get(), srows.data(), rows_n, &rows_n, totals.data(),
                            totals_n, &totals_n, &mix_err));
  std::vector<std::string> inf_rows;
  for (const auto& r : srows)
    inf_rows.push_back(std::to_string(r.m) + "," + std::to_string(r.i) + "," +
                       std::to_string(r.j) + "," + num(r.influence));
  doc["max_mixture_error"] = mix_err;

  nl_good_slices good{};
  std::size_t members_n = 0;
  std::vector<double> level_sums(static_cast<std::size_t>(n) + 1);
  check(nl_good_slice_set(lw.get(), f.get(), alpha, &good, nullptr, 0, &members_n, nullptr));
  std::vector<int> members(members_n);
  check(nl_good_slice_set(lw.get(), f.get(), alpha, &good, members.data(), members_n,
                          &members_n, level_sums.data()));
  doc["good_slices"] = {{"alpha", good.alpha},
                        {"members", members},
                        {"level_sums", level_sums},
                        {"threshold", good.threshold},
                        {"probability", good.probability},
                        {"bound", good.bound},
                        {"bound_sum_form", good.bound_sum_form},
                        {"bound_holds", good.bound_holds != 0},
                        {"transposition_sum_sq", good.transposition_sum_sq},
                        {"transposition_limit", good.transposition_limit}};
  doc["sum_sq_influence"] = good.sum_sq_influence;
  doc["sum_influence"] = good.sum_influence;
  const double nn = n;
  doc["reference_shape"] = std::pow(std::log2(nn) / std::sqrt(nn), 2.0);
  double lmv = 0.0;
  check(nl_layered_level_mean_variance(lw.get(), f.get(), &lmv));
  doc["level_mean_variance"] = lmv;

  if (!delta_list.empty()) {
    json th = json::array();
    for (double d : parse_list(delta_list, "--delta-grid")) {
      const double v = std::pow(nn, -d);
      th.push_back({{"delta", d}, {"threshold", v}, {"below", good.sum_sq_influence < v}});
    }
    doc["thresholds"] = th;
  }

  if (slice_m) {
    nl_slice_bound b{};
    check(nl_slice_bound_check(lw.get(), f.get(), *slice_m, C, epsilon, delta, chain_alpha, &lso,
                               &b));
    doc["slice_check"] = {{"m", b.m},
                          {"applicable", b.applicable != 0},
                          {"C", b.C},
                          {"epsilon", b.epsilon},
                          {"delta", b.delta},
                          {"lambda1", b.lambda1},
                          {"rho", b.rho},
                          {"nominal_lambda1", b.nominal_lambda1},
                          {"nominal_rho_order", b.nominal_rho_order},
                          {"slice_influence_sq", b.slice_influence_sq},
                          {"influence_hypothesis", b.influence_hypothesis != 0},
                          {"lhs", b.lhs},
                          {"rhs", b.rhs},
                          {"best_r", b.best_r},
                          {"closed_form", b.closed_form},
                          {"alpha", b.alpha},
                          {"chain", {b.chain_cov, b.chain_middle, b.chain_upper}},
                          {"holds", b.holds != 0}};
  }

  write_aux_csv(c, levels_out, csv_header_rows("m,p_m,slice_mean,slice_var", level_rows));
  write_aux_csv(c, influences_out, csv_header_rows("m,i,j,influence", inf_rows));
  write_aux_csv(c, split_out, csv_header_rows("t,within,between,total", split_rows));
  write_output(c, to_text(with_manifest(c, doc)));
  return kExitOk;
}

int cmd_simulate(const Common& c, std::uint64_t samples, double t, bool antithetic,
                 bool exp_gaps, int exclusion_n) {
  nl_sim_config cfg;
  nl_sim_config_default(&cfg);
  cfg.samples = samples;
  cfg.t = t;
  cfg.seed = c.seed;
  cfg.antithetic = antithetic;
  cfg.exponential_gaps = exp_gaps;
  cfg.threads = c.threads;
  nl_cov_estimate e{};
  if (exclusion_n > 0) {
    Graph cube = load_graph("hypercube:n=" + std::to_string(exclusion_n), c.max_states);
    Function f = load_function(cube.get(), c.fn_spec);
    check(nl_empirical_exclusion_covariance(exclusion_n, f.get(), &cfg, &e));
  } else {
    Graph g = load_graph(c.graph_spec, c.max_states);
    Function f = load_function(g.get(), c.fn_spec);
    check(nl_empirical_covariance(g.get(), f.get(), &cfg, &e));
  }
  json doc = {{"mean", e.mean},
              {"stderr", e.std_error},
              {"samples", e.samples},
              {"seed", e.seed},
              {"t", t},
              {"product_mean", e.product_mean},
              {"pooled_mean", e.pooled_mean}};
  write_output(c, to_text(with_manifest(c, doc)));
  return kExitOk;
}

int exit_for(nl_status s) {
  switch (s) {
    case NL_ERR_NUMERIC: return kExitNumeric;
    default: return kExitValidation;
  }
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"noise-lab: spectra, influences and noise bounds for Schreier-graph walks"};
  app.require_subcommand(1);
  app.set_version_flag("--version", std::string(nl_version()));

  Common c;
  for (int i = 0; i < argc; ++i) c.argv.emplace_back(argv[i]);
  std::optional<unsigned> threads_flag;

  auto add_common = [&](CLI::App* sub, bool graph, bool fn) {
    if (graph) sub->add_option("--graph", c.graph_spec, "graph spec")->required();
    if (fn) sub->add_option("--fn", c.fn_spec, "function spec or JSON file")->required();
    sub->add_option("--out", c.out, "output file (default stdout)");
    sub->add_option("--threads", threads_flag, "worker threads (fallback NOISE_LAB_THREADS)")
        ->check(CLI::Range(1u, 1024u));
    sub->add_option("--max-states", c.max_states, "state-count cap");
  };
  auto add_seed = [&](CLI::App* sub) { sub->add_option("--seed", c.seed, "RNG seed"); };

  auto* graph = app.add_subcommand("graph", "build and validate a graph");
  add_common(graph, true, false);
  bool states = false;
  graph->add_flag("--states", states, "include state labels");

  std::string format = "csv";
  bool vectors = false;
  auto* spectrum = app.add_subcommand("spectrum", "eigendecomposition of -Q");
  add_common(spectrum, true, false);
  spectrum->add_option("--format", format)->check(CLI::IsMember({"csv", "json"}));
  spectrum->add_flag("--vectors", vectors, "include eigenvectors (json)");

  std::string inf_format = "csv";
  auto* influence = app.add_subcommand("influence", "per-generator influences");
  add_common(influence, true, true);
  influence->add_option("--format", inf_format)->check(CLI::IsMember({"csv", "json"}));

  auto* fourier = app.add_subcommand("fourier", "Fourier coefficients");
  add_common(fourier, true, true);

  std::string t_list, T_text, eps_list, k_list, diag_out;
  auto* cov = app.add_subcommand("cov", "exact covariance and sensitivity profile");
  add_common(cov, true, true);
  cov->add_option("--t", t_list, "comma-separated times");
  cov->add_option("--T", T_text, "time scale for --eps");
  cov->add_option("--eps", eps_list, "comma-separated epsilons");
  cov->add_option("--k", k_list, "comma-separated k for low-frequency diagnostics");
  cov->add_option("--diag-out", diag_out, "diagnostics CSV path");

  std::string r_text = "auto", lambda_text = "auto", bound_T;
  std::optional<double> rho_user;
  bool numerical_rho = false;
  int restarts = 32, max_iters = 2000;
  double ls_tol = 1e-12;
  auto* bound = app.add_subcommand("bound", "covariance bound report");
  add_common(bound, true, true);
  add_seed(bound);
  bound->add_option("--r", r_text, "r value(s) or auto");
  bound->add_option("--lambda", lambda_text, "Lambda value(s) or auto");
  bound->add_option("--T", bound_T, "T value(s)")->required();
  bound->add_option("--rho", rho_user, "log-Sobolev constant to use");
  bound->add_flag("--numerical-rho", numerical_rho, "skip the closed-form family bound");
  bound->add_option("--restarts", restarts);
  bound->add_option("--max-iters", max_iters);

  bool witness = false;
  auto* logsob = app.add_subcommand("logsobolev", "numerical log-Sobolev constant");
  add_common(logsob, true, false);
  add_seed(logsob);
  logsob->add_option("--restarts", restarts);
  logsob->add_option("--max-iters", max_iters);
  logsob->add_option("--tol", ls_tol);
  logsob->add_flag("--witness", witness, "include the minimizing function");

  double id_tol = 1e-8;
  bool characters = false;
  std::string vector_path;
  auto* eig = app.add_subcommand("eigenspace-check", "eigenspace identity per eigenspace");
  add_common(eig, true, true);
  eig->add_option("--tol", id_tol);
  eig->add_flag("--characters", characters, "per-vector check on parity characters");
  eig->add_option("--vector", vector_path, "per-vector check on a JSON vector");

  int ex_n = 0;
  double alpha = 0.25, C = 4.0, epsilon = 0.5, delta = 0.25, chain_alpha = 1.0;
  std::string delta_list, levels_out, influences_out, split_out;
  std::optional<int> slice_m;
  std::string ex_t = "0,0.5,1,2";
  auto* excl = app.add_subcommand("exclusion", "layered walk on the slices of the cube");
  add_common(excl, false, true);
  add_seed(excl);
  excl->add_option("--n", ex_n, "cube dimension")->required();
  excl->add_option("--t", ex_t, "comma-separated times");
  excl->add_option("--alpha", alpha, "good-slice exponent in (0, 1/2)");
  excl->add_option("--delta-grid", delta_list, "comma-separated delta for n^-delta thresholds");
  excl->add_option("--levels-out", levels_out);
  excl->add_option("--influences-out", influences_out);
  excl->add_option("--split-out", split_out);
  excl->add_option("--slice-check", slice_m, "level m for the slice bound check");
  excl->add_option("--C", C);
  excl->add_option("--epsilon", epsilon);
  excl->add_option("--delta", delta);
  excl->add_option("--chain-alpha", chain_alpha);

  std::uint64_t samples = 100000;
  double sim_t = 1.0;
  bool antithetic = false, exp_gaps = false;
  int sim_exclusion = 0;
  auto* sim = app.add_subcommand("simulate", "Monte Carlo covariance estimate");
  add_common(sim, false, true);
  add_seed(sim);
  sim->add_option("--graph", c.graph_spec, "graph spec");
  sim->add_option("--samples", samples)->check(CLI::PositiveNumber);
  sim->add_option("--t", sim_t);
  sim->add_flag("--antithetic", antithetic);
  sim->add_flag("--exp-gaps", exp_gaps, "sum exp(1) holding times instead of Poisson jumps");
  sim->add_option("--exclusion", sim_exclusion, "simulate the transposition walk on {0,1}^n");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForVersion& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kExitUsage;
  }

  if (threads_flag) {
    c.threads = *threads_flag;
  } else if (const char* env = std::getenv("NOISE_LAB_THREADS")) {
    char* end = nullptr;
    const long v = std::strtol(env, &end, 10);
    if (*env == '\0' || *end != '\0' || v < 1 || v > 1024) {
      std::cerr << "NOISE_LAB_THREADS must be an integer in [1, 1024]\n";
      return kExitUsage;
    }
    c.threads = static_cast<unsigned>(v);
  }

  try {
    const nl_ls_options lso = ls_options(c, restarts, max_iters, ls_tol);
    if (graph->parsed()) return cmd_graph(c, states);
    if (spectrum->parsed()) return cmd_spectrum(c, format, vectors);
    if (influence->parsed()) return cmd_influence(c, inf_format);
    if (fourier->parsed()) return cmd_fourier(c);
    if (cov->parsed()) return cmd_cov(c, t_list, T_text, eps_list, k_list, diag_out);
    if (bound->parsed()) {
      c.tolerances["slack"] = -1e-9;
      return cmd_bound(c, r_text, lambda_text, bound_T, rho_user, numerical_rho, lso);
    }
    if (logsob->parsed()) {
      c.tolerances["optimizer"] = ls_tol;
      return cmd_logsobolev(c, lso, witness);
    }
    if (eig->parsed()) {
      c.tolerances["identity"] = id_tol;
      return cmd_eigenspace(c, id_tol, characters, vector_path);
    }
    if (excl->parsed()) {
      c.graph_spec = "hypercube:n=" + std::to_string(ex_n);
      return cmd_exclusion(c, ex_n, ex_t, alpha, delta_list, levels_out, influences_out,
                           split_out, slice_m, C, epsilon, delta, chain_alpha, lso);
    }
    if (sim->parsed()) {
      if (sim_exclusion > 0) {
        c.graph_spec = "hypercube:n=" + std::to_string(sim_exclusion);
      } else if (c.graph_spec.empty()) {
        std::cerr << "simulate needs --graph or --exclusion\n";
        return kExitUsage;
      }
      return cmd_simulate(c, samples, sim_t, antithetic, exp_gaps, sim_exclusion);
    }
  } catch (const Failure& f) {
    std::cerr << "noise-lab: " << nl_status_name(f.status) << ": " << f.message << "\n";
    return exit_for(f.status);
  }
  return kExitUsage;
}
