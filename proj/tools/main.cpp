#include <algorithm>
#include <cmath>
#include <cstdint>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "ising/bp.hpp"
#include "ising/cavity.hpp"
#include "ising/exact.hpp"
#include "ising/experiments.hpp"
#include "ising/generators.hpp"
#include "ising/graph.hpp"
#include "ising/montecarlo.hpp"
#include "ising/parallel.hpp"
#include "ising/tree.hpp"
#include "output.hpp"
#include "verify.hpp"

using nlohmann::json;
using namespace ising;

namespace {

std::vector<double> parse_grid(const std::string& spec) {
  // "a:b:step" inclusive, or a single value.
  std::vector<double> out;
  size_t c1 = spec.find(':');
  if (c1 == std::string::npos) {
    out.push_back(std::stod(spec));
    return out;
  }
  size_t c2 = spec.find(':', c1 + 1);
  if (c2 == std::string::npos)
    throw CLI::ValidationError("grid", "expected a:b:step");
  double a = std::stod(spec.substr(0, c1));
  double b = std::stod(spec.substr(c1 + 1, c2 - c1 - 1));
  double step = std::stod(spec.substr(c2 + 1));
  if (!(step > 0)) throw CLI::ValidationError("grid", "step must be > 0");
  for (double x = a; x <= b + 1e-12; x += step) out.push_back(x);
  return out;
}

MessageSet parse_init(const Graph& g, const std::string& spec) {
  if (spec == "free") return init_messages(g, BPInit::Free);
  if (spec == "plus") return init_messages(g, BPInit::Plus);
  if (spec.rfind("const:", 0) == 0)
    return init_messages(g, std::stod(spec.substr(6)));
  throw CLI::ValidationError("--init", "expected free|plus|const:<c>");
}

struct GenOpts {
  std::string ensemble, degree, out = "-";
  int n = 0, k = 0;
  double gamma = 0.0;
  uint64_t seed = 1;
  bool multigraph = false;
};

int run_gen(const GenOpts& o) {
  cli::WallClock clock;
  Graph g;
  if (o.ensemble == "regular") {
    g = gen_random_regular(o.n, o.k, o.seed);
  } else if (o.ensemble == "er") {
    g = gen_erdos_renyi(o.n, o.gamma, o.seed);
  } else if (o.ensemble == "config") {
    g = gen_configuration(o.n, DegreeDistribution::parse_spec(o.degree), o.seed,
                          o.multigraph);
  } else {
    throw CLI::ValidationError("--ensemble", "expected regular|er|config");
  }
  cli::Output out(o.out);
  json cfg = {{"ensemble", o.ensemble},
              {"n", o.n},
              {"k", o.k},
              {"gamma", o.gamma},
              {"degree", o.degree},
              {"multigraph", o.multigraph}};
  out.metadata("gen", cfg, o.seed, thread_count(), clock.ms());
  write_graph(out.stream(), g);
  return 0;
}

struct CritOpts {
  std::string degree, out = "-";
  double rho_bar = 0.0;
};

int run_crit(const CritOpts& o) {
  cli::WallClock clock;
  double rho_bar = o.rho_bar;
  if (!o.degree.empty())
    rho_bar = DegreeDistribution::parse_spec(o.degree).mean_branching();
  if (!(rho_bar > 0))
    throw CLI::ValidationError("crit", "need --degree or --rho-bar > 0");
  CriticalBeta bc = critical_beta(rho_bar);
  cli::Output out(o.out);
  out.metadata("crit", {{"degree", o.degree}, {"rho_bar", rho_bar}}, 0,
               thread_count(), clock.ms());
  out.stream() << "rho_bar,beta_c,has_transition\n"
               << cli::fmt(rho_bar) << ','
               << (bc.has_transition ? cli::fmt(bc.value) : "inf") << ','
               << (bc.has_transition ? 1 : 0) << '\n';
  return 0;
}

struct BpOpts {
  std::string graph, init = "free", out = "-", messages_out, marginals_out;
  double beta = 0.0, field = 0.0, tol = 1e-10;
  int max_sweeps = 10000;
};

int run_bp(const BpOpts& o) {
  cli::WallClock clock;
  Graph g = read_graph_file(o.graph);
  IsingParams params(o.beta, o.field);
  if (o.field == 0.0)
    std::cerr << "warning: B = 0 carries no convergence guarantee\n";
  BPResult r =
      bp_fixed_point(g, params, parse_init(g, o.init), o.tol, o.max_sweeps);

  json cfg = {{"graph", o.graph},
              {"beta", o.beta},
              {"B", o.field},
              {"init", o.init},
              {"tol", o.tol},
              {"max_sweeps", o.max_sweeps},
              {"sweeps", r.sweeps},
              {"converged", r.converged}};
  cli::Output out(o.out);
  out.metadata("bp", cfg, 0, thread_count(), clock.ms());
  out.stream() << "sweep,residual\n";
  for (size_t s = 0; s < r.residuals.size(); ++s)
    out.stream() << (s + 1) << ',' << cli::fmt(r.residuals[s]) << '\n';

  if (!o.messages_out.empty()) {
    cli::Output mo(o.messages_out);
    mo.stream() << "i,j,h_ij\n";
    for (int e = 0; e < g.num_edges(); ++e) {
      auto [i, j] = g.edge(e);
      for (auto [a, b] : {std::pair{i, j}, std::pair{j, i}}) {
        double h =
            r.messages.h[static_cast<size_t>(g.directed_index(e, a))].value();
        mo.stream() << a << ',' << b << ','
                    << (h == kInf ? "inf" : cli::fmt(h)) << '\n';
      }
    }
  }
  if (!o.marginals_out.empty()) {
    cli::Output mo(o.marginals_out);
    mo.stream() << "i,magnetization\n";
    for (int v = 0; v < g.num_vertices(); ++v)
      mo.stream() << v << ','
                  << cli::fmt(vertex_marginal(g, params, r.messages, v)) << '\n';
  }
  if (!r.converged) {
    std::cerr << "bp: not converged after " << r.sweeps << " sweeps, residual "
              << r.residuals.back() << '\n';
    return 1;
  }
  return 0;
}

struct DeOpts {
  std::string degree, out = "-", population_out;
  double beta = 0.0, field = 0.0, tol = 0.0;
  int n = 100000, steps = 200, max_steps = 1000;
  uint64_t seed = 1;
  bool crn = false;
};

int run_de(const DeOpts& o) {
  cli::WallClock clock;
  DegreeDistribution p = DegreeDistribution::parse_spec(o.degree);
  IsingParams params(o.beta, o.field);
  if (o.field == 0.0)
    std::cerr << "warning: B = 0 carries no fixed-point guarantee\n";

  struct Row {
    int t;
    double mean, std, q01, q25, q50, q75, q99, w1_prev;
  };
  std::vector<Row> rows;
  Population pop = population_init(o.n);
  int window = 0;
  bool converged = o.tol <= 0.0;
  int limit = o.tol > 0.0 ? o.max_steps : o.steps;
  std::vector<double> sorted;
  auto quantile = [&sorted](double q) {
    double pos = q * static_cast<double>(sorted.size() - 1);
    size_t lo = static_cast<size_t>(pos);
    size_t hi = std::min(lo + 1, sorted.size() - 1);
    double frac = pos - static_cast<double>(lo);
    return sorted[lo] * (1.0 - frac) + sorted[hi] * frac;
  };
  for (int t = 0; t < limit; ++t) {
    Population next = population_step(pop, p, params, o.seed, o.crn);
    double w1 = w1_distance(pop, next);
    pop = std::move(next);
    sorted = pop.samples;
    std::sort(sorted.begin(), sorted.end());
    rows.push_back({pop.generation, pop.mean(), pop.stddev(), quantile(0.01),
                    quantile(0.25), quantile(0.50), quantile(0.75),
                    quantile(0.99), w1});
    if (o.tol > 0.0) {
      window = w1 <= o.tol ? window + 1 : 0;
      if (window >= 10) {
        converged = true;
        break;
      }
    }
  }

  json cfg = {{"degree", o.degree}, {"beta", o.beta},   {"B", o.field},
              {"N", o.n},           {"steps", o.steps}, {"tol", o.tol},
              {"crn", o.crn},       {"converged", converged}};
  cli::Output out(o.out);
  out.metadata("de", cfg, o.seed, thread_count(), clock.ms());
  out.stream() << "t,mean,std,q01,q25,q50,q75,q99,w1_prev\n";
  for (const Row& r : rows)
    out.stream() << r.t << ',' << cli::fmt(r.mean) << ',' << cli::fmt(r.std)
                 << ',' << cli::fmt(r.q01) << ',' << cli::fmt(r.q25) << ','
                 << cli::fmt(r.q50) << ',' << cli::fmt(r.q75) << ','
                 << cli::fmt(r.q99) << ',' << cli::fmt(r.w1_prev) << '\n';
  if (!o.population_out.empty()) {
    cli::Output po(o.population_out);
    for (double s : pop.samples) po.stream() << cli::fmt(s) << '\n';
  }
  if (!converged) {
    std::cerr << "de: no 10-step W1 window at or below tol within --max-steps\n";
    return 1;
  }
  return 0;
}

struct PhiOpts {
  std::string modes = "bethe", graph, degree, beta_grid = "0.5", out = "-";
  std::string ti_csv;
  double field = 0.2;
  int k = 0, pop_size = 100000, mc_samples = 100000, de_steps = 300,
      measure_sweeps = 2000;
  uint64_t seed = 1;
  bool extrapolate_b0 = false;
};

int run_phi(const PhiOpts& o) {
  cli::WallClock clock;
  std::vector<std::string> modes;
  {
    std::istringstream ss(o.modes);
    std::string m;
    while (std::getline(ss, m, ',')) modes.push_back(m);
  }
  if (modes.empty()) throw CLI::ValidationError("--mode", "empty mode list");
  for (const std::string& m : modes)
    if (m != "bethe" && m != "exact" && m != "ti")
      throw CLI::ValidationError("--mode", "expected bethe|exact|ti");
  std::vector<double> betas = parse_grid(o.beta_grid);

  bool want_exact = std::count(modes.begin(), modes.end(), "exact") > 0;
  bool want_ti = std::count(modes.begin(), modes.end(), "ti") > 0;
  bool want_bethe = std::count(modes.begin(), modes.end(), "bethe") > 0;
  Graph g;
  if (want_exact || want_ti) {
    if (o.graph.empty())
      throw CLI::ValidationError("--graph", "required for exact/ti modes");
    g = read_graph_file(o.graph);
  }
  if (want_bethe && o.k < 2 && o.degree.empty())
    throw CLI::ValidationError("--degree", "bethe mode needs --degree or --k");

  DegreeDistribution deg = DegreeDistribution::poisson(1.0);
  if (want_bethe && o.k < 2) deg = DegreeDistribution::parse_spec(o.degree);
  auto bethe_at = [&](double beta, double field) -> PhiEstimate {
    IsingParams params(beta, field);
    if (o.k >= 2) return {bethe_phi_regular(o.k, params), 0.0};
    Population pop = population_init(o.pop_size);
    for (int t = 0; t < o.de_steps; ++t)
      pop = population_step(pop, deg, params, o.seed);
    return bethe_phi(deg, pop, params, o.mc_samples, o.seed);
  };

  TIResult ti;
  if (want_ti) {
    MCConfig cfg;
    cfg.measure_sweeps = o.measure_sweeps;
    ti = thermo_integrate(g, o.field, betas, cfg, o.seed);
    if (!o.ti_csv.empty()) {
      cli::Output to(o.ti_csv);
      to.stream() << "beta,energy,stderr,phi,phi_stderr\n";
      for (size_t i = 0; i < ti.beta.size(); ++i)
        to.stream() << cli::fmt(ti.beta[i]) << ',' << cli::fmt(ti.energy[i])
                    << ',' << cli::fmt(ti.energy_std_error[i]) << ','
                    << cli::fmt(ti.phi[i]) << ',' << cli::fmt(ti.std_error[i])
                    << '\n';
    }
  }

  json cfg = {{"modes", o.modes},       {"graph", o.graph},
              {"degree", o.degree},     {"k", o.k},
              {"B", o.field},           {"beta_grid", o.beta_grid},
              {"pop_size", o.pop_size}, {"mc_samples", o.mc_samples},
              {"de_steps", o.de_steps}, {"measure_sweeps", o.measure_sweeps},
              {"extrapolate_b0", o.extrapolate_b0}};
  cli::Output out(o.out);
  out.metadata("phi", cfg, o.seed, thread_count(), clock.ms());
  out.stream() << "beta";
  for (const std::string& m : modes) out.stream() << ",phi_" << m << ",se_" << m;
  if (o.extrapolate_b0) out.stream() << ",phi_bethe_b0";
  out.stream() << '\n';

  for (size_t bi = 0; bi < betas.size(); ++bi) {
    double beta = betas[bi];
    out.stream() << cli::fmt(beta);
    for (const std::string& m : modes) {
      PhiEstimate e{};
      if (m == "exact") {
        e = {exact_phi_n(g, IsingParams(beta, o.field)), 0.0};
      } else if (m == "ti") {
        e = {ti.phi[bi], ti.std_error[bi]};
      } else {
        e = bethe_at(beta, o.field);
      }
      out.stream() << ',' << cli::fmt(e.value) << ',' << cli::fmt(e.std_error);
    }
    if (o.extrapolate_b0) {
      // linear-in-B extrapolation of the bethe value toward B -> 0+
      std::vector<double> bs{o.field, o.field / 2, o.field / 4}, ys;
      for (double b : bs) ys.push_back(bethe_at(beta, b).value);
      LinearFit fit = fit_linear(bs, ys);
      out.stream() << ',' << cli::fmt(fit.intercept);
    }
    out.stream() << '\n';
  }
  return 0;
}

struct TreeOpts {
  std::string experiment, degree, out = "-";
  double beta = 0.8, field = 0.3;
  int max_depth = 8, trees = 200, max_nodes = 14;
  uint64_t seed = 1;
};

int run_tree(const TreeOpts& o) {
  cli::WallClock clock;
  DegreeDistribution p = DegreeDistribution::parse_spec(o.degree);
  IsingParams params(o.beta, o.field);
  cli::Output out(o.out);
  json cfg = {{"experiment", o.experiment}, {"degree", o.degree},
              {"beta", o.beta},             {"B", o.field},
              {"max_depth", o.max_depth},   {"trees", o.trees},
              {"max_nodes", o.max_nodes}};

  if (o.experiment == "gap") {
    GapCurve c = tree_gap_curve(p, params, o.max_depth, o.trees, o.seed);
    cfg["lambda_fit"] = -c.fit.slope;
    cfg["fit_r2"] = c.fit.r2;
    out.metadata("tree", cfg, o.seed, thread_count(), clock.ms());
    out.stream() << "depth,gap_mean,gap_se\n";
    for (size_t i = 0; i < c.depth.size(); ++i)
      out.stream() << c.depth[i] << ',' << cli::fmt(c.mean[i]) << ','
                   << cli::fmt(c.std_error[i]) << '\n';
    return 0;
  }
  if (o.experiment == "decay") {
    DecayCurve c =
        tree_correlation_decay(p, params, o.max_depth, o.trees, o.seed);
    cfg["lambda_fit"] = -c.fit.slope;
    cfg["fit_r2"] = c.fit.r2;
    out.metadata("tree", cfg, o.seed, thread_count(), clock.ms());
    out.stream() << "r,corr_sum_mean,corr_sum_se\n";
    for (size_t i = 0; i < c.radius.size(); ++i)
      out.stream() << c.radius[i] << ',' << cli::fmt(c.mean[i]) << ','
                   << cli::fmt(c.std_error[i]) << '\n';
    return 0;
  }
  if (o.experiment == "simon") {
    SimonStats st =
        simon_inequality_sweep(p, params, o.trees, o.max_nodes, o.seed);
    cfg["checks"] = st.checks;
    cfg["violations"] = st.violations;
    cfg["min_slack"] = st.min_slack;
    out.metadata("tree", cfg, o.seed, thread_count(), clock.ms());
    out.stream() << "t,checks,min_slack\n";
    for (size_t i = 0; i < st.t_values.size(); ++i)
      out.stream() << st.t_values[i] << ',' << st.t_checks[i] << ','
                   << cli::fmt(st.t_min_slack[i]) << '\n';
    return st.violations == 0 ? 0 : 1;
  }
  throw CLI::ValidationError("--experiment", "expected gap|decay|simon");
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Ising models on sparse locally tree-like graphs"};
  app.require_subcommand(1);

  GenOpts gen;
  CLI::App* cgen = app.add_subcommand("gen", "generate a random graph");
  cgen->add_option("--ensemble", gen.ensemble, "regular|er|config")->required();
  cgen->add_option("--n", gen.n, "vertex count")->required();
  cgen->add_option("--k", gen.k, "degree (regular)");
  cgen->add_option("--gamma", gen.gamma, "edge density m = floor(n*gamma) (er)");
  cgen->add_option("--degree", gen.degree,
                   "degree law (config): poisson:<c> | table:k:p,... | file");
  cgen->add_flag("--multigraph", gen.multigraph, "keep parallel edges (config)");
  cgen->add_option("--seed", gen.seed, "rng seed");
  cgen->add_option("--out", gen.out, "output graph file");

  CritOpts crit;
  CLI::App* ccrit = app.add_subcommand("crit", "critical inverse temperature");
  ccrit->add_option("--degree", crit.degree, "degree law spec");
  ccrit->add_option("--rho-bar", crit.rho_bar, "mean branching factor");
  ccrit->add_option("--out", crit.out, "output CSV");

  BpOpts bp;
  CLI::App* cbp = app.add_subcommand("bp", "belief propagation fixed point");
  cbp->add_option("--graph", bp.graph, "graph file")->required();
  cbp->add_option("--beta", bp.beta, "inverse temperature")->required();
  cbp->add_option("--B", bp.field, "magnetic field")->required();
  cbp->add_option("--init", bp.init, "free|plus|const:<c>");
  cbp->add_option("--tol", bp.tol, "tanh-space residual tolerance");
  cbp->add_option("--max-sweeps", bp.max_sweeps, "sweep cap");
  cbp->add_option("--out", bp.out, "residual history CSV");
  cbp->add_option("--messages-out", bp.messages_out, "message dump CSV (i,j,h_ij)");
  cbp->add_option("--marginals-out", bp.marginals_out,
                  "marginal dump CSV (i,magnetization)");

  DeOpts de;
  CLI::App* cde = app.add_subcommand("de", "density evolution trajectory");
  cde->add_option("--degree", de.degree, "degree law spec")->required();
  cde->add_option("--beta", de.beta, "inverse temperature")->required();
  cde->add_option("--B", de.field, "magnetic field")->required();
  cde->add_option("--N", de.n, "population size");
  cde->add_option("--steps", de.steps, "fixed number of generations");
  cde->add_option("--tol", de.tol, "W1 tolerance (10-step window); overrides --steps");
  cde->add_option("--max-steps", de.max_steps, "generation cap in tol mode");
  cde->add_flag("--crn", de.crn, "common random numbers across generations");
  cde->add_option("--seed", de.seed, "rng seed");
  cde->add_option("--out", de.out, "trajectory CSV");
  cde->add_option("--population-out", de.population_out,
                  "final samples, one per line");

  PhiOpts phi;
  CLI::App* cphi = app.add_subcommand("phi", "free-entropy comparison table");
  cphi->add_option("--mode", phi.modes, "comma list of bethe|exact|ti");
  cphi->add_option("--graph", phi.graph, "graph file (exact/ti)");
  cphi->add_option("--degree", phi.degree, "degree law spec (bethe)");
  cphi->add_option("--k", phi.k, "regular degree (bethe closed form)");
  cphi->add_option("--B", phi.field, "magnetic field");
  cphi->add_option("--beta", phi.beta_grid, "beta value or a:b:step grid");
  cphi->add_option("--pop-size", phi.pop_size, "population size (bethe)");
  cphi->add_option("--mc-samples", phi.mc_samples, "MC samples for the functional");
  cphi->add_option("--de-steps", phi.de_steps, "density-evolution generations");
  cphi->add_option("--measure-sweeps", phi.measure_sweeps, "MC sweeps per TI point");
  cphi->add_option("--ti-csv", phi.ti_csv,
                   "also write the TI trace as beta,energy,stderr,phi,phi_stderr");
  cphi->add_flag("--extrapolate-b0", phi.extrapolate_b0,
                 "add a linear B->0 extrapolation column for the bethe value");
  cphi->add_option("--seed", phi.seed, "rng seed");
  cphi->add_option("--out", phi.out, "output CSV");

  TreeOpts tree;
  CLI::App* ctree = app.add_subcommand("tree", "tree boundary/decay studies");
  ctree->add_option("--experiment", tree.experiment, "gap|decay|simon")->required();
  ctree->add_option("--degree", tree.degree, "degree law spec")->required();
  ctree->add_option("--beta", tree.beta, "inverse temperature");
  ctree->add_option("--B", tree.field, "magnetic field");
  ctree->add_option("--max-depth", tree.max_depth, "deepest generation");
  ctree->add_option("--trees", tree.trees, "number of sampled trees");
  ctree->add_option("--max-nodes", tree.max_nodes, "node cap (simon)");
  ctree->add_option("--seed", tree.seed, "rng seed");
  ctree->add_option("--out", tree.out, "output CSV");

  bool quick = false;
  CLI::App* cverify = app.add_subcommand("verify", "run the invariant suite");
  cverify->add_flag("--quick", quick, "reduced sizes");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return 2;
  }

  try {
    if (cgen->parsed()) return run_gen(gen);
    if (ccrit->parsed()) return run_crit(crit);
    if (cbp->parsed()) return run_bp(bp);
    if (cde->parsed()) return run_de(de);
    if (cphi->parsed()) return run_phi(phi);
    if (ctree->parsed()) return run_tree(tree);
    if (cverify->parsed()) return cli::run_verify(quick) == 0 ? 0 : 1;
  } catch (const CLI::ValidationError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 2;
  } catch (const std::invalid_argument& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  }
  return 2;
}
