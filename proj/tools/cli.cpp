#include "averkit/cli.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <limits>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "averkit/components.hpp"
#include "averkit/core.hpp"
#include "averkit/dynamics.hpp"
#include "averkit/edge_list.hpp"
#include "averkit/electrical.hpp"
#include "averkit/equilibrium.hpp"
#include "averkit/generators.hpp"
#include "averkit/parallel.hpp"
#include "averkit/regimes.hpp"
#include "averkit/report.hpp"

namespace averkit::cli {

namespace {

namespace fs = std::filesystem;

int exit_code_for(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::ParseError:
    case ErrorKind::InvalidArgument:
    case ErrorKind::NegativeWeight:
    case ErrorKind::DuplicateEdge:
    case ErrorKind::NodeOutOfRange:
      return kExitParse;
    case ErrorKind::NotUndirected:
    case ErrorKind::Disconnected:
    case ErrorKind::InvalidBlockStructure:
    case ErrorKind::ModifiedGraphDisconnected:
      return kExitGate;
    default:
      return kExitNumeric;
  }
}

std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r\n");
  if (b == std::string::npos) return {};
  const auto e = s.find_last_not_of(" \t\r\n");
  return s.substr(b, e - b + 1);
}

std::vector<std::string> split(const std::string& s, char sep) {
  std::vector<std::string> parts;
  std::stringstream ss(s);
  std::string item;
  while (std::getline(ss, item, sep)) {
    item = trim(item);
    if (!item.empty()) parts.push_back(item);
  }
  return parts;
}

double parse_double(const std::string& s, const std::string& what) {
  std::size_t used = 0;
  double v = 0.0;
  try {
    v = std::stod(s, &used);
  } catch (const std::exception&) {
    used = 0;
  }
  if (used == 0 || used != s.size()) throw Error(ErrorKind::ParseError, "bad number in " + what + ": '" + s + "'");
  return v;
}

NodeId parse_node(const std::string& s, std::size_t n, const std::string& what) {
  std::size_t used = 0;
  unsigned long long v = 0;
  try {
    v = std::stoull(s, &used);
  } catch (const std::exception&) {
    used = 0;
  }
  if (used == 0 || used != s.size() || s[0] == '-') {
    throw Error(ErrorKind::ParseError, "bad node id in " + what + ": '" + s + "'");
  }
  if (v >= n) throw Error(ErrorKind::NodeOutOfRange, what + ": node " + s + " out of range");
  return static_cast<NodeId>(v);
}

std::vector<double> parse_doubles(const std::string& s, const std::string& what) {
  std::vector<double> out;
  for (const auto& p : split(s, ',')) out.push_back(parse_double(p, what));
  if (out.empty()) throw Error(ErrorKind::ParseError, what + " is empty");
  return out;
}

std::vector<NodeId> parse_nodes(const std::string& s, std::size_t n, const std::string& what) {
  std::vector<NodeId> out;
  for (const auto& p : split(s, ',')) out.push_back(parse_node(p, n, what));
  if (out.empty()) throw Error(ErrorKind::ParseError, what + " is empty");
  return out;
}

/// Whitespace- or comma-separated values, '#' comments allowed.
Vector read_x0_file(const std::string& path, std::size_t n) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorKind::ParseError, "cannot open x0 file " + path);
  std::vector<double> vals;
  std::string line;
  while (std::getline(in, line)) {
    line = line.substr(0, line.find('#'));
    std::replace(line.begin(), line.end(), ',', ' ');
    std::istringstream ls(line);
    std::string tok;
    while (ls >> tok) vals.push_back(parse_double(tok, "x0 file"));
  }
  if (vals.size() != n) {
    throw Error(ErrorKind::ParseError, "x0 file has " + std::to_string(vals.size()) + " values, graph has " +
                                           std::to_string(n) + " nodes");
  }
  return Eigen::Map<Vector>(vals.data(), static_cast<Eigen::Index>(n));
}

/// "default=v,node=value,..."; unspecified nodes take the default (0).
Vector parse_x0_spec(const std::string& spec, std::size_t n) {
  double fill = 0.0;
  std::vector<std::pair<NodeId, double>> set;
  for (const auto& item : split(spec, ',')) {
    const auto eq = item.find('=');
    if (eq == std::string::npos) throw Error(ErrorKind::ParseError, "x0 spec item without '=': '" + item + "'");
    const std::string key = trim(item.substr(0, eq));
    const double v = parse_double(trim(item.substr(eq + 1)), "x0 spec");
    if (key == "default") {
      fill = v;
    } else {
      set.emplace_back(parse_node(key, n, "x0 spec"), v);
    }
  }
  Vector x = Vector::Constant(static_cast<Eigen::Index>(n), fill);
  for (auto [i, v] : set) x[i] = v;
  return x;
}

std::string fmt17(double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

void write_atomically(const fs::path& path, const std::string& data) {
  fs::path tmp = path;
  tmp += ".tmp";
  {
    std::ofstream f(tmp, std::ios::binary);
    if (!f) throw Error(ErrorKind::InvalidArgument, "cannot write " + path.string());
    f << data;
  }
  fs::rename(tmp, path);
}

double max_abs_diff(const Matrix& a, const Matrix& b) {
  return a.size() == 0 ? 0.0 : (a - b).cwiseAbs().maxCoeff();
}

struct Outcome {
  std::string data;
  Json config = Json::object();
  std::vector<std::uint64_t> seeds;
  std::vector<std::pair<fs::path, std::string>> sidecars;
};

// ---------------------------------------------------------------- analyze

struct AnalyzeArgs {
  std::string graph;
  double alpha = 0.5;
  std::string method = "block";
  std::size_t samples = 10'000;
  std::uint64_t seed = 0;
  std::string x0_file, x0_spec;
  bool cross_check = false;
  std::string format = "json";
};

InfluenceMethod make_method(const std::string& name, std::size_t samples, std::uint64_t seed) {
  if (name == "block") return BlockSolve{};
  if (name == "laplace") return LaplaceSolve{};
  MonteCarlo mc;
  mc.samples = samples;
  mc.seed = seed;
  return mc;
}

Outcome cmd_analyze(const AnalyzeArgs& a) {
  Outcome o;
  const WeightedDigraph raw = read_edge_list_file(a.graph);
  const std::size_t n = raw.size();
  std::vector<NodeId> looped;
  for (NodeId i = 0; i < n; ++i) {
    if (raw.out_arcs(i).empty()) looped.push_back(i);
  }
  const WeightedDigraph g = ensure_positive_outdegree(raw);
  const Condensation cond = condense(g);
  const DerivedMatrices m = derive_matrices(g, a.alpha);

  Vector x0;
  if (!a.x0_file.empty()) {
    x0 = read_x0_file(a.x0_file, n);
  } else {
    x0 = parse_x0_spec(a.x0_spec.empty() ? "default=0" : a.x0_spec, n);
  }

  const Vector xbar = sink_averages(cond, m, x0);
  const InfluenceResult inf = influence_matrix(cond, m, make_method(a.method, a.samples, a.seed));
  const Vector x_star = inf.H * xbar;

  o.config = {{"command", "analyze"}, {"graph", a.graph},     {"alpha", a.alpha},
              {"method", a.method},   {"samples", a.samples}, {"seed", a.seed},
              {"x0_file", a.x0_file}, {"x0_spec", a.x0_spec}, {"cross_check", a.cross_check}};
  if (a.method == "mc" || a.cross_check) o.seeds.push_back(a.seed);

  if (a.format == "csv") {
    std::string csv = "node,x_star\n";
    for (Eigen::Index i = 0; i < x_star.size(); ++i) csv += std::to_string(i) + "," + fmt17(x_star[i]) + "\n";
    o.data = std::move(csv);
    return o;
  }

  Json j;
  j["n"] = n;
  j["alpha"] = a.alpha;
  j["condensation"] = to_json(cond);
  j["added_self_loops"] = looped;
  Json eq = equilibrium_json(xbar, inf);
  for (auto it = eq.begin(); it != eq.end(); ++it) j[it.key()] = it.value();

  if (a.cross_check) {
    const InfluenceResult block = influence_matrix(cond, m, BlockSolve{});
    const InfluenceResult lap = influence_matrix(cond, m, LaplaceSolve{});
    MonteCarlo mcm;
    mcm.samples = a.samples;
    mcm.seed = a.seed;
    const InfluenceResult mc = influence_matrix(cond, m, mcm);
    double worst_z = 0.0;
    for (Eigen::Index i = 0; i < block.H.rows(); ++i) {
      for (Eigen::Index k = 0; k < block.H.cols(); ++k) {
        const double p = block.H(i, k);
        const double se = std::sqrt(std::max(p * (1.0 - p), 0.0) / static_cast<double>(a.samples));
        const double d = std::abs(mc.H(i, k) - p);
        const double z = se > 0.0 ? d / se : (d > 1e-12 ? std::numeric_limits<double>::infinity() : 0.0);
        worst_z = std::max(worst_z, z);
      }
    }
    Json cc;
    cc["H_block"] = to_json(block.H);
    cc["H_laplace"] = to_json(lap.H);
    cc["H_mc"] = to_json(mc.H);
    cc["max_disagreement"] = max_abs_diff(block.H, lap.H);
    cc["max_x_star_disagreement"] = max_abs_diff(block.H * xbar, lap.H * xbar);
    cc["mc_max_abs_z"] = std::isfinite(worst_z) ? Json(worst_z) : Json("inf");
    cc["mc_within_4_stderr"] = worst_z <= 4.0;
    j["cross_check"] = std::move(cc);
  }
  o.data = j.dump(2) + "\n";
  return o;
}

// ------------------------------------------------------------- electrical

struct ElectricalArgs {
  std::string graph;
  std::string sources, targets;
  bool theorem3 = false;
  std::string xbar;
};

Outcome cmd_electrical(const ElectricalArgs& a) {
  Outcome o;
  o.config = {{"command", "electrical"}, {"graph", a.graph},       {"sources", a.sources},
              {"targets", a.targets},    {"theorem3", a.theorem3}, {"xbar", a.xbar}};
  const WeightedDigraph g = ensure_positive_outdegree(read_edge_list_file(a.graph));
  const std::size_t n = g.size();
  const Condensation cond = condense(g);
  const RestrictionCheck gate = check_undirected_restriction(g, cond);
  if (!gate.symmetric) {
    const auto [i, j] = *gate.asymmetric_pair;
    throw Error(ErrorKind::NotUndirected, "interior is not undirected: W(" + std::to_string(i) + "," +
                                              std::to_string(j) + ") != W(" + std::to_string(j) + "," +
                                              std::to_string(i) + ")");
  }
  if (!gate.connected) throw Error(ErrorKind::Disconnected, "interior is not connected");

  // Sink links are made bidirectional when the graph itself is directed.
  const WeightedDigraph net = classify(g).undirected ? g : modified_tilde_graph(g, cond);

  std::vector<NodeId> A, B;
  if (!a.sources.empty() || !a.targets.empty()) {
    A = parse_nodes(a.sources, n, "--sources");
    B = parse_nodes(a.targets, n, "--targets");
  } else if (cond.sink_count() >= 2) {
    A = cond.sink_nodes(0);
    for (std::size_t k = 1; k < cond.sink_count(); ++k) {
      for (NodeId v : cond.sink_nodes(k)) B.push_back(v);
    }
  } else {
    throw Error(ErrorKind::InvalidArgument, "--sources and --targets are required with fewer than two sinks");
  }

  const ResistanceSolution sol = solve_unit_voltage(net, A, B);
  const ThompsonFlow flow = thompson_flow(net, A, B);
  auto join = [](const std::vector<NodeId>& v) {
    std::string s;
    for (std::size_t k = 0; k < v.size(); ++k) s += (k ? "," : "") + std::to_string(v[k]);
    return s;
  };

  Json j;
  j["n"] = n;
  j["gate"] = {{"symmetric", gate.symmetric}, {"connected", gate.connected}};
  j["sources"] = A;
  j["targets"] = B;
  j["r_eff"] = {{join(A) + "|" + join(B), sol.resistance}};
  j["voltages"] = to_json(sol.voltages);
  j["primal_energy"] = sol.energy;
  j["inverse_resistance"] = 1.0 / sol.resistance;
  j["dual_energy"] = flow.dual_energy;
  j["net_outflow"] = flow.net_outflow;
  j["max_interior_imbalance"] = flow.max_interior_imbalance;
  j["flows"] = to_json(flow)["flows"];

  if (a.theorem3) {
    const std::size_t s = cond.sink_count();
    if (s < 2) throw Error(ErrorKind::InvalidArgument, "--theorem3 needs at least two sinks");
    Vector xbar(static_cast<Eigen::Index>(s));
    if (a.xbar.empty()) {
      for (std::size_t k = 0; k < s; ++k) xbar[static_cast<Eigen::Index>(k)] = static_cast<double>(k) / static_cast<double>(s - 1);
    } else {
      const auto vals = parse_doubles(a.xbar, "--xbar");
      if (vals.size() != s) throw Error(ErrorKind::InvalidArgument, "--xbar needs one value per sink");
      for (std::size_t k = 0; k < s; ++k) xbar[static_cast<Eigen::Index>(k)] = vals[k];
    }
    const ResistanceEquilibrium via = equilibrium_via_resistances(g, cond, xbar);
    const Matrix H = influence_matrix(cond, derive_matrices(g, 0.5), BlockSolve{}).H;
    const Vector direct = H * xbar;
    j["theorem3"] = {{"xbar", to_json(xbar)},
                     {"x_resistance", to_json(via.x)},
                     {"x_direct", to_json(direct)},
                     {"terminal_resistance", via.terminal_resistance},
                     {"deviation", (via.x - direct).cwiseAbs().maxCoeff()}};
  }
  o.data = j.dump(2) + "\n";
  return o;
}

// ------------------------------------------------------------------ sweep

struct SweepArgs {
  std::string family = "matched_er";
  std::string gamma = "0.01,1,100";
  std::string beta = "1";
  std::string m = "64";
  double omega = 2.0;
  std::size_t seeds = 5;
  std::uint64_t seed = 0;
  double epsilon = 0.1;
  std::string matching = "identity";
};

Outcome cmd_sweep(const SweepArgs& a) {
  Outcome o;
  if (a.family != "matched_er") throw Error(ErrorKind::InvalidArgument, "unknown sweep family " + a.family);
  if (!(a.epsilon > 0.0)) throw Error(ErrorKind::InvalidArgument, "--epsilon must be positive");
  const auto gammas = parse_doubles(a.gamma, "--gamma");
  const auto betas = parse_doubles(a.beta, "--beta");
  std::vector<std::size_t> sizes;
  for (double v : parse_doubles(a.m, "--m")) {
    if (v < 2 || v != std::floor(v)) throw Error(ErrorKind::InvalidArgument, "--m values must be integers >= 2");
    sizes.push_back(static_cast<std::size_t>(v));
  }
  o.config = {{"command", "sweep"}, {"family", a.family}, {"gamma", gammas},
              {"beta", betas},      {"m", sizes},         {"omega", a.omega},
              {"seeds", a.seeds},   {"seed", a.seed},     {"epsilon", a.epsilon},
              {"matching", a.matching}};

  struct Point {
    double gamma, beta;
    std::size_t m;
    std::uint64_t seed;
  };
  std::vector<Point> grid;
  for (double gm : gammas)
    for (double bt : betas)
      for (std::size_t m : sizes)
        for (std::size_t s = 0; s < a.seeds; ++s) grid.push_back({gm, bt, m, a.seed + s});
  for (std::size_t s = 0; s < a.seeds; ++s) o.seeds.push_back(a.seed + s);

  std::vector<std::string> rows(grid.size());
  parallel_for(grid.size(), [&](std::size_t idx) {
    const Point& p = grid[idx];
    MatchedConfig cfg;
    cfg.m = p.m;
    cfg.omega = a.omega;
    cfg.beta = p.beta;
    cfg.gamma = p.gamma;
    cfg.seed = p.seed;
    cfg.matching = a.matching == "permuted" ? Matching::Permuted : Matching::Identity;
    const MatchedCommunities mc = matched_communities(cfg);
    const Condensation cond = condense(mc.graph);
    const Matrix H = influence_matrix(cond, derive_matrices(mc.graph, 0.5), BlockSolve{}).H;
    Vector xbar(2);
    xbar << 0.0, 1.0;
    const Vector x = H * xbar;
    const auto [y0, y1] = community_means(x, mc.spec);
    const Proposition3Bounds b = proposition3_bounds(mc.spec);
    const RegimeMetrics rm = regime_metrics(x, xbar, a.epsilon);
    double fluidity = std::numeric_limits<double>::quiet_NaN();
    double bound = std::numeric_limits<double>::quiet_NaN();
    try {
      const Theorem4Result t4 = theorem4_bound(mc.graph, cond, xbar, x, a.epsilon);
      fluidity = t4.fluidity;
      bound = t4.bound;
    } catch (const Error&) {
    }
    std::string row;
    for (double v : {p.gamma, p.beta}) row += fmt17(v) + ",";
    row += std::to_string(mc.spec.n0) + "," + std::to_string(mc.spec.n1);
    for (double v : {y0, y1, b.bound_h[0], b.bound_h[1], b.bound_gap, rm.polar_fraction, rm.homog_fraction,
                     fluidity, bound}) {
      row += "," + fmt17(v);
    }
    rows[idx] = row + "\n";
  });

  std::string csv = "gamma,beta,n0,n1,y0,y1,bound_h0,bound_h1,gap_bound,polar_frac,homog_frac,fluidity,thm4_bound\n";
  for (const auto& r : rows) csv += r;
  o.data = std::move(csv);
  return o;
}

// --------------------------------------------------------------- generate

struct GenerateArgs {
  std::string family;
  std::size_t n = 0;
  double c = 2.0;
  std::size_t d = 1;
  std::size_t side = 0;
  std::size_t m = 0;
  double omega = 2.0, beta = 1.0, gamma = 1.0;
  std::uint64_t seed = 0;
  std::string matching = "identity";
};

Outcome cmd_generate(const GenerateArgs& a, const std::string& output) {
  Outcome o;
  WeightedDigraph g;
  if (a.family == "er") {
    const ErdosRenyiGraph er = erdos_renyi(a.n, a.c, a.seed);
    g = er.graph;
    o.config = {{"family", "er"}, {"n", a.n}, {"c", a.c}, {"seed", a.seed}, {"p", er.p},
                {"connected", er.connected}, {"edge_count", er.edge_count}};
    o.seeds.push_back(a.seed);
  } else if (a.family == "torus") {
    g = torus(a.d, a.side);
    o.config = {{"family", "torus"}, {"d", a.d}, {"side", a.side}};
  } else if (a.family == "matched_er") {
    MatchedConfig cfg;
    cfg.m = a.m;
    cfg.omega = a.omega;
    cfg.beta = a.beta;
    cfg.gamma = a.gamma;
    cfg.seed = a.seed;
    cfg.matching = a.matching == "permuted" ? Matching::Permuted : Matching::Identity;
    const MatchedCommunities mc = matched_communities(cfg);
    g = mc.graph;
    o.config = to_json(cfg);
    o.config["internal_edges"] = mc.internal_edges;
    o.config["attempts"] = mc.attempts;
    o.seeds.push_back(a.seed);
  } else {
    throw Error(ErrorKind::InvalidArgument, "unknown family " + a.family);
  }
  std::ostringstream ss;
  write_edge_list(ss, g);
  o.data = ss.str();
  if (!output.empty()) o.sidecars.emplace_back(fs::path(output + ".config.json"), o.config.dump(2) + "\n");
  o.config["command"] = "generate";
  return o;
}

// ------------------------------------------------------------------ driver

std::vector<std::string> strip_option(const std::vector<std::string>& args, const std::string& name) {
  std::vector<std::string> out;
  for (std::size_t i = 0; i < args.size(); ++i) {
    if (args[i] == name) {
      ++i;
      continue;
    }
    if (args[i].rfind(name + "=", 0) == 0) continue;
    out.push_back(args[i]);
  }
  return out;
}

int dispatch(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

int run_replay(const std::string& manifest_path, const std::string& output, std::ostream& out,
               std::ostream& err) {
  std::ifstream in(manifest_path);
  if (!in) throw Error(ErrorKind::ParseError, "cannot open manifest " + manifest_path);
  Json manifest;
  try {
    manifest = Json::parse(in);
  } catch (const Json::exception& e) {
    throw Error(ErrorKind::ParseError, std::string("manifest is not valid JSON: ") + e.what());
  }
  if (!manifest.contains("argv") || !manifest["argv"].is_array()) {
    throw Error(ErrorKind::ParseError, "manifest has no argv array");
  }
  std::vector<std::string> args = manifest["argv"].get<std::vector<std::string>>();
  if (!args.empty() && args[0] == "replay") throw Error(ErrorKind::ParseError, "manifest records a replay");
  args = strip_option(strip_option(strip_option(args, "--manifest"), "--output"), "-o");
  if (!output.empty()) {
    args.push_back("--output");
    args.push_back(output);
  }
  return dispatch(args, out, err);
}

int dispatch(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Averaging dynamics on weighted digraphs"};
  app.name("averkit");
  app.require_subcommand(1);
  app.set_version_flag("--version", std::string(kVersion));
  std::string output, manifest_path;

  auto add_common = [&](CLI::App* sub) {
    sub->add_option("-o,--output", output, "Write data here instead of stdout");
    sub->add_option("--manifest", manifest_path, "Run manifest path (default: <output>.manifest.json)");
  };

  AnalyzeArgs an;
  auto* analyze = app.add_subcommand("analyze", "Condensation, sink averages, influence matrix, equilibrium");
  analyze->add_option("graph", an.graph, "Edge-list file")->required();
  analyze->add_option("--alpha", an.alpha, "Laziness alpha in [0, 1)");
  analyze->add_option("--method", an.method)->check(CLI::IsMember({"block", "laplace", "mc"}));
  analyze->add_option("--samples", an.samples, "Monte Carlo walks per node");
  analyze->add_option("--seed", an.seed);
  auto* x0f = analyze->add_option("--x0", an.x0_file, "File with n initial states");
  analyze->add_option("--x0-spec", an.x0_spec, "\"default=v,node=value,...\"")->excludes(x0f);
  analyze->add_flag("--cross-check", an.cross_check, "Run all three methods and report disagreement");
  analyze->add_option("--format", an.format)->check(CLI::IsMember({"json", "csv"}));
  add_common(analyze);

  ElectricalArgs el;
  auto* electrical = app.add_subcommand("electrical", "Effective resistance, flows, resistance equilibrium");
  electrical->add_option("graph", el.graph, "Edge-list file")->required();
  electrical->add_option("--sources", el.sources, "Comma-separated nodes held at voltage 1");
  electrical->add_option("--targets", el.targets, "Comma-separated nodes held at voltage 0");
  electrical->add_flag("--theorem3", el.theorem3, "Compare the resistance-formula equilibrium with the direct one");
  electrical->add_option("--xbar", el.xbar, "Comma-separated sink values");
  add_common(electrical);

  SweepArgs sw;
  auto* sweep = app.add_subcommand("sweep", "Two-community regime sweep (CSV)");
  sweep->add_option("--family", sw.family)->check(CLI::IsMember({"matched_er"}));
  sweep->add_option("--gamma", sw.gamma, "Comma-separated gamma grid");
  sweep->add_option("--beta", sw.beta, "Comma-separated beta grid");
  sweep->add_option("--m", sw.m, "Comma-separated community sizes");
  sweep->add_option("--omega", sw.omega);
  sweep->add_option("--seeds", sw.seeds, "Seeds per grid point");
  sweep->add_option("--seed", sw.seed, "First seed");
  sweep->add_option("--epsilon", sw.epsilon);
  sweep->add_option("--matching", sw.matching)->check(CLI::IsMember({"identity", "permuted"}));
  std::string sweep_format = "csv";
  sweep->add_option("--format", sweep_format)->check(CLI::IsMember({"csv"}));
  add_common(sweep);

  GenerateArgs ge;
  auto* generate = app.add_subcommand("generate", "Write a generated graph as an edge list");
  generate->add_option("family", ge.family)->required()->check(CLI::IsMember({"er", "torus", "matched_er"}));
  generate->add_option("--n", ge.n);
  generate->add_option("--c", ge.c);
  generate->add_option("--d", ge.d);
  generate->add_option("--side", ge.side);
  generate->add_option("--m", ge.m);
  generate->add_option("--omega", ge.omega);
  generate->add_option("--beta", ge.beta);
  generate->add_option("--gamma", ge.gamma);
  generate->add_option("--seed", ge.seed);
  generate->add_option("--matching", ge.matching)->check(CLI::IsMember({"identity", "permuted"}));
  add_common(generate);

  std::string replay_manifest;
  auto* replay = app.add_subcommand("replay", "Re-run the command recorded in a manifest");
  replay->add_option("manifest", replay_manifest)->required();
  replay->add_option("-o,--output", output, "Override the recorded output path");

  try {
    std::vector<std::string> rev(args.rbegin(), args.rend());
    app.parse(rev);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kExitOk : kExitParse;
  }

  if (replay->parsed()) return run_replay(replay_manifest, output, out, err);

  const auto t0 = std::chrono::steady_clock::now();
  Outcome o;
  if (analyze->parsed()) {
    o = cmd_analyze(an);
  } else if (electrical->parsed()) {
    o = cmd_electrical(el);
  } else if (sweep->parsed()) {
    o = cmd_sweep(sw);
  } else {
    o = cmd_generate(ge, output);
  }
  const double wall = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();

  if (output.empty()) {
    out << o.data;
    out.flush();
  } else {
    write_atomically(output, o.data);
  }
  for (const auto& [path, data] : o.sidecars) write_atomically(path, data);

  Json manifest;
  manifest["tool"] = "averkit";
  manifest["version"] = kVersion;
  manifest["argv"] = args;
  manifest["config"] = o.config;
  manifest["seeds"] = o.seeds;
  manifest["threads"] = thread_count();
  manifest["wall_time_s"] = wall;
  if (manifest_path.empty() && !output.empty()) manifest_path = output + ".manifest.json";
  if (manifest_path.empty()) {
    err << manifest.dump() << "\n";
  } else {
    write_atomically(manifest_path, manifest.dump(2) + "\n");
  }
  return kExitOk;
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  try {
    return dispatch(args, out, err);
  } catch (const Error& e) {
    err << error_json(e).dump() << "\n";
    return exit_code_for(e.kind());
  } catch (const std::exception& e) {
    Json j;
    j["error"] = "Internal";
    j["message"] = e.what();
    err << j.dump() << "\n";
    return kExitNumeric;
  }
}

}  // namespace averkit::cli
