// Command-line front end: graph ingestion, the sampling estimators, exact
// oracles, synthetic fixtures, and the greedy influence-maximization
// baseline. Output is deterministic for a fixed flag set: stats lines
// prefixed '#' first, CSV rows after; timing goes to stderr so reruns stay
// byte-identical.
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <memory>
#include <optional>
#include <sstream>
#include <string>

#include <CLI11.hpp>

#include "infcen/diffusion.hpp"
#include "infcen/estimators.hpp"
#include "infcen/exact.hpp"
#include "infcen/graph.hpp"
#include "infcen/im.hpp"
#include "infcen/instance_io.hpp"

namespace {

using namespace infcen;

struct GraphOptions {
  std::string input = "-";
  bool undirected = false;
  std::string scheme = "file";
  double const_p = 1.0;
  double pr_restart = 0.15;
  double pr_tol = 1e-12;
  int pr_iters = 200;
};

void add_graph_options(CLI::App* cmd, GraphOptions& opt) {
  cmd->add_option("--input,-i", opt.input, "edge list file, or - for stdin");
  cmd->add_flag("--undirected", opt.undirected,
                "treat each input line as an undirected edge");
  cmd->add_option("--scheme", opt.scheme,
                  "edge probability scheme: wc | pr | const | file")
      ->check(CLI::IsMember({"wc", "pr", "const", "file"}));
  cmd->add_option("--const-p", opt.const_p, "probability for --scheme const");
  cmd->add_option("--pr-restart", opt.pr_restart, "PageRank restart");
  cmd->add_option("--pr-tol", opt.pr_tol, "PageRank convergence threshold");
  cmd->add_option("--pr-iters", opt.pr_iters, "PageRank iteration cap");
}

ProbScheme make_scheme(const GraphOptions& opt) {
  if (opt.scheme == "wc") return ProbScheme::wc();
  if (opt.scheme == "pr")
    return ProbScheme::pagerank(opt.pr_restart, opt.pr_tol, opt.pr_iters);
  if (opt.scheme == "const") return ProbScheme::constant(opt.const_p);
  return ProbScheme::from_file();
}

std::string read_source(const std::string& path) {
  std::ostringstream buf;
  if (path == "-") {
    buf << std::cin.rdbuf();
  } else {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open " + path);
    buf << in.rdbuf();
  }
  return buf.str();
}

struct LoadedGraph {
  Graph g;
  std::optional<std::size_t> pr_clamped;  // set when --scheme pr ran
};

LoadedGraph load_graph_text(const std::string& text, const GraphOptions& opt) {
  auto dir =
      opt.undirected ? Directedness::undirected : Directedness::directed;
  if (opt.scheme == "pr") {
    // Load raw, then assign explicitly so the clamp count can be reported.
    Graph raw = Graph::load_edge_list(text, dir, ProbScheme::constant(0.0));
    std::size_t clamped = 0;
    Graph g = assign_pr(raw, opt.pr_restart, opt.pr_tol, opt.pr_iters,
                        &clamped);
    return {std::move(g), clamped};
  }
  return {Graph::load_edge_list(text, dir, make_scheme(opt)), std::nullopt};
}

LoadedGraph load_graph(const GraphOptions& opt) {
  return load_graph_text(read_source(opt.input), opt);
}

unsigned resolve_threads(int flag_value) {
  if (flag_value > 0) return static_cast<unsigned>(flag_value);
  if (const char* env = std::getenv("INFCEN_THREADS")) {
    int v = std::atoi(env);
    if (v > 0) return static_cast<unsigned>(v);
  }
  return 0;  // library picks hardware concurrency
}

std::string fmt(double x, int precision = 9) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.*g", precision, x);
  return buf;
}

// Output stream selection: stdout or --output file.
class Sink {
 public:
  explicit Sink(const std::string& path) {
    if (!path.empty()) {
      file_.open(path);
      if (!file_) throw std::runtime_error("cannot open " + path);
    }
  }
  std::ostream& out() { return file_.is_open() ? file_ : std::cout; }

 private:
  std::ofstream file_;
};

double neumaier_sum(const std::vector<double>& xs) {
  double sum = 0.0, comp = 0.0;
  for (double x : xs) {
    double t = sum + x;
    if (std::abs(sum) >= std::abs(x))
      comp += (sum - t) + x;
    else
      comp += (x - t) + sum;
    sum = t;
  }
  return sum + comp;
}

NodeWeights load_weights(const std::string& path, const Graph& g) {
  std::string text = read_source(path);
  std::istringstream in(text);
  std::vector<double> w(g.node_count(), 1.0);  // unlisted nodes weigh 1
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    std::istringstream ls(line);
    std::string label;
    double value;
    if (!(ls >> label)) continue;
    if (label[0] == '#') continue;
    if (!(ls >> value))
      throw ParseError("weights line " + std::to_string(line_no) +
                       ": expected \"label weight\"");
    auto id = g.find_label(label);
    if (!id)
      throw ParseError("weights line " + std::to_string(line_no) +
                       ": unknown node " + label);
    w[*id] = value;
  }
  return NodeWeights::from(std::move(w));
}

std::vector<NodeId> parse_seeds(const std::string& selector, const Graph& g) {
  std::string text;
  std::ifstream file(selector);
  if (file) {
    std::ostringstream buf;
    buf << file.rdbuf();
    text = buf.str();
  } else {
    text = selector;
  }
  for (char& c : text)
    if (c == ',') c = ' ';
  std::istringstream in(text);
  std::vector<NodeId> ids;
  std::string tok;
  while (in >> tok) {
    auto id = g.find_label(tok);
    if (!id) throw std::runtime_error("unknown seed node " + tok);
    ids.push_back(*id);
  }
  if (ids.empty() && !selector.empty() && text.empty())
    throw std::runtime_error("empty seed file " + selector);
  return ids;
}

void print_graph_stats(std::ostream& out, const LoadedGraph& lg) {
  out << "#n=" << lg.g.node_count() << '\n';
  out << "#m=" << lg.g.edge_count() << '\n';
  if (lg.pr_clamped && *lg.pr_clamped > 0)
    out << "#pr_clamped=" << *lg.pr_clamped << '\n';
}

// Estimates as "node,estimate" sorted by estimate descending, node id
// ascending on ties.
void print_estimates(std::ostream& out, const Graph& g,
                     const std::vector<double>& est) {
  std::vector<NodeId> order(g.node_count());
  for (NodeId v = 0; v < g.node_count(); ++v) order[v] = v;
  std::sort(order.begin(), order.end(), [&](NodeId a, NodeId b) {
    if (est[a] != est[b]) return est[a] > est[b];
    return a < b;
  });
  out << "node,estimate\n";
  for (NodeId v : order) out << g.label(v) << ',' << fmt(est[v]) << '\n';
}

// ---- subcommand runners ----

struct CentralityArgs {
  GraphOptions graph;
  std::string mode = "shapley";
  double epsilon = 0.5;
  double ell = 1.0;
  std::uint32_t k = 50;
  std::uint64_t seed = 0;
  std::string weights_path;
  bool near_linear = false;
  int threads = 0;
  std::string output;
};

int run_centrality(const CentralityArgs& args) {
  LoadedGraph lg = load_graph(args.graph);
  const Graph& g = lg.g;
  EstimatorParams params;
  params.epsilon = args.epsilon;
  params.ell = args.ell;
  params.k = std::min<std::uint32_t>(args.k, g.node_count());
  params.seed = args.seed;
  params.mode = args.mode == "sni" ? CentralityMode::sni
                                   : CentralityMode::shapley;
  params.near_linear = args.near_linear;
  if (!args.weights_path.empty())
    params.weights = load_weights(args.weights_path, g);

  CentralityResult result = run(g, params, resolve_threads(args.threads));

  Sink sink(args.output);
  std::ostream& out = sink.out();
  print_graph_stats(out, lg);
  out << "#mode=" << args.mode << '\n';
  out << "#epsilon=" << fmt(args.epsilon) << '\n';
  out << "#ell=" << fmt(args.ell) << '\n';
  out << "#k=" << params.k << '\n';
  out << "#seed=" << args.seed << '\n';
  out << "#theta_phase1=" << result.theta_phase1 << '\n';
  out << "#theta=" << result.theta << '\n';
  out << "#lb=" << fmt(result.lb, 17) << '\n';
  out << "#sum=" << fmt(neumaier_sum(result.estimates), 17) << '\n';
  print_estimates(out, g, result.estimates);
  std::cerr << "#wall_ms=" << fmt(result.wall_ms) << '\n';
  return 0;
}

struct SpreadArgs {
  GraphOptions graph;
  std::string seeds;
  std::uint64_t sims = 10000;
  std::uint64_t seed = 0;
  int threads = 0;
  std::string output;
};

int run_spread(const SpreadArgs& args) {
  LoadedGraph lg = load_graph(args.graph);
  const Graph& g = lg.g;
  SeedSet seeds = SeedSet::from(parse_seeds(args.seeds, g), g.node_count());
  SpreadEstimate est = estimate_spread_mc(g, seeds, args.sims, args.seed,
                                          resolve_threads(args.threads));
  Sink sink(args.output);
  std::ostream& out = sink.out();
  print_graph_stats(out, lg);
  out << "#seeds=" << seeds.nodes.size() << '\n';
  out << "mean,stderr,num_sims\n";
  out << fmt(est.mean) << ',' << fmt(est.stderr_) << ',' << est.num_sims
      << '\n';
  return 0;
}

struct ExactArgs {
  GraphOptions graph;
  std::string what = "shapley";
  std::string seeds;
  std::string weights_path;
  std::string output;
};

int run_exact(const ExactArgs& args) {
  std::string text = read_source(args.graph.input);
  Sink sink(args.output);
  std::ostream& out = sink.out();

  // Instance JSON starts with '{'; anything else is an edge list.
  std::size_t first = text.find_first_not_of(" \t\r\n");
  bool is_instance = first != std::string::npos && text[first] == '{';

  if (is_instance) {
    std::istringstream in(text);
    ExplicitInstance inst = read_instance_json(in);
    const int n = inst.node_count();
    auto label = [](int v) { return std::to_string(v); };
    if (args.what == "fixture") {
      write_instance_json(out, inst);
      return 0;
    }
    if (args.what == "spread") {
      Mask s = 0;
      std::istringstream seeds(args.seeds);
      std::string tok;
      while (std::getline(seeds, tok, ','))
        s |= Mask(1) << std::stoi(tok);
      out << "spread," << fmt(inst.spread(s), 17) << '\n';
      return 0;
    }
    std::vector<double> values;
    if (args.what == "shapley") {
      values = inst.weights() ? weighted_exact_shapley(inst, *inst.weights())
                              : exact_shapley_perm(inst);
    } else if (args.what == "sni") {
      values.resize(n);
      for (int v = 0; v < n; ++v) values[v] = exact_sni(inst, v);
    }
    out << "#n=" << n << '\n';
    out << "node,estimate\n";
    std::vector<int> order(n);
    for (int v = 0; v < n; ++v) order[v] = v;
    std::sort(order.begin(), order.end(), [&](int a, int b) {
      if (values[a] != values[b]) return values[a] > values[b];
      return a < b;
    });
    for (int v : order) out << label(v) << ',' << fmt(values[v], 17) << '\n';
    return 0;
  }

  LoadedGraph lg = load_graph_text(text, args.graph);
  const Graph& g = lg.g;
  if (args.what == "fixture") {
    write_instance_json(out, graph_to_instance(g));
    return 0;
  }
  if (args.what == "spread") {
    auto ids = parse_seeds(args.seeds, g);
    Mask s = 0;
    for (NodeId v : ids) s |= Mask(1) << v;
    out << "spread," << fmt(exact_spread(g, s), 17) << '\n';
    return 0;
  }
  std::vector<double> values;
  if (args.what == "shapley") {
    if (!args.weights_path.empty())
      values = weighted_exact_shapley(g, load_weights(args.weights_path, g));
    else
      values = exact_shapley_rr(g);
  } else {
    values.resize(g.node_count());
    for (NodeId v = 0; v < g.node_count(); ++v) values[v] = exact_sni(g, v);
  }
  print_graph_stats(out, lg);
  std::vector<NodeId> order(g.node_count());
  for (NodeId v = 0; v < g.node_count(); ++v) order[v] = v;
  std::sort(order.begin(), order.end(), [&](NodeId a, NodeId b) {
    if (values[a] != values[b]) return values[a] > values[b];
    return a < b;
  });
  out << "node,estimate\n";
  for (NodeId v : order)
    out << g.label(v) << ',' << fmt(values[v], 17) << '\n';
  return 0;
}

struct SynthArgs {
  std::string fixture;
  int n = 4;
  double p = 0.5;
  int r = 1;
  int u = -1;  // default: all n nodes
  std::string output;
};

int run_synth(const SynthArgs& args) {
  Sink sink(args.output);
  std::ostream& out = sink.out();
  if (args.fixture == "fig1") {
    out << "0 1 0.5\n0 2 0.5\n";
    out << "1 0 " << fmt(args.p) << '\n';
    out << "2 0 " << fmt(args.p) << '\n';
    return 0;
  }
  if (args.fixture == "symmetric-cycle") {
    if (args.n < 2) throw std::runtime_error("cycle needs n >= 2");
    if (args.n == 2) {
      out << "0 1 " << fmt(args.p) << "\n1 0 " << fmt(args.p) << '\n';
      return 0;
    }
    for (int i = 0; i < args.n; ++i) {
      int j = (i + 1) % args.n;
      out << i << ' ' << j << ' ' << fmt(args.p) << '\n';
      out << j << ' ' << i << ' ' << fmt(args.p) << '\n';
    }
    return 0;
  }
  if (args.fixture == "star") {
    if (args.n < 2) throw std::runtime_error("star needs n >= 2");
    for (int leaf = 1; leaf < args.n; ++leaf)
      out << 0 << ' ' << leaf << ' ' << fmt(args.p) << '\n';
    return 0;
  }
  if (args.fixture == "null") {
    write_instance_json(out, null_instance(args.n));
    return 0;
  }
  if (args.fixture == "critical") {
    int u = args.u < 0 ? args.n : args.u;
    if (!(args.r >= 1 && args.r <= u && u <= args.n))
      throw std::runtime_error("need 1 <= r <= u <= n");
    Mask critical = (Mask(1) << args.r) - 1;
    Mask target = (Mask(1) << u) - 1;
    write_instance_json(out, critical_set_instance(args.n, critical, target));
    return 0;
  }
  throw std::runtime_error("unknown fixture " + args.fixture);
}

struct ImArgs {
  GraphOptions graph;
  std::uint32_t k = 1;
  std::uint64_t rr = 10000;
  std::uint64_t seed = 0;
  int threads = 0;
  std::string output;
};

int run_im(const ImArgs& args) {
  LoadedGraph lg = load_graph(args.graph);
  const Graph& g = lg.g;
  GreedyResult result =
      rr_greedy(g, std::min<std::uint32_t>(args.k, g.node_count()), args.rr,
                args.seed, resolve_threads(args.threads));
  Sink sink(args.output);
  std::ostream& out = sink.out();
  print_graph_stats(out, lg);
  out << "#rr=" << args.rr << '\n';
  out << "#seed=" << args.seed << '\n';
  out << "order,node,coverage,est_spread\n";
  for (std::size_t i = 0; i < result.seeds.size(); ++i) {
    double cov = result.coverage_steps[i];
    out << i + 1 << ',' << g.label(result.seeds[i]) << ',' << fmt(cov) << ','
        << fmt(static_cast<double>(g.node_count()) * cov) << '\n';
  }
  return 0;
}

struct ConvertArgs {
  GraphOptions graph;
  std::string output;
  std::string ids;
  int precision = 9;
};

int run_convert(const ConvertArgs& args) {
  LoadedGraph lg = load_graph(args.graph);
  const Graph& g = lg.g;
  if (lg.pr_clamped && *lg.pr_clamped > 0)
    std::cerr << "#pr_clamped=" << *lg.pr_clamped << '\n';
  Sink sink(args.output);
  write_edge_list(sink.out(), g, args.precision);
  std::string ids_path = args.ids;
  if (ids_path.empty() && !args.output.empty())
    ids_path = args.output + ".ids";
  if (!ids_path.empty()) {
    std::ofstream ids(ids_path);
    if (!ids) throw std::runtime_error("cannot open " + ids_path);
    write_id_map(ids, g);
  }
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"influence-based network centrality toolkit"};
  app.require_subcommand(1);

  CentralityArgs cen;
  auto add_centrality = [&](CLI::App* cmd) {
    add_graph_options(cmd, cen.graph);
    cmd->add_option("--mode", cen.mode, "shapley | sni")
        ->check(CLI::IsMember({"shapley", "sni"}));
    cmd->add_option("--epsilon,-e", cen.epsilon, "relative error target");
    cmd->add_option("--ell,-l", cen.ell, "confidence exponent");
    cmd->add_option("--k", cen.k, "rank anchoring the error guarantee");
    cmd->add_option("--seed", cen.seed, "RNG seed");
    cmd->add_option("--weights", cen.weights_path,
                    "per-node weight file (label weight lines)");
    cmd->add_flag("--near-linear", cen.near_linear,
                  "near-linear variant (absolute error vs top influence)");
    cmd->add_option("--threads,-t", cen.threads, "worker threads (0 = auto)");
    cmd->add_option("--output,-o", cen.output, "write results here");
  };
  CLI::App* cen_cmd =
      app.add_subcommand("centrality", "two-phase sampling estimator");
  add_centrality(cen_cmd);
  CLI::App* sni_cmd =
      app.add_subcommand("sni", "alias for centrality --mode sni");

  SpreadArgs spread;
  CLI::App* spread_cmd =
      app.add_subcommand("spread", "Monte-Carlo influence spread");
  add_graph_options(spread_cmd, spread.graph);
  spread_cmd->add_option("--seeds", spread.seeds, "seed list or file")
      ->required();
  spread_cmd->add_option("--sims", spread.sims, "simulation count");
  spread_cmd->add_option("--seed", spread.seed, "RNG seed");
  spread_cmd->add_option("--threads,-t", spread.threads, "worker threads");
  spread_cmd->add_option("--output,-o", spread.output, "write results here");

  ExactArgs exact;
  CLI::App* exact_cmd =
      app.add_subcommand("exact", "brute-force oracles (desk scale)");
  add_graph_options(exact_cmd, exact.graph);
  exact_cmd
      ->add_option("--what", exact.what, "shapley | sni | spread | fixture")
      ->check(CLI::IsMember({"shapley", "sni", "spread", "fixture"}));
  exact_cmd->add_option("--seeds", exact.seeds, "seeds for --what spread");
  exact_cmd->add_option("--weights", exact.weights_path, "per-node weights");
  exact_cmd->add_option("--output,-o", exact.output, "write results here");

  SynthArgs synth;
  CLI::App* synth_cmd =
      app.add_subcommand("synth", "emit fixture graphs and instances");
  synth_cmd
      ->add_option("--fixture", synth.fixture,
                   "critical | null | fig1 | symmetric-cycle | star")
      ->required()
      ->check(CLI::IsMember(
          {"critical", "null", "fig1", "symmetric-cycle", "star"}));
  synth_cmd->add_option("--n", synth.n, "node count");
  synth_cmd->add_option("--p", synth.p, "edge probability");
  synth_cmd->add_option("--r", synth.r, "critical set size");
  synth_cmd->add_option("--u", synth.u, "target set size (default n)");
  synth_cmd->add_option("--output,-o", synth.output, "write here");

  ImArgs im;
  CLI::App* im_cmd =
      app.add_subcommand("im", "greedy max-cover seed selection");
  add_graph_options(im_cmd, im.graph);
  im_cmd->add_option("--k", im.k, "seeds to select")->required();
  im_cmd->add_option("--rr", im.rr, "stored RR sets");
  im_cmd->add_option("--seed", im.seed, "RNG seed");
  im_cmd->add_option("--threads,-t", im.threads, "worker threads");
  im_cmd->add_option("--output,-o", im.output, "write results here");

  ConvertArgs convert;
  CLI::App* convert_cmd = app.add_subcommand(
      "convert", "apply a probability scheme and re-emit the edge list");
  add_graph_options(convert_cmd, convert.graph);
  convert_cmd->add_option("--output,-o", convert.output, "edge list output");
  convert_cmd->add_option("--ids", convert.ids, "id-map sidecar path");
  convert_cmd->add_option("--precision", convert.precision,
                          "significant digits for probabilities");

  add_centrality(sni_cmd);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    if (e.get_exit_code() == 0) return app.exit(e);  // --help
    app.exit(e);
    return 2;
  }

  try {
    if (cen_cmd->parsed()) return run_centrality(cen);
    if (sni_cmd->parsed()) {
      cen.mode = "sni";
      return run_centrality(cen);
    }
    if (spread_cmd->parsed()) return run_spread(spread);
    if (exact_cmd->parsed()) return run_exact(exact);
    if (synth_cmd->parsed()) return run_synth(synth);
    if (im_cmd->parsed()) return run_im(im);
    if (convert_cmd->parsed()) return run_convert(convert);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  }
  return 2;
}
