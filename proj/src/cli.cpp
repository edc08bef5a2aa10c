#include "cigmvc/cli.hpp"

#include <charconv>
#include <cmath>
#include <fstream>
#include <iostream>
#include <sstream>
#include <stdexcept>

#include "CLI11.hpp"
#include "json.hpp"

#include "cigmvc/graph_construction.hpp"
#include "cigmvc/metrics.hpp"

namespace cigmvc::cli {

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

constexpr const char* kNmiConvention = "I(pred;truth)/sqrt(H(pred)*H(truth)), natural log";

std::string fmt(double value) {
  char buf[32];
  const auto res = std::to_chars(buf, buf + sizeof(buf), value);
  return std::string(buf, res.ptr);
}

struct Problem {
  MultiViewDataset data;
  std::vector<SimilarityGraph> sigs;
  int clusters = 0;
};

struct RepResult {
  std::uint64_t seed = 0;
  SolverState state;
  ClusterResult clusters;
  std::optional<double> acc;
  std::optional<double> nmi;
};

Problem prepare(const RunConfig& config, int rep, std::optional<MultiViewDataset>& cached) {
  Problem p;
  if (config.manifest) {
    if (!cached) cached = load_dataset(*config.manifest);
    p.data = *cached;
  } else if (config.synthetic) {
    SyntheticSpec spec = *config.synthetic;
    spec.seed = config.seed + static_cast<std::uint64_t>(rep);
    p.data = generate_synthetic(spec);
  } else {
    throw std::invalid_argument("either --manifest or --synthetic is required");
  }
  if (config.standardize) {
    for (auto& view : p.data.views) view.data = standardize_columns(view.data);
  }
  p.clusters = config.clusters > 0 ? config.clusters : p.data.n_classes();
  if (p.clusters < 2) throw std::invalid_argument("cluster count unknown: pass --clusters or provide labels");
  for (const auto& view : p.data.views) p.sigs.push_back(build_sig(view, config.hp.k));
  return p;
}

RepResult solve(const Problem& p, const Hyperparams& base, bool baseline, std::uint64_t seed) {
  Hyperparams hp = base;
  hp.n_clusters = p.clusters;
  hp.baseline_mode = baseline;
  RepResult r;
  r.seed = seed;
  r.state = run(p.sigs, hp);
  r.clusters = extract_clusters(r.state.U, p.clusters);
  if (p.data.labels) {
    r.acc = accuracy(r.clusters.labels, *p.data.labels);
    r.nmi = nmi(r.clusters.labels, *p.data.labels);
  }
  return r;
}

void write_rep(const RepResult& r, const fs::path& dir) {
  fs::create_directories(dir);
  write_labels(r.clusters.labels, dir / "labels.csv");
  write_trace_csv(r.state, dir / "trace.csv");
}

json mean_std(const std::vector<RepResult>& reps, std::optional<double> RepResult::*field) {
  std::vector<double> xs;
  for (const auto& r : reps) {
    if (r.*field) xs.push_back(100.0 * *(r.*field));
  }
  if (xs.empty()) return json::array({nullptr, nullptr});
  double mean = 0.0;
  for (double x : xs) mean += x;
  mean /= static_cast<double>(xs.size());
  double var = 0.0;
  for (double x : xs) var += (x - mean) * (x - mean);
  var /= static_cast<double>(xs.size());
  return json::array({mean, std::sqrt(var)});
}

json config_echo(const RunConfig& config, const Problem& p) {
  json c;
  c["source"] = config.manifest ? config.manifest->string() : std::string("synthetic");
  if (config.synthetic) {
    c["synthetic"] = {{"n_per_cluster", config.synthetic->n_per_cluster},
                      {"clusters", config.synthetic->n_clusters},
                      {"views", config.synthetic->n_views},
                      {"dim", config.synthetic->dim},
                      {"noise_view_fraction", config.synthetic->noise_view_fraction}};
  }
  c["k"] = config.hp.k;
  c["lambda0"] = config.hp.lambda0;
  c["beta"] = config.hp.beta;
  c["gamma"] = config.hp.gamma;
  c["clusters"] = p.clusters;
  c["max_iter"] = config.hp.max_iter;
  c["tol"] = config.hp.tol;
  c["reps"] = config.repetitions;
  c["seed"] = config.seed;
  c["standardize"] = config.standardize;
  c["u_rule"] = config.hp.u_rule == URule::kWeighted ? "weighted" : "per-view-mean";
  return c;
}

json summarize(const std::vector<RepResult>& reps, const char* method) {
  json m;
  m["method"] = method;
  const json acc = mean_std(reps, &RepResult::acc);
  const json nmi_v = mean_std(reps, &RepResult::nmi);
  m["acc_mean"] = acc[0];
  m["acc_std"] = acc[1];
  m["nmi_mean"] = nmi_v[0];
  m["nmi_std"] = nmi_v[1];
  int iterations = 0;
  bool converged = true;
  json per_rep = json::array();
  for (const auto& r : reps) {
    const int it = static_cast<int>(r.state.trace.size());
    iterations = std::max(iterations, it);
    converged = converged && r.state.converged;
    json entry = {{"seed", r.seed},
                  {"iterations", it},
                  {"converged", r.state.converged},
                  {"components", r.clusters.component_count},
                  {"final_sig_fit", r.state.trace.back().sig_fit}};
    entry["acc"] = r.acc ? json(100.0 * *r.acc) : json(nullptr);
    entry["nmi"] = r.nmi ? json(100.0 * *r.nmi) : json(nullptr);
    per_rep.push_back(entry);
  }
  m["iterations"] = iterations;
  m["converged"] = converged;
  m["repetitions"] = per_rep;
  return m;
}

void write_json(const json& j, const fs::path& path) {
  std::ofstream out(path);
  if (!out) throw DatasetError("cannot write " + path.string());
  out << j.dump(2) << '\n';
}

std::string percent(const json& mean, const json& sd) {
  if (mean.is_null()) return "n/a";
  std::ostringstream s;
  s.setf(std::ios::fixed);
  s.precision(2);
  s << mean.get<double>() << " +- " << sd.get<double>();
  return s.str();
}

void write_method_outputs(const std::vector<RepResult>& reps, const fs::path& dir) {
  write_rep(reps.front(), dir);
  if (reps.size() > 1) {
    for (std::size_t i = 0; i < reps.size(); ++i) write_rep(reps[i], dir / ("rep_" + std::to_string(i)));
  }
}

}  // namespace

SyntheticSpec parse_synthetic_spec(const std::string& text) {
  SyntheticSpec spec;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) {
    if (item.empty()) continue;
    const auto eq = item.find('=');
    if (eq == std::string::npos) throw std::invalid_argument("synthetic spec: expected key=value, got '" + item + "'");
    const std::string key = item.substr(0, eq);
    const std::string value = item.substr(eq + 1);
    auto parse = [&](auto& target) {
      const auto res = std::from_chars(value.data(), value.data() + value.size(), target);
      if (value.empty() || res.ec != std::errc() || res.ptr != value.data() + value.size()) {
        throw std::invalid_argument("synthetic spec: bad value for '" + key + "': '" + value + "'");
      }
    };
    if (key == "n") {
      parse(spec.n_per_cluster);
    } else if (key == "c") {
      parse(spec.n_clusters);
    } else if (key == "v") {
      parse(spec.n_views);
    } else if (key == "dim") {
      parse(spec.dim);
    } else if (key == "noise") {
      parse(spec.noise_view_fraction);
    } else {
      throw std::invalid_argument("synthetic spec: unknown key '" + key + "'");
    }
  }
  return spec;
}

void write_trace_csv(const SolverState& state, const fs::path& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw DatasetError("cannot write " + path.string());
  out << "iteration,sig_fit,objective,lambda,zero_eig_count\n";
  for (const auto& r : state.trace) {
    out << r.iteration << ',' << fmt(r.sig_fit) << ',' << fmt(r.objective) << ',' << fmt(r.lambda) << ','
        << r.zero_eig_count << '\n';
  }
}

int cmd_run(const RunConfig& config) {
  try {
    if (config.repetitions < 1) throw std::invalid_argument("--reps must be >= 1");
    std::optional<MultiViewDataset> cached;
    std::vector<RepResult> reps;
    json echo;
    for (int rep = 0; rep < config.repetitions; ++rep) {
      const Problem p = prepare(config, rep, cached);
      if (rep == 0) echo = config_echo(config, p);
      reps.push_back(solve(p, config.hp, config.hp.baseline_mode, config.seed + static_cast<std::uint64_t>(rep)));
    }
    fs::create_directories(config.out_dir);
    write_method_outputs(reps, config.out_dir);
    json metrics = summarize(reps, config.hp.baseline_mode ? "baseline" : "ci-gmvc");
    metrics["config"] = echo;
    metrics["nmi_convention"] = kNmiConvention;
    write_json(metrics, config.out_dir / "metrics.json");
    std::cout << metrics["method"].get<std::string>() << ": ACC " << percent(metrics["acc_mean"], metrics["acc_std"])
              << ", NMI " << percent(metrics["nmi_mean"], metrics["nmi_std"]) << ", iterations "
              << metrics["iterations"].get<int>() << (metrics["converged"].get<bool>() ? " (converged)" : "")
              << '\n';
    return 0;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  }
}

int cmd_compare(const RunConfig& config) {
  try {
    if (config.repetitions < 1) throw std::invalid_argument("--reps must be >= 1");
    std::optional<MultiViewDataset> cached;
    std::vector<RepResult> full;
    std::vector<RepResult> base;
    json echo;
    for (int rep = 0; rep < config.repetitions; ++rep) {
      const Problem p = prepare(config, rep, cached);
      if (rep == 0) echo = config_echo(config, p);
      const auto seed = config.seed + static_cast<std::uint64_t>(rep);
      full.push_back(solve(p, config.hp, false, seed));
      base.push_back(solve(p, config.hp, true, seed));
    }
    fs::create_directories(config.out_dir);
    write_method_outputs(full, config.out_dir / "ci");
    write_method_outputs(base, config.out_dir / "baseline");

    json m_full = summarize(full, "ci-gmvc");
    json m_base = summarize(base, "baseline");
    auto iterations_to_converge = [](const json& m) {
      return m["converged"].get<bool>() ? m["iterations"].get<int>() : std::numeric_limits<int>::max();
    };
    const int it_full = iterations_to_converge(m_full);
    const int it_base = iterations_to_converge(m_base);
    std::string faster = "tie";
    if (it_full < it_base) faster = "ci-gmvc";
    if (it_base < it_full) faster = "baseline";
    if (it_full == std::numeric_limits<int>::max() && it_base == it_full) faster = "neither";

    json metrics;
    metrics["ci_gmvc"] = m_full;
    metrics["baseline"] = m_base;
    metrics["fewer_iterations"] = faster;
    metrics["config"] = echo;
    metrics["nmi_convention"] = kNmiConvention;
    write_json(metrics, config.out_dir / "metrics.json");

    std::ofstream table(config.out_dir / "comparison.csv");
    table << "method,acc_mean,acc_std,nmi_mean,nmi_std,iterations,converged\n";
    for (const json* m : {&m_full, &m_base}) {
      auto cell = [](const json& v) { return v.is_null() ? std::string() : fmt(v.get<double>()); };
      table << (*m)["method"].get<std::string>() << ',' << cell((*m)["acc_mean"]) << ',' << cell((*m)["acc_std"])
            << ',' << cell((*m)["nmi_mean"]) << ',' << cell((*m)["nmi_std"]) << ','
            << (*m)["iterations"].get<int>() << ',' << ((*m)["converged"].get<bool>() ? 1 : 0) << '\n';
    }
    std::cout << "method     ACC                NMI                iterations\n";
    for (const json* m : {&m_full, &m_base}) {
      std::cout.width(10);
      std::cout << std::left << (*m)["method"].get<std::string>() << " ";
      std::cout.width(18);
      std::cout << percent((*m)["acc_mean"], (*m)["acc_std"]) << " ";
      std::cout.width(18);
      std::cout << percent((*m)["nmi_mean"], (*m)["nmi_std"]) << " " << (*m)["iterations"].get<int>()
                << ((*m)["converged"].get<bool>() ? "" : " (not converged)") << '\n';
    }
    std::cout << "fewer iterations to converge: " << faster << '\n';
    return 0;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  }
}

int main(int argc, char** argv) {
  CLI::App app{"Consistency/inconsistency-aware graph-based multi-view clustering"};
  app.require_subcommand(1);

  RunConfig config;
  std::string manifest;
  std::string synthetic;
  std::string u_rule = "weighted";

  auto add_common = [&](CLI::App* sub) {
    sub->add_option("--manifest", manifest, "Dataset manifest (JSON)");
    sub->add_option("--synthetic", synthetic, "Synthetic spec, e.g. n=50,c=3,v=3,dim=5,noise=0.3");
    sub->add_option("--k", config.hp.k, "Neighbors per sample in each similarity graph")->capture_default_str();
    sub->add_option("--lambda0", config.hp.lambda0, "Initial rank-regularizer weight")->capture_default_str();
    sub->add_option("--beta", config.hp.beta, "Inconsistency magnitude penalty")->capture_default_str();
    sub->add_option("--gamma", config.hp.gamma, "Cross-view inconsistency overlap penalty")->capture_default_str();
    sub->add_option("--clusters", config.clusters, "Number of clusters (default: from labels)");
    sub->add_option("--max-iter", config.hp.max_iter, "Iteration cap")->capture_default_str();
    sub->add_option("--tol", config.hp.tol, "Relative change of U that counts as converged")->capture_default_str();
    sub->add_option("--reps", config.repetitions, "Repetitions (seeds seed..seed+reps-1)")->capture_default_str();
    sub->add_option("--seed", config.seed, "Base seed")->capture_default_str();
    sub->add_flag("--standardize", config.standardize, "Z-score every feature column before graph construction");
    sub->add_option("--u-rule", u_rule, "U row update: weighted | per-view-mean")
        ->check(CLI::IsMember({"weighted", "per-view-mean"}))
        ->capture_default_str();
    sub->add_option("--out", config.out_dir, "Output directory")->capture_default_str();
  };

  CLI::App* run_cmd = app.add_subcommand("run", "Cluster one dataset and write labels, trace and metrics");
  add_common(run_cmd);
  run_cmd->add_flag("--baseline", config.hp.baseline_mode, "Pin consistent parts to the input graphs");

  CLI::App* compare_cmd = app.add_subcommand("compare", "Run the full method and the baseline side by side");
  add_common(compare_cmd);

  CLI::App* gen_cmd = app.add_subcommand("generate", "Write a synthetic dataset with a manifest");
  gen_cmd->add_option("--synthetic", synthetic, "Synthetic spec")->required();
  gen_cmd->add_option("--seed", config.seed, "Seed")->capture_default_str();
  gen_cmd->add_option("--out", config.out_dir, "Output directory")->capture_default_str();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e);
  }

  try {
    if (!manifest.empty()) config.manifest = fs::path(manifest);
    if (!synthetic.empty()) config.synthetic = parse_synthetic_spec(synthetic);
    config.hp.u_rule = u_rule == "weighted" ? URule::kWeighted : URule::kPerViewMean;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  }
  if (config.manifest && config.synthetic) {
    std::cerr << "error: --manifest and --synthetic are mutually exclusive\n";
    return 1;
  }

  if (gen_cmd->parsed()) {
    try {
      SyntheticSpec spec = *config.synthetic;
      spec.seed = config.seed;
      const fs::path path = save_dataset(generate_synthetic(spec), config.out_dir);
      std::cout << path.string() << '\n';
      return 0;
    } catch (const std::exception& e) {
      std::cerr << "error: " << e.what() << '\n';
      return 1;
    }
  }
  if (compare_cmd->parsed()) return cmd_compare(config);
  return cmd_run(config);
}

}  // namespace cigmvc::cli
