#include "rcount/cli.hpp"

#include <CLI11.hpp>
#include <json.hpp>

#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>

#include "rcount/counting.hpp"
#include "rcount/error.hpp"
#include "rcount/graph.hpp"
#include "rcount/rigidity.hpp"
#include "rcount/stats.hpp"

namespace rcount {

namespace {

bool is_decimal(const std::string& s) {
  return !s.empty() && s.find_first_not_of("0123456789") == std::string::npos;
}

// A decimal graph code, or a graph text file ("-" for stdin).
Graph load_graph(const std::string& arg, std::optional<int> n_hint) {
  if (is_decimal(arg) && !std::filesystem::exists(arg))
    return decode_graph(GraphCode::parse(arg, n_hint));
  if (arg == "-") return read_graph_text(std::cin);
  std::ifstream in(arg);
  if (!in) throw Error(Errc::parse, "cannot open '" + arg + "'");
  return read_graph_text(in);
}

std::vector<GraphCode> read_code_list(const std::string& path) {
  std::ifstream file;
  std::istream* in = &std::cin;
  if (path != "-") {
    file.open(path);
    if (!file) throw Error(Errc::parse, "cannot open '" + path + "'");
    in = &file;
  }
  std::vector<GraphCode> codes;
  std::string line;
  while (std::getline(*in, line)) {
    if (auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
    std::istringstream ss(line);
    std::string code;
    if (!(ss >> code)) continue;
    std::optional<int> n;
    if (int k; ss >> k) n = k;
    codes.push_back(GraphCode::parse(code, n));
  }
  return codes;
}

std::string count_label(int d, Model m) {
  return "c_" + std::to_string(d) + (m == Model::spherical ? "*" : "");
}

std::string shown(const CountValue& v, bool doubled) {
  if (!doubled || !v.is_finite()) return v.str();
  return std::to_string(2 * v.value());
}

nlohmann::json count_json(const std::string& code, const Graph& g,
                          const CountResult& r, bool doubled) {
  nlohmann::json j;
  j["code"] = code;
  j["n"] = g.n();
  j["d"] = r.d;
  j["model"] = to_string(r.model);
  if (r.value.is_finite())
    j["value"] = doubled ? 2 * r.value.value() : r.value.value();
  else
    j["value"] = "inf";
  j["doubled"] = doubled;
  j["raw_count"] = r.raw_count;
  j["trials"] = r.trials;
  j["surplus_filtered"] = r.surplus_filtered;
  j["fast_path"] = r.fast_path;
  j["paths_per_trial"] = r.paths_per_trial;
  j["paths_failed"] = r.paths_failed;
  j["gamma_retries"] = r.gamma_retries;
  j["max_residual"] = r.max_residual;
  j["unreliable"] = r.unreliable;
  j["flags"] = r.flags;
  j["seed"] = r.seed;
  return j;
}

void print_summary(std::ostream& out, const RatioSummary& s) {
  char buf[320];
  std::snprintf(buf, sizeof buf,
                "records=%zu equal=%zu differ=%zu min=%.6g q1=%.6g median=%.6g "
                "q3=%.6g max=%.6g theta=%s alpha_lower=%.6f",
                s.count_equal + s.count_differ, s.count_equal, s.count_differ,
                s.min, s.q1, s.median, s.q3, s.max, s.theta.get_str().c_str(),
                s.alpha_lower);
  out << (s.n > 0 ? "n=" + std::to_string(s.n) : std::string("all")) << ' '
      << buf << '\n';
}

int exit_code_for(const Error& e) {
  switch (e.code()) {
    case Errc::invalid_code:
    case Errc::parse:
      return kExitUsage;
    default:
      return kExitComputation;
  }
}

}  // namespace

int run_cli(int argc, const char* const* argv, std::ostream& out,
            std::ostream& err) {
  CLI::App app{"Realisation numbers of rigid graphs by homotopy continuation",
               "rcount"};
  app.require_subcommand(1);

  // decode
  std::string code_arg;
  std::optional<int> n_opt;
  auto* decode = app.add_subcommand("decode", "Print the graph of a decimal code");
  decode->add_option("CODE", code_arg, "Decimal graph code")->required();
  decode->add_option("--n", n_opt, "Vertex count (default: smallest that fits)");

  // encode
  std::string file_arg;
  auto* encode = app.add_subcommand("encode", "Print the code of a graph file");
  encode->add_option("FILE", file_arg, "Graph text file, or - for stdin")->required();

  // rigid
  int dim = 2;
  auto* rigid = app.add_subcommand("rigid", "Generic rigidity report");
  rigid->add_option("GRAPH", file_arg, "Graph file or decimal code")->required();
  rigid->add_option("--dim", dim, "Dimension d")->required()->check(CLI::Range(1, 8));
  rigid->add_option("--n", n_opt, "Vertex count for a code");

  // count
  std::string model_arg = "both";
  std::uint64_t seed = 1;
  int trials = 3;
  int threads = 0;
  bool doubled = false;
  bool json = false;
  std::string start_arg = "linear-product";
  auto* count = app.add_subcommand("count", "Realisation numbers c_d and c*_d");
  count->add_option("GRAPH", file_arg, "Decimal code or graph file")->required();
  count->add_option("--dim", dim, "Dimension d")->required()->check(CLI::Range(1, 8));
  count->add_option("--model", model_arg, "euclidean, spherical or both")
      ->check(CLI::IsMember({"euclidean", "spherical", "both"}));
  count->add_option("--n", n_opt, "Vertex count for a code");
  count->add_option("--seed", seed, "Base seed");
  count->add_option("--trials", trials, "Independent instances")->check(CLI::Range(1, 100));
  count->add_option("--threads", threads, "Tracker threads (0: all cores)");
  count->add_option("--start", start_arg, "Start system")
      ->check(CLI::IsMember({"linear-product", "total-degree"}));
  count->add_flag("--doubled", doubled, "Report 2c (the convention of some other tools)");
  count->add_flag("--json", json, "One JSON object per model");

  // enumerate
  int n_vertices = 0;
  int min_degree = 0;
  auto* enumerate = app.add_subcommand(
      "enumerate", "Minimally 2-rigid graphs up to isomorphism (canonical codes)");
  enumerate->add_option("--n", n_vertices, "Vertex count")
      ->required()
      ->check(CLI::Range(1, kEnumerateMaxVertices));
  enumerate->add_option("--min-degree", min_degree, "Minimum vertex degree");

  // batch
  std::string out_path;
  std::string checkpoint;
  int batch_threads = 1;
  auto* batch = app.add_subcommand("batch", "Count both models for a list of codes");
  batch->add_option("CODES", file_arg, "One code per line (optional vertex count after it)")
      ->required();
  batch->add_option("--dim", dim, "Dimension d")->required()->check(CLI::Range(1, 8));
  batch->add_option("--out", out_path, "Output CSV")->required();
  batch->add_option("--threads", batch_threads, "Graphs counted in parallel")
      ->check(CLI::Range(1, 1024));
  batch->add_option("--checkpoint", checkpoint, "Resume file, appended as graphs finish");
  batch->add_option("--seed", seed, "Base seed");
  batch->add_option("--trials", trials, "Independent instances")->check(CLI::Range(1, 100));

  // stats
  bool per_n = false;
  bool pairs = false;
  auto* stats = app.add_subcommand("stats", "Ratio statistics of a count CSV");
  stats->add_option("CSV", file_arg, "Record CSV")->required();
  stats->add_flag("--per-n", per_n, "One summary per vertex count");
  stats->add_flag("--pairs", pairs, "Also print the (c, c_star) histogram");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e, out, err);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e, out, err);
  } catch (const CLI::ParseError& e) {
    app.exit(e, out, err);
    return kExitUsage;
  }

  try {
    if (*decode) {
      write_graph_text(out, decode_graph(GraphCode::parse(code_arg, n_opt)));
    } else if (*encode) {
      out << encode_graph(load_graph(file_arg, std::nullopt)).str() << '\n';
    } else if (*rigid) {
      const Graph g = load_graph(file_arg, n_opt);
      const RankReport rep = generic_rank(g, dim);
      out << "rank " << rep.rank << " of " << rep.target_rigid_rank << '\n'
          << "rigid " << (is_d_rigid(g, dim) ? "yes" : "no") << '\n'
          << "independent " << (is_d_independent(g, dim) ? "yes" : "no") << '\n'
          << "minimally-rigid " << (is_minimally_d_rigid(g, dim) ? "yes" : "no") << '\n';
      if (dim == 2) out << "pebble-game " << to_string(pebble_game_2_3(g)) << '\n';
    } else if (*count) {
      const Graph g = load_graph(file_arg, n_opt);
      const std::string code = encode_graph(g).str();
      CountConfig cfg;
      cfg.seed = seed;
      cfg.trials = trials;
      cfg.tracker.threads = threads;
      cfg.tracker.start_system = start_arg == "total-degree"
                                     ? StartSystem::total_degree
                                     : StartSystem::linear_product;
      std::vector<Model> models;
      if (model_arg != "spherical") models.push_back(Model::euclidean);
      if (model_arg != "euclidean") models.push_back(Model::spherical);
      std::vector<std::string> parts;
      bool unreliable = false;
      for (Model m : models) {
        const CountResult r = realisation_count(g, dim, m, cfg);
        if (json) out << count_json(code, g, r, doubled).dump() << '\n';
        parts.push_back(count_label(dim, m) + " = " + shown(r.value, doubled));
        if (r.unreliable) {
          unreliable = true;
          err << "warning: " << count_label(dim, m) << " is unreliable:";
          for (const auto& f : r.flags) err << ' ' << f;
          err << '\n';
        }
      }
      if (!json) {
        for (std::size_t i = 0; i < parts.size(); ++i)
          out << (i ? ", " : "") << parts[i];
        out << (doubled ? " (doubled)" : "") << '\n';
      }
      return unreliable ? kExitComputation : kExitOk;
    } else if (*enumerate) {
      for (const auto& c : enumerate_min_rigid(n_vertices, min_degree))
        out << c.str() << '\n';
    } else if (*batch) {
      BatchConfig cfg;
      cfg.count.seed = seed;
      cfg.count.trials = trials;
      cfg.threads = batch_threads;
      cfg.checkpoint = checkpoint;
      const auto codes = read_code_list(file_arg);
      const BatchResult res = batch_count(codes, dim, cfg);
      std::ofstream csv(out_path);
      if (!csv) throw Error(Errc::parse, "cannot write '" + out_path + "'");
      write_records_csv(csv, res.records,
                        {"generated by rcount batch: d=" + std::to_string(dim) +
                         " seed=" + std::to_string(seed) +
                         " trials=" + std::to_string(trials)});
      for (const auto& s : res.skipped) err << "skipped " << s.code << ": " << s.message << '\n';
      for (const auto& s : res.unreliable) err << "unreliable " << s.code << ": " << s.message << '\n';
      for (const auto& s : res.failed) err << "failed " << s.code << ": " << s.message << '\n';
      err << res.records.size() << " records written to " << out_path << " ("
          << res.resumed << " from checkpoint)\n";
      return res.failed.empty() ? kExitOk : kExitComputation;
    } else if (*stats) {
      const RecordCorpus corpus = read_records_csv_file(file_arg);
      if (per_n) {
        for (const auto& s : ratio_stats(corpus.records)) print_summary(out, s);
      } else {
        print_summary(out, summarize_ratios(corpus.records));
      }
      const bool planar = std::all_of(corpus.records.begin(), corpus.records.end(),
                                      [](const CountRecord& r) { return r.d == 2; });
      if (planar) out << "alpha bounds: " << alpha_bounds_report(corpus.records).statement() << '\n';
      if (pairs) write_pairs_csv(out, pair_distribution(corpus.records));
    }
  } catch (const Error& e) {
    err << "error: " << e.what() << '\n';
    return exit_code_for(e);
  }
  return kExitOk;
}

}  // namespace rcount
