#include "pqe/cli.hpp"

#include <CLI11.hpp>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>

#include "pqe/corpus.hpp"
#include "pqe/dependency.hpp"
#include "pqe/error.hpp"
#include "pqe/evaluation.hpp"
#include "pqe/expansion.hpp"
#include "pqe/learner.hpp"
#include "pqe/parallel.hpp"
#include "pqe/retrieval.hpp"
#include "pqe/stoplist.hpp"
#include "pqe/util.hpp"
#include "pqe/version.hpp"

namespace pqe {

namespace {

// Indexing options before resolution; empty/-1 means "not set here".
struct TokFlags {
  std::string config_path;
  std::string stoplist;  // "builtin", "none" or a path
  std::string stem;      // "on" / "off"
  int min_len = -1;
};

struct ResolvedTok {
  TokenizerConfig cfg;
  std::vector<std::pair<std::string, std::string>> desc;  // for file headers
};

void apply_config_file(const std::string& path, TokFlags* out) {
  std::ifstream in(path);
  if (!in) throw Error("cannot open config file: " + path);
  std::string line;
  long line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    std::string t = trim(line);
    if (t.empty() || t[0] == '#') continue;
    std::size_t eq = t.find('=');
    if (eq == std::string::npos) {
      throw ParseError(path + ": expected key=value", line_no);
    }
    std::string key = trim(t.substr(0, eq));
    std::string value = trim(t.substr(eq + 1));
    if (key == "stoplist") {
      if (out->stoplist.empty()) out->stoplist = value;
    } else if (key == "stem") {
      if (out->stem.empty()) out->stem = value;
    } else if (key == "min_len") {
      long long v = 0;
      if (!parse_i64(value, &v) || v < 1) {
        throw ParseError(path + ": bad min_len value \"" + value + "\"",
                         line_no);
      }
      if (out->min_len < 0) out->min_len = static_cast<int>(v);
    } else {
      throw ParseError(path + ": unknown config key \"" + key + "\"", line_no);
    }
  }
}

// Flags override config-file values override built-in defaults.
ResolvedTok resolve_tokenizer(TokFlags flags) {
  if (!flags.config_path.empty()) apply_config_file(flags.config_path, &flags);

  ResolvedTok out;
  std::string stop_desc = "builtin";
  if (flags.stoplist.empty() || flags.stoplist == "builtin") {
    out.cfg.stoplist = builtin_stoplist();
  } else if (flags.stoplist == "none") {
    out.cfg.stoplist.clear();
    stop_desc = "none";
  } else {
    out.cfg.stoplist = load_stoplist(flags.stoplist);
    stop_desc = "custom";
  }
  if (flags.stem.empty() || flags.stem == "on") {
    out.cfg.stem = true;
  } else if (flags.stem == "off") {
    out.cfg.stem = false;
  } else {
    throw Error("--stem must be \"on\" or \"off\", got \"" + flags.stem +
                "\"");
  }
  out.cfg.min_len = flags.min_len < 0 ? 2 : flags.min_len;

  out.desc = {{"stem", out.cfg.stem ? "on" : "off"},
              {"min_len", std::to_string(out.cfg.min_len)},
              {"stoplist", stop_desc}};
  return out;
}

void echo_config(bool quiet, const ResolvedTok& tok, unsigned jobs) {
  if (quiet) return;
  std::cerr << "pqe: config:";
  for (const auto& [k, v] : tok.desc) std::cerr << ' ' << k << '=' << v;
  if (jobs > 0) std::cerr << " jobs=" << effective_jobs(jobs);
  std::cerr << '\n';
}

void add_tok_flags(CLI::App* cmd, TokFlags* tok) {
  cmd->add_option("--config", tok->config_path,
                  "key=value config file (stoplist, stem, min_len)");
  cmd->add_option("--stoplist", tok->stoplist,
                  "stoplist: builtin, none, or a file path");
  cmd->add_option("--stem", tok->stem, "suffix stripping: on or off");
  cmd->add_option("--min-len", tok->min_len, "minimum token length");
}

std::vector<double> parse_list(const std::string& csv, const char* what) {
  std::vector<double> out;
  for (const std::string& item : split_char(csv, ',')) {
    double v = 0.0;
    if (!parse_f64(trim(item), &v)) {
      throw Error(std::string("bad ") + what + " value \"" + item + "\"");
    }
    out.push_back(v);
  }
  if (out.empty()) throw Error(std::string("empty ") + what + " list");
  return out;
}

Diag make_diag(bool quiet) {
  Diag d;
  d.echo = quiet ? nullptr : &std::cerr;
  return d;
}

// Queries may be a SMART collection or an expanded-query file produced by
// "pqe expand"; the latter is recognized by its header comment.
std::vector<QueryVector> read_queries_any(const std::string& path,
                                          const std::string& format,
                                          const TokenizerConfig& cfg) {
  std::string resolved = format;
  if (resolved == "auto") {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw Error("cannot open query file: " + path);
    std::string first;
    std::getline(in, first);
    resolved = first.rfind("# pqe", 0) == 0 &&
                       first.find("expanded-queries") != std::string::npos
                   ? "expanded"
                   : "smart";
  }
  if (resolved == "expanded") return read_expanded_queries_file(path);
  if (resolved == "smart") return parse_queries_smart(path, cfg);
  throw Error("unknown query format \"" + format + "\"");
}

int cmd_index(const std::string& docs, const std::string& out_path,
              const TokFlags& tok_flags, bool quiet) {
  ResolvedTok tok = resolve_tokenizer(tok_flags);
  echo_config(quiet, tok, 0);
  std::vector<Document> docs_parsed = parse_smart_file(docs);
  tokenize_documents(docs_parsed, tok.cfg);
  auto [vocab, inv] = build_inverted_file(docs_parsed);
  save_index_file(vocab, inv, out_path, {file_header("index", tok.desc)});
  if (!quiet) {
    std::cerr << "pqe: indexed " << inv.num_docs << " documents, "
              << vocab.size() << " terms -> " << out_path << '\n';
  }
  return 0;
}

int cmd_learn(const std::string& index_path, double confidence,
              const std::string& out_path, int parent_cap, unsigned jobs,
              bool quiet) {
  confidence_index(confidence);
  auto [vocab, inv] = load_index_file(index_path);
  Diag diag = make_diag(quiet);
  LearnOptions opt;
  opt.parent_cap = parent_cap;
  opt.jobs = effective_jobs(jobs);
  opt.diag = &diag;
  BayesNet net = learn(inv, vocab, confidence, opt);
  save_network_file(net, out_path,
                    {file_header("network",
                                 {{"confidence", fmt_g(confidence)}})});
  if (!quiet) {
    std::cerr << "pqe: learned network with " << net.size() << " nodes, "
              << net.edges().size() << " edges -> " << out_path << '\n';
  }
  return 0;
}

int cmd_expand(const std::string& net_path, const std::string& queries_path,
               double threshold, const std::string& out_path,
               const TokFlags& tok_flags, unsigned jobs, bool quiet) {
  ResolvedTok tok = resolve_tokenizer(tok_flags);
  echo_config(quiet, tok, jobs);
  BayesNet net = load_network_file(net_path);
  std::vector<QueryVector> queries = parse_queries_smart(queries_path, tok.cfg);
  Diag diag = make_diag(quiet);
  QueryExpander expander(net);
  ExpansionStats stats;
  std::vector<QueryVector> expanded = expand_query_file(
      queries, expander, threshold, effective_jobs(jobs), &diag, &stats);
  write_expanded_queries_file(
      expanded, out_path,
      {file_header("expanded-queries",
                   {{"confidence", fmt_g(net.confidence)},
                    {"threshold", fmt_g(threshold)}})});
  if (!quiet) {
    std::cerr << "pqe: expanded " << stats.queries << " queries ("
              << fmt_g(stats.mean_added_terms, 4)
              << " added terms per query) -> " << out_path << '\n';
  }
  return 0;
}

int cmd_search(const std::string& index_path, const std::string& queries_path,
               const std::string& out_path, int k, const std::string& format,
               const TokFlags& tok_flags, unsigned jobs, bool quiet) {
  ResolvedTok tok = resolve_tokenizer(tok_flags);
  echo_config(quiet, tok, jobs);
  auto [vocab, inv] = load_index_file(index_path);
  std::vector<QueryVector> queries =
      read_queries_any(queries_path, format, tok.cfg);
  Diag diag = make_diag(quiet);
  RankedRun run = search_all(inv, vocab, queries, k, effective_jobs(jobs));
  for (const auto& [qid, ranking] : run) {
    if (ranking.empty()) {
      diag.warn("query " + std::to_string(qid) +
                " retrieved no documents; omitted from the run file");
    }
  }
  write_run_file(run, out_path,
                 {file_header("run", {{"k", std::to_string(k)}})});
  if (!quiet) {
    std::cerr << "pqe: searched " << queries.size() << " queries -> "
              << out_path << '\n';
  }
  return 0;
}

int cmd_eval(const std::string& run_path, const std::string& qrels_path,
             const std::string& baseline_path, const std::string& out_path,
             int k, bool quiet) {
  QrelSet qrels = load_qrels_file(qrels_path);
  RankedRun run = load_run_file(run_path);
  Diag diag = make_diag(quiet);
  EvalReport rep;
  if (baseline_path.empty()) {
    rep = report(run, qrels, k, nullptr, &diag);
  } else {
    RankedRun baseline = load_run_file(baseline_path);
    rep = report(run, qrels, k, &baseline, &diag);
  }
  std::vector<std::string> comments = {
      file_header("report", {{"k", std::to_string(k)}})};
  if (out_path.empty() || out_path == "-") {
    write_report_tsv(rep, std::cout, comments);
  } else {
    write_report_tsv_file(rep, out_path, comments);
    if (!quiet) std::cerr << "pqe: report -> " << out_path << '\n';
  }
  return 0;
}

int cmd_experiment(const std::string& docs, const std::string& index_path,
                   const std::string& queries_path,
                   const std::string& qrels_path, const std::string& out_dir,
                   const std::string& confidences_csv,
                   const std::string& thresholds_csv, int k, int parent_cap,
                   const TokFlags& tok_flags, unsigned jobs, bool quiet) {
  namespace fs = std::filesystem;
  ResolvedTok tok = resolve_tokenizer(tok_flags);
  echo_config(quiet, tok, jobs);

  fs::create_directories(out_dir);
  Vocabulary vocab;
  InvertedFile inv;
  if (!docs.empty()) {
    std::vector<Document> parsed = parse_smart_file(docs);
    tokenize_documents(parsed, tok.cfg);
    std::tie(vocab, inv) = build_inverted_file(parsed);
    save_index_file(vocab, inv, (fs::path(out_dir) / "corpus.idx").string(),
                    {file_header("index", tok.desc)});
  } else {
    std::tie(vocab, inv) = load_index_file(index_path);
  }

  BatteryOptions opt;
  opt.confidences = parse_list(confidences_csv, "confidence");
  for (double c : opt.confidences) confidence_index(c);
  opt.thresholds = parse_list(thresholds_csv, "threshold");
  for (double t : opt.thresholds) {
    if (!(t > 0.0 && t < 1.0)) {
      throw Error("threshold " + fmt_g(t) + " outside (0,1)");
    }
  }
  opt.k = k;
  opt.parent_cap = parent_cap;
  opt.jobs = effective_jobs(jobs);
  Diag diag = make_diag(quiet);
  opt.diag = &diag;
  opt.out_dir = out_dir;

  std::vector<QueryVector> queries = parse_queries_smart(queries_path, tok.cfg);
  QrelSet qrels = load_qrels_file(qrels_path);

  BatteryResult result = run_battery(vocab, inv, queries, qrels, opt);

  int failed = 0;
  for (const BatteryCell& cell : result.cells) failed += cell.failed ? 1 : 0;
  if (!quiet) {
    std::cerr << "pqe: battery complete: " << result.cells.size()
              << " cells (" << failed << " failed) -> " << out_dir << '\n';
    if (result.best_cell >= 0) {
      const BatteryCell& best =
          result.cells[static_cast<std::size_t>(result.best_cell)];
      std::cerr << "pqe: best cell: confidence=" << fmt_g(best.confidence)
                << " threshold=" << fmt_g(best.threshold) << " avg_precision="
                << fmt_g(best.report.experiment.average, 6) << '\n';
    }
  }
  return result.best_cell >= 0 ? 0 : 1;
}

}  // namespace

int run_cli(int argc, const char* const* argv) {
  CLI::App app{
      "pqe: learns a polytree Bayesian-network thesaurus from a document "
      "collection, expands queries by exact probability propagation, and "
      "evaluates retrieval effectiveness against an unexpanded baseline"};
  app.set_version_flag("--version", std::string(kToolVersion));
  app.require_subcommand(1);

  bool quiet = false;
  app.add_flag("--quiet", quiet, "suppress progress output");
  app.fallthrough();  // lets --quiet appear after the subcommand too

  // index
  auto* index = app.add_subcommand("index", "build an inverted index from a "
                                            "SMART-format collection");
  std::string idx_docs, idx_out;
  TokFlags idx_tok;
  index->add_option("--docs", idx_docs, "SMART collection file")
      ->required()
      ->check(CLI::ExistingFile);
  index->add_option("--out", idx_out, "output index file")->required();
  add_tok_flags(index, &idx_tok);

  // learn
  auto* learn_cmd = app.add_subcommand(
      "learn", "learn a polytree term network from an index");
  std::string lrn_index, lrn_out;
  double lrn_confidence = 0.95;
  int lrn_parent_cap = 12;
  unsigned lrn_jobs = 0;
  learn_cmd->add_option("--index", lrn_index, "index file")
      ->required()
      ->check(CLI::ExistingFile);
  learn_cmd->add_option("--confidence", lrn_confidence,
                        "test level: 0.9 0.95 0.975 0.99 0.995")
      ->required();
  learn_cmd->add_option("--out", lrn_out, "output network file")->required();
  learn_cmd->add_option("--parent-cap", lrn_parent_cap,
                        "max parents per node");
  learn_cmd->add_option("--jobs", lrn_jobs, "worker threads (0 = all)");

  // expand
  auto* expand = app.add_subcommand("expand", "expand SMART queries through "
                                              "a learned network");
  std::string exp_net, exp_queries, exp_out;
  double exp_threshold = 0.5;
  unsigned exp_jobs = 0;
  TokFlags exp_tok;
  expand->add_option("--net", exp_net, "network file")
      ->required()
      ->check(CLI::ExistingFile);
  expand->add_option("--queries", exp_queries, "SMART query file")
      ->required()
      ->check(CLI::ExistingFile);
  expand->add_option("--threshold", exp_threshold,
                     "posterior threshold in (0,1)")
      ->required();
  expand->add_option("--out", exp_out, "output expanded-query file")
      ->required();
  expand->add_option("--jobs", exp_jobs, "worker threads (0 = all)");
  add_tok_flags(expand, &exp_tok);

  // search
  auto* search_cmd = app.add_subcommand(
      "search", "rank documents for raw or expanded queries");
  std::string srch_index, srch_queries, srch_out, srch_format = "auto";
  int srch_k = 15;
  unsigned srch_jobs = 0;
  TokFlags srch_tok;
  search_cmd->add_option("--index", srch_index, "index file")
      ->required()
      ->check(CLI::ExistingFile);
  search_cmd->add_option("--queries", srch_queries,
                         "SMART or expanded query file")
      ->required()
      ->check(CLI::ExistingFile);
  search_cmd->add_option("--out", srch_out, "output run file")->required();
  search_cmd->add_option("-k,--top-k", srch_k,
                         "documents per query (0 = full ranking)");
  search_cmd->add_option("--queries-format", srch_format,
                         "auto, smart or expanded");
  search_cmd->add_option("--jobs", srch_jobs, "worker threads (0 = all)");
  add_tok_flags(search_cmd, &srch_tok);

  // eval
  auto* eval = app.add_subcommand(
      "eval", "recall-precision report for a run (optionally vs a baseline)");
  std::string ev_run, ev_qrels, ev_baseline, ev_out;
  int ev_k = 15;
  eval->add_option("--run", ev_run, "run file (full ranking)")
      ->required()
      ->check(CLI::ExistingFile);
  eval->add_option("--qrels", ev_qrels, "relevance judgments")
      ->required()
      ->check(CLI::ExistingFile);
  eval->add_option("--baseline", ev_baseline, "baseline run file")
      ->check(CLI::ExistingFile);
  eval->add_option("--out", ev_out, "output TSV (default: stdout)");
  eval->add_option("-k,--top-k", ev_k, "fixed retrieval depth");

  // experiment
  auto* exper = app.add_subcommand(
      "experiment", "full battery: one network per confidence, one expansion "
                    "per threshold, each cell evaluated against the baseline");
  std::string xp_docs, xp_index, xp_queries, xp_qrels, xp_out;
  std::string xp_confidences = "0.9,0.95,0.975,0.99,0.995";
  std::string xp_thresholds = "0.5,0.6,0.7,0.8,0.9";
  int xp_k = 15, xp_parent_cap = 12;
  unsigned xp_jobs = 0;
  TokFlags xp_tok;
  exper->add_option("--docs", xp_docs, "SMART collection file")
      ->check(CLI::ExistingFile);
  exper->add_option("--index", xp_index, "pre-built index file")
      ->check(CLI::ExistingFile);
  exper->add_option("--queries", xp_queries, "SMART query file")
      ->required()
      ->check(CLI::ExistingFile);
  exper->add_option("--qrels", xp_qrels, "relevance judgments")
      ->required()
      ->check(CLI::ExistingFile);
  exper->add_option("--out", xp_out, "output directory")->required();
  exper->add_option("--confidences", xp_confidences,
                    "comma-separated confidence levels");
  exper->add_option("--thresholds", xp_thresholds,
                    "comma-separated posterior thresholds");
  exper->add_option("-k,--top-k", xp_k, "fixed retrieval depth");
  exper->add_option("--parent-cap", xp_parent_cap, "max parents per node");
  exper->add_option("--jobs", xp_jobs, "worker threads (0 = all)");
  add_tok_flags(exper, &xp_tok);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e);
  }

  try {
    if (index->parsed()) {
      return cmd_index(idx_docs, idx_out, idx_tok, quiet);
    }
    if (learn_cmd->parsed()) {
      return cmd_learn(lrn_index, lrn_confidence, lrn_out, lrn_parent_cap,
                       lrn_jobs, quiet);
    }
    if (expand->parsed()) {
      return cmd_expand(exp_net, exp_queries, exp_threshold, exp_out, exp_tok,
                        exp_jobs, quiet);
    }
    if (search_cmd->parsed()) {
      return cmd_search(srch_index, srch_queries, srch_out, srch_k,
                        srch_format, srch_tok, srch_jobs, quiet);
    }
    if (eval->parsed()) {
      return cmd_eval(ev_run, ev_qrels, ev_baseline, ev_out, ev_k, quiet);
    }
    if (exper->parsed()) {
      if (xp_docs.empty() == xp_index.empty()) {
        throw Error("experiment needs exactly one of --docs or --index");
      }
      return cmd_experiment(xp_docs, xp_index, xp_queries, xp_qrels, xp_out,
                            xp_confidences, xp_thresholds, xp_k, xp_parent_cap,
                            xp_tok, xp_jobs, quiet);
    }
  } catch (const Error& e) {
    std::cerr << "pqe: error: " << e.what() << '\n';
    return 1;
  }
  return 0;
}

}  // namespace pqe
