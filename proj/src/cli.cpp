#include "hceval/cli.hpp"

#include <CLI11.hpp>
#include <json.hpp>

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <map>
#include <optional>
#include <set>
#include <sstream>

#include "hceval/evaluate.hpp"
#include "hceval/hierarchy.hpp"
#include "hceval/labels.hpp"
#include "hceval/stats.hpp"

namespace hceval {

namespace {

using json = nlohmann::ordered_json;

// Input problems that map to exit code 2.
class InputError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct CommonArgs {
  std::string hierarchy;
  std::string truth;
  std::vector<std::string> pred;
  std::string measures = "gie,mgia,ph,rh,fh,sdl,plca,rlca,flca";
  double dmax = 5.0;
  std::string max_dist = "off";
  std::string lca_threshold = "off";
  bool per_instance = false;
  std::string format = "tsv";
  double alpha = 0.05;
  bool skip_unknown = false;
  std::optional<ClassId> virtual_root;
  std::string ranks_from;
};

template <typename T>
std::optional<T> parse_off(const std::string& text, const char* flag) {
  if (text == "off") return std::nullopt;
  std::istringstream in(text);
  T v{};
  if (!(in >> v) || !in.eof()) throw InputError(std::string(flag) + " expects a number or 'off'");
  return v;
}

EvalConfig make_config(const CommonArgs& a) {
  EvalConfig cfg;
  std::stringstream ss(a.measures);
  std::string name;
  while (std::getline(ss, name, ',')) {
    if (name.empty()) continue;
    const auto m = parse_measure(name);
    if (!m) throw InputError("unknown measure '" + name + "'");
    cfg.measures.push_back(*m);
  }
  if (cfg.measures.empty()) throw InputError("no measures requested");
  if (!(a.dmax > 0.0)) throw InputError("--dmax must be positive");
  cfg.pair.d_max = a.dmax;
  cfg.pair.max_dist = parse_off<double>(a.max_dist, "--max-dist");
  cfg.lca_threshold = parse_off<int>(a.lca_threshold, "--lca-threshold");
  if (cfg.lca_threshold && *cfg.lca_threshold < 1) throw InputError("--lca-threshold must be at least 1");
  cfg.virtual_root = a.virtual_root;
  return cfg;
}

Hierarchy load_dag(const std::string& path, std::ostream& err) {
  auto norm = normalize_to_dag(parse_hierarchy(read_text_file(path)));
  if (!norm.removed.empty()) {
    err << "warning: removed " << norm.removed.size() << " edge(s) to break cycles\n";
  }
  return std::move(norm.dag);
}

std::vector<ClassSet> load_labels(const std::string& path) {
  try {
    return parse_label_lines(read_text_file(path));
  } catch (const ParseError& e) {
    throw InputError(path + ": " + e.what());
  }
}

// Unknown ids either abort (exit 3) or are dropped with a warning.
void check_known(const Hierarchy& h, std::vector<ClassSet>& sets, const std::string& path, bool skip,
                 std::ostream& err) {
  std::size_t dropped = 0;
  for (std::size_t line = 0; line < sets.size(); ++line) {
    auto& s = sets[line];
    for (ClassId c : s) {
      if (h.contains(c)) continue;
      if (!skip) {
        throw UnknownClassError(c);
      }
      ++dropped;
    }
    if (skip) std::erase_if(s, [&h](ClassId c) { return !h.contains(c); });
  }
  if (dropped > 0) err << "warning: " << path << ": dropped " << dropped << " unknown class id(s)\n";
}

std::vector<InstanceLabels> align(const std::vector<ClassSet>& truth, const std::vector<ClassSet>& pred,
                                  const std::string& pred_path) {
  if (truth.size() != pred.size()) {
    throw InputError(pred_path + ": " + std::to_string(pred.size()) + " lines, true file has " +
                     std::to_string(truth.size()));
  }
  std::vector<InstanceLabels> out(truth.size());
  for (std::size_t i = 0; i < truth.size(); ++i) {
    if (truth[i].empty()) throw InputError("true file line " + std::to_string(i + 1) + ": no classes");
    out[i] = {truth[i], pred[i]};
  }
  return out;
}

std::string off_or(const std::optional<double>& v) { return v ? format_number(*v) : "off"; }

json rounded(double v) {
  if (std::isnan(v)) return nullptr;
  return std::stod(format_number(v));
}

json config_json(const EvalConfig& cfg) {
  json c;
  c["dmax"] = rounded(cfg.pair.d_max);
  c["max_dist"] = cfg.pair.max_dist ? json(rounded(*cfg.pair.max_dist)) : json("off");
  c["lca_threshold"] = cfg.lca_threshold ? json(*cfg.lca_threshold) : json("off");
  c["virtual_root"] = cfg.virtual_root ? json(*cfg.virtual_root) : json(nullptr);
  return c;
}

void write_config_tsv(std::ostream& out, const EvalConfig& cfg) {
  out << "# dmax=" << format_number(cfg.pair.d_max) << " max_dist=" << off_or(cfg.pair.max_dist)
      << " lca_threshold=" << (cfg.lca_threshold ? std::to_string(*cfg.lca_threshold) : "off")
      << " virtual_root=" << (cfg.virtual_root ? std::to_string(*cfg.virtual_root) : "none") << '\n';
}

int cmd_eval(const CommonArgs& a, std::ostream& out, std::ostream& err) {
  if (a.pred.size() != 1) throw InputError("eval takes exactly one --pred file");
  const EvalConfig cfg = make_config(a);
  const Hierarchy h = load_dag(a.hierarchy, err);
  auto truth = load_labels(a.truth);
  auto pred = load_labels(a.pred[0]);
  check_known(h, truth, a.truth, a.skip_unknown, err);
  check_known(h, pred, a.pred[0], a.skip_unknown, err);
  const auto instances = align(truth, pred, a.pred[0]);
  const auto result = evaluate_parallel(h, instances, cfg);

  if (a.format == "json") {
    json doc;
    doc["config"] = config_json(cfg);
    doc["instances"] = instances.size();
    json names = json::array();
    for (Measure m : cfg.measures) names.push_back(measure_name(m));
    doc["measures"] = names;
    json mean;
    for (std::size_t m = 0; m < cfg.measures.size(); ++m) mean[std::string(measure_name(cfg.measures[m]))] = rounded(result.means[m]);
    doc["mean"] = mean;
    if (a.per_instance) {
      json rows = json::array();
      for (const auto& row : result.values) {
        json r = json::array();
        for (double v : row) r.push_back(rounded(v));
        rows.push_back(r);
      }
      doc["per_instance"] = rows;
    }
    out << doc.dump(2) << '\n';
    return exit_code::ok;
  }

  write_config_tsv(out, cfg);
  out << "# instances=" << instances.size() << '\n';
  out << "instance";
  for (Measure m : cfg.measures) out << '\t' << measure_name(m);
  out << '\n';
  if (a.per_instance) {
    for (std::size_t i = 0; i < result.values.size(); ++i) {
      out << (i + 1);
      for (double v : result.values[i]) out << '\t' << format_number(v);
      out << '\n';
    }
  }
  out << "mean";
  for (double v : result.means) out << '\t' << format_number(v);
  out << '\n';
  return exit_code::ok;
}

std::vector<std::string> system_names(const std::vector<std::string>& paths) {
  std::vector<std::string> names;
  std::map<std::string, int> seen;
  for (const auto& p : paths) {
    std::string name = std::filesystem::path(p).stem().string();
    if (int n = seen[name]++; n > 0) name += "#" + std::to_string(n + 1);
    names.push_back(name);
  }
  return names;
}

// Tau between every pair of rank columns.
std::vector<std::vector<std::optional<double>>> tau_matrix(const std::vector<std::vector<double>>& columns) {
  const std::size_t n = columns.size();
  std::vector<std::vector<std::optional<double>>> tau(n, std::vector<std::optional<double>>(n));
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < n; ++j) {
      if (columns[i].size() < 2) continue;
      tau[i][j] = i == j ? std::optional<double>(1.0) : kendall_tau(columns[i], columns[j]);
    }
  }
  return tau;
}

void write_tau_tsv(std::ostream& out, const std::vector<std::string>& names,
                   const std::vector<std::vector<std::optional<double>>>& tau) {
  out << "measure";
  for (const auto& n : names) out << '\t' << n;
  out << '\n';
  for (std::size_t i = 0; i < names.size(); ++i) {
    out << names[i];
    for (const auto& t : tau[i]) out << '\t' << (t ? format_number(*t) : "nan");
    out << '\n';
  }
}

json tau_json(const std::vector<std::string>& names, const std::vector<std::vector<std::optional<double>>>& tau) {
  json doc;
  doc["measures"] = names;
  json rows = json::array();
  for (const auto& row : tau) {
    json r = json::array();
    for (const auto& t : row) r.push_back(t ? rounded(*t) : json(nullptr));
    rows.push_back(r);
  }
  doc["matrix"] = rows;
  return doc;
}

int cmd_ranks(const CommonArgs& a, std::ostream& out) {
  const std::string text = read_text_file(a.ranks_from);
  const auto lines = split_lines(text);
  std::vector<std::string> header;
  std::vector<std::vector<double>> columns;
  std::size_t line_no = 0;
  for (std::string_view line : lines) {
    ++line_no;
    if (line.empty() || line.front() == '#') continue;
    std::vector<std::string> fields;
    std::stringstream ss{std::string(line)};
    std::string f;
    while (std::getline(ss, f, '\t')) fields.push_back(f);
    if (header.empty()) {
      if (fields.size() < 3) throw InputError(a.ranks_from + ": header needs a system column and two rank columns");
      header.assign(fields.begin() + 1, fields.end());
      columns.resize(header.size());
      continue;
    }
    if (fields.size() != header.size() + 1) {
      throw InputError(a.ranks_from + ": line " + std::to_string(line_no) + ": expected " +
                       std::to_string(header.size() + 1) + " fields");
    }
    for (std::size_t k = 0; k < header.size(); ++k) {
      try {
        std::size_t used = 0;
        columns[k].push_back(std::stod(fields[k + 1], &used));
        if (used != fields[k + 1].size()) throw std::invalid_argument("trailing");
      } catch (const std::exception&) {
        throw InputError(a.ranks_from + ": line " + std::to_string(line_no) + ": bad rank '" + fields[k + 1] + "'");
      }
    }
  }
  if (header.empty() || columns[0].size() < 2) throw InputError(a.ranks_from + ": need at least two systems");
  const auto tau = tau_matrix(columns);
  if (a.format == "json") {
    json doc;
    doc["tau"] = tau_json(header, tau);
    out << doc.dump(2) << '\n';
  } else {
    out << "[tau]\n";
    write_tau_tsv(out, header, tau);
  }
  return exit_code::ok;
}

int cmd_compare(const CommonArgs& a, std::ostream& out, std::ostream& err) {
  if (!a.ranks_from.empty()) return cmd_ranks(a, out);
  if (a.hierarchy.empty() || a.truth.empty()) throw InputError("compare needs --hierarchy and --true");
  if (a.pred.size() < 2) throw InputError("compare needs at least two --pred files");
  const EvalConfig cfg = make_config(a);
  const Hierarchy h = load_dag(a.hierarchy, err);
  auto truth = load_labels(a.truth);
  check_known(h, truth, a.truth, a.skip_unknown, err);
  const auto names = system_names(a.pred);

  std::vector<EvalResult> results;
  for (const auto& path : a.pred) {
    auto pred = load_labels(path);
    check_known(h, pred, path, a.skip_unknown, err);
    results.push_back(evaluate_parallel(h, align(truth, pred, path), cfg));
  }

  const std::size_t ns = names.size();
  const std::size_t nm = cfg.measures.size();
  std::vector<std::string> measure_names;
  for (Measure m : cfg.measures) measure_names.emplace_back(measure_name(m));
  std::vector<std::vector<std::size_t>> ranks(nm, std::vector<std::size_t>(ns));
  std::vector<std::vector<std::vector<double>>> pvalues(nm, std::vector<std::vector<double>>(ns, std::vector<double>(ns, 1.0)));
  std::vector<std::vector<double>> rank_columns(nm);
  for (std::size_t m = 0; m < nm; ++m) {
    std::vector<ScoreSeries> series;
    for (std::size_t s = 0; s < ns; ++s) series.push_back({names[s], results[s].column(m), orientation(cfg.measures[m])});
    for (const auto& r : rank_with_significance(series, a.alpha)) ranks[m][r.system] = r.rank;
    for (std::size_t i = 0; i < ns; ++i) {
      for (std::size_t j = 0; j < ns; ++j) {
        if (i != j) pvalues[m][i][j] = sign_test(series[i], series[j]).p_value;
      }
    }
    for (std::size_t s = 0; s < ns; ++s) rank_columns[m].push_back(static_cast<double>(ranks[m][s]));
  }
  const auto tau = tau_matrix(rank_columns);

  if (a.format == "json") {
    json doc;
    doc["config"] = config_json(cfg);
    doc["config"]["alpha"] = rounded(a.alpha);
    doc["instances"] = truth.size();
    doc["systems"] = names;
    doc["measures"] = measure_names;
    json scores = json::array(), rank_rows = json::array();
    for (std::size_t s = 0; s < ns; ++s) {
      json sc = json::array(), rk = json::array();
      for (std::size_t m = 0; m < nm; ++m) {
        sc.push_back(rounded(results[s].means[m]));
        rk.push_back(ranks[m][s]);
      }
      scores.push_back(sc);
      rank_rows.push_back(rk);
    }
    doc["scores"] = scores;
    doc["ranks"] = rank_rows;
    doc["tau"] = tau_json(measure_names, tau)["matrix"];
    json pv;
    for (std::size_t m = 0; m < nm; ++m) {
      json mat = json::array();
      for (std::size_t i = 0; i < ns; ++i) {
        json row = json::array();
        for (std::size_t j = 0; j < ns; ++j) row.push_back(i == j ? json(nullptr) : rounded(pvalues[m][i][j]));
        mat.push_back(row);
      }
      pv[measure_names[m]] = mat;
    }
    doc["p_values"] = pv;
    out << doc.dump(2) << '\n';
    return exit_code::ok;
  }

  write_config_tsv(out, cfg);
  out << "# instances=" << truth.size() << " systems=" << ns << " alpha=" << format_number(a.alpha) << '\n';
  auto table = [&](const char* title, auto cell) {
    out << '[' << title << "]\nsystem";
    for (const auto& m : measure_names) out << '\t' << m;
    out << '\n';
    for (std::size_t s = 0; s < ns; ++s) {
      out << names[s];
      for (std::size_t m = 0; m < nm; ++m) out << '\t' << cell(s, m);
      out << '\n';
    }
  };
  table("scores", [&](std::size_t s, std::size_t m) { return format_number(results[s].means[m]); });
  table("ranks", [&](std::size_t s, std::size_t m) { return std::to_string(ranks[m][s]); });
  out << "[tau]\n";
  write_tau_tsv(out, measure_names, tau);
  for (std::size_t m = 0; m < nm; ++m) {
    out << "[p-values " << measure_names[m] << "]\nsystem";
    for (const auto& n : names) out << '\t' << n;
    out << '\n';
    for (std::size_t i = 0; i < ns; ++i) {
      out << names[i];
      for (std::size_t j = 0; j < ns; ++j) out << '\t' << (i == j ? std::string("-") : format_number(pvalues[m][i][j]));
      out << '\n';
    }
  }
  return exit_code::ok;
}

struct PreprocessArgs {
  std::string hierarchy;
  std::string truth;
  std::string pred;
  std::string out_hierarchy;
  std::string out_truth;
  std::string out_pred;
  std::string out_map;
};

void write_file(const std::string& path, const std::string& text) {
  std::ofstream f(path, std::ios::binary);
  if (!f) throw InputError("cannot write " + path);
  f << text;
}

// Rewrites the lines whose ids appear in the mapping; other lines are copied.
std::string rewrite_labels(const std::string& text, const std::map<ClassId, ClassId>& dummy) {
  const auto sets = parse_label_lines(text);
  const auto lines = split_lines(text);
  std::string out;
  for (std::size_t i = 0; i < lines.size(); ++i) {
    std::istringstream in{std::string(lines[i])};
    std::vector<ClassId> ids;
    ClassId c = 0;
    bool changed = false;
    while (in >> c) {
      if (auto it = dummy.find(c); it != dummy.end()) {
        c = it->second;
        changed = true;
      }
      ids.push_back(c);
    }
    if (changed) {
      for (std::size_t k = 0; k < ids.size(); ++k) out += (k ? " " : "") + std::to_string(ids[k]);
    } else {
      out += lines[i];
    }
    out += '\n';
  }
  (void)sets;
  return out;
}

int cmd_preprocess(const PreprocessArgs& a, std::ostream& err) {
  const std::string htext = read_text_file(a.hierarchy);
  const Hierarchy h = parse_hierarchy(htext);
  const std::string ttext = read_text_file(a.truth);
  auto truth = load_labels(a.truth);
  check_known(h, truth, a.truth, false, err);

  std::set<ClassId> inner;
  for (const auto& s : truth) {
    for (ClassId c : s) {
      if (!h.children(h.index_of(c)).empty()) inner.insert(c);
    }
  }
  ClassId next = h.ids().empty() ? 0 : h.ids().back() + 1;
  std::map<ClassId, ClassId> dummy;
  for (ClassId c : inner) dummy[c] = next++;

  std::string hout = htext;
  if (!hout.empty() && hout.back() != '\n') hout += '\n';
  std::string map_text = "# inner dummy\n";
  for (const auto& [c, d] : dummy) {
    hout += std::to_string(c) + ' ' + std::to_string(d) + '\n';
    map_text += std::to_string(c) + '\t' + std::to_string(d) + '\n';
  }
  write_file(a.out_hierarchy, hout);
  write_file(a.out_truth, rewrite_labels(ttext, dummy));
  write_file(a.out_map, map_text);
  if (!a.pred.empty()) {
    if (a.out_pred.empty()) throw InputError("--pred needs --out-pred");
    const std::string ptext = read_text_file(a.pred);
    auto pred = load_labels(a.pred);
    check_known(h, pred, a.pred, false, err);
    write_file(a.out_pred, rewrite_labels(ptext, dummy));
  }
  err << "preprocess: " << dummy.size() << " dummy leaf node(s) added\n";
  return exit_code::ok;
}

void add_common(CLI::App* cmd, CommonArgs& a, bool many_pred) {
  cmd->add_option("--hierarchy", a.hierarchy, "hierarchy file (parent child [weight] per line)");
  cmd->add_option("--true", a.truth, "true label file");
  if (many_pred) {
    cmd->add_option("--pred", a.pred, "predicted label file (repeatable)");
  } else {
    cmd->add_option("--pred", a.pred, "predicted label file")->expected(1);
  }
  cmd->add_option("--measures", a.measures, "comma list of measures");
  cmd->add_option("--dmax", a.dmax, "cost of pairing with a default class");
  cmd->add_option("--max-dist", a.max_dist, "pairs farther apart use defaults (number or off)");
  cmd->add_option("--lca-threshold", a.lca_threshold, "ancestor depth limit (number or off)");
  cmd->add_option("--format", a.format, "tsv or json")->check(CLI::IsMember({"tsv", "json"}));
  cmd->add_option("--virtual-root", a.virtual_root, "class id kept out of augmented sets");
  cmd->add_flag("--skip-unknown", a.skip_unknown, "drop label ids missing from the hierarchy");
}

}  // namespace

std::string format_number(double v) {
  if (std::isnan(v)) return "nan";
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.6g", v == 0.0 ? 0.0 : v);
  return buf;
}

int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Hierarchical classification evaluation", "hceval"};
  app.require_subcommand(1);

  CommonArgs eval_args;
  auto* eval = app.add_subcommand("eval", "score one system");
  add_common(eval, eval_args, false);
  eval->add_flag("--per-instance", eval_args.per_instance, "print one row per instance");

  CommonArgs cmp_args;
  auto* compare = app.add_subcommand("compare", "rank several systems");
  add_common(compare, cmp_args, true);
  compare->add_option("--alpha", cmp_args.alpha, "significance level of the sign test");
  compare->add_option("--ranks-from", cmp_args.ranks_from, "TSV of system ranks; prints Kendall tau only");

  PreprocessArgs pre;
  auto* prep = app.add_subcommand("preprocess-inner", "move inner-node labels to dummy leaves");
  prep->add_option("--hierarchy", pre.hierarchy)->required();
  prep->add_option("--true", pre.truth)->required();
  prep->add_option("--pred", pre.pred);
  prep->add_option("--out-hierarchy", pre.out_hierarchy)->required();
  prep->add_option("--out-true", pre.out_truth)->required();
  prep->add_option("--out-pred", pre.out_pred);
  prep->add_option("--out-map", pre.out_map)->required();

  std::vector<std::string> argv(args.rbegin(), args.rend());
  try {
    app.parse(argv);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return exit_code::ok;
  } catch (const CLI::ParseError& e) {
    err << "error: " << e.what() << '\n';
    return exit_code::bad_input;
  }

  try {
    if (eval->parsed()) {
      if (eval_args.hierarchy.empty() || eval_args.truth.empty() || eval_args.pred.empty()) {
        throw InputError("eval needs --hierarchy, --true and --pred");
      }
      return cmd_eval(eval_args, out, err);
    }
    if (compare->parsed()) return cmd_compare(cmp_args, out, err);
    return cmd_preprocess(pre, err);
  } catch (const UnknownClassError& e) {
    err << "error: " << e.what() << '\n';
    return exit_code::unknown_class;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return exit_code::bad_input;
  }
}

}  // namespace hceval
