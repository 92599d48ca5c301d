#include "treepoly/cli.hpp"

#include <algorithm>
#include <cctype>
#include <fstream>
#include <iomanip>
#include <iostream>
#include <set>
#include <sstream>

#include <CLI11.hpp>

#include "treepoly/config.hpp"
#include "treepoly/density.hpp"
#include "treepoly/experiments.hpp"
#include "treepoly/geometry.hpp"
#include "treepoly/models.hpp"
#include "treepoly/shape.hpp"

namespace treepoly {

namespace {

std::string read_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot read " + path);
  std::ostringstream buffer;
  buffer << in.rdbuf();
  return buffer.str();
}

void write_text(const std::string& path, const std::string& text, std::ostream& out) {
  if (path == "-") {
    out << text;
    return;
  }
  std::ofstream file(path);
  if (!file) throw std::runtime_error("cannot open " + path + " for writing");
  file << text;
  file.close();
  if (!file) throw std::runtime_error("write failed for " + path);
}

// Splits on commas and whitespace.
std::vector<std::string> split_list(const std::string& text) {
  std::vector<std::string> items;
  std::string current;
  for (char c : text) {
    if (c == ',' || std::isspace(static_cast<unsigned char>(c))) {
      if (!current.empty()) items.push_back(std::move(current));
      current.clear();
    } else {
      current += c;
    }
  }
  if (!current.empty()) items.push_back(std::move(current));
  return items;
}

RationalVector parse_list(const std::string& text) {
  RationalVector values;
  for (const auto& item : split_list(text)) values.push_back(parse_rational(item));
  return values;
}

struct Format {
  int decimal = -1;

  std::string operator()(const Rational& value) const {
    return decimal >= 0 ? to_decimal(value, decimal) : to_string(value);
  }

  std::string point(const RationalVector& p) const {
    std::string s = "(";
    for (std::size_t i = 0; i < p.size(); ++i) s += (i ? ", " : "") + (*this)(p[i]);
    return s + ")";
  }
};

// Small distributions fit on one line; larger ones get a line per shape.
std::string render(const ShapeDistribution& d, const Format& fmt) {
  std::string s;
  const bool one_line = d.size() <= 3;
  for (std::size_t i = 0; i < d.size(); ++i) {
    if (i) s += one_line ? "  " : "\n";
    s += shape_name(d.index()[i]) + ": " + fmt(d[i]);
  }
  return s + "\n";
}

struct Options {
  int decimal = -1;
  unsigned threads = 0;

  int n = 0;
  int m = 0;
  std::string tree;
  std::string file;
  std::string csv;
  std::string json_path;
  std::string dist;
  std::string beta;
  std::string skeleton;
  std::string weights;
  std::string rule;
  bool all = false;
  std::vector<std::string> claims;
  bool json = false;
  bool timing = false;
  std::string figure;
  std::string out_dir;
};

int cmd_enumerate(const Options& o, std::ostream& out) {
  const auto index = enumerate_shapes(o.n);
  for (std::size_t i = 0; i < index->size(); ++i) {
    const TreeShape& t = (*index)[i];
    out << i << '\t' << shape_name(t) << '\t' << t.encoding() << '\t' << to_string(labeling_count(t)) << '\n';
  }
  return 0;
}

int cmd_density(const Options& o, const Format& fmt, std::ostream& out) {
  if (o.m > 0) {
    if (!o.tree.empty() || !o.file.empty()) throw DomainError("density takes either a tree or --m, not both");
    const DensityMatrix dm = density_matrix(o.n, o.m);
    if (o.json) {
      out << density_to_json(dm) << '\n';
      return 0;
    }
    std::ostringstream csv;
    write_density_csv(dm, csv);
    write_text(o.csv.empty() ? "-" : o.csv, csv.str(), out);
    return 0;
  }
  if (o.tree.empty() == o.file.empty()) throw DomainError("density needs exactly one of --tree, --file or --m");
  const TreeShape tree = parse_shape(o.tree.empty() ? read_file(o.file) : o.tree);
  const ShapeDistribution d = density_row(tree, o.n);
  out << (o.json ? distribution_to_json(d) + "\n" : render(d, fmt));
  return 0;
}

int cmd_project(const Options& o, const Format& fmt, std::ostream& out) {
  if (o.dist.empty() == o.file.empty()) throw DomainError("project needs exactly one of --dist or --file");
  const ShapeDistribution p = distribution_from_json(o.dist.empty() ? read_file(o.file) : o.dist);
  const ShapeDistribution q = marginalize(p, o.n);
  out << (o.json ? distribution_to_json(q) + "\n" : render(q, fmt));
  return 0;
}

int cmd_hull(const Options& o, const Format& fmt, std::ostream& out) {
  const Polytope poly = sampling_polytope(o.n, o.m);
  if (!o.json_path.empty()) {
    write_text(o.json_path, polytope_to_json(poly) + "\n", out);
    if (o.json_path == "-") return 0;
  }
  const auto& ps = poly.points();
  const std::set<RationalVector> distinct(ps.points().begin(), ps.points().end());
  out << "EX_" << o.n << '^' << o.m << ": " << ps.size() << " points, " << distinct.size() << " distinct, "
      << poly.vertices().size() << " vertices\n";
  for (auto v : poly.vertices()) {
    out << "vertex " << v << ' ' << ps.provenance()[v] << ' ' << fmt.point(ps[v]) << '\n';
  }
  return 0;
}

int cmd_model_beta(const Options& o, const Format& fmt, std::ostream& out) {
  const ShapeDistribution d = beta_distribution(o.n, BetaParam::parse(o.beta));
  out << (o.json ? distribution_to_json(d) + "\n" : render(d, fmt));
  return 0;
}

int cmd_model_multinomial(const Options& o, const Format& fmt, std::ostream& out) {
  const bool inline_params = !o.skeleton.empty() || !o.weights.empty();
  if (inline_params == !o.file.empty()) throw DomainError("multinomial needs --skeleton with --weights, or --file");
  const MultinomialParams params = inline_params ? MultinomialParams(parse_shape(o.skeleton), parse_list(o.weights))
                                                 : multinomial_params_from_json(read_file(o.file));
  const ShapeDistribution d = multinomial_distribution(params, o.n);
  out << (o.json ? distribution_to_json(d) + "\n" : render(d, fmt));
  return 0;
}

int cmd_model_lower(const Options& o, const Format& fmt, std::ostream& out) {
  if (o.rule.empty() == o.file.empty()) throw DomainError("lower needs exactly one of --rule or --file");
  SplittingRule rule = o.file.empty() ? [&] {
    RationalVector q = parse_list(o.rule);
    const int n = static_cast<int>(q.size()) + 1;
    return SplittingRule(n, std::move(q));
  }()
                                      : splitting_rule_from_json(read_file(o.file));
  const SplittingRule lower = derive_lower_rule(rule);
  if (o.json) {
    out << splitting_rule_to_json(lower) << '\n';
    return 0;
  }
  for (int i = 1; i < lower.level(); ++i) {
    if (i > 1) out << "  ";
    out << "q_" << lower.level() << '(' << i << "): " << fmt(lower(i));
  }
  out << '\n';
  return 0;
}

int cmd_verify(const Options& o, std::ostream& out) {
  if (o.all == !o.claims.empty()) throw DomainError("verify needs exactly one of --all or --claim");
  std::vector<VerificationReport> reports;
  if (o.all) {
    reports = run_all();
  } else {
    for (const auto& id : o.claims) reports.push_back(run_claim(id));
  }
  bool failed = false;
  for (const auto& r : reports) {
    failed = failed || r.status == ClaimStatus::Fail;
    if (o.json) {
      out << report_to_json_line(r, o.timing) << '\n';
      continue;
    }
    const char* tag = r.status == ClaimStatus::Pass ? "PASS" : r.status == ClaimStatus::Fail ? "FAIL" : "SKIP";
    out << tag << ' ' << r.claim;
    if (o.timing) out << " (" << std::fixed << std::setprecision(3) << r.seconds << "s)";
    out << '\n';
    for (const auto& d : r.detail) out << "  - " << d << '\n';
  }
  return failed ? 1 : 0;
}

int cmd_figure(const Options& o, std::ostream& out) {
  const Figure figure = parse_figure(o.figure);
  const std::string dir = o.out_dir.empty() ? o.figure : o.out_dir;
  for (const auto& path : emit_figure_data(figure, dir)) out << path.string() << '\n';
  return 0;
}

}  // namespace

int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Exact sampling-consistent distributions on rooted binary tree shapes", "treepoly"};
  app.require_subcommand(1);
  app.fallthrough();
  Options o;
  app.add_option("--decimal", o.decimal, "Render numbers as decimals with K digits")->check(CLI::NonNegativeNumber);
  auto* threads = app.add_option("--threads", o.threads, "Worker threads (default: all cores)");

  auto* enumerate = app.add_subcommand("enumerate", "List RB_U(n) in canonical order");
  enumerate->add_option("--n", o.n, "Leaf count")->required()->check(CLI::Range(1, 64));

  auto* density = app.add_subcommand("density", "Induced subtree densities");
  density->add_option("--n", o.n, "Pattern size")->required();
  density->add_option("--tree", o.tree, "Tree shape, e.g. ((*,*),(*,*))");
  density->add_option("--file", o.file, "File holding the tree shape");
  density->add_option("--m", o.m, "Emit the full density matrix of RB_U(m)");
  density->add_option("--csv", o.csv, "CSV output path for the matrix ('-' for stdout)");
  density->add_flag("--json", o.json, "JSON output");

  auto* project = app.add_subcommand("project", "Marginalize a distribution to n leaves");
  project->add_option("--n", o.n, "Target leaf count")->required();
  project->add_option("--dist", o.dist, "Distribution JSON {n, probs}");
  project->add_option("--file", o.file, "File holding the distribution JSON");
  project->add_flag("--json", o.json, "JSON output");

  auto* hull = app.add_subcommand("hull", "Certified vertices of EX_n^m");
  hull->add_option("--n", o.n, "Pattern size")->required();
  hull->add_option("--m", o.m, "Tree size")->required();
  hull->add_option("--json", o.json_path, "Write polytope JSON to PATH ('-' for stdout)");

  auto* model = app.add_subcommand("model", "Parametric models");
  model->require_subcommand(1);
  auto* beta = model->add_subcommand("beta", "Beta-splitting distribution");
  beta->add_option("--n", o.n, "Leaf count")->required();
  beta->add_option("--beta", o.beta, "p/q, decimal, -2 or inf")->required();
  beta->add_flag("--json", o.json, "JSON output");
  auto* multinomial = model->add_subcommand("multinomial", "Multinomial model on a skeleton tree");
  multinomial->add_option("--n", o.n, "Leaf count")->required();
  multinomial->add_option("--skeleton", o.skeleton, "Skeleton tree shape");
  multinomial->add_option("--weights", o.weights, "2m-1 edge weights, comma separated");
  multinomial->add_option("--file", o.file, "Parameter JSON {skeleton, weights}");
  multinomial->add_flag("--json", o.json, "JSON output");
  auto* lower = model->add_subcommand("lower", "Split rule one level down");
  lower->add_option("--rule", o.rule, "q_n(1), ..., q_n(n-1), comma separated");
  lower->add_option("--file", o.file, "Rule JSON {n, q}");
  lower->add_flag("--json", o.json, "JSON output");

  auto* verify = app.add_subcommand("verify", "Run verification claims");
  verify->add_flag("--all", o.all, "Run every claim");
  verify->add_option("--claim", o.claims, "Claim id (repeatable)")->check(CLI::IsMember(claim_ids()));
  verify->add_flag("--json", o.json, "JSON lines output");
  verify->add_flag("--timing", o.timing, "Include wall-clock timings");

  auto* figure = app.add_subcommand("figure", "Write figure data as CSV");
  figure->add_option("name", o.figure, "fig4, fig5 or fig6")->required()->check(CLI::IsMember({"fig4", "fig5", "fig6"}));
  figure->add_option("--out", o.out_dir, "Output directory (default: the figure name)");

  std::vector<std::string> reversed(args.rbegin(), args.rend());
  try {
    app.parse(reversed);
  } catch (const CLI::ParseError& e) {
    if (e.get_exit_code() == 0) {
      out << app.help();
      return 0;
    }
    err << "treepoly: " << e.what() << "\n\n" << app.help();
    return 2;
  }

  try {
    load_caps_from_env();
  } catch (const std::exception& e) {
    err << "treepoly: TREEPOLY_CAPS: " << e.what() << '\n';
    return 2;
  }
  if (*threads) set_thread_count(o.threads);
  const Format fmt{o.decimal};

  try {
    if (*enumerate) return cmd_enumerate(o, out);
    if (*density) return cmd_density(o, fmt, out);
    if (*project) return cmd_project(o, fmt, out);
    if (*hull) return cmd_hull(o, fmt, out);
    if (*beta) return cmd_model_beta(o, fmt, out);
    if (*multinomial) return cmd_model_multinomial(o, fmt, out);
    if (*lower) return cmd_model_lower(o, fmt, out);
    if (*verify) return cmd_verify(o, out);
    if (*figure) return cmd_figure(o, out);
  } catch (const std::exception& e) {
    err << "treepoly: " << e.what() << '\n';
    return 1;
  }
  return 2;
}

}  // namespace treepoly
