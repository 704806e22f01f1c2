#include "app.hpp"

#include <CLI11.hpp>
#include <json.hpp>

#include <algorithm>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <optional>
#include <ostream>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "pantograph/delay_spec.hpp"
#include "pantograph/djm.hpp"
#include "pantograph/errors.hpp"
#include "pantograph/expression.hpp"
#include "pantograph/fractional.hpp"
#include "pantograph/integrator.hpp"
#include "pantograph/series.hpp"
#include "pantograph/stability.hpp"

namespace pantograph::cli {

namespace {

using json = nlohmann::json;

/// Rejected command-line input. Maps to exit code 1.
class UsageError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct RunConfig {
  std::string a_text;
  std::string q_text;
  std::optional<double> alpha;
  std::string x_text;
  double x0 = 0.0;
  double x1 = 1.0;
  int steps = 10;
  double tol = 1e-15;
  double djm_tol = 1e-10;
  std::size_t max_terms = SeriesOptions{}.max_terms;
  double b = 1.0;
  int intervals = 64;
  std::string engine = "djm";
  bool compare = false;
  std::string rhs;
  std::string lipschitz_text;
  std::string delta_text;
  std::optional<double> bound;
  double y0 = 1.0;
  int max_iter = 200;
  double freeze_at = 0.0;
  double re_min = -5.0;
  std::optional<double> re_max;
  std::optional<double> im_half;
  int grid = 64;
  std::string format = "csv";
  std::string stability_format = "json";
  unsigned seed = 1;
  int count = 20;
};

std::string format_number(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

json json_number(double v) {
  if (!std::isfinite(v)) return nullptr;
  return v;
}

std::vector<double> parse_list(const std::string& text, const std::string& flag) {
  std::vector<double> out;
  if (text.empty()) {
    throw UsageError("--" + flag + " is empty");
  }
  std::size_t start = 0;
  for (;;) {
    const std::size_t comma = text.find(',', start);
    const std::string token =
        text.substr(start, comma == std::string::npos ? std::string::npos : comma - start);
    double value = 0.0;
    const char* first = token.data();
    const char* last = token.data() + token.size();
    if (!token.empty() && *first == '+') ++first;
    const auto [end, ec] = std::from_chars(first, last, value);
    if (token.empty() || ec != std::errc() || end != last) {
      throw UsageError("malformed value '" + token + "' in --" + flag);
    }
    out.push_back(value);
    if (comma == std::string::npos) break;
    start = comma + 1;
  }
  return out;
}

DelaySpec spec_from(const RunConfig& cfg) {
  if (cfg.a_text.empty()) throw UsageError("--a is required");
  if (cfg.q_text.empty()) throw UsageError("--q is required");
  return DelaySpec(parse_list(cfg.a_text, "a"), parse_list(cfg.q_text, "q"));
}

/// A column-oriented result; missing cells are written as empty CSV fields
/// and JSON nulls.
struct Table {
  std::vector<std::string> columns;
  std::vector<std::vector<std::optional<double>>> rows;

  void write(std::ostream& out, const std::string& format) const {
    if (format == "json") {
      json doc;
      doc["rows"] = json::array();
      for (const auto& row : rows) {
        json obj = json::object();
        for (std::size_t c = 0; c < columns.size(); ++c) {
          obj[columns[c]] = row[c] ? json_number(*row[c]) : json(nullptr);
        }
        doc["rows"].push_back(obj);
      }
      out << doc.dump() << '\n';
      return;
    }
    for (std::size_t c = 0; c < columns.size(); ++c) out << (c ? "," : "") << columns[c];
    out << '\n';
    for (const auto& row : rows) {
      for (std::size_t c = 0; c < row.size(); ++c) {
        if (c) out << ',';
        if (row[c]) out << format_number(*row[c]);
      }
      out << '\n';
    }
  }
};

SeriesValue evaluate(const DelaySpec& spec, const RunConfig& cfg, double x) {
  SeriesOptions options;
  options.max_terms = cfg.max_terms;
  if (cfg.alpha) return eval_frac(spec, FractionalOrder(*cfg.alpha), x, cfg.tol, options);
  return eval(spec, x, cfg.tol, options);
}

int cmd_eval(const RunConfig& cfg, std::ostream& out) {
  const DelaySpec spec = spec_from(cfg);
  if (cfg.x_text.empty()) throw UsageError("--x is required");
  Table table{{"x", "value", "terms_used", "tail_bound"}, {}};
  for (double x : parse_list(cfg.x_text, "x")) {
    const SeriesValue v = evaluate(spec, cfg, x);
    table.rows.push_back({x, v.value, static_cast<double>(v.terms_used), v.tail_bound});
  }
  table.write(out, cfg.format);
  return kOk;
}

int cmd_table(const RunConfig& cfg, std::ostream& out) {
  const DelaySpec spec = spec_from(cfg);
  if (cfg.steps < 1) throw UsageError("--steps must be at least 1");
  const bool bounded = spec.nonnegative();
  Table table{{"x", "R", "lower_bound", "upper_bound"}, {}};
  for (int k = 0; k <= cfg.steps; ++k) {
    const double x =
        k == cfg.steps ? cfg.x1 : cfg.x0 + (cfg.x1 - cfg.x0) * static_cast<double>(k) / cfg.steps;
    const SeriesValue v = evaluate(spec, cfg, x);
    std::optional<double> lower;
    std::optional<double> upper;
    if (bounded && x >= 0.0) {
      if (cfg.alpha) {
        const FractionalOrder order(*cfg.alpha);
        const double xa = std::pow(x, *cfg.alpha);
        lower = mittag_leffler(order, spec.a()[0] * xa, cfg.tol).value;
        upper = mittag_leffler(order, spec.sum() * xa, cfg.tol).value;
      } else {
        const auto [lo, hi] = sandwich_bounds(spec, x);
        lower = lo;
        upper = hi;
      }
    }
    table.rows.push_back({x, v.value, lower, upper});
  }
  table.write(out, cfg.format);
  return kOk;
}

DelayRHS rhs_from(const RunConfig& cfg) {
  if (cfg.rhs.empty()) {
    return linear_rhs(spec_from(cfg), cfg.y0, cfg.b);
  }
  if (cfg.q_text.empty()) throw UsageError("--q is required with --rhs");
  if (cfg.lipschitz_text.empty()) throw UsageError("--lipschitz is required with --rhs");
  const Expression expr = Expression::parse(cfg.rhs);
  DelayRHS rhs;
  rhs.q = parse_list(cfg.q_text, "q");
  validate_ratios(rhs.q);
  if (expr.max_slot() >= static_cast<int>(rhs.q.size())) {
    throw UsageError("--rhs uses y" + std::to_string(expr.max_slot()) + " but --q has only " +
                     std::to_string(rhs.q.size()) + " entries");
  }
  rhs.f = [expr](double x, std::span<const double> y) { return expr(x, y); };
  rhs.lipschitz = parse_list(cfg.lipschitz_text, "lipschitz");
  rhs.b = cfg.b;
  rhs.delta = cfg.delta_text.empty() ? std::vector<double>(rhs.q.size(), 1e3)
                                     : parse_list(cfg.delta_text, "delta");
  if (cfg.bound) {
    rhs.bound_m = *cfg.bound;
  } else {
    // Sampled sup of |f| over the rectangle: the corners in every slot at a
    // spread of x values. Not a certified bound; pass --bound for that.
    double m = 0.0;
    std::vector<double> y(rhs.q.size(), cfg.y0);
    for (int k = 0; k <= 32; ++k) {
      const double x = cfg.b * k / 32.0;
      for (int corner = 0; corner < 3; ++corner) {
        for (std::size_t i = 0; i < y.size(); ++i) {
          y[i] = cfg.y0 + (corner - 1) * (i < rhs.delta.size() ? rhs.delta[i] : 0.0);
        }
        const double v = std::abs(rhs.f(x, y));
        if (std::isfinite(v)) m = std::max(m, v);
      }
    }
    rhs.bound_m = std::max(m, 1e-300);
  }
  rhs.validate();
  return rhs;
}

int cmd_solve(const RunConfig& cfg, std::ostream& out) {
  if (cfg.engine != "djm" && cfg.engine != "rk4") {
    throw UsageError("--engine must be djm or rk4");
  }
  const DelayRHS rhs = rhs_from(cfg);
  const auto run_djm = [&] { return djm_iterate(rhs, cfg.y0, cfg.intervals, cfg.max_iter, cfg.djm_tol); };
  const auto run_rk4 = [&] {
    if (cfg.intervals < 16) throw DomainError("the grid needs N >= 16");
    return integrate(rhs, cfg.y0, cfg.b / cfg.intervals);
  };
  if (cfg.compare) {
    const GridSolution djm = run_djm();
    const GridSolution rk4 = run_rk4();
    Table table{{"x", "y_djm", "y_rk4", "abs_diff"}, {}};
    for (int k = 0; k <= djm.intervals(); ++k) {
      const double a = djm.values[k];
      const double b = rk4.values[k];
      table.rows.push_back({djm.node(k), a, b, std::abs(a - b)});
    }
    table.write(out, cfg.format);
    return kOk;
  }
  const GridSolution sol = cfg.engine == "djm" ? run_djm() : run_rk4();
  Table table{{"x", "y"}, {}};
  for (int k = 0; k <= sol.intervals(); ++k) table.rows.push_back({sol.node(k), sol.values[k]});
  table.write(out, cfg.format);
  return kOk;
}

int cmd_stability(const RunConfig& cfg, std::ostream& out) {
  if (cfg.stability_format != "json") {
    throw UsageError("stability reports are JSON only; drop --format or pass --format json");
  }
  const DelaySpec spec = spec_from(cfg);
  const FrozenDelays fd = frozen_from_spec(spec, cfg.freeze_at);
  const double reach = spec.abs_sum() + 1.0;
  Window window;
  window.re_min = cfg.re_min;
  window.re_max = cfg.re_max.value_or(std::max(2.0, reach));
  window.im_half = cfg.im_half.value_or(std::max(40.0, reach));
  const StabilityReport report = find_roots(fd, window, cfg.grid);

  json doc;
  doc["x0"] = report.x0;
  doc["tau"] = fd.tau;
  doc["roots"] = json::array();
  for (const auto& r : report.roots) doc["roots"].push_back({{"re", r.real()}, {"im", r.imag()}});
  doc["max_real_part"] = json_number(report.max_real_part);
  doc["verdict"] = to_string(report.verdict);
  doc["zero_count"] = report.zero_count;
  doc["window_certified"] = report.window_certified;
  doc["window"] = {{"re_min", window.re_min}, {"re_max", window.re_max}, {"im_half", window.im_half}};
  out << doc.dump() << '\n';
  return kOk;
}

// Random spot checks of the defining ODE and of the exponential envelopes.
int cmd_check(const RunConfig& cfg, std::ostream& out) {
  std::mt19937_64 rng(cfg.seed);
  std::uniform_int_distribution<int> order(0, 3);
  std::uniform_real_distribution<double> coef(-1.5, 1.5);
  std::uniform_real_distribution<double> ratio(0.1, 0.95);
  std::uniform_real_distribution<double> point(0.0, 4.0);
  int failures = 0;
  for (int c = 0; c < cfg.count; ++c) {
    const int n = order(rng);
    std::vector<double> a{coef(rng)};
    std::vector<double> q{1.0};
    for (int i = 0; i < n; ++i) {
      a.push_back(coef(rng));
      q.push_back(ratio(rng));
    }
    const DelaySpec spec(a, q);
    const double x = point(rng);
    const SeriesValue d = eval_derivative(spec, x, 1, cfg.tol);
    double rhs = 0.0;
    double tails = d.tail_bound;
    for (std::size_t i = 0; i < a.size(); ++i) {
      const SeriesValue v = eval(spec, q[i] * x, cfg.tol);
      rhs += a[i] * v.value;
      tails += std::abs(a[i]) * v.tail_bound;
    }
    const double residual = std::abs(d.value - rhs);
    const bool ode_ok = residual <= 1e-9 + tails;

    std::vector<double> a_pos(a.size());
    for (std::size_t i = 0; i < a.size(); ++i) a_pos[i] = std::abs(a[i]);
    const DelaySpec pos(a_pos, q);
    const SeriesValue v = eval(pos, x, cfg.tol);
    const auto [lo, hi] = sandwich_bounds(pos, x);
    const double eps = v.tail_bound + 1e-12 * hi;
    const bool sandwich_ok = lo - eps <= v.value && v.value <= hi + eps;

    out << "case " << c << " n=" << n << " x=" << format_number(x)
        << " ode_residual=" << format_number(residual) << (ode_ok ? " ok" : " FAIL")
        << " sandwich" << (sandwich_ok ? " ok" : " FAIL") << '\n';
    failures += !ode_ok + !sandwich_ok;
  }
  out << (failures == 0 ? "all checks passed" : std::to_string(failures) + " checks failed")
      << '\n';
  return failures == 0 ? kOk : kCheckFailed;
}

// Applies a flat key=value file. Keys are flag names without dashes;
// anything already given on the command line wins.
std::vector<std::string> apply_config(std::vector<std::string> args) {
  std::optional<std::string> path;
  std::vector<std::string> kept;
  for (std::size_t i = 0; i < args.size(); ++i) {
    if (args[i] == "--config") {
      if (i + 1 >= args.size()) throw UsageError("--config needs a file name");
      path = args[++i];
    } else if (args[i].rfind("--config=", 0) == 0) {
      path = args[i].substr(9);
    } else {
      kept.push_back(args[i]);
    }
  }
  if (!path) return kept;
  std::ifstream in(*path);
  if (!in) throw UsageError("cannot read config file '" + *path + "'");

  const auto given = [&](const std::string& key) {
    for (const auto& a : kept) {
      if (a == "--" + key || a.rfind("--" + key + "=", 0) == 0) return true;
    }
    return false;
  };
  const auto trim = [](std::string s) {
    const auto first = s.find_first_not_of(" \t\r");
    const auto last = s.find_last_not_of(" \t\r");
    return first == std::string::npos ? std::string() : s.substr(first, last - first + 1);
  };
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    line = trim(line);
    if (line.empty() || line[0] == '#') continue;
    const auto eq = line.find('=');
    if (eq == std::string::npos) {
      throw UsageError("config line " + std::to_string(lineno) + " is not key=value");
    }
    const std::string key = trim(line.substr(0, eq));
    const std::string value = trim(line.substr(eq + 1));
    if (given(key)) continue;
    if (key == "compare") {
      if (value == "true" || value == "1") kept.push_back("--compare");
      continue;
    }
    kept.push_back("--" + key + "=" + value);
  }
  return kept;
}

void add_spec_options(CLI::App* cmd, RunConfig& cfg) {
  cmd->add_option("--a", cfg.a_text, "coefficients a_0,...,a_n");
  cmd->add_option("--q", cfg.q_text, "delay ratios q_0=1,q_1,...,q_n");
}

void add_format_option(CLI::App* cmd, RunConfig& cfg) {
  cmd->add_option("--format", cfg.format, "output format")
      ->check(CLI::IsMember({"csv", "json"}));
}

}  // namespace

int run(const std::vector<std::string>& raw_args, std::ostream& out, std::ostream& err) {
  RunConfig cfg;
  CLI::App app{"Evaluate and verify solutions of proportional-delay differential equations",
               "pantograph"};
  app.require_subcommand(1);

  auto* eval_cmd = app.add_subcommand("eval", "evaluate R(a;q;x) or its fractional version");
  add_spec_options(eval_cmd, cfg);
  eval_cmd->add_option("--x", cfg.x_text, "argument, or a comma-separated list")->required();
  eval_cmd->add_option("--alpha", cfg.alpha, "fractional order (omit for the classical series)");
  eval_cmd->add_option("--tol", cfg.tol, "tail tolerance");
  eval_cmd->add_option("--max-terms", cfg.max_terms, "term budget per evaluation");
  add_format_option(eval_cmd, cfg);

  auto* table_cmd = app.add_subcommand("table", "tabulate R with its exponential envelopes");
  add_spec_options(table_cmd, cfg);
  table_cmd->add_option("--x0", cfg.x0, "range start");
  table_cmd->add_option("--x1", cfg.x1, "range end");
  table_cmd->add_option("--steps", cfg.steps, "number of sub-intervals");
  table_cmd->add_option("--alpha", cfg.alpha, "fractional order");
  table_cmd->add_option("--tol", cfg.tol, "tail tolerance");
  table_cmd->add_option("--max-terms", cfg.max_terms, "term budget per evaluation");
  add_format_option(table_cmd, cfg);

  auto* solve_cmd = app.add_subcommand("solve", "solve on a grid by DJM iteration or RK4");
  add_spec_options(solve_cmd, cfg);
  solve_cmd->add_option("--b", cfg.b, "interval length");
  solve_cmd->add_option("--N", cfg.intervals, "grid intervals");
  solve_cmd->add_option("--engine", cfg.engine, "djm or rk4");
  solve_cmd->add_flag("--compare", cfg.compare, "run both engines and report differences");
  solve_cmd->add_option("--rhs", cfg.rhs, "expression in x, y0..yn");
  solve_cmd->add_option("--lipschitz", cfg.lipschitz_text, "Lipschitz constants L_0,...,L_n");
  solve_cmd->add_option("--delta", cfg.delta_text, "rectangle half-widths delta_0,...,delta_n");
  solve_cmd->add_option("--bound", cfg.bound, "bound M on |f| over the rectangle");
  solve_cmd->add_option("--y0", cfg.y0, "initial value");
  solve_cmd->add_option("--max-iter", cfg.max_iter, "DJM iteration budget");
  solve_cmd->add_option("--tol", cfg.djm_tol, "DJM stopping tolerance on the increment norm");
  add_format_option(solve_cmd, cfg);

  auto* stab_cmd = app.add_subcommand("stability", "characteristic roots at a freeze point");
  add_spec_options(stab_cmd, cfg);
  stab_cmd->add_option("--x0", cfg.freeze_at, "freeze point")->required();
  stab_cmd->add_option("--re-min", cfg.re_min, "window left edge");
  stab_cmd->add_option("--re-max", cfg.re_max, "window right edge");
  stab_cmd->add_option("--im", cfg.im_half, "window half height");
  stab_cmd->add_option("--grid", cfg.grid, "Newton lattice size per axis");
  stab_cmd->add_option("--format", cfg.stability_format, "output format (json only)")
      ->check(CLI::IsMember({"csv", "json"}));

  auto* check_cmd = app.add_subcommand("check", "random property checks of the series");
  check_cmd->add_option("--seed", cfg.seed, "random seed");
  check_cmd->add_option("--count", cfg.count, "number of random cases");
  check_cmd->add_option("--tol", cfg.tol, "tail tolerance");

  try {
    std::vector<std::string> args = apply_config(raw_args);
    std::reverse(args.begin(), args.end());
    app.parse(args);
    if (!(cfg.tol > 0.0) || !(cfg.djm_tol > 0.0)) throw UsageError("--tol must be positive");

    if (*eval_cmd) return cmd_eval(cfg, out);
    if (*table_cmd) return cmd_table(cfg, out);
    if (*solve_cmd) return cmd_solve(cfg, out);
    if (*stab_cmd) return cmd_stability(cfg, out);
    return cmd_check(cfg, out);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return kOk;
  } catch (const CLI::ParseError& e) {
    err << "error: " << e.what() << '\n';
    return kUsage;
  } catch (const UsageError& e) {
    err << "error: " << e.what() << '\n';
    return kUsage;
  } catch (const ParseError& e) {
    err << "error: --rhs: " << e.what() << '\n';
    return kUsage;
  } catch (const TruncationError& e) {
    err << "truncation error: " << e.what() << '\n';
    return kTruncation;
  } catch (const ConvergenceError& e) {
    err << "convergence error: " << e.what() << '\n';
    return kTruncation;
  } catch (const EscapeError& e) {
    err << "rectangle escape: " << e.what() << '\n';
    return kEscape;
  } catch (const Error& e) {
    err << "domain error: " << e.what() << '\n';
    return kDomain;
  }
}

}  // namespace pantograph::cli
