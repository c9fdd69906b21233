#include "cli.hpp"

#include <CLI11.hpp>
#include <json.hpp>

#include <charconv>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <optional>
#include <ostream>
#include <sstream>

#include "fostab/errors.hpp"
#include "fostab/gl_sim.hpp"
#include "fostab/lti.hpp"
#include "fostab/mittag_leffler.hpp"
#include "fostab/nonlinear.hpp"
#include "fostab/parser.hpp"
#include "fostab/response.hpp"
#include "svg.hpp"

namespace fostab::cli {

namespace {

using json = nlohmann::ordered_json;

constexpr int kExitOk = 0;
constexpr int kExitUsage = 2;
constexpr int kExitNumeric = 3;

constexpr const char* kChenOrders = "0.8,1,0.9";

json num(double v) {
  if (!std::isfinite(v)) return nullptr;
  return round12(v);
}

std::string csv_num(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.12g", v);
  return buf;
}

std::string trim(std::string_view s) {
  const auto b = s.find_first_not_of(" \t");
  if (b == std::string_view::npos) return {};
  const auto e = s.find_last_not_of(" \t");
  return std::string(s.substr(b, e - b + 1));
}

std::vector<double> parse_reals(const std::string& text, const char* what) {
  std::vector<double> out;
  std::size_t start = 0;
  while (true) {
    const std::size_t comma = text.find(',', start);
    const std::string item = trim(std::string_view(text).substr(start, comma - start));
    double v = 0.0;
    const char* first = item.data();
    const char* last = first + item.size();
    if (!item.empty() && *first == '+') ++first;
    const auto [ptr, ec] = std::from_chars(first, last, v);
    if (item.empty() || ec != std::errc() || ptr != last || !std::isfinite(v))
      throw InvalidInput(std::string("bad number '") + item + "' in " + what);
    out.push_back(v);
    if (comma == std::string::npos) break;
    start = comma + 1;
  }
  return out;
}

std::vector<Eigen::VectorXd> parse_seeds(const std::string& text) {
  std::vector<Eigen::VectorXd> seeds;
  std::size_t start = 0;
  while (true) {
    const std::size_t semi = text.find(';', start);
    const std::vector<double> v = parse_reals(text.substr(start, semi - start), "--seeds");
    seeds.emplace_back(Eigen::Map<const Eigen::VectorXd>(v.data(), static_cast<Eigen::Index>(v.size())));
    if (semi == std::string::npos) break;
    start = semi + 1;
  }
  return seeds;
}

std::string read_file(const std::string& path) {
  std::ifstream f(path);
  if (!f) throw InvalidInput("cannot read " + path);
  std::ostringstream ss;
  ss << f.rdbuf();
  return ss.str();
}

struct LoadedSystem {
  PolynomialVectorField field;
  std::string name;
  bool preset = false;
};

LoadedSystem load_system(const std::vector<std::string>& args, const std::string& orders) {
  if (args.empty()) throw InvalidInput("--system needs 'chen' or a field file");
  std::optional<LoadedSystem> sys;
  if (args.size() == 1 && args[0] == "chen") {
    sys = LoadedSystem{chen_field(), "chen", true};
  } else {
    std::string path = args.back();
    if (args.size() == 2 && args[0] != "file") throw InvalidInput("expected '--system file <path>'");
    sys = LoadedSystem{parse_field_file(read_file(path)), path, false};
  }
  if (!orders.empty()) {
    sys->field = PolynomialVectorField(parse_order_list(orders), sys->field.components());
  }
  return *sys;
}

json envelope(const std::string& command, json inputs, json result, const std::vector<std::string>& warnings) {
  json j;
  j["tool_version"] = kToolVersion;
  j["command"] = command;
  j["inputs_echo"] = std::move(inputs);
  j["result"] = std::move(result);
  j["warnings"] = warnings;
  return j;
}

json complex_json(std::complex<double> z) { return json{{"re", num(z.real())}, {"im", num(z.imag())}}; }

json matrix_json(const Eigen::MatrixXd& m) {
  json rows = json::array();
  for (Eigen::Index r = 0; r < m.rows(); ++r) {
    json row = json::array();
    for (Eigen::Index c = 0; c < m.cols(); ++c) row.push_back(num(m(r, c)));
    rows.push_back(std::move(row));
  }
  return rows;
}

json orders_json(const std::vector<RationalOrder>& q) {
  json a = json::array();
  for (const auto& x : q) a.push_back(x.to_string());
  return a;
}

// ---- analyze

int cmd_analyze(const std::string& tf_text, const std::string& char_text, std::ostream& out) {
  json inputs;
  TransferFunction tf;
  if (!tf_text.empty()) {
    inputs["tf"] = tf_text;
    tf = parse_transfer_function(tf_text);
  } else {
    inputs["char"] = char_text;
    tf.numerator = PseudoPolynomial({{1.0, RationalOrder(0)}});
    tf.denominator = parse_pseudo_polynomial(char_text);
  }
  inputs["numerator"] = to_string(tf.numerator);
  inputs["denominator"] = to_string(tf.denominator);

  const StabilityReport rep = analyze(tf);
  json roots = json::array();
  for (const ClassifiedRoot& r : rep.roots) {
    json e;
    e["w_re"] = num(r.w.real());
    e["w_im"] = num(r.w.imag());
    e["abs_arg"] = num(r.abs_arg);
    e["sector"] = to_string(r.sector);
    if (r.s_pole) {
      e["s_re"] = num(r.s_pole->real());
      e["s_im"] = num(r.s_pole->imag());
    }
    roots.push_back(std::move(e));
  }
  json result;
  result["m"] = rep.m;
  result["fdeg"] = rep.fdeg;
  result["roots"] = std::move(roots);
  result["verdict"] = to_string(rep.verdict);
  result["notes"] = rep.notes;
  out << envelope("analyze", std::move(inputs), std::move(result), {}).dump(2) << "\n";
  return kExitOk;
}

// ---- respond

struct RespondArgs {
  std::string char_text;
  std::string variant = "impulse";
  double t_end = 0.0;
  int points = 200;
  SeriesBudget budget;
  std::string svg;
};

int cmd_respond(const RespondArgs& a, std::ostream& out, std::ostream& err) {
  if (!(a.t_end > 0.0)) throw InvalidInput("--t-end must be positive");
  if (a.points < 1) throw InvalidInput("--points must be at least 1");
  a.budget.validate();
  ResponseVariant variant = ResponseVariant::Impulse;
  if (a.variant == "step")
    variant = ResponseVariant::Step;
  else if (a.variant == "zero")
    variant = ResponseVariant::ZeroInput;
  else if (a.variant != "impulse")
    throw InvalidInput("--variant must be impulse, step or zero");

  const PseudoPolynomial den = parse_pseudo_polynomial(a.char_text);
  std::vector<double> grid;
  for (int i = 1; i <= a.points; ++i) grid.push_back(a.t_end * i / a.points);
  const std::vector<ResponsePoint> pts = general_fode_response(den, grid, a.budget, variant);

  std::string csv = "t,y,converged\n";
  std::size_t unconverged = 0, poles = 0;
  std::vector<double> ts, ys;
  for (const ResponsePoint& p : pts) {
    csv += csv_num(p.t) + "," + csv_num(p.value) + "," + (p.converged ? "1" : "0") + "\n";
    if (!p.converged) ++unconverged;
    if (p.gamma_pole) ++poles;
    ts.push_back(p.t);
    ys.push_back(p.converged ? p.value : std::nan(""));
  }
  out << csv;
  err << "respond: " << unconverged << " of " << pts.size() << " points unconverged\n";
  if (poles) err << "respond: reciprocal-gamma poles skipped at " << poles << " points\n";
  if (!a.svg.empty()) write_svg(a.svg, polyline_svg(ts, {ys}, {"y"}));
  return kExitOk;
}

// ---- simulate

struct SimulateArgs {
  std::vector<std::string> system;
  std::string orders;
  std::string x0;
  double h = 0.0;
  double t_end = 0.0;
  std::optional<double> memory;
  std::string svg;
};

int cmd_simulate(const SimulateArgs& a, std::ostream& out, std::ostream& err) {
  const LoadedSystem sys = load_system(a.system, a.orders);
  const std::size_t n = sys.field.dimension();
  SimConfig cfg;
  cfg.h = a.h;
  cfg.t_end = a.t_end;
  cfg.memory = a.memory;
  if (!a.x0.empty())
    cfg.x0 = parse_reals(a.x0, "--x0");
  else if (sys.preset)
    cfg.x0 = {-9.0, -5.0, 14.0};
  else
    cfg.x0.assign(n, 0.0);
  cfg.validate(n);

  const Trajectory traj = simulate(sys.field, cfg);
  std::string csv = "t";
  for (std::size_t i = 1; i <= n; ++i) csv += ",x" + std::to_string(i);
  csv += "\n";
  for (std::size_t k = 0; k < traj.times.size(); ++k) {
    csv += csv_num(traj.times[k]);
    for (std::size_t i = 0; i < n; ++i)
      csv += "," + csv_num(traj.states(static_cast<Eigen::Index>(k), static_cast<Eigen::Index>(i)));
    csv += "\n";
  }
  if (traj.diverged) {
    const std::size_t step = traj.divergence_step.value_or(traj.times.size());
    csv += "# diverged at step " + std::to_string(step) + " (t=" + csv_num(static_cast<double>(step) * cfg.h) +
           "), |x| > " + csv_num(kDivergenceThreshold) + "\n";
    err << "simulate: trajectory diverged at step " << step << "\n";
  }
  out << csv;
  if (!a.svg.empty()) {
    std::vector<std::vector<double>> cols(n);
    std::vector<std::string> labels;
    for (std::size_t i = 0; i < n; ++i) {
      labels.push_back("x" + std::to_string(i + 1));
      for (Eigen::Index k = 0; k < traj.states.rows(); ++k)
        cols[i].push_back(traj.states(k, static_cast<Eigen::Index>(i)));
    }
    write_svg(a.svg, polyline_svg(traj.times, cols, labels));
  }
  return kExitOk;
}

// ---- equilibria

json char_poly_json(const IncommensurateCharPoly& cp) {
  const std::vector<double>& c = cp.poly.coeffs();
  double scale = 0.0;
  for (double v : c) scale = std::max(scale, std::fabs(v));
  json terms = json::array();
  for (std::size_t d = c.size(); d-- > 0;) {
    if (std::fabs(c[d]) <= 1e-12 * scale) continue;
    terms.push_back(json{{"degree", d}, {"coeff", num(c[d])}});
  }
  json j;
  j["gamma"] = cp.gamma.to_string();
  j["m"] = cp.m;
  j["degree"] = cp.poly.degree();
  j["terms"] = std::move(terms);
  return j;
}

int cmd_equilibria(const std::vector<std::string>& system, const std::string& orders, const std::string& seeds_text,
                   std::ostream& out) {
  const LoadedSystem sys = load_system(system, orders);
  const std::size_t n = sys.field.dimension();
  std::vector<Eigen::VectorXd> seeds;
  if (!seeds_text.empty()) {
    seeds = parse_seeds(seeds_text);
  } else if (sys.preset) {
    seeds.push_back(Eigen::Vector3d(0, 0, 0));
    seeds.push_back(Eigen::Vector3d(8, 8, 21));
    seeds.push_back(Eigen::Vector3d(-8, -8, 21));
  } else {
    seeds.push_back(Eigen::VectorXd::Zero(static_cast<Eigen::Index>(n)));
  }

  json inputs;
  inputs["system"] = sys.name;
  inputs["orders"] = orders_json(sys.field.orders());
  json seeds_json = json::array();
  for (const auto& s : seeds) {
    json p = json::array();
    for (double v : s) p.push_back(num(v));
    seeds_json.push_back(std::move(p));
  }
  inputs["seeds"] = std::move(seeds_json);

  const EquilibriumSearch search = find_equilibria(sys.field, seeds);
  std::vector<std::string> warnings = search.diagnostics;
  if (search.equilibria.empty()) warnings.push_back("no seed converged to an equilibrium");

  json list = json::array();
  for (const Equilibrium& eq : search.equilibria) {
    const Eigen::MatrixXd jac = jacobian_at(sys.field, eq.x_star);
    const NonlinearStabilityReport rep = nonlinear_stability(jac, sys.field.orders());
    json e;
    json x = json::array();
    for (double v : eq.x_star) x.push_back(num(v));
    e["x"] = std::move(x);
    e["residual"] = num(eq.residual);
    e["jacobian"] = matrix_json(jac);
    json st;
    st["commensurate"] = rep.commensurate;
    st["m"] = rep.m;
    st["threshold"] = num(rep.threshold);
    if (rep.char_poly) st["char_poly"] = char_poly_json(*rep.char_poly);
    json roots = json::array();
    for (std::size_t i = 0; i < rep.roots.size(); ++i) {
      json r = complex_json(rep.roots[i]);
      r["abs_arg"] = num(rep.abs_args[i]);
      roots.push_back(std::move(r));
    }
    st["roots"] = std::move(roots);
    st["verdict"] = to_string(rep.verdict);
    st["notes"] = rep.notes;
    e["stability"] = std::move(st);
    try {
      e["min_chaos_order"] = num(min_chaos_order(jac));
    } catch (const DomainError&) {
      e["min_chaos_order"] = nullptr;
    }
    list.push_back(std::move(e));
  }
  json result;
  result["equilibria"] = std::move(list);
  out << envelope("equilibria", std::move(inputs), std::move(result), warnings).dump(2) << "\n";
  return kExitOk;
}

// ---- ml

int cmd_ml(double mu, double nu, unsigned k, double z_re, double z_im, std::ostream& out) {
  const std::complex<double> v = ml_deriv(MLParams{mu, nu}, k, {z_re, z_im});
  char buf[80];
  if (z_im == 0.0)
    std::snprintf(buf, sizeof buf, "%.12g\n", v.real());
  else
    std::snprintf(buf, sizeof buf, "%.12g%+.12gj\n", v.real(), v.imag());
  out << buf;
  return kExitOk;
}

}  // namespace

double round12(double v) {
  if (!std::isfinite(v) || v == 0.0) return v == 0.0 ? 0.0 : v;
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.12g", v);
  return std::strtod(buf, nullptr);
}

PolynomialVectorField chen_field() {
  return parse_vector_field(kChenOrders, {"35*(x2-x1)", "-7*x1-x1*x3+28*x2", "x1*x2-3*x3"});
}

int run(int argc, char** argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Stability analysis and simulation of fractional-order systems", "fostab"};
  app.set_help_flag("--help", "Print this help message and exit");
  app.set_version_flag("--version", kToolVersion);
  app.require_subcommand(1);

  std::string tf_text, char_text;
  auto* analyze_cmd = app.add_subcommand("analyze", "Stability of a transfer function or characteristic pseudo-polynomial");
  auto* tf_opt = analyze_cmd->add_option("--tf", tf_text, "transfer function, e.g. \"(s+1)/(s^1.5+2)\"");
  auto* char_opt = analyze_cmd->add_option("--char", char_text, "characteristic pseudo-polynomial");
  tf_opt->excludes(char_opt);
  analyze_cmd->require_option(1);

  RespondArgs ra;
  auto* respond_cmd = app.add_subcommand("respond", "Series response of 1 / char(s)");
  respond_cmd->add_option("--char", ra.char_text, "characteristic pseudo-polynomial")->required();
  respond_cmd->add_option("--variant", ra.variant, "impulse | step | zero")->capture_default_str();
  respond_cmd->add_option("--t-end", ra.t_end, "final time")->required();
  respond_cmd->add_option("--points", ra.points, "samples at t_end*i/points, i=1..points")->capture_default_str();
  respond_cmd->add_option("--max-outer", ra.budget.max_outer, "outer series terms")->capture_default_str();
  respond_cmd->add_option("--rel-tol", ra.budget.rel_tol, "outer series tolerance")->capture_default_str();
  respond_cmd->add_option("--cancellation-cap", ra.budget.cancellation_cap, "max term / |value| before flagging")
      ->capture_default_str();
  respond_cmd->add_option("--svg", ra.svg, "write a polyline plot");

  SimulateArgs sa;
  double memory = 0.0;
  auto* simulate_cmd = app.add_subcommand("simulate", "Grunwald-Letnikov simulation of a polynomial vector field");
  simulate_cmd->add_option("--system", sa.system, "chen | file <path> | <path>")->required()->expected(1, 2);
  simulate_cmd->add_option("--orders", sa.orders, "override orders, e.g. 0.9,0.9,0.9");
  simulate_cmd->add_option("--x0", sa.x0, "initial state, comma separated");
  simulate_cmd->add_option("--h", sa.h, "step size")->required();
  simulate_cmd->add_option("--t-end", sa.t_end, "final time")->required();
  auto* memory_opt = simulate_cmd->add_option("--memory", memory, "short-memory window (seconds)");
  simulate_cmd->add_option("--svg", sa.svg, "write a polyline plot");

  std::vector<std::string> eq_system;
  std::string eq_orders, eq_seeds;
  auto* eq_cmd = app.add_subcommand("equilibria", "Equilibria and their local stability");
  eq_cmd->add_option("--system", eq_system, "chen | file <path> | <path>")->required()->expected(1, 2);
  eq_cmd->add_option("--orders", eq_orders, "override orders");
  eq_cmd->add_option("--seeds", eq_seeds, "Newton seeds, e.g. \"0,0,0;8,8,21\"");

  double mu = 1.0, nu = 1.0, z_re = 0.0, z_im = 0.0;
  unsigned k = 0;
  auto* ml_cmd = app.add_subcommand("ml", "Two-parameter Mittag-Leffler function (or its k-th derivative)");
  ml_cmd->add_option("--mu", mu)->required();
  ml_cmd->add_option("--nu", nu)->required();
  ml_cmd->add_option("--k", k)->capture_default_str();
  ml_cmd->add_option("--z,--z-re", z_re)->required();
  ml_cmd->add_option("--z-im", z_im)->capture_default_str();

  try {
    app.parse(argc, argv);
  } catch (const CLI::Success& e) {
    return app.exit(e, out, err);
  } catch (const CLI::ParseError& e) {
    app.exit(e, out, err);
    return kExitUsage;
  }

  try {
    if (*analyze_cmd) return cmd_analyze(tf_text, char_text, out);
    if (*respond_cmd) return cmd_respond(ra, out, err);
    if (*simulate_cmd) {
      if (*memory_opt) sa.memory = memory;
      return cmd_simulate(sa, out, err);
    }
    if (*eq_cmd) return cmd_equilibria(eq_system, eq_orders, eq_seeds, out);
    if (*ml_cmd) return cmd_ml(mu, nu, k, z_re, z_im, out);
  } catch (const InvalidInput& e) {
    err << "error: " << e.what() << "\n";
    return kExitUsage;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return kExitNumeric;
  }
  return kExitUsage;
}

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  std::vector<std::string> storage;
  storage.reserve(args.size() + 1);
  storage.emplace_back("fostab");
  storage.insert(storage.end(), args.begin(), args.end());
  std::vector<char*> argv;
  for (auto& s : storage) argv.push_back(s.data());
  argv.push_back(nullptr);
  return run(static_cast<int>(storage.size()), argv.data(), out, err);
}

}  // namespace fostab::cli
