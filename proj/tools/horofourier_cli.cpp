// horofourier: command-line driver for the transform experiments.
//
// Exit codes: 0 pass, 1 tolerance breach, 2 invalid configuration,
// 3 symbol vanishes on the real spectrum.

#include <horofourier/horofourier.hpp>

#include <CLI11.hpp>

#include <cstdint>
#include <filesystem>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

using namespace horofourier;

namespace {

constexpr int kPass = 0;
constexpr int kBreach = 1;
constexpr int kInvalid = 2;
constexpr int kVanishes = 3;

struct RunConfig {
  std::string model = "h2";
  std::optional<double> radius;
  std::optional<int> radial;
  std::optional<int> angular;
  std::optional<double> lambda_max;
  std::optional<double> lambda_step;
  std::optional<double> strip;
  std::optional<int> modes;
  std::uint64_t seed = 2024;
  std::optional<int> count;
  std::string out = ".";
  std::string format = "csv";
  std::optional<std::string> poly;
  std::string rhs = "canonical";
  int max_order = 3;
  std::optional<double> tol;

  void validate() const {
    if (radius && !(*radius > 0.0)) throw ConfigError("--radius must be positive");
    if (radial && *radial < 4) throw ConfigError("--radial must be at least 4");
    if (angular && *angular < 4) throw ConfigError("--angular must be at least 4");
    if (lambda_max && !(*lambda_max > 0.0)) throw ConfigError("--lambda-max must be positive");
    if (lambda_step && !(*lambda_step > 0.0)) throw ConfigError("--lambda-step must be positive");
    if (strip && !(*strip > 0.0)) throw ConfigError("--strip must be positive");
    if (modes && *modes < 0) throw ConfigError("--modes must be non-negative");
    if (count && *count < 0) throw ConfigError("--count must be non-negative");
    if (max_order < 0) throw ConfigError("--max-order must be non-negative");
    if (tol && !(*tol > 0.0)) throw ConfigError("--tol must be positive");
  }

  double tolerance(double fallback) const { return tol.value_or(fallback); }
  std::size_t family_size(int fallback) const { return static_cast<std::size_t>(count.value_or(fallback)); }

  FamilyOptions family(double lo = 0.5, double hi = 2.0) const {
    FamilyOptions o;
    o.min_radius = radius.value_or(lo);
    o.max_radius = radius.value_or(hi);
    return o;
  }

  Json echo() const {
    Json j{{"model", model}, {"seed", seed}};
    if (radius) j["radius"] = *radius;
    if (radial) j["radial"] = *radial;
    if (angular) j["angular"] = *angular;
    if (lambda_max) j["lambda_max"] = *lambda_max;
    if (lambda_step) j["lambda_step"] = *lambda_step;
    if (strip) j["strip"] = *strip;
    if (modes) j["modes"] = *modes;
    if (poly) j["poly"] = *poly;
    if (tol) j["tol"] = *tol;
    return j;
  }
};

class Output {
 public:
  Output(const RunConfig& rc, std::string command) : rc_(rc), command_(std::move(command)) {}

  void write(const std::string& stem, const CsvTable& csv, Json functions, bool pass) const {
    const std::filesystem::path dir(rc_.out);
    if (rc_.format == "csv") {
      write_atomic(dir / (stem + ".csv"), csv.str());
    } else {
      Json doc{{"command", command_}, {"config", rc_.echo()}, {"pass", pass}, {"functions", std::move(functions)}};
      write_atomic(dir / (stem + ".json"), doc.dump(2) + "\n");
    }
  }

 private:
  const RunConfig& rc_;
  std::string command_;
};

template <int Dim>
std::pair<SpectralConfig, PolarGrid<Dim>> resolve_grid(const RunConfig& rc, const TestFunction<Dim>& f) {
  auto cfg = default_spectral_config<Dim>(feature_radius(f));
  if (rc.lambda_max) cfg.lambda_max = *rc.lambda_max;
  if (rc.lambda_step) cfg.lambda_step = *rc.lambda_step;
  if (rc.modes) cfg.max_degree = *rc.modes;
  auto grid = default_grid(f, cfg);
  if (rc.radial || rc.angular)
    grid = make_polar_grid<Dim>(f.support_radius(), rc.radial.value_or(static_cast<int>(grid.radial_size())),
                                rc.angular.value_or(grid.angular_count));
  validate<Dim>(cfg, grid);
  return {cfg, grid};
}

template <int Dim>
int cmd_roundtrip(const RunConfig& rc) {
  const double tol = rc.tolerance(1e-5);
  const auto family = generate_family<Dim>(rc.seed, rc.family_size(10), rc.family());
  CsvTable csv({"fn_id", "R", "sup_err", "l2_err"});
  Json fns = Json::array();
  bool pass = true;
  for (std::size_t i = 0; i < family.size(); ++i) {
    const auto& f = family[i];
    const auto [cfg, grid] = resolve_grid(rc, f);
    Diagnostics diag;
    const auto e = round_trip_error(f, grid, cfg, calibrated_density<Dim>(), &diag);
    pass = pass && e.sup_error <= tol;
    csv.add(i, f.support_radius(), e.sup_error, e.l2_error);
    fns.push_back({{"fn_id", i},
                   {"R", f.support_radius()},
                   {"sup_err", e.sup_error},
                   {"l2_err", e.l2_error},
                   {"lambda_max", cfg.lambda_max},
                   {"radial", grid.radial_size()},
                   {"angular", grid.angular_count},
                   {"warnings", to_json(diag)}});
    std::cout << "fn " << i << "  R " << format_number(f.support_radius()) << "  sup_err " << format_number(e.sup_error)
              << "\n";
  }
  Output(rc, "roundtrip").write("roundtrip", csv, fns, pass);
  return pass ? kPass : kBreach;
}

template <int Dim>
int cmd_pw_report(const RunConfig& rc) {
  const auto family = generate_family<Dim>(rc.seed, rc.family_size(3), rc.family(1.0, 1.0));
  CsvTable csv({"fn_id", "R", "N", "seminorm", "exp_type", "weyl_defect"});
  Json fns = Json::array();
  bool pass = true;
  for (std::size_t i = 0; i < family.size(); ++i) {
    const auto& f = family[i];
    const double R = f.support_radius();
    const auto [cfg, grid] = resolve_grid(rc, f);
    const auto phi = forward_transform(f, grid, cfg);
    const auto strip = default_strip_grid(phi, R, rc.strip.value_or(2.0 * ModelParams<Dim>::rho));
    const auto rep = pw_report(phi, R, rc.max_order, strip, make_polar_grid<Dim>(R, 8, grid.angular_count));
    pass = pass && std::abs(rep.exponential_type - R) <= 0.1 * R;
    for (const auto& [N, v] : rep.seminorms) csv.add(i, R, N, v, rep.exponential_type, rep.weyl_defect);
    Json j = to_json(rep);
    j["fn_id"] = i;
    fns.push_back(std::move(j));
    std::cout << "fn " << i << "  R " << format_number(R) << "  type " << format_number(rep.exponential_type)
              << "  weyl " << format_number(rep.weyl_defect) << "\n";
  }
  Output(rc, "pw-report").write("pw", csv, fns, pass);
  return pass ? kPass : kBreach;
}

template <int Dim>
int cmd_diagram(const RunConfig& rc) {
  const double tol = rc.tolerance(1e-6);
  const InvariantOperator<Dim> D(Polynomial::parse(rc.poly.value_or("0,1")));
  const auto family = generate_family<Dim>(rc.seed, rc.family_size(3), rc.family());
  DiagramOptions opt;
  if (rc.lambda_max) opt.lambda_max = *rc.lambda_max;
  CsvTable csv({"fn_id", "R", "poly", "defect"});
  Json fns = Json::array();
  bool pass = true;
  for (std::size_t i = 0; i < family.size(); ++i) {
    const double d = diagram_defect(D, family[i], opt);
    pass = pass && d <= tol;
    csv.add(i, family[i].support_radius(), D.polynomial().to_string(), d);
    fns.push_back({{"fn_id", i}, {"R", family[i].support_radius()}, {"defect", d}});
    std::cout << "fn " << i << "  defect " << format_number(d) << "\n";
  }
  Output(rc, "diagram").write("diagram", csv, fns, pass);
  return pass ? kPass : kBreach;
}

template <int Dim>
TestFunction<Dim> make_rhs(const RunConfig& rc) {
  const double R = rc.radius.value_or(1.0);
  if (rc.rhs == "canonical") return TestFunction<Dim>::canonical(R);
  if (rc.rhs == "zero") return TestFunction<Dim>::canonical(R).scaled(0.0);
  if (rc.rhs == "family") return generate_family<Dim>(rc.seed, 1, rc.family()).front();
  throw ConfigError("--rhs must be one of canonical, zero, family");
}

template <int Dim>
int cmd_solve(const RunConfig& rc) {
  const double tol = rc.tolerance(1e-4);
  const InvariantOperator<Dim> D(Polynomial::parse(rc.poly.value_or("0,1")));
  const auto g = make_rhs<Dim>(rc);
  const auto res = solve(D, g);
  const bool pass = res.residual <= tol;
  CsvTable csv({"residual", "symbol_min", "support_radius_in", "support_radius_out"});
  csv.add(res.residual, res.symbol_min, res.support_in.radius, res.support_out.radius);
  Json j = to_json(res);
  j["u_sup"] = res.u.sup_norm();
  j["warnings"] = to_json(res.diagnostics);
  Output(rc, "solve").write("solve", csv, Json::array({j}), pass);
  std::cout << "residual " << format_number(res.residual) << "  symbol_min " << format_number(res.symbol_min) << "\n";
  return pass ? kPass : kBreach;
}

int cmd_euclid(const RunConfig& rc) {
  const double tol = rc.tolerance(1e-8);
  const auto p = Polynomial::parse(rc.poly.value_or("0,0,1"));
  const auto family = generate_euclidean_family(rc.seed, rc.family_size(5), rc.radius.value_or(0.5), rc.radius.value_or(2.0));
  CsvTable csv({"fn_id", "R", "roundtrip_err", "constcoeff_defect", "exp_type"});
  Json fns = Json::array();
  bool pass = true;
  for (std::size_t i = 0; i < family.size(); ++i) {
    const auto& f = family[i];
    const double R = f.support_radius();
    EuclidConfig cfg;
    if (rc.lambda_max) cfg.xi_max = *rc.lambda_max;
    if (rc.lambda_step) cfg.xi_step = *rc.lambda_step;
    const double rt = euclid_round_trip_error(f, cfg);
    const double cc = constcoeff_correspondence(p, f);
    const double type = euclid_exponential_type(euclid_transform(f, cfg), default_type_samples(R)).type;
    pass = pass && rt <= tol && cc <= tol && std::abs(type - R) <= 0.1 * R;
    csv.add(i, R, rt, cc, type);
    fns.push_back({{"fn_id", i}, {"R", R}, {"roundtrip_err", rt}, {"constcoeff_defect", cc}, {"exp_type", type}});
    std::cout << "fn " << i << "  roundtrip " << format_number(rt) << "  constcoeff " << format_number(cc) << "\n";
  }
  Output(rc, "euclid").write("euclid", csv, fns, pass);
  return pass ? kPass : kBreach;
}

int cmd_modes(const RunConfig& rc) {
  const auto family = generate_family<2>(rc.seed, rc.family_size(1), rc.family());
  ModeFactorizationOptions opt;
  if (rc.modes) opt.max_degree = *rc.modes;
  if (rc.angular) opt.angular = *rc.angular;
  CsvTable csv({"fn_id", "R", "kind", "index", "value"});
  Json fns = Json::array();
  bool pass = true;
  for (std::size_t i = 0; i < family.size(); ++i) {
    const auto rep = mode_factorization_check(family[i], opt);
    bool zero_tails = true;
    for (const auto& t : rep.tail_norms) zero_tails = zero_tails && t.second == 0.0;
    pass = pass && rep.max_type <= 1.1 * rep.radius && (zero_tails || rep.tails_decreasing());
    for (const auto& [K, v] : rep.tail_norms) csv.add(i, rep.radius, "tail", K, v);
    for (const auto& [k, t] : rep.per_mode_types) csv.add(i, rep.radius, "type", k, t);
    Json j = to_json(rep);
    j["fn_id"] = i;
    j["R"] = rep.radius;
    fns.push_back(std::move(j));
    std::cout << "fn " << i << "  modes_active " << rep.modes_active << "  max_type " << format_number(rep.max_type)
              << "\n";
  }
  Output(rc, "modes").write("modes", csv, fns, pass);
  return pass ? kPass : kBreach;
}

template <class F2, class F3>
int by_model(const RunConfig& rc, F2&& h2, F3&& h3) {
  return rc.model == "h2" ? h2(rc) : h3(rc);
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Helgason-Fourier experiments on the hyperbolic plane and space"};
  app.set_config("--config", "", "key = value file; command-line flags take precedence");
  app.require_subcommand(1);

  RunConfig rc;
  app.add_option("--model", rc.model, "h2 or h3")->check(CLI::IsMember({"h2", "h3"}));
  app.add_option("--radius", rc.radius, "support radius of generated functions");
  app.add_option("--radial", rc.radial, "radial node count");
  app.add_option("--angular", rc.angular, "boundary node count");
  app.add_option("--lambda-max", rc.lambda_max, "spectral truncation");
  app.add_option("--lambda-step", rc.lambda_step, "spectral grid step");
  app.add_option("--strip", rc.strip, "half-width of the complex strip");
  app.add_option("--modes", rc.modes, "maximum boundary degree");
  app.add_option("--seed", rc.seed, "generator seed");
  app.add_option("--count", rc.count, "number of generated functions");
  app.add_option("--out", rc.out, "output directory");
  app.add_option("--format", rc.format, "csv or json")->check(CLI::IsMember({"csv", "json"}));
  app.add_option("--poly", rc.poly, "ascending coefficients c0,c1,... of p in D = p(Delta)");
  app.add_option("--rhs", rc.rhs, "right-hand side: canonical, zero or family")
      ->check(CLI::IsMember({"canonical", "zero", "family"}));
  app.add_option("--max-order", rc.max_order, "largest seminorm order");
  app.add_option("--tol", rc.tol, "pass threshold");

  auto* roundtrip = app.add_subcommand("roundtrip", "inverse(forward(f)) against f");
  auto* pw = app.add_subcommand("pw-report", "seminorms, exponential type and Weyl defect");
  auto* diagram = app.add_subcommand("diagram", "F(Df) against P_D Ff");
  auto* solve_cmd = app.add_subcommand("solve", "solve D u = g spectrally");
  auto* euclid = app.add_subcommand("euclid", "Fourier transform on the line");
  auto* modes = app.add_subcommand("modes", "boundary-mode factorization on H2");
  for (auto* s : {roundtrip, pw, diagram, solve_cmd, euclid, modes}) s->fallthrough();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kPass : kInvalid;
  }

  try {
    rc.validate();
    if (roundtrip->parsed()) return by_model(rc, cmd_roundtrip<2>, cmd_roundtrip<3>);
    if (pw->parsed()) return by_model(rc, cmd_pw_report<2>, cmd_pw_report<3>);
    if (diagram->parsed()) return by_model(rc, cmd_diagram<2>, cmd_diagram<3>);
    if (solve_cmd->parsed()) return by_model(rc, cmd_solve<2>, cmd_solve<3>);
    if (rc.model != "h2") throw ConfigError("euclid and modes run on the h2 model only");
    if (euclid->parsed()) return cmd_euclid(rc);
    return cmd_modes(rc);
  } catch (const SymbolVanishes& e) {
    std::cerr << "SymbolVanishes: " << e.what() << "\n";
    return kVanishes;
  } catch (const ConfigError& e) {
    std::cerr << "invalid configuration: " << e.what() << "\n";
    return kInvalid;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kInvalid;
  }
}
