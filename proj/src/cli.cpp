#include "tetra/cli.hpp"

#include <CLI11.hpp>
#include <json.hpp>

#include <charconv>
#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <functional>
#include <map>
#include <numbers>
#include <numeric>
#include <ostream>
#include <set>
#include <sstream>
#include <variant>

#include "tetra/bifurcation.hpp"
#include "tetra/errors.hpp"
#include "tetra/grouprep.hpp"
#include "tetra/orbits.hpp"

namespace tetra::cli {

using Json = nlohmann::ordered_json;

namespace {

std::string_view trim(std::string_view s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string_view::npos) return {};
  const auto e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

using Value = std::variant<double, bool, std::string>;

Value parse_value(std::string_view v, int line) {
  auto fail = [line](const std::string& m) { return ConfigError("line " + std::to_string(line) + ": " + m); };
  if (v.empty()) throw fail("missing value");
  if (v.front() == '"') {
    if (v.size() < 2 || v.back() != '"') throw fail("unterminated string");
    const auto inner = v.substr(1, v.size() - 2);
    if (inner.find('"') != std::string_view::npos || inner.find('\\') != std::string_view::npos)
      throw fail("escapes are not supported in strings");
    return std::string(inner);
  }
  if (v == "true") return true;
  if (v == "false") return false;
  double d = 0.0;
  const auto* end = v.data() + v.size();
  auto [p, ec] = std::from_chars(v.data() + (v.front() == '+' ? 1 : 0), end, d);
  if (ec != std::errc{} || p != end || !std::isfinite(d)) throw fail("malformed value '" + std::string(v) + "'");
  return d;
}

struct Setter {
  std::function<void(RunConfig&, const Value&, const std::string&)> apply;
};

double as_number(const Value& v, const std::string& key) {
  if (!std::holds_alternative<double>(v)) throw ConfigError(key + " must be a number");
  return std::get<double>(v);
}

int as_int(const Value& v, const std::string& key) {
  const double d = as_number(v, key);
  if (d != std::floor(d) || std::abs(d) > 1e6) throw ConfigError(key + " must be an integer");
  return static_cast<int>(d);
}

bool as_bool(const Value& v, const std::string& key) {
  if (!std::holds_alternative<bool>(v)) throw ConfigError(key + " must be true or false");
  return std::get<bool>(v);
}

std::string as_string(const Value& v, const std::string& key) {
  if (!std::holds_alternative<std::string>(v)) throw ConfigError(key + " must be a quoted string");
  return std::get<std::string>(v);
}

const std::map<std::string, Setter>& setters() {
  using R = RunConfig;
  static const std::map<std::string, Setter> m{
      {"potential.bond_weight", {[](R& c, const Value& v, const std::string& k) { c.potential.bond_weight = as_number(v, k); }}},
      {"potential.vdw_A", {[](R& c, const Value& v, const std::string& k) { c.potential.vdw_A = as_number(v, k); }}},
      {"potential.vdw_B", {[](R& c, const Value& v, const std::string& k) { c.potential.vdw_B = as_number(v, k); }}},
      {"potential.sigma", {[](R& c, const Value& v, const std::string& k) { c.potential.sigma = as_number(v, k); }}},
      {"potential.bond", {[](R& c, const Value& v, const std::string& k) { c.potential.bond = as_bool(v, k); }}},
      {"potential.vdw", {[](R& c, const Value& v, const std::string& k) { c.potential.vdw = as_bool(v, k); }}},
      {"potential.electrostatic",
       {[](R& c, const Value& v, const std::string& k) { c.potential.electrostatic = as_bool(v, k); }}},
      {"analysis.l_max", {[](R& c, const Value& v, const std::string& k) { c.analysis.l_max = as_int(v, k); }}},
      {"analysis.N", {[](R& c, const Value& v, const std::string& k) { c.analysis.N = as_int(v, k); }}},
      {"analysis.steps", {[](R& c, const Value& v, const std::string& k) { c.analysis.steps = as_int(v, k); }}},
      {"analysis.start_amplitude",
       {[](R& c, const Value& v, const std::string& k) { c.analysis.start_amplitude = as_number(v, k); }}},
      {"analysis.amplitude_step",
       {[](R& c, const Value& v, const std::string& k) { c.analysis.amplitude_step = as_number(v, k); }}},
      {"analysis.newton_tolerance",
       {[](R& c, const Value& v, const std::string& k) { c.analysis.newton_tolerance = as_number(v, k); }}},
      {"analysis.residual_tolerance",
       {[](R& c, const Value& v, const std::string& k) { c.analysis.residual_tolerance = as_number(v, k); }}},
      {"analysis.equilibrium_tolerance",
       {[](R& c, const Value& v, const std::string& k) { c.analysis.equilibrium_tolerance = as_number(v, k); }}},
      {"analysis.collision_floor",
       {[](R& c, const Value& v, const std::string& k) { c.analysis.collision_floor = as_number(v, k); }}},
      {"output.format", {[](R& c, const Value& v, const std::string& k) { c.output.format = as_string(v, k); }}},
      {"output.path", {[](R& c, const Value& v, const std::string& k) { c.output.path = as_string(v, k); }}},
  };
  return m;
}

void validate(const RunConfig& c) {
  const auto& a = c.analysis;
  if (a.l_max < 1) throw ConfigError("analysis.l_max must be >= 1");
  if (a.l_max > 8) throw ConfigError("analysis.l_max above 8 is not supported");
  if (a.N < 1) throw ConfigError("analysis.N must be >= 1");
  if (a.steps < 0) throw ConfigError("analysis.steps must be >= 0");
  for (auto [name, v] : {std::pair{"start_amplitude", a.start_amplitude}, {"amplitude_step", a.amplitude_step},
                         {"newton_tolerance", a.newton_tolerance}, {"residual_tolerance", a.residual_tolerance},
                         {"equilibrium_tolerance", a.equilibrium_tolerance}, {"collision_floor", a.collision_floor}})
    if (!(v > 0.0)) throw ConfigError(std::string("analysis.") + name + " must be positive");
  if (c.output.format != "json" && c.output.format != "csv") throw ConfigError("output.format must be \"json\" or \"csv\"");
  try {
    forcefield::PairPotential p(c.potential);
  } catch (const DomainError& e) {
    throw ConfigError(std::string("potential: ") + e.what());
  }
}

// ---- serialization ----

Json potential_json(const forcefield::PairPotentialParams& p) {
  return Json{{"bond_weight", p.bond_weight}, {"vdw_A", p.vdw_A},   {"vdw_B", p.vdw_B},
              {"sigma", p.sigma},             {"bond", p.bond},     {"vdw", p.vdw},
              {"electrostatic", p.electrostatic}};
}

Json element_json(const burnside::ClassTable& t, const burnside::BurnsideElement& x) {
  Json terms = Json::array();
  for (auto [id, c] : x.terms()) terms.push_back({{"class", t.at(id).printed}, {"canonical", t.at(id).canonical}, {"coeff", c}});
  return terms;
}

Json generator_json(const bifurcation::Generator& g) {
  return Json{{"sigma", g.sigma.to_string()}, {"kappa", g.refl != 0}, {"turn", std::to_string(g.num) + "/" + std::to_string(g.den)}};
}

std::string kind_name(bifurcation::PredicateKind k) {
  switch (k) {
    case bifurcation::PredicateKind::Pairing: return "pairing";
    case bifurcation::PredicateKind::Brake: return "brake";
    case bifurcation::PredicateKind::BrakeVelocity: return "brake_velocity";
    case bifurcation::PredicateKind::RegularTetrahedron: return "regular_tetrahedron";
  }
  return "unknown";
}

Json description_json(const burnside::ClassTable& t, const bifurcation::SymmetryDescription& d) {
  Json gens = Json::array(), preds = Json::array();
  for (const auto& g : d.generators) gens.push_back(generator_json(g));
  for (const auto& p : d.predicates) preds.push_back({{"kind", kind_name(p.kind)}, {"text", p.text}});
  return Json{{"class", d.label}, {"canonical", t.at(d.cls).canonical}, {"generators", gens}, {"predicates", preds},
              {"summary", d.summary}};
}

Json contributors_json(const bifurcation::CriticalNumber& c) {
  Json a = Json::array();
  for (auto [j, l] : c.contributors) a.push_back({{"j", j}, {"l", l}});
  return a;
}

// ---- pipeline ----

struct Context {
  RunConfig config;
  std::optional<long long> seed;

  forcefield::PairPotential potential() const { return forcefield::PairPotential(config.potential); }
  forcefield::EquilibriumResult equilibrium() const {
    forcefield::EquilibriumOptions o;
    o.tolerance = config.analysis.equilibrium_tolerance;
    return forcefield::find_equilibrium(potential(), o);
  }
  burnside::ClassTable table(int l_max) const {
    std::vector<int> modes(l_max);
    std::iota(modes.begin(), modes.end(), 1);
    return burnside::ClassTable::for_modes(modes);
  }
  orbits::BranchOptions branch_options() const {
    orbits::BranchOptions o;
    o.N = config.analysis.N;
    o.start_amplitude = config.analysis.start_amplitude;
    o.step = config.analysis.amplitude_step;
    o.newton_tolerance = config.analysis.newton_tolerance;
    o.residual_tolerance = config.analysis.residual_tolerance;
    o.collision_floor = config.analysis.collision_floor;
    return o;
  }
  Json metadata(const std::string& command) const {
    return Json{{"command", command},
                {"seed", seed ? Json(*seed) : Json(nullptr)},
                {"potential", potential_json(config.potential)},
                {"l_max", config.analysis.l_max},
                {"N", config.analysis.N}};
  }
};

Json equilibrium_json(const Context& ctx, const forcefield::EquilibriumResult& eq) {
  Json pos = Json::array();
  for (const auto& p : eq.u_o.positions) pos.push_back({p.x(), p.y(), p.z()});
  return Json{{"r_o", eq.r_o},
              {"s_o", eq.s_o},
              {"nu0_sq", eq.nu0_sq},
              {"mu", {eq.mu[0], eq.mu[1], eq.mu[2]}},
              {"u_o", pos},
              {"gradient_norm", forcefield::gradient(ctx.potential(), eq.u_o).norm()}};
}

Json spectrum_json(const Context& ctx, const forcefield::EquilibriumResult& eq) {
  const Mat12 H = forcefield::hessian(ctx.potential(), eq.u_o);
  const auto slice = grouprep::slice_spectrum(H);
  // Hessian on the center-of-mass-free subspace.
  Eigen::SelfAdjointEigenSolver<Mat12> com(grouprep::center_of_mass_projector());
  Eigen::MatrixXd B(12, 9);
  int k = 0;
  for (int i = 0; i < 12; ++i)
    if (com.eigenvalues()(i) > 0.5) B.col(k++) = com.eigenvectors().col(i);
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(B.transpose() * H * B);
  const double scale = eq.mu[0];
  std::array<int, 3> mult{};
  int zero = 0, other = 0;
  Json eig = Json::array();
  for (int i = 0; i < 9; ++i) {
    const double e = es.eigenvalues()(i);
    eig.push_back(e);
    if (std::abs(e) < 1e-8 * scale) {
      ++zero;
      continue;
    }
    bool hit = false;
    for (int j = 0; j < 3; ++j)
      if (std::abs(e - eq.mu[j]) < 1e-8 * eq.mu[j]) {
        ++mult[j];
        hit = true;
      }
    other += !hit;
  }
  return Json{{"slice_mu", {slice.mu[0], slice.mu[1], slice.mu[2]}},
              {"ratios", {slice.mu[0] / slice.mu[2], slice.mu[1] / slice.mu[2], 1.0}},
              {"multiplicities", {mult[0], mult[1], mult[2]}},
              {"rotational_zero_modes", zero},
              {"unmatched_eigenvalues", other},
              {"block_residual", slice.block_residual},
              {"com_free_eigenvalues", eig}};
}

Json reps_json() {
  using CT = grouprep::CharacterTable;
  Json chi = Json::array(), mult = Json::array(), ranks = Json::array();
  double idem = 0.0, orth = 0.0;
  Mat12 sum = Mat12::Zero();
  for (int j = 0; j < 5; ++j) {
    chi.push_back(CT::chi[j]);
    mult.push_back(CT::multiplicity(CT::chi_config, j));
    const Mat12& P = grouprep::isotypic_projector(j);
    ranks.push_back(static_cast<int>(std::lround(P.trace())));
    idem = std::max(idem, (P * P - P).norm());
    for (int i = 0; i < j; ++i) orth = std::max(orth, (P * grouprep::isotypic_projector(i)).norm());
    sum += P;
  }
  return Json{{"class_labels", CT::class_labels},
              {"class_sizes", CT::class_sizes},
              {"characters", chi},
              {"config_character", CT::chi_config},
              {"multiplicities", mult},
              {"projector_ranks", ranks},
              {"idempotence_error", idem},
              {"orthogonality_error", orth},
              {"completeness_error", (sum - Mat12::Identity()).norm()}};
}

Json degree_json(const burnside::ClassTable& t, int j, int l) {
  const auto d = t.basic_degree(j, l);
  return Json{{"j", j}, {"l", l}, {"terms", element_json(t, d)}, {"text", t.format(d)}};
}

Json invariant_json(const burnside::ClassTable& t, const bifurcation::InvariantReport& r) {
  Json maximal = Json::array();
  for (std::size_t i = 0; i < r.maximal_classes.size(); ++i) {
    Json d = description_json(t, r.descriptions[i]);
    d["coeff"] = r.omega.coeff(r.maximal_classes[i]);
    maximal.push_back(d);
  }
  return Json{{"critical", r.critical.value},
              {"contributors", contributors_json(r.critical)},
              {"resonant", r.critical.resonant()},
              {"lambda_minus", r.lambda_minus},
              {"lambda_plus", r.lambda_plus},
              {"omega", element_json(t, r.omega)},
              {"omega_text", t.format(r.omega)},
              {"maximal", maximal}};
}

std::vector<bifurcation::InvariantReport> isolated_reports(const burnside::ClassTable& t, const std::array<double, 3>& mu,
                                                           int l_max) {
  std::vector<bifurcation::InvariantReport> out;
  for (const auto& c : bifurcation::critical_set(mu, l_max)) {
    try {
      out.push_back(bifurcation::invariant(t, mu, c, l_max));
    } catch (const DomainError&) {
      break;  // every later critical number is beyond the isolation horizon too
    }
  }
  return out;
}

Json family_json(const burnside::ClassTable& t, const bifurcation::Family& f) {
  return Json{{"class", t.at(f.cls).printed}, {"canonical", t.at(f.cls).canonical}, {"j", f.j},
              {"l", f.l},                   {"lambda", f.lambda},                  {"frequency", f.frequency}};
}

struct BranchStats {
  double max_residual = 0.0, max_predicate = 0.0, max_energy = 0.0;
};

Json point_json(const orbits::BranchPoint& p, const std::vector<orbits::PredicateResidual>& pr) {
  Json preds = Json::array();
  for (const auto& r : pr) preds.push_back({{"kind", kind_name(r.kind)}, {"text", r.text}, {"value", r.value}});
  return Json{{"amplitude", p.amplitude}, {"lambda", p.orbit.lambda}, {"residual", p.residual}, {"predicate_residuals", preds}};
}

double max_value(const std::vector<orbits::PredicateResidual>& pr) {
  double m = 0.0;
  for (const auto& r : pr) m = std::max(m, r.value);
  return m;
}

Json branch_summary(const Context& ctx, const burnside::ClassTable& t, const forcefield::EquilibriumResult& eq,
                    const bifurcation::Family& f) {
  const auto U = ctx.potential();
  const auto br = orbits::continue_branch(U, eq, t, f.cls, f.j, f.l, ctx.config.analysis.steps, ctx.branch_options());
  BranchStats s;
  for (const auto& p : br.points) {
    s.max_residual = std::max(s.max_residual, p.residual);
    s.max_predicate = std::max(s.max_predicate, max_value(orbits::verify_predicates(p.orbit, br.predicates)));
    s.max_energy = std::max(s.max_energy, orbits::energy_spread(U, p.orbit));
  }
  const double ex = orbits::extrapolate_lambda(br);
  return Json{{"class", t.at(f.cls).printed},
              {"canonical", t.at(f.cls).canonical},
              {"j", f.j},
              {"l", f.l},
              {"lambda_critical", br.lambda_critical},
              {"lambda_extrapolated", ex},
              {"lambda_relative_error", std::abs(ex - br.lambda_critical) / br.lambda_critical},
              {"points", br.points.size()},
              {"final_amplitude", br.points.back().amplitude},
              {"final_lambda", br.points.back().orbit.lambda},
              {"max_residual", s.max_residual},
              {"max_predicate_residual", s.max_predicate},
              {"max_energy_spread", s.max_energy},
              {"reduced_dimension", br.reduced_dimension},
              {"kernel_dimension", br.kernel_dimension},
              {"gauge_rows", br.gauge_rows}};
}

// ---- output ----

struct Output {
  std::string text;
  std::string extension;
};

std::string csv_escape(const std::string& s) {
  if (s.find_first_of(",\"\n") == std::string::npos) return s;
  std::string o = "\"";
  for (char c : s) o += c == '"' ? std::string("\"\"") : std::string(1, c);
  return o + "\"";
}

std::string number(double x) {
  std::ostringstream o;
  o.precision(17);
  o << x;
  return o.str();
}

std::string terms_csv(const Json& terms, const std::string& prefix) {
  std::string o;
  for (const auto& t : terms) o += prefix + csv_escape(t["class"]) + "," + csv_escape(t["canonical"]) + "," + std::to_string(t["coeff"].get<long long>()) + "\n";
  return o;
}

void emit(const Context& ctx, const std::string& command, const Output& o, std::ostream& out) {
  std::string dir = ctx.config.output.path;
  if (const char* env = std::getenv(kOutputDirEnv); env && *env) dir = env;
  if (dir.empty()) {
    out << o.text;
    return;
  }
  std::error_code ec;
  std::filesystem::create_directories(dir, ec);
  const auto path = std::filesystem::path(dir) / (command + o.extension);
  std::ofstream f(path, std::ios::binary);
  if (!f) throw ConfigError("cannot write " + path.string());
  f << o.text;
  out << path.string() << "\n";
}

Output as_json(const Json& j) { return {j.dump(2) + "\n", ".json"}; }

void require_json(const Context& ctx, const std::string& command) {
  if (ctx.config.output.format != "json") throw ConfigError("csv output is not available for '" + command + "'");
}

std::pair<int, int> parse_pair(const std::string& s) {
  const auto comma = s.find(',');
  if (comma == std::string::npos) throw ConfigError("--critical expects j,l");
  try {
    std::size_t p1 = 0, p2 = 0;
    const int j = std::stoi(s.substr(0, comma), &p1);
    const int l = std::stoi(s.substr(comma + 1), &p2);
    if (p1 != comma || p2 != s.size() - comma - 1) throw ConfigError("--critical expects j,l");
    return {j, l};
  } catch (const std::logic_error&) {
    throw ConfigError("--critical expects two integers j,l");
  }
}

}  // namespace

RunConfig parse_config(std::string_view text) {
  RunConfig c;
  std::string section;
  std::set<std::string> seen;
  int line_no = 0;
  std::size_t pos = 0;
  while (pos <= text.size()) {
    const auto nl = text.find('\n', pos);
    std::string_view line = text.substr(pos, nl == std::string_view::npos ? std::string_view::npos : nl - pos);
    pos = nl == std::string_view::npos ? text.size() + 1 : nl + 1;
    ++line_no;
    bool quoted = false;
    for (std::size_t i = 0; i < line.size(); ++i) {
      if (line[i] == '"') quoted = !quoted;
      if (line[i] == '#' && !quoted) {
        line = line.substr(0, i);
        break;
      }
    }
    line = trim(line);
    if (line.empty()) continue;
    const std::string where = "line " + std::to_string(line_no) + ": ";
    if (line.front() == '[') {
      if (line.back() != ']') throw ConfigError(where + "malformed section header");
      section = std::string(trim(line.substr(1, line.size() - 2)));
      if (section != "potential" && section != "analysis" && section != "output")
        throw ConfigError(where + "unknown section [" + section + "]");
      continue;
    }
    const auto eq = line.find('=');
    if (eq == std::string_view::npos) throw ConfigError(where + "expected key = value");
    const std::string key(trim(line.substr(0, eq)));
    if (section.empty()) throw ConfigError(where + "key '" + key + "' outside a section");
    const std::string full = section + "." + key;
    const auto it = setters().find(full);
    if (it == setters().end()) throw ConfigError(where + "unknown key '" + full + "'");
    if (!seen.insert(full).second) throw ConfigError(where + "duplicate key '" + full + "'");
    try {
      it->second.apply(c, parse_value(trim(line.substr(eq + 1)), line_no), full);
    } catch (const ConfigError& e) {
      const std::string m = e.what();
      throw ConfigError(m.rfind("line ", 0) == 0 ? m : where + m);
    }
  }
  validate(c);
  return c;
}

RunConfig load_config(const std::string& path) {
  std::ifstream f(path, std::ios::binary);
  if (!f) throw ConfigError("cannot read config file " + path);
  std::stringstream ss;
  ss << f.rdbuf();
  return parse_config(ss.str());
}

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Equivariant bifurcation analysis of the tetrahedral four-particle molecule", "tetra"};
  app.require_subcommand(1);
  app.fallthrough();
  std::string config_path;
  std::optional<long long> seed;
  app.add_option("-c,--config", config_path, "configuration file")->check(CLI::ExistingFile);
  app.add_option("--seed", seed, "recorded in the output metadata; the pipeline is deterministic");

  auto* equilibrium = app.add_subcommand("equilibrium", "tetrahedral equilibrium and slice eigenvalues");
  auto* spectrum = app.add_subcommand("spectrum", "Hessian spectrum at the equilibrium");
  auto* reps = app.add_subcommand("reps", "S4 character table and isotypic projectors");
  auto* degrees = app.add_subcommand("degrees", "basic degrees Deg_{W_{j,l}}");
  std::optional<int> deg_j, deg_l;
  degrees->add_option("--j", deg_j, "isotypic index 0..4")->check(CLI::Range(0, 4));
  degrees->add_option("--l", deg_l, "Fourier mode >= 1")->check(CLI::PositiveNumber);
  auto* invariants = app.add_subcommand("invariants", "bifurcation invariants at the critical numbers");
  std::optional<int> lmax;
  std::string critical;
  invariants->add_option("--lmax", lmax, "largest Fourier mode")->check(CLI::PositiveNumber);
  invariants->add_option("--critical", critical, "critical number lambda_{j,l} given as j,l");
  auto* branch = app.add_subcommand("branch", "continue one branch of periodic orbits");
  std::string cls_label, csv_path;
  int br_j = -1, br_l = 1;
  std::optional<int> br_steps;
  branch->add_option("--class", cls_label, "class label, canonical or printed form")->required();
  branch->add_option("--j", br_j, "isotypic index 0..2")->required()->check(CLI::Range(0, 2));
  branch->add_option("--l", br_l, "Fourier mode")->check(CLI::PositiveNumber);
  branch->add_option("--steps", br_steps, "continuation steps after the first point")->check(CLI::NonNegativeNumber);
  branch->add_option("--csv", csv_path, "also write trajectory samples to this CSV file");
  auto* report = app.add_subcommand("report", "full pipeline");
  report->add_option("--lmax", lmax, "largest Fourier mode")->check(CLI::PositiveNumber);

  std::vector<std::string> argv(args.rbegin(), args.rend());
  try {
    app.parse(argv);
  } catch (const CLI::ParseError& e) {
    std::ostringstream o, x;
    const int code = app.exit(e, o, x);
    out << o.str();
    err << x.str();
    return code == 0 ? 0 : 1;
  }

  try {
    Context ctx;
    if (!config_path.empty()) ctx.config = load_config(config_path);
    ctx.seed = seed;
    if (lmax) {
      ctx.config.analysis.l_max = *lmax;
      validate(ctx.config);
    }
    if (br_steps) ctx.config.analysis.steps = *br_steps;
    const auto& fmt = ctx.config.output.format;

    if (equilibrium->parsed()) {
      require_json(ctx, "equilibrium");
      Json j = ctx.metadata("equilibrium");
      j["equilibrium"] = equilibrium_json(ctx, ctx.equilibrium());
      emit(ctx, "equilibrium", as_json(j), out);
    } else if (spectrum->parsed()) {
      require_json(ctx, "spectrum");
      Json j = ctx.metadata("spectrum");
      j["spectrum"] = spectrum_json(ctx, ctx.equilibrium());
      emit(ctx, "spectrum", as_json(j), out);
    } else if (reps->parsed()) {
      require_json(ctx, "reps");
      Json j = ctx.metadata("reps");
      j["reps"] = reps_json();
      emit(ctx, "reps", as_json(j), out);
    } else if (degrees->parsed()) {
      std::vector<std::pair<int, int>> which;
      std::vector<int> ls = deg_l ? std::vector<int>{*deg_l} : std::vector<int>{1, 2};
      for (int l : ls)
        for (int j = 0; j < 5; ++j)
          if (!deg_j || *deg_j == j) which.push_back({j, l});
      const auto t = burnside::ClassTable::for_modes(ls);
      Json list = Json::array();
      for (auto [j, l] : which) list.push_back(degree_json(t, j, l));
      if (fmt == "csv") {
        std::string o = "j,l,class,canonical,coeff\n";
        for (const auto& d : list)
          o += terms_csv(d["terms"], std::to_string(d["j"].get<int>()) + "," + std::to_string(d["l"].get<int>()) + ",");
        emit(ctx, "degrees", {o, ".csv"}, out);
      } else {
        Json j = ctx.metadata("degrees");
        j["degrees"] = list;
        emit(ctx, "degrees", as_json(j), out);
      }
    } else if (invariants->parsed()) {
      const int L = ctx.config.analysis.l_max;
      const auto eq = ctx.equilibrium();
      const auto t = ctx.table(L);
      std::vector<bifurcation::InvariantReport> reports;
      if (!critical.empty()) {
        const auto [j, l] = parse_pair(critical);
        if (j < 0 || j > 2 || l < 1 || l > L) throw ConfigError("--critical needs 0 <= j <= 2 and 1 <= l <= l_max");
        reports.push_back(bifurcation::invariant(t, eq.mu, {l / std::sqrt(eq.mu[j]), {{j, l}}}, L));
      } else {
        reports = isolated_reports(t, eq.mu, L);
      }
      Json list = Json::array();
      for (const auto& r : reports) list.push_back(invariant_json(t, r));
      if (fmt == "csv") {
        std::string o = "critical,class,canonical,coeff\n";
        for (const auto& r : list) o += terms_csv(r["omega"], number(r["critical"].get<double>()) + ",");
        emit(ctx, "invariants", {o, ".csv"}, out);
      } else {
        Json j = ctx.metadata("invariants");
        j["invariants"] = list;
        if (critical.empty()) {
          Json fam = Json::array();
          for (const auto& f : bifurcation::independent_families(t, reports)) fam.push_back(family_json(t, f));
          j["families"] = fam;
        }
        emit(ctx, "invariants", as_json(j), out);
      }
    } else if (branch->parsed()) {
      const auto eq = ctx.equilibrium();
      const auto t = ctx.table(std::max(ctx.config.analysis.l_max, br_l));
      const int cls = t.find(cls_label);
      const auto U = ctx.potential();
      const auto br = orbits::continue_branch(U, eq, t, cls, br_j, br_l, ctx.config.analysis.steps, ctx.branch_options());
      std::string o;
      if (fmt == "csv") {
        o = "amplitude,lambda,residual,max_predicate_residual\n";
        for (const auto& p : br.points)
          o += number(p.amplitude) + "," + number(p.orbit.lambda) + "," + number(p.residual) + "," +
               number(max_value(orbits::verify_predicates(p.orbit, br.predicates))) + "\n";
        emit(ctx, "branch", {o, ".csv"}, out);
      } else {
        for (const auto& p : br.points) o += point_json(p, orbits::verify_predicates(p.orbit, br.predicates)).dump() + "\n";
        emit(ctx, "branch", {o, ".jsonl"}, out);
      }
      if (!csv_path.empty()) {
        std::ofstream f(csv_path, std::ios::binary);
        if (!f) throw ConfigError("cannot write " + csv_path);
        f << "point,t";
        for (int k = 1; k <= 4; ++k) f << ",u" << k << "x,u" << k << "y,u" << k << "z";
        f << "\n";
        constexpr int kSamples = 64;
        for (std::size_t i = 0; i < br.points.size(); ++i)
          for (int q = 0; q < kSamples; ++q) {
            const double tt = 2.0 * std::numbers::pi * q / kSamples;
            const Vec12 u = br.points[i].orbit.position(tt);
            f << i << "," << number(tt);
            for (int c = 0; c < 12; ++c) f << "," << number(u(c));
            f << "\n";
          }
      }
    } else if (report->parsed()) {
      require_json(ctx, "report");
      const int L = ctx.config.analysis.l_max;
      const auto eq = ctx.equilibrium();
      Json j = ctx.metadata("report");
      j["equilibrium"] = equilibrium_json(ctx, eq);
      j["spectrum"] = spectrum_json(ctx, eq);
      j["reps"] = reps_json();
      const auto t = ctx.table(L);
      Json degs = Json::array();
      for (int l = 1; l <= std::min(L, 2); ++l)
        for (int jj = 0; jj < 5; ++jj) degs.push_back(degree_json(t, jj, l));
      j["degrees"] = degs;
      const auto reports = isolated_reports(t, eq.mu, L);
      Json inv = Json::array();
      for (const auto& r : reports) inv.push_back(invariant_json(t, r));
      j["invariants"] = inv;
      Json fam = Json::array(), brs = Json::array();
      for (const auto& f : bifurcation::independent_families(t, reports)) {
        fam.push_back(family_json(t, f));
        brs.push_back(branch_summary(ctx, t, eq, f));
      }
      j["families"] = fam;
      j["branches"] = brs;
      emit(ctx, "report", as_json(j), out);
    }
    return 0;
  } catch (const ConfigError& e) {
    err << "configuration error: " << e.what() << "\n";
    return 1;
  } catch (const DomainError& e) {
    err << "invalid request: " << e.what() << "\n";
    return 1;
  } catch (const ConvergenceError& e) {
    err << "no convergence: " << e.what() << "\n";
    return 2;
  } catch (const CollisionError& e) {
    err << "collision: " << e.what() << "\n";
    return 2;
  } catch (const ConsistencyError& e) {
    err << "consistency failure: " << e.what() << "\n";
    return 3;
  } catch (const std::exception& e) {
    err << "internal error: " << e.what() << "\n";
    return 3;
  }
}

}  // namespace tetra::cli
