#include <chrono>
#include <cmath>
#include <ctime>
#include <fstream>
#include <limits>
#include <numbers>
#include <random>
#include <regex>
#include <sstream>

#include <CLI11.hpp>

#include "vdlab/bubbles.hpp"
#include "vdlab/cli.hpp"
#include "vdlab/currents.hpp"
#include "vdlab/error.hpp"
#include "vdlab/tautological.hpp"

namespace vdlab::cli {

namespace {

[[noreturn]] void input_error(const std::string& what) { throw Error(Errc::InvalidArgument, what); }

std::string trim(std::string s) {
  const auto b = s.find_first_not_of(" \t\r\n");
  if (b == std::string::npos) return {};
  const auto e = s.find_last_not_of(" \t\r\n");
  return s.substr(b, e - b + 1);
}

std::vector<std::string> split(const std::string& s, char sep) {
  std::vector<std::string> out;
  std::string cur;
  std::istringstream is(s);
  while (std::getline(is, cur, sep)) out.push_back(trim(cur));
  return out;
}

std::string fmt17(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

void write_file(const std::string& path, const std::string& content) {
  std::ofstream os(path, std::ios::binary);
  if (!os) input_error("cannot write " + path);
  os << content;
}

std::string sibling_path(const std::string& path, const std::string& tag) {
  const auto dot = path.rfind('.');
  const auto slash = path.rfind('/');
  if (dot == std::string::npos || (slash != std::string::npos && dot < slash)) return path + "." + tag;
  return path.substr(0, dot) + "." + tag + path.substr(dot);
}

std::string utc_timestamp() {
  const std::time_t t = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
  std::tm tm{};
  gmtime_r(&t, &tm);
  char buf[32];
  std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm);
  return buf;
}

struct Outcome {
  nlohmann::json results;
  bool pass = true;
  std::string csv;
  std::vector<std::pair<std::string, std::string>> extra_csv;  // (tag, content)
  std::string summary;
};

double tolerance(const RunConfig& c, double fallback) { return c.tol.value_or(fallback); }

std::vector<double> radii_or(const RunConfig& c, std::vector<double> fallback) {
  return c.r_grid.empty() ? fallback : c.r_grid;
}

RationalMap load_map(const RunConfig& c) {
  if (c.map.empty()) input_error("--map is required for " + c.command);
  RationalMap f = parse_map(c.map);
  if (c.exact && !f.has_exact()) throw Error(Errc::ExactModeRequired, "--exact needs exact map coefficients");
  return f;
}

MetricizedDivisor load_divisor(const RunConfig& c, const std::string& spec) {
  MetricizedDivisor d = parse_divisor(spec);
  if (c.exact && !d.form.has_exact()) throw Error(Errc::ExactModeRequired, "--exact needs exact divisor coefficients");
  return d;
}

LogMetric load_boundary(const RunConfig& c) {
  if (c.divisors.size() != 1) input_error(c.command + " needs one --divisor boundary list, e.g. 0,1,inf");
  return LogMetric(parse_boundary(c.divisors.front()));
}

struct Sequence {
  SequenceSpec spec;
  std::vector<RationalMap> maps;
};

Sequence load_sequence(const RunConfig& c) {
  if (c.seq.empty()) input_error("--seq is required for " + c.command);
  Sequence s;
  s.spec = parse_sequence(c.seq);
  s.maps = build_sequence(s.spec);
  return s;
}

// ---------------------------------------------------------------------------- commands

Outcome cmd_jensen(const RunConfig& c) {
  const double tol = tolerance(c, 1e-8);
  const auto radii = radii_or(c, {0.3, 0.6, 0.9});
  std::mt19937 rng(c.seed);
  std::uniform_int_distribution<int> deg(0, 6);
  std::uniform_real_distribution<double> coef(-1.0, 1.0);
  Outcome o;
  std::ostringstream csv;
  csv << "trial,degree,r,boundary_mean,nabla,residual\n";
  nlohmann::json rows = nlohmann::json::array();
  double worst = 0.0;
  for (int t = 0; t < c.count; ++t) {
    const int d = deg(rng);
    std::map<std::pair<int, int>, double> terms;
    for (int i = 0; i <= d; ++i) {
      for (int j = 0; i + j <= d; ++j) terms[{i, j}] = coef(rng);
    }
    const BivariatePoly p(std::move(terms));
    const RealFunction phi = [&p](cplx z) { return p(z); };
    for (double r : radii) {
      const double mean = boundary_mean(phi, r);
      const double nabla = nabla_integral(p.ddc(), r);
      const double res = nabla - mean + phi(0.0);
      const double scaled = std::abs(res) / (1.0 + std::abs(mean));
      worst = std::max(worst, scaled);
      if (scaled > tol) o.pass = false;
      csv << t << ',' << d << ',' << fmt17(r) << ',' << fmt17(mean) << ',' << fmt17(nabla) << ',' << fmt17(res) << '\n';
      rows.push_back({{"trial", t}, {"degree", d}, {"r", r}, {"boundary_mean", mean}, {"nabla", nabla}, {"residual", res}});
    }
  }
  o.csv = csv.str();
  o.results = {{"rows", rows}, {"worst_scaled_residual", worst}, {"tolerance", tol}};
  o.summary = "jensen: worst |residual|/(1+|mean|) = " + fmt17(worst);
  return o;
}

Outcome cmd_fmt(const RunConfig& c) {
  const RationalMap f = load_map(c);
  if (c.divisors.size() != 1) input_error("fmt needs exactly one --divisor");
  const MetricizedDivisor d = load_divisor(c, c.divisors.front());
  if (d.form.nvars() != f.target_dim() + 1) input_error("divisor and map live in different P^n");
  const double tol = tolerance(c, 1e-6);
  CharacteristicReport rep = fmt_report(f, d, radii_or(c, default_radius_grid()));
  rep.f_label = c.map;
  Outcome o;
  double worst = 0.0;
  for (const auto& row : rep.rows) {
    const double scaled = std::abs(row.residual) / (1.0 + std::abs(row.T_geom));
    worst = std::max(worst, scaled);
    if (scaled > tol) o.pass = false;
  }
  o.csv = rep.to_csv();
  o.results = rep.to_json();
  o.results["worst_scaled_residual"] = worst;
  o.results["tolerance"] = tol;
  o.summary = "fmt: worst |T_geom - T_arith|/(1+|T_geom|) = " + fmt17(worst);
  return o;
}

Outcome identity_outcome(const IdentityVerdict& v, const std::string& summary) {
  Outcome o;
  o.pass = v.holds;
  o.results = v.to_json();
  std::ostringstream csv;
  csv << "identity,lhs,rhs,residual,holds\n"
      << v.identity << ',' << fmt17(v.lhs) << ',' << fmt17(v.rhs) << ',' << fmt17(v.residual) << ','
      << (v.holds ? 1 : 0) << '\n';
  o.csv = csv.str();
  o.summary = summary;
  return o;
}

Outcome cmd_mason(const RunConfig& c) {
  if (c.a.empty() || c.b.empty()) input_error("mason needs --a and --b");
  const IdentityVerdict v = mason_check(parse_poly(c.a), parse_poly(c.b));
  return identity_outcome(v, "mason: slack " + fmt17(v.residual));
}

Outcome cmd_rh(const RunConfig& c) {
  const RationalMap f = load_map(c);
  if (c.degree && *c.degree != f.degree())
    input_error("declared degree " + std::to_string(*c.degree) + " but the map has degree " + std::to_string(f.degree()));
  const IdentityVerdict v = rh_check(f);
  return identity_outcome(v, "rh: -2d = " + fmt17(v.lhs) + ", -2 - Ram = " + fmt17(v.rhs));
}

Outcome cmd_logrh(const RunConfig& c) {
  const RationalMap f = load_map(c);
  if (c.degree && *c.degree != f.degree()) input_error("declared degree does not match the map");
  const IdentityVerdict v = log_rh_check(f, load_boundary(c));
  return identity_outcome(v, "logrh: d(|D|-2) = " + fmt17(v.lhs) + ", -2 + n_red - Ram_away = " + fmt17(v.rhs));
}

Outcome cmd_taut(const RunConfig& c) {
  const LogMetric d = load_boundary(c);
  Outcome o;
  if (!c.seq.empty()) {
    const Sequence s = load_sequence(c);
    const TautTrendReport rep = taut_inequality_experiment(s.maps, s.spec.indices, d, radii_or(c, {0.6, 0.75}),
                                                           c.tail, tolerance(c, 1e-2));
    o.pass = rep.pass();
    o.results = rep.to_json();
    o.results["sequence"] = c.seq;
    o.csv = rep.to_csv();
    double worst = -std::numeric_limits<double>::infinity();
    for (double t : rep.tail_max) worst = std::max(worst, t);
    o.summary = "taut: largest tail pairing " + fmt17(worst);
    return o;
  }
  const RationalMap f = load_map(c);
  const double tol = tolerance(c, 1e-5);
  std::ostringstream csv;
  csv << "r,lhs,rhs,residual\n";
  nlohmann::json rows = nlohmann::json::array();
  double worst = 0.0;
  for (double r : radii_or(c, {0.5, 0.8})) {
    const IdentityVerdict v = taut_identity_check(f, d, r, {}, tol);
    o.pass = o.pass && v.holds;
    worst = std::max(worst, std::abs(v.residual));
    csv << fmt17(r) << ',' << fmt17(v.lhs) << ',' << fmt17(v.rhs) << ',' << fmt17(v.residual) << '\n';
    rows.push_back(v.to_json());
  }
  o.csv = csv.str();
  o.results = {{"rows", rows}, {"tolerance", tol}};
  o.summary = "taut: worst |residual| " + fmt17(worst);
  return o;
}

Outcome cmd_bubble(const RunConfig& c) {
  const RationalMap base = load_map(c);
  const MetricizedDivisor d = c.divisors.empty() ? MetricizedDivisor::coordinate_hyperplane(base.target_dim(), 0)
                                                 : load_divisor(c, c.divisors.front());
  std::vector<BubbleTree> trees;
  for (const auto& spec : c.bubbles) {
    const auto semi = spec.find(';');
    if (semi == std::string::npos) input_error("bubble spec must read `attach ; map`");
    const auto [attach, exact] = parse_coefficient(trim(spec.substr(0, semi)));
    trees.push_back(make_bubble(attach, {parse_map(spec.substr(semi + 1))}, {}, d));
  }
  const DiscWithBubbles b(base, std::move(trees));
  Outcome o;
  std::ostringstream csv;
  csv << "r,T_base,bubble_term,nabla_bubble\n";
  nlohmann::json rows = nlohmann::json::array();
  for (double r : radii_or(c, {0.5, 0.9})) {
    const double t = characteristic_geometric(base, d, r);
    const double total = nabla_bubble(b, d, r);
    csv << fmt17(r) << ',' << fmt17(t) << ',' << fmt17(total - t) << ',' << fmt17(total) << '\n';
    rows.push_back({{"r", r}, {"T_base", t}, {"bubble_term", total - t}, {"nabla_bubble", total}});
  }
  nlohmann::json bubbles = nlohmann::json::array();
  for (const auto& t : b.bubbles()) {
    bubbles.push_back({{"attach", {t.attach.real(), t.attach.imag()}}, {"energy", t.total_energy()}});
  }
  o.csv = csv.str();
  o.results = {{"rows", rows}, {"bubbles", bubbles}, {"divisor", d.name}};
  o.summary = "bubble: " + std::to_string(b.bubbles().size()) + " bubble(s)";
  return o;
}

Outcome cmd_gromov(const RunConfig& c) {
  const Sequence s = load_sequence(c);
  const double bound = c.bound;
  const GromovVerdict v = gromov_harness(s.maps, [bound](double) { return bound; },
                                         radii_or(c, {0.25, 0.5, 0.75, 0.9}), c.mesh);
  Outcome o;
  o.pass = v.pass;
  o.results = v.to_json();
  o.results["sequence"] = c.seq;
  o.results["indices"] = s.spec.indices;
  std::ostringstream csv;
  csv << "i,j,distance\n";
  for (std::size_t i = 0; i < v.pairwise_distances.size(); ++i) {
    for (std::size_t j = i + 1; j < v.pairwise_distances.size(); ++j) {
      csv << s.spec.indices[static_cast<std::size_t>(v.candidate_indices[i])] << ','
          << s.spec.indices[static_cast<std::size_t>(v.candidate_indices[j])] << ',' << fmt17(v.pairwise_distances[i][j])
          << '\n';
    }
  }
  o.csv = csv.str();
  o.summary = std::string("gromov: ") + (v.pass ? "PASS" : "FAIL") + ", " + std::to_string(v.bubbles_detected.size()) +
              " bubble(s)";
  return o;
}

Outcome cmd_currents(const RunConfig& c) {
  const Sequence s = load_sequence(c);
  const auto radii = radii_or(c, {0.6, 0.75});
  const double tol = tolerance(c, 1e-2);
  const MetricizedDivisor h = MetricizedDivisor::coordinate_hyperplane(1, 0);
  std::vector<MetricizedDivisor> effective;
  for (const auto& spec : c.divisors) effective.push_back(load_divisor(c, spec));

  TestFormBasis basis;
  basis.curvature_forms.push_back(h);
  for (const auto& d : effective) basis.curvature_forms.push_back(d);
  const ExactForm phi = chordal_square_form({1.0, 0.0}, "chordal^2 to [1:0]");
  basis.exact_forms.push_back(phi);

  Outcome o;
  std::vector<CurrentSample> samples;
  nlohmann::json sample_json = nlohmann::json::array();
  bool self_exact = true;
  for (double r : radii) {
    for (std::size_t i = 0; i < s.maps.size(); ++i) {
      samples.push_back(normalized_pairings(s.maps[i], s.spec.indices[i], r, basis));
      const auto& cs = samples.back();
      self_exact = self_exact && cs.pairings[basis.normalizer_index] == 1.0;
      sample_json.push_back({{"n", cs.n}, {"r", cs.r}, {"normalizer", cs.normalizer}, {"pairings", cs.pairings}});
    }
  }
  nlohmann::json limits = nlohmann::json::array();
  if (s.maps.size() >= 8) {
    for (const auto& rep : limit_points(samples)) {
      nlohmann::json per = nlohmann::json::array();
      for (std::size_t j = 0; j < rep.per_element.size(); ++j) {
        nlohmann::json clusters = nlohmann::json::array();
        for (const auto& k : rep.per_element[j]) {
          clusters.push_back({{"center", k.center}, {"diameter", k.diameter}, {"size", k.size}});
        }
        per.push_back({{"clusters", clusters}, {"certified", static_cast<bool>(rep.certified[j])}});
      }
      limits.push_back({{"r", rep.r}, {"elements", per}});
    }
  }

  const auto decay = exactness_decay(s.maps, s.spec.indices, phi, h, radii);
  double worst_decay = std::numeric_limits<double>::infinity();
  for (const auto& row : decay) worst_decay = std::min(worst_decay, row.margin);
  const bool decay_ok = worst_decay >= -1e-9;

  double worst_margin = std::numeric_limits<double>::infinity();
  if (!effective.empty()) {
    const auto margins = positivity_check(s.maps, s.spec.indices, radii, h, effective);
    for (const auto& row : margins) worst_margin = std::min(worst_margin, row.margin);
    o.extra_csv.emplace_back("margins", margins_to_csv(margins));
  }
  const bool margins_ok = effective.empty() || worst_margin >= -tol;

  o.pass = self_exact && decay_ok && margins_ok;
  o.csv = decay_to_csv(decay);
  o.results = {{"sequence", c.seq},
               {"samples", sample_json},
               {"limit_points", limits},
               {"self_pairing_exact", self_exact},
               {"worst_decay_margin", worst_decay},
               {"worst_positivity_margin", effective.empty() ? nlohmann::json(nullptr) : nlohmann::json(worst_margin)},
               {"margin_tolerance", tol}};
  o.summary = "currents: decay margin " + fmt17(worst_decay) +
              (effective.empty() ? std::string() : ", positivity margin " + fmt17(worst_margin));
  return o;
}

Outcome dispatch(const RunConfig& c) {
  if (c.command == "jensen") return cmd_jensen(c);
  if (c.command == "fmt") return cmd_fmt(c);
  if (c.command == "mason") return cmd_mason(c);
  if (c.command == "rh") return cmd_rh(c);
  if (c.command == "logrh") return cmd_logrh(c);
  if (c.command == "taut") return cmd_taut(c);
  if (c.command == "bubble") return cmd_bubble(c);
  if (c.command == "gromov") return cmd_gromov(c);
  if (c.command == "currents") return cmd_currents(c);
  input_error("unknown command '" + c.command + "'");
}

int parse_int(const std::string& s) {
  std::size_t used = 0;
  int v = 0;
  try {
    v = std::stoi(s, &used);
  } catch (const std::exception&) {
    input_error("expected an integer, got '" + s + "'");
  }
  if (used != s.size()) input_error("expected an integer, got '" + s + "'");
  return v;
}

}  // namespace

// ---------------------------------------------------------------------------- config

void RunConfig::validate() const {
  if (std::find(std::begin(kCommands), std::end(kCommands), command) == std::end(kCommands))
    input_error("unknown command '" + command + "'");
  if (tol && !(*tol >= 1e-12)) input_error("--tol must be >= 1e-12");
  for (double r : r_grid) {
    if (!(r > 0.0 && r < 1.0)) input_error("radii must lie in (0, 1)");
  }
  if (mesh < 16) input_error("--mesh must be >= 16");
  if (count < 1) input_error("--count must be positive");
  if (degree && *degree < 0) input_error("--degree must be nonnegative");
}

nlohmann::json RunConfig::to_json() const {
  nlohmann::json j = {{"command", command}, {"map", map},       {"divisors", divisors}, {"bubbles", bubbles},
                      {"r_grid", r_grid},   {"mesh", mesh},     {"seq", seq},           {"exact", exact},
                      {"seed", seed},       {"a", a},           {"b", b},               {"bound", bound},
                      {"tail", tail},       {"count", count}};
  j["tol"] = tol ? nlohmann::json(*tol) : nlohmann::json(nullptr);
  j["degree"] = degree ? nlohmann::json(*degree) : nlohmann::json(nullptr);
  return j;
}

std::vector<double> parse_radii(const std::string& text) {
  std::vector<double> out;
  for (const auto& tok : split(text, ',')) {
    if (tok.empty()) continue;
    std::size_t used = 0;
    double v = 0.0;
    try {
      v = std::stod(tok, &used);
    } catch (const std::exception&) {
      input_error("bad radius '" + tok + "'");
    }
    if (used != tok.size()) input_error("bad radius '" + tok + "'");
    out.push_back(v);
  }
  return out;
}

std::optional<int> parse_command_line(int argc, const char* const* argv, RunConfig& out, std::ostream& msg) {
  CLI::App app{"Value-distribution identities and experiments on the unit disc"};
  std::string command, r_single, r_grid;
  double tol = std::numeric_limits<double>::quiet_NaN();
  int degree = -1;
  app.add_option("command", command, "jensen | fmt | mason | rh | logrh | taut | bubble | gromov | currents")
      ->required();
  app.add_option("--map", out.map, "components separated by |, each an ascending coefficient list");
  app.add_option("--divisor", out.divisors, "divisor `q; (e0,e1,...)=c, ...`; boundary list for logrh and taut")
      ->take_all();
  app.add_option("--bubble", out.bubbles, "bubble `attach ; map` (bubble command)")->take_all();
  app.add_option("--r", r_single, "single radius");
  app.add_option("--r-grid", r_grid, "comma-separated radii");
  app.add_option("--tol", tol, "tolerance (>= 1e-12)");
  app.add_option("--mesh", out.mesh, "graph mesh (gromov)");
  app.add_option("--seq", out.seq, "sequence generator, e.g. geom:[1:(2z)^n],n=1..50");
  app.add_option("--out-csv", out.out_csv, "CSV report path");
  app.add_option("--out-json", out.out_json, "JSON report path");
  app.add_flag("--exact", out.exact, "require exact coefficients");
  app.add_option("--seed", out.seed, "seed for randomized suites");
  app.add_flag("--no-timestamp", out.no_timestamp, "omit the timestamp from JSON");
  app.add_option("--a", out.a, "polynomial a (mason)");
  app.add_option("--b", out.b, "polynomial b (mason)");
  app.add_option("--degree", degree, "declared map degree, checked against the map");
  app.add_option("--bound", out.bound, "energy bound (gromov)");
  app.add_option("--tail", out.tail, "first index of the tail (taut sequences)");
  app.add_option("--count", out.count, "number of random trials (jensen)");
  app.set_config("--config", "", "key=value file mirroring the flags; flags override");
  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, msg, msg);
    return code == 0 ? kExitOk : kExitInputError;
  }
  out.command = command;
  if (!r_single.empty() && !r_grid.empty()) {
    msg << "error: give either --r or --r-grid\n";
    return kExitInputError;
  }
  try {
    out.r_grid = parse_radii(r_single.empty() ? r_grid : r_single);
  } catch (const Error& e) {
    msg << "error: " << e.what() << '\n';
    return kExitInputError;
  }
  if (!std::isnan(tol)) out.tol = tol;
  if (app.count("--degree") > 0 || degree != -1) out.degree = degree;
  return std::nullopt;
}

// ---------------------------------------------------------------------------- sequences

SequenceSpec parse_sequence(const std::string& text) {
  SequenceSpec s;
  const auto open = text.find('[');
  const auto close = text.find(']');
  if (open == std::string::npos || close == std::string::npos || close < open)
    input_error("sequence spec needs a bracketed map template");
  const std::string head = trim(text.substr(0, open));
  s.name = head.empty() ? "seq" : trim(head.substr(0, head.find(':')));
  s.map_template = trim(text.substr(open + 1, close - open - 1));
  std::string rest = trim(text.substr(close + 1));
  if (rest.empty() || rest[0] != ',') input_error("sequence spec needs `,n=...` after the template");
  rest = trim(rest.substr(1));
  if (rest.rfind("n=", 0) != 0) input_error("sequence spec needs `n=...`");
  rest = rest.substr(2);
  const auto dots = rest.find("..");
  if (dots != std::string::npos) {
    const int lo = parse_int(trim(rest.substr(0, dots)));
    const int hi = parse_int(trim(rest.substr(dots + 2)));
    if (lo > hi) input_error("empty index range");
    for (int n = lo; n <= hi; ++n) s.indices.push_back(n);
  } else {
    for (const auto& tok : split(rest, ',')) s.indices.push_back(parse_int(tok));
  }
  for (int n : s.indices) {
    if (n < 1) input_error("sequence indices must be positive");
  }
  if (s.indices.empty()) input_error("empty sequence");
  build_sequence(s);  // validates the template
  return s;
}

std::vector<RationalMap> build_sequence(const SequenceSpec& spec) {
  const auto colon = spec.map_template.find(':');
  if (colon == std::string::npos) input_error("map template must read [F0:F1]");
  const std::string f0 = trim(spec.map_template.substr(0, colon));
  std::string f1;
  for (char ch : spec.map_template.substr(colon + 1)) {
    if (!std::isspace(static_cast<unsigned char>(ch))) f1 += ch;
  }
  if (f0 != "1") input_error("map templates have first component 1");

  static const std::regex shifted_power(R"(^\(2z\)\^n\+(.+)$)");
  std::smatch m;
  std::optional<GaussRational> shift;
  enum class Kind { Linear, PlusInverse, OverN, Power, DoubledPower } kind;
  if (f1 == "nz") {
    kind = Kind::Linear;
  } else if (f1 == "z+1/n") {
    kind = Kind::PlusInverse;
  } else if (f1 == "z/n") {
    kind = Kind::OverN;
  } else if (f1 == "z^n") {
    kind = Kind::Power;
  } else if (f1 == "(2z)^n") {
    kind = Kind::DoubledPower;
  } else if (std::regex_match(f1, m, shifted_power)) {
    kind = Kind::DoubledPower;
    const auto parsed = parse_coefficient(m[1].str());
    if (!parsed.second) input_error("template constant must be exact");
    shift = parsed.second;
  } else {
    input_error("unsupported map template '" + spec.map_template + "'");
  }

  std::vector<RationalMap> maps;
  for (int n : spec.indices) {
    std::vector<GaussRational> c;
    switch (kind) {
      case Kind::Linear:
        c = {GaussRational(0), GaussRational(n)};
        break;
      case Kind::PlusInverse:
        c = {GaussRational(mpq_class(1, n)), GaussRational(1)};
        break;
      case Kind::OverN:
        c = {GaussRational(0), GaussRational(mpq_class(1, n))};
        break;
      case Kind::Power:
      case Kind::DoubledPower: {
        c.assign(static_cast<std::size_t>(n) + 1, GaussRational(0));
        mpz_class lead = 1;
        if (kind == Kind::DoubledPower) mpz_ui_pow_ui(lead.get_mpz_t(), 2, static_cast<unsigned long>(n));
        c.back() = GaussRational(mpq_class(lead));
        if (shift) c.front() = *shift;
        break;
      }
    }
    maps.emplace_back(std::vector<Poly>{Poly(ExactPoly({GaussRational(1)})), Poly(ExactPoly(std::move(c)))});
  }
  return maps;
}

// ---------------------------------------------------------------------------- run

int run(const RunConfig& config, std::ostream& out, std::ostream& log) {
  Outcome o;
  try {
    config.validate();
    o = dispatch(config);
  } catch (const Error& e) {
    log << "error: " << e.what() << '\n';
    return kExitInputError;
  } catch (const std::exception& e) {
    log << "error: " << e.what() << '\n';
    return kExitInputError;
  }

  nlohmann::json report;
  report["command"] = config.command;
  report["config"] = config.to_json();
  report["convention"] = kDdcConvention;
  report["results"] = o.results;
  report["verdict"] = {{"status", o.pass ? "PASS" : "FAIL"}, {"summary", o.summary}};
  report["seed"] = config.seed;
  if (!config.no_timestamp) report["timestamp"] = utc_timestamp();

  try {
    if (!config.out_csv.empty()) {
      write_file(config.out_csv, o.csv);
      for (const auto& [tag, content] : o.extra_csv) write_file(sibling_path(config.out_csv, tag), content);
    }
    if (!config.out_json.empty()) {
      write_file(config.out_json, report.dump(2) + "\n");
    } else {
      out << report.dump(2) << '\n';
    }
  } catch (const Error& e) {
    log << "error: " << e.what() << '\n';
    return kExitInputError;
  }
  log << o.summary << '\n' << (o.pass ? "PASS" : "FAIL") << '\n';
  return o.pass ? kExitOk : kExitIdentityViolation;
}

}  // namespace vdlab::cli
