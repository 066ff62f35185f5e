#include "orbicount/cli.hpp"

#include <chrono>
#include <cmath>
#include <cstdlib>
#include <functional>
#include <sstream>

#include "CLI11.hpp"
#include "orbicount/cache.hpp"
#include "orbicount/constants.hpp"
#include "orbicount/enumerate.hpp"
#include "orbicount/errors.hpp"
#include "orbicount/expsums.hpp"
#include "orbicount/gcd_sieve.hpp"
#include "orbicount/int128.hpp"
#include "orbicount/singular_integral.hpp"
#include "orbicount/singular_series.hpp"

namespace orbicount {

namespace {

using nlohmann::json;

const std::vector<std::string> kCommands{
    "count-m", "count-mat", "count-n",  "count-orbifold", "count-quadric", "sigma",
    "series",  "integral",  "mu",       "couples",        "identity-check", "constant",
    "predict", "compare",   "fourth-moment", "arc-scan",  "residues"};

std::string str(Count c) { return to_string(c); }

json vec(const std::vector<std::int64_t>& v) { return json(v); }

int need_n(const RunConfig& c) {
  if (!c.n) throw ValidationError("--n is required");
  return *c.n;
}

double B_real(const RunConfig& c) {
  if (!c.B) throw ValidationError("--B is required");
  std::size_t pos = 0;
  double v = 0;
  try {
    v = std::stod(*c.B, &pos);
  } catch (const std::exception&) {
    throw ValidationError("--B is not a number");
  }
  if (pos != c.B->size() || !std::isfinite(v)) throw ValidationError("--B is not a number");
  return v;
}

std::int64_t B_int(const RunConfig& c) {
  const double v = B_real(c);
  if (v != std::floor(v) || std::abs(v) > 4e18) throw ValidationError("--B must be an integer here");
  // Integers beyond 2^53 must be written out; stod would round them.
  if (std::abs(v) > 9e15) return std::stoll(*c.B);
  return static_cast<std::int64_t>(v);
}

ExecPolicy policy(const RunConfig& c) {
  ExecPolicy p;
  p.workers = c.workers;
  if (c.budget) p.budget = *c.budget;
  return p;
}

DiagonalInstance instance(const RunConfig& c) {
  if (c.a.empty()) throw ValidationError("--a is required");
  DiagonalInstance inst{static_cast<int>(c.a.size()) - 1, c.a, c.t};
  if (c.n && *c.n != inst.n) throw ValidationError("--n does not match the length of --a");
  inst.validate();
  return inst;
}

std::vector<std::int64_t> y_or_ones(const RunConfig& c, std::size_t m) {
  if (c.y.empty()) return std::vector<std::int64_t>(m, 1);
  if (c.y.size() != m) throw ValidationError("--y and --a must have equal length");
  return c.y;
}

std::vector<int> signs(const std::vector<std::int64_t>& a) {
  std::vector<int> s;
  for (auto v : a) {
    if (v == 0) throw ValidationError("sign vector entries must be nonzero");
    s.push_back(v > 0 ? 1 : -1);
  }
  return s;
}

ConstantParams constant_params(const RunConfig& c) {
  ConstantParams p;
  p.y_max = c.ymax;
  p.q_max = c.qmax;
  p.e_bound = c.ebound;
  p.p_max = c.pmax;
  p.workers = c.workers;
  if (c.budget) p.budget = *c.budget;
  if (c.method == "euler") {
    p.method = SeriesMethod::Euler;
  } else if (c.method == "truncated") {
    p.method = SeriesMethod::Truncated;
  } else {
    throw ValidationError("--method must be euler or truncated");
  }
  if (c.flavour == "coprime") {
    p.flavour = DFlavour::Coprime;
  } else if (c.flavour == "literal") {
    p.flavour = DFlavour::Literal;
  } else {
    throw ValidationError("--flavour must be coprime or literal");
  }
  return p;
}

std::string cache_dir(const RunConfig& c) {
  if (!c.cache_dir.empty()) return c.cache_dir;
  if (const char* env = std::getenv("ORBICOUNT_CACHE_DIR"); env && *env) return env;
  return ".orbicount-cache";
}

json constant_json(const ConstantEstimate& e) {
  return json{{"kind", e.kind},
              {"n", e.n},
              {"a", e.a},
              {"t", e.t},
              {"value", e.value},
              {"y_tail", e.y_tail},
              {"series_tail", e.series_tail},
              {"terms", e.terms},
              {"wall_time", e.wall_time},
              {"note", e.note}};
}

// Constant from cache or computed and stored. `kind` is C_at, D, C or C_Q.
json constant_record(const RunConfig& c, const std::string& kind, bool& hit) {
  const auto p = constant_params(c);
  json key{{"kind", kind},       {"y_max", p.y_max},     {"e_bound", p.e_bound},
           {"p_max", p.p_max},   {"method", c.method},   {"flavour", c.flavour}};
  if (p.method == SeriesMethod::Truncated) key["q_max"] = p.q_max;
  std::function<ConstantEstimate()> compute;
  if (kind == "C_at") {
    const auto inst = instance(c);
    key["n"] = inst.n;
    key["a"] = inst.a;
    key["t"] = inst.t;
    compute = [=] { return constant_C_at(inst, p); };
  } else if (kind == "D" || kind == "C") {
    const int n = need_n(c);
    key["n"] = n;
    compute = [=] { return kind == "D" ? constant_D(n, p) : constant_orbifold_C(n, p); };
  } else if (kind == "C_Q") {
    if (c.y.empty()) throw ValidationError("--y is required");
    key["n"] = static_cast<int>(c.y.size()) - 1;
    key["y"] = c.y;
    compute = [=] { return constant_quadric(c.y, p); };
  } else {
    throw ValidationError("--kind must be C_at, D, C or C_Q");
  }
  ConstantCache cache(cache_dir(c));
  if (auto v = cache.lookup(key)) {
    hit = true;
    return *v;
  }
  hit = false;
  return cache.store(key, constant_json(compute()));
}

json dispatch(const RunConfig& c, json& inputs) {
  const auto& cmd = c.command;
  json out;
  if (cmd == "count-m" || cmd == "count-orbifold") {
    const int n = need_n(c);
    const auto B = B_int(c);
    inputs = {{"n", n}, {"B", std::to_string(B)}};
    const auto r = cmd == "count-m" ? count_M(n, B, policy(c)) : count_orbifold(n, B, policy(c));
    out["count"] = str(r.count);
  } else if (cmd == "count-mat") {
    const auto inst = instance(c);
    const auto B = B_int(c);
    inputs = {{"n", inst.n}, {"a", vec(inst.a)}, {"t", inst.t}, {"B", std::to_string(B)}};
    out["count"] = str(count_M_at(inst, HeightBound{B, 1}, policy(c)).count);
  } else if (cmd == "count-n") {
    const auto B = B_int(c);
    inputs = {{"e", vec(c.e)}, {"f", vec(c.f)}, {"B", std::to_string(B)}};
    out["count"] = str(count_N(c.e, c.f, B, policy(c)).count);
  } else if (cmd == "count-quadric") {
    const auto B = B_int(c);
    inputs = {{"y", vec(c.y)}, {"B", std::to_string(B)}};
    out["count"] = str(count_quadric_points(c.y, B, policy(c)).count);
  } else if (cmd == "sigma") {
    const auto inst = instance(c);
    const auto y = y_or_ones(c, inst.a.size());
    RationalAngle ang;
    if (std::sscanf(c.angle.c_str(), "%ld/%ld", &ang.a, &ang.q) != 2) {
      throw ValidationError("--angle must be r/q");
    }
    ang.validate();
    inputs = {{"a", vec(inst.a)}, {"y", vec(y)}, {"t", inst.t}, {"angle", c.angle}};
    const auto s = sigma_fraction(y, inst, ang);
    out = {{"re", s.real()}, {"im", s.imag()}};
  } else if (cmd == "series") {
    const auto inst = instance(c);
    const auto y = y_or_ones(c, inst.a.size());
    inputs = {{"a", vec(inst.a)}, {"y", vec(y)}, {"t", inst.t}, {"qmax", c.qmax}, {"pmax", c.pmax}};
    const auto tr = series_truncated(y, inst, c.qmax, c.workers);
    LevelPolicy lp;
    lp.include_bad_primes = true;
    const auto eu = series_euler(y, inst, c.pmax, lp);
    out = {{"truncated", tr.value}, {"truncated_tail", tr.tail_bound},
           {"euler", eu.value},     {"euler_tail", eu.tail_bound}};
  } else if (cmd == "integral") {
    const auto eps = signs(c.a);
    inputs = {{"eps", eps}};
    QuadratureOptions opt;
    opt.workers = c.workers;
    const auto J = singular_integral(eps, opt);
    out = {{"value", J.value},
           {"quadrature_error", J.quadrature_error},
           {"tail_bound", J.tail_bound},
           {"gamma_max", J.gamma_max},
           {"short_circuit", J.short_circuit}};
    if (c.B) {
      const double B = B_real(c);
      inputs["t"] = c.t;
      inputs["B"] = B;
      const auto Jt = singular_integral_tB(eps, c.t, B, opt);
      out["truncated_value"] = Jt.value;
      out["truncated_tail_bound"] = Jt.tail_bound;
    }
    if (c.delta) {
      inputs["delta"] = *c.delta;
      const int grid = c.grid > 0 ? static_cast<int>(c.grid) : 60;
      const auto O = shell_density_oracle(eps, *c.delta, grid, c.workers, c.budget.value_or(2e9));
      out["oracle"] = O.value;
      out["oracle_error"] = O.error_estimate;
    }
  } else if (cmd == "mu") {
    inputs = {{"e", vec(c.e)}, {"f", vec(c.f)}};
    out["mu"] = mu_couple(c.e, c.f);
  } else if (cmd == "couples") {
    const int n = need_n(c);
    const auto B = B_int(c);
    inputs = {{"n", n}, {"B", std::to_string(B)}};
    const auto cs = enumerate_couples(n, B, c.budget.value_or(2e7));
    out["couples"] = cs.size();
    long sum = 0;
    for (const auto& x : cs) sum += x.mu;
    out["mu_sum"] = sum;
    if (cs.size() <= 200) {
      json list = json::array();
      for (const auto& x : cs) list.push_back({{"e", x.e}, {"f", x.f}, {"mu", x.mu}, {"gcd", x.e_gcd}});
      out["list"] = list;
    }
  } else if (cmd == "identity-check") {
    const int n = need_n(c);
    const auto B = B_int(c);
    inputs = {{"n", n}, {"B", std::to_string(B)}};
    const auto direct = count_M(n, B, policy(c)).count;
    const auto sieve = inclusion_exclusion_count(n, B, policy(c));
    out = {{"direct", str(direct)}, {"sieve", str(sieve.count)}, {"couples", sieve.couples},
           {"equal", direct == sieve.count}};
  } else if (cmd == "constant") {
    inputs = {{"kind", c.kind}, {"ymax", c.ymax}, {"ebound", c.ebound}, {"pmax", c.pmax},
              {"method", c.method}, {"flavour", c.flavour}};
    if (c.n) inputs["n"] = *c.n;
    if (!c.a.empty()) inputs["a"] = vec(c.a), inputs["t"] = c.t;
    if (!c.y.empty()) inputs["y"] = vec(c.y);
    bool hit = false;
    out = constant_record(c, c.kind, hit);
    out["cache_hit"] = hit;
  } else if (cmd == "predict") {
    const double B = B_real(c);
    if (!(B >= 1.0)) throw ValidationError("B must be >= 1");
    inputs = {{"kind", c.kind}, {"B", B}, {"ymax", c.ymax}, {"ebound", c.ebound}};
    bool hit = false;
    const auto rec = constant_record(c, c.kind, hit);
    ConstantEstimate ce;
    ce.value = rec["value"].get<double>();
    const int n = rec["n"].get<int>();
    inputs["n"] = n;
    out = {{"constant", ce.value}, {"value", predict(n, B, ce)}, {"cache_hit", hit}};
  } else if (cmd == "compare") {
    const int n = need_n(c);
    const auto B = B_int(c);
    inputs = {{"n", n}, {"B", std::to_string(B)}, {"ymax", c.ymax}, {"ebound", c.ebound}};
    RunConfig cc = c;
    bool hit = false;
    const double D = constant_record(cc, "D", hit)["value"].get<double>();
    const double C = D / std::ldexp(1.0, n + 2);
    const auto M = count_M(n, B, policy(c)).count;
    const auto O = count_orbifold(n, B, policy(c)).count;
    const double scale = std::pow(static_cast<double>(B), (n - 1) / 2.0);
    out = {{"count_m", str(M)},
           {"D", D},
           {"ratio_m", static_cast<double>(M) / (D * scale)},
           {"count_orbifold", str(O)},
           {"C", C},
           {"ratio_orbifold", static_cast<double>(O) / (C * scale)}};
  } else if (cmd == "fourth-moment") {
    const std::int64_t a = c.a.empty() ? 1 : c.a.front();
    const auto B = B_int(c);
    inputs = {{"a", a}, {"B", std::to_string(B)}};
    out["count"] = str(fourth_moment(a, B, policy(c)));
    if (c.grid > 0) {
      inputs["grid"] = c.grid;
      out["grid_integral"] = riemann_fourth(a, B, c.grid, c.workers);
    }
  } else if (cmd == "arc-scan") {
    const std::int64_t a = c.a.empty() ? 1 : c.a.front();
    const auto B = B_int(c);
    auto arcs = default_arcs(static_cast<double>(B));
    if (c.P) arcs.P = *c.P;
    if (c.delta) arcs.Delta = *c.delta;
    inputs = {{"a", a}, {"B", std::to_string(B)}, {"P", arcs.P}, {"Delta", arcs.Delta},
              {"samples", c.samples}, {"seed", std::to_string(c.seed)}};
    const auto s = minor_sup_scan(a, B, arcs, c.samples, c.seed, c.workers);
    out = {{"value", s.value}, {"at_alpha", s.at_alpha}, {"rejected", s.rejected}};
  } else if (cmd == "residues") {
    const int n = need_n(c);
    const auto B = B_int(c);
    inputs = {{"n", n}, {"B", std::to_string(B)}, {"modulus", c.modulus}, {"coord", c.coord}};
    const auto r = residue_distribution(n, B, c.modulus, c.coord, policy(c));
    if (r.total == 0) throw ValidationError("no points: distribution undefined");
    json counts = json::array(), freq = json::array();
    for (auto v : r.counts) {
      counts.push_back(str(v));
      Count g = v, h = r.total;
      while (h != 0) {
        const Count t = g % h;
        g = h;
        h = t;
      }
      if (g == 0) g = 1;
      freq.push_back(str(v / g) + "/" + str(r.total / g));
    }
    out = {{"total", str(r.total)}, {"counts", counts}, {"frequencies", freq}};
  } else {
    throw ValidationError("unknown command: " + cmd);
  }
  return out;
}

void flatten(const json& j, const std::string& prefix, std::vector<std::pair<std::string, std::string>>& cells) {
  if (j.is_object()) {
    for (auto it = j.begin(); it != j.end(); ++it) {
      flatten(it.value(), prefix.empty() ? it.key() : prefix + "." + it.key(), cells);
    }
    return;
  }
  std::string v;
  if (j.is_string()) {
    v = j.get<std::string>();
  } else if (j.is_array()) {
    for (std::size_t i = 0; i < j.size(); ++i) {
      if (i) v += ';';
      v += j[i].is_string() ? j[i].get<std::string>() : j[i].dump();
    }
  } else {
    v = j.dump();
  }
  cells.emplace_back(prefix, v);
}

std::string csv_cell(const std::string& s) {
  if (s.find_first_of(",\"\n") == std::string::npos) return s;
  std::string q = "\"";
  for (char ch : s) q += ch == '"' ? std::string("\"\"") : std::string(1, ch);
  return q + "\"";
}

}  // namespace

json execute(const RunConfig& config) {
  if (config.workers < 1) throw ValidationError("--workers must be >= 1");
  if (config.format != "json" && config.format != "csv") throw ValidationError("--format must be json or csv");
  const auto t0 = std::chrono::steady_clock::now();
  json inputs = json::object();
  json outputs = dispatch(config, inputs);
  inputs["workers"] = config.workers;
  return json{{"schema", kSchemaVersion},
              {"command", config.command},
              {"inputs", inputs},
              {"outputs", outputs},
              {"wall_time", std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count()},
              {"version", kToolVersion}};
}

std::string to_csv(const json& record) {
  std::vector<std::pair<std::string, std::string>> cells;
  flatten(record, "", cells);
  std::string head, row;
  for (std::size_t i = 0; i < cells.size(); ++i) {
    if (i) head += ',', row += ',';
    head += csv_cell(cells[i].first);
    row += csv_cell(cells[i].second);
  }
  return head + "\n" + row + "\n";
}

int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  RunConfig c;
  CLI::App app{"Counting and asymptotics for squareful points on a hyperplane"};
  app.require_subcommand(1, 1);
  app.fallthrough();
  app.add_option("--n", c.n, "n (n + 1 variables)");
  app.add_option("--B", c.B, "height bound");
  app.add_option("--a", c.a, "coefficients / sign vector, comma separated")->delimiter(',');
  app.add_option("--t", c.t, "right-hand side");
  app.add_option("--y", c.y, "squarefree vector y")->delimiter(',');
  app.add_option("--e", c.e, "couple e")->delimiter(',');
  app.add_option("--f", c.f, "couple f")->delimiter(',');
  app.add_option("--ymax", c.ymax, "y truncation for constants");
  app.add_option("--qmax", c.qmax, "q truncation for the singular series");
  app.add_option("--ebound", c.ebound, "gcd(e_i f_i) cut for D");
  app.add_option("--pmax", c.pmax, "Euler product prime bound");
  app.add_option("--delta", c.delta, "shell width (integral) or arc exponent (arc-scan)");
  app.add_option("--P", c.P, "arc parameter P");
  app.add_option("--workers", c.workers, "worker threads");
  app.add_option("--seed", c.seed, "random seed");
  app.add_option("--format", c.format, "json or csv");
  app.add_option("--cache-dir", c.cache_dir, "constant cache directory");
  app.add_option("--budget", c.budget, "work ceiling");
  app.add_option("--kind", c.kind, "constant kind: C_at, D, C, C_Q");
  app.add_option("--flavour", c.flavour, "D flavour: coprime or literal");
  app.add_option("--method", c.method, "singular series: euler or truncated");
  app.add_option("--angle", c.angle, "r/q for sigma");
  app.add_option("--modulus", c.modulus, "residue modulus");
  app.add_option("--coord", c.coord, "coordinate for residues");
  app.add_option("--samples", c.samples, "minor-arc samples");
  app.add_option("--grid", c.grid, "grid size for quadrature checks");
  for (const auto& name : kCommands) app.add_subcommand(name, name);

  auto fail = [&](const std::string& kind, const std::string& msg, int code) {
    json e{{"schema", kSchemaVersion}, {"command", c.command}, {"error", {{"kind", kind}, {"message", msg}}}};
    out << e.dump() << '\n';
    err << "error: " << msg << '\n';
    return code;
  };
  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    out << app.help();
    return 0;
  } catch (const CLI::ParseError& e) {
    return fail("validation", e.what(), 2);
  }
  c.command = app.get_subcommands().front()->get_name();
  try {
    const auto rec = execute(c);
    out << (c.format == "csv" ? to_csv(rec) : rec.dump() + "\n");
    return 0;
  } catch (const ValidationError& e) {
    return fail("validation", e.what(), 2);
  } catch (const BudgetExceeded& e) {
    std::ostringstream m;
    m << e.what() << " (estimate " << e.estimate() << ", budget " << e.budget() << ")";
    return fail("budget", m.str(), 3);
  } catch (const InconsistencyError& e) {
    return fail("inconsistency", e.what(), 4);
  } catch (const std::exception& e) {
    return fail("internal", e.what(), 4);
  }
}

}  // namespace orbicount
