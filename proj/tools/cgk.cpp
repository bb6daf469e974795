// cgk: batch front end. Every run writes a data artifact (JSON or CSV) and a
// run manifest. Exit codes: 0 ok, 1 acceptance failure, 2 usage or invalid
// input, 3 budget exhausted.

#include <CLI11.hpp>

#include <chrono>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <map>
#include <set>
#include <sstream>

#include "cgk/acceptance.hpp"
#include "cgk/errors.hpp"

using namespace cgk;

namespace {

constexpr int kExitOk = 0, kExitFail = 1, kExitUsage = 2, kExitBudget = 3;

const char* kCountColumns = "T,N,bound,ratio";
const char* kSphericalColumns = "t,phi,ratio";

// Everything a subcommand produces besides its exit code.
struct Outcome {
  std::string data;  // artifact text, LF line endings
  Json parameters = Json::object();
  Json branches = Json::object();
  Json derived = Json::object();  // small summaries that are not part of data
  int exit_code = kExitOk;
};

struct Settings {
  std::string out;
  unsigned shards = 1;
  std::string replay;

  std::string kind = "SO";
  int n = 2;
  std::string alpha;
  std::string epsilon = "0";

  std::string family = "SL";
  Int p = 0;
  int r = 1;
  Int q = 0;
  bool allow_bad = true;

  Int rmax = kDefaultMaxRadius;
  int grid = 30;

  int k = 1;
  std::string matrix;
  bool group_count = false;

  std::string input;
  std::optional<std::uint64_t> orbit_budget;

  std::string s;
  double tmax = 25;
  double step = 0.05;
  bool imaginary = false;
};

std::string read_text(const std::string& path) {
  std::istream* in = &std::cin;
  std::ifstream file;
  if (path != "-") {
    file.open(path, std::ios::binary);
    if (!file) throw DomainError("cannot read " + path);
    in = &file;
  }
  std::ostringstream os;
  os << in->rdbuf();
  return os.str();
}

Json parse_json(const std::string& text, const std::string& what) {
  try {
    return Json::parse(text);
  } catch (const nlohmann::json::exception& e) {
    throw DomainError("bad JSON in " + what + ": " + e.what());
  }
}

GroupFamily family_from_flags(const std::string& family, int n) {
  if (!family.empty() && family.front() == '{') return family_from_json(parse_json(family, "--family"));
  Json j{{"kind", family}, {"n", n}};
  return family_from_json(j);
}

IntMatrix int_matrix(const Json& rows) {
  if (!rows.is_array() || rows.empty() || !rows[0].is_array()) throw DomainError("matrix must be an array of rows");
  IntMatrix m(static_cast<Index>(rows.size()), static_cast<Index>(rows[0].size()));
  for (std::size_t i = 0; i < rows.size(); ++i) {
    if (rows[i].size() != rows[0].size()) throw DomainError("ragged matrix");
    for (std::size_t j = 0; j < rows[i].size(); ++j) m(static_cast<Index>(i), static_cast<Index>(j)) = rows[i][j].get<Int>();
  }
  return m;
}

// Collects every "branch" value below j.
void collect_branches(const Json& j, std::set<std::string>& out) {
  if (j.is_object()) {
    for (auto it = j.begin(); it != j.end(); ++it) {
      if (it.key() == "branch" && it->is_string()) out.insert(it->get<std::string>());
      collect_branches(*it, out);
    }
  } else if (j.is_array()) {
    for (const auto& x : j) collect_branches(x, out);
  }
}

Json branch_list(const Json& j) {
  std::set<std::string> s;
  collect_branches(j, s);
  return Json(std::vector<std::string>(s.begin(), s.end()));
}

std::string num(double x) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  return buf;
}

Rational rational_flag(const std::string& text, const char* name) {
  try {
    return parse_rational(text);
  } catch (const std::exception&) {
    throw DomainError(std::string("bad rational for ") + name + ": " + text);
  }
}

double real_flag(const std::string& text, const char* name) {
  // Accepts decimals and p/q.
  if (text.find('/') != std::string::npos) return to_double(rational_flag(text, name));
  try {
    std::size_t used = 0;
    const double v = std::stod(text, &used);
    if (used != text.size()) throw DomainError("");
    return v;
  } catch (const std::exception&) {
    throw DomainError(std::string("bad number for ") + name + ": " + text);
  }
}

Outcome run_gap(const Settings& st) {
  Outcome o;
  const FamilyKind kind = parse_family_kind(st.kind);
  const QuotedAlpha quoted = quoted_alpha(kind, st.n);
  const Rational alpha = st.alpha.empty() ? quoted.alpha : rational_flag(st.alpha, "--alpha");
  const Rational epsilon = rational_flag(st.epsilon, "--epsilon");
  Json j = to_json(gap_report(kind, st.n, alpha, epsilon));
  j["alpha_source"] = st.alpha.empty() ? quoted.source : "user";
  o.parameters = {{"kind", to_string(kind)}, {"n", st.n}, {"alpha", to_string(alpha)}, {"epsilon", to_string(epsilon)}};
  o.branches["spectral"] = branch_list(j);
  o.data = dump(j);
  return o;
}

Outcome run_count(const Settings& st, BudgetMeter& meter) {
  Outcome o;
  if (st.q < 1) throw DomainError("--q must be >= 1");
  if (st.rmax < 2) throw DomainError("--rmax must be >= 2");
  if (st.grid < 6) throw DomainError("--grid needs at least 6 points for the tail fit");
  const Rational alpha = st.alpha.empty() ? Rational(25, 64) : rational_flag(st.alpha, "--alpha");
  const Rational rho(1, 2);
  const auto grid = distance_grid(st.rmax, st.grid);
  const auto res = count({LatticeSpec{st.q}}, st.rmax, grid, alpha, meter, st.shards);
  const CountResult& c = res.front();
  std::string csv = std::string(kCountColumns) + "\n";
  for (std::size_t i = 0; i < c.t.size(); ++i) {
    const double bound = bound_curve(c.t[i], static_cast<double>(c.index), alpha, rho);
    csv += num(c.t[i]) + "," + std::to_string(c.n[i]) + "," + num(bound) + "," + num(static_cast<double>(c.n[i]) / bound) + "\n";
  }
  o.parameters = {{"q", st.q}, {"rmax", st.rmax}, {"grid", st.grid}, {"alpha", to_string(alpha)}, {"shards", st.shards}};
  o.branches["hypcount"] = {{"T", "exact"}, {"N", "enumerated"}, {"bound", "analytic"}, {"ratio", "enumerated"}};
  // The tail fit needs six points in the top third of the grid.
  const Json fit = c.fit.points == 0 ? Json(nullptr)
                                     : Json{{"slope", c.fit.slope}, {"intercept", c.fit.intercept},
                                            {"points", c.fit.points}, {"branch", "fitted"}};
  o.derived = {{"index", c.index}, {"fit", fit}};
  o.data = csv;
  return o;
}

Outcome run_centralizer(const Settings& st, BudgetMeter& meter) {
  Outcome o;
  if (st.matrix.empty()) throw DomainError("--matrix is required");
  const GroupFamily family = family_from_flags(st.family, st.n);
  const GroupContext ctx(family, st.p, st.k, st.allow_bad);
  const LieAlgebra alg(ctx);
  const Json mj = parse_json(st.matrix, "--matrix");
  RingMatrix x = mj.is_object() ? RingMatrix(ctx.ring(), int_matrix(mj.at("re")),
                                             mj.contains("im") ? int_matrix(mj.at("im")) : IntMatrix())
                                : RingMatrix(ctx.ring(), int_matrix(mj));
  if (x.rows() != family.size() || x.cols() != family.size())
    throw DomainError("matrix must be " + std::to_string(family.size()) + "x" + std::to_string(family.size()));
  if (!alg.contains(x)) throw DomainError("matrix is not in the Lie algebra of " + ctx.describe());
  const CentralizerReport rep = centralizer_report(alg, x, st.group_count, meter);
  Json j = to_json(rep);
  j["group"] = ctx.describe();
  j["family"] = to_json(family);
  j["p"] = st.p;
  j["k"] = st.k;
  j["matrix"] = to_json(x);
  j["bad_prime"] = ctx.bad_prime();
  o.parameters = {{"family", to_json(family)}, {"p", st.p}, {"k", st.k}, {"matrix", mj}, {"group_count", st.group_count},
                  {"allow_bad", st.allow_bad}};
  o.branches["liealg"] = branch_list(j);
  o.data = dump(j);
  return o;
}

Outcome run_repbound(const Settings& st, BudgetMeter& meter) {
  Outcome o;
  if (st.input.empty()) throw DomainError("--input is required (file, '-' for stdin, or inline JSON)");
  const std::string text = st.input.front() == '{' ? st.input : read_text(st.input);
  const Json in = parse_json(text, "--input");
  if (!in.contains("family")) throw DomainError("input needs a family descriptor");
  const GroupFamily family = family_from_json(in.at("family"));
  Json j;
  if (in.contains("q")) {
    const CongruenceLevel level = CongruenceLevel::of(in.at("q").get<Int>());
    j = {{"mode", "level"}, {"family", to_json(family)}, {"q", level.q}};
    j["new_rep_dim_lower"] = to_json(new_rep_dim_lower(family, level, meter, st.orbit_budget));
    const Rational eps = in.contains("epsilon") ? rational_flag(in["epsilon"].get<std::string>(), "epsilon") : Rational(1, 100);
    j["multiplicity_lower"] = to_json(multiplicity_lower(family, level, eps, meter));
    j["multiplicity_lower"]["epsilon"] = to_json(eps);
  } else {
    const Int p = in.at("p").get<Int>();
    const int r = in.at("r").get<int>();
    const bool allow = in.value("allow_bad", st.allow_bad);
    const OrbitResult orb = min_new_orbit(family, p, r, meter, st.orbit_budget, allow);
    j = {{"mode", "prime_power"}, {"family", to_json(family)}, {"orbit", to_json(orb)}};
  }
  o.parameters = {{"input", in}};
  if (st.orbit_budget) o.parameters["orbit_budget"] = *st.orbit_budget;
  o.branches["repbound"] = branch_list(j);
  o.data = dump(j);
  return o;
}

Outcome run_order(const Settings& st, BudgetMeter& meter) {
  Outcome o;
  const GroupFamily family = family_from_flags(st.family, st.n);
  if ((st.q > 0) == (st.p > 0)) throw DomainError("give exactly one of --q or --p/--r");
  const CongruenceLevel level = CongruenceLevel::of(st.q > 0 ? st.q : [&] {
    Int q = 1;
    for (int i = 0; i < st.r; ++i) q *= st.p;
    return q;
  }());
  if (st.p > 0 && (level.factors.size() != 1 || level.factors[0].first != st.p))
    throw DomainError("--p must be prime");
  Json bad = Json::array();
  for (const auto& [p, e] : level.factors)
    if (is_bad_prime(family, p)) bad.push_back(p);
  if (!st.allow_bad && !bad.empty()) throw BadPrime("level contains bad primes; pass --allow-bad");
  const std::uint64_t v = index_V(family, level, meter, true);
  Json factors = Json::array();
  bool enumerated = true;
  for (const auto& [p, e] : level.factors) {
    enumerated = enumerated && e == 1;
    const GroupContext ctx(family, p, e, true);
    factors.push_back({{"p", p}, {"r", e}, {"order", order(ctx, meter)}, {"branch", e == 1 ? "enumerated" : "analytic"}});
  }
  Json j{{"family", to_json(family)}, {"q", level.q}, {"order", v}, {"factors", factors}, {"bad_primes_in_level", bad},
         {"branch", enumerated ? "enumerated" : "analytic"}};
  o.parameters = {{"family", to_json(family)}, {"q", level.q}, {"allow_bad", st.allow_bad}};
  o.branches["groupscheme"] = branch_list(j);
  o.data = dump(j);
  return o;
}

Outcome run_spherical(const Settings& st) {
  Outcome o;
  if (st.s.empty()) throw DomainError("--s is required");
  if (st.step <= 0) throw DomainError("--step must be positive");
  if (st.tmax < 0) throw DomainError("--tmax must be nonnegative");
  const double s = real_flag(st.s, "--s");
  const double rho = (st.n - 1) / 2.0;
  std::vector<double> ts;
  const auto steps = static_cast<long>(st.tmax / st.step + 1e-9);
  for (long i = 0; i <= steps; ++i) ts.push_back(static_cast<double>(i) * st.step);
  const auto phi = spherical_profile(st.n, s, st.imaginary, ts);
  std::string csv = std::string(kSphericalColumns) + "\n";
  for (std::size_t i = 0; i < ts.size(); ++i) {
    const double t = ts[i];
    const double ratio = st.imaginary ? std::abs(phi[i]) * std::exp(rho * t) / (1.0 + t) : phi[i] * std::exp((rho - s) * t);
    csv += num(t) + "," + num(phi[i]) + "," + num(ratio) + "\n";
  }
  o.parameters = {{"n", st.n}, {"s", st.s}, {"imaginary", st.imaginary}, {"tmax", st.tmax}, {"step", st.step}};
  o.branches["spectral"] = {{"t", "exact"}, {"phi", "numerical"}, {"ratio", "numerical"}};
  o.data = csv;
  return o;
}

const std::map<int, std::string> kCriterionModule = {{1, "repbound"}, {2, "groupscheme"}, {3, "liealg"},
                                                     {4, "liealg"},   {5, "repbound"},    {6, "hypcount"},
                                                     {7, "spectral"}, {8, "spectral"},    {9, "cli"}};

Outcome run_verify_all(const Settings& st, std::vector<CriterionResult>& done, bool to_stdout) {
  Outcome o;
  AcceptanceOptions opt;
  opt.shards = st.shards;
  std::FILE* log = to_stdout ? stderr : stdout;
  // done fills as criteria finish, so a budget abort still leaves the completed ones.
  run_acceptance(opt, [&](const CriterionResult& r) {
    std::fprintf(log, "%s\n", format_line(r).c_str());
    std::fflush(log);
    done.push_back(r);
  });
  const Json j = acceptance_artifact(done);
  o.parameters = {{"shards", st.shards}};
  std::map<std::string, std::set<std::string>> by_module;
  for (const auto& r : done) collect_branches(r.data, by_module[kCriterionModule.at(r.id)]);
  for (const auto& [m, labels] : by_module) o.branches[m] = std::vector<std::string>(labels.begin(), labels.end());
  Json timing = Json::object();
  for (const auto& r : done) timing[std::to_string(r.id)] = r.seconds;
  o.derived["criterion_seconds"] = timing;
  o.exit_code = j["passed"].get<bool>() ? kExitOk : kExitFail;
  o.data = dump(j);
  return o;
}

// argv minus --out, so a replay writes wherever its own --out points.
std::vector<std::string> without_out(const std::vector<std::string>& args) {
  std::vector<std::string> out;
  for (std::size_t i = 0; i < args.size(); ++i) {
    if (args[i] == "--out") {
      ++i;
      continue;
    }
    if (args[i].rfind("--out=", 0) == 0) continue;
    out.push_back(args[i]);
  }
  return out;
}

void write_file(const std::string& path, const std::string& text) {
  std::ofstream f(path, std::ios::binary);
  if (!f) throw DomainError("cannot write " + path);
  f << text;
}

}  // namespace

int run(const std::vector<std::string>& args);

int main(int argc, char** argv) {
  std::vector<std::string> args;
  for (int i = 1; i < argc; ++i) args.emplace_back(argv[i]);
  return run(args);
}

int run(const std::vector<std::string>& args) {
  CLI::App app{"cgk: finite groups of Lie type, orbit bounds, lattice counting and spherical functions.\n"
               "Exit codes: 0 ok, 1 acceptance failure, 2 usage, 3 budget (CGK_BUDGET overrides the enumeration budget)."};
  app.set_help_all_flag("--help-all", "Help for every subcommand");
  Settings st;
  app.add_option("--out", st.out, "Data file (default stdout); the manifest goes to <out>.manifest.json, else stderr");
  app.add_option("--shards", st.shards, "Shard count for sharded enumerations")->check(CLI::Range(1u, 1024u));
  app.add_option("--replay", st.replay, "Re-run the argv recorded in a manifest");

  auto* gap = app.add_subcommand("gap", "Spectral-gap report (JSON)");
  gap->add_option("--kind", st.kind, "SO or SU")->capture_default_str();
  gap->add_option("--n", st.n, "Rank parameter n")->capture_default_str();
  gap->add_option("--alpha", st.alpha, "Counting exponent as p/q (default: the quoted value for the family)");
  gap->add_option("--epsilon", st.epsilon, "Loss epsilon as p/q")->capture_default_str();

  auto* cnt = app.add_subcommand("count", std::string("Lattice-point counts in Gamma(q) (CSV columns ") + kCountColumns + ")");
  cnt->add_option("--q", st.q, "Congruence level")->required();
  cnt->add_option("--rmax", st.rmax, "Frobenius-norm radius")->capture_default_str();
  cnt->add_option("--grid", st.grid, "Number of distance points")->capture_default_str();
  cnt->add_option("--alpha", st.alpha, "Exponent in the bound curve, p/q (default 25/64)");

  auto* cen = app.add_subcommand("centralizer", "Centralizer report for one Lie algebra element (JSON)");
  cen->add_option("--family", st.family, "SL, SO, SU or a JSON descriptor {\"kind\",\"n\",\"Q\"}")->capture_default_str();
  cen->add_option("--n", st.n, "Rank parameter n (ignored with a JSON descriptor)")->capture_default_str();
  cen->add_option("--p", st.p, "Prime")->required();
  cen->add_option("--k", st.k, "Exponent k of Z/p^k")->capture_default_str();
  cen->add_option("--matrix", st.matrix, "Rows as JSON, or {\"re\":...,\"im\":...} for SU")->required();
  cen->add_flag("--group-count", st.group_count, "Also count the group centralizer by enumeration");
  cen->add_flag("!--strict", st.allow_bad, "Reject bad primes");

  auto* rep = app.add_subcommand("repbound", "Orbit bound for new representations (JSON)");
  rep->add_option("--input", st.input, "JSON {family, p, r} or {family, q[, epsilon]}: file, '-' or inline")->required();
  rep->add_option("--orbit-budget", st.orbit_budget, "Budget for the level-k orbit scan");
  rep->add_flag("!--strict", st.allow_bad, "Reject bad primes in {family, p, r} mode");

  auto* ord = app.add_subcommand("order", "|G(Z/q)| (JSON)");
  ord->add_option("--family", st.family, "SL, SO, SU or a JSON descriptor")->capture_default_str();
  ord->add_option("--n", st.n, "Rank parameter n")->capture_default_str();
  ord->add_option("--q", st.q, "Level q");
  ord->add_option("--p", st.p, "Prime (with --r)");
  ord->add_option("--r", st.r, "Exponent r")->capture_default_str();
  ord->add_flag("!--strict", st.allow_bad, "Reject levels with bad primes");

  auto* sph = app.add_subcommand("spherical",
                                 std::string("Spherical function on H^n (CSV columns ") + kSphericalColumns + ")");
  sph->add_option("--n", st.n, "2 or 3")->capture_default_str();
  sph->add_option("--s", st.s, "Parameter s (decimal or p/q)")->required();
  sph->add_option("--tmax", st.tmax, "Largest distance, at most 30")->capture_default_str();
  sph->add_option("--step", st.step, "Grid step")->capture_default_str();
  sph->add_flag("--imaginary", st.imaginary, "Tempered parameter i s");

  auto* ver = app.add_subcommand("verify-all", "Run acceptance criteria 1-9 (JSON); exit 1 on any failure");
  (void)ver;

  app.require_subcommand(0, 1);

  if (args.empty()) {
    std::cerr << app.help();
    return kExitUsage;
  }
  try {
    std::vector<std::string> rev(args.rbegin(), args.rend());
    app.parse(rev);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kExitOk : kExitUsage;
  }

  if (!st.replay.empty()) {
    try {
      const Json m = parse_json(read_text(st.replay), st.replay);
      auto again = m.at("argv").get<std::vector<std::string>>();
      if (!st.out.empty()) again.insert(again.begin(), {"--out", st.out});
      return run(again);
    } catch (const std::exception& e) {
      std::cerr << "cgk: " << e.what() << "\n";
      return kExitUsage;
    }
  }

  CLI::App* sub = app.get_subcommands().empty() ? nullptr : app.get_subcommands().front();
  if (!sub) {
    std::cerr << app.help();
    return kExitUsage;
  }

  const auto t0 = std::chrono::steady_clock::now();
  BudgetMeter meter(default_budget());
  const bool to_stdout = st.out.empty() || st.out == "-";
  Outcome out;
  std::vector<CriterionResult> criteria;
  bool partial = false;
  std::string error;
  int code = kExitOk;
  try {
    const std::string name = sub->get_name();
    if (name == "gap") out = run_gap(st);
    else if (name == "count") out = run_count(st, meter);
    else if (name == "centralizer") out = run_centralizer(st, meter);
    else if (name == "repbound") out = run_repbound(st, meter);
    else if (name == "order") out = run_order(st, meter);
    else if (name == "spherical") out = run_spherical(st);
    else out = run_verify_all(st, criteria, to_stdout);
    code = out.exit_code;
  } catch (const BudgetExceeded& e) {
    partial = true;
    error = e.what();
    code = kExitBudget;
  } catch (const Error& e) {
    std::cerr << "cgk " << sub->get_name() << ": " << e.what() << "\n";
    return kExitUsage;
  } catch (const std::exception& e) {
    std::cerr << "cgk " << sub->get_name() << ": " << e.what() << "\n";
    return kExitUsage;
  }

  if (partial) {
    std::cerr << "cgk " << sub->get_name() << ": budget exhausted: " << error << "\n";
    Json p{{"partial_results", true}, {"error", error}, {"completed", criteria.empty() ? Json::array() : acceptance_artifact(criteria)["criteria"]}};
    out.data = dump(p);
  }

  Json manifest{{"subcommand", sub->get_name()},
                {"argv", without_out(args)},
                {"parameters", out.parameters},
                {"version", CGK_VERSION},
                {"budget", {{"limit", meter.limit()}, {"used", meter.used()}}},
                {"wall_clock_seconds", std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count()},
                {"branches", out.branches},
                {"derived", out.derived},
                {"partial_results", partial},
                {"exit_code", code}};
  try {
    if (to_stdout) {
      std::cout << out.data << std::flush;
      std::cerr << dump(manifest);
    } else {
      write_file(st.out, out.data);
      write_file(st.out + ".manifest.json", dump(manifest));
    }
  } catch (const Error& e) {
    std::cerr << "cgk: " << e.what() << "\n";
    return kExitUsage;
  }
  return code;
}
