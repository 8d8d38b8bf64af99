#include "cocyc/cli.hpp"

#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "cocyc/chain.hpp"
#include "cocyc/cocycle.hpp"
#include "cocyc/errors.hpp"
#include "cocyc/io.hpp"
#include "cocyc/paths.hpp"
#include "cocyc/properties.hpp"
#include "cocyc/splitting.hpp"
#include "cocyc/strong_connection.hpp"
#include "cocyc/two_loop.hpp"
#include "json_text.hpp"

namespace cocyc {

namespace {

// When --help is requested the report machinery is bypassed entirely.
struct HelpRequested {
  std::string text;
};

std::string num(double x) {
  if (!std::isfinite(x))
    fail(Err::InvariantViolation, "non-finite number in a report");
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  return buf;
}

Json multipliers_json(const SpectrumReport& rep) {
  Json arr = Json::array();
  for (const Multiplier& m : rep.multipliers) {
    Json one;
    one["log_modulus"] = m.log_modulus;
    one["unit"] = Json::array({m.unit.real(), m.unit.imag()});
    one["real"] = m.is_real();
    arr.push_back(std::move(one));
  }
  return arr;
}

Json spectrum_json(const SpectrumReport& rep) {
  Json r;
  r["dim"] = rep.dim;
  r["period"] = rep.period;
  r["exponents"] = rep.exponents;
  r["multipliers"] = multipliers_json(rep);
  r["stable_index"] = rep.stable_index;
  r["hyperbolic"] = rep.hyperbolic;
  r["exponent_sum"] = rep.exponent_sum();
  return r;
}

std::string spectrum_csv(const SpectrumReport& rep) {
  std::string out = "index,exponent,log_modulus,unit_re,unit_im\n";
  for (size_t i = 0; i < rep.multipliers.size(); ++i) {
    const Multiplier& m = rep.multipliers[i];
    out += std::to_string(i + 1) + ',' + num(rep.exponents[i]) + ',' +
           num(m.log_modulus) + ',' + num(m.unit.real()) + ',' +
           num(m.unit.imag()) + '\n';
  }
  return out;
}

Json contract_json(const ContractVerdict& v) {
  Json r;
  r["pass"] = v.pass;
  Json clauses = Json::array();
  for (const ClauseReport& c : v.clauses) {
    Json one;
    one["name"] = c.name;
    one["pass"] = c.pass;
    one["margin"] = c.margin;
    clauses.push_back(std::move(one));
  }
  r["clauses"] = std::move(clauses);
  return r;
}

Json path_json(const CocyclePath& p, const PathContract& contract,
               const Tolerances& tol) {
  Json r;
  r["kind"] = path_kind_name(contract.kind);
  r["radius"] = p.radius();
  r["grid_points"] = static_cast<int>(p.grid().size());
  r["base_exponents"] = lyapunov_spectrum(p.base(), tol).exponents;
  const SpectrumReport end = lyapunov_spectrum(p.endpoint(), tol);
  r["endpoint_exponents"] = end.exponents;
  r["endpoint_multipliers"] = multipliers_json(end);
  r["contract"] = contract_json(verify_contract(p, contract, tol));
  return r;
}

// Plot-ready exponent curves: one row per path sample.
std::string path_csv(const CocyclePath& p, const Tolerances& tol) {
  const int d = p.base().dim();
  std::string out = "t";
  for (int j = 1; j <= d; ++j) out += ",chi_" + std::to_string(j);
  out += '\n';
  for (size_t i = 0; i < p.grid().size(); ++i) {
    out += num(p.grid()[i]);
    const SpectrumReport rep = lyapunov_spectrum(p.samples()[i], tol);
    for (const double chi : rep.exponents) out += ',' + num(chi);
    out += '\n';
  }
  return out;
}

std::string chain_csv(const ChainGraph& g) {
  std::string out = "# nodes\nbox,x,y,z,class\n";
  const int n = grid_box_count(g.domain, g.res);
  for (int b = 0; b < n; ++b) {
    const std::array<int, 3> c = box_coords(g.domain, g.res, b);
    out += std::to_string(b) + ',' + std::to_string(c[0]) + ',' +
           std::to_string(c[1]) + ',' + std::to_string(c[2]) + ',' +
           std::to_string(g.class_id[static_cast<size_t>(b)]) + '\n';
  }
  out += "# edges\nsrc,dst\n";
  for (const auto& e : g.edges)
    out += std::to_string(e.first) + ',' + std::to_string(e.second) + '\n';
  return out;
}

// --- sampled-map ingestion -------------------------------------------------

struct SampleTable {
  int m = 0;
  std::vector<std::pair<Point, Point>> rows;  // input point -> image point
};

double parse_field(const std::string& field) {
  const char* s = field.c_str();
  char* end = nullptr;
  const double v = std::strtod(s, &end);
  while (end && *end == ' ') ++end;
  if (end == s || *end != '\0')
    fail(Err::MalformedInput, "sample table entry '" + field + "' is not a number");
  return v;
}

SampleTable parse_sample_table(const std::string& text) {
  SampleTable table;
  std::istringstream lines(text);
  std::string line;
  while (std::getline(lines, line)) {
    if (!line.empty() && line.back() == '\r') line.pop_back();
    const size_t start = line.find_first_not_of(" \t");
    if (start == std::string::npos || line[start] == '#') continue;
    std::vector<double> vals;
    std::istringstream fields(line);
    std::string field;
    while (std::getline(fields, field, ',')) vals.push_back(parse_field(field));
    if (vals.size() != 2 && vals.size() != 4 && vals.size() != 6)
      fail(Err::MalformedInput,
           "sample rows must hold 2, 4, or 6 numbers (point, image)");
    const int m = static_cast<int>(vals.size() / 2);
    if (table.m == 0) table.m = m;
    if (m != table.m)
      fail(Err::MalformedInput, "sample rows disagree on dimension");
    Point p{0, 0, 0};
    Point q{0, 0, 0};
    for (int a = 0; a < m; ++a) {
      p[static_cast<size_t>(a)] = vals[static_cast<size_t>(a)];
      q[static_cast<size_t>(a)] = vals[static_cast<size_t>(m + a)];
    }
    table.rows.emplace_back(p, q);
  }
  if (table.rows.empty())
    fail(Err::MalformedInput, "sample table holds no rows");
  return table;
}

// The sampled map acts on a query as its nearest sampled point does; the
// domain is the bounding box of everything sampled, so images never escape.
void sampled_map(const SampleTable& table, MapFn& f, GridDomain& dom) {
  dom.m = table.m;
  for (int a = 0; a < table.m; ++a) {
    double lo = table.rows[0].first[static_cast<size_t>(a)];
    double hi = lo;
    for (const auto& row : table.rows) {
      for (const double v :
           {row.first[static_cast<size_t>(a)], row.second[static_cast<size_t>(a)]}) {
        lo = std::min(lo, v);
        hi = std::max(hi, v);
      }
    }
    if (!(hi > lo)) {
      lo -= 0.5;
      hi += 0.5;
    }
    dom.lo[static_cast<size_t>(a)] = lo;
    dom.hi[static_cast<size_t>(a)] = hi;
  }
  const int m = table.m;
  f = [rows = table.rows, m](const Point& p) {
    size_t best = 0;
    double best_d2 = std::numeric_limits<double>::infinity();
    for (size_t i = 0; i < rows.size(); ++i) {
      double d2 = 0.0;
      for (int a = 0; a < m; ++a) {
        const double d = p[static_cast<size_t>(a)] -
                         rows[i].first[static_cast<size_t>(a)];
        d2 += d * d;
      }
      if (d2 < best_d2) {
        best_d2 = d2;
        best = i;
      }
    }
    return rows[best].second;
  };
}

// --- named property dispatch ------------------------------------------------

Json check_json(const SpectrumReport& rep, const std::string& property,
                std::optional<int> index, double angle, const Tolerances& tol) {
  std::vector<std::string> segs;
  std::string seg;
  std::istringstream ss(property);
  while (std::getline(ss, seg, ':')) segs.push_back(seg);
  if (segs.empty()) fail(Err::MalformedInput, "empty property name");
  const std::string& head = segs[0];

  Json r;
  r["property"] = property;
  if (head == "pjj1" || head == "pjjc") {
    if (segs.size() > 1) fail(Err::MalformedInput, "property takes no ':' arguments");
    const int j = index.value_or(1);
    const PropertyCheck pc = check_named_property(
        rep,
        head == "pjj1" ? NamedProperty::PairEqualAllReal
                       : NamedProperty::PairComplexIsolated,
        j, 0.0, tol);
    r["index"] = j;
    r["holds"] = pc.holds;
    r["witness"] = pc.witness;
  } else if (head == "pid") {
    if (segs.size() != 2)
      fail(Err::MalformedInput, "property pid needs a width, as in pid:0.1");
    const double delta = parse_field(segs[1]);
    const int i = index.value_or(std::max(1, rep.stable_index));
    const PropertyCheck pc =
        check_named_property(rep, NamedProperty::WeakExponent, i, delta, tol);
    r["index"] = i;
    r["delta"] = delta;
    r["holds"] = pc.holds;
    r["witness"] = pc.witness;
  } else if (head == "pss") {
    if (segs.size() > 1) fail(Err::MalformedInput, "property takes no ':' arguments");
    const int i = index.value_or(2);
    const SurrogateVerdict v =
        check_pss_spectral_and_directional(rep, i, angle, tol);
    r["index"] = i;
    r["angle"] = angle;
    r["holds"] = v.holds;
    r["spectral_gap"] = v.spectral_gap;
    r["direction_within"] = v.direction_within;
    r["note"] = v.note;
  } else if (head == "thm3") {
    if (segs.size() > 1) fail(Err::MalformedInput, "property takes no ':' arguments");
    const PropertyCheck pc = check_opposite_pair_sums(rep, rep);
    r["holds"] = pc.holds;
    r["witness"] = pc.witness;
  } else if (head == "vprime") {
    if (segs.size() > 1) fail(Err::MalformedInput, "property takes no ':' arguments");
    const SectionalDissipativity sd = check_sectional_dissipativity({rep});
    r["holds"] = sd.forward;
    r["forward"] = sd.forward;
    r["backward"] = sd.backward;
    if (sd.uniform_alpha)
      r["uniform_alpha"] = *sd.uniform_alpha;
    else
      r["uniform_alpha"] = nullptr;
  } else {
    fail(Err::MalformedInput, "unknown property '" + head + "'");
  }
  return r;
}

// --- driver -----------------------------------------------------------------

struct Output {
  std::string text;  // complete report body, newline-terminated
};

Output dispatch(int argc, const char* const* argv) {
  CLI::App app{"cocycle-forge: spectra, dominated splittings, perturbation "
               "paths, and chain-recurrence graphs for periodic matrix "
               "cocycles"};
  app.require_subcommand(1);

  double tol_value = Tolerances{}.equality;
  const auto* tol_opt =
      app.add_option("--tol", tol_value,
                     "equality/unit-circle tolerance (env COCYCLE_FORGE_TOL)")
          ->envname("COCYCLE_FORGE_TOL");
  int grid = 101;
  const auto* grid_opt =
      app.add_option("--grid", grid, "path sample count (default 101)");
  bool want_json = false;
  bool want_csv = false;
  app.add_flag("--json", want_json, "emit a JSON report (default)");
  app.add_flag("--csv", want_csv, "emit plot-ready CSV instead of JSON");
  long long seed_value = 0;
  const auto* seed_opt = app.add_option(
      "--seed", seed_value, "echoed for provenance; core paths are deterministic");

  std::string file;
  int opt_j = 1, opt_i = 1, opt_kmax = 64, opt_n = 0, opt_k = 1;
  int opt_max_period = 8, opt_steps = 1000, opt_res = 0;
  double opt_eps = 0.0, opt_delta = 0.0, opt_angle = 0.0;
  std::string opt_target, opt_property, opt_map, opt_samples, opt_spec;
  std::vector<int> opt_chain;
  std::vector<double> opt_sweep;
  bool opt_complexify = false;

  CLI::App* spectrum = app.add_subcommand("spectrum", "Lyapunov spectrum of a cocycle");
  spectrum->add_option("file", file, "cocycle JSON ('-' = stdin)")->required();

  CLI::App* dominate = app.add_subcommand("dominate", "minimal domination windows");
  dominate->add_option("file", file)->required();
  dominate->add_option("--kmax", opt_kmax, "window cap (default 64)");
  dominate->add_option("--chain", opt_chain, "bundle dimensions d1,d2,...")
      ->delimiter(',');

  CLI::App* blend = app.add_subcommand("blend", "equalize exponents j and j+1");
  blend->add_option("file", file)->required();
  blend->add_option("--j", opt_j, "lower pair index (1-based)")->required();
  blend->add_option("--eps", opt_eps, "perturbation budget")->required();

  CLI::App* realify_cmd = app.add_subcommand("realify", "rotate all multipliers real");
  realify_cmd->add_option("file", file)->required();
  realify_cmd->add_option("--eps", opt_eps)->required();

  CLI::App* weaken = app.add_subcommand("weaken", "raise exponent i into (-delta, 0)");
  weaken->add_option("file", file)->required();
  weaken->add_option("--i", opt_i, "exponent index (1-based)")->required();
  weaken->add_option("--delta", opt_delta, "window width")->required();
  weaken->add_option("--eps", opt_eps)->required();

  CLI::App* collapse = app.add_subcommand("collapse", "push all exponents to one side");
  collapse->add_option("file", file)->required();
  collapse->add_option("--target", opt_target, "sink or source")
      ->required()
      ->check(CLI::IsMember({"sink", "source"}));
  collapse->add_option("--eps", opt_eps)->required();

  CLI::App* twoloop = app.add_subcommand("twoloop", "build a two-loop cocycle");
  twoloop->add_option("--spec", opt_spec, "two-loop spec JSON")->required();
  twoloop->add_option("--n", opt_n, "dwell length override");
  twoloop->add_flag("--complexify", opt_complexify,
                    "steer pair (j, j+1) complex on the dwell positions");
  twoloop->add_option("--j", opt_j, "pair index for --complexify");
  twoloop->add_option("--eps", opt_eps, "budget for --complexify");

  CLI::App* sft = app.add_subcommand("sft-scan", "domination over a subshift's words");
  sft->add_option("file", file)->required();
  sft->add_option("--k", opt_k, "window size")->required();
  sft->add_option("--max-period", opt_max_period, "longest word (cap 20)")
      ->required();

  CLI::App* strongconn =
      app.add_subcommand("strongconn", "center-model class and limiting direction");
  strongconn->add_option("file", file, "center model JSON")->required();
  strongconn->add_option("--steps", opt_steps, "iterations")->required();

  CLI::App* chain = app.add_subcommand("chain", "chain-recurrence classes on a grid");
  const auto* map_opt = chain->add_option("--map", opt_map, "bundled map name");
  const auto* samples_opt =
      chain->add_option("--samples", opt_samples, "CSV of point,image rows");
  chain->add_option("--eps", opt_eps, "pseudo-orbit tolerance")->required();
  chain->add_option("--res", opt_res, "boxes per axis")->required();
  chain->add_option("--sweep", opt_sweep, "descending epsilon list e1,e2,...")
      ->delimiter(',');

  CLI::App* check = app.add_subcommand("check", "named spectral property");
  check->add_option("file", file)->required();
  check->add_option("--property", opt_property,
                    "pjj1 | pid:DELTA | pjjc | pss | thm3 | vprime")
      ->required();
  const auto* i_opt = check->add_option("--i", opt_i, "index argument");
  check->add_option("--angle", opt_angle, "measured direction angle for pss");

  for (CLI::App* sub : app.get_subcommands(nullptr)) sub->fallthrough();

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp&) {
    throw HelpRequested{app.help()};
  } catch (const CLI::ParseError& e) {
    fail(Err::MalformedInput, e.what());
  }

  Tolerances tol;
  if (tol_opt->count() > 0 || std::getenv("COCYCLE_FORGE_TOL") != nullptr) {
    tol.equality = tol_value;
    tol.unit_circle = tol_value;
  }

  const std::string command = app.get_subcommands().front()->get_name();
  std::string digest;
  Json result;
  std::string csv;

  if (spectrum->parsed()) {
    const std::string text = read_input(file);
    digest = fnv1a_hex(text);
    const SpectrumReport rep = lyapunov_spectrum(parse_cocycle_file(text), tol);
    result = spectrum_json(rep);
    if (want_csv) csv = spectrum_csv(rep);
  } else if (dominate->parsed()) {
    const std::string text = read_input(file);
    digest = fnv1a_hex(text);
    const PeriodicCocycle c = parse_cocycle_file(text);
    if (want_csv) fail(Err::MalformedInput, "dominate has no CSV form");
    if (!opt_chain.empty()) {
      const ChainDominationReport rep =
          check_chain_domination(c, opt_chain, opt_kmax);
      result["k"] = rep.k;
      result["interfaces"] = rep.interfaces;
      result["dominated"] = rep.dominated;
    } else {
      const DominationReport rep = domination_scan(c, opt_kmax);
      result["k_max"] = rep.k_max;
      Json rows = Json::array();
      for (const IndexDomination& row : rep.per_index) {
        Json one;
        one["index"] = row.index;
        one["splitting_exists"] = row.splitting_exists;
        if (row.minimal_k)
          one["minimal_k"] = *row.minimal_k;
        else
          one["minimal_k"] = nullptr;
        one["reason"] = row.reason;
        rows.push_back(std::move(one));
      }
      result["per_index"] = std::move(rows);
    }
  } else if (blend->parsed() || realify_cmd->parsed() || weaken->parsed() ||
             collapse->parsed()) {
    const std::string text = read_input(file);
    digest = fnv1a_hex(text);
    const PeriodicCocycle c = parse_cocycle_file(text);
    PathContract contract;
    contract.epsilon = opt_eps;
    CocyclePath path = CocyclePath::constant(c, 2);
    if (blend->parsed()) {
      contract.kind = PathKind::Blend;
      contract.index = opt_j;
      path = blend_exponents(c, opt_j, opt_eps, grid);
    } else if (realify_cmd->parsed()) {
      contract.kind = PathKind::Realify;
      path = realify(c, opt_eps, grid);
    } else if (weaken->parsed()) {
      contract.kind = PathKind::Weaken;
      contract.index = opt_i;
      contract.delta = opt_delta;
      path = weaken_exponent(c, opt_i, opt_delta, opt_eps, grid);
    } else {
      contract.kind = PathKind::Collapse;
      contract.sink = opt_target == "sink";
      const int stage_grid = grid_opt->count() > 0 ? grid : 51;
      path = collapse_to_sink_or_source(c, contract.sink, opt_eps, stage_grid);
    }
    result = path_json(path, contract, tol);
    if (want_csv) csv = path_csv(path, tol);
  } else if (twoloop->parsed()) {
    const std::string text = read_input(opt_spec);
    digest = fnv1a_hex(text);
    TwoLoopSpec spec = parse_two_loop_file(text);
    if (opt_n > 0) spec.n = opt_n;
    const PeriodicCocycle c = build_two_loop_cocycle(spec);
    const std::vector<char> mask = two_loop_dwell_mask(spec);
    const SpectrumReport rep = lyapunov_spectrum(c, tol);
    result["dim"] = c.dim();
    result["period"] = c.period();
    Json mask_json = Json::array();
    for (const char f : mask) mask_json.push_back(f ? 1 : 0);
    result["dwell_mask"] = std::move(mask_json);
    result["spectrum"] = spectrum_json(rep);
    if (opt_complexify) {
      if (twoloop->count("--j") == 0 || twoloop->count("--eps") == 0)
        fail(Err::MalformedInput, "--complexify needs --j and --eps");
      PathContract contract;
      contract.kind = PathKind::Complexify;
      contract.index = opt_j;
      contract.epsilon = opt_eps;
      const CocyclePath path = make_complex(c, opt_j, opt_eps, grid, &mask);
      result["path"] = path_json(path, contract, tol);
      if (want_csv) csv = path_csv(path, tol);
    } else if (want_csv) {
      csv = spectrum_csv(rep);
    }
  } else if (sft->parsed()) {
    const std::string text = read_input(file);
    digest = fnv1a_hex(text);
    if (want_csv) fail(Err::MalformedInput, "sft-scan has no CSV form");
    const SftScanReport rep =
        sft_domination_scan(parse_sft_file(text), opt_k, opt_max_period);
    result["k"] = rep.k;
    result["max_period"] = rep.max_period;
    result["words"] = rep.words;
    result["uniform"] = rep.uniform;
    Json uniform_at = Json::array();
    for (const char f : rep.uniform_at_index) uniform_at.push_back(f ? 1 : 0);
    result["uniform_at_index"] = std::move(uniform_at);
    result["failing_at_index"] = rep.failing_at_index;
    result["worst_word"] = rep.worst_word;
    Json worst_at = Json::array();
    for (const char f : rep.worst_dominated_at_index)
      worst_at.push_back(f ? 1 : 0);
    result["worst_dominated_at_index"] = std::move(worst_at);
  } else if (strongconn->parsed()) {
    const std::string text = read_input(file);
    digest = fnv1a_hex(text);
    if (want_csv) fail(Err::MalformedInput, "strongconn has no CSV form");
    const IterationReport rep =
        normalized_iteration_limit(parse_model_file(text), opt_steps);
    result["class"] = center_class_name(rep.cls);
    result["direction"] = Json::array({rep.direction(0), rep.direction(1)});
    result["angle_to_invariant"] = rep.angle_to_invariant;
    result["steps"] = rep.steps;
  } else if (chain->parsed()) {
    if ((map_opt->count() > 0) == (samples_opt->count() > 0))
      fail(Err::MalformedInput, "chain needs exactly one of --map, --samples");
    MapFn f;
    GridDomain dom;
    if (map_opt->count() > 0) {
      digest = fnv1a_hex(opt_map);
      f = zoo_map(opt_map);
      dom = zoo_domain(opt_map);
    } else {
      const std::string text = read_input(opt_samples);
      digest = fnv1a_hex(text);
      sampled_map(parse_sample_table(text), f, dom);
    }
    if (!opt_sweep.empty()) {
      const EpsilonSweep sweep =
          class_count_across_epsilon(f, dom, opt_res, opt_sweep);
      result["res"] = opt_res;
      result["epsilons"] = sweep.epsilons;
      result["counts"] = sweep.counts;
      result["refines"] = sweep.refines;
      if (want_csv) {
        csv = "epsilon,count\n";
        for (size_t i = 0; i < sweep.epsilons.size(); ++i)
          csv += num(sweep.epsilons[i]) + ',' +
                 std::to_string(sweep.counts[i]) + '\n';
        csv += std::string("# refines=") + (sweep.refines ? "1" : "0") + '\n';
      }
    } else {
      const ChainGraph g = build_chain_graph(f, dom, opt_res, opt_eps);
      result["res"] = g.res;
      result["epsilon"] = g.epsilon;
      const int boxes = grid_box_count(g.domain, g.res);
      result["box_count"] = boxes;
      result["edge_count"] = static_cast<long long>(g.edges.size());
      result["class_count"] = static_cast<int>(g.classes.size());
      result["classes"] = g.classes;
      int wandering = 0;
      for (const int id : g.class_id) wandering += id < 0 ? 1 : 0;
      result["wandering_count"] = wandering;
      if (want_csv) csv = chain_csv(g);
    }
  } else if (check->parsed()) {
    const std::string text = read_input(file);
    digest = fnv1a_hex(text);
    if (want_csv) fail(Err::MalformedInput, "check has no CSV form");
    const SpectrumReport rep = lyapunov_spectrum(parse_cocycle_file(text), tol);
    std::optional<int> index;
    if (i_opt->count() > 0) index = opt_i;
    result = check_json(rep, opt_property, index, opt_angle, tol);
  }

  if (want_csv) {
    if (want_json) fail(Err::MalformedInput, "choose one of --json, --csv");
    return Output{csv};
  }

  Json report;
  report["format_version"] = kFormatVersion;
  report["command"] = command;
  Json echo = Json::array();
  for (int i = 1; i < argc; ++i) echo.push_back(std::string(argv[i]));
  report["argv"] = std::move(echo);
  report["input_digest"] = digest;
  Json tols;
  tols["equality"] = tol.equality;
  tols["unit_circle"] = tol.unit_circle;
  tols["conservation"] = tol.conservation;
  tols["separation"] = tol.separation;
  report["tolerances"] = std::move(tols);
  if (seed_opt->count() > 0) report["seed"] = seed_value;
  report["result"] = std::move(result);
  return Output{dump_fixed(report) + "\n"};
}

std::string error_body(int argc, const char* const* argv, const char* code,
                       const std::string& message) {
  Json report;
  report["format_version"] = kFormatVersion;
  report["command"] = argc > 1 ? argv[1] : "";
  Json echo = Json::array();
  for (int i = 1; i < argc; ++i) echo.push_back(std::string(argv[i]));
  report["argv"] = std::move(echo);
  Json err;
  err["code"] = code;
  err["message"] = message;
  report["error"] = std::move(err);
  return dump_fixed(report) + "\n";
}

}  // namespace

int run(int argc, const char* const* argv, std::ostream& out) {
  const auto t0 = std::chrono::steady_clock::now();
  int code = 0;
  std::string body;
  try {
    body = dispatch(argc, argv).text;
  } catch (const HelpRequested& h) {
    body = h.text;
  } catch (const CocycleError& e) {
    code = err_is_infeasible(e.code) ? 2 : 3;
    body = error_body(argc, argv, err_name(e.code), e.what());
  } catch (const std::exception& e) {
    code = 4;
    body = error_body(argc, argv, "InternalError", e.what());
  }
  out << body << std::flush;
  const auto t1 = std::chrono::steady_clock::now();
  std::fprintf(stderr, "wall_time_ms=%.3f\n",
               std::chrono::duration<double, std::milli>(t1 - t0).count());
  return code;
}

int run(int argc, const char* const* argv) { return run(argc, argv, std::cout); }

}  // namespace cocyc
