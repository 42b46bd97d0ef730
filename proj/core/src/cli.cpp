#include "uniharm/cli.hpp"

#include <chrono>
#include <cmath>
#include <ostream>
#include <regex>
#include <string>

#include "CLI11.hpp"
#include "canonical_json.hpp"
#include "json.hpp"
#include "report_json.hpp"
#include "uniharm/criteria.hpp"
#include "uniharm/error.hpp"
#include "uniharm/geometry.hpp"
#include "uniharm/oracle.hpp"
#include "uniharm/report.hpp"
#include "uniharm/spec_io.hpp"

#ifndef UNIHARM_VERSION
#define UNIHARM_VERSION "0.0.0"
#endif

namespace uniharm::cli {

using nlohmann::json;

namespace {

struct Common {
  std::string spec_path;
  std::string json_path;
  bool timing = false;
};

struct CertifyFlags {
  std::string theorem;
  double M = 0.0;
  bool convex = false;
  bool estimate = false;
  bool as_stated = false;
  bool t7_literal = false;
  std::string grid = "64x256";
  std::string csv_path;
  int csv_n = 1024;
  int n = 2048;
  int pairs = 1000;
  std::uint64_t seed = 0;
};

struct OracleFlags {
  int grid = 256;
  double sigma = 1e-3;
  double tau = 1e-6;
};

struct GeometryFlags {
  int n = 2048;
  int pairs = 1000;
  std::uint64_t seed = 0;
  std::string csv_path;
};

struct SweepFlags {
  int na = 16;
  bool include_zero = false;
};

[[noreturn]] void invalid(const std::string& msg) { throw Error(ErrorCode::kOutOfRange, msg); }

SupPlan parse_sup_grid(const std::string& s) {
  static const std::regex re(R"((\d+)x(\d+))");
  std::smatch m;
  if (!std::regex_match(s, m, re)) invalid("--grid expects NRxNT, got '" + s + "'");
  SupPlan plan;
  plan.nr = std::stoi(m[1]);
  plan.ntheta = std::stoi(m[2]);
  if (plan.nr < 2 || plan.ntheta < 1) invalid("--grid needs NR >= 2 and NT >= 1");
  return plan;
}

OracleGrid oracle_grid(const OracleFlags& f) {
  if (f.grid < 2) invalid("--grid must be >= 2");
  if (!(f.sigma > 0.0) || !std::isfinite(f.sigma)) invalid("--sigma must be positive");
  if (!(f.tau >= 0.0) || !std::isfinite(f.tau)) invalid("--tau must be non-negative");
  return {f.grid, f.sigma, f.tau};
}

RatioKind resolve_theorem(const CertifyFlags& f, const MapSpec& spec) {
  std::string name = f.theorem;
  if (name.empty()) name = spec.kind == SpecKind::kLogPHarmonic ? "T7" : "T2";
  auto kind = ratio_kind_from_string(name);
  if (!kind || *kind == RatioKind::kT7Literal)
    invalid("--theorem expects one of T1, T2, T4, T5, T6, T7");
  if (f.t7_literal) {
    if (*kind != RatioKind::kT7Canonical) invalid("--t7-literal applies to T7 only");
    kind = RatioKind::kT7Literal;
  }
  return *kind;
}

MBasis resolve_basis(const CertifyFlags& f, bool M_given) {
  if (M_given + f.convex + f.estimate > 1) invalid("--M, --convex and --estimate-M are exclusive");
  if (M_given) {
    if (!(f.M >= 1.0) || !std::isfinite(f.M)) invalid("--M must be a finite number >= 1");
    return MBasis::user(f.M);
  }
  return f.estimate ? MBasis::estimate() : MBasis::convex();
}

struct Outcome {
  json body;
  int code = kExitOk;
};

Outcome do_certify(const MapSpec& spec, const CertifyFlags& f, bool M_given, json& params) {
  const RatioKind kind = resolve_theorem(f, spec);
  const MBasis basis = resolve_basis(f, M_given);
  const SupPlan plan = parse_sup_grid(f.grid);
  if (f.n < 3) invalid("--n must be >= 3");
  if (f.pairs < 0) invalid("--pairs must be >= 0");
  CertifyOptions opt;
  opt.as_stated = f.as_stated;
  opt.boundary_n = f.n;
  opt.pairs = f.pairs;
  opt.seed = f.seed;

  params["theorem"] = std::string(to_string(kind));
  params["basis"] = std::string(to_string(basis.kind));
  params["M"] = basis.M;
  params["as_stated"] = f.as_stated;
  params["sup_grid"] = {{"nr", plan.nr}, {"ntheta", plan.ntheta},
                        {"refine_top", plan.refine_top}, {"max_iter", plan.max_iter}};
  params["boundary_n"] = f.n;
  params["pairs"] = f.pairs;
  params["seed"] = f.seed;
  params["threshold_factor"] = threshold_factor(kind, f.as_stated);

  const MapData map = to_map_data(spec);
  const CriterionReport r = certify(map, kind, basis, plan, opt);
  if (!f.csv_path.empty()) {
    if (f.csv_n < 1) invalid("--csv-n must be >= 1");
    emit_boundary_csv(Ratio(kind, map).reference_map(), f.csv_n, f.csv_path);
  }
  return {detail::json_value(r), r.verdict == Verdict::kCertified ? kExitOk : kExitNegative};
}

Outcome do_oracle(const MapSpec& spec, const OracleFlags& f, json& params) {
  const OracleGrid grid = oracle_grid(f);
  params["oracle_grid"] = detail::json_value(grid);
  const UnivalenceReport r = univalence_report(MapEvaluator(to_map_data(spec)), grid, true);
  return {detail::json_value(r), r.verdict.status == OracleStatus::kPass ? kExitOk : kExitNegative};
}

Outcome do_geometry(const MapSpec& spec, const GeometryFlags& f, json& params) {
  if (f.n < 3) invalid("--n must be >= 3");
  if (f.pairs < 0) invalid("--pairs must be >= 0");
  params["n"] = f.n;
  params["pairs"] = f.pairs;
  params["seed"] = f.seed;

  const MapEvaluator ev(to_map_data(spec));
  const BoundaryPolyline poly = boundary_polyline(ev, f.n);
  json body = {{"vertices", poly.points.size()}};
  const bool simple = is_simple(poly);
  body["simple"] = simple;
  body["convex"] = simple ? json(is_convex(poly)) : json(nullptr);
  body["connectivity"] = simple ? detail::json_value(connectivity_estimate(poly, f.pairs, f.seed))
                                : json(nullptr);
  try {
    body["winding"] = winding_number(poly, ev.value(0.0));
  } catch (const Error& e) {
    if (e.code() != ErrorCode::kPointOnCurve) throw;
    body["winding"] = nullptr;
  }
  if (!f.csv_path.empty()) emit_boundary_csv(ev, f.n, f.csv_path);
  return {body, simple ? kExitOk : kExitNegative};
}

Outcome do_sweep(const MapSpec& spec, const SweepFlags& s, const OracleFlags& f, json& params) {
  const OracleGrid grid = oracle_grid(f);
  if (s.na < 1) invalid("--na must be >= 1");
  if (spec.kind != SpecKind::kPolyharmonic)
    throw Error(ErrorCode::kShapeMismatch, "sweep needs a polyharmonic spec");
  const TwoTermMap t = two_term_form(std::get<AlmansiMap>(to_map_data(spec)));
  const auto samples = stable_samples(s.na, s.include_zero);
  params["oracle_grid"] = detail::json_value(grid);
  params["na"] = s.na;
  params["include_zero"] = s.include_zero;

  const auto entries = stable_sweep(t.G, t.K, t.p, samples, grid);
  bool all_pass = true;
  for (const auto& e : entries) all_pass = all_pass && e.verdict.status == OracleStatus::kPass;
  return {{{"entries", detail::json_value(entries)}, {"all_pass", all_pass}},
          all_pass ? kExitOk : kExitNegative};
}

void add_common(CLI::App* cmd, Common& c) {
  cmd->add_option("spec", c.spec_path, "map spec JSON file")->required();
  cmd->add_option("--json", c.json_path, "also write the report to this file");
  cmd->add_flag("--timing", c.timing, "record wall time (breaks byte-identical reports)");
}

void add_oracle_flags(CLI::App* cmd, OracleFlags& f) {
  cmd->add_option("--grid", f.grid, "oracle grid points per axis")->capture_default_str();
  cmd->add_option("--sigma", f.sigma, "minimum collision separation")->capture_default_str();
  cmd->add_option("--tau", f.tau, "image-space candidate radius")->capture_default_str();
}

int exit_code_for(ErrorCode code) {
  switch (code) {
    case ErrorCode::kInvalidSpec:
    case ErrorCode::kShapeMismatch:
    case ErrorCode::kOutOfRange:
    case ErrorCode::kConvexCheckFailed:
    case ErrorCode::kNonSimple:
      return kExitInvalid;
    default:
      return kExitInternal;
  }
}

void print_error(std::ostream& err, std::string_view code, const std::string& msg) {
  err << "uniharm: error: " << code << ": " << msg << '\n';
}

}  // namespace

int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Univalence certificates and oracles for polyharmonic and log-p-harmonic maps",
               "uniharm"};
  app.set_version_flag("--version", UNIHARM_VERSION);
  app.require_subcommand(1);

  Common common;
  CertifyFlags cf;
  OracleFlags of;
  GeometryFlags gf;
  SweepFlags sf;
  int boundary_n = 256;
  std::string boundary_csv_path;

  auto certify_options = [&](CLI::App* cmd) {
    cmd->add_option("--theorem", cf.theorem, "T1, T2, T4, T5, T6 or T7 (default T2, T7 for log maps)");
    cmd->add_option("--M", cf.M, "user-supplied linear-connectivity constant");
    cmd->add_flag("--convex", cf.convex, "M = 1 after a convexity check (default basis)");
    cmd->add_flag("--estimate-M", cf.estimate, "sampled M estimate; heuristic only");
    cmd->add_flag("--as-stated", cf.as_stated, "T5: compare against 1/M instead of 1/(2M)");
    cmd->add_flag("--t7-literal", cf.t7_literal, "T7: product-form ratio in g_k = exp(G_k)");
    cmd->add_option("--n", cf.n, "boundary samples for the M basis")->capture_default_str();
    cmd->add_option("--pairs", cf.pairs, "random pairs for --estimate-M")->capture_default_str();
    cmd->add_option("--seed", cf.seed, "seed for --estimate-M")->capture_default_str();
  };

  auto* certify_cmd = app.add_subcommand("certify", "sup of a criterion ratio against its threshold");
  add_common(certify_cmd, common);
  certify_options(certify_cmd);
  certify_cmd->add_option("--grid", cf.grid, "polar sup grid NRxNT")->capture_default_str();
  certify_cmd->add_option("--csv", cf.csv_path, "boundary CSV of the reference map");
  certify_cmd->add_option("--csv-n", cf.csv_n, "rows in the CSV")->capture_default_str();

  auto* oracle_cmd = app.add_subcommand("oracle", "Jacobian, boundary and injectivity checks");
  add_common(oracle_cmd, common);
  add_oracle_flags(oracle_cmd, of);

  auto* geometry_cmd = app.add_subcommand("geometry", "boundary image simplicity, convexity and M estimate");
  add_common(geometry_cmd, common);
  geometry_cmd->add_option("--n", gf.n, "boundary samples")->capture_default_str();
  geometry_cmd->add_option("--pairs", gf.pairs, "random pairs")->capture_default_str();
  geometry_cmd->add_option("--seed", gf.seed, "sampling seed")->capture_default_str();
  geometry_cmd->add_option("--csv", gf.csv_path, "boundary CSV of f");

  auto* sweep_cmd = app.add_subcommand("sweep", "oracle over f_a = a|z|^{2(p-1)}G + K");
  add_common(sweep_cmd, common);
  add_oracle_flags(sweep_cmd, of);
  sweep_cmd->add_option("--na", sf.na, "number of samples of a")->capture_default_str();
  sweep_cmd->add_flag("--include-zero", sf.include_zero, "also run a = 0");

  auto* report_cmd = app.add_subcommand("report", "certify, oracle and geometry merged");
  add_common(report_cmd, common);
  certify_options(report_cmd);
  report_cmd->add_option("--sup-grid", cf.grid, "polar sup grid NRxNT")->capture_default_str();
  add_oracle_flags(report_cmd, of);

  auto* canon_cmd = app.add_subcommand("canon", "print the canonical form of a spec");
  canon_cmd->add_option("spec", common.spec_path, "map spec JSON file")->required();

  auto* boundary_cmd = app.add_subcommand("boundary", "boundary image CSV");
  boundary_cmd->add_option("spec", common.spec_path, "map spec JSON file")->required();
  boundary_cmd->add_option("--n", boundary_n, "rows")->capture_default_str();
  boundary_cmd->add_option("--csv", boundary_csv_path, "output file (default: standard output)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::Success& e) {
    return app.exit(e, out, err);
  } catch (const CLI::ParseError& e) {
    print_error(err, "usage", e.what());
    return kExitInvalid;
  }

  try {
    const auto start = std::chrono::steady_clock::now();
    const MapSpec spec = parse_spec(common.spec_path);

    if (app.got_subcommand(canon_cmd)) {
      out << canonical_json(spec) << '\n';
      return kExitOk;
    }
    if (app.got_subcommand(boundary_cmd)) {
      const MapEvaluator ev(to_map_data(spec));
      if (boundary_csv_path.empty()) out << boundary_csv(ev, boundary_n);
      else emit_boundary_csv(ev, boundary_n, boundary_csv_path);
      return kExitOk;
    }

    json params = json::object();
    json report = {{"tool_version", UNIHARM_VERSION},
                   {"spec", {{"digest", spec_digest(spec)},
                             {"kind", std::string(to_string(spec.kind))},
                             {"p", spec.p}}}};
    int code = kExitOk;
    if (app.got_subcommand(certify_cmd)) {
      report["command"] = "certify";
      auto o = do_certify(spec, cf, certify_cmd->count("--M") > 0, params);
      report["certify"] = std::move(o.body);
      code = o.code;
    } else if (app.got_subcommand(oracle_cmd)) {
      report["command"] = "oracle";
      auto o = do_oracle(spec, of, params);
      report["oracle"] = std::move(o.body);
      code = o.code;
    } else if (app.got_subcommand(geometry_cmd)) {
      report["command"] = "geometry";
      auto o = do_geometry(spec, gf, params);
      report["geometry"] = std::move(o.body);
      code = o.code;
    } else if (app.got_subcommand(sweep_cmd)) {
      report["command"] = "sweep";
      auto o = do_sweep(spec, sf, of, params);
      report["sweep"] = std::move(o.body);
      code = o.code;
    } else {
      report["command"] = "report";
      json cert_params = json::object(), oracle_params = json::object(), geo_params = json::object();
      auto c = do_certify(spec, cf, report_cmd->count("--M") > 0, cert_params);
      auto o = do_oracle(spec, of, oracle_params);
      GeometryFlags g;
      g.n = cf.n;
      g.pairs = cf.pairs;
      g.seed = cf.seed;
      auto ge = do_geometry(spec, g, geo_params);
      report["certify"] = std::move(c.body);
      report["oracle"] = std::move(o.body);
      report["geometry"] = std::move(ge.body);
      params = {{"certify", cert_params}, {"oracle", oracle_params}, {"geometry", geo_params}};
      code = (c.code == kExitOk && o.code == kExitOk) ? kExitOk : kExitNegative;
    }
    report["parameters"] = params;
    report["exit_code"] = code;
    if (common.timing) {
      const std::chrono::duration<double> dt = std::chrono::steady_clock::now() - start;
      report["wall_time_s"] = dt.count();
    }
    const std::string text = detail::canonical_dump(report) + "\n";
    if (!common.json_path.empty()) write_atomic(common.json_path, text);
    out << text;
    return code;
  } catch (const Error& e) {
    print_error(err, to_string(e.code()), e.what());
    return exit_code_for(e.code());
  } catch (const std::exception& e) {
    print_error(err, "internal", e.what());
    return kExitInternal;
  }
}

}  // namespace uniharm::cli
