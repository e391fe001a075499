#include "s2s/cli.hpp"

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <map>
#include <set>
#include <sstream>

#include <boost/program_options.hpp>
#include <nlohmann/json.hpp>

#include "s2s/bie_system.hpp"
#include "s2s/cornerseries.hpp"
#include "s2s/diophantine.hpp"
#include "s2s/geometry.hpp"
#include "s2s/potential.hpp"
#include "s2s/scene_io.hpp"
#include "s2s/twoscale.hpp"

namespace po = boost::program_options;
namespace fs = std::filesystem;
using nlohmann::json;

namespace s2s {
namespace {

const std::set<std::string> kCommands = {"validate", "classify-angle",
                                         "corner-expand", "solve",
                                         "sweep", "xi"};

std::string fmt12(double v) {
  char buf[48];
  std::snprintf(buf, sizeof buf, "%.12g", v);
  return buf;
}

void write_text(const fs::path& p, const std::string& body) {
  std::ofstream f(p, std::ios::binary | std::ios::trunc);
  if (!f) throw std::runtime_error("cannot write " + p.string());
  f << body;
}

void write_json(const fs::path& p, const json& j) {
  write_text(p, j.dump(2) + "\n");
}

std::vector<double> parse_list(const std::string& s, const char* what) {
  std::vector<double> out;
  std::stringstream ss(s);
  std::string tok;
  while (std::getline(ss, tok, ',')) {
    try {
      size_t used = 0;
      double v = std::stod(tok, &used);
      while (used < tok.size() && std::isspace((unsigned char)tok[used]))
        ++used;
      if (used != tok.size()) throw std::invalid_argument(tok);
      out.push_back(v);
    } catch (const std::exception&) {
      throw ConfigError(std::string("bad number '") + tok + "' in --" + what);
    }
  }
  if (out.empty())
    throw ConfigError(std::string("empty list for --") + what);
  return out;
}

std::vector<double> json_list(const json& v, const std::string& key) {
  if (!v.is_array() || v.empty())
    throw ConfigError("params." + key + " must be a non-empty array");
  std::vector<double> out;
  for (const auto& e : v) {
    if (!e.is_number())
      throw ConfigError("params." + key + " entries must be numbers");
    out.push_back(e.get<double>());
  }
  return out;
}

int json_int(const json& v, const std::string& key) {
  if (!v.is_number_integer())
    throw ConfigError("params." + key + " must be an integer");
  return v.get<int>();
}

double json_num(const json& v, const std::string& key) {
  if (!v.is_number())
    throw ConfigError("params." + key + " must be a number");
  return v.get<double>();
}

void apply_params(RunConfig& cfg, const json& params,
                  const std::set<std::string>& flagged) {
  for (auto it = params.begin(); it != params.end(); ++it) {
    const std::string& k = it.key();
    if (flagged.count(k)) continue;  // explicit flag wins
    if (k == "depth")            cfg.depth = json_int(*it, k);
    else if (k == "order")       cfg.order = json_int(*it, k);
    else if (k == "eps")         cfg.eps = json_list(*it, k);
    else if (k == "cutoffs")     cfg.cutoffs = json_list(*it, k);
    else if (k == "ppu")         cfg.ppu = json_num(*it, k);
    else if (k == "delta_omega") cfg.delta_omega = json_num(*it, k);
    else if (k == "gamma_max")   cfg.gamma_max = json_num(*it, k);
    else if (k == "probes")      cfg.probes = json_int(*it, k);
    else if (k == "refit")       cfg.refit = json_int(*it, k);
    else
      throw ConfigError("unknown scene params key '" + k + "'");
  }
}

void check_ranges(const RunConfig& cfg) {
  if (cfg.depth < 1 || cfg.depth > 100000)
    throw ConfigError("depth must be in [1, 100000]");
  if (cfg.order < -1)
    throw ConfigError("order must be >= 0 (or -1 to derive it)");
  for (double e : cfg.eps)
    if (!(e > 0) || !(e < 1))
      throw ConfigError("eps values must lie in (0, 1)");
  for (double c : cfg.cutoffs)
    if (!(c >= 0))
      throw ConfigError("cutoffs must be >= 0");
  if (!(cfg.ppu >= 1) || !(cfg.ppu <= 200))
    throw ConfigError("ppu must be in [1, 200]");
  if (!(cfg.delta_omega > 0))
    throw ConfigError("delta-omega must be positive");
  if (!(cfg.gamma_max >= 0))
    throw ConfigError("gamma-max must be >= 0");
  if (cfg.probes < 1 || cfg.probes > 10000)
    throw ConfigError("probes must be in [1, 10000]");
  if (cfg.refit < 2 || cfg.refit > 4096)
    throw ConfigError("refit must be in [2, 4096]");
}

// ---- classify-angle ---------------------------------------------------------

BigInt json_big(const json& v, const std::string& key) {
  if (v.is_number_integer()) return BigInt(v.get<long long>());
  if (v.is_string()) {
    try {
      return BigInt(v.get<std::string>());
    } catch (const std::exception&) {
      throw ConfigError("certificate field '" + key + "' is not an integer");
    }
  }
  throw ConfigError("certificate field '" + key +
                    "' must be an integer or a decimal string");
}

void require_cert_keys(const json& j, const std::set<std::string>& allowed) {
  for (auto it = j.begin(); it != j.end(); ++it)
    if (!allowed.count(it.key()))
      throw ConfigError("unknown certificate key '" + it.key() + "'");
}

LiouvilleCertificate parse_certificate(const json& j, int default_depth) {
  if (!j.is_object() || !j.contains("kind"))
    throw ConfigError("certificate must be an object with a 'kind' key");
  const std::string kind = j.at("kind").is_string()
                               ? j.at("kind").get<std::string>()
                               : throw ConfigError("certificate kind must be a string");
  int depth = j.contains("depth") ? json_int(j.at("depth"), "depth")
                                  : default_depth;
  if (kind == "rational") {
    require_cert_keys(j, {"kind", "p", "q"});
    if (!j.contains("p") || !j.contains("q"))
      throw ConfigError("rational certificate needs p and q");
    return LiouvilleCertificate::rational(json_big(j.at("p"), "p"),
                                          json_big(j.at("q"), "q"));
  }
  if (kind == "bounded_quotients") {
    require_cert_keys(j, {"kind", "bound"});
    if (!j.contains("bound"))
      throw ConfigError("bounded_quotients certificate needs a bound");
    return LiouvilleCertificate::bounded_quotients(
        json_int(j.at("bound"), "bound"));
  }
  if (kind == "factorial_series") {
    require_cert_keys(j, {"kind", "base", "depth"});
    long base = j.contains("base") ? json_int(j.at("base"), "base") : 10;
    return LiouvilleCertificate::factorial_series(base, depth);
  }
  if (kind == "tower_series") {
    require_cert_keys(j, {"kind", "tower_base", "base", "b0", "depth"});
    long tb = j.contains("tower_base") ? json_int(j.at("tower_base"), "tower_base") : 2;
    long base = j.contains("base") ? json_int(j.at("base"), "base") : 2;
    BigInt b0 = j.contains("b0") ? json_big(j.at("b0"), "b0") : BigInt(2);
    return LiouvilleCertificate::tower_series(tb, base, b0, depth);
  }
  throw ConfigError("unknown certificate kind '" + kind + "'");
}

json class_to_json(const AngleClass& ac) {
  json ev = json::array();
  for (const EvidenceRow& r : ac.evidence)
    ev.push_back({{"n", r.n}, {"log_q", r.log_q}, {"nu", r.nu},
                  {"ln_c", r.ln_c}});
  return json{{"verdict", to_string(ac.verdict)},
              {"certified", ac.certified},
              {"liouville", ac.liouville},
              {"exp_liouville", ac.exp_liouville},
              {"super_exp", ac.super_exp},
              {"note", ac.note},
              {"evidence", ev}};
}

int run_classify(const RunConfig& cfg, const fs::path& out, std::ostream& log) {
  AngleClass ac;
  json input;
  if (!cfg.cert.empty()) {
    std::ifstream f(cfg.cert);
    if (!f) throw ConfigError("cannot open certificate file: " + cfg.cert);
    json j;
    try {
      j = json::parse(f);
    } catch (const json::parse_error& e) {
      throw ConfigError("malformed JSON in " + cfg.cert + ": " + e.what());
    }
    ac = classify(parse_certificate(j, cfg.depth));
    input = {{"certificate", j}};
  } else {
    if (!std::isfinite(cfg.omega) || cfg.omega <= 0)
      throw ConfigError("classify-angle needs --omega <positive value> or --cert <file>");
    ac = classify(cfg.omega, cfg.depth);
    input = {{"omega", cfg.omega}, {"depth", cfg.depth}};
  }
  json j = class_to_json(ac);
  j["input"] = input;
  fs::path p = out / "classify.json";
  write_json(p, j);
  log << "classify-angle: " << to_string(ac.verdict)
      << (ac.certified ? " (certified)" : " (evidence only)") << " -> "
      << p.string() << "\n";
  return 0;
}

// ---- validate ---------------------------------------------------------------

int run_validate(const SceneFile& sf, const fs::path& out, std::ostream& log) {
  ValidationReport rep = validate_pattern(sf.scene);
  json issues = json::array();
  for (const ValidationIssue& is : rep.issues)
    issues.push_back({{"what", is.what}, {"hole", is.hole}});
  json j{{"ok", rep.ok}, {"issues", issues},
         {"scene", scene_to_json(sf.scene)}};
  fs::path p = out / "validate.json";
  write_json(p, j);
  if (rep.ok)
    log << "validate: ok -> " << p.string() << "\n";
  else
    log << "validate: " << rep.issues.size() << " issue(s) -> " << p.string()
        << "\n";
  return rep.ok ? 0 : 1;
}

// ---- corner-expand ----------------------------------------------------------

json gamma_to_json(const GammaKey& g, const CornerExpansion& ce) {
  json j;
  if (g.kind == GammaKey::Kind::Frac) {
    j["type"] = "frac";
    j["k"] = g.k;
  } else {
    j["type"] = "pair";
    j["a1"] = g.a1;
    j["a2"] = g.a2;
    if (g.a2 == 0 && ce.idx.is_resonant(g.a1)) j["resonant"] = true;
  }
  j["exponent"] = g.abs(ce.omega);
  return j;
}

int run_corner(const RunConfig& cfg, const SceneFile& sf, const fs::path& out,
               std::ostream& log) {
  UnperturbedSolution u0 = solve_unperturbed(sf.scene, sf.f, cfg.ppu);
  double gmax = cfg.gamma_max > 0 ? cfg.gamma_max : 6.0;
  CornerExpansion ce = u0.expand(cfg.delta_omega, gmax);
  json terms = json::array();
  for (const auto& [g, a] : ce.a) {
    json t = gamma_to_json(g, ce);
    t["re"] = a.real();
    t["im"] = a.imag();
    terms.push_back(t);
  }
  json j{{"omega", ce.omega.value},
         {"kappa", ce.omega.kappa()},
         {"gamma_max", ce.gamma_max},
         {"delta_omega", cfg.delta_omega},
         {"rho1p", ce.rho1p},
         {"fitC", ce.fitC},
         {"fitM", ce.fitM},
         {"terms", terms}};
  fs::path p = out / "corner.json";
  write_json(p, j);
  log << "corner-expand: " << terms.size() << " terms, gamma_max "
      << fmt12(ce.gamma_max) << " -> " << p.string() << "\n";
  return 0;
}

// ---- shared expansion pipeline (solve, sweep share the derivations) ---------

struct Pipeline {
  TransformedScene tsc;
  UnperturbedSolution u0;
  CornerExpansion corner;
  PanelMesh mesh_b;
  QMeshLayout q;
  TraceFamily traces;
  TwoScaleExpansion ts;
};

StudyParams study_params(const RunConfig& cfg) {
  StudyParams p;
  p.delta_omega = cfg.delta_omega;
  double max_cut =
      *std::max_element(cfg.cutoffs.begin(), cfg.cutoffs.end());
  p.gamma_pad = cfg.gamma_max > 0 ? std::max(0.5, cfg.gamma_max - max_cut)
                                  : 3.0;
  p.taylor_order = cfg.order;
  p.ppu_A = cfg.ppu;
  p.ppu_B = std::max(4.0, 2.0 * cfg.ppu / 3.0);
  p.ppu_Q = cfg.ppu;
  p.refit = cfg.refit;
  return p;
}

Pipeline build_pipeline(const RunConfig& cfg, const SceneFile& sf) {
  const StudyParams p = study_params(cfg);
  double max_cut =
      *std::max_element(cfg.cutoffs.begin(), cfg.cutoffs.end());
  Pipeline pl{transform_scene(sf.scene, p.refit),
              solve_unperturbed(sf.scene, sf.f, p.ppu_A),
              {}, {}, {}, {}, {}};
  double gamma_max = max_cut + p.gamma_pad;
  pl.corner = pl.u0.expand(p.delta_omega, gamma_max);
  pl.mesh_b = mesh_outer(pl.tsc, p.ppu_B);
  pl.q = mesh_pattern(pl.tsc, p.ppu_Q);
  int order = p.taylor_order >= 0
                  ? p.taylor_order
                  : std::max(2, int(std::ceil(max_cut / pl.tsc.kappa)));
  TaylorBlocks tb = taylor_blocks(pl.tsc, pl.mesh_b, pl.q, order);
  pl.traces = push_traces(pl.corner, pl.tsc, pl.q);
  CornerExpansion deep =
      gamma_max >= 8.0 ? pl.corner : pl.u0.expand(p.delta_omega, 8.0);
  double r_switch = 0.3 * pl.u0.rho1p;
  UnperturbedSolution u0 = pl.u0;
  pl.ts = two_scale_coeffs(pl.traces, tb, order, gamma_max,
                           [u0, deep, r_switch](Complex t) {
                             if (std::abs(t) < r_switch)
                               return deep.eval_u0(t, deep.gamma_max);
                             return u0.u0(t);
                           });
  return pl;
}

int run_solve(const RunConfig& cfg, const SceneFile& sf, const fs::path& out,
              std::ostream& log) {
  Pipeline pl = build_pipeline(cfg, sf);
  double eps = cfg.eps.front();
  double eta = pl.tsc.eta_of_eps(eps);

  // Direct reference: the hole-scale system at this eta, driven by the fully
  // summed pushed trace.
  BlockSystem sys = assemble_M(pl.tsc, eta, pl.mesh_b, pl.q);
  std::vector<double> psi(pl.mesh_b.size(), 0.0);
  std::vector<double> data(pl.q.mesh.size(), 0.0);
  for (const TraceSlot& s : pl.traces.slots) {
    double w = eval_E(s.gamma, eps, pl.corner.idx);
    for (size_t i = 0; i < data.size(); ++i) data[i] -= w * s.psi[i];
  }
  SolutionPair ref = solve_direct(sys, psi, data);

  double r_lo = 1.3 * pl.ts.hull_P * eps;
  double r_hi = 0.9 * pl.u0.rho1p;
  if (!(r_lo < r_hi))
    throw std::runtime_error("probe annulus is empty; eps too large");
  std::vector<Complex> probes =
      study_probes(r_lo, r_hi, sf.scene.omega.value, cfg.probes);

  std::vector<double> cuts = cfg.cutoffs;
  std::sort(cuts.begin(), cuts.end());
  std::string csv = "frame,cutoff,re_t,im_t,direct,expansion,abs_diff\n";
  double sup = 0;
  for (double cut : cuts) {
    for (Complex t : probes) {
      double direct = pl.ts.u0_at(t) +
                      ref.eval_slow(conformal_power_map(t, pl.tsc.kappa));
      ExpansionValue ev =
          eval_expansion(pl.ts, eps, t, EvalFrame::Global, cut);
      double d = std::abs(direct - ev.value);
      if (cut == cuts.back()) sup = std::max(sup, d);
      csv += "global," + fmt12(cut) + "," + fmt12(t.real()) + "," +
             fmt12(t.imag()) + "," + fmt12(direct) + "," + fmt12(ev.value) +
             "," + fmt12(d) + "\n";
    }
  }
  fs::path pcsv = out / "solve.csv";
  fs::path pman = out / "manifest.json";
  write_text(pcsv, csv);
  write_text(pman, expansion_manifest(pl.ts) + "\n");
  log << "solve: eps " << fmt12(eps) << ", " << pl.ts.terms.size()
      << " series terms, sup |direct - expansion| " << fmt12(sup) << " at cutoff "
      << fmt12(cuts.back()) << " over " << probes.size() << " probes -> "
      << pcsv.string() << ", " << pman.string() << "\n";
  return 0;
}

int run_sweep(const RunConfig& cfg, const SceneFile& sf, const fs::path& out,
              std::ostream& log) {
  StudyTable table = convergence_study(sf.scene, sf.f, cfg.eps, cfg.cutoffs,
                                       cfg.probes, study_params(cfg));
  fs::path p = out / "sweep.csv";
  write_text(p, table.csv());
  log << "sweep: " << table.rows.size() << " rows (" << cfg.eps.size()
      << " eps x " << cfg.cutoffs.size() << " cutoffs x frames) -> "
      << p.string() << "\n";
  return 0;
}

// ---- xi ---------------------------------------------------------------------

int run_xi(const RunConfig& cfg, const SceneFile& sf, const fs::path& out,
           std::ostream& log) {
  TransformedScene tsc = transform_scene(sf.scene, cfg.refit);
  double hull = tsc.pattern_radius();
  json pairs = json::array();
  std::string csv = "pair,re_x,im_x,xi\n";
  int pair_id = 0;
  for (size_t c = 0; c < tsc.components.size(); ++c) {
    const TransformedComponent& comp = tsc.components[c];
    if (comp.kind != ComponentKind::MirrorPair) {
      pairs.push_back({{"component", (int)c},
                       {"note", "axis-symmetric component carries no dipole pair"}});
      continue;
    }
    PanelMesh m = discretize({comp.upper_curve, comp.upper_curve.reflected()},
                             cfg.ppu);
    ExteriorField xi = solve_xi(m, 0, 1);

    // Flux circle around the upper hole, strictly above the axis.
    Complex ctr = 0;
    double wsum = 0, maxr = 0;
    for (int i = 0; i < m.size(); ++i)
      if (m.comp[i] == 0) {
        ctr += m.w[i] * m.x[i];
        wsum += m.w[i];
      }
    ctr /= wsum;
    for (int i = 0; i < m.size(); ++i)
      if (m.comp[i] == 0) maxr = std::max(maxr, std::abs(m.x[i] - ctr));
    double r_enc = 0.5 * (maxr + ctr.imag());
    double flux = xi.flux(ctr, r_enc);

    for (double rf : {1.5, 2.5, 4.0}) {
      for (int k = 0; k < 16; ++k) {
        double th = 2 * pi * (k + 0.5) / 16;
        Complex x = std::polar(rf * hull, th);
        csv += std::to_string(pair_id) + "," + fmt12(x.real()) + "," +
               fmt12(x.imag()) + "," + fmt12(xi.eval(x)) + "\n";
      }
    }
    pairs.push_back({{"component", (int)c},
                     {"alpha", xi.alpha},
                     {"cond_est", xi.cond_est},
                     {"fitC", xi.fitC},
                     {"flux", flux},
                     {"flux_negative", flux < 0}});
    log << "xi: pair " << pair_id << " alpha " << fmt12(xi.alpha) << ", flux "
        << fmt12(flux) << (flux < 0 ? " (negative)" : " (NOT negative)")
        << "\n";
    ++pair_id;
  }
  json j{{"pattern_radius", hull}, {"pairs", pairs}};
  fs::path pj = out / "xi.json";
  fs::path pc = out / "xi.csv";
  write_json(pj, j);
  write_text(pc, csv);
  log << "xi: " << pair_id << " pair(s) -> " << pc.string() << ", "
      << pj.string() << "\n";
  return 0;
}

}  // namespace

RunConfig parse_config(const std::vector<std::string>& args) {
  if (args.empty())
    throw ConfigError(
        "no command; expected one of validate, classify-angle, corner-expand, "
        "solve, sweep, xi");
  RunConfig cfg;
  cfg.command = args[0];
  if (!kCommands.count(cfg.command))
    throw ConfigError("unknown command '" + cfg.command +
                      "'; expected one of validate, classify-angle, "
                      "corner-expand, solve, sweep, xi");

  po::options_description desc("options");
  desc.add_options()
      ("scene", po::value<std::string>(), "scene JSON file")
      ("out", po::value<std::string>()->default_value("."), "output directory")
      ("depth", po::value<int>()->default_value(cfg.depth),
       "continued-fraction depth")
      ("order", po::value<int>()->default_value(cfg.order),
       "Taylor order in eta (-1: derive)")
      ("eps", po::value<std::string>()->default_value("0.1,0.15,0.2"),
       "comma list of scale factors")
      ("cutoffs", po::value<std::string>()->default_value("0,2,4"),
       "comma list of exponent cutoffs")
      ("ppu", po::value<double>()->default_value(cfg.ppu),
       "panels per unit length")
      ("delta-omega", po::value<double>()->default_value(cfg.delta_omega),
       "resonance window half-width")
      ("gamma-max", po::value<double>()->default_value(cfg.gamma_max),
       "corner expansion depth (0: derive)")
      ("probes", po::value<int>()->default_value(cfg.probes),
       "probe points per frame")
      ("refit", po::value<int>()->default_value(cfg.refit),
       "chords per segment under the power map")
      ("omega", po::value<double>(), "opening angle (classify-angle)")
      ("cert", po::value<std::string>(), "certificate file (classify-angle)");

  po::variables_map vm;
  try {
    std::vector<std::string> rest(args.begin() + 1, args.end());
    po::store(po::command_line_parser(rest).options(desc).run(), vm);
    po::notify(vm);
  } catch (const po::error& e) {
    throw ConfigError(e.what());
  }

  std::set<std::string> flagged;
  auto flag_set = [&](const char* name) {
    return vm.count(name) && !vm[name].defaulted();
  };
  if (flag_set("depth")) flagged.insert("depth");
  if (flag_set("order")) flagged.insert("order");
  if (flag_set("eps")) flagged.insert("eps");
  if (flag_set("cutoffs")) flagged.insert("cutoffs");
  if (flag_set("ppu")) flagged.insert("ppu");
  if (flag_set("delta-omega")) flagged.insert("delta_omega");
  if (flag_set("gamma-max")) flagged.insert("gamma_max");
  if (flag_set("probes")) flagged.insert("probes");
  if (flag_set("refit")) flagged.insert("refit");

  if (vm.count("scene")) {
    cfg.scene_path = vm["scene"].as<std::string>();
    SceneFile sf = load_scene_file(cfg.scene_path);
    apply_params(cfg, sf.params, flagged);
  }
  cfg.out_dir = vm["out"].as<std::string>();
  if (flagged.count("depth")) cfg.depth = vm["depth"].as<int>();
  if (flagged.count("order")) cfg.order = vm["order"].as<int>();
  if (flagged.count("eps"))
    cfg.eps = parse_list(vm["eps"].as<std::string>(), "eps");
  if (flagged.count("cutoffs"))
    cfg.cutoffs = parse_list(vm["cutoffs"].as<std::string>(), "cutoffs");
  if (flagged.count("ppu")) cfg.ppu = vm["ppu"].as<double>();
  if (flagged.count("delta_omega"))
    cfg.delta_omega = vm["delta-omega"].as<double>();
  if (flagged.count("gamma_max")) cfg.gamma_max = vm["gamma-max"].as<double>();
  if (flagged.count("probes")) cfg.probes = vm["probes"].as<int>();
  if (flagged.count("refit")) cfg.refit = vm["refit"].as<int>();
  if (vm.count("omega")) cfg.omega = vm["omega"].as<double>();
  if (vm.count("cert")) cfg.cert = vm["cert"].as<std::string>();

  check_ranges(cfg);

  if (cfg.command == "classify-angle") {
    if (cfg.cert.empty() && !(std::isfinite(cfg.omega) && cfg.omega > 0))
      throw ConfigError(
          "classify-angle needs --omega <positive value> or --cert <file>");
  } else if (cfg.scene_path.empty()) {
    throw ConfigError("command '" + cfg.command + "' requires --scene <file>");
  }
  return cfg;
}

int run(const RunConfig& cfg, std::ostream& log) {
  fs::path out(cfg.out_dir);
  std::error_code ec;
  fs::create_directories(out, ec);
  if (ec) throw ConfigError("cannot create output directory " + out.string());

  if (cfg.command == "classify-angle") return run_classify(cfg, out, log);

  SceneFile sf = load_scene_file(cfg.scene_path);
  if (cfg.command == "validate") return run_validate(sf, out, log);
  if (cfg.command == "corner-expand") return run_corner(cfg, sf, out, log);
  if (cfg.command == "solve") return run_solve(cfg, sf, out, log);
  if (cfg.command == "sweep") return run_sweep(cfg, sf, out, log);
  if (cfg.command == "xi") return run_xi(cfg, sf, out, log);
  throw ConfigError("unknown command '" + cfg.command + "'");
}

int cli_main(int argc, char** argv) {
  std::vector<std::string> args(argv + 1, argv + argc);
  try {
    RunConfig cfg = parse_config(args);
    return run(cfg, std::cout);
  } catch (const ConfigError& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
}

}  // namespace s2s
