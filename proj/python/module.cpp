#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <complex>
#include <sstream>
#include <vector>

#include "s2s/cli.hpp"
#include "s2s/diophantine.hpp"
#include "s2s/geometry.hpp"
#include "s2s/scene_io.hpp"
#include "s2s/twoscale.hpp"

namespace py = pybind11;
using namespace s2s;

namespace {

py::dict class_to_dict(const AngleClass& ac) {
  py::list ev;
  for (const EvidenceRow& r : ac.evidence) {
    py::dict d;
    d["n"] = r.n;
    d["log_q"] = r.log_q;
    d["nu"] = r.nu;
    d["ln_c"] = r.ln_c;
    ev.append(d);
  }
  py::dict out;
  out["verdict"] = to_string(ac.verdict);
  out["certified"] = ac.certified;
  out["liouville"] = ac.liouville;
  out["exp_liouville"] = ac.exp_liouville;
  out["super_exp"] = ac.super_exp;
  out["note"] = ac.note;
  out["evidence"] = ev;
  return out;
}

const char* frame_name(EvalFrame f) {
  switch (f) {
    case EvalFrame::Global: return "global";
    case EvalFrame::Outer: return "outer";
    default: return "inner";
  }
}

}  // namespace

PYBIND11_MODULE(_core, m) {
  m.doc() = "sector2scale core bindings";
  m.attr("__version__") = "1.0.0";

  py::register_exception<ConfigError>(m, "ConfigError", PyExc_ValueError);

  m.def(
      "run",
      [](const std::vector<std::string>& args) {
        std::ostringstream log;
        int code;
        try {
          code = s2s::run(parse_config(args), log);
        } catch (const ConfigError& e) {
          log << "config error: " << e.what() << "\n";
          code = 2;
        }
        return py::make_tuple(code, log.str());
      },
      py::arg("args"),
      "Run one CLI command, e.g. run(['sweep', '--scene', 'q.json', '--out', "
      "'o']). Returns (exit_code, log_text); artifacts land in the output "
      "directory.");

  m.def(
      "classify_angle",
      [](double omega, int depth) { return class_to_dict(classify(omega, depth)); },
      py::arg("omega"), py::arg("depth") = 40,
      "Continued-fraction evidence for the opening angle; never certified.");

  m.def(
      "classify_rational",
      [](long p, long q) {
        return class_to_dict(classify(LiouvilleCertificate::rational(p, q)));
      },
      py::arg("p"), py::arg("q"), "Certified classification of p/q.");

  m.def(
      "validate_scene",
      [](const std::string& path) {
        SceneFile sf = load_scene_file(path);
        ValidationReport rep = validate_pattern(sf.scene);
        py::list issues;
        for (const auto& is : rep.issues) {
          py::dict d;
          d["what"] = is.what;
          d["hole"] = is.hole;
          issues.append(d);
        }
        py::dict out;
        out["ok"] = rep.ok;
        out["issues"] = issues;
        return out;
      },
      py::arg("scene_path"), "Geometric admissibility report for a scene file.");

  m.def(
      "u0_value",
      [](const std::string& path, double x, double y, double ppu) {
        SceneFile sf = load_scene_file(path);
        UnperturbedSolution u0 = solve_unperturbed(sf.scene, sf.f, ppu);
        return u0.u0(Complex(x, y));
      },
      py::arg("scene_path"), py::arg("x"), py::arg("y"), py::arg("ppu") = 12.0,
      "Unperturbed sector solution at one interior point.");

  m.def(
      "convergence_rows",
      [](const std::string& path, const std::vector<double>& eps,
         const std::vector<double>& cutoffs, int probes, double ppu,
         int refit) {
        SceneFile sf = load_scene_file(path);
        StudyParams p;
        p.ppu_A = ppu;
        p.ppu_B = std::max(4.0, 2.0 * ppu / 3.0);
        p.ppu_Q = ppu;
        p.refit = refit;
        StudyTable t = convergence_study(sf.scene, sf.f, eps, cutoffs, probes, p);
        py::list rows;
        for (const StudyRow& r : t.rows) {
          py::dict d;
          d["eps"] = r.eps;
          d["order"] = r.order;
          d["frame"] = frame_name(r.frame);
          d["sup_error"] = r.sup_error;
          d["slope"] = r.slope;
          rows.append(d);
        }
        return rows;
      },
      py::arg("scene_path"), py::arg("eps"), py::arg("cutoffs"),
      py::arg("probes") = 6, py::arg("ppu") = 8.0, py::arg("refit") = 12,
      "Truncation study rows (eps, order, frame, sup_error, slope).");
}
