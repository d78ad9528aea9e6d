#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "germdet/errors.hpp"
#include "germdet/jetlin.hpp"
#include "germdet/oracle.hpp"
#include "germdet/poly_io.hpp"
#include "germdet/report.hpp"
#include "germdet/request.hpp"

namespace py = pybind11;
using namespace germdet;

namespace {

JetContext context_for(const std::string& field, const std::vector<std::string>& vars, int degree) {
  return JetContext{parse_field(field), static_cast<int>(vars.size()), degree};
}

// Single request as a JSON document; parse failures also come back as documents.
std::string run_request(const std::vector<std::string>& argv, bool timing) {
  int code = 0;
  try {
    AnalysisRequest r = parse_request(argv);
    if (r.command == Command::Batch) throw Error(ErrorCode::UnsupportedCombination, "use run_cli for batch");
    r.timing = timing;
    return run(r).report.dump();
  } catch (const std::exception& e) {
    return error_document(e, &code).dump();
  }
}

}  // namespace

PYBIND11_MODULE(_germdet, m) {
  py::register_exception<Error>(m, "EngineError");

  m.def("version", &engine_version);
  m.def("run_request", &run_request, py::arg("argv"), py::arg("timing") = false);
  m.def(
      "run_cli",
      [](const std::vector<std::string>& argv) {
        CliResult r = run_cli(argv);
        return py::make_tuple(r.exit_code, r.output);
      },
      py::arg("argv"));
  m.def(
      "format_polynomial",
      [](const std::string& text, const std::vector<std::string>& vars, const std::string& field, int degree) {
        return format_polynomial(parse_polynomial(text, vars, context_for(field, vars, degree)), vars);
      },
      py::arg("text"), py::arg("vars"), py::arg("field") = "QQ", py::arg("degree") = 12);
  m.def(
      "colength",
      [](const std::vector<std::string>& gens, const std::vector<std::string>& vars, const std::string& field,
         int degree) {
        JetContext ctx = context_for(field, vars, degree);
        std::vector<Jet> js;
        for (const auto& g : gens) js.push_back(parse_polynomial(g, vars, ctx));
        ColengthResult c = colength(js, FiltrationSpec::madic(ctx.nvars), degree);
        std::vector<std::string> basis;
        for (const auto& mono : c.basis) basis.push_back(format_polynomial(Jet::monomial(ctx, mono), vars));
        py::dict d;
        d["finite"] = c.finite;
        d["value"] = c.value;
        d["basis"] = basis;
        return d;
      },
      py::arg("gens"), py::arg("vars"), py::arg("field") = "QQ", py::arg("degree") = 12);
  m.def(
      "brute_force_determinacy",
      [](const std::string& poly, const std::string& field, int degree, const std::string& group) {
        JetContext ctx = context_for(field, {"x"}, degree);
        Jet f = parse_polynomial(poly, {"x"}, ctx);
        GroupSpec g = group == "contact" ? GroupSpec::contact(1) : GroupSpec::right();
        OracleResult r = brute_force_determinacy(f, g, degree);
        py::dict d;
        d["order"] = r.order;
        d["stable"] = r.stable;
        d["history"] = r.history;
        d["group_size"] = r.group_size;
        d["orbit_size"] = r.orbit_size;
        return d;
      },
      py::arg("poly"), py::arg("field") = "Fp:2", py::arg("degree") = 12, py::arg("group") = "right");
}
