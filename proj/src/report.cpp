#include "germdet/report.hpp"

#include <chrono>
#include <fstream>
#include <future>
#include <map>
#include <sstream>

#include "germdet/errors.hpp"
#include "germdet/oracle.hpp"
#include "germdet/orbit.hpp"
#include "germdet/poly_io.hpp"

namespace germdet {

#ifndef GERMDET_VERSION
#define GERMDET_VERSION "0.0.0"
#endif

std::string engine_version() { return GERMDET_VERSION; }

namespace {

Json header() {
  Json j;
  j["schema_version"] = kReportSchemaVersion;
  j["engine"] = {{"name", "germdet"}, {"version", engine_version()}};
  return j;
}

Json opt(const std::optional<int>& v) { return v ? Json(*v) : Json(nullptr); }

Json poly_list(const JetVector& v, const std::vector<std::string>& vars) {
  Json a = Json::array();
  for (const auto& j : v) a.push_back(format_polynomial(j, vars));
  return a;
}

Json matrix_json(const JetMatrix& m, const std::vector<std::string>& vars) {
  Json rows = Json::array();
  for (int r = 0; r < m.rows; ++r) {
    Json row = Json::array();
    for (int c = 0; c < m.cols; ++c) row.push_back(format_polynomial(m.at(r, c), vars));
    rows.push_back(std::move(row));
  }
  return rows;
}

std::string filtration_name(const FiltrationSpec& spec) {
  switch (spec.kind()) {
    case FiltrationKind::MAdic: return "m-adic";
    case FiltrationKind::Weighted: return "weighted";
    case FiltrationKind::Chain: return "chain";
  }
  return "";
}

Json request_echo(const AnalysisRequest& r) {
  Json j;
  j["command"] = command_name(r.command);
  j["field"] = r.field.name();
  j["vars"] = r.vars;
  j["shape"] = r.shape == GermShape::Function ? "function" : r.shape == GermShape::Map ? "map" : "matrix";
  j["germ"] = poly_list(r.germ, r.vars);
  j["rows"] = r.rows;
  j["cols"] = r.cols;
  j["group"] = r.group.name();
  j["filtration"] = r.filtration.describe(r.vars);
  j["filtration_kind"] = filtration_name(r.filtration);
  j["degree"] = r.degree;
  j["search_cap"] = opt(r.search_cap);
  j["relative"] = poly_list(r.group.relative_ideal, r.vars);
  j["quotient"] = poly_list(r.group.quotient_ideal, r.vars);
  if (r.command == Command::Orbit) {
    j["perturbation"] = poly_list(r.perturbation, r.vars);
    j["mode"] = r.mode ? Json(mode_name(*r.mode)) : Json(nullptr);
  }
  return j;
}

void colength_fields(Json& j, const std::string& key, const ColengthResult& c) {
  if (c.finite) {
    j[key] = c.value;
    j[key + "_status"] = "finite";
    j[key + "_lower_bound"] = nullptr;
  } else {
    j[key] = nullptr;
    j[key + "_status"] = "not_stabilized";
    j[key + "_lower_bound"] = c.value;
  }
}

std::string verdict_of(const DeterminacyReport& rep, std::string* reason) {
  if (rep.map && rep.map->obstructed) {
    *reason = rep.map->reason;
    return "obstructed";
  }
  if (rep.determinacy_order) return "determined";
  if (rep.n_inf.found) {
    *reason = "colon condition fails";
    return "bound_unavailable";
  }
  *reason = "no N found up to " + std::to_string(rep.n_inf.cap);
  return "not_found";
}

void analysis_fields(Json& j, const DeterminacyReport& rep) {
  j["degree"] = rep.degree;
  j["ord_z"] = opt(rep.ord_z);
  j["N_inf"] = opt(rep.n_inf.found);
  j["N_inf_status"] = rep.n_inf.found ? "found" : "not_found";
  j["search_cap"] = rep.n_inf.cap;
  j["exact"] = rep.n_inf.exact;
  j["mode"] = mode_name(rep.mode);
  j["determinacy_order"] = opt(rep.determinacy_order);
  std::string reason;
  j["verdict"] = verdict_of(rep, &reason);
  j["reason"] = reason.empty() ? Json(nullptr) : Json(reason);
  if (rep.milnor_tjurina) {
    colength_fields(j, "mu", rep.milnor_tjurina->mu);
    colength_fields(j, "tau", rep.milnor_tjurina->tau);
    j["mu_bound"] = opt(rep.milnor_tjurina->mu_bound);
    j["tau_bound"] = opt(rep.milnor_tjurina->tau_bound);
  } else {
    for (const char* k : {"mu", "tau"}) {
      j[k] = nullptr;
      j[std::string(k) + "_status"] = "not_computed";
      j[std::string(k) + "_lower_bound"] = nullptr;
    }
    j["mu_bound"] = nullptr;
    j["tau_bound"] = nullptr;
  }
  j["stability"] = {{"status", rep.stability.level ? "annihilated" : "not_up_to"},
                    {"n", opt(rep.stability.level)},
                    {"cap", rep.stability.cap}};
  if (rep.map) {
    j["map_indeterminacy"] = {{"verdict", rep.map->obstructed ? "obstructed" : "finitely_determined_possible"},
                              {"reason", rep.map->reason.empty() ? Json(nullptr) : Json(rep.map->reason)},
                              {"rank", rep.map->rank},
                              {"note", rep.map->note.empty() ? Json(nullptr) : Json(rep.map->note)}};
  } else {
    j["map_indeterminacy"] = nullptr;
  }
  j["tangent_generators"] = rep.tangent_generators;
  const auto& c = rep.certificate;
  j["certificate"] = {{"colon_condition_holds", c.colon_condition_holds},
                      {"der1_into_msq", c.der1_into_msq},
                      {"der_absorption_level", opt(c.der_absorption_level)},
                      {"m_primary", c.m_primary}};
}

Json increment_json(const Increment& inc, const std::vector<std::string>& vars) {
  Json j;
  j["xi"] = poly_list(inc.xi.coeffs, vars);
  if (inc.unit) j["unit"] = matrix_json(*inc.unit, vars);
  if (inc.left) j["left"] = matrix_json(*inc.left, vars);
  if (inc.right) j["right"] = matrix_json(*inc.right, vars);
  return j;
}

Json witness_json(const OrbitWitness& w, const std::vector<std::string>& vars) {
  Json j;
  j["phi"] = poly_list(w.element.phi, vars);
  if (w.element.unit) j["unit"] = matrix_json(*w.element.unit, vars);
  if (w.element.left) j["left"] = matrix_json(*w.element.left, vars);
  if (w.element.right) j["right"] = matrix_json(*w.element.right, vars);
  j["degree"] = w.degree;
  j["mode"] = mode_name(w.mode);
  j["factors"] = w.factors.size();
  Json steps = Json::array();
  for (const auto& s : w.steps) {
    Json st;
    st["degree"] = s.degree;
    st["level"] = s.level;
    st["window_start"] = s.window_start;
    st["residual_order_after"] = opt(s.residual_after);
    st["increment"] = increment_json(s.increment, vars);
    steps.push_back(std::move(st));
  }
  j["steps"] = std::move(steps);
  return j;
}

void diagnostics_field(Json& j, const AnalysisRequest& r, const std::vector<std::string>& more) {
  Json d = Json::array();
  for (const auto& s : r.diagnostics) d.push_back(s);
  for (const auto& s : more) d.push_back(s);
  j["diagnostics"] = std::move(d);
}

}  // namespace

Json error_document(const std::exception& e, int* exit_code) {
  Json j = header();
  j["status"] = "error";
  Json err;
  if (const auto* pe = dynamic_cast<const ParseError*>(&e)) {
    err["code"] = std::string(error_code_name(pe->code()));
    err["message"] = pe->what();
    err["line"] = pe->line();
    err["column"] = pe->column();
    if (exit_code) *exit_code = 2;
  } else if (const auto* ge = dynamic_cast<const Error*>(&e)) {
    err["code"] = std::string(error_code_name(ge->code()));
    err["message"] = ge->what();
    if (exit_code) *exit_code = 1;
  } else {
    err["code"] = "InternalError";
    err["message"] = e.what();
    if (exit_code) *exit_code = 1;
  }
  j["error"] = std::move(err);
  return j;
}

RunResult run(const AnalysisRequest& r) {
  auto start = std::chrono::steady_clock::now();
  RunResult out;
  try {
    Json j = header();
    j["status"] = "ok";
    j["request"] = request_echo(r);
    DeterminacyReport rep = determinacy_order(r.germ, r.group, r.filtration, r.degree, r.search_cap);
    analysis_fields(j, rep);
    std::vector<std::string> diags = rep.diagnostics;

    if (r.command == Command::Orbit) {
      Mode mode = r.mode.value_or(mode_for(r.field));
      OrbitSolver solver(r.germ, r.group, r.filtration, r.degree);
      SolveOutcome res = solver.solve(r.perturbation, mode, rep.n_inf.found);
      Json o;
      o["solver_mode"] = mode_name(mode);
      o["perturbation_order"] = opt(filt_order(r.perturbation, r.filtration));
      o["outcome"] = res.success ? "witness" : "failed";
      o["verified"] = res.success ? verify_witness(r.germ, r.perturbation, res.witness, r.group) : false;
      o["failed_degree"] = res.success ? Json(nullptr) : Json(res.failed_degree);
      o["tag"] = res.tag.empty() ? Json(nullptr) : Json(res.tag);
      o["witness"] = res.success ? witness_json(res.witness, r.vars) : Json(nullptr);
      o["residual"] = res.success ? Json(nullptr) : poly_list(res.residual, r.vars);
      j["orbit"] = std::move(o);
    }
    if (r.command == Command::Oracle) {
      OracleResult orc = brute_force_determinacy(r.germ.front(), r.group, r.degree);
      Json hist = Json::array();
      for (const auto& [d, e] : orc.history) hist.push_back({{"degree", d}, {"order", e}});
      j["oracle"] = {{"order", orc.order},
                     {"notion", "exact over the prime field, jet level"},
                     {"stable", orc.stable},
                     {"verdict", orc.stable ? "determined" : "not_determined_within_degree"},
                     {"history", std::move(hist)},
                     {"group_size", orc.group_size},
                     {"orbit_size", orc.orbit_size}};
      if (rep.determinacy_order && orc.order > *rep.determinacy_order)
        diags.push_back("oracle order exceeds the engine bound");
    }
    diagnostics_field(j, r, diags);
    if (r.timing) {
      double ms = std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - start).count();
      j["timing"] = {{"elapsed_ms", ms}};
    }
    out.report = std::move(j);
    out.exit_code = 0;
  } catch (const std::exception& e) {
    out.report = error_document(e, &out.exit_code);
    out.exit_code = 1;
  }
  return out;
}

std::string render_text(const Json& report) {
  std::ostringstream os;
  for (auto it = report.begin(); it != report.end(); ++it) {
    const Json& v = it.value();
    if (v.is_object() && it.key() != "engine") {
      os << it.key() << ":\n";
      for (auto jt = v.begin(); jt != v.end(); ++jt) {
        os << "  " << jt.key() << ": ";
        if (jt.value().is_string()) os << jt.value().get<std::string>();
        else os << jt.value().dump();
        os << "\n";
      }
    } else {
      os << it.key() << ": ";
      if (v.is_string()) os << v.get<std::string>();
      else os << v.dump();
      os << "\n";
    }
  }
  return os.str();
}

namespace {

struct Entry {
  int line = 0;
  std::vector<std::string> tokens;
  std::optional<std::string> parse_error;
};

std::vector<Entry> corpus_entries(const std::string& text) {
  std::vector<Entry> out;
  std::size_t first = text.find_first_not_of(" \t\r\n");
  if (first != std::string::npos && text[first] == '[') {
    Json doc = Json::parse(text, nullptr, false);
    if (doc.is_discarded() || !doc.is_array()) throw ParseError(1, 1, "corpus JSON is not a list");
    int idx = 0;
    for (const auto& e : doc) {
      Entry en;
      en.line = ++idx;
      if (e.is_string()) {
        try {
          en.tokens = tokenize_command_line(e.get<std::string>(), idx);
        } catch (const ParseError& pe) {
          en.parse_error = pe.what();
        }
      } else if (e.is_array() && std::all_of(e.begin(), e.end(), [](const Json& t) { return t.is_string(); })) {
        for (const auto& t : e) en.tokens.push_back(t.get<std::string>());
      } else {
        en.parse_error = "corpus entry must be a command string or a list of strings";
      }
      out.push_back(std::move(en));
    }
    return out;
  }
  std::istringstream is(text);
  std::string line;
  int no = 0;
  while (std::getline(is, line)) {
    ++no;
    std::size_t b = line.find_first_not_of(" \t\r");
    if (b == std::string::npos || line[b] == '#') continue;
    Entry en;
    en.line = no;
    try {
      en.tokens = tokenize_command_line(line, no);
    } catch (const ParseError& pe) {
      en.parse_error = pe.what();
    }
    out.push_back(std::move(en));
  }
  return out;
}

Json run_entry(const Entry& en, bool timing) {
  Json body;
  int code = 0;
  if (en.parse_error) {
    body = error_document(ParseError(en.line, 1, *en.parse_error), &code);
  } else {
    try {
      AnalysisRequest r = parse_request(en.tokens);
      if (r.command == Command::Batch) throw ParseError(en.line, 1, "nested batch entries are not allowed");
      r.timing = timing;
      body = run(r).report;
    } catch (const std::exception& e) {
      body = error_document(e, &code);
      if (body["error"].contains("line")) body["error"]["line"] = en.line;
    }
  }
  Json j;
  j["entry"] = nullptr;
  j["line"] = en.line;
  for (auto it = body.begin(); it != body.end(); ++it) j[it.key()] = it.value();
  return j;
}

}  // namespace

CliResult run_batch(const std::string& corpus_text, bool json, bool timing, int jobs) {
  CliResult out;
  std::vector<Entry> entries;
  try {
    entries = corpus_entries(corpus_text);
  } catch (const std::exception& e) {
    Json doc = error_document(e, &out.exit_code);
    out.output = json ? doc.dump() + "\n" : render_text(doc);
    return out;
  }
  std::vector<Json> reports(entries.size());
  if (jobs <= 1) {
    for (std::size_t i = 0; i < entries.size(); ++i) reports[i] = run_entry(entries[i], timing);
  } else {
    for (std::size_t base = 0; base < entries.size(); base += static_cast<std::size_t>(jobs)) {
      std::vector<std::future<Json>> fs;
      for (std::size_t i = base; i < std::min(entries.size(), base + static_cast<std::size_t>(jobs)); ++i)
        fs.push_back(std::async(std::launch::async, [&, i] { return run_entry(entries[i], timing); }));
      for (std::size_t k = 0; k < fs.size(); ++k) reports[base + k] = fs[k].get();
    }
  }
  std::map<std::string, int> verdicts;
  int errors = 0;
  std::ostringstream os;
  for (std::size_t i = 0; i < reports.size(); ++i) {
    Json& rep = reports[i];
    rep["entry"] = i + 1;
    if (rep["status"] == "error") ++errors;
    else ++verdicts[rep["verdict"].get<std::string>()];
    if (json) os << rep.dump() << "\n";
    else os << "== entry " << i + 1 << " (line " << rep["line"].get<int>() << ")\n" << render_text(rep);
  }
  Json v = Json::object();
  for (const auto& [k, n] : verdicts) v[k] = n;
  Json summary = {{"summary",
                   {{"entries", reports.size()},
                    {"reports", reports.size() - static_cast<std::size_t>(errors)},
                    {"errors", errors},
                    {"had_errors", errors > 0},
                    {"verdicts", std::move(v)}}}};
  if (json) os << summary.dump() << "\n";
  else os << "== summary\n" << render_text(summary["summary"]);
  out.output = os.str();
  out.exit_code = 0;
  return out;
}

CliResult run_cli(const std::vector<std::string>& args) {
  CliResult out;
  bool json = std::find(args.begin(), args.end(), "--json") != args.end();
  AnalysisRequest r;
  try {
    r = parse_request(args);
  } catch (const std::exception& e) {
    Json doc = error_document(e, &out.exit_code);
    out.exit_code = 2;
    out.output = json ? doc.dump() + "\n" : render_text(doc);
    return out;
  }
  if (r.command == Command::Batch) {
    std::ifstream in(r.corpus, std::ios::binary);
    if (!in) {
      Json doc = error_document(Error(ErrorCode::InvalidArgument, "cannot read corpus file " + r.corpus), nullptr);
      out.exit_code = 1;
      out.output = json ? doc.dump() + "\n" : render_text(doc);
      return out;
    }
    std::ostringstream ss;
    ss << in.rdbuf();
    return run_batch(ss.str(), r.json, r.timing, r.jobs);
  }
  RunResult res = run(r);
  out.exit_code = res.exit_code;
  out.output = r.json ? res.report.dump() + "\n" : render_text(res.report);
  return out;
}

}  // namespace germdet
