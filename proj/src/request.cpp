#include "germdet/request.hpp"

#include <algorithm>
#include <cctype>
#include <cstdlib>
#include <set>

#include "CLI11.hpp"
#include "germdet/errors.hpp"
#include "germdet/poly_io.hpp"

namespace germdet {

std::string command_name(Command c) {
  switch (c) {
    case Command::Analyze: return "analyze";
    case Command::Orbit: return "orbit";
    case Command::Oracle: return "oracle";
    case Command::Batch: return "batch";
  }
  return "";
}

namespace {

bool is_identifier(std::string_view s) {
  if (s.empty() || !(std::isalpha(static_cast<unsigned char>(s[0])) || s[0] == '_')) return false;
  return std::all_of(s.begin(), s.end(),
                     [](char c) { return std::isalnum(static_cast<unsigned char>(c)) || c == '_'; });
}

std::string trim(std::string_view s) {
  auto b = s.find_first_not_of(" \t\r\n");
  if (b == std::string_view::npos) return "";
  auto e = s.find_last_not_of(" \t\r\n");
  return std::string(s.substr(b, e - b + 1));
}

[[noreturn]] void fail(const std::string& msg, int column = 1) { throw ParseError(1, column, msg); }

int parse_int(const std::string& text, const std::string& what) {
  std::size_t pos = 0;
  long v = 0;
  try {
    v = std::stol(text, &pos);
  } catch (const std::exception&) {
    fail(what + " must be an integer, got '" + text + "'");
  }
  if (pos != text.size()) fail(what + " must be an integer, got '" + text + "'", static_cast<int>(pos) + 1);
  if (v < 0 || v > 1000000) fail(what + " out of range");
  return static_cast<int>(v);
}

// Identifiers in order of first appearance.
std::vector<std::string> scan_identifiers(const std::vector<std::string>& texts) {
  std::vector<std::string> out;
  for (const auto& t : texts) {
    std::size_t i = 0;
    while (i < t.size()) {
      char c = t[i];
      if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') {
        std::size_t j = i;
        while (j < t.size() && (std::isalnum(static_cast<unsigned char>(t[j])) || t[j] == '_')) ++j;
        std::string id = t.substr(i, j - i);
        if (std::find(out.begin(), out.end(), id) == out.end()) out.push_back(id);
        i = j;
      } else if (std::isdigit(static_cast<unsigned char>(c))) {
        while (i < t.size() && std::isdigit(static_cast<unsigned char>(t[i]))) ++i;
      } else {
        ++i;
      }
    }
  }
  return out;
}

std::vector<std::string> infer_vars(const std::vector<std::string>& texts) {
  auto ids = scan_identifiers(texts);
  const std::vector<std::string> canon{"x", "y", "z", "w"};
  if (!ids.empty() && std::all_of(ids.begin(), ids.end(), [&](const std::string& s) {
        return std::find(canon.begin(), canon.end(), s) != canon.end();
      })) {
    std::vector<std::string> out;
    for (const auto& c : canon)
      if (std::find(ids.begin(), ids.end(), c) != ids.end()) out.push_back(c);
    return out;
  }
  if (ids.empty()) return {"x"};
  return ids;
}

std::vector<std::string> split_entries(const std::string& text, GermShape shape, int* rows, int* cols) {
  std::vector<std::string> out;
  if (shape == GermShape::Function) {
    out.push_back(trim(text));
    *rows = *cols = 1;
    return out;
  }
  if (shape == GermShape::Map) {
    for (auto& e : split_list(text, ',')) out.push_back(trim(e));
    *rows = static_cast<int>(out.size());
    *cols = 1;
    return out;
  }
  auto row_texts = split_list(text, ';');
  *rows = static_cast<int>(row_texts.size());
  *cols = -1;
  for (const auto& r : row_texts) {
    auto entries = split_list(r, ',');
    if (*cols < 0) *cols = static_cast<int>(entries.size());
    if (static_cast<int>(entries.size()) != *cols) fail("matrix rows have different lengths");
    for (auto& e : entries) out.push_back(trim(e));
  }
  return out;
}

Jet parse_entry(const std::string& text, const std::vector<std::string>& vars, const JetContext& ctx,
                std::vector<std::string>& diags) {
  if (text.empty()) fail("empty polynomial entry");
  Jet f = parse_polynomial(text, vars, ctx);
  JetContext wide = ctx;
  wide.cap = std::min(kMaxExponent, 2 * ctx.cap + 8);
  Jet g = parse_polynomial(text, vars, wide);
  if (g.with_cap(ctx.cap).size() != g.size()) {
    std::string msg = "terms of '" + text + "' above degree " + std::to_string(ctx.cap) + " were dropped";
    if (std::find(diags.begin(), diags.end(), msg) == diags.end()) diags.push_back(msg);
  }
  return f;
}

Monomial parse_monomial(const std::string& text, const std::vector<std::string>& vars) {
  JetContext ctx{Field::rationals(), static_cast<int>(vars.size()), 64};
  Jet f = parse_polynomial(text, vars, ctx);
  if (f.size() != 1 || !f.terms().begin()->second.is_one())
    fail("filtration generator '" + text + "' is not a monomial");
  return f.terms().begin()->first;
}

std::optional<int> env_max_degree() {
  const char* v = std::getenv("GERMDET_MAX_DEGREE");
  if (!v || !*v) return std::nullopt;
  try {
    int d = std::stoi(v);
    if (d >= 1) return d;
  } catch (const std::exception&) {
  }
  return std::nullopt;
}

}  // namespace

Field parse_field(std::string_view text) {
  std::string t = trim(text);
  if (t == "QQ" || t == "Q") return Field::rationals();
  std::string digits;
  if (t.rfind("Fp:", 0) == 0) digits = t.substr(3);
  else if (t.rfind("F_", 0) == 0) digits = t.substr(2);
  else if (t.rfind("GF", 0) == 0) digits = t.substr(2);
  else fail("unknown field '" + t + "' (expected QQ or Fp:p)");
  if (digits.empty() || !std::all_of(digits.begin(), digits.end(), [](char c) { return std::isdigit(static_cast<unsigned char>(c)); }))
    fail("field characteristic must be a positive integer, got '" + digits + "'", 4);
  if (digits.size() > 10) fail(digits + " is not prime", 4);
  std::uint64_t p = std::stoull(digits);
  if (!is_prime(p) || p >= (std::uint64_t{1} << 31)) fail(digits + " is not prime", 4);
  return Field::prime(p);
}

FiltrationSpec parse_filtration(std::string_view text, const std::vector<std::string>& vars) {
  std::string t = trim(text);
  const int n = static_cast<int>(vars.size());
  if (t == "m-adic" || t == "madic") return FiltrationSpec::madic(n);
  if (t.rfind("weighted:", 0) == 0) {
    std::vector<int> w;
    for (const auto& s : split_list(t.substr(9), ',')) w.push_back(parse_int(trim(s), "weight"));
    if (static_cast<int>(w.size()) != n)
      fail("weighted filtration needs " + std::to_string(n) + " weights", 10);
    for (int x : w)
      if (x < 1) fail("weights must be positive", 10);
    return FiltrationSpec::weighted(std::move(w));
  }
  if (t.rfind("chain:", 0) == 0) {
    std::vector<Monomial> i1, a;
    bool have_i1 = false, have_a = false;
    for (const auto& part : split_list(t.substr(6), ';')) {
      std::string p = trim(part);
      auto eq = p.find('=');
      if (eq == std::string::npos) fail("chain filtration parts look like I1=... and A=...", 7);
      std::string key = trim(p.substr(0, eq));
      auto& dest = key == "I1" ? i1 : a;
      if (key == "I1") have_i1 = true;
      else if (key == "A") have_a = true;
      else fail("unknown chain part '" + key + "'", 7);
      for (const auto& g : split_list(p.substr(eq + 1), ',')) dest.push_back(parse_monomial(trim(g), vars));
    }
    if (!have_i1 || !have_a) fail("chain filtration needs both I1= and A=", 7);
    return FiltrationSpec::chain(n, std::move(i1), std::move(a));
  }
  fail("unknown filtration '" + t + "' (expected m-adic, weighted:..., chain:I1=...;A=...)");
}

std::vector<std::string> tokenize_command_line(std::string_view line, int line_no) {
  std::vector<std::string> out;
  std::string cur;
  bool in_token = false;
  char quote = 0;
  int quote_col = 0;
  for (std::size_t i = 0; i < line.size(); ++i) {
    char c = line[i];
    if (quote) {
      if (c == quote) {
        quote = 0;
      } else if (c == '\\' && quote == '"' && i + 1 < line.size()) {
        cur.push_back(line[++i]);
      } else {
        cur.push_back(c);
      }
      continue;
    }
    if (c == '\'' || c == '"') {
      quote = c;
      quote_col = static_cast<int>(i) + 1;
      in_token = true;
    } else if (c == '\\' && i + 1 < line.size()) {
      cur.push_back(line[++i]);
      in_token = true;
    } else if (std::isspace(static_cast<unsigned char>(c))) {
      if (in_token) out.push_back(std::move(cur));
      cur.clear();
      in_token = false;
    } else {
      cur.push_back(c);
      in_token = true;
    }
  }
  if (quote) throw ParseError(line_no, quote_col, "unterminated quote");
  if (in_token) out.push_back(std::move(cur));
  return out;
}

AnalysisRequest parse_request(const std::vector<std::string>& args) {
  CLI::App app{"germdet"};
  std::string command, field = "QQ", vars, poly, map, matrix, group, filtration = "m-adic", perturb, mode;
  std::string relative, quotient, corpus;
  std::optional<int> degree, cap;
  bool json = false, no_timing = false;
  int jobs = 1;
  app.add_option("command", command)->required();
  app.add_option("corpus", corpus);
  app.add_option("--field", field);
  app.add_option("--vars", vars);
  app.add_option("--poly", poly);
  app.add_option("--map", map);
  app.add_option("--matrix", matrix);
  app.add_option("--group", group);
  app.add_option("--filtration", filtration);
  app.add_option("--degree", degree);
  app.add_option("--cap", cap);
  app.add_option("--perturb", perturb);
  app.add_option("--mode", mode);
  app.add_option("--relative", relative);
  app.add_option("--quotient", quotient);
  app.add_option("--jobs", jobs);
  app.add_flag("--json", json);
  app.add_flag("--no-timing", no_timing);
  try {
    std::vector<std::string> rev(args.rbegin(), args.rend());
    app.parse(rev);
  } catch (const CLI::ParseError& e) {
    throw ParseError(1, 1, e.what());
  }

  AnalysisRequest r;
  if (command == "analyze") r.command = Command::Analyze;
  else if (command == "orbit") r.command = Command::Orbit;
  else if (command == "oracle") r.command = Command::Oracle;
  else if (command == "batch") r.command = Command::Batch;
  else fail("unknown command '" + command + "' (expected analyze, orbit, oracle or batch)");
  r.json = json;
  r.timing = !no_timing;
  r.jobs = std::max(1, jobs);
  if (r.command == Command::Batch) {
    if (corpus.empty()) fail("batch needs a corpus file");
    r.corpus = corpus;
    return r;
  }
  if (!corpus.empty()) fail("unexpected argument '" + corpus + "'");

  r.field = parse_field(field);
  int given = !poly.empty() + !map.empty() + !matrix.empty();
  if (given != 1) fail("give exactly one of --poly, --map, --matrix");
  std::string germ_text = !poly.empty() ? poly : !map.empty() ? map : matrix;
  r.shape = !poly.empty() ? GermShape::Function : !map.empty() ? GermShape::Map : GermShape::Matrix;
  r.germ_text = split_entries(germ_text, r.shape, &r.rows, &r.cols);

  if (vars.empty()) {
    std::vector<std::string> texts = r.germ_text;
    if (!perturb.empty()) texts.push_back(perturb);
    r.vars = infer_vars(texts);
  } else {
    for (auto& v : split_list(vars, ',')) r.vars.push_back(trim(v));
  }
  std::set<std::string> seen;
  for (const auto& v : r.vars) {
    if (!is_identifier(v)) fail("'" + v + "' is not a valid variable name");
    if (!seen.insert(v).second) fail("variable '" + v + "' declared twice");
  }
  if (r.vars.size() > kMaxVars) fail("at most 8 variables are supported");

  r.filtration_text = trim(filtration);
  r.filtration = parse_filtration(filtration, r.vars);

  if (degree) {
    if (*degree < 1) fail("--degree must be positive");
    r.degree = *degree;
  } else {
    r.degree = std::max(cap ? 2 * *cap : 0, 12);
    if (r.command == Command::Oracle) r.degree = std::min(r.degree, 13);
  }
  if (auto mx = env_max_degree(); mx && r.degree > *mx) {
    r.diagnostics.push_back("degree cap lowered from " + std::to_string(r.degree) + " to " + std::to_string(*mx) +
                            " by GERMDET_MAX_DEGREE");
    r.degree = *mx;
  }
  if (r.degree > kMaxExponent) fail("degree cap above 255 is not supported");
  r.search_cap = cap;

  JetContext ctx{r.field, static_cast<int>(r.vars.size()), r.degree};
  for (const auto& e : r.germ_text) r.germ.push_back(parse_entry(e, r.vars, ctx, r.diagnostics));

  std::string g = group.empty() ? (r.shape == GermShape::Matrix ? "matrix" : "right") : trim(group);
  if (g == "right") {
    if (r.shape == GermShape::Matrix)
      throw Error(ErrorCode::UnsupportedCombination, "matrix germs use --group matrix");
    r.group = GroupSpec::right();
  } else if (g == "contact") {
    if (r.shape == GermShape::Matrix)
      throw Error(ErrorCode::UnsupportedCombination, "matrix germs use --group matrix");
    r.group = GroupSpec::contact(static_cast<int>(r.germ.size()));
  } else if (g == "matrix") {
    if (r.shape != GermShape::Matrix)
      throw Error(ErrorCode::UnsupportedCombination, "--group matrix needs a --matrix germ");
    r.group = GroupSpec::matrix(r.rows, r.cols);
  } else {
    fail("unknown group '" + g + "' (expected right, contact or matrix)");
  }
  if (!relative.empty()) {
    for (auto& e : split_list(relative, ',')) {
      r.relative_text.push_back(trim(e));
      r.group.relative_ideal.push_back(parse_entry(r.relative_text.back(), r.vars, ctx, r.diagnostics));
    }
  }
  if (!quotient.empty()) {
    for (auto& e : split_list(quotient, ',')) {
      r.quotient_text.push_back(trim(e));
      r.group.quotient_ideal.push_back(parse_entry(r.quotient_text.back(), r.vars, ctx, r.diagnostics));
    }
  }

  if (!mode.empty()) {
    if (mode == "lie") r.mode = Mode::LieType;
    else if (mode == "weak-lie") r.mode = Mode::WeakLieType;
    else fail("unknown mode '" + mode + "' (expected lie or weak-lie)");
  }

  if (r.command == Command::Orbit) {
    if (perturb.empty()) fail("orbit needs --perturb");
    if (!r.group.relative_ideal.empty() || !r.group.quotient_ideal.empty())
      throw Error(ErrorCode::UnsupportedCombination, "orbit solving rejects relative and quotient ideals");
    int pr = 0, pc = 0;
    r.perturb_text = split_entries(perturb, r.shape, &pr, &pc);
    if (pr != r.rows || pc != r.cols) fail("perturbation shape differs from the germ shape");
    for (const auto& e : r.perturb_text) r.perturbation.push_back(parse_entry(e, r.vars, ctx, r.diagnostics));
  } else if (!perturb.empty()) {
    fail("--perturb is only valid for orbit");
  }
  if (r.command == Command::Oracle) {
    if (r.vars.size() != 1 || r.shape != GermShape::Function)
      throw Error(ErrorCode::UnsupportedCombination, "the oracle handles univariate functions only");
    if (r.field.is_rational() || r.field.characteristic() > 3)
      throw Error(ErrorCode::UnsupportedCombination, "the oracle runs over Fp:2 or Fp:3 only");
  }
  return r;
}

}  // namespace germdet
