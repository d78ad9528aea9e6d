#pragma once

#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "germdet/determinacy.hpp"
#include "germdet/filtration.hpp"
#include "germdet/jet.hpp"
#include "germdet/tangent.hpp"

namespace germdet {

enum class Command { Analyze, Orbit, Oracle, Batch };
enum class GermShape { Function, Map, Matrix };

std::string command_name(Command c);

struct AnalysisRequest {
  Command command = Command::Analyze;
  Field field = Field::rationals();
  std::vector<std::string> vars;
  GermShape shape = GermShape::Function;
  int rows = 1;
  int cols = 1;
  // Row-major entry texts as given.
  std::vector<std::string> germ_text;
  JetVector germ;
  GroupSpec group;
  std::string filtration_text = "m-adic";
  FiltrationSpec filtration = FiltrationSpec::madic(1);
  int degree = 12;
  std::optional<int> search_cap;
  std::vector<std::string> perturb_text;
  JetVector perturbation;
  std::optional<Mode> mode;
  std::vector<std::string> relative_text;
  std::vector<std::string> quotient_text;
  bool json = false;
  bool timing = true;
  std::string corpus;
  int jobs = 1;
  std::vector<std::string> diagnostics;
};

// Arguments exclude the program name. Errors: ParseError, UnknownVariable,
// UnsupportedCombination.
AnalysisRequest parse_request(const std::vector<std::string>& args);

// Shell-like splitting with single/double quotes and backslash escapes.
std::vector<std::string> tokenize_command_line(std::string_view line, int line_no = 1);

FiltrationSpec parse_filtration(std::string_view text, const std::vector<std::string>& vars);
Field parse_field(std::string_view text);

}  // namespace germdet
