#include "germdet/poly_io.hpp"

#include <algorithm>
#include <cctype>

#include "germdet/errors.hpp"

namespace germdet {

namespace {

class Parser {
 public:
  Parser(std::string_view text, const std::vector<std::string>& vars, const JetContext& ctx)
      : s_(text), vars_(vars), ctx_(ctx) {}

  Jet run() {
    Jet out(ctx_);
    skip_ws();
    if (at_end()) fail("empty polynomial");
    bool first = true;
    while (!at_end()) {
      bool negative = false;
      if (peek() == '+' || peek() == '-') {
        negative = peek() == '-';
        ++pos_;
        skip_ws();
      } else if (!first) {
        fail("expected '+' or '-'");
      }
      auto [mono, coeff] = term();
      out.add_term(mono, negative ? -coeff : coeff);
      first = false;
      skip_ws();
    }
    return out;
  }

 private:
  std::pair<Monomial, Scalar> term() {
    Monomial mono(ctx_.nvars);
    Scalar coeff = Scalar::one(ctx_.field);
    if (std::isdigit(static_cast<unsigned char>(peek()))) {
      coeff = number();
      skip_ws();
      if (peek() == '*') {
        ++pos_;
        skip_ws();
        factor(mono);
      } else if (is_ident_start(peek())) {
        factor(mono);
      } else {
        return {mono, coeff};
      }
    } else {
      factor(mono);
    }
    skip_ws();
    while (peek() == '*') {
      ++pos_;
      skip_ws();
      factor(mono);
      skip_ws();
    }
    return {mono, coeff};
  }

  Scalar number() {
    mpz_class num = digits();
    skip_ws();
    if (peek() == '/') {
      ++pos_;
      skip_ws();
      std::size_t at = pos_;
      mpz_class den = digits();
      if (den == 0) fail_at(at, "zero denominator");
      return Scalar(ctx_.field, mpq_class(num, den));
    }
    return Scalar(ctx_.field, mpq_class(num));
  }

  mpz_class digits() {
    std::size_t start = pos_;
    while (std::isdigit(static_cast<unsigned char>(peek()))) ++pos_;
    if (start == pos_) fail("expected an integer");
    return mpz_class(std::string(s_.substr(start, pos_ - start)));
  }

  void factor(Monomial& mono) {
    std::size_t start = pos_;
    if (!is_ident_start(peek())) fail("expected a variable");
    while (is_ident_char(peek())) ++pos_;
    std::string name(s_.substr(start, pos_ - start));
    int idx = -1;
    for (std::size_t i = 0; i < vars_.size(); ++i)
      if (vars_[i] == name) idx = static_cast<int>(i);
    if (idx < 0)
      throw Error(ErrorCode::UnknownVariable,
                  "unknown variable '" + name + "' at column " + std::to_string(start + 1));
    int power = 1;
    skip_ws();
    if (peek() == '^') {
      ++pos_;
      skip_ws();
      std::size_t at = pos_;
      mpz_class e = digits();
      if (e > kMaxExponent) fail_at(at, "exponent too large");
      power = static_cast<int>(e.get_si());
    }
    int total = mono[idx] + power;
    if (total > kMaxExponent) fail_at(start, "exponent too large");
    mono.set(idx, total);
  }

  static bool is_ident_start(char c) {
    return std::isalpha(static_cast<unsigned char>(c)) || c == '_';
  }
  static bool is_ident_char(char c) {
    return std::isalnum(static_cast<unsigned char>(c)) || c == '_';
  }
  bool at_end() const { return pos_ >= s_.size(); }
  char peek() const { return at_end() ? '\0' : s_[pos_]; }
  void skip_ws() {
    while (!at_end() && std::isspace(static_cast<unsigned char>(s_[pos_]))) ++pos_;
  }
  [[noreturn]] void fail(const std::string& msg) const { fail_at(pos_, msg); }
  [[noreturn]] void fail_at(std::size_t at, const std::string& msg) const {
    throw ParseError(1, static_cast<int>(at) + 1, msg);
  }

  std::string_view s_;
  const std::vector<std::string>& vars_;
  JetContext ctx_;
  std::size_t pos_ = 0;
};

std::string monomial_text(const Monomial& m, const std::vector<std::string>& vars) {
  std::string out;
  for (int i = 0; i < m.nvars(); ++i) {
    if (m[i] == 0) continue;
    if (!out.empty()) out += '*';
    out += vars[static_cast<std::size_t>(i)];
    if (m[i] > 1) out += '^' + std::to_string(m[i]);
  }
  return out;
}

}  // namespace

Jet parse_polynomial(std::string_view text, const std::vector<std::string>& vars,
                     const JetContext& ctx) {
  if (static_cast<int>(vars.size()) != ctx.nvars)
    throw Error(ErrorCode::MismatchedContext, "variable list length differs from nvars");
  return Parser(text, vars, ctx).run();
}

std::string format_polynomial(const Jet& f, const std::vector<std::string>& vars) {
  if (f.is_zero()) return "0";
  std::vector<const std::pair<const Monomial, Scalar>*> order;
  for (const auto& t : f.terms()) order.push_back(&t);
  // Stored ascending; flip each degree block so the first variable leads.
  std::size_t i = 0;
  while (i < order.size()) {
    std::size_t j = i;
    while (j < order.size() && order[j]->first.degree() == order[i]->first.degree()) ++j;
    std::reverse(order.begin() + static_cast<long>(i), order.begin() + static_cast<long>(j));
    i = j;
  }
  std::string out;
  for (std::size_t k = 0; k < order.size(); ++k) {
    const auto& [m, c] = *order[k];
    bool neg = c.is_negative();
    Scalar mag = neg ? -c : c;
    if (k == 0) {
      if (neg) out += '-';
    } else {
      out += neg ? " - " : " + ";
    }
    std::string mono = monomial_text(m, vars);
    if (mono.empty()) {
      out += mag.to_string();
    } else if (mag.is_one()) {
      out += mono;
    } else {
      out += mag.to_string() + '*' + mono;
    }
  }
  return out;
}

std::vector<std::string> split_list(std::string_view text, char sep) {
  std::vector<std::string> out;
  std::string cur;
  auto flush = [&] {
    std::size_t b = cur.find_first_not_of(" \t");
    std::size_t e = cur.find_last_not_of(" \t");
    out.push_back(b == std::string::npos ? std::string() : cur.substr(b, e - b + 1));
    cur.clear();
  };
  for (char c : text) {
    if (c == sep) {
      flush();
    } else {
      cur += c;
    }
  }
  flush();
  return out;
}

std::vector<std::string> default_variable_names(int nvars) {
  static const char* base[] = {"x", "y", "z", "w"};
  std::vector<std::string> out;
  for (int i = 0; i < nvars; ++i) out.push_back(i < 4 ? base[i] : "x" + std::to_string(i));
  return out;
}

}  // namespace germdet
