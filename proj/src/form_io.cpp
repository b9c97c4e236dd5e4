#include "cubeq/form_io.hpp"

#include <openssl/sha.h>

#include <fstream>
#include <json.hpp>
#include <sstream>

namespace cubeq {

namespace {

using nlohmann::json;

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw InvalidInput("cannot open " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

json parse_json(std::string_view text) {
  try {
    return json::parse(text);
  } catch (const json::parse_error& e) {
    throw InvalidInput(std::string("malformed JSON: ") + e.what());
  }
}

int read_n(const json& doc) {
  if (!doc.is_object() || !doc.contains("n") || !doc["n"].is_number_integer()) {
    throw InvalidInput("form file needs an integer field \"n\"");
  }
  const auto n = doc["n"].get<std::int64_t>();
  if (n < 1 || n > 64) throw InvalidInput("n out of range");
  return static_cast<int>(n);
}

std::vector<Term> read_terms(const json& arr, int n) {
  if (!arr.is_array()) throw InvalidInput("terms must be an array");
  std::vector<Term> terms;
  for (const auto& t : arr) {
    if (!t.is_object() || !t.contains("e") || !t.contains("c")) {
      throw InvalidInput("each term needs fields \"e\" and \"c\"");
    }
    if (!t["c"].is_number_integer()) throw InvalidInput("term coefficient must be an integer");
    const auto& e = t["e"];
    if (!e.is_array() || static_cast<int>(e.size()) != n) throw InvalidInput("exponent vector must have length n");
    Term term;
    for (const auto& v : e) {
      if (!v.is_number_integer()) throw InvalidInput("exponents must be integers");
      const auto x = v.get<std::int64_t>();
      if (x < 0 || x > 1000) throw InvalidInput("exponent out of range");
      term.exponents.push_back(static_cast<int>(x));
    }
    term.coeff = t["c"].get<std::int64_t>();
    terms.push_back(std::move(term));
  }
  return terms;
}

}  // namespace

CubicForm parse_form(std::string_view json_text) {
  const json doc = parse_json(json_text);
  const int n = read_n(doc);
  if (!doc.contains("terms")) throw InvalidInput("form file needs a \"terms\" array");
  return CubicForm(n, read_terms(doc["terms"], n));
}

CubicForm load_form(const std::string& path) { return parse_form(read_file(path)); }

std::string canonical_form_json(const CubicForm& form) {
  json terms = json::array();
  for (const auto& t : form.terms()) terms.push_back({{"c", t.coeff}, {"e", t.exponents}});
  const json doc = {{"n", form.n()}, {"terms", terms}};
  return doc.dump();
}

FormHash form_hash(const CubicForm& form) {
  const std::string text = canonical_form_json(form);
  FormHash h{};
  SHA256(reinterpret_cast<const unsigned char*>(text.data()), text.size(), h.data());
  return h;
}

std::string hex(const FormHash& hash) {
  static const char* digits = "0123456789abcdef";
  std::string s;
  for (auto b : hash) {
    s.push_back(digits[b >> 4]);
    s.push_back(digits[b & 15]);
  }
  return s;
}

std::vector<IntPolynomial> parse_polynomials(std::string_view json_text) {
  const json doc = parse_json(json_text);
  const int n = read_n(doc);
  if (!doc.contains("polys") || !doc["polys"].is_array()) throw InvalidInput("polynomial file needs a \"polys\" array");
  const auto& polys = doc["polys"];
  if (polys.empty() || polys.size() > 2) throw InvalidInput("supply one or two polynomials");
  std::vector<IntPolynomial> out;
  for (const auto& p : polys) out.emplace_back(n, read_terms(p, n));
  return out;
}

std::vector<IntPolynomial> load_polynomials(const std::string& path) { return parse_polynomials(read_file(path)); }

}  // namespace cubeq
