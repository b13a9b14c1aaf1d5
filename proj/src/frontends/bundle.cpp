#include <cstdio>
#include <fstream>
#include <json.hpp>

#include "gtrs/error.hpp"
#include "gtrs/frontends.hpp"
#include "gtrs/mmio.hpp"

namespace gtrs {

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

[[noreturn]] void bad(const fs::path& file, const std::string& what) {
  fail(ErrorKind::InvalidInput, file.string() + ": " + what);
}

SparseSymmetric read_matrix(const fs::path& file) {
  if (!fs::exists(file)) bad(file, "file not found");
  try {
    return read_matrix_market(file);
  } catch (const Error& e) {
    bad(file, e.what());
  }
}

double real_field(const json& j, const char* key, const fs::path& file) {
  if (!j.contains(key)) bad(file, std::string("missing field '") + key + "'");
  const json& v = j.at(key);
  if (!v.is_number()) bad(file, std::string("field '") + key + "' must be a number");
  const double x = v.get<double>();
  if (!std::isfinite(x)) bad(file, std::string("field '") + key + "' is not finite");
  return x;
}

Vec vector_field(const json& j, const char* key, std::size_t n, const fs::path& file) {
  if (!j.contains(key)) bad(file, std::string("missing field '") + key + "'");
  const json& v = j.at(key);
  if (!v.is_array()) bad(file, std::string("field '") + key + "' must be an array");
  if (v.size() != n)
    bad(file, std::string("field '") + key + "' has length " + std::to_string(v.size()) + ", expected " +
                  std::to_string(n));
  Vec out;
  out.reserve(n);
  for (const json& e : v) {
    if (!e.is_number()) bad(file, std::string("field '") + key + "' has a non-numeric entry");
    out.push_back(e.get<double>());
  }
  return out;
}

// Reals are written by hand so every value carries 17 significant digits.
std::string real(double x) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  return buf;
}

std::string array(const Vec& v) {
  std::string s = "[";
  for (std::size_t i = 0; i < v.size(); ++i) s += (i ? ", " : "") + real(v[i]);
  return s + "]";
}

void write_text(const fs::path& file, const std::string& text) {
  std::ofstream out(file);
  require(static_cast<bool>(out), ErrorKind::InvalidInput, file.string() + ": cannot open for writing");
  out << text;
}

}  // namespace

Bundle read_bundle(const fs::path& dir) {
  require(fs::is_directory(dir), ErrorKind::InvalidInput, dir.string() + ": not a directory");
  const fs::path manifest = dir / "problem.json";
  if (!fs::exists(manifest)) bad(manifest, "file not found");
  json j;
  try {
    std::ifstream in(manifest);
    j = json::parse(in);
  } catch (const json::exception& e) {
    bad(manifest, std::string("malformed JSON: ") + e.what());
  }
  if (!j.is_object()) bad(manifest, "top level must be an object");
  if (!j.contains("n") || !j.at("n").is_number_unsigned()) bad(manifest, "field 'n' must be a positive integer");
  const std::size_t n = j.at("n").get<std::size_t>();
  if (n == 0) bad(manifest, "field 'n' must be a positive integer");

  const SparseSymmetric q1 = read_matrix(dir / "Q1.mtx");
  const SparseSymmetric q2 = read_matrix(dir / "Q2.mtx");
  if (q1.n() != n) bad(dir / "Q1.mtx", "dimension " + std::to_string(q1.n()) + " does not match n");
  if (q2.n() != n) bad(dir / "Q2.mtx", "dimension " + std::to_string(q2.n()) + " does not match n");

  Bundle b;
  const std::string kind = j.value("kind", std::string("gtrs"));
  if (kind == "ip") {
    IntervalProblem ip;
    ip.A = q1;
    ip.B = q2;
    ip.a = vector_field(j, "b1", n, manifest);
    ip.c1 = real_field(j, "c1", manifest);
    ip.c2 = real_field(j, "c2", manifest);
    if (ip.c1 > ip.c2) bad(manifest, "field 'c1' exceeds 'c2'");
    b.ip = std::move(ip);
    return b;
  }
  if (kind != "gtrs") bad(manifest, "field 'kind' must be \"ip\" or absent");

  std::string sense = "ineq";
  if (j.contains("sense")) {
    if (!j.at("sense").is_string()) bad(manifest, "field 'sense' must be \"ineq\" or \"eq\"");
    sense = j.at("sense").get<std::string>();
  }
  if (sense != "ineq" && sense != "eq") bad(manifest, "field 'sense' must be \"ineq\" or \"eq\"");

  b.problem.f1 = {q1, vector_field(j, "b1", n, manifest), 0.0};
  b.problem.f2 = {q2, vector_field(j, "b2", n, manifest), real_field(j, "c", manifest)};
  b.problem.sense = sense == "eq" ? ConstraintSense::Equality : ConstraintSense::Inequality;
  try {
    b.problem.validate();
  } catch (const Error& e) {
    bad(manifest, e.what());
  }
  return b;
}

void write_bundle(const fs::path& dir, const GtrsProblem& problem) {
  problem.validate();
  require(problem.f1.c == 0.0, ErrorKind::InvalidInput, "write_bundle: objective constant must be zero");
  fs::create_directories(dir);
  write_matrix_market(dir / "Q1.mtx", problem.f1.Q);
  write_matrix_market(dir / "Q2.mtx", problem.f2.Q);
  write_text(dir / "problem.json",
             "{\n  \"n\": " + std::to_string(problem.n()) + ",\n  \"sense\": \"" +
                 (problem.sense == ConstraintSense::Equality ? "eq" : "ineq") + "\",\n  \"b1\": " +
                 array(problem.f1.b) + ",\n  \"b2\": " + array(problem.f2.b) + ",\n  \"c\": " +
                 real(problem.f2.c) + "\n}\n");
}

void write_bundle(const fs::path& dir, const IntervalProblem& ip) {
  require(ip.a.size() == ip.n() && ip.B.n() == ip.n(), ErrorKind::InvalidInput, "write_bundle: dimension mismatch");
  fs::create_directories(dir);
  write_matrix_market(dir / "Q1.mtx", ip.A);
  write_matrix_market(dir / "Q2.mtx", ip.B);
  write_text(dir / "problem.json", "{\n  \"kind\": \"ip\",\n  \"n\": " + std::to_string(ip.n()) +
                                       ",\n  \"b1\": " + array(ip.a) + ",\n  \"b2\": " + array(Vec(ip.n(), 0.0)) +
                                       ",\n  \"c\": 0,\n  \"c1\": " + real(ip.c1) + ",\n  \"c2\": " + real(ip.c2) +
                                       "\n}\n");
}

}  // namespace gtrs
