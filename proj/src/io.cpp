#include "cocyc/io.hpp"

#include <cstdint>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <iterator>
#include <sstream>

#include "json_text.hpp"

namespace cocyc {

namespace {

Json parse_document(const std::string& text) {
  Json doc = Json::parse(text, nullptr, /*allow_exceptions=*/false);
  if (doc.is_discarded()) fail(Err::MalformedInput, "not valid JSON");
  if (!doc.is_object()) fail(Err::MalformedInput, "top level must be an object");
  const auto ver = doc.find("format_version");
  if (ver == doc.end() || !ver->is_number_integer() ||
      ver->get<long long>() != kFormatVersion)
    fail(Err::MalformedInput, "format_version must be the integer 1");
  return doc;
}

const Json& member(const Json& obj, const char* key) {
  const auto it = obj.find(key);
  if (it == obj.end())
    fail(Err::MalformedInput, std::string("missing field '") + key + "'");
  return *it;
}

long long int_member(const Json& obj, const char* key) {
  const Json& v = member(obj, key);
  if (!v.is_number_integer())
    fail(Err::MalformedInput, std::string("field '") + key + "' must be an integer");
  return v.get<long long>();
}

double number_at(const Json& arr, size_t i, const char* what) {
  const Json& v = arr[i];
  if (!v.is_number())
    fail(Err::MalformedInput, std::string(what) + " entries must be numbers");
  return v.get<double>();
}

// Row-major d x d matrix from a flat numeric array.
Mat matrix_member(const Json& flat, int d, const char* what) {
  if (!flat.is_array() || flat.size() != static_cast<size_t>(d) * static_cast<size_t>(d))
    fail(Err::MalformedInput,
         std::string(what) + " must be a flat row-major array of dim*dim numbers");
  Mat m(d, d);
  for (int r = 0; r < d; ++r)
    for (int c = 0; c < d; ++c)
      m(r, c) = number_at(flat, static_cast<size_t>(r * d + c), what);
  return m;
}

Json matrix_json(const Mat& m) {
  Json flat = Json::array();
  for (int r = 0; r < m.rows(); ++r)
    for (int c = 0; c < m.cols(); ++c) flat.push_back(m(r, c));
  return flat;
}

}  // namespace

std::string fnv1a_hex(const std::string& bytes) {
  std::uint64_t h = 14695981039346656037ULL;
  for (const char ch : bytes) {
    h ^= static_cast<unsigned char>(ch);
    h *= 1099511628211ULL;
  }
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
  return buf;
}

std::string read_input(const std::string& path) {
  if (path == "-") {
    std::ostringstream all;
    all << std::cin.rdbuf();
    return all.str();
  }
  std::ifstream in(path, std::ios::binary);
  if (!in) fail(Err::MalformedInput, "cannot read file '" + path + "'");
  return std::string(std::istreambuf_iterator<char>(in),
                     std::istreambuf_iterator<char>());
}

PeriodicCocycle parse_cocycle_file(const std::string& text) {
  const Json doc = parse_document(text);
  const long long dim = int_member(doc, "dim");
  const long long period = int_member(doc, "period");
  if (dim < 1 || dim > 64) fail(Err::MalformedInput, "dim must be in 1..64");
  if (period < 1 || period > 100000)
    fail(Err::MalformedInput, "period must be in 1..100000");
  const Json& mats = member(doc, "matrices");
  if (!mats.is_array() || mats.size() != static_cast<size_t>(period))
    fail(Err::MalformedInput, "matrices must hold exactly 'period' arrays");
  std::vector<Mat> steps;
  steps.reserve(static_cast<size_t>(period));
  for (const Json& m : mats)
    steps.push_back(matrix_member(m, static_cast<int>(dim), "matrices"));
  std::string label;
  const auto lab = doc.find("label");
  if (lab != doc.end()) {
    if (!lab->is_string()) fail(Err::MalformedInput, "label must be a string");
    label = lab->get<std::string>();
  }
  return PeriodicCocycle(std::move(steps), std::move(label));
}

std::string serialize_cocycle_file(const PeriodicCocycle& c) {
  Json doc;
  doc["format_version"] = kFormatVersion;
  doc["dim"] = c.dim();
  doc["period"] = c.period();
  Json mats = Json::array();
  for (const Mat& m : c.steps()) mats.push_back(matrix_json(m));
  doc["matrices"] = std::move(mats);
  if (!c.label().empty()) doc["label"] = c.label();
  return dump_fixed(doc);
}

TwoLoopSpec parse_two_loop_file(const std::string& text) {
  const Json doc = parse_document(text);
  const long long dim = int_member(doc, "dim");
  if (dim < 1 || dim > 64) fail(Err::MalformedInput, "dim must be in 1..64");
  TwoLoopSpec spec;
  if (doc.contains("n")) spec.n = static_cast<int>(int_member(doc, "n"));
  spec.fixed = matrix_member(member(doc, "fixed"), static_cast<int>(dim), "fixed");
  const Json& trans = member(doc, "transition");
  if (!trans.is_array() || trans.empty())
    fail(Err::MalformedInput, "transition must be a non-empty array of matrices");
  for (const Json& m : trans)
    spec.transition.push_back(
        matrix_member(m, static_cast<int>(dim), "transition"));
  return spec;
}

std::string serialize_two_loop_file(const TwoLoopSpec& s) {
  Json doc;
  doc["format_version"] = kFormatVersion;
  doc["dim"] = static_cast<int>(s.fixed.rows());
  doc["n"] = s.n;
  doc["fixed"] = matrix_json(s.fixed);
  Json trans = Json::array();
  for (const Mat& m : s.transition) trans.push_back(matrix_json(m));
  doc["transition"] = std::move(trans);
  return dump_fixed(doc);
}

SftCocycle parse_sft_file(const std::string& text) {
  const Json doc = parse_document(text);
  const long long dim = int_member(doc, "dim");
  const long long symbols = int_member(doc, "symbols");
  if (dim < 1 || dim > 64) fail(Err::MalformedInput, "dim must be in 1..64");
  if (symbols < 1 || symbols > 64)
    fail(Err::MalformedInput, "symbols must be in 1..64");
  SftCocycle s;
  const Json& allowed = member(doc, "allowed");
  if (!allowed.is_array() || allowed.size() != static_cast<size_t>(symbols))
    fail(Err::MalformedInput, "allowed must be a symbols x symbols 0/1 table");
  for (const Json& row : allowed) {
    if (!row.is_array() || row.size() != static_cast<size_t>(symbols))
      fail(Err::MalformedInput, "allowed must be a symbols x symbols 0/1 table");
    std::vector<char> flags;
    for (const Json& cell : row) {
      if (!cell.is_number_integer() || (cell.get<long long>() != 0 &&
                                        cell.get<long long>() != 1))
        fail(Err::MalformedInput, "allowed entries must be 0 or 1");
      flags.push_back(static_cast<char>(cell.get<long long>()));
    }
    s.allowed.push_back(std::move(flags));
  }
  const Json& assign = member(doc, "assignment");
  if (!assign.is_array() || assign.size() != static_cast<size_t>(symbols))
    fail(Err::MalformedInput, "assignment must hold one matrix per symbol");
  for (const Json& m : assign)
    s.assignment.push_back(
        matrix_member(m, static_cast<int>(dim), "assignment"));
  return s;
}

std::string serialize_sft_file(const SftCocycle& s) {
  Json doc;
  doc["format_version"] = kFormatVersion;
  doc["dim"] =
      s.assignment.empty() ? 0 : static_cast<int>(s.assignment[0].rows());
  doc["symbols"] = static_cast<int>(s.allowed.size());
  Json allowed = Json::array();
  for (const std::vector<char>& row : s.allowed) {
    Json r = Json::array();
    for (const char f : row) r.push_back(f ? 1 : 0);
    allowed.push_back(std::move(r));
  }
  doc["allowed"] = std::move(allowed);
  Json assign = Json::array();
  for (const Mat& m : s.assignment) assign.push_back(matrix_json(m));
  doc["assignment"] = std::move(assign);
  return dump_fixed(doc);
}

CenterStableModel parse_model_file(const std::string& text) {
  const Json doc = parse_document(text);
  const Json& block = member(doc, "block");
  if (!block.is_array() || block.size() != 4)
    fail(Err::MalformedInput, "block must be a flat row-major array of 4 numbers");
  const Json& seed = member(doc, "seed");
  if (!seed.is_array() || seed.size() != 2)
    fail(Err::MalformedInput, "seed must be an array of 2 numbers");
  CenterStableModel m;
  m.block << number_at(block, 0, "block"), number_at(block, 1, "block"),
      number_at(block, 2, "block"), number_at(block, 3, "block");
  m.seed << number_at(seed, 0, "seed"), number_at(seed, 1, "seed");
  return m;
}

std::string serialize_model_file(const CenterStableModel& m) {
  Json doc;
  doc["format_version"] = kFormatVersion;
  doc["block"] = Json::array(
      {m.block(0, 0), m.block(0, 1), m.block(1, 0), m.block(1, 1)});
  doc["seed"] = Json::array({m.seed(0), m.seed(1)});
  return dump_fixed(doc);
}

}  // namespace cocyc
