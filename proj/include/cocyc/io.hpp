#pragma once

#include <string>

#include "cocyc/cocycle.hpp"
#include "cocyc/strong_connection.hpp"
#include "cocyc/two_loop.hpp"

namespace cocyc {

// Version stamp written into every document and report this library emits.
inline constexpr int kFormatVersion = 1;

// FNV-1a 64-bit digest as 16 lowercase hex digits; used to fingerprint raw
// input bytes in reports.
std::string fnv1a_hex(const std::string& bytes);

// Whole file as bytes; "-" reads standard input.  MalformedInput when the
// file cannot be opened.
std::string read_input(const std::string& path);

// JSON documents <-> domain types.  Parsers reject any structural defect
// (bad version, wrong shapes, non-numeric entries) with MalformedInput;
// serializers emit floats at 17 significant digits so that
// parse(serialize(x)) reproduces x bit-exactly.
PeriodicCocycle parse_cocycle_file(const std::string& text);
std::string serialize_cocycle_file(const PeriodicCocycle& c);

TwoLoopSpec parse_two_loop_file(const std::string& text);
std::string serialize_two_loop_file(const TwoLoopSpec& s);

SftCocycle parse_sft_file(const std::string& text);
std::string serialize_sft_file(const SftCocycle& s);

CenterStableModel parse_model_file(const std::string& text);
std::string serialize_model_file(const CenterStableModel& m);

}  // namespace cocyc
