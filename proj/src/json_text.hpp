#pragma once

#include <cstdio>
#include <string>

#include <nlohmann/json.hpp>

#include "cocyc/errors.hpp"

namespace cocyc {

using Json = nlohmann::ordered_json;

// Compact JSON writer with floating-point output fixed to 17 significant
// digits, so equal values always produce equal bytes and every double
// round-trips exactly.  nlohmann's own dump() prefers shortest forms, which
// is also deterministic but would couple report bytes to its algorithm.
inline void dump_fixed(const Json& v, std::string& out) {
  switch (v.type()) {
    case Json::value_t::null:
      out += "null";
      break;
    case Json::value_t::boolean:
      out += v.get<bool>() ? "true" : "false";
      break;
    case Json::value_t::number_integer:
      out += std::to_string(v.get<long long>());
      break;
    case Json::value_t::number_unsigned:
      out += std::to_string(v.get<unsigned long long>());
      break;
    case Json::value_t::number_float: {
      const double x = v.get<double>();
      if (!std::isfinite(x))
        fail(Err::InvariantViolation, "non-finite number in a report");
      char buf[40];
      std::snprintf(buf, sizeof buf, "%.17g", x);
      out += buf;
      break;
    }
    case Json::value_t::string: {
      out += '"';
      for (const char ch : v.get_ref<const std::string&>()) {
        switch (ch) {
          case '"': out += "\\\""; break;
          case '\\': out += "\\\\"; break;
          case '\n': out += "\\n"; break;
          case '\r': out += "\\r"; break;
          case '\t': out += "\\t"; break;
          default:
            if (static_cast<unsigned char>(ch) < 0x20) {
              char buf[8];
              std::snprintf(buf, sizeof buf, "\\u%04x", ch);
              out += buf;
            } else {
              out += ch;
            }
        }
      }
      out += '"';
      break;
    }
    case Json::value_t::array: {
      out += '[';
      bool first = true;
      for (const Json& item : v) {
        if (!first) out += ',';
        first = false;
        dump_fixed(item, out);
      }
      out += ']';
      break;
    }
    case Json::value_t::object: {
      out += '{';
      bool first = true;
      for (auto it = v.begin(); it != v.end(); ++it) {
        if (!first) out += ',';
        first = false;
        out += '"';
        out += it.key();
        out += "\":";
        dump_fixed(it.value(), out);
      }
      out += '}';
      break;
    }
    default:
      fail(Err::InvariantViolation, "unexpected JSON node type");
  }
}

inline std::string dump_fixed(const Json& v) {
  std::string out;
  dump_fixed(v, out);
  return out;
}

}  // namespace cocyc
