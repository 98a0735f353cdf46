#include "cmpdet/jsonout.hpp"

#include <cmath>
#include <cstdio>

namespace cmpdet {

namespace {

void append_escaped(std::string& out, const std::string& s) {
  out += '"';
  for (char ch : s) {
    switch (ch) {
      case '"':
        out += "\\\"";
        break;
      case '\\':
        out += "\\\\";
        break;
      case '\b':
        out += "\\b";
        break;
      case '\f':
        out += "\\f";
        break;
      case '\n':
        out += "\\n";
        break;
      case '\r':
        out += "\\r";
        break;
      case '\t':
        out += "\\t";
        break;
      default:
        if (static_cast<unsigned char>(ch) < 0x20) {
          char buf[8];
          std::snprintf(buf, sizeof(buf), "\\u%04x", ch);
          out += buf;
        } else {
          out += ch;
        }
    }
  }
  out += '"';
}

void dump_value(std::string& out, const nlohmann::json& j, int depth) {
  const std::string pad(2 * static_cast<std::size_t>(depth), ' ');
  const std::string pad_in(2 * static_cast<std::size_t>(depth + 1), ' ');

  switch (j.type()) {
    case nlohmann::json::value_t::null:
      out += "null";
      break;
    case nlohmann::json::value_t::boolean:
      out += j.get<bool>() ? "true" : "false";
      break;
    case nlohmann::json::value_t::number_integer: {
      char buf[32];
      std::snprintf(buf, sizeof(buf), "%lld",
                    static_cast<long long>(j.get<std::int64_t>()));
      out += buf;
      break;
    }
    case nlohmann::json::value_t::number_unsigned: {
      char buf[32];
      std::snprintf(buf, sizeof(buf), "%llu",
                    static_cast<unsigned long long>(j.get<std::uint64_t>()));
      out += buf;
      break;
    }
    case nlohmann::json::value_t::number_float: {
      double v = j.get<double>();
      if (!std::isfinite(v)) {
        out += "null";
      } else {
        char buf[64];
        std::snprintf(buf, sizeof(buf), "%.6f", v);
        out += buf;
      }
      break;
    }
    case nlohmann::json::value_t::string:
      append_escaped(out, j.get<std::string>());
      break;
    case nlohmann::json::value_t::array: {
      if (j.empty()) {
        out += "[]";
        break;
      }
      out += "[\n";
      for (std::size_t i = 0; i < j.size(); ++i) {
        out += pad_in;
        dump_value(out, j[i], depth + 1);
        if (i + 1 < j.size()) out += ',';
        out += '\n';
      }
      out += pad + "]";
      break;
    }
    case nlohmann::json::value_t::object: {
      if (j.empty()) {
        out += "{}";
        break;
      }
      out += "{\n";
      std::size_t i = 0;
      for (auto it = j.begin(); it != j.end(); ++it, ++i) {
        out += pad_in;
        append_escaped(out, it.key());
        out += ": ";
        dump_value(out, it.value(), depth + 1);
        if (i + 1 < j.size()) out += ',';
        out += '\n';
      }
      out += pad + "}";
      break;
    }
    default:
      out += "null";
  }
}

}  // namespace

std::string dump_stable(const nlohmann::json& j) {
  std::string out;
  dump_value(out, j, 0);
  out += '\n';
  return out;
}

nlohmann::json truth_to_json(const GroundTruth& truth, int width, int height) {
  nlohmann::json j;
  j["width"] = width;
  j["height"] = height;
  nlohmann::json corners = nlohmann::json::array();
  for (const TruthCorner& c : truth.corners) {
    nlohmann::json e;
    e["x"] = c.x;
    e["y"] = c.y;
    e["i"] = c.i;
    e["j"] = c.j;
    corners.push_back(std::move(e));
  }
  j["corners"] = std::move(corners);
  return j;
}

GroundTruth truth_from_json(const nlohmann::json& j) {
  GroundTruth truth;
  const nlohmann::json& corners = j.at("corners");
  truth.corners.reserve(corners.size());
  for (const nlohmann::json& e : corners) {
    TruthCorner c;
    c.x = e.at("x").get<double>();
    c.y = e.at("y").get<double>();
    c.i = e.value("i", 0);
    c.j = e.value("j", 0);
    truth.corners.push_back(c);
  }
  return truth;
}

}  // namespace cmpdet
