#include "photon_ur/report_io.hpp"

#include <charconv>
#include <cmath>
#include <fstream>
#include <system_error>

#include "photon_ur/types.hpp"

namespace photon_ur {

std::string format_double(double value) {
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof buf, value,
                                 std::chars_format::general, 17);
  return std::string(buf, res.ptr);
}

bool parse_double(const std::string &token, double &value) {
  const char *first = token.data();
  const char *last = first + token.size();
  const auto res = std::from_chars(first, last, value);
  return res.ec == std::errc{} && res.ptr == last;
}

namespace {

void emit(const nlohmann::json &v, int indent, int depth, std::string &out) {
  const std::string pad =
      indent > 0 ? std::string(static_cast<std::size_t>(indent * (depth + 1)), ' ')
                 : "";
  const std::string close_pad =
      indent > 0 ? std::string(static_cast<std::size_t>(indent * depth), ' ')
                 : "";
  const char *nl = indent > 0 ? "\n" : "";
  switch (v.type()) {
  case nlohmann::json::value_t::object: {
    if (v.empty()) {
      out += "{}";
      return;
    }
    out += "{";
    out += nl;
    bool first = true;
    for (auto it = v.begin(); it != v.end(); ++it) {
      if (!first) {
        out += ",";
        out += nl;
      }
      first = false;
      out += pad;
      out += nlohmann::json(it.key()).dump();
      out += indent > 0 ? ": " : ":";
      emit(it.value(), indent, depth + 1, out);
    }
    out += nl;
    out += close_pad + "}";
    return;
  }
  case nlohmann::json::value_t::array: {
    if (v.empty()) {
      out += "[]";
      return;
    }
    out += "[";
    out += nl;
    for (std::size_t i = 0; i < v.size(); ++i) {
      if (i)
        out += ",";
      if (i)
        out += nl;
      out += pad;
      emit(v[i], indent, depth + 1, out);
    }
    out += nl;
    out += close_pad + "]";
    return;
  }
  case nlohmann::json::value_t::number_float: {
    const double d = v.get<double>();
    if (!std::isfinite(d))
      throw Error(ErrorKind::numeric, "refusing to write a non-finite number");
    out += format_double(d);
    return;
  }
  default:
    out += v.dump();
  }
}

} // namespace

std::string to_json_text(const nlohmann::json &value, int indent) {
  std::string out;
  emit(value, indent, 0, out);
  out += "\n";
  return out;
}

std::string csv_field(const std::string &text) {
  if (text.find_first_of(",\"\r\n") == std::string::npos)
    return text;
  std::string out = "\"";
  for (char c : text) {
    if (c == '"')
      out += '"';
    out += c;
  }
  out += '"';
  return out;
}

std::string to_csv(const std::vector<std::string> &header,
                   const std::vector<std::vector<std::string>> &rows) {
  std::string out;
  auto line = [&](const std::vector<std::string> &fields) {
    for (std::size_t i = 0; i < fields.size(); ++i) {
      if (i)
        out += ',';
      out += csv_field(fields[i]);
    }
    out += '\n';
  };
  line(header);
  for (const auto &r : rows)
    line(r);
  return out;
}

void write_atomically(const std::filesystem::path &path,
                      const std::string &contents) {
  auto tmp = path;
  tmp += ".tmp";
  {
    std::ofstream file(tmp, std::ios::binary | std::ios::trunc);
    if (!file)
      throw Error(ErrorKind::config, "cannot open " + tmp.string());
    file << contents;
    if (!file)
      throw Error(ErrorKind::config, "cannot write " + tmp.string());
  }
  std::error_code ec;
  std::filesystem::rename(tmp, path, ec);
  if (ec) {
    std::filesystem::remove(tmp);
    throw Error(ErrorKind::config, "cannot rename into " + path.string() +
                                       ": " + ec.message());
  }
}

} // namespace photon_ur
