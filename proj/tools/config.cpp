#include "config.hpp"

#include <algorithm>
#include <cctype>
#include <fstream>
#include <istream>

namespace actspec::cli {

namespace {

std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string::npos) return "";
  const auto e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

std::string normalize_key(std::string key) {
  std::replace(key.begin(), key.end(), '_', '-');
  return key;
}

// Drops a trailing comment that is not inside a quoted string.
std::string strip_comment(const std::string& line) {
  bool quoted = false;
  for (std::size_t i = 0; i < line.size(); ++i) {
    if (line[i] == '\\' && quoted) {
      ++i;
    } else if (line[i] == '"') {
      quoted = !quoted;
    } else if (line[i] == '#' && !quoted) {
      return line.substr(0, i);
    }
  }
  return line;
}

std::string unquote(const std::string& v, const std::string& where) {
  if (v.size() < 2 || v.front() != '"') return v;
  if (v.back() != '"') throw ConfigError(where + ": unterminated string");
  std::string out;
  for (std::size_t i = 1; i + 1 < v.size(); ++i) {
    if (v[i] == '\\' && i + 2 < v.size()) {
      const char c = v[++i];
      out.push_back(c == 'n' ? '\n' : c == 't' ? '\t' : c);
    } else {
      out.push_back(v[i]);
    }
  }
  return out;
}

std::string parse_value(const std::string& raw, const std::string& where) {
  const std::string v = trim(raw);
  if (v.empty()) throw ConfigError(where + ": missing value");
  if (v.front() != '[') return unquote(v, where);
  if (v.back() != ']') throw ConfigError(where + ": unterminated array");
  std::string joined;
  std::string item;
  bool quoted = false;
  auto flush = [&] {
    const std::string t = trim(item);
    if (!t.empty()) {
      if (!joined.empty()) joined += ',';
      joined += unquote(t, where);
    }
    item.clear();
  };
  for (std::size_t i = 1; i + 1 < v.size(); ++i) {
    const char c = v[i];
    if (c == '"') quoted = !quoted;
    if (c == ',' && !quoted) {
      flush();
    } else {
      item.push_back(c);
    }
  }
  flush();
  return joined;
}

}  // namespace

FlatConfig parse_flat_config(std::istream& is, const std::string& origin) {
  FlatConfig out;
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(is, line)) {
    ++lineno;
    const std::string where = origin + ":" + std::to_string(lineno);
    const std::string body = trim(strip_comment(line));
    if (body.empty()) continue;
    if (body.front() == '[') throw ConfigError(where + ": sections are not supported (the file is flat)");
    const auto eq = body.find('=');
    if (eq == std::string::npos) throw ConfigError(where + ": expected key = value");
    const std::string key = normalize_key(trim(body.substr(0, eq)));
    if (key.empty()) throw ConfigError(where + ": empty key");
    for (char c : key) {
      if (!std::isalnum(static_cast<unsigned char>(c)) && c != '-') {
        throw ConfigError(where + ": bad character in key '" + key + "'");
      }
    }
    if (out.count(key)) throw ConfigError(where + ": duplicate key '" + key + "'");
    out[key] = parse_value(body.substr(eq + 1), where);
  }
  return out;
}

FlatConfig load_flat_config(const std::string& path) {
  std::ifstream is(path);
  if (!is) throw ConfigError("cannot open config file " + path);
  return parse_flat_config(is, path);
}

std::vector<std::string> apply_config(const std::vector<std::string>& args, std::size_t insert_at,
                                      const FlatConfig& config, const OptionShapes& options,
                                      const std::set<std::string>& known_anywhere) {
  if (insert_at > args.size()) throw std::out_of_range("apply_config: insert position past the end");
  auto given = [&](const std::string& name) {
    const std::string flag = "--" + name;
    for (const auto& a : args) {
      if (a == flag || a.rfind(flag + "=", 0) == 0) return true;
    }
    return false;
  };
  std::vector<std::string> extra;
  for (const auto& [key, value] : config) {
    const auto it = options.find(key);
    if (it == options.end()) {
      if (!known_anywhere.count(key)) throw ConfigError("unknown config key '" + key + "'");
      continue;
    }
    if (given(key)) continue;
    if (it->second) {
      if (value == "true") {
        extra.push_back("--" + key);
      } else if (value != "false") {
        throw ConfigError("config key '" + key + "' is a flag and takes true or false");
      }
    } else {
      extra.push_back("--" + key);
      extra.push_back(value);
    }
  }
  std::vector<std::string> out(args.begin(), args.begin() + static_cast<std::ptrdiff_t>(insert_at));
  out.insert(out.end(), extra.begin(), extra.end());
  out.insert(out.end(), args.begin() + static_cast<std::ptrdiff_t>(insert_at), args.end());
  return out;
}

}  // namespace actspec::cli
