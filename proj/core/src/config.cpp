#include "fblab/config.hpp"

#include <charconv>
#include <fstream>
#include <functional>
#include <map>
#include <sstream>

#include "fblab/errors.hpp"

namespace fblab {
namespace {

std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string::npos) return {};
  const auto e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

template <class T>
bool parse_number(const std::string& text, T& out) {
  const char* first = text.data();
  const char* last = first + text.size();
  const auto [ptr, ec] = std::from_chars(first, last, out);
  return ec == std::errc() && ptr == last;
}

template <class T>
std::string format_number(T v) {
  char buf[64];
  const auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, ptr);
}

std::vector<std::string> split_list(const std::string& text) {
  std::vector<std::string> out;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) out.push_back(trim(item));
  return out;
}

// Parsers return false on a malformed value.
bool read(const std::string& v, int& out) { return parse_number(v, out); }
bool read(const std::string& v, double& out) { return parse_number(v, out); }
bool read(const std::string& v, std::uint64_t& out) { return parse_number(v, out); }
bool read(const std::string& v, std::string& out) {
  out = v;
  return true;
}
template <class T>
bool read(const std::string& v, std::vector<T>& out) {
  std::vector<T> tmp;
  if (!trim(v).empty()) {
    for (const std::string& item : split_list(v)) {
      T x{};
      if (!read(item, x)) return false;
      tmp.push_back(x);
    }
  }
  out = std::move(tmp);
  return true;
}

std::string write(int v) { return format_number(v); }
std::string write(double v) { return format_number(v); }
std::string write(std::uint64_t v) { return format_number(v); }
std::string write(const std::string& v) { return v; }
template <class T>
std::string write(const std::vector<T>& v) {
  std::string out;
  for (std::size_t k = 0; k < v.size(); ++k) out += (k ? "," : "") + write(v[k]);
  return out;
}

struct Entry {
  std::string section;
  std::string key;
  std::function<bool(RunConfig&, const std::string&)> set;
  std::function<std::string(const RunConfig&)> get;
};

template <class F>
Entry entry(std::string section, std::string key, F field) {
  return {std::move(section), std::move(key),
          [field](RunConfig& c, const std::string& v) { return read(v, field(c)); },
          [field](const RunConfig& c) { return write(field(const_cast<RunConfig&>(c))); }};
}

#define FBLAB_KEY(sec, name) entry(#sec, #name, [](RunConfig& c) -> auto& { return c.sec.name; })

const std::vector<Entry>& registry() {
  static const std::vector<Entry> entries = {
      FBLAB_KEY(run, seed),
      FBLAB_KEY(run, out),
      FBLAB_KEY(solver, n),
      FBLAB_KEY(solver, lo),
      FBLAB_KEY(solver, hi),
      FBLAB_KEY(solver, boundary),
      FBLAB_KEY(solver, offset),
      FBLAB_KEY(solver, boundary_value),
      FBLAB_KEY(solver, eps),
      FBLAB_KEY(solver, residual_tol),
      FBLAB_KEY(solver, max_iter),
      FBLAB_KEY(sweep, eps),
      FBLAB_KEY(sweep, n),
      FBLAB_KEY(monotonicity, grids),
      FBLAB_KEY(monotonicity, radii),
      FBLAB_KEY(monotonicity, r_min),
      FBLAB_KEY(monotonicity, r_max),
      FBLAB_KEY(monotonicity, variant),
      FBLAB_KEY(monotonicity, tol_factor),
      FBLAB_KEY(monotonicity, margin),
      FBLAB_KEY(monotonicity, n_theta),
      FBLAB_KEY(identity, fields),
      FBLAB_KEY(identity, grids),
      FBLAB_KEY(blowup, radii),
      FBLAB_KEY(blowup, tol),
      FBLAB_KEY(counterexample, eps),
      FBLAB_KEY(counterexample, k),
      FBLAB_KEY(counterexample, samples),
      FBLAB_KEY(montecarlo, n),
      FBLAB_KEY(montecarlo, samples),
      FBLAB_KEY(montecarlo, t_max),
      FBLAB_KEY(montecarlo, dimension),
      FBLAB_KEY(montecarlo, penalty),
      FBLAB_KEY(montecarlo, eps),
      FBLAB_KEY(decay, r0),
      FBLAB_KEY(decay, divisors),
      FBLAB_KEY(decay, x0),
      FBLAB_KEY(decay, y0),
  };
  return entries;
}

#undef FBLAB_KEY

}  // namespace

RunConfig parse_config(const std::string& text) {
  RunConfig c;
  std::map<std::pair<std::string, std::string>, const Entry*> index;
  std::map<std::string, bool> sections;
  for (const Entry& e : registry()) {
    index[{e.section, e.key}] = &e;
    sections[e.section] = true;
  }
  std::istringstream in(text);
  std::string raw, section = "run";
  std::vector<std::string> unknown;
  int first_unknown = 0;
  int line_no = 0;
  while (std::getline(in, raw)) {
    ++line_no;
    std::string line = raw;
    const auto hash = line.find_first_of("#;");
    if (hash != std::string::npos) line.erase(hash);
    line = trim(line);
    if (line.empty()) continue;
    if (line.front() == '[') {
      if (line.back() != ']' || line.size() < 3) throw ParseError("malformed section header: " + raw, line_no);
      section = trim(line.substr(1, line.size() - 2));
      if (!sections.count(section)) {
        unknown.push_back("[" + section + "]");
        if (!first_unknown) first_unknown = line_no;
      }
      continue;
    }
    const auto eq = line.find('=');
    if (eq == std::string::npos) throw ParseError("expected `key = value`: " + raw, line_no);
    const std::string key = trim(line.substr(0, eq));
    const std::string value = trim(line.substr(eq + 1));
    if (key.empty()) throw ParseError("missing key before `=`", line_no);
    const auto it = index.find({section, key});
    if (it == index.end()) {
      if (sections.count(section)) {
        unknown.push_back(section + "." + key);
        if (!first_unknown) first_unknown = line_no;
      }
      continue;
    }
    if (!it->second->set(c, value)) {
      throw ParseError("bad value for " + section + "." + key + ": " + value, line_no);
    }
  }
  if (!unknown.empty()) {
    std::string msg = "unknown keys:";
    for (const std::string& u : unknown) msg += " " + u;
    throw ParseError(msg, first_unknown);
  }
  return c;
}

std::string serialize_config(const RunConfig& c) {
  std::ostringstream out;
  std::string section;
  for (const Entry& e : registry()) {
    if (e.section != section) {
      if (!section.empty()) out << "\n";
      section = e.section;
      out << "[" << section << "]\n";
    }
    out << e.key << " = " << e.get(c) << "\n";
  }
  return out.str();
}

RunConfig load_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ParseError("cannot read config file " + path, 0);
  std::stringstream ss;
  ss << in.rdbuf();
  return parse_config(ss.str());
}

}  // namespace fblab
