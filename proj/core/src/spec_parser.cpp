#include "wulffcurv/spec_parser.hpp"

#include <charconv>
#include <map>
#include <vector>

#include "wulffcurv/error.hpp"
#include "wulffcurv/polynomial.hpp"

namespace wulffcurv {
namespace {

[[noreturn]] void parse_fail(std::string_view text, const std::string& what) {
  fail(ErrorKind::ParseError, "cannot parse '" + std::string(text) + "': " + what);
}

std::string_view trim(std::string_view s) {
  while (!s.empty() && (s.front() == ' ' || s.front() == '\t')) s.remove_prefix(1);
  while (!s.empty() && (s.back() == ' ' || s.back() == '\t')) s.remove_suffix(1);
  return s;
}

std::vector<std::string_view> split_top(std::string_view s, char sep) {
  std::vector<std::string_view> parts;
  int depth = 0;
  std::size_t start = 0;
  for (std::size_t i = 0; i < s.size(); ++i) {
    if (s[i] == '[' || s[i] == '(') ++depth;
    if (s[i] == ']' || s[i] == ')') --depth;
    if (depth < 0) parse_fail(s, "unbalanced brackets");
    if (s[i] == sep && depth == 0) {
      parts.push_back(trim(s.substr(start, i - start)));
      start = i + 1;
    }
  }
  if (depth != 0) parse_fail(s, "unbalanced brackets");
  parts.push_back(trim(s.substr(start)));
  return parts;
}

double parse_number(std::string_view s) {
  s = trim(s);
  if (!s.empty() && s.front() == '+') s.remove_prefix(1);
  double v = 0.0;
  const auto res = std::from_chars(s.data(), s.data() + s.size(), v);
  if (res.ec != std::errc() || res.ptr != s.data() + s.size()) parse_fail(s, "expected a number");
  return v;
}

int parse_int(std::string_view s) {
  s = trim(s);
  int v = 0;
  const auto res = std::from_chars(s.data(), s.data() + s.size(), v);
  if (res.ec != std::errc() || res.ptr != s.data() + s.size()) parse_fail(s, "expected an integer");
  return v;
}

std::vector<std::string_view> list_items(std::string_view s) {
  s = trim(s);
  if (s.size() < 2 || s.front() != '[' || s.back() != ']') parse_fail(s, "expected a bracketed list");
  const std::string_view inner = trim(s.substr(1, s.size() - 2));
  if (inner.empty()) return {};
  return split_top(inner, ',');
}

Vec parse_vector(std::string_view s) {
  const auto items = list_items(s);
  if (items.empty() || items.size() > 4) parse_fail(s, "vector must have 1 to 4 entries");
  Vec v(static_cast<int>(items.size()));
  for (std::size_t i = 0; i < items.size(); ++i) v(static_cast<int>(i)) = parse_number(items[i]);
  return v;
}

struct Spec {
  std::string_view kind;
  std::map<std::string, std::string_view, std::less<>> args;
};

Spec split_spec(std::string_view text, bool rest_is_value = false) {
  text = trim(text);
  const auto colon = text.find(':');
  Spec spec;
  spec.kind = trim(text.substr(0, colon));
  if (spec.kind.empty()) parse_fail(text, "missing kind");
  if (colon == std::string_view::npos) return spec;
  const std::string_view body = trim(text.substr(colon + 1));
  if (body.empty()) return spec;
  if (rest_is_value) {
    const auto eq = body.find('=');
    if (eq == std::string_view::npos) parse_fail(text, "expected key=value");
    spec.args.emplace(std::string(trim(body.substr(0, eq))), trim(body.substr(eq + 1)));
    return spec;
  }
  for (std::string_view item : split_top(body, ',')) {
    const auto eq = item.find('=');
    if (eq == std::string_view::npos) parse_fail(text, "expected key=value in '" + std::string(item) + "'");
    const std::string key(trim(item.substr(0, eq)));
    if (!spec.args.emplace(key, trim(item.substr(eq + 1))).second) parse_fail(text, "duplicate key '" + key + "'");
  }
  return spec;
}

void allow_keys(std::string_view text, const Spec& spec, std::initializer_list<std::string_view> keys) {
  for (const auto& [key, value] : spec.args) {
    bool known = false;
    for (auto k : keys) known = known || key == k;
    if (!known) parse_fail(text, "unknown key '" + key + "'");
  }
}

std::string_view require(std::string_view text, const Spec& spec, const char* key) {
  const auto it = spec.args.find(key);
  if (it == spec.args.end()) parse_fail(text, std::string("missing key '") + key + "'");
  return it->second;
}

// Splits off `*scale=` / `*translate=` modifiers at bracket depth zero.
std::vector<std::string_view> split_modifiers(std::string_view text) {
  std::vector<std::string_view> parts;
  int depth = 0;
  std::size_t start = 0;
  for (std::size_t i = 0; i < text.size(); ++i) {
    if (text[i] == '[' || text[i] == '(') ++depth;
    if (text[i] == ']' || text[i] == ')') --depth;
    if (text[i] == '*' && depth == 0) {
      const std::string_view rest = text.substr(i + 1);
      if (rest.starts_with("scale=") || rest.starts_with("translate=")) {
        parts.push_back(trim(text.substr(start, i - start)));
        start = i + 1;
      }
    }
  }
  parts.push_back(trim(text.substr(start)));
  return parts;
}

ParametricSurface parse_base_surface(std::string_view text) {
  const auto colon = text.find(':');
  const std::string_view kind = trim(text.substr(0, colon));
  if (kind == "wulff") {
    const Spec spec = split_spec(text, true);
    allow_keys(text, spec, {"F"});
    return ParametricSurface::wulff(parse_anisotropy(require(text, spec, "F")));
  }
  const Spec spec = split_spec(text);
  if (spec.kind == "sphere") {
    allow_keys(text, spec, {"R", "n"});
    const double R = spec.args.contains("R") ? parse_number(spec.args.at("R")) : 1.0;
    const int n = spec.args.contains("n") ? parse_int(spec.args.at("n")) : 2;
    if (n < 1 || n > 2) parse_fail(text, "n must be 1 or 2");
    if (!(R > 0.0)) parse_fail(text, "R must be positive");
    return ParametricSurface::sphere(n, R);
  }
  if (spec.kind == "ellipsoid") {
    allow_keys(text, spec, {"a", "b", "c"});
    std::vector<double> axes;
    for (const char* key : {"a", "b", "c"}) {
      if (spec.args.contains(key)) axes.push_back(parse_number(spec.args.at(key)));
    }
    if (axes.size() < 2 || (axes.size() == 2 && spec.args.contains("c"))) parse_fail(text, "need axes a,b[,c]");
    Vec v(static_cast<int>(axes.size()));
    for (std::size_t i = 0; i < axes.size(); ++i) {
      if (!(axes[i] > 0.0)) parse_fail(text, "axes must be positive");
      v(static_cast<int>(i)) = axes[i];
    }
    return ParametricSurface::ellipsoid(v);
  }
  if (spec.kind == "radial") {
    allow_keys(text, spec, {"eps", "poly", "n"});
    const int n = spec.args.contains("n") ? parse_int(spec.args.at("n")) : 2;
    if (n < 1 || n > 2) parse_fail(text, "n must be 1 or 2");
    std::vector<double> eps;
    for (auto item : list_items(require(text, spec, "eps"))) eps.push_back(parse_number(item));
    std::vector<Polynomial> polys;
    for (auto item : list_items(require(text, spec, "poly"))) {
      try {
        polys.push_back(Polynomial::parse(std::string(item)));
      } catch (const Error& e) {
        parse_fail(text, e.what());
      }
      if (polys.back().variables_used() > n + 1) parse_fail(text, "polynomial uses too many coordinates");
    }
    if (eps.size() != polys.size()) parse_fail(text, "eps and poly lists differ in length");
    return ParametricSurface::radial(n, std::move(eps), std::move(polys));
  }
  parse_fail(text, "unknown surface kind '" + std::string(spec.kind) + "'");
}

}  // namespace

AnisotropyModel parse_anisotropy(std::string_view text, int default_dimension) {
  const Spec spec = split_spec(text);
  try {
    if (spec.kind == "const") {
      allow_keys(text, spec, {"c", "n"});
      const double c = spec.args.contains("c") ? parse_number(spec.args.at("c")) : 1.0;
      const int n = spec.args.contains("n") ? parse_int(spec.args.at("n")) : default_dimension;
      return AnisotropyModel::constant(n, c);
    }
    if (spec.kind == "linear") {
      allow_keys(text, spec, {"a"});
      return AnisotropyModel::linear(parse_vector(require(text, spec, "a")));
    }
    if (spec.kind == "norm") {
      allow_keys(text, spec, {"B"});
      return AnisotropyModel::norm(parse_vector(require(text, spec, "B")));
    }
    if (spec.kind == "quad") {
      allow_keys(text, spec, {"c", "d"});
      const double c = parse_number(require(text, spec, "c"));
      const Vec d = spec.args.contains("d") ? parse_vector(spec.args.at("d")) : unit_axis(default_dimension + 1, default_dimension);
      return AnisotropyModel::quadratic(c, d);
    }
  } catch (const Error& e) {
    if (e.kind() == ErrorKind::ParseError || e.kind() == ErrorKind::ConvexityViolation) throw;
    parse_fail(text, e.what());
  }
  parse_fail(text, "unknown anisotropy kind '" + std::string(spec.kind) + "'");
}

ParametricSurface parse_surface(std::string_view text) {
  const auto parts = split_modifiers(trim(text));
  ParametricSurface surface = [&] {
    try {
      return parse_base_surface(parts.front());
    } catch (const Error& e) {
      if (e.kind() == ErrorKind::ParseError || e.kind() == ErrorKind::ConvexityViolation) throw;
      parse_fail(text, e.what());
    }
  }();
  for (std::size_t i = 1; i < parts.size(); ++i) {
    const std::string_view m = parts[i];
    if (m.starts_with("scale=")) {
      const double s = parse_number(m.substr(6));
      if (!(s > 0.0)) parse_fail(text, "scale must be positive");
      surface = surface.scaled(s);
    } else {
      const Vec a = parse_vector(m.substr(10));
      if (a.size() != surface.ambient_dimension()) parse_fail(text, "translation has wrong dimension");
      surface = surface.translated(a);
    }
  }
  return surface;
}

}  // namespace wulffcurv
