#include "dpick/functions.hpp"

#include <cmath>
#include <vector>

#include "dpick/errors.hpp"

namespace dpick {

namespace {

double parse_real(const std::string& text, const std::string& spec) {
  std::size_t used = 0;
  double v = 0.0;
  try {
    v = std::stod(text, &used);
  } catch (const std::exception&) {
    used = 0;
  }
  if (text.empty() || used != text.size() || !std::isfinite(v)) {
    throw InvalidInput("function '" + spec + "': cannot parse number '" + text + "'");
  }
  return v;
}

std::vector<std::string> split(const std::string& s, char sep) {
  std::vector<std::string> out;
  std::size_t start = 0;
  while (true) {
    const auto pos = s.find(sep, start);
    out.push_back(s.substr(start, pos - start));
    if (pos == std::string::npos) break;
    start = pos + 1;
  }
  return out;
}

}  // namespace

CatalogFunction parse_function(const std::string& spec, double delta) {
  const auto colon = spec.find(':');
  const std::string name = spec.substr(0, colon);
  const std::string arg = colon == std::string::npos ? "" : spec.substr(colon + 1);
  const bool has_arg = colon != std::string::npos;
  auto no_arg = [&] {
    if (has_arg) throw InvalidInput("function '" + name + "' takes no parameter");
  };

  if (name == "id") {
    no_arg();
    return {spec, [](cplx z) { return z; }, true};
  }
  if (name == "sym") {
    no_arg();
    return {spec, [delta](cplx z) { return z + delta / z; }, false};
  }
  if (name == "half-sym") {
    no_arg();
    return {spec, [delta](cplx z) { return 0.5 * (z + delta / z); }, false};
  }
  if (name == "moebius") {
    const auto parts = split(arg, ',');
    if (!has_arg || parts.size() > 2) throw InvalidInput("moebius needs a parameter a or re,im");
    const cplx a(parse_real(parts[0], spec), parts.size() == 2 ? parse_real(parts[1], spec) : 0.0);
    if (!(std::abs(a) < 1.0)) throw InvalidInput("moebius parameter must satisfy |a| < 1");
    return {spec, [a](cplx z) { return (z - a) / (1.0 - std::conj(a) * z); }, true};
  }
  if (name == "gn") {
    const double nd = has_arg ? parse_real(arg, spec) : -1.0;
    if (!(nd >= 0.0) || nd != std::floor(nd) || nd > 64) {
      throw InvalidInput("gn needs an integer parameter 0 <= n <= 64");
    }
    const int n = static_cast<int>(nd);
    return {spec,
            [n, delta](cplx z) {
              const cplx zn = std::pow(z, n);
              return std::pow(delta, n) / zn + zn;
            },
            false};
  }
  if (name == "poly") {
    if (!has_arg) throw InvalidInput("poly needs coefficients c0,c1,...");
    std::vector<double> c;
    for (const auto& part : split(arg, ',')) c.push_back(parse_real(part, spec));
    return {spec,
            [c](cplx z) {
              cplx acc = c.back();
              for (auto it = c.rbegin() + 1; it != c.rend(); ++it) acc = acc * z + *it;
              return acc;
            },
            true};
  }
  throw InvalidInput("unknown function '" + spec +
                     "' (expected id, moebius:a, sym, half-sym, gn:n or poly:c0,c1,...)");
}

}  // namespace dpick
