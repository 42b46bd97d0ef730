#include "uniharm/spec_io.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>

#include "canonical_json.hpp"
#include "json.hpp"
#include "uniharm/criteria.hpp"
#include "uniharm/error.hpp"
#include "uniharm/report.hpp"

namespace uniharm {

using nlohmann::json;

namespace {

[[noreturn]] void fail(const std::string& path, const std::string& reason) {
  throw Error(ErrorCode::kInvalidSpec, path + ": " + reason);
}

double finite_number(const json& j, const std::string& path) {
  if (!j.is_number()) fail(path, "expected a number");
  const double x = j.get<double>();
  if (!std::isfinite(x)) fail(path, "coefficient is not finite");
  return x;
}

int exponent(const json& j, const std::string& path) {
  if (!j.is_number_integer()) fail(path, "expected a non-negative integer exponent");
  const auto v = j.get<long long>();
  if (v < 0 || v > kMaxSpecDegree)
    fail(path, "exponent must lie in [0, " + std::to_string(kMaxSpecDegree) + "]");
  return static_cast<int>(v);
}

void only_keys(const json& obj, const std::string& path, std::initializer_list<const char*> allowed) {
  for (const auto& [key, value] : obj.items()) {
    bool ok = false;
    for (const char* a : allowed) ok = ok || key == a;
    if (!ok) fail(path.empty() ? key : path + "." + key, "unknown field");
  }
}

std::vector<cplx> coefficient_list(const json& obj, const char* key, const std::string& path) {
  const std::string here = path + "." + key;
  if (!obj.contains(key)) fail(here, "missing field");
  const json& arr = obj.at(key);
  if (!arr.is_array()) fail(here, "expected an array of [re, im] pairs");
  std::vector<cplx> out;
  out.reserve(arr.size());
  if (arr.size() > kMaxSpecDegree + 1u) fail(here, "too many coefficients");
  for (std::size_t i = 0; i < arr.size(); ++i) {
    const std::string at = here + "[" + std::to_string(i) + "]";
    const json& c = arr[i];
    if (!c.is_array() || c.size() != 2) fail(at, "expected [re, im]");
    out.emplace_back(finite_number(c[0], at + "[0]"), finite_number(c[1], at + "[1]"));
  }
  return out;
}

Component parse_component(const json& c, const std::string& path) {
  if (!c.is_object()) fail(path, "expected an object");
  if (!c.contains("type")) fail(path + ".type", "missing field");
  const json& type = c.at("type");
  if (type == "harmonic") {
    only_keys(c, path, {"type", "h", "g"});
    return HarmonicComponent{coefficient_list(c, "h", path), coefficient_list(c, "g", path)};
  }
  if (type == "polyzzbar") {
    only_keys(c, path, {"type", "terms"});
    const std::string here = path + ".terms";
    if (!c.contains("terms")) fail(here, "missing field");
    const json& arr = c.at("terms");
    if (!arr.is_array()) fail(here, "expected an array of [m, n, re, im] terms");
    std::vector<Term> terms;
    for (std::size_t i = 0; i < arr.size(); ++i) {
      const std::string at = here + "[" + std::to_string(i) + "]";
      const json& t = arr[i];
      if (!t.is_array() || t.size() != 4) fail(at, "expected [m, n, re, im]");
      terms.push_back({exponent(t[0], at + "[0]"), exponent(t[1], at + "[1]"),
                       cplx(finite_number(t[2], at + "[2]"), finite_number(t[3], at + "[3]"))});
    }
    return PolyZZbar(std::move(terms));
  }
  fail(path + ".type", R"(expected "harmonic" or "polyzzbar")");
}

// Tracks the path of the value being parsed so that lexer-level failures
// (for example a number literal that overflows a double) get a field path.
class PathTracker : public nlohmann::json_sax<json> {
 public:
  std::string error_path = "$";
  std::string error_what;

  bool null() override { return done(); }
  bool boolean(bool) override { return done(); }
  bool number_integer(number_integer_t) override { return done(); }
  bool number_unsigned(number_unsigned_t) override { return done(); }
  bool number_float(number_float_t, const string_t&) override { return done(); }
  bool string(string_t&) override { return done(); }
  bool binary(binary_t&) override { return done(); }
  bool start_object(std::size_t) override { return open(false); }
  bool key(string_t& k) override {
    frames_.back().key = k;
    return true;
  }
  bool end_object() override { return close(); }
  bool start_array(std::size_t) override { return open(true); }
  bool end_array() override { return close(); }
  bool parse_error(std::size_t, const std::string&, const nlohmann::detail::exception& e) override {
    error_path = path();
    error_what = e.what();
    return false;
  }

 private:
  struct Frame {
    bool array = false;
    std::string key;
    std::size_t index = 0;
  };

  bool done() {
    if (!frames_.empty() && frames_.back().array) ++frames_.back().index;
    return true;
  }
  bool open(bool array) {
    frames_.push_back({array, {}, 0});
    return true;
  }
  bool close() {
    frames_.pop_back();
    return done();
  }
  std::string path() const {
    std::string out;
    for (const auto& f : frames_) {
      if (f.array) out += "[" + std::to_string(f.index) + "]";
      else if (!f.key.empty()) out += (out.empty() ? "" : ".") + f.key;
    }
    return out.empty() ? "$" : out;
  }

  std::vector<Frame> frames_;
};

json pair(cplx c) { return json::array({c.real(), c.imag()}); }

json component_json(const Component& c) {
  if (const auto* h = std::get_if<HarmonicComponent>(&c)) {
    json hs = json::array(), gs = json::array();
    for (cplx x : h->h) hs.push_back(pair(x));
    for (cplx x : h->g) gs.push_back(pair(x));
    return {{"type", "harmonic"}, {"h", hs}, {"g", gs}};
  }
  json terms = json::array();
  for (const Term& t : std::get<PolyZZbar>(c).terms())
    terms.push_back(json::array({t.m, t.n, t.c.real(), t.c.imag()}));
  return {{"type", "polyzzbar"}, {"terms", terms}};
}

}  // namespace

std::string_view to_string(SpecKind kind) {
  return kind == SpecKind::kPolyharmonic ? "polyharmonic" : "log-p-harmonic";
}

MapSpec parse_spec_text(std::string_view text) {
  json root;
  try {
    root = json::parse(text.begin(), text.end());
  } catch (const json::parse_error& e) {
    fail("$", std::string("parse error at byte ") + std::to_string(e.byte));
  } catch (const json::exception&) {
    PathTracker tracker;
    json::sax_parse(text.begin(), text.end(), &tracker);
    if (tracker.error_what.find("number overflow") != std::string::npos)
      fail(tracker.error_path, "coefficient is not finite");
    fail(tracker.error_path, "malformed value");
  }
  if (!root.is_object()) fail("$", "expected an object");
  only_keys(root, "", {"kind", "p", "components", "name", "notes"});

  MapSpec spec;
  if (!root.contains("kind")) fail("kind", "missing field");
  if (root["kind"] == "polyharmonic") spec.kind = SpecKind::kPolyharmonic;
  else if (root["kind"] == "log-p-harmonic") spec.kind = SpecKind::kLogPHarmonic;
  else fail("kind", R"(expected "polyharmonic" or "log-p-harmonic")");

  if (!root.contains("p")) fail("p", "missing field");
  const json& p = root["p"];
  if (!p.is_number_integer() || p.get<long long>() < 1 || p.get<long long>() > kMaxSpecDegree)
    fail("p", "expected a positive integer");
  spec.p = p.get<int>();

  if (!root.contains("components")) fail("components", "missing field");
  const json& comps = root["components"];
  if (!comps.is_array()) fail("components", "expected an array");
  if (comps.size() != static_cast<std::size_t>(spec.p))
    fail("components", "components length " + std::to_string(comps.size()) + " ≠ p " +
                           std::to_string(spec.p));
  for (std::size_t i = 0; i < comps.size(); ++i) {
    const std::string path = "components[" + std::to_string(i) + "]";
    spec.components.push_back(parse_component(comps[i], path));
    if (spec.kind == SpecKind::kLogPHarmonic && !is_harmonic(spec.components.back()))
      fail(path, "log-p-harmonic components must be harmonic");
  }

  for (const char* key : {"name", "notes"}) {
    if (!root.contains(key)) continue;
    if (!root[key].is_string()) fail(key, "expected a string");
    (std::string_view(key) == "name" ? spec.name : spec.notes) = root[key].get<std::string>();
  }
  return spec;
}

MapSpec parse_spec(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorCode::kIo, "cannot read " + path.string());
  std::ostringstream ss;
  ss << in.rdbuf();
  return parse_spec_text(ss.str());
}

std::string canonical_json(const MapSpec& spec) {
  json comps = json::array();
  for (const auto& c : spec.components) comps.push_back(component_json(c));
  json root = {{"kind", std::string(to_string(spec.kind))}, {"p", spec.p}, {"components", comps}};
  if (spec.name) root["name"] = *spec.name;
  if (spec.notes) root["notes"] = *spec.notes;
  return detail::canonical_dump(root);
}

std::string spec_digest(const MapSpec& spec) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "fnv1a64:%016llx",
                static_cast<unsigned long long>(fnv1a64(canonical_json(spec))));
  return buf;
}

MapData to_map_data(const MapSpec& spec) {
  if (spec.kind == SpecKind::kPolyharmonic) return AlmansiMap(spec.p, spec.components);
  std::vector<HarmonicComponent> logs;
  for (const auto& c : spec.components) {
    if (const auto* h = std::get_if<HarmonicComponent>(&c)) logs.push_back(*h);
    else logs.push_back(to_harmonic(std::get<PolyZZbar>(c)));
  }
  return LogPHarmonicMap(spec.p, std::move(logs));
}

}  // namespace uniharm
