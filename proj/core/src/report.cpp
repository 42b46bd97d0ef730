#include "uniharm/report.hpp"

#include <cstdio>
#include <fstream>
#include <numbers>
#include <system_error>

#include "canonical_json.hpp"
#include "report_json.hpp"
#include "uniharm/error.hpp"

namespace uniharm {

using nlohmann::json;

namespace detail {

json complex_json(cplx c) { return json::array({c.real(), c.imag()}); }

namespace {

template <class T>
json optional_json(const std::optional<T>& v) {
  if (!v) return nullptr;
  if constexpr (std::is_same_v<T, cplx>) return complex_json(*v);
  else return json_value(*v);
}

json optional_int(const std::optional<int>& v) { return v ? json(*v) : json(nullptr); }

}  // namespace

json json_value(const SupEstimate& s) {
  return {{"value", s.infinite() ? json(nullptr) : json(s.value)},
          {"infinite", s.infinite()},
          {"arg_point", complex_json(s.arg_point)},
          {"samples_used", s.samples_used},
          {"refined", s.refined}};
}

json json_value(const CriterionReport& r) {
  json out = {{"theorem", std::string(to_string(r.kind))},
              {"sup", json_value(r.sup)},
              {"threshold", r.threshold},
              {"basis", std::string(to_string(r.basis))},
              {"M", r.M},
              {"margin", r.sup.infinite() ? json(nullptr) : json(r.margin)},
              {"verdict", std::string(to_string(r.verdict))}};
  out["connectivity"] = r.connectivity ? json_value(*r.connectivity) : json(nullptr);
  return out;
}

json json_value(const OracleGrid& g) { return {{"n", g.n}, {"sigma", g.sigma}, {"tau", g.tau}}; }

json json_value(const OracleVerdict& v) {
  return {{"status", std::string(to_string(v.status))},
          {"z1", optional_json(v.z1)},
          {"z2", optional_json(v.z2)},
          {"residual", v.residual},
          {"grid", json_value(v.grid)},
          {"candidates", v.candidates},
          {"winding", optional_int(v.winding)}};
}

json json_value(const JacobianScan& j) {
  return {{"min_J", j.min_J},
          {"argmin", complex_json(j.argmin)},
          {"status", std::string(to_string(j.status))}};
}

json json_value(const UnivalenceReport& r) {
  return {{"jacobian", json_value(r.jacobian)},
          {"boundary_simple", r.boundary_simple},
          {"winding", optional_int(r.winding)},
          {"injectivity", optional_json(r.injectivity)},
          {"verdict", json_value(r.verdict)}};
}

json json_value(const ConnectivityEstimate& c) {
  json path = json::array();
  for (cplx w : c.path) path.push_back(complex_json(w));
  return {{"Mhat", c.Mhat},
          {"witness", json::array({complex_json(c.witness.first), complex_json(c.witness.second)})},
          {"path_length", c.path_length},
          {"pairs_sampled", c.pairs_sampled},
          {"path", path}};
}

json json_value(const std::vector<SweepEntry>& sweep) {
  json out = json::array();
  for (const auto& e : sweep) out.push_back({{"a", complex_json(e.a)}, {"verdict", json_value(e.verdict)}});
  return out;
}

}  // namespace detail

std::string to_json(const CriterionReport& r) { return detail::canonical_dump(detail::json_value(r)); }
std::string to_json(const OracleVerdict& v) { return detail::canonical_dump(detail::json_value(v)); }
std::string to_json(const UnivalenceReport& r) { return detail::canonical_dump(detail::json_value(r)); }
std::string to_json(const ConnectivityEstimate& c) { return detail::canonical_dump(detail::json_value(c)); }
std::string to_json(const std::vector<SweepEntry>& s) { return detail::canonical_dump(detail::json_value(s)); }

std::uint64_t fnv1a64(std::string_view bytes) {
  std::uint64_t h = 0xcbf29ce484222325ull;
  for (unsigned char c : bytes) {
    h ^= c;
    h *= 0x100000001b3ull;
  }
  return h;
}

std::string boundary_csv(const MapEvaluator& f, int n) {
  if (n < 1) throw Error(ErrorCode::kOutOfRange, "boundary sample count must be >= 1");
  std::string out = "theta,re,im\n";
  for (int j = 0; j < n; ++j) {
    const double theta = 2.0 * std::numbers::pi * j / n;
    const cplx w = f.value(std::polar(1.0, theta));
    out += detail::format_double(theta);
    out += ',';
    out += detail::format_double(w.real());
    out += ',';
    out += detail::format_double(w.imag());
    out += '\n';
  }
  return out;
}

void emit_boundary_csv(const MapEvaluator& f, int n, const std::filesystem::path& path) {
  write_atomic(path, boundary_csv(f, n));
}

void write_atomic(const std::filesystem::path& path, std::string_view contents) {
  std::filesystem::path tmp = path;
  tmp += ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw Error(ErrorCode::kIo, "cannot open " + tmp.string() + " for writing");
    out.write(contents.data(), static_cast<std::streamsize>(contents.size()));
    out.flush();
    if (!out) {
      std::error_code ec;
      std::filesystem::remove(tmp, ec);
      throw Error(ErrorCode::kIo, "write failed for " + tmp.string());
    }
  }
  std::error_code ec;
  std::filesystem::rename(tmp, path, ec);
  if (ec) {
    std::filesystem::remove(tmp, ec);
    throw Error(ErrorCode::kIo, "cannot rename onto " + path.string());
  }
}

}  // namespace uniharm
