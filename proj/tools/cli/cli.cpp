#include "cli.hpp"

#include <CLI11.hpp>

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <future>
#include <iostream>
#include <map>
#include <sstream>
#include <thread>

#include "berg/classification.hpp"
#include "berg/errors.hpp"

namespace berg::cli {

using nlohmann::json;

namespace {

constexpr double kRecordTol = 1e-7;

std::vector<std::string> split(const std::string& s, char sep) {
  std::vector<std::string> out;
  std::string cur;
  std::istringstream is(s);
  while (std::getline(is, cur, sep)) out.push_back(cur);
  if (!s.empty() && s.back() == sep) out.emplace_back();
  return out;
}

int to_int(const std::string& s, const std::string& what) {
  std::size_t pos = 0;
  int v = 0;
  try {
    v = std::stoi(s, &pos);
  } catch (const std::exception&) {
    throw InputError("bad " + what + ": '" + s + "'");
  }
  if (pos != s.size()) throw InputError("bad " + what + ": '" + s + "'");
  return v;
}

double to_double(const std::string& s, const std::string& what) {
  std::size_t pos = 0;
  double v = 0;
  try {
    v = std::stod(s, &pos);
  } catch (const std::exception&) {
    throw InputError("bad " + what + ": '" + s + "'");
  }
  if (pos != s.size()) throw InputError("bad " + what + ": '" + s + "'");
  return v;
}

std::uint64_t seed_from_env() {
  const char* s = std::getenv("BERG_SEED");
  if (!s || !*s) return 42;
  try {
    std::size_t pos = 0;
    const auto v = std::stoull(s, &pos);
    if (pos != std::string(s).size()) throw InputError("");
    return v;
  } catch (const std::exception&) {
    throw InputError(std::string("BERG_SEED is not an unsigned integer: '") + s + "'");
  }
}

void write_value(std::ostream& os, const json& j) {
  switch (j.type()) {
    case json::value_t::object: {
      os << '{';
      bool first = true;
      for (auto it = j.begin(); it != j.end(); ++it) {
        if (!first) os << ", ";
        first = false;
        os << json(it.key()).dump() << ": ";
        write_value(os, it.value());
      }
      os << '}';
      break;
    }
    case json::value_t::array: {
      os << '[';
      for (std::size_t i = 0; i < j.size(); ++i) {
        if (i) os << ", ";
        write_value(os, j[i]);
      }
      os << ']';
      break;
    }
    case json::value_t::number_float: {
      const double v = j.get<double>();
      if (!std::isfinite(v)) {
        os << "null";
      } else {
        char buf[32];
        std::snprintf(buf, sizeof buf, "%.17g", v);
        os << buf;
      }
      break;
    }
    default:
      os << j.dump();
  }
}

std::string fmt(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

json complex_json(cplx v) { return json::array({v.real(), v.imag()}); }

// ---------------------------------------------------------------------------
// Records

const char* const kFields[] = {"k", "ric2", "riem2", "lapk", "a1", "a2"};

std::array<double, 6> fields(const CurvatureInvariants& c) {
  return {c.k, c.ric_norm2, c.riem_norm2, c.lap_k, c.a1, c.a2};
}

struct Record {
  std::vector<cplx> point;
  std::optional<double> t, x;
  std::optional<CurvatureInvariants> oracle, closed;
  std::string error;
  bool pass = false;

  std::optional<std::array<double, 6>> gap_abs() const {
    if (!oracle || !closed) return std::nullopt;
    const auto o = fields(*oracle), c = fields(*closed);
    std::array<double, 6> g{};
    for (std::size_t i = 0; i < 6; ++i) g[i] = std::abs(o[i] - c[i]);
    return g;
  }
  std::optional<std::array<double, 6>> gap_rel() const {
    auto g = gap_abs();
    if (!g) return std::nullopt;
    const auto c = fields(*closed);
    for (std::size_t i = 0; i < 6; ++i) (*g)[i] /= std::max(std::abs(c[i]), 1.0);
    return g;
  }
};

json block(const CurvatureInvariants& c) {
  json j = json::object();
  const auto f = fields(c);
  for (std::size_t i = 0; i < 6; ++i) j[kFields[i]] = f[i];
  return j;
}

json block(const std::array<double, 6>& f) {
  json j = json::object();
  for (std::size_t i = 0; i < 6; ++i) j[kFields[i]] = f[i];
  return j;
}

json record_json(const Record& r) {
  json j;
  j["point"] = json::array();
  for (auto v : r.point) j["point"].push_back(complex_json(v));
  j["t"] = r.t ? json(*r.t) : json(nullptr);
  j["x"] = r.x ? json(*r.x) : json(nullptr);
  if (r.oracle) j["oracle"] = block(*r.oracle);
  if (r.closed) j["closed"] = block(*r.closed);
  if (auto g = r.gap_abs()) j["gap_abs"] = block(*g);
  if (auto g = r.gap_rel()) j["gap_rel"] = block(*g);
  if (!r.error.empty()) j["error"] = r.error;
  j["pass"] = r.pass;
  return j;
}

std::string csv_header(int dim) {
  std::ostringstream os;
  for (int i = 0; i < dim; ++i) os << "p" << i << "_re,p" << i << "_im,";
  os << "t,x";
  for (const char* f : kFields) os << ',' << f << "_oracle," << f << "_closed";
  for (const char* f : kFields) os << ',' << f << "_gap_abs," << f << "_gap_rel";
  os << ",pass";
  return os.str();
}

std::string csv_row(const Record& r) {
  std::ostringstream os;
  for (auto v : r.point) os << fmt(v.real()) << ',' << fmt(v.imag()) << ',';
  os << (r.t ? fmt(*r.t) : "") << ',' << (r.x ? fmt(*r.x) : "");
  const auto o = r.oracle ? std::optional(fields(*r.oracle)) : std::nullopt;
  const auto c = r.closed ? std::optional(fields(*r.closed)) : std::nullopt;
  for (std::size_t i = 0; i < 6; ++i)
    os << ',' << (o ? fmt((*o)[i]) : "") << ',' << (c ? fmt((*c)[i]) : "");
  const auto ga = r.gap_abs(), gr = r.gap_rel();
  for (std::size_t i = 0; i < 6; ++i)
    os << ',' << (ga ? fmt((*ga)[i]) : "") << ',' << (gr ? fmt((*gr)[i]) : "");
  os << ',' << (r.pass ? "true" : "false");
  return os.str();
}

// ---------------------------------------------------------------------------
// Evaluation

struct EvalRequest {
  BaseSpec base;
  double mu = 1.0;
  int d0 = 1;
  std::optional<FSpec> f;
  bool run_oracle = true, run_closed = true;

  int dim() const { return base.d + (f ? d0 : 0); }
};

EvalRequest make_request(const std::string& domain, double mu, int d0, const std::string& F, const std::string& paths) {
  EvalRequest req;
  req.base = BaseSpec::parse(domain);
  if (!(mu > 0.0) || !std::isfinite(mu)) throw InputError("mu must be positive");
  if (d0 < 1) throw InputError("d0 must be a positive integer");
  req.mu = mu;
  req.d0 = d0;
  req.f = parse_f(F, d0);
  if (paths == "oracle") {
    req.run_closed = false;
  } else if (paths == "closed") {
    req.run_oracle = false;
  } else if (paths != "both") {
    throw InputError("paths must be oracle, closed or both");
  }
  return req;
}

// Throws DomainViolation when the point lies outside the domain.
void check_inside(const EvalRequest& req, const PolarizedPotential& base, std::span<const cplx> pt,
                  std::optional<double>& t) {
  const auto d = static_cast<std::size_t>(req.base.d);
  std::span<const cplx> z = pt.subspan(0, d);
  if (!req.base.contains(z)) throw DomainViolation("base point outside the domain");
  if (!req.f) return;
  double r2 = 0;
  for (std::size_t k = d; k < pt.size(); ++k) r2 += std::norm(pt[k]);
  if (!(r2 > 0.0)) throw DomainViolation("fiber coordinate w must be nonzero");
  const double tt = base.value(z).real() + std::log(r2);
  if (!(tt < 0.0)) throw DomainViolation("point outside the Hartogs domain");
  t = tt;
}

Record evaluate(const EvalRequest& req, const PolarizedPotential& base, const PolarizedPotential& pot,
                const std::optional<MomentumProfile>& profile, const BaseInvariants& binv, std::vector<cplx> pt) {
  Record r;
  r.point = std::move(pt);
  check_inside(req, base, r.point, r.t);
  try {
    if (req.f) r.x = req.f->derivatives(*r.t, 1)[1];
    if (req.run_oracle) r.oracle = evaluate_oracle(pot, r.point).invariants;
    if (req.run_closed) {
      if (!req.f) {
        r.closed = assemble_coefficients(binv.k, binv.ric2, binv.riem2, binv.lapk);
      } else if (profile) {
        r.closed = invariants_closed(*profile, req.base.d, req.d0, *r.x, binv);
      }
    }
    r.pass = true;
    if (auto g = r.gap_rel())
      for (double v : *g) r.pass = r.pass && v < kRecordTol;
  } catch (const DomainViolation&) {
    throw;
  } catch (const Error& e) {
    r.error = e.what();
    r.pass = false;
  }
  return r;
}

struct Batch {
  std::vector<Record> records;
  int skipped = 0;
};

// Evaluates concurrently, keeps input order. Points outside the domain are
// skipped when `skip_outside`, otherwise they abort the request.
Batch evaluate_all(const EvalRequest& req, const std::vector<std::vector<cplx>>& points, bool skip_outside) {
  const auto base = req.base.potential(req.mu);
  const auto pot = req.f ? hartogs_potential(base, *req.f) : base;
  std::optional<MomentumProfile> profile;
  if (req.f && req.run_closed) profile = profile_from_F(*req.f);
  const auto binv = req.base.invariants(req.mu);

  std::vector<std::optional<Record>> slots(points.size());
  std::vector<std::string> outside(points.size());
  const std::size_t workers = std::max(1u, std::thread::hardware_concurrency());
  std::vector<std::future<void>> jobs;
  for (std::size_t w = 0; w < workers; ++w) {
    jobs.push_back(std::async(std::launch::async, [&, w] {
      for (std::size_t i = w; i < points.size(); i += workers) {
        try {
          slots[i] = evaluate(req, base, pot, profile, binv, points[i]);
        } catch (const DomainViolation& e) {
          outside[i] = e.what();
        }
      }
    }));
  }
  for (auto& j : jobs) j.get();

  Batch b;
  for (std::size_t i = 0; i < points.size(); ++i) {
    if (slots[i]) {
      b.records.push_back(std::move(*slots[i]));
    } else if (skip_outside) {
      ++b.skipped;
    } else {
      throw InputError("point " + std::to_string(i) + ": " + outside[i]);
    }
  }
  return b;
}

json summary_json(const Batch& b) {
  json s;
  s["records"] = b.records.size();
  s["skipped"] = b.skipped;
  int failed = 0;
  std::array<double, 6> gmax{};
  bool any_gap = false;
  std::vector<double> a1, a2;
  for (const auto& r : b.records) {
    if (!r.pass) ++failed;
    if (auto g = r.gap_rel()) {
      any_gap = true;
      for (std::size_t i = 0; i < 6; ++i) gmax[i] = std::max(gmax[i], (*g)[i]);
    }
    const auto* inv = r.oracle ? &*r.oracle : (r.closed ? &*r.closed : nullptr);
    if (inv) {
      a1.push_back(inv->a1);
      a2.push_back(inv->a2);
    }
  }
  s["failed"] = failed;
  s["max_gap_rel"] = any_gap ? block(gmax) : json(nullptr);
  auto stats = [](const std::vector<double>& v) -> std::pair<json, json> {
    if (v.empty()) return {nullptr, nullptr};
    double m = 0;
    for (double x : v) m += x;
    m /= static_cast<double>(v.size());
    double ss = 0;
    for (double x : v) ss += (x - m) * (x - m);
    return {m, std::sqrt(ss / static_cast<double>(v.size()))};
  };
  std::tie(s["mean_a1"], s["stddev_a1"]) = stats(a1);
  std::tie(s["mean_a2"], s["stddev_a2"]) = stats(a2);
  s["pass"] = failed == 0;
  return s;
}

int emit(const Batch& b, int dim, const std::string& format, bool with_summary, std::ostream& out) {
  if (format == "csv") {
    out << csv_header(dim) << '\n';
    for (const auto& r : b.records) out << csv_row(r) << '\n';
    if (with_summary) {
      const auto s = summary_json(b);
      out << "# summary " << dump_json(s) << '\n';
    }
  } else {
    json j;
    j["records"] = json::array();
    for (const auto& r : b.records) j["records"].push_back(record_json(r));
    if (with_summary) j["summary"] = summary_json(b);
    out << dump_json(j) << '\n';
  }
  const bool ok = std::all_of(b.records.begin(), b.records.end(), [](const Record& r) { return r.pass; });
  return ok ? 0 : 1;
}

// "lo:hi:n" -> n evenly spaced values.
std::vector<double> parse_axis(const std::string& s) {
  const auto parts = split(s, ':');
  if (parts.size() != 3) throw InputError("grid axis must be lo:hi:n, got '" + s + "'");
  const double lo = to_double(parts[0], "grid bound"), hi = to_double(parts[1], "grid bound");
  const int n = to_int(parts[2], "grid count");
  if (n <= 0) throw InputError("grid axis '" + s + "' is empty");
  std::vector<double> v;
  for (int i = 0; i < n; ++i) v.push_back(n == 1 ? lo : lo + (hi - lo) * i / (n - 1));
  return v;
}

std::vector<std::vector<cplx>> grid_points(const EvalRequest& req, const std::vector<std::string>& axes, int random,
                                           std::mt19937_64& rng) {
  const int d = req.base.d;
  std::vector<std::vector<cplx>> zs;
  if (!axes.empty()) {
    if (axes.size() != 1 && static_cast<int>(axes.size()) != d)
      throw InputError("give one grid axis or one per base coordinate (" + std::to_string(d) + ")");
    std::vector<std::vector<double>> ax;
    for (int i = 0; i < d; ++i) ax.push_back(parse_axis(axes[axes.size() == 1 ? 0 : static_cast<std::size_t>(i)]));
    std::vector<std::size_t> idx(static_cast<std::size_t>(d), 0);
    while (true) {
      std::vector<cplx> z;
      for (int i = 0; i < d; ++i) z.emplace_back(ax[static_cast<std::size_t>(i)][idx[static_cast<std::size_t>(i)]]);
      zs.push_back(std::move(z));
      int k = d - 1;
      while (k >= 0 && ++idx[static_cast<std::size_t>(k)] == ax[static_cast<std::size_t>(k)].size())
        idx[static_cast<std::size_t>(k--)] = 0;
      if (k < 0) break;
    }
  }
  if (random < 0) throw InputError("--random must be non-negative");
  std::normal_distribution<double> g(0.0, 0.5);
  for (int i = 0; i < random; ++i) {
    if (req.base.flat()) {
      std::vector<cplx> z;
      for (int k = 0; k < d; ++k) z.emplace_back(g(rng), g(rng));
      zs.push_back(std::move(z));
    } else {
      zs.push_back(random_point(*req.base.domain, 0.6, rng));
    }
  }
  if (zs.empty()) throw InputError("empty grid");
  if (!req.f) return zs;
  // w: direction uniform, ||w||^2 in [0.05, 0.9] e^{-phi}; points whose base
  // coordinate is outside the domain pass through unchanged so they get skipped.
  const auto base = req.base.potential(req.mu);
  std::vector<std::vector<cplx>> out;
  for (const auto& z : zs) {
    if (!req.base.contains(z)) {
      auto pt = z;
      pt.resize(static_cast<std::size_t>(d + req.d0), 0.0);
      out.push_back(std::move(pt));
      continue;
    }
    std::vector<std::vector<cplx>> one{z};
    out.push_back(hartogs_points(base, one, req.d0, rng)[0]);
  }
  return out;
}

json report_json(const ConstancyReport& r) {
  json j;
  j["samples"] = r.samples;
  j["mean_a1"] = r.mean_a1;
  j["mean_a2"] = r.mean_a2;
  j["stddev_a1"] = r.stddev_a1;
  j["stddev_a2"] = r.stddev_a2;
  j["max_oracle_closed_gap"] = r.max_oracle_closed_gap;
  j["constant"] = r.constant;
  j["incomplete"] = r.incomplete;
  j["notes"] = r.notes;
  j["pass"] = r.pass;
  return j;
}

json verdict_json(const ClassificationVerdict& v) {
  json j;
  j["constant"] = v.constant;
  if (v.f) j["F"] = v.f->describe();
  if (v.expected_a1 && v.expected_a2) j["expected"] = {{"a1", *v.expected_a1}, {"a2", *v.expected_a2}};
  j["reason"] = v.reason;
  if (v.constant) j["note"] = "nu = 1 representative; a scale nu divides a1 by nu and a2 by nu^2";
  return j;
}

// "general:A=..,B=..,C1=..,C2=.." | "d1fiber:a1=..,C=.." | "xx1" | "quad:A=.."
MomentumProfile parse_profile(const std::string& s, int d, int d0) {
  const auto colon = s.find(':');
  const std::string kind = s.substr(0, colon);
  std::map<std::string, double> kv;
  if (colon != std::string::npos) {
    for (const auto& item : split(s.substr(colon + 1), ',')) {
      const auto eq = item.find('=');
      if (eq == std::string::npos) throw InputError("profile parameter needs key=value: '" + item + "'");
      kv[item.substr(0, eq)] = to_double(item.substr(eq + 1), "profile parameter");
    }
  }
  auto get = [&](const char* k, double dflt) { return kv.count(k) ? kv[k] : dflt; };
  if (kind == "xx1") return profile_xx1();
  if (kind == "quad") return theorem_profile(TheoremKind::quad_d1, {get("A", 1.0)}, d);
  if (kind == "general") return profile_general_d01(d, get("A", 1), get("B", 0), get("C1", 0), get("C2", 0));
  if (kind == "d1fiber") return profile_d1_fiber(d0, get("a1", -1), get("C", 0));
  throw InputError("unknown profile '" + s + "'");
}

}  // namespace

// ---------------------------------------------------------------------------

BaseSpec BaseSpec::parse(const std::string& s) {
  const auto parts = split(s, ':');
  BaseSpec b;
  try {
    if (parts.size() == 2 && parts[0] == "ball") {
      b.domain = CartanDomain::ball(to_int(parts[1], "ball dimension"));
    } else if (parts.size() == 2 && parts[0] == "flat") {
      b.d = to_int(parts[1], "flat dimension");
      if (b.d < 1) throw InputError("flat dimension must be positive");
      return b;
    } else if (parts.size() == 3 && parts[0] == "cartan") {
      const auto args = split(parts[2], ',');
      if (parts[1] == "I" && args.size() == 2) {
        b.domain = CartanDomain::type_I(to_int(args[0], "m"), to_int(args[1], "n"));
      } else if (parts[1] == "II" && args.size() == 1) {
        b.domain = CartanDomain::type_II(to_int(args[0], "size"));
      } else if (parts[1] == "III" && args.size() == 1) {
        b.domain = CartanDomain::type_III(to_int(args[0], "n"));
      } else if (parts[1] == "IV" && args.size() == 1) {
        b.domain = CartanDomain::type_IV(to_int(args[0], "n"));
      } else {
        throw InputError("unknown Cartan domain '" + s + "'");
      }
    } else {
      throw InputError("unknown domain '" + s + "'");
    }
  } catch (const UnsupportedDomain& e) {
    throw InputError(e.what());
  }
  b.d = b.domain->d;
  return b;
}

PolarizedPotential BaseSpec::potential(double mu) const {
  if (domain) return base_potential(*domain, mu);
  const int n = d;
  return {n, [n, mu](std::span<const Jet> a) {
            Jet s(a[0].space_ptr());
            for (int i = 0; i < n; ++i) s += a[static_cast<std::size_t>(i)] * a[static_cast<std::size_t>(n + i)];
            return mu * s;
          }};
}

BaseInvariants BaseSpec::invariants(double mu) const {
  if (domain) return cartan_base_invariants(*domain, mu);
  return BaseInvariants::make(0, 0, 0, 0);
}

bool BaseSpec::contains(std::span<const cplx> z) const { return !domain || in_domain(*domain, z); }

std::optional<FSpec> parse_f(const std::string& s, int d0) {
  if (s == "none") return std::nullopt;
  const auto colon = s.find(':');
  const std::string kind = s.substr(0, colon);
  std::map<std::string, double> kv;
  if (colon != std::string::npos) {
    for (const auto& item : split(s.substr(colon + 1), ',')) {
      const auto eq = item.find('=');
      if (eq == std::string::npos) throw InputError("F parameter needs key=value: '" + item + "'");
      kv[item.substr(0, eq)] = to_double(item.substr(eq + 1), "F parameter");
    }
  }
  auto take = [&](const char* k, double dflt) {
    const auto it = kv.find(k);
    if (it == kv.end()) return dflt;
    const double v = it->second;
    kv.erase(it);
    return v;
  };
  FSpec f;
  f.d0 = d0;
  if (kind == "log") {
    const double A = take("A", 1.0), c = take("c", 1.0);
    f.family = LogType{A, c};
  } else if (kind == "exp") {
    f.family = ExpType{take("c", 1.0)};
  } else {
    throw InputError("unknown F kind '" + kind + "'");
  }
  if (!kv.empty()) throw InputError("unknown F parameter '" + kv.begin()->first + "'");
  try {
    check_parameters(f);
  } catch (const DomainViolation& e) {
    throw InputError(e.what());
  }
  return f;
}

std::vector<std::vector<cplx>> parse_points(const std::string& s, int dim) {
  std::vector<std::vector<cplx>> pts;
  auto finish = [&](std::vector<cplx> p) {
    if (static_cast<int>(p.size()) != dim)
      throw InputError("point has " + std::to_string(p.size()) + " coordinates, expected " + std::to_string(dim));
    pts.push_back(std::move(p));
  };
  const auto first = s.find_first_not_of(" \t\n");
  if (first != std::string::npos && s[first] == '[') {
    json j;
    try {
      j = json::parse(s);
    } catch (const json::exception& e) {
      throw InputError(std::string("points are not valid JSON: ") + e.what());
    }
    if (!j.is_array()) throw InputError("points must be a JSON array");
    for (const auto& p : j) {
      if (!p.is_array()) throw InputError("each point must be an array");
      std::vector<cplx> v;
      for (const auto& c : p) {
        if (c.is_number()) {
          v.emplace_back(c.get<double>());
        } else if (c.is_array() && c.size() == 2 && c[0].is_number() && c[1].is_number()) {
          v.emplace_back(c[0].get<double>(), c[1].get<double>());
        } else {
          throw InputError("coordinate must be a number or [re, im]");
        }
      }
      finish(std::move(v));
    }
  } else {
    std::ifstream in(s);
    if (!in) throw InputError("cannot open points file '" + s + "'");
    std::string line;
    while (std::getline(in, line)) {
      if (line.empty() || line[0] == '#') continue;
      std::vector<double> vals;
      for (const auto& cell : split(line, ',')) vals.push_back(to_double(cell, "CSV value"));
      std::vector<cplx> v;
      if (static_cast<int>(vals.size()) == 2 * dim) {
        for (std::size_t i = 0; i < vals.size(); i += 2) v.emplace_back(vals[i], vals[i + 1]);
      } else {
        for (double x : vals) v.emplace_back(x);
      }
      finish(std::move(v));
    }
  }
  if (pts.empty()) throw InputError("no points given");
  return pts;
}

std::string dump_json(const json& j) {
  std::ostringstream os;
  write_value(os, j);
  return os.str();
}

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Curvature invariants and Bergman expansion coefficients on Hartogs and Cartan-Hartogs domains",
               "berg"};
  app.require_subcommand(1);

  std::string domain = "ball:1", F = "none", paths = "both", points, format = "json";
  double mu = 1.0;
  int d0 = 1;
  auto add_common = [&](CLI::App* sub, bool with_f) {
    sub->add_option("--domain", domain, "ball:d | cartan:I:m,n | cartan:II:k | cartan:III:n | cartan:IV:n | flat:d");
    sub->add_option("--mu", mu, "potential scale, > 0");
    if (with_f) {
      sub->add_option("--d0", d0, "fiber dimension");
      sub->add_option("--F", F, "log:A=..,c=.. | exp:c=.. | none");
    }
  };

  auto* eval = app.add_subcommand("eval", "evaluate invariants at given points");
  add_common(eval, true);
  eval->add_option("--points", points, "inline JSON array or CSV path")->required();
  eval->add_option("--paths", paths, "oracle | closed | both");
  eval->add_option("--format", format, "json | csv");

  std::vector<std::string> axes;
  int random = 0;
  auto* sweep = app.add_subcommand("sweep", "evaluate invariants over a grid");
  add_common(sweep, true);
  sweep->add_option("--grid", axes, "lo:hi:n for the real part of each base coordinate (one axis for all, or one each)");
  sweep->add_option("--random", random, "additional random base points");
  sweep->add_option("--paths", paths, "oracle | closed | both");
  sweep->add_option("--format", format, "json | csv");

  auto* coeffs = app.add_subcommand("cartan-coeffs", "closed-form a1, a2 of a Cartan domain");
  add_common(coeffs, false);
  auto* poly = app.add_subcommand("bergman-poly", "exact Bergman function polynomial in alpha");
  add_common(poly, false);

  int cd = 0;
  double a1 = 0, a2 = 0;
  auto* classify_cmd = app.add_subcommand("classify", "constant-coefficient verdict");
  auto* opt_d = classify_cmd->add_option("--d", cd, "base dimension");
  classify_cmd->add_option("--d0", d0, "fiber dimension");
  auto* opt_a1 = classify_cmd->add_option("--a1", a1, "base a1");
  auto* opt_a2 = classify_cmd->add_option("--a2", a2, "base a2");
  auto* opt_dom = classify_cmd->add_option("--domain", domain, "Cartan base instead of explicit invariants");
  classify_cmd->add_option("--mu", mu, "potential scale with --domain");
  opt_dom->excludes(opt_d)->excludes(opt_a1)->excludes(opt_a2);

  std::string mode = "analytic-x", expect = "auto", profile_s;
  int samples = 0, maps = 5;
  std::optional<double> x_lo, x_hi, va1, va2;
  auto* verify = app.add_subcommand("verify", "constancy and invariance suites");
  add_common(verify, true);
  verify->add_option("--mode", mode, "analytic-x | oracle-grid | pullback");
  verify->add_option("--expect", expect, "constant | varying | auto");
  verify->add_option("--samples", samples, "sample count");
  verify->add_option("--x-lo", x_lo, "analytic-x interval start");
  verify->add_option("--x-hi", x_hi, "analytic-x interval end");
  verify->add_option("--profile", profile_s, "xx1 | quad:A=.. | general:A=..,B=..,C1=..,C2=.. | d1fiber:a1=..,C=..");
  verify->add_option("--a1", va1, "override the base a1");
  verify->add_option("--a2", va2, "override the base a2");
  verify->add_option("--maps", maps, "automorphisms per point (pullback)");

  std::vector<const char*> argv{"berg"};
  for (const auto& a : args) argv.push_back(a.c_str());
  try {
    app.parse(static_cast<int>(argv.size()), argv.data());
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return 0;
  } catch (const CLI::CallForAllHelp&) {
    out << app.help("", CLI::AppFormatMode::All);
    return 0;
  } catch (const CLI::ParseError& e) {
    err << "error: " << e.what() << '\n';
    return 2;
  }

  try {
    if (format != "json" && format != "csv") throw InputError("format must be json or csv");
    const std::uint64_t seed = seed_from_env();
    std::mt19937_64 rng(seed);

    if (eval->parsed() || sweep->parsed()) {
      const auto req = make_request(domain, mu, d0, F, paths);
      if (eval->parsed()) {
        const auto b = evaluate_all(req, parse_points(points, req.dim()), false);
        return emit(b, req.dim(), format, false, out);
      }
      const auto pts = grid_points(req, axes, random, rng);
      const auto b = evaluate_all(req, pts, true);
      if (b.skipped > 0) err << "warning: skipped " << b.skipped << " point(s) outside the domain\n";
      return emit(b, req.dim(), format, true, out);
    }

    if (coeffs->parsed() || poly->parsed()) {
      const auto base = BaseSpec::parse(domain);
      if (base.flat()) throw InputError("flat base has no Bergman polynomial");
      if (!(mu > 0.0)) throw InputError("mu must be positive");
      const auto& dom = *base.domain;
      json j;
      if (coeffs->parsed()) {
        j["domain"] = dom.name();
        j["a1"] = cartan_a1(dom, mu);
        j["a2"] = cartan_a2(dom, mu);
        j["p"] = dom.p;
        j["d"] = dom.d;
        j["a"] = dom.a;
        j["b"] = dom.b;
        j["r"] = dom.r;
        if (auto q = rational_mu(mu)) {
          j["a1_exact"] = cartan_a1_exact(dom, *q).str();
          j["a2_exact"] = cartan_a2_exact(dom, *q).str();
        }
      } else {
        const auto bp = bergman_poly(dom, mu);
        j["domain"] = dom.name();
        j["degree"] = bp.degree();
        j["exact"] = bp.exact;
        j["coefficients"] = bp.coefficients();
        json s = json::array();
        for (int k = bp.degree(); k >= 0; --k) s.push_back(bp.coefficient_string(k));
        j["coefficients_exact"] = s;
        const auto a = extract_coeffs(bp);
        j["a1"] = a[1];
        j["a2"] = a[2];
      }
      out << dump_json(j) << '\n';
      return 0;
    }

    if (classify_cmd->parsed()) {
      if (d0 < 1) throw InputError("d0 must be a positive integer");
      ClassificationVerdict v;
      if (opt_dom->count() > 0) {
        const auto base = BaseSpec::parse(domain);
        if (base.flat()) throw InputError("classify --domain needs a Cartan domain");
        if (!(mu > 0.0)) throw InputError("mu must be positive");
        v = cartan_hartogs_verdict(*base.domain, mu, d0);
      } else {
        if (opt_d->count() == 0 || opt_a1->count() == 0 || opt_a2->count() == 0)
          throw InputError("classify needs --d, --a1 and --a2 (or --domain)");
        if (cd < 1) throw InputError("d must be a positive integer");
        v = classify(cd, d0, a1, a2);
      }
      out << dump_json(verdict_json(v)) << '\n';
      return 0;
    }

    if (verify->parsed()) {
      const auto base = BaseSpec::parse(domain);
      if (!(mu > 0.0)) throw InputError("mu must be positive");
      if (d0 < 1) throw InputError("d0 must be a positive integer");
      auto f = parse_f(F, d0);
      std::optional<ClassificationVerdict> verdict;
      if (base.domain) verdict = cartan_hartogs_verdict(*base.domain, mu, d0);
      if (!f && profile_s.empty()) {
        if (!verdict || !verdict->constant) throw InputError("no --F given and the configuration is not classified");
        f = verdict->f;
      }
      const auto binv = base.invariants(mu);
      const double ba1 = va1.value_or(binv.a1), ba2 = va2.value_or(binv.a2);

      bool expect_constant;
      if (expect == "constant") {
        expect_constant = true;
      } else if (expect == "varying") {
        expect_constant = false;
      } else if (expect == "auto") {
        expect_constant = classify(base.d, d0, ba1, ba2).constant && f && profile_s.empty() &&
                          classify(base.d, d0, ba1, ba2).f->describe() == f->describe();
      } else {
        throw InputError("expect must be constant, varying or auto");
      }

      json j;
      j["mode"] = mode;
      j["domain"] = domain;
      j["expect_constant"] = expect_constant;
      bool pass = false;
      if (mode == "analytic-x") {
        AnalyticConfig cfg;
        cfg.profile = profile_s.empty() ? profile_from_F(*f) : parse_profile(profile_s, base.d, d0);
        cfg.d = base.d;
        cfg.d0 = d0;
        cfg.a1_base = ba1;
        cfg.a2_base = ba2;
        cfg.x_lo = x_lo;
        cfg.x_hi = x_hi;
        if (samples) cfg.samples = samples;
        cfg.expect_constant = expect_constant;
        cfg.f = f;
        const auto rep = verify_constancy_analytic(cfg);
        j["report"] = report_json(rep);
        pass = rep.pass;
      } else if (mode == "oracle-grid" || mode == "pullback") {
        if (!f) throw InputError(mode + " needs --F");
        EvalRequest req;
        req.base = base;
        req.mu = mu;
        req.d0 = d0;
        req.f = f;
        const auto pts = grid_points(req, {}, samples ? samples : (mode == "pullback" ? 3 : 10), rng);
        if (mode == "oracle-grid") {
          OracleGridConfig cfg{base.potential(mu), base.d, *f, pts, binv, expect_constant};
          const auto rep = verify_constancy_oracle(cfg);
          j["report"] = report_json(rep);
          pass = rep.pass;
        } else {
          if (!base.domain || !base.domain->is_ball()) throw InputError("pullback needs a ball domain");
          std::vector<BallAutomorphism> ms;
          for (int i = 0; i < maps; ++i) ms.push_back(BallAutomorphism::random(base.d, d0, mu, 0.5, rng));
          const double dev = pullback_invariance_check(*base.domain, mu, *f, ms, pts);
          j["max_deviation"] = dev;
          pass = dev < 1e-8;
        }
      } else {
        throw InputError("unknown mode '" + mode + "'");
      }
      j["pass"] = pass;
      out << dump_json(j) << '\n';
      return pass ? 0 : 1;
    }
  } catch (const InputError& e) {
    err << "error: " << e.what() << '\n';
    return 2;
  } catch (const Error& e) {
    err << "error: " << e.what() << '\n';
    return 2;
  }
  return 2;
}

}  // namespace berg::cli
