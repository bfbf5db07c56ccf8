#include "wce/instance.hpp"

#include <json.hpp>

#include <cstdint>
#include <sstream>
#include <utility>

namespace wce {

using nlohmann::json;

namespace {

Complex parse_complex(const json& j) {
  if (!j.is_array() || j.size() != 2 || !j[0].is_number() ||
      !j[1].is_number())
    throw InputError("bad_complex",
                     "complex numbers must be [re, im] number pairs");
  return Complex(j[0].get<double>(), j[1].get<double>());
}

Fn parse_fn(const json& j, int n, const char* code, const char* what) {
  if (!j.is_array() || static_cast<int>(j.size()) != n)
    throw InputError(code, what);
  Fn f(n);
  for (int i = 0; i < n; ++i) f[i] = parse_complex(j[i]);
  return f;
}

std::vector<PointSet> parse_atoms(const json& j, const char* code,
                                  const char* what) {
  if (!j.is_array() || j.empty()) throw InputError(code, what);
  std::vector<PointSet> atoms;
  for (const auto& atom : j) {
    if (!atom.is_array()) throw InputError(code, what);
    PointSet s;
    for (const auto& v : atom) {
      if (!v.is_number_integer()) throw InputError(code, what);
      s.push_back(v.get<int>());
    }
    atoms.push_back(std::move(s));
  }
  return atoms;
}

json complex_to_json(const Complex& z) {
  return json::array({z.real(), z.imag()});
}

bool same_weights(const Weights& a, const Weights& b) {
  return a.size() == b.size() && (a.array() == b.array()).all();
}

bool same_fn(const Fn& a, const Fn& b) {
  return a.size() == b.size() && (a.array() == b.array()).all();
}

bool same_span(const std::optional<std::vector<Fn>>& a,
               const std::optional<std::vector<Fn>>& b) {
  if (a.has_value() != b.has_value()) return false;
  if (!a) return true;
  if (a->size() != b->size()) return false;
  for (std::size_t i = 0; i < a->size(); ++i)
    if (!same_fn((*a)[i], (*b)[i])) return false;
  return true;
}

}  // namespace

MeasureSpace Instance::make_space() const { return MeasureSpace(mu); }

Partition Instance::make_algebra() const {
  return Partition::from_atoms(a_atoms, points);
}

std::optional<Partition> Instance::make_subalgebra() const {
  if (!b_atoms) return std::nullopt;
  return Partition::from_atoms(*b_atoms, points);
}

WceOperator Instance::make_operator() const {
  return wce(make_algebra(), u, make_space());
}

bool operator==(const Instance& lhs, const Instance& rhs) {
  return lhs.points == rhs.points && same_weights(lhs.mu, rhs.mu) &&
         same_fn(lhs.u, rhs.u) && lhs.a_atoms == rhs.a_atoms &&
         lhs.b_atoms == rhs.b_atoms && lhs.set == rhs.set &&
         same_span(lhs.span, rhs.span) && lhs.tol == rhs.tol;
}

Instance parse_instance(const std::string& text) {
  json j = json::parse(text, nullptr, false);
  if (j.is_discarded())
    throw InputError("parse_error", "input is not well-formed");
  if (!j.is_object())
    throw InputError("not_an_object", "instance must be an object");

  Instance inst;

  if (!j.contains("points"))
    throw InputError("missing_points", "field 'points' is required");
  if (!j["points"].is_number_integer() || j["points"].get<int>() <= 0)
    throw InputError("bad_points", "'points' must be a positive integer");
  inst.points = j["points"].get<int>();
  const int n = inst.points;

  if (!j.contains("mu"))
    throw InputError("missing_mu", "field 'mu' is required");
  if (!j["mu"].is_array() || static_cast<int>(j["mu"].size()) != n)
    throw InputError("bad_mu", "'mu' must list one weight per point");
  inst.mu.resize(n);
  for (int i = 0; i < n; ++i) {
    if (!j["mu"][i].is_number())
      throw InputError("bad_mu", "'mu' entries must be numbers");
    inst.mu[i] = j["mu"][i].get<double>();
  }

  if (!j.contains("u")) throw InputError("missing_u", "field 'u' is required");
  inst.u = parse_fn(j["u"], n, "bad_u", "'u' must list one value per point");

  if (!j.contains("A"))
    throw InputError("missing_algebra", "field 'A' is required");
  inst.a_atoms =
      parse_atoms(j["A"], "bad_algebra", "'A' must be a list of atom lists");

  if (j.contains("B"))
    inst.b_atoms = parse_atoms(j["B"], "bad_subalgebra",
                               "'B' must be a list of atom lists");

  if (j.contains("set")) {
    if (!j["set"].is_array())
      throw InputError("bad_set", "'set' must be a list of point indices");
    PointSet s;
    for (const auto& v : j["set"]) {
      if (!v.is_number_integer())
        throw InputError("bad_set", "'set' entries must be integers");
      s.push_back(v.get<int>());
    }
    inst.set = std::move(s);
  }

  if (j.contains("span")) {
    if (!j["span"].is_array() || j["span"].empty())
      throw InputError("bad_span", "'span' must be a nonempty list");
    std::vector<Fn> fns;
    for (const auto& row : j["span"])
      fns.push_back(
          parse_fn(row, n, "bad_span", "span vectors must match 'points'"));
    inst.span = std::move(fns);
  }

  if (j.contains("tol")) {
    if (!j["tol"].is_number() || j["tol"].get<double>() <= 0.0)
      throw InputError("bad_tol", "'tol' must be a positive number");
    inst.tol = j["tol"].get<double>();
  }

  return inst;
}

std::string serialize_instance(const Instance& inst) {
  json j;
  j["points"] = inst.points;
  j["mu"] = json::array();
  for (int i = 0; i < inst.points; ++i) j["mu"].push_back(inst.mu[i]);
  j["u"] = json::array();
  for (int i = 0; i < inst.points; ++i)
    j["u"].push_back(complex_to_json(inst.u[i]));
  j["A"] = inst.a_atoms;
  if (inst.b_atoms) j["B"] = *inst.b_atoms;
  if (inst.set) j["set"] = *inst.set;
  if (inst.span) {
    j["span"] = json::array();
    for (const auto& f : *inst.span) {
      json row = json::array();
      for (int i = 0; i < inst.points; ++i)
        row.push_back(complex_to_json(f[i]));
      j["span"].push_back(std::move(row));
    }
  }
  j["tol"] = inst.tol;
  return j.dump();
}

std::string instance_digest(const Instance& inst) {
  std::string bytes = serialize_instance(inst);
  std::uint64_t h = 1469598103934665603ull;
  for (unsigned char c : bytes) {
    h ^= c;
    h *= 1099511628211ull;
  }
  std::ostringstream out;
  out << std::hex;
  for (int shift = 60; shift >= 0; shift -= 4)
    out << ((h >> shift) & 0xf);
  return out.str();
}

}  // namespace wce
