#pragma once

// JSON, plain-text and LaTeX forms of the library's objects.

#include <cctype>
#include <fstream>
#include <limits>
#include <sstream>
#include <string>
#include <vector>

#include "json.hpp"
#include "toricchow/orbifold.hpp"

namespace toricchow::io {

using Json = nlohmann::json;

// Integers are JSON numbers when they fit in 64 bits, decimal strings otherwise.
inline Json to_json(const Integer& a) {
  if (a.fits_slong_p()) return static_cast<std::int64_t>(a.get_si());
  return a.get_str();
}

inline Integer integer_from_json(const Json& j, const std::string& what) {
  if (j.is_number_integer()) return Integer(std::to_string(j.get<std::int64_t>()));
  if (j.is_string()) {
    const std::string s = j.get<std::string>();
    Integer a;
    if (s.empty() || a.set_str(s, 10) != 0) throw InvalidInput(what + ": '" + s + "' is not an integer");
    return a;
  }
  throw InvalidInput(what + ": expected an integer");
}

inline Json to_json(const IntVector& v) {
  Json out = Json::array();
  for (const auto& x : v) out.push_back(to_json(x));
  return out;
}

inline IntVector vector_from_json(const Json& j, const std::string& what) {
  if (!j.is_array()) throw InvalidInput(what + ": expected an array of integers");
  IntVector v;
  for (const auto& x : j) v.push_back(integer_from_json(x, what));
  return v;
}

inline Json to_json(const Rational& q) { return Json{{"num", to_json(Integer(q.get_num()))}, {"den", to_json(Integer(q.get_den()))}}; }

inline Rational rational_from_json(const Json& j, const std::string& what) {
  if (j.is_number_integer() || j.is_string()) return Rational(integer_from_json(j, what));
  if (!j.is_object() || !j.contains("num")) throw InvalidInput(what + ": expected {\"num\", \"den\"}");
  const Integer num = integer_from_json(j.at("num"), what);
  const Integer den = j.contains("den") ? integer_from_json(j.at("den"), what) : Integer(1);
  if (den <= 0) throw InvalidInput(what + ": denominator must be positive");
  return make_rational(num, den);
}

inline Json to_json(const IntMatrix& m) {
  Json out = Json::array();
  for (std::size_t i = 0; i < m.rows(); ++i) out.push_back(to_json(m.row(i)));
  return out;
}

inline Json to_json(const FgAbGroup& g) {
  return Json{{"rank", g.rank}, {"torsion", to_json(g.torsion)}, {"text", g.to_string()}};
}

inline FgAbGroup group_from_json(const Json& j) {
  if (!j.is_object() || !j.contains("rank")) throw InvalidInput("group: expected {\"rank\", \"torsion\"}");
  const Integer rank = integer_from_json(j.at("rank"), "group rank");
  if (rank < 0 || rank > 64) throw InvalidInput("group rank out of range");
  FgAbGroup g;
  g.rank = rank.get_ui();
  if (j.contains("torsion")) g.torsion = vector_from_json(j.at("torsion"), "group torsion");
  for (std::size_t i = 0; i < g.torsion.size(); ++i) {
    if (g.torsion[i] <= 1) throw InvalidInput("torsion orders must exceed 1");
    if (i > 0 && g.torsion[i] % g.torsion[i - 1] != 0)
      throw InvalidInput("torsion orders must form a divisibility chain");
  }
  return g;
}

inline Json to_json(const Cone& c) {
  Json out = Json::array();
  for (auto i : c) out.push_back(i);
  return out;
}

// ---- stacky fans ---------------------------------------------------------

inline StackyFan stacky_fan_from_json(const Json& j) {
  if (!j.is_object()) throw InvalidInput("stacky fan: expected a JSON object");
  for (const char* key : {"group", "rays", "max_cones"})
    if (!j.contains(key)) throw InvalidInput(std::string("stacky fan: missing key '") + key + "'");
  const std::string name = j.contains("name") && j.at("name").is_string() ? j.at("name").get<std::string>() : "";
  const FgAbGroup g = group_from_json(j.at("group"));
  if (!j.at("rays").is_array()) throw InvalidInput("stacky fan: 'rays' must be an array");
  std::vector<IntVector> rays;
  for (const auto& r : j.at("rays")) rays.push_back(vector_from_json(r, "ray"));
  if (!j.at("max_cones").is_array()) throw InvalidInput("stacky fan: 'max_cones' must be an array");
  std::vector<Cone> cones;
  for (const auto& c : j.at("max_cones")) {
    if (!c.is_array()) throw InvalidInput("stacky fan: each cone must be an array of ray indices");
    Cone cone;
    for (const auto& x : c) {
      if (!x.is_number_integer() || x.get<std::int64_t>() < 0 || x.get<std::int64_t>() >= std::int64_t(rays.size()))
        throw InvalidInput("stacky fan: cone index out of range");
      cone.push_back(x.get<std::size_t>());
    }
    std::sort(cone.begin(), cone.end());
    if (std::adjacent_find(cone.begin(), cone.end()) != cone.end())
      throw InvalidInput("stacky fan: repeated ray in a cone");
    cones.push_back(cone);
  }
  return make_stacky_fan(name, g, rays, cones);
}

inline Json to_json(const StackyFan& sf) {
  Json rays = Json::array();
  for (std::size_t i = 0; i < sf.num_rays(); ++i) rays.push_back(to_json(sf.ray(i)));
  Json cones = Json::array();
  for (const auto& c : sf.fan.max_cones) cones.push_back(to_json(c));
  return Json{{"name", sf.name},
              {"group", Json{{"rank", sf.group.rank}, {"torsion", to_json(sf.group.torsion)}}},
              {"rays", rays},
              {"max_cones", cones}};
}

// ---- presentations -------------------------------------------------------

inline Json to_json(const Polynomial& p) {
  Json out = Json::array();
  for (const auto& [e, c] : p.terms()) {
    Json ex = Json::array();
    for (auto x : e) ex.push_back(x);
    out.push_back(Json{{"coeff", to_json(c)}, {"exponents", ex}});
  }
  return out;
}

inline Json to_json(const GradedPresentation& p) {
  Json gens = Json::array();
  for (const auto& g : p.generators) gens.push_back(Json{{"name", g.name}, {"degree", to_json(g.degree)}});
  Json rels = Json::array();
  for (const auto& r : p.relations) rels.push_back(to_json(r));
  Json out{{"generators", gens}, {"relations", rels}};
  if (!p.notes.empty()) out["notes"] = p.notes;
  if (!p.box_labels.empty()) {
    Json labels = Json::array();
    for (const auto& [name, label] : p.box_labels) labels.push_back(Json{{"name", name}, {"label", label}});
    out["box_labels"] = labels;
  }
  return out;
}

inline GradedPresentation presentation_from_json(const Json& j) {
  if (!j.is_object() || !j.contains("generators") || !j.contains("relations"))
    throw InvalidInput("presentation: expected {\"generators\", \"relations\"}");
  GradedPresentation p;
  for (const auto& g : j.at("generators")) {
    if (!g.is_object() || !g.contains("name") || !g.at("name").is_string() || !g.contains("degree"))
      throw InvalidInput("presentation: generator needs a name and a degree");
    const Rational d = rational_from_json(g.at("degree"), "generator degree");
    if (d < 0) throw InvalidInput("presentation: negative generator degree");
    const std::string name = g.at("name").get<std::string>();
    if (name.empty() || p.index_of(name)) throw InvalidInput("presentation: empty or repeated generator name '" + name + "'");
    p.generators.push_back({name, d});
  }
  const std::size_t n = p.size();
  for (const auto& r : j.at("relations")) {
    if (!r.is_array()) throw InvalidInput("presentation: relation must be an array of terms");
    Polynomial poly(n);
    for (const auto& t : r) {
      if (!t.is_object() || !t.contains("coeff") || !t.contains("exponents"))
        throw InvalidInput("presentation: term needs 'coeff' and 'exponents'");
      const auto& ex = t.at("exponents");
      if (!ex.is_array() || ex.size() != n) throw InvalidInput("presentation: exponent vector has wrong length");
      Exponents e;
      for (const auto& x : ex) {
        if (!x.is_number_integer() || x.get<std::int64_t>() < 0 ||
            x.get<std::int64_t>() > std::numeric_limits<std::uint32_t>::max())
          throw InvalidInput("presentation: exponents must be small nonnegative integers");
        e.push_back(x.get<std::uint32_t>());
      }
      poly.add_term(e, integer_from_json(t.at("coeff"), "coefficient"));
    }
    p.relations.push_back(poly);
  }
  if (j.contains("notes"))
    for (const auto& s : j.at("notes"))
      if (s.is_string()) p.notes.push_back(s.get<std::string>());
  if (j.contains("box_labels"))
    for (const auto& b : j.at("box_labels")) {
      if (!b.is_object() || !b.contains("name") || !b.contains("label") || !b.at("name").is_string() ||
          !b.at("label").is_string())
        throw InvalidInput("presentation: box label needs a name and a label");
      p.box_labels.emplace_back(b.at("name").get<std::string>(), b.at("label").get<std::string>());
    }
  p.check();
  return p;
}

inline Json to_json(const GradedGroupTable& t) {
  Json out = Json::array();
  for (const auto& [d, g] : t) out.push_back(Json{{"degree", to_json(d)}, {"group", to_json(g)}});
  return out;
}

// ---- files ---------------------------------------------------------------

inline Json read_json_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw InvalidInput("cannot open " + path);
  try {
    return Json::parse(in);
  } catch (const Json::parse_error& e) {
    throw InvalidInput(path + ": " + e.what());
  }
}

// ---- text and LaTeX ------------------------------------------------------

inline std::string text(const GradedPresentation& p) {
  std::ostringstream os;
  os << "generators:";
  for (const auto& g : p.generators) os << " " << g.name << "[" << g.degree.get_str() << "]";
  os << "\nrelations:\n";
  const auto names = p.names();
  for (const auto& r : p.relations) os << "  " << r.to_string(names) << "\n";
  for (const auto& [name, label] : p.box_labels) os << "box " << name << " = " << label << "\n";
  for (const auto& n : p.notes) os << "note: " << n << "\n";
  return os.str();
}

inline std::string text(const GradedGroupTable& t) {
  std::ostringstream os;
  for (const auto& [d, g] : t) os << "degree " << d.get_str() << ": " << g.to_string() << "\n";
  return os.str();
}

/// x12 -> x_{12}; names without a trailing number are kept.
inline std::string latex_name(const std::string& name) {
  std::size_t k = name.size();
  while (k > 0 && std::isdigit(static_cast<unsigned char>(name[k - 1]))) --k;
  if (k == 0 || k == name.size()) return name;
  return name.substr(0, k) + "_{" + name.substr(k) + "}";
}

inline std::string latex(const Polynomial& p, const std::vector<std::string>& names) {
  if (p.is_zero()) return "0";
  std::string s;
  bool first = true;
  for (const auto& [e, c] : p.terms()) {
    const Integer a = abs(c);
    s += c < 0 ? "-" : (first ? "" : "+");
    first = false;
    std::string mono;
    for (std::size_t i = 0; i < e.size(); ++i) {
      if (e[i] == 0) continue;
      mono += latex_name(names.at(i));
      if (e[i] > 1) mono += "^{" + std::to_string(e[i]) + "}";
    }
    if (mono.empty())
      s += a.get_str();
    else
      s += (a == 1 ? "" : a.get_str()) + mono;
  }
  return s;
}

inline std::string latex(const GradedPresentation& p) {
  std::string s = "\\mathbb{Z}[";
  const auto names = p.names();
  for (std::size_t i = 0; i < names.size(); ++i) s += (i ? "," : "") + latex_name(names[i]);
  s += "]/(";
  for (std::size_t i = 0; i < p.relations.size(); ++i) s += (i ? ", " : "") + latex(p.relations[i], names);
  return s + ")";
}

inline std::string latex(const FgAbGroup& g) {
  std::vector<std::string> parts;
  if (g.rank == 1) parts.push_back("\\mathbb{Z}");
  if (g.rank > 1) parts.push_back("\\mathbb{Z}^{" + std::to_string(g.rank) + "}");
  for (const auto& t : g.torsion) parts.push_back("\\mathbb{Z}/" + t.get_str());
  if (parts.empty()) return "0";
  std::string s;
  for (std::size_t i = 0; i < parts.size(); ++i) s += (i ? "\\oplus " : "") + parts[i];
  return s;
}

inline std::string latex(const GradedGroupTable& t) {
  std::string s = "\\begin{tabular}{ll}\n";
  for (const auto& [d, g] : t) s += d.get_str() + " & $" + latex(g) + "$\\\\\n";
  return s + "\\end{tabular}\n";
}

}  // namespace toricchow::io
