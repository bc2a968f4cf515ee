#pragma once

// Command-line front end. run() is the whole program; main() only forwards.

#include <fstream>
#include <iostream>
#include <optional>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "toricchow/io.hpp"

namespace toricchow::cli {

enum ExitCode : int { ok = 0, invalid_input = 1, hypothesis = 2, resource_limit = 3 };

struct Options {
  std::string format = "text";
  std::string out;
  std::optional<std::uint64_t> seed;
  std::size_t limit_monomials = 200000;

  EngineLimits limits() const {
    EngineLimits l;
    l.max_monomials = limit_monomials;
    return l;
  }
};

struct Document {
  io::Json json;
  std::string text;
  std::string latex;
};

namespace detail {

using io::Json;

inline StackyFan load_fan(const std::string& path) { return io::stacky_fan_from_json(io::read_json_file(path)); }

inline StackyFan load_valid_fan(const std::string& path) {
  StackyFan sf = load_fan(path);
  require_valid(sf);
  return sf;
}

inline Rational parse_degree(const std::string& s) {
  Rational q;
  if (s.empty() || q.set_str(s, 10) != 0) throw InvalidInput("degree '" + s + "' is not a rational number");
  q.canonicalize();
  if (q < 0) throw InvalidInput("degree must be nonnegative");
  return q;
}

inline std::string verbatim(const std::string& text) {
  return "\\begin{verbatim}\n" + text + "\\end{verbatim}\n";
}

/// A ring from either a presentation file or a stacky-fan file.
inline GradedPresentation load_ring(const std::string& path, const std::string& ring) {
  const Json j = io::read_json_file(path);
  if (j.is_object() && j.contains("generators")) return io::presentation_from_json(j);
  if (j.is_object() && j.contains("presentation")) return io::presentation_from_json(j.at("presentation"));
  StackyFan sf = io::stacky_fan_from_json(j);
  require_valid(sf);
  return ring == "orbifold" ? orbifold_chow_ring(sf) : chow_ring(sf);
}

inline void attach_table(Document& d, const GradedPresentation& p, const std::optional<Rational>& max_degree,
                         const Options& o) {
  if (!max_degree) return;
  const GradedGroupTable t = graded_pieces(p, *max_degree, o.limits());
  d.json["graded_pieces"] = io::to_json(t);
  d.text += "graded pieces:\n" + io::text(t);
  d.latex += "\n" + io::latex(t);
}

inline Document cmd_validate(const std::string& path) {
  const StackyFan sf = load_fan(path);
  const StackyValidation v = validate(sf);
  Document d;
  d.json = Json{{"command", "validate"}, {"name", sf.name}, {"valid", v.ok()},
                {"torsion_generated", v.torsion_generated}, {"diagnostics", v.diagnostics}};
  std::ostringstream os;
  os << (v.ok() ? "VALID" : "INVALID") << "\n";
  if (v.ok()) os << "torsion generated: " << (v.torsion_generated ? "yes" : "no") << "\n";
  for (const auto& m : v.diagnostics) os << "  " << m << "\n";
  d.text = os.str();
  d.latex = verbatim(d.text);
  return d;
}

inline Document cmd_gale(const std::string& path) {
  const StackyFan sf = load_valid_fan(path);
  const GaleDual g = gale_dual(sf.beta_hom());
  const FgAbGroup& mu = g.dual_cokernel.target;
  Document d;
  d.json = Json{{"command", "gale"}, {"name", sf.name}, {"beta_dual", io::to_json(g.beta_dual.matrix)},
                {"dual_group", io::to_json(g.ndual)}, {"mu", io::to_json(mu)}};
  d.text = "beta_dual:\n" + g.beta_dual.matrix.to_string() + "\ndual group: " + g.ndual.to_string() +
           "\nmu: " + mu.to_string() + "\n";
  d.latex = verbatim(d.text);
  return d;
}

inline Document cmd_decompose(const std::string& path) {
  const StackyFan sf = load_valid_fan(path);
  const Decomposition dec = decompose(sf);
  Document d;
  d.json = Json{{"command", "decompose"}, {"name", sf.name}, {"core", io::to_json(dec.core)},
                {"mu", io::to_json(dec.mu)}, {"trivial", dec.trivial},
                {"core_torsion_generated", torsion_generated(dec.core)}};
  std::ostringstream os;
  os << "core group: " << dec.core.group.to_string() << "\ncore rays:\n";
  for (std::size_t i = 0; i < dec.core.num_rays(); ++i) os << "  " << element_label(dec.core.ray(i)) << "\n";
  os << "mu: " << dec.mu.to_string() << "\ncore torsion generated: " << (torsion_generated(dec.core) ? "yes" : "no")
     << "\n";
  d.text = os.str();
  d.latex = verbatim(d.text);
  return d;
}

inline Json box_json(const BoxElement& b) {
  Json fr = Json::array();
  for (const auto& a : b.fractional_coords) fr.push_back(io::to_json(a));
  return Json{{"label", b.label}, {"element", io::to_json(b.element)}, {"cone", io::to_json(b.cone)},
              {"fractional_coords", fr}, {"age", io::to_json(b.age)}};
}

inline std::string box_line(const BoxElement& b) {
  std::string fr;
  for (std::size_t k = 0; k < b.fractional_coords.size(); ++k)
    fr += (k ? "," : "") + b.fractional_coords[k].get_str();
  return b.label + "  cone " + cone_to_string(b.cone) + "  coords (" + fr + ")  age " + b.age.get_str();
}

inline Document cmd_boxes(const std::string& path) {
  const StackyFan sf = load_valid_fan(path);
  const auto boxes = enumerate_boxes(sf);
  Document d;
  Json list = Json::array();
  std::string text = std::to_string(boxes.size() - 1) + " nonzero box elements\n";
  std::string tab = "\\begin{tabular}{lll}\nelement & cone & age\\\\\n";
  for (const auto& b : boxes) {
    list.push_back(box_json(b));
    if (b.is_zero()) continue;
    text += "  " + box_line(b) + "\n";
    tab += "$" + b.label + "$ & $" + cone_to_string(b.cone) + "$ & $" + b.age.get_str() + "$\\\\\n";
  }
  d.json = Json{{"command", "boxes"}, {"name", sf.name}, {"nonzero", boxes.size() - 1}, {"boxes", list}};
  d.text = text;
  d.latex = tab + "\\end{tabular}\n";
  return d;
}

inline Document cmd_inertia(const std::string& path, int order) {
  const StackyFan sf = load_valid_fan(path);
  Document d;
  std::ostringstream os;
  Json list = Json::array();
  if (order == 1) {
    const auto comps = inertia_components(sf);
    os << comps.size() << " components\n";
    for (const auto& c : comps) {
      list.push_back(Json{{"box", box_json(c.box)}, {"local_group", io::to_json(c.local_group)},
                          {"sector", io::to_json(c.sector)}});
      os << "  " << c.box.label << "  age " << c.box.age.get_str() << "  local " << c.local_group.to_string()
         << "  sector " << c.sector.group.to_string() << " with " << c.sector.num_rays() << " rays\n";
    }
  } else {
    const auto boxes = enumerate_boxes(sf);
    const auto triples = twisted_triples(sf, boxes);
    os << triples.size() << " components\n";
    for (const auto& t : triples) {
      list.push_back(Json{{"boxes", {boxes[t.v1].label, boxes[t.v2].label, boxes[t.v3].label}},
                          {"cone", io::to_json(t.cone)},
                          {"sector", io::to_json(t.sector)}});
      os << "  " << boxes[t.v1].label << " " << boxes[t.v2].label << " " << boxes[t.v3].label << "  cone "
         << cone_to_string(t.cone) << "  sector " << t.sector.group.to_string() << "\n";
    }
  }
  d.json = Json{{"command", "inertia"}, {"name", sf.name}, {"order", order}, {"components", list}};
  d.text = os.str();
  d.latex = verbatim(d.text);
  return d;
}

inline Json chow_self_check(const GradedPresentation& p, std::uint64_t seed, const Options& o) {
  std::mt19937_64 rng(seed);
  std::uniform_int_distribution<long> coef(-5, 5);
  GradedEngine e(p, o.limits());
  std::size_t checks = 0, failures = 0;
  for (int k = 0; k < 20 && !p.relations.empty(); ++k) {
    const Polynomial& r = p.relations[rng() % p.relations.size()];
    Polynomial f = Integer(coef(rng)) * r;
    if (p.size() > 0) f = f * Polynomial::variable(p.size(), rng() % p.size());
    ++checks;
    if (!e.in_ideal(f)) ++failures;
  }
  return Json{{"seed", seed}, {"checks", checks}, {"failures", failures}};
}

inline Json orbifold_self_check(const StackyFan& sf, std::uint64_t seed, const Options& o) {
  std::mt19937_64 rng(seed);
  const OrbifoldPresentation op = orbifold_presentation(sf);
  const GerbeData gd = gerbe_data(sf);
  GradedEngine e(op.presentation, o.limits());
  std::size_t checks = 0, failures = 0;
  const std::size_t k = op.boxes.size();
  for (int t = 0; t < 32; ++t) {
    auto [l, r] = triple_products(sf, gd, op, rng() % k, rng() % k, rng() % k);
    ++checks;
    if (!e.in_ideal(l - r)) ++failures;
  }
  return Json{{"seed", seed}, {"associativity_checks", checks}, {"failures", failures}};
}

inline Document presentation_document(const std::string& command, const StackyFan& sf, const GradedPresentation& p,
                                      bool routed) {
  Document d;
  d.json = Json{{"command", command}, {"name", sf.name}, {"routed_through_decomposition", routed},
                {"presentation", io::to_json(p)}};
  d.text = io::text(p);
  d.latex = io::latex(p) + "\n";
  return d;
}

inline Document cmd_chow(const std::string& path, bool eliminate, const std::optional<Rational>& max_degree,
                         const Options& o) {
  const StackyFan sf = load_valid_fan(path);
  const bool routed = !torsion_generated(sf);
  GradedPresentation p = chow_ring(sf);
  if (eliminate) {
    auto notes = p.notes;
    p = eliminate_linear(p).presentation;
    p.notes = notes;
  }
  Document d = presentation_document("chow", sf, p, routed);
  attach_table(d, p, max_degree, o);
  if (o.seed) d.json["self_check"] = chow_self_check(p, *o.seed, o);
  return d;
}

inline Document cmd_orbifold(const std::string& path, const std::optional<Rational>& max_degree, const Options& o) {
  const StackyFan sf = load_valid_fan(path);
  const bool routed = !torsion_generated(sf);
  const GradedPresentation p = orbifold_chow_ring(sf);
  Document d = presentation_document("orbifold", sf, p, routed);
  attach_table(d, p, max_degree, o);
  if (o.seed && !routed) d.json["self_check"] = orbifold_self_check(sf, *o.seed, o);
  return d;
}

inline Document cmd_graded(const std::string& path, const std::string& ring, const Rational& max_degree,
                           const Options& o) {
  const GradedPresentation p = load_ring(path, ring);
  const GradedGroupTable t = graded_pieces(p, max_degree, o.limits());
  Document d;
  d.json = Json{{"command", "graded"}, {"ring", ring}, {"graded_pieces", io::to_json(t)}};
  d.text = io::text(t);
  d.latex = io::latex(t);
  return d;
}

inline Document cmd_compare(const std::string& a, const std::string& b, const std::string& ring_a,
                            const std::string& ring_b, const Rational& max_degree, const Options& o) {
  const GradedComparison c = graded_equal(load_ring(a, ring_a), load_ring(b, ring_b), max_degree, o.limits());
  Document d;
  Json mism = Json::array();
  std::string text = c.equal ? "EQUAL\n" : "NOT-EQUAL\n";
  std::string latex = c.equal ? "EQUAL\n" : "NOT-EQUAL\n";
  for (const auto& m : c.mismatches) {
    mism.push_back(Json{{"degree", io::to_json(m.degree)}, {"a", io::to_json(m.a)}, {"b", io::to_json(m.b)}});
    text += "degree " + m.degree.get_str() + ": " + m.a.to_string() + " vs " + m.b.to_string() + "\n";
    latex += "degree " + m.degree.get_str() + ": $" + io::latex(m.a) + "$ vs $" + io::latex(m.b) + "$\\\\\n";
  }
  d.json = Json{{"command", "compare"},
                {"equal", c.equal},
                {"verdict", c.equal ? "EQUAL" : "NOT-EQUAL"},
                {"mismatches", mism},
                {"table_a", io::to_json(c.table_a)},
                {"table_b", io::to_json(c.table_b)}};
  d.text = text;
  d.latex = latex;
  return d;
}

inline void emit(const Document& d, const Options& o, std::ostream& out) {
  std::string body;
  if (o.format == "json")
    body = d.json.dump(2) + "\n";
  else if (o.format == "latex")
    body = d.latex;
  else
    body = d.text;
  if (o.out.empty()) {
    out << body;
    return;
  }
  std::ofstream f(o.out);
  if (!f) throw InvalidInput("cannot write " + o.out);
  f << body;
}

}  // namespace detail

/// Runs one command line (without the program name). Output documents go to
/// `out` (or --out), messages to `err`.
inline int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Integral Chow rings and orbifold Chow rings of toric DM stacks", "toricchow"};
  app.require_subcommand(1);
  Options o;
  app.add_option("--format", o.format, "Output format")->check(CLI::IsMember({"text", "json", "latex"}));
  app.add_option("--out", o.out, "Write the output to this file");
  app.add_option("--seed", o.seed, "Seed for randomized self-checks");
  app.add_option("--limit-monomials", o.limit_monomials, "Largest graded piece the engine may build");

  std::string file, file_b, ring = "chow", ring_b, max_degree;
  int order = 1;
  bool eliminate = false;

  auto fallthrough = [](CLI::App* s) { s->fallthrough(); };
  auto* validate_cmd = app.add_subcommand("validate", "Check a stacky fan");
  auto* gale_cmd = app.add_subcommand("gale", "Gale dual and the finite group mu");
  auto* decompose_cmd = app.add_subcommand("decompose", "Split off the torsion not generated by the rays");
  auto* boxes_cmd = app.add_subcommand("boxes", "Box elements");
  auto* inertia_cmd = app.add_subcommand("inertia", "Components of the inertia stack");
  auto* chow_cmd = app.add_subcommand("chow", "Integral Chow ring");
  auto* orbifold_cmd = app.add_subcommand("orbifold", "Integral orbifold Chow ring");
  auto* graded_cmd = app.add_subcommand("graded", "Graded pieces of a ring");
  auto* compare_cmd = app.add_subcommand("compare", "Compare two rings degree by degree");
  for (auto* s : {validate_cmd, gale_cmd, decompose_cmd, boxes_cmd, inertia_cmd, chow_cmd, orbifold_cmd, graded_cmd,
                  compare_cmd}) {
    fallthrough(s);
    s->add_option("file", file, "Stacky fan JSON file")->required();
  }
  compare_cmd->add_option("file_b", file_b, "Second stacky fan or presentation file")->required();
  inertia_cmd->add_option("--order", order, "1 for twisted sectors, 2 for triples")->check(CLI::IsMember({1, 2}));
  chow_cmd->add_flag("--eliminate", eliminate, "Remove linear relations");
  for (auto* s : {chow_cmd, orbifold_cmd}) s->add_option("--max-degree", max_degree, "Also list graded pieces");
  for (auto* s : {graded_cmd, compare_cmd}) {
    s->add_option("--ring", ring, "chow or orbifold")->check(CLI::IsMember({"chow", "orbifold"}));
    s->add_option("--max-degree", max_degree, "Largest degree")->required();
  }
  compare_cmd->add_option("--ring-b", ring_b, "Ring for the second file (default: --ring)")
      ->check(CLI::IsMember({"chow", "orbifold"}));

  try {
    std::vector<std::string> reversed(args.rbegin(), args.rend());
    app.parse(reversed);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return ok;
  } catch (const CLI::CallForAllHelp&) {
    out << app.help("", CLI::AppFormatMode::All);
    return ok;
  } catch (const CLI::ParseError& e) {
    err << "error: " << e.what() << "\n";
    return invalid_input;
  }

  try {
    std::optional<Rational> degree;
    if (!max_degree.empty()) degree = detail::parse_degree(max_degree);
    Document d;
    int code = ok;
    if (*validate_cmd) {
      d = detail::cmd_validate(file);
      if (!d.json.at("valid").get<bool>()) code = invalid_input;
    } else if (*gale_cmd) {
      d = detail::cmd_gale(file);
    } else if (*decompose_cmd) {
      d = detail::cmd_decompose(file);
    } else if (*boxes_cmd) {
      d = detail::cmd_boxes(file);
    } else if (*inertia_cmd) {
      d = detail::cmd_inertia(file, order);
    } else if (*chow_cmd) {
      d = detail::cmd_chow(file, eliminate, degree, o);
    } else if (*orbifold_cmd) {
      d = detail::cmd_orbifold(file, degree, o);
    } else if (*graded_cmd) {
      d = detail::cmd_graded(file, ring, *degree, o);
    } else if (*compare_cmd) {
      d = detail::cmd_compare(file, file_b, ring, ring_b.empty() ? ring : ring_b, *degree, o);
    }
    detail::emit(d, o, out);
    return code;
  } catch (const InvalidInput& e) {
    err << "invalid input: " << e.what() << "\n";
    return invalid_input;
  } catch (const HypothesisNotSatisfied& e) {
    err << "hypothesis not satisfied: " << e.what() << "\n";
    return hypothesis;
  } catch (const ResourceLimit& e) {
    err << "resource limit: " << e.what() << "\n";
    return resource_limit;
  } catch (const std::exception& e) {
    err << "unsupported case: " << e.what() << "\n";
    return hypothesis;
  }
}

}  // namespace toricchow::cli
