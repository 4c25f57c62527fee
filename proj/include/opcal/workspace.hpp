#pragma once

#include <cstddef>
#include <fstream>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "json.hpp"

#include "opcal/algebra.hpp"
#include "opcal/collection.hpp"
#include "opcal/compose.hpp"
#include "opcal/endomorphism.hpp"
#include "opcal/errors.hpp"
#include "opcal/free_operad.hpp"
#include "opcal/operad.hpp"
#include "opcal/parallel.hpp"

namespace opcal {

using Json = nlohmann::ordered_json;

/// A named universe of definitions loaded from one JSON file, plus an
/// optional batch of commands to run against it.
struct Workspace {
  Base base = Base::FINSET;
  std::vector<std::string> colors;
  std::map<std::string, ColorFamily> families;
  std::map<std::string, Collection> collections;
  std::map<std::string, Operad> operads;
  std::map<std::string, AlgebraStructure> algebras;
  std::map<std::string, ColorMap> color_maps;
  std::vector<std::vector<std::string>> commands;
};

namespace detail {

inline Base parse_base(const std::string& s) {
  if (s == "finset") return Base::FINSET;
  if (s == "vectq") return Base::VECTQ;
  throw ParseError("unknown base '" + s + "' (expected \"finset\" or \"vectq\")");
}

inline std::vector<std::string> string_list(const Json& j, const std::string& what) {
  if (!j.is_array()) throw ParseError(what + " must be an array of strings");
  std::vector<std::string> out;
  for (const auto& e : j) {
    if (!e.is_string()) throw ParseError(what + " must contain only strings");
    out.push_back(e.get<std::string>());
  }
  return out;
}

/// A value record: {"finset": [labels]} or {"vectq": [basis labels]}.
inline BaseObject parse_object(const Json& j, Base base) {
  if (!j.is_object() || j.size() != 1)
    throw ParseError("value must be {\"finset\": [...]} or {\"vectq\": [...]}");
  const std::string key = j.begin().key();
  Base b = parse_base(key);
  if (b != base) throw MixedBaseError("value in base '" + key + "' inside a " +
                                      base_name(base) + " workspace");
  auto labels = string_list(j.begin().value(), "value labels");
  if (labels.empty()) return BaseObject::initial(base);
  return BaseObject(base, labels);
}

/// An element of a finite object, written as a label or an index.
inline std::size_t parse_element(const Json& j, const BaseObject& obj) {
  if (j.is_number_unsigned()) {
    std::size_t i = j.get<std::size_t>();
    if (i >= obj.size()) throw ParseError("element index " + std::to_string(i) + " out of range");
    return i;
  }
  if (j.is_string()) return obj.index_of(j.get<std::string>());
  throw ParseError("element must be a label or an index");
}

inline BaseMorphism parse_morphism(const Json& j, const BaseObject& src, const BaseObject& dst) {
  if (src.base() == Base::FINSET) {
    if (!j.contains("table")) throw ParseError("finset morphism needs a \"table\"");
    const Json& t = j.at("table");
    if (!t.is_array() || t.size() != src.size())
      throw ParseError("morphism table must list one target element per source element");
    std::vector<std::size_t> fn;
    for (const auto& e : t) fn.push_back(parse_element(e, dst));
    return BaseMorphism::finset(src, dst, std::move(fn));
  }
  if (!j.contains("matrix")) throw ParseError("vectq morphism needs a \"matrix\"");
  const Json& rows = j.at("matrix");
  if (!rows.is_array() || rows.size() != dst.size())
    throw ParseError("matrix must have one row per target basis vector");
  Matrix mat(dst.size(), src.size());
  for (std::size_t r = 0; r < dst.size(); ++r) {
    const Json& row = rows[r];
    if (!row.is_array() || row.size() != src.size())
      throw ParseError("matrix row length must equal the source dimension");
    for (std::size_t c = 0; c < src.size(); ++c) {
      const Json& e = row[c];
      if (e.is_number_integer())
        mat(r, c) = Rational(e.get<long long>());
      else if (e.is_string())
        mat(r, c) = rational_from_string(e.get<std::string>());
      else
        throw ParseError("matrix entries must be integers or \"p/q\" strings");
    }
  }
  return BaseMorphism::vectq(src, dst, std::move(mat));
}

inline Corolla parse_corolla(const Json& j) {
  if (!j.contains("inputs") || !j.contains("output"))
    throw ParseError("entry needs \"inputs\" and \"output\"");
  return Corolla(string_list(j.at("inputs"), "inputs"), j.at("output").get<std::string>());
}

inline Collection parse_collection(const Json& j, Base base,
                                   const std::vector<std::string>& default_colors) {
  std::vector<std::string> colors =
      j.contains("colors") ? string_list(j.at("colors"), "colors") : default_colors;
  Collection out(base, colors);
  if (!j.contains("entries") || !j.at("entries").is_array())
    throw ParseError("collection needs an \"entries\" array");
  for (const auto& e : j.at("entries")) {
    Corolla c = parse_corolla(e);
    BaseObject v = parse_object(e.at("value"), base);
    out.set_value(c, v);
  }
  // Relabeling data comes after every value is known.
  for (const auto& e : j.at("entries")) {
    if (!e.contains("action") || e.at("action").is_string()) continue;
    Corolla c = parse_corolla(e);
    const Json& acts = e.at("action");
    if (!acts.is_array()) throw ParseError("\"action\" must be \"by relabeling\" or an array");
    for (const auto& a : acts) {
      std::size_t i = a.at("i").get<std::size_t>();
      if (i + 1 >= c.arity()) throw ParseError("action transposition index out of range");
      Corolla ci = c.permuted(Permutation::adjacent_transposition(c.arity(), i));
      out.set_gen_act(c, i, parse_morphism(a, out.value(c), out.value(ci)));
    }
  }
  if (j.contains("truncated_above"))
    out.set_truncated_above(j.at("truncated_above").get<std::size_t>());
  check_collection(out);
  return out;
}

inline ColorFamily parse_family(const Json& j, Base base,
                                const std::vector<std::string>& default_colors) {
  ColorFamily out;
  out.base = base;
  out.colors = j.contains("colors") ? string_list(j.at("colors"), "colors") : default_colors;
  if (!j.contains("values") || !j.at("values").is_object())
    throw ParseError("family needs a \"values\" object keyed by color");
  for (const auto& x : out.colors) {
    if (!j.at("values").contains(x))
      throw ParseError("family is missing a value at color '" + x + "'");
    out.values.emplace(x, parse_object(j.at("values").at(x), base));
  }
  return out;
}

inline ColorMap parse_color_map(const Json& j) {
  ColorMap f;
  f.src = string_list(j.at("src"), "src");
  f.dst = string_list(j.at("dst"), "dst");
  if (!j.contains("fn") || !j.at("fn").is_object())
    throw ParseError("color map needs an \"fn\" object");
  for (const auto& [k, v] : j.at("fn").items()) f.fn[k] = v.get<std::string>();
  for (const auto& x : f.src)
    if (std::find(f.dst.begin(), f.dst.end(), f.at(x)) == f.dst.end())
      throw ValidationError("color map sends '" + x + "' outside the target colors");
  return f;
}

inline const Operad& named_operad(const Workspace& w, const std::string& name) {
  auto it = w.operads.find(name);
  if (it == w.operads.end()) throw ValidationError("undefined operad '" + name + "'");
  return it->second;
}

inline const ColorFamily& named_family(const Workspace& w, const std::string& name) {
  auto it = w.families.find(name);
  if (it == w.families.end()) throw ValidationError("undefined family '" + name + "'");
  return it->second;
}

inline const Collection& named_collection(const Workspace& w, const std::string& name) {
  auto it = w.collections.find(name);
  if (it != w.collections.end()) return it->second;
  auto op = w.operads.find(name);
  if (op != w.operads.end()) return op->second.carrier;
  throw ValidationError("undefined collection '" + name + "'");
}

inline const ColorMap& named_color_map(const Workspace& w, const std::string& name) {
  auto it = w.color_maps.find(name);
  if (it == w.color_maps.end()) throw ValidationError("undefined color map '" + name + "'");
  return it->second;
}

inline Operad parse_operad(const Json& j, const Workspace& w) {
  if (j.contains("builder")) {
    const std::string b = j.at("builder").get<std::string>();
    auto colors = [&]() {
      return j.contains("colors") ? string_list(j.at("colors"), "colors") : w.colors;
    };
    auto bound = [&]() -> std::size_t {
      if (!j.contains("bound")) throw ParseError("builder '" + b + "' needs a \"bound\"");
      return j.at("bound").get<std::size_t>();
    };
    if (b == "commutative") return commutative_operad(colors(), w.base, bound());
    if (b == "associative")
      return associative_operad(w.base, bound(),
                                j.contains("nullary") ? j.at("nullary").get<bool>() : true);
    if (b == "trivial") return trivial_operad(colors(), w.base, bound());
    if (b == "endomorphism")
      return endomorphism_operad(named_family(w, j.at("family").get<std::string>()), bound());
    if (b == "cartesian") {
      const ColorFamily& m = named_family(w, j.at("family").get<std::string>());
      std::vector<BaseObject> objs;
      for (const auto& x : m.colors) objs.push_back(m.at(x));
      return cartesian_operad(objs, bound());
    }
    if (b == "free")
      return free_operad(named_collection(w, j.at("generators").get<std::string>()), bound());
    if (b == "truncate")
      return truncate_operad(named_operad(w, j.at("operad").get<std::string>()), bound());
    if (b == "pullback")
      return pullback_operad(named_color_map(w, j.at("map").get<std::string>()),
                             named_operad(w, j.at("operad").get<std::string>()));
    if (b == "pushforward")
      return pushforward_operad(named_color_map(w, j.at("map").get<std::string>()),
                                named_operad(w, j.at("operad").get<std::string>()));
    throw ParseError("unknown operad builder '" + b + "'");
  }

  Operad o;
  o.carrier = parse_collection(j, w.base, w.colors);
  o.index_bound = j.contains("bound") ? j.at("bound").get<std::size_t>()
                                      : o.carrier.max_arity();
  if (!j.contains("units") || !j.at("units").is_array())
    throw ParseError("operad needs a \"units\" array");
  for (const Json& e : j.at("units")) {
    std::string x = e.at("color").get<std::string>();
    const BaseObject& hom = o.carrier.value(Corolla({x}, x));
    BaseObject one = BaseObject::unit(w.base);
    if (e.contains("element")) {
      std::size_t i = parse_element(e.at("element"), hom);
      if (w.base == Base::FINSET)
        o.set_unit(x, BaseMorphism::finset(one, hom, {i}));
      else {
        Matrix mat(hom.size(), 1);
        mat(i, 0) = Rational(1);
        o.set_unit(x, BaseMorphism::vectq(one, hom, std::move(mat)));
      }
    } else {
      o.set_unit(x, parse_morphism(e, one, hom));
    }
  }
  if (!j.contains("gamma") || !j.at("gamma").is_array())
    throw ParseError("operad needs a \"gamma\" array");
  for (const auto& g : j.at("gamma")) {
    Corolla c = parse_corolla(g);
    CompositionIndex idx;
    idx.m = g.at("m").get<std::size_t>();
    for (const auto& e : g.at("f")) idx.f.push_back(e.get<std::size_t>());
    if (idx.f.size() != c.arity()) throw ParseError("gamma \"f\" must assign every input a block");
    for (std::size_t v : idx.f)
      if (v >= idx.m) throw ParseError("gamma \"f\" assigns a block beyond m");
    idx.mids = string_list(g.at("mids"), "mids");
    if (idx.mids.size() != idx.m) throw ParseError("gamma \"mids\" must list one color per block");
    o.set_gamma(c, idx, parse_morphism(g, o.gamma_domain(c, idx), o.carrier.value(c)));
  }
  // Eager validation: assembling the monoid multiplication descends every
  // stored substitution map through the index groupoid colimits, so a
  // non-equivariant family is rejected here.
  assemble_multiplication(o, std::min<std::size_t>(o.index_bound, o.carrier.max_arity()));
  return o;
}

inline AlgebraStructure parse_algebra(const Json& j, const Workspace& w) {
  AlgebraStructure a;
  a.op = named_operad(w, j.at("operad").get<std::string>());
  a.carrier = named_family(w, j.at("carrier").get<std::string>());
  a.bound = j.contains("bound") ? j.at("bound").get<std::size_t>()
                                : a.op.carrier.max_arity();
  if (!j.contains("entries") || !j.at("entries").is_array())
    throw ParseError("algebra needs an \"entries\" array");
  for (const auto& e : j.at("entries")) {
    Corolla c = parse_corolla(e);
    a.set_action(c, parse_morphism(e, a.action_domain(c), a.carrier.at(c.output)));
  }
  LawReport r = check_algebra(a, a.bound);
  if (!r.pass) throw ValidationError("algebra laws fail: " + r.violations.front());
  return a;
}

} // namespace detail

/// Load and validate a workspace file.  Every referenced name must already
/// be defined; all objects are checked eagerly, so errors surface at load
/// rather than at command time.
inline Workspace parse_spec(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ParseError("cannot open '" + path + "'");
  Json j;
  try {
    j = Json::parse(in);
  } catch (const nlohmann::json::parse_error& e) {
    throw ParseError(e.what());
  }
  Workspace w;
  if (!j.contains("base")) throw ParseError("workspace needs a \"base\"");
  w.base = detail::parse_base(j.at("base").get<std::string>());
  if (j.contains("colors")) w.colors = detail::string_list(j.at("colors"), "colors");
  if (j.contains("families"))
    for (const auto& [name, body] : j.at("families").items())
      w.families.emplace(name, detail::parse_family(body, w.base, w.colors));
  if (j.contains("collections"))
    for (const auto& [name, body] : j.at("collections").items())
      w.collections.emplace(name, detail::parse_collection(body, w.base, w.colors));
  if (j.contains("color_maps"))
    for (const auto& [name, body] : j.at("color_maps").items())
      w.color_maps.emplace(name, detail::parse_color_map(body));
  if (j.contains("operads"))
    for (const auto& [name, body] : j.at("operads").items())
      w.operads.emplace(name, detail::parse_operad(body, w));
  if (j.contains("algebras"))
    for (const auto& [name, body] : j.at("algebras").items())
      w.algebras.emplace(name, detail::parse_algebra(body, w));
  if (j.contains("commands"))
    for (const auto& cmd : j.at("commands"))
      w.commands.push_back(detail::string_list(cmd, "command"));
  return w;
}

/// Raised on malformed command lines; mapped to exit code 2.
struct UsageError : std::runtime_error {
  explicit UsageError(const std::string& m) : std::runtime_error("usage: " + m) {}
};

namespace detail {

struct CommandArgs {
  std::vector<std::string> positional;
  std::map<std::string, std::string> flags;

  std::optional<std::size_t> size_flag(const std::string& name) const {
    auto it = flags.find(name);
    if (it == flags.end()) return std::nullopt;
    try {
      return static_cast<std::size_t>(std::stoull(it->second));
    } catch (...) {
      throw UsageError("--" + name + " expects a non-negative integer");
    }
  }

  std::size_t require_size_flag(const std::string& name) const {
    auto v = size_flag(name);
    if (!v) throw UsageError("missing required flag --" + name);
    return *v;
  }

  const std::string& at(std::size_t i, const std::string& what) const {
    if (i >= positional.size()) throw UsageError("missing argument: " + what);
    return positional[i];
  }
};

inline CommandArgs split_args(const std::vector<std::string>& argv) {
  CommandArgs out;
  for (std::size_t i = 0; i < argv.size(); ++i) {
    const std::string& a = argv[i];
    if (a.rfind("--", 0) == 0) {
      if (i + 1 >= argv.size()) throw UsageError("flag " + a + " expects a value");
      out.flags[a.substr(2)] = argv[++i];
    } else {
      out.positional.push_back(a);
    }
  }
  return out;
}

inline Json law_report_json(const LawReport& r) {
  Json out = Json::object();
  out["pass"] = r.pass;
  out["exact"] = r.exact;
  out["violations"] = r.violations;
  out["notes"] = r.notes;
  return out;
}

/// Carrier sizes per supported corolla, in encoding order.
inline Json support_sizes_json(const Collection& c) {
  Json out = Json::array();
  for (const auto& cor : c.support_corollas()) {
    Json row = Json::object();
    row["corolla"] = cor.encode();
    row["size"] = c.value(cor).size();
    out.push_back(row);
  }
  return out;
}

} // namespace detail

/// Execute one command against a workspace.  Returns the report and whether
/// every check inside it passed.
inline std::pair<Json, bool> run_command(const Workspace& w, const std::vector<std::string>& argv) {
  using detail::named_collection;
  using detail::named_family;
  using detail::named_operad;
  if (argv.empty()) throw UsageError("empty command");
  const std::string& cmd = argv[0];
  detail::CommandArgs args = detail::split_args({argv.begin() + 1, argv.end()});
  Json rep = Json::object();
  rep["command"] = cmd;
  bool pass = true;

  if (cmd == "compose") {
    const Collection& left = named_collection(w, args.at(0, "left collection"));
    const Collection& right = named_collection(w, args.at(1, "right collection"));
    std::optional<std::size_t> m_bound = args.size_flag("m-bound");
    if (!m_bound && !left.is_reduced())
      throw TruncationRequiredError("left factor has nullary values; pass --m-bound");
    ComposedCollection cc(left, right, m_bound);
    std::size_t n_bound = args.size_flag("arity-bound").value_or(
        m_bound ? *m_bound : cc.arity_cap());
    std::vector<Corolla> cors;
    for (std::size_t n = 0; n <= n_bound; ++n) {
      FiniteGroupoid cg = corolla_groupoid(left.colors(), left.colors(), n);
      for (const auto& enc : cg.objects) cors.push_back(Corolla::decode(enc));
    }
    std::vector<Json> rows(cors.size());
    parallel_for(cors.size(), [&](std::size_t i) {
      const Corolla& c = cors[i];
      Json row = Json::object();
      row["corolla"] = c.encode();
      Json grades = Json::object();
      std::size_t total = 0;
      for (std::size_t m = 0; m <= cc.grade_bound(c.arity()); ++m) {
        std::size_t s = cc.piece(c, m).colim.obj.size();
        grades[detail::grade_tag(m)] = s;
        total += s;
      }
      row["grades"] = std::move(grades);
      row["total"] = total;
      row["exact"] = cc.exact_at(c.arity());
      rows[i] = std::move(row);
    });
    rep["table"] = rows;
  } else if (cmd == "check") {
    const std::string& kind = args.at(0, "object kind (operad|algebra)");
    std::size_t bound = args.require_size_flag("bound");
    if (kind == "operad") {
      LawReport r = check_operad(named_operad(w, args.at(1, "operad name")), bound);
      rep["report"] = detail::law_report_json(r);
      pass = r.pass;
    } else if (kind == "algebra") {
      auto it = w.algebras.find(args.at(1, "algebra name"));
      if (it == w.algebras.end())
        throw ValidationError("undefined algebra '" + args.at(1, "algebra name") + "'");
      LawReport r = check_algebra(it->second, bound);
      rep["report"] = detail::law_report_json(r);
      pass = r.pass;
    } else {
      throw UsageError("check expects 'operad' or 'algebra', got '" + kind + "'");
    }
  } else if (cmd == "free-algebra") {
    const Operad& o = named_operad(w, args.at(0, "operad name"));
    const ColorFamily& m = named_family(w, args.at(1, "generator family"));
    std::size_t degree = args.require_size_flag("degree");
    FreeAlgebra f(o, m, degree);
    Json table = Json::object();
    for (const auto& x : m.colors) {
      Json grades = Json::object();
      std::size_t total = 0;
      for (std::size_t n = 0; n <= degree; ++n) {
        std::size_t s = f.grade_size(x, n);
        grades["n=" + std::to_string(n)] = s;
        total += s;
      }
      Json row = Json::object();
      row["grades"] = std::move(grades);
      row["total"] = total;
      table[x] = std::move(row);
    }
    rep["table"] = std::move(table);
  } else if (cmd == "endo") {
    const ColorFamily& m = named_family(w, args.at(0, "family name"));
    std::size_t bound = args.require_size_flag("bound");
    Operad e = endomorphism_operad(m, bound);
    rep["table"] = detail::support_sizes_json(e.carrier);
  } else if (cmd == "maps") {
    const Operad& o = named_operad(w, args.at(0, "source operad"));
    const Operad& p = named_operad(w, args.at(1, "target operad"));
    std::size_t bound = args.require_size_flag("bound");
    auto maps = enumerate_operad_maps(o, p, bound);
    rep["count"] = maps.size();
  } else if (cmd == "universal-property") {
    const Operad& o = named_operad(w, args.at(0, "operad name"));
    const ColorFamily& m = named_family(w, args.at(1, "family name"));
    std::size_t bound = args.require_size_flag("bound");
    CorrespondenceReport r = algebra_map_correspondence(o, m, bound);
    rep["operad_maps"] = r.operad_map_count;
    rep["algebra_structures"] = r.algebra_structure_count;
    rep["bijective"] = r.bijective;
    pass = r.bijective;
  } else if (cmd == "adjunction") {
    const Operad& o = named_operad(w, args.at(0, "operad name"));
    const ColorFamily& m = named_family(w, args.at(1, "generator family"));
    auto it = w.algebras.find(args.at(2, "algebra name"));
    if (it == w.algebras.end())
      throw ValidationError("undefined algebra '" + args.at(2, "algebra name") + "'");
    std::size_t bound = args.require_size_flag("bound");
    AdjunctionReport r = adjunction_bijection(o, m, it->second, bound);
    rep["algebra_maps"] = r.algebra_map_count;
    rep["family_maps"] = r.family_map_count;
    rep["bijective"] = r.bijective;
    pass = r.bijective;
  } else if (cmd == "change-colors") {
    const ColorMap& f = detail::named_color_map(w, args.at(0, "color map name"));
    const std::string& name = args.at(1, "object name");
    auto dir = args.flags.count("direction") ? args.flags.at("direction") : "pullback";
    if (w.operads.count(name)) {
      Operad out = dir == "pullback" ? pullback_operad(f, named_operad(w, name))
                                     : pushforward_operad(f, named_operad(w, name));
      rep["table"] = detail::support_sizes_json(out.carrier);
    } else {
      Collection out = dir == "pullback" ? pullback_collection(f, named_collection(w, name))
                                         : pushforward_general(f, named_collection(w, name));
      rep["table"] = detail::support_sizes_json(out);
    }
    rep["direction"] = dir;
  } else if (cmd == "cartesian") {
    const ColorFamily& m = named_family(w, args.at(0, "family name"));
    std::size_t bound = args.require_size_flag("bound");
    std::vector<BaseObject> objs;
    for (const auto& x : m.colors) objs.push_back(m.at(x));
    Operad cart = cartesian_operad(objs, bound);
    Operad endo = endomorphism_operad(cartesian_family(objs), bound);
    rep["table"] = detail::support_sizes_json(cart.carrier);
    bool equal = operads_equal(cart, endo);
    rep["equals_endomorphism"] = equal;
    pass = equal;
  } else {
    throw UsageError("unknown command '" + cmd + "'");
  }

  rep["pass"] = pass;
  return {rep, pass};
}

} // namespace opcal
