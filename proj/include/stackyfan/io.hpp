#pragma once

// JSON documents for stacky fans, KM fans and colorings (format_version "1").
// Integers are JSON numbers, or decimal strings once they exceed 2^53.

#include <cstddef>
#include <cstdint>
#include <string>
#include <utility>
#include <variant>
#include <vector>

#include <json.hpp>

#include "stackyfan/birational.hpp"
#include "stackyfan/cone.hpp"
#include "stackyfan/fan.hpp"
#include "stackyfan/integer.hpp"
#include "stackyfan/km_fan.hpp"
#include "stackyfan/lattice.hpp"
#include "stackyfan/stacky_fan.hpp"

namespace stackyfan::io {

using json = nlohmann::json;

class SchemaError : public Error {
 public:
  using Error::Error;
};

inline constexpr const char* kFormatVersion = "1";

using IndexLists = std::vector<std::vector<std::size_t>>;

struct StackyFanDoc {
  std::size_t dim = 0;
  IntMatrix rays;  // chosen generators
  IndexLists max_cones;
};

struct KMFanDoc {
  std::size_t dim = 0;
  IntMatrix rays;  // primitive generators
  IndexLists max_cones;
  std::vector<IntMatrix> lattices;  // parallel to max_cones
};

struct ColoringDoc {
  struct Class {
    IntMatrix lattice;
    std::vector<IntMatrix> cones;
  };
  std::size_t dim = 0;
  std::vector<Class> classes;
};

using Document = std::variant<StackyFanDoc, KMFanDoc, ColoringDoc>;

inline const char* kind_of(const Document& doc) {
  switch (doc.index()) {
    case 0: return "stacky_fan";
    case 1: return "km_fan";
    default: return "coloring";
  }
}

namespace detail {

inline const json& field(const json& j, const char* key, const std::string& where) {
  auto it = j.find(key);
  if (it == j.end()) throw SchemaError(where + ": missing field \"" + key + "\"");
  return *it;
}

inline const json& array_field(const json& j, const char* key, const std::string& where) {
  const json& v = field(j, key, where);
  if (!v.is_array()) throw SchemaError(where + ": field \"" + key + "\" must be an array");
  return v;
}

inline Integer parse_integer(const json& j, const std::string& where) {
  if (j.is_number_integer()) {
    if (j.is_number_unsigned()) return Integer(j.get<std::uint64_t>());
    return Integer(j.get<std::int64_t>());
  }
  if (j.is_string()) {
    const std::string s = j.get<std::string>();
    std::size_t start = (!s.empty() && s[0] == '-') ? 1 : 0;
    bool digits = s.size() > start;
    for (std::size_t i = start; i < s.size(); ++i) digits = digits && s[i] >= '0' && s[i] <= '9';
    if (!digits) throw SchemaError(where + ": \"" + s + "\" is not a decimal integer");
    return Integer(s);
  }
  throw SchemaError(where + ": expected an integer");
}

inline IntVector parse_vector(const json& j, std::size_t d, const std::string& where) {
  if (!j.is_array()) throw SchemaError(where + ": expected an integer vector");
  if (j.size() != d) throw SchemaError(where + ": expected " + std::to_string(d) + " coordinates");
  IntVector v;
  for (const auto& x : j) v.push_back(parse_integer(x, where));
  return v;
}

inline IntMatrix parse_matrix(const json& j, std::size_t d, const std::string& where) {
  if (!j.is_array()) throw SchemaError(where + ": expected a list of vectors");
  IntMatrix m;
  for (std::size_t i = 0; i < j.size(); ++i) m.push_back(parse_vector(j[i], d, where + "[" + std::to_string(i) + "]"));
  return m;
}

inline IndexLists parse_index_lists(const json& j, std::size_t n, const std::string& where) {
  IndexLists out;
  for (std::size_t i = 0; i < j.size(); ++i) {
    const json& c = j[i];
    const std::string here = where + "[" + std::to_string(i) + "]";
    if (!c.is_array()) throw SchemaError(here + ": expected a list of ray indices");
    std::vector<std::size_t> idx;
    for (const auto& x : c) {
      if (!x.is_number_unsigned() && !(x.is_number_integer() && x.get<std::int64_t>() >= 0)) {
        throw SchemaError(here + ": ray indices must be non-negative integers");
      }
      const auto k = x.get<std::uint64_t>();
      if (k >= n) throw SchemaError(here + ": ray index " + std::to_string(k) + " out of range");
      idx.push_back(static_cast<std::size_t>(k));
    }
    out.push_back(std::move(idx));
  }
  return out;
}

inline json integer_json(const Integer& x) {
  static const Integer limit = Integer(1) << 53;
  if (x <= limit && x >= -limit) return json(x.convert_to<std::int64_t>());
  return json(x.str());
}

inline json vector_json(const IntVector& v) {
  json out = json::array();
  for (const auto& x : v) out.push_back(integer_json(x));
  return out;
}

inline json matrix_json(const IntMatrix& m) {
  json out = json::array();
  for (const auto& v : m) out.push_back(vector_json(v));
  return out;
}

inline json index_json(const IndexLists& lists) {
  json out = json::array();
  for (const auto& l : lists) out.push_back(l);
  return out;
}

}  // namespace detail

inline Document parse_document(const json& j) {
  using namespace detail;
  if (!j.is_object()) throw SchemaError("document must be a JSON object");
  const json& kind = field(j, "kind", "document");
  const json& version = field(j, "format_version", "document");
  if (!version.is_string() || version.get<std::string>() != kFormatVersion) {
    throw SchemaError("document: unsupported format_version (expected \"1\")");
  }
  const json& dim = field(j, "dim", "document");
  if (!dim.is_number_unsigned() || dim.get<std::uint64_t>() == 0 || dim.get<std::uint64_t>() > 64) {
    throw SchemaError("document: dim must be a positive integer");
  }
  const std::size_t d = dim.get<std::size_t>();
  if (!kind.is_string()) throw SchemaError("document: kind must be a string");
  const std::string k = kind.get<std::string>();

  if (k == "stacky_fan") {
    StackyFanDoc doc;
    doc.dim = d;
    doc.rays = parse_matrix(array_field(j, "rays", k), d, "rays");
    doc.max_cones = parse_index_lists(array_field(j, "max_cones", k), doc.rays.size(), "max_cones");
    return doc;
  }
  if (k == "km_fan") {
    KMFanDoc doc;
    doc.dim = d;
    doc.rays = parse_matrix(array_field(j, "rays", k), d, "rays");
    doc.max_cones = parse_index_lists(array_field(j, "max_cones", k), doc.rays.size(), "max_cones");
    const json& lats = array_field(j, "lattices", k);
    if (lats.size() != doc.max_cones.size()) throw SchemaError("lattices: must be parallel to max_cones");
    for (std::size_t i = 0; i < lats.size(); ++i) doc.lattices.push_back(parse_matrix(lats[i], d, "lattices[" + std::to_string(i) + "]"));
    return doc;
  }
  if (k == "coloring") {
    ColoringDoc doc;
    doc.dim = d;
    const json& classes = array_field(j, "classes", k);
    for (std::size_t i = 0; i < classes.size(); ++i) {
      const std::string here = "classes[" + std::to_string(i) + "]";
      if (!classes[i].is_object()) throw SchemaError(here + ": expected an object");
      ColoringDoc::Class cls;
      cls.lattice = parse_matrix(array_field(classes[i], "lattice", here), d, here + ".lattice");
      const json& cones = array_field(classes[i], "cones", here);
      for (std::size_t c = 0; c < cones.size(); ++c) {
        IntMatrix gens = parse_matrix(cones[c], d, here + ".cones[" + std::to_string(c) + "]");
        if (gens.empty()) throw SchemaError(here + ".cones[" + std::to_string(c) + "]: empty generator list");
        cls.cones.push_back(std::move(gens));
      }
      doc.classes.push_back(std::move(cls));
    }
    return doc;
  }
  throw SchemaError("document: unknown kind \"" + k + "\"");
}

inline json to_json(const Document& doc) {
  using namespace detail;
  json j;
  j["kind"] = kind_of(doc);
  j["format_version"] = kFormatVersion;
  std::visit(
      [&](const auto& d) {
        using T = std::decay_t<decltype(d)>;
        j["dim"] = d.dim;
        if constexpr (std::is_same_v<T, StackyFanDoc>) {
          j["rays"] = matrix_json(d.rays);
          j["max_cones"] = index_json(d.max_cones);
        } else if constexpr (std::is_same_v<T, KMFanDoc>) {
          j["rays"] = matrix_json(d.rays);
          j["max_cones"] = index_json(d.max_cones);
          json lats = json::array();
          for (const auto& l : d.lattices) lats.push_back(matrix_json(l));
          j["lattices"] = lats;
        } else {
          json classes = json::array();
          for (const auto& c : d.classes) {
            json cones = json::array();
            for (const auto& g : c.cones) cones.push_back(matrix_json(g));
            classes.push_back({{"lattice", matrix_json(c.lattice)}, {"cones", cones}});
          }
          j["classes"] = classes;
        }
      },
      doc);
  return j;
}

namespace detail {

inline IndexLists cone_indices(const Fan& fan) {
  IndexLists out;
  for (const auto& c : fan.max_cones()) {
    std::vector<std::size_t> idx;
    for (const auto& r : c.rays()) {
      idx.push_back(static_cast<std::size_t>(std::lower_bound(fan.rays().begin(), fan.rays().end(), r) - fan.rays().begin()));
    }
    out.push_back(std::move(idx));
  }
  std::sort(out.begin(), out.end());
  return out;
}

inline std::vector<Cone> cones_from_indices(std::size_t d, const IntMatrix& rays, const IndexLists& lists) {
  std::vector<Cone> out;
  for (const auto& idx : lists) {
    IntMatrix gens;
    for (std::size_t i : idx) gens.push_back(rays[i]);
    if (gens.empty()) throw SchemaError("max_cones: empty cone");
    Cone c = Cone::from_generators(gens, d);
    if (!c.is_full_dimensional()) throw SchemaError("max_cones: cone " + to_string(gens) + " is not full-dimensional");
    if (c.rays().size() != gens.size()) {
      throw SchemaError("max_cones: listed rays " + to_string(gens) + " are not exactly the extreme rays of their cone");
    }
    out.push_back(std::move(c));
  }
  return out;
}

}  // namespace detail

// Canonical documents: rays sorted by primitive generator, cones as sorted
// index lists, lattices in HNF.
inline StackyFanDoc to_doc(const StackyFan& s) {
  StackyFanDoc doc;
  doc.dim = s.ambient_dim();
  for (const auto& r : s.fan().rays()) doc.rays.push_back(s.generator(r));
  doc.max_cones = detail::cone_indices(s.fan());
  return doc;
}

inline KMFanDoc to_doc(const KMFan& f) {
  KMFanDoc doc;
  doc.dim = f.ambient_dim();
  doc.rays = f.fan().rays();
  doc.max_cones = detail::cone_indices(f.fan());
  for (const auto& l : f.lattices()) doc.lattices.push_back(l.basis());
  return doc;
}

inline ColoringDoc to_doc(const Coloring& c) {
  ColoringDoc doc;
  doc.dim = c.ambient_dim();
  for (const auto& cls : c.classes()) {
    ColoringDoc::Class out;
    out.lattice = cls.lattice.basis();
    for (const auto& cone : cls.region) out.cones.push_back(cone.rays());
    doc.classes.push_back(std::move(out));
  }
  return doc;
}

// Semantic errors in the stacky fan (not a complete simplicial fan, bad
// generators) are reported by validate_stacky and thrown here.
inline StackyFan to_stacky_fan(const StackyFanDoc& doc) { return StackyFan::from_rays(doc.dim, doc.rays, doc.max_cones); }

inline KMFan to_km_fan(const KMFanDoc& doc) {
  for (const auto& r : doc.rays) {
    if (is_zero(r) || content(r) != 1) throw SchemaError("rays: " + to_string(r) + " is not a primitive vector");
  }
  Fan fan(doc.dim, detail::cones_from_indices(doc.dim, doc.rays, doc.max_cones));
  if (fan.max_cones().size() != doc.max_cones.size()) throw SchemaError("max_cones: duplicate cone");
  std::vector<Sublattice> lattices(doc.max_cones.size());
  for (std::size_t i = 0; i < doc.max_cones.size(); ++i) {
    IntMatrix gens;
    for (std::size_t k : doc.max_cones[i]) gens.push_back(doc.rays[k]);
    lattices[fan.index_of(Cone::from_generators(gens, doc.dim))] = hnf(doc.lattices[i], doc.dim);
  }
  return KMFan(std::move(fan), std::move(lattices));
}

inline Coloring to_coloring(const ColoringDoc& doc) {
  std::vector<ColorClass> classes;
  for (const auto& c : doc.classes) {
    ColorClass cls;
    cls.lattice = hnf(c.lattice, doc.dim);
    for (const auto& gens : c.cones) cls.region.push_back(Cone::from_generators(gens, doc.dim));
    classes.push_back(std::move(cls));
  }
  return Coloring(doc.dim, std::move(classes));
}

inline json trace_json(const std::vector<ResolveStep>& trace) {
  json out = json::array();
  for (const auto& s : trace) {
    out.push_back({{"cone", detail::matrix_json(s.cone.rays())},
                   {"mult", detail::integer_json(s.mult)},
                   {"center", detail::vector_json(s.center)}});
  }
  return out;
}

}  // namespace stackyfan::io
