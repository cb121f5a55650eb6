#pragma once

// Command-line front end. Every subcommand prints a JSON verdict
// {"status": ..., "detail": ...}; exit code 0 for yes/ok, 1 for no/violation,
// 2 for errors (reported as a JSON object on the error stream).

#include <cstdlib>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <utility>
#include <variant>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "stackyfan/birational.hpp"
#include "stackyfan/io.hpp"
#include "stackyfan/km_fan.hpp"
#include "stackyfan/stacky_fan.hpp"

namespace stackyfan::cli {

using json = nlohmann::json;

enum class Status { yes, no, ok, violation, error };

inline const char* status_name(Status s) {
  switch (s) {
    case Status::yes: return "yes";
    case Status::no: return "no";
    case Status::ok: return "ok";
    case Status::violation: return "violation";
    case Status::error: return "error";
  }
  return "error";
}

inline int exit_code(Status s) {
  switch (s) {
    case Status::yes:
    case Status::ok: return 0;
    case Status::no:
    case Status::violation: return 1;
    case Status::error: return 2;
  }
  return 2;
}

struct Verdict {
  Status status = Status::ok;
  json detail = json::object();
  // Document to write to `output_path` ("-" for stdout), if any.
  std::optional<json> output;
  std::string output_path;
};

class Runner {
 public:
  Runner(std::istream& in, std::ostream& out, std::ostream& err) : in_(in), out_(out), err_(err) {}

  int run(int argc, const char* const* argv) {
    CLI::App app{"Stacky fans, KM fans and sublattice colorings: validation, birational equivalence, realization"};
    app.require_subcommand(1);
    std::string a, b, output;
    bool representable = false, trace = false;

    auto* validate = app.add_subcommand("validate", "Validate a stacky_fan, km_fan or coloring document");
    validate->add_option("F", a, "Document path or -")->required();
    auto* equiv = app.add_subcommand("equiv", "Decide torus-equivariant birational equivalence");
    equiv->add_option("A", a)->required();
    equiv->add_option("B", b)->required();
    auto* coloring = app.add_subcommand("coloring", "Sublattice coloring of a stacky fan");
    coloring->add_option("A", a)->required();
    coloring->add_option("-o,--output", output);
    auto* vcol = app.add_subcommand("validate-coloring", "Validate a coloring document");
    vcol->add_option("C", a)->required();
    auto* realize = app.add_subcommand("realize", "Smooth stacky fan realizing a coloring");
    realize->add_option("C", a)->required();
    realize->add_option("-o,--output", output)->required();
    realize->add_flag("--trace", trace);
    auto* wit = app.add_subcommand("witness", "Common representable roof of two equivalent stacky fans");
    wit->add_option("A", a)->required();
    wit->add_option("B", b)->required();
    wit->add_option("-o,--output", output)->required();
    wit->add_flag("--trace", trace);
    auto* morph = app.add_subcommand("morphism", "Does the identity extend to a (representable) morphism SRC -> DST");
    morph->add_option("SRC", a)->required();
    morph->add_option("DST", b)->required();
    morph->add_flag("--representable", representable);
    auto* res = app.add_subcommand("resolve", "Resolve a KM fan to a stacky fan");
    res->add_option("K", a)->required();
    res->add_option("-o,--output", output)->required();
    res->add_flag("--trace", trace);
    auto* stab = app.add_subcommand("stabilizers", "Generic stabilizer orders of all cones");
    stab->add_option("A", a)->required();
    auto* info = app.add_subcommand("info", "Summary of a document");
    info->add_option("F", a)->required();

    try {
      app.parse(argc, argv);
    } catch (const CLI::CallForHelp&) {
      out_ << app.help();
      return 0;
    } catch (const CLI::ParseError& e) {
      return fail(e.what());
    }

    try {
      check_threads_env();
      Verdict v;
      if (*validate) v = cmd_validate(a);
      else if (*equiv) v = cmd_equiv(a, b);
      else if (*coloring) v = cmd_coloring(a, output);
      else if (*vcol) v = cmd_validate_coloring(a);
      else if (*realize) v = cmd_realize(a, output, trace);
      else if (*wit) v = cmd_witness(a, b, output, trace);
      else if (*morph) v = cmd_morphism(a, b, representable);
      else if (*res) v = cmd_resolve(a, output, trace);
      else if (*stab) v = cmd_stabilizers(a);
      else v = cmd_info(a);
      return emit(v);
    } catch (const json::exception& e) {
      return fail(std::string("malformed JSON: ") + e.what());
    } catch (const std::exception& e) {
      return fail(e.what());
    }
  }

 private:
  std::istream& in_;
  std::ostream& out_;
  std::ostream& err_;

  int fail(const std::string& message) {
    json j{{"status", status_name(Status::error)}, {"error", message}};
    err_ << j.dump(2) << '\n';
    return exit_code(Status::error);
  }

  int emit(const Verdict& v) {
    bool doc_on_stdout = false;
    if (v.output) {
      const std::string text = v.output->dump(2) + "\n";
      if (v.output_path == "-") {
        out_ << text;
        doc_on_stdout = true;
      } else {
        std::ofstream f(v.output_path, std::ios::binary);
        if (!f) return fail("cannot write " + v.output_path);
        f << text;
      }
    }
    json j{{"status", status_name(v.status)}, {"detail", v.detail}};
    (doc_on_stdout ? err_ : out_) << j.dump(2) << '\n';
    return exit_code(v.status);
  }

  static void check_threads_env() {
    // Work is sequential; the variable is only checked for well-formedness.
    if (const char* t = std::getenv("STACKYFAN_THREADS")) {
      std::string s(t);
      bool ok = !s.empty() && s.find_first_not_of("0123456789") == std::string::npos && std::stoul(s) > 0;
      if (!ok) throw Error("STACKYFAN_THREADS must be a positive integer");
    }
  }

  io::Document load(const std::string& path) {
    json j;
    if (path == "-") {
      j = json::parse(in_);
    } else {
      std::ifstream f(path, std::ios::binary);
      if (!f) throw Error("cannot read " + path);
      j = json::parse(f);
    }
    return io::parse_document(j);
  }

  StackyFan load_stacky(const std::string& path) {
    io::Document doc = load(path);
    if (doc.index() != 0) throw io::SchemaError(path + ": expected a stacky_fan document, got " + io::kind_of(doc));
    return io::to_stacky_fan(std::get<io::StackyFanDoc>(doc));
  }

  static json violations_json(const Report& r) { return json(r.violations); }

  static json conflicts_json(const EquivalenceReport& report) {
    using io::detail::matrix_json;
    json out = json::array();
    for (const auto& c : report.conflicts) {
      out.push_back({{"a_cone", matrix_json(c.a_cone.rays())},
                     {"b_cone", matrix_json(c.b_cone.rays())},
                     {"a_lattice", matrix_json(c.a_lattice.basis())},
                     {"b_lattice", matrix_json(c.b_lattice.basis())}});
    }
    return out;
  }

  static Verdict from_report(const Report& r, const char* kind) {
    Verdict v;
    v.status = r.ok() ? Status::ok : Status::violation;
    v.detail = {{"kind", kind}, {"violations", violations_json(r)}};
    return v;
  }

  Verdict cmd_validate(const std::string& path) {
    io::Document doc = load(path);
    if (auto* s = std::get_if<io::StackyFanDoc>(&doc)) {
      return from_report(validate_stacky(s->dim, s->rays, s->max_cones), "stacky_fan");
    }
    if (auto* k = std::get_if<io::KMFanDoc>(&doc)) {
      Report r;
      try {
        r = validate_km(io::to_km_fan(*k));
      } catch (const PreconditionError& e) {
        r.add(e.what());
      }
      return from_report(r, "km_fan");
    }
    return cmd_validate_coloring_doc(std::get<io::ColoringDoc>(doc));
  }

  Verdict cmd_validate_coloring_doc(const io::ColoringDoc& doc) {
    Report r;
    try {
      r = validate_coloring(io::to_coloring(doc));
    } catch (const PreconditionError& e) {
      r.add(e.what());
    }
    return from_report(r, "coloring");
  }

  Verdict cmd_validate_coloring(const std::string& path) {
    io::Document doc = load(path);
    if (doc.index() != 2) throw io::SchemaError(path + ": expected a coloring document, got " + io::kind_of(doc));
    return cmd_validate_coloring_doc(std::get<io::ColoringDoc>(doc));
  }

  Verdict cmd_equiv(const std::string& pa, const std::string& pb) {
    const StackyFan a = load_stacky(pa), b = load_stacky(pb);
    require_dim(b.ambient_dim(), a.ambient_dim(), "equiv");
    const EquivalenceReport report = equivalent(a, b);
    Verdict v;
    v.status = report.verdict ? Status::yes : Status::no;
    v.detail = {{"conflicts", conflicts_json(report)}};
    return v;
  }

  Verdict cmd_coloring(const std::string& path, const std::string& output) {
    const Coloring c = coloring_of(load_stacky(path));
    const json doc = io::to_json(io::to_doc(c));
    Verdict v;
    v.status = Status::ok;
    v.detail = {{"classes", c.classes().size()}};
    if (output.empty()) {
      v.detail["coloring"] = doc;
    } else {
      v.output = doc;
      v.output_path = output;
    }
    return v;
  }

  Verdict cmd_realize(const std::string& path, const std::string& output, bool trace) {
    io::Document doc = load(path);
    if (doc.index() != 2) throw io::SchemaError(path + ": expected a coloring document, got " + io::kind_of(doc));
    const Coloring c = io::to_coloring(std::get<io::ColoringDoc>(doc));
    const Report r = validate_coloring(c);
    if (!r.ok()) return from_report(r, "coloring");
    const Resolution res = realize_coloring_traced(c);
    Verdict v;
    v.status = Status::ok;
    v.detail = {{"rays", res.result.fan().rays().size()},
                {"max_cones", res.result.fan().max_cones().size()},
                {"subdivisions", res.trace.size()}};
    if (trace) v.detail["trace"] = io::trace_json(res.trace);
    v.output = io::to_json(io::to_doc(res.result));
    v.output_path = output;
    return v;
  }

  static json certificate_json(const RepresentabilityCertificate& cert) {
    json out = json::array();
    for (const auto& c : cert.cones) {
      out.push_back({{"roof_cone", c.source_cone},
                     {"target_cone", c.target_cone},
                     {"lattice", io::detail::matrix_json(c.source_lattice.basis())}});
    }
    return out;
  }

  Verdict cmd_witness(const std::string& pa, const std::string& pb, const std::string& output, bool trace) {
    const StackyFan a = load_stacky(pa), b = load_stacky(pb);
    require_dim(b.ambient_dim(), a.ambient_dim(), "witness");
    auto result = witness(a, b);
    Verdict v;
    if (auto* report = std::get_if<EquivalenceReport>(&result)) {
      v.status = Status::no;
      v.detail = {{"conflicts", conflicts_json(*report)}};
      return v;
    }
    const Witness& w = std::get<Witness>(result);
    v.status = Status::yes;
    v.detail = {{"map_to_a", certificate_json(w.to_a)},
                {"map_to_b", certificate_json(w.to_b)},
                {"verified", verify(w.to_a, w.roof, a) && verify(w.to_b, w.roof, b)},
                {"subdivisions", w.trace.size()}};
    if (trace) v.detail["trace"] = io::trace_json(w.trace);
    v.output = io::to_json(io::to_doc(w.roof));
    v.output_path = output;
    return v;
  }

  Verdict cmd_morphism(const std::string& ps, const std::string& pt, bool representable) {
    const StackyFan s = load_stacky(ps), t = load_stacky(pt);
    require_dim(t.ambient_dim(), s.ambient_dim(), "morphism");
    const Report r = representable ? check_representable(s, t).report : check_morphism(s, t);
    Verdict v;
    v.status = r.ok() ? Status::yes : Status::no;
    v.detail = {{"representable", representable}, {"violations", violations_json(r)}};
    return v;
  }

  Verdict cmd_resolve(const std::string& path, const std::string& output, bool trace) {
    io::Document doc = load(path);
    if (doc.index() != 1) throw io::SchemaError(path + ": expected a km_fan document, got " + io::kind_of(doc));
    const KMFan f = io::to_km_fan(std::get<io::KMFanDoc>(doc));
    const Report r = validate_km(f);
    if (!r.ok()) return from_report(r, "km_fan");
    const Resolution res = resolve(f);
    Verdict v;
    v.status = Status::ok;
    v.detail = {{"rays", res.result.fan().rays().size()},
                {"max_cones", res.result.fan().max_cones().size()},
                {"subdivisions", res.trace.size()}};
    if (trace) v.detail["trace"] = io::trace_json(res.trace);
    v.output = io::to_json(io::to_doc(res.result));
    v.output_path = output;
    return v;
  }

  Verdict cmd_stabilizers(const std::string& path) {
    const StackyFan s = load_stacky(path);
    json cones = json::array();
    Integer worst = 1;
    for (const auto& c : s.fan().all_cones()) {
      if (c.dim() == 0) continue;
      const Integer order = stabilizer_order(s, c);
      if (order > worst) worst = order;
      cones.push_back({{"rays", io::detail::matrix_json(c.rays())}, {"order", io::detail::integer_json(order)}});
    }
    Verdict v;
    v.status = Status::ok;
    v.detail = {{"cones", cones}, {"max_order", io::detail::integer_json(worst)}};
    return v;
  }

  Verdict cmd_info(const std::string& path) {
    io::Document doc = load(path);
    Verdict v;
    v.status = Status::ok;
    v.detail = {{"kind", io::kind_of(doc)}};
    if (auto* s = std::get_if<io::StackyFanDoc>(&doc)) {
      const Report r = validate_stacky(s->dim, s->rays, s->max_cones);
      v.detail["dim"] = s->dim;
      v.detail["rays"] = s->rays.size();
      v.detail["max_cones"] = s->max_cones.size();
      v.detail["valid"] = r.ok();
      if (r.ok()) {
        const StackyFan f = io::to_stacky_fan(*s);
        const Coloring c = coloring_of(f);
        Integer worst = 1;
        for (const auto& m : f.fan().max_cones()) worst = std::max(worst, stabilizer_order(f, m));
        v.detail["coloring_classes"] = c.classes().size();
        v.detail["max_stabilizer_order"] = io::detail::integer_json(worst);
      }
    } else if (auto* k = std::get_if<io::KMFanDoc>(&doc)) {
      const KMFan f = io::to_km_fan(*k);
      const Report r = validate_km(f);
      v.detail["dim"] = k->dim;
      v.detail["rays"] = k->rays.size();
      v.detail["max_cones"] = k->max_cones.size();
      v.detail["valid"] = r.ok();
      v.detail["simplicial"] = f.fan().is_simplicial();
      if (r.ok()) {
        v.detail["smooth"] = is_smooth(f);
        if (f.fan().is_simplicial()) {
          json mults = json::array();
          for (const auto& c : f.fan().max_cones()) mults.push_back(io::detail::integer_json(multiplicity(f, c).mult));
          v.detail["multiplicities"] = mults;
        }
      }
    } else {
      const auto& c = std::get<io::ColoringDoc>(doc);
      const Coloring col = io::to_coloring(c);
      std::size_t cones = 0;
      for (const auto& cls : c.classes) cones += cls.cones.size();
      v.detail["dim"] = c.dim;
      v.detail["classes"] = c.classes.size();
      v.detail["cones"] = cones;
      v.detail["valid"] = validate_coloring(col).ok();
    }
    return v;
  }
};

inline int run(int argc, const char* const* argv, std::istream& in = std::cin, std::ostream& out = std::cout,
               std::ostream& err = std::cerr) {
  return Runner(in, out, err).run(argc, argv);
}

}  // namespace stackyfan::cli
