#include "document.hpp"

#include <CLI11.hpp>

#include <iostream>
#include <random>

using namespace ihsig;
using namespace ihsig::cli;

namespace {

using ojson = nlohmann::ordered_json;

enum class Format { text, machine };

/**
 * Output buffered until the command finishes, so a failing command prints
 * nothing to stdout. Machine format: one JSON object per line, fields in a
 * fixed order, the first field "record" naming the record type.
 */
class Report {
 public:
  explicit Report(Format f) : format_(f) {}

  void block(const std::string& kind, const std::vector<std::pair<std::string, ojson>>& fields) {
    if (format_ == Format::machine) return line(kind, fields);
    out_ << kind << "\n";
    std::size_t width = 0;
    for (const auto& [k, v] : fields) width = std::max(width, k.size());
    for (const auto& [k, v] : fields) out_ << "  " << k << std::string(width - k.size() + 2, ' ') << show(v) << "\n";
  }

  void line(const std::string& kind, const std::vector<std::pair<std::string, ojson>>& fields) {
    if (format_ == Format::machine) {
      ojson j;
      j["record"] = kind;
      for (const auto& [k, v] : fields) j[k] = v;
      out_ << j.dump() << "\n";
      return;
    }
    out_ << kind;
    for (const auto& [k, v] : fields) out_ << "  " << k << " " << show(v);
    out_ << "\n";
  }

  std::string str() const { return out_.str(); }

 private:
  static std::string show(const ojson& v) {
    if (v.is_string()) return v.get<std::string>();
    if (v.is_array()) {
      std::string s;
      for (const auto& x : v) s += (s.empty() ? "" : " ") + show(x);
      return "[" + s + "]";
    }
    return v.dump();
  }

  Format format_;
  std::ostringstream out_;
};

ojson dims_json(const GradedDims& d) { return ojson(d); }

std::string rat(const Rational& q) { return to_string(q); }

struct Offset {
  std::size_t k = 0;
  std::optional<ConeParameter> cone;
  std::string source;
};

Offset resolve_offset(const std::optional<Rational>& c, const std::optional<long>& k, std::size_t f) {
  if (c && k) throw InputError("give either c or k, not both");
  Offset o;
  if (c) {
    try {
      o.cone = ConeParameter(*c, f);
    } catch (const std::invalid_argument& e) {
      throw InputError(std::string(e.what()) + " (c -> 0 is the absolute/relative limit, not a cone)");
    }
    o.k = static_cast<std::size_t>(hodge_shift(*o.cone).normative);
    o.source = "c=" + rat(*c);
    return o;
  }
  if (k && *k < 0) throw InputError("the offset k is non-negative");
  o.k = k ? static_cast<std::size_t>(*k) : 0;
  o.source = k ? "k" : "default";
  return o;
}

void shift_fields(Report& rep, const ConeParameter& cp) {
  const ShiftAudit a = hodge_shift(cp);
  const long k = a.normative;
  rep.block("shift", {{"c", rat(cp.c)},
                      {"f", cp.f},
                      {"l2_cutoff", rat(a.cutoff)},
                      {"first_vanishing_degree", a.vanishing_degree},
                      {"normative_k", k},
                      {"literal_k", a.literal},
                      {"literal_formula", cp.f % 2 == 1 ? "[[1/2 + 1/(2c)]]" : "[[1 + 1/(2c)]]"},
                      {"discrepancy", a.discrepancy()},
                      {"perversity_index", MiddleOffsets{cp.f, static_cast<std::size_t>(k)}.upper_index().j}});
}

int cmd_shift(const std::string& c, std::size_t f, Format fmt) {
  Rational cv;
  try {
    cv = parse_rational(c);
  } catch (const std::invalid_argument& e) {
    throw InputError(std::string("--c: ") + e.what());
  }
  Report rep(fmt);
  shift_fields(rep, resolve_offset(cv, std::nullopt, f).cone.value());
  std::cout << rep.str();
  return 0;
}

int cmd_ih_table(const Document& doc, const std::optional<Rational>& c, const std::optional<long>& k, Format fmt) {
  if (!doc.end) throw InputError("/bundle: the ih-table command needs a bundle section");
  const LimitRecord& rec = *doc.end;
  const Offset off = resolve_offset(c ? c : doc.c, k ? k : (c ? std::nullopt : doc.k), rec.f());
  Report rep(fmt);
  rep.block("bundle", {{"b", rec.b()}, {"f", rec.f()}, {"k", off.k}, {"offset_from", off.source},
                       {"einf_total", dims_json(rec.einf_total_dims())}});
  if (off.cone) shift_fields(rep, *off.cone);

  GradedDims fiber;
  for (std::size_t j = 0; j <= rec.f(); ++j) fiber.push_back(rec.page(2).dim({0, j}));
  MiddleOffsets mo{rec.f(), off.k};
  rep.block("local", {{"fiber", dims_json(fiber)},
                      {"q_index", mo.upper_index().j},
                      {"ih_q", dims_json(local_ih_table(fiber, mo.upper_index()))},
                      {"p_index", mo.lower_index().j},
                      {"ih_p", dims_json(local_ih_table(fiber, mo.lower_index()))}});

  bool agree = true;
  for (auto v : {Variant::abs_q, Variant::rel_q, Variant::rel_p}) {
    TruncationSpec spec{rec.b(), rec.f(), off.k, v};
    EndTable table = einf_closed_form(rec, spec);
    EndDims oracle = truncated_run(rec, spec);
    agree = agree && (table.dims() == oracle);
    rep.line("table", {{"variant", to_string(v)},
                       {"total", dims_json(table.dims().total_dims())},
                       {"oracle", table.dims() == oracle ? "agree" : "DIFFER"}});
    for (const auto& [t, e] : table.entries) {
      if (e.dim() == 0) continue;
      rep.line("entry", {{"variant", to_string(v)}, {"slot", ojson::array({t.first, t.second})},
                         {"dim", e.dim()}, {"summands", e.label()}});
    }
  }
  std::cout << rep.str();
  return agree ? 0 : 1;
}

int cmd_signature(const Document& doc, const std::optional<Rational>& c, const std::optional<long>& k, Format fmt) {
  if (!doc.interior) throw InputError("/simplicial: the signature command needs a simplicial section");
  if (!doc.end) throw InputError("/bundle: the signature command needs a bundle section");
  const Offset off = resolve_offset(c ? c : doc.c, k ? k : (c ? std::nullopt : doc.k), doc.end->f());
  SpaceAssembly a{*doc.interior, *doc.end, off.cone, off.k};
  SignatureReport r;
  try {
    r = global_signature(a);
  } catch (const std::exception& e) {
    throw InputError(e.what());
  }
  Report rep(fmt);
  std::vector<std::pair<std::string, ojson>> fields{
      {"dimension", r.n}, {"b", r.b}, {"f", r.f}, {"k", r.k}, {"offset_from", off.source},
      {"interior", r.interior}};
  for (auto [s, t] : r.taus) fields.push_back({"tau_" + std::to_string(s), t});
  fields.push_back({"first_page", r.first_page});
  fields.push_back({"end_signature", r.end_signature});
  fields.push_back({"block_assembly", r.block_signature});
  fields.push_back({"paths_agree", r.paths_agree()});
  fields.push_back({"global", r.global});
  if (r.shift) {
    fields.push_back({"normative_k", r.shift->normative});
    fields.push_back({"literal_k", r.shift->literal});
    fields.push_back({"literal_discrepancy", r.shift->discrepancy()});
  }
  rep.block("signature", fields);
  std::cout << rep.str();
  return r.paths_agree() ? 0 : 1;
}

struct SuiteResult {
  std::size_t passed = 0, total = 0;
};

void verdict(Report& rep, SuiteResult& res, std::size_t index, bool ok,
             std::vector<std::pair<std::string, ojson>> fields) {
  fields.insert(fields.begin(), {"index", index});
  fields.push_back({"result", ok ? "pass" : "FAIL"});
  rep.line("case", fields);
  ++res.total;
  res.passed += ok;
}

RandomModelOptions any_parity() {
  RandomModelOptions opt;
  opt.even_total_dimension = false;
  return opt;
}

SuiteResult suite_oracle(Report& rep, std::mt19937_64& rng, std::size_t count) {
  SuiteResult res;
  for (std::size_t i = 0; i < count; ++i) {
    LimitRecord rec = random_model(rng, any_parity()).run();
    bool ok = true;
    for (std::size_t k = 0; k <= 2; ++k)
      for (auto v : {Variant::abs_q, Variant::rel_q, Variant::rel_p}) {
        TruncationSpec spec{rec.b(), rec.f(), k, v};
        ok = ok && closed_form_dims(rec, spec) == truncated_run(rec, spec);
      }
    verdict(rep, res, i, ok, {{"b", rec.b()}, {"f", rec.f()}});
  }
  return res;
}

SuiteResult suite_duality(Report& rep, std::mt19937_64& rng, std::size_t count) {
  SuiteResult res;
  for (std::size_t i = 0; i < count; ++i) {
    LimitRecord rec = random_model(rng, any_parity()).run();
    bool ok = true;
    for (std::size_t k = 0; k <= 2; ++k) ok = ok && verify_duality(rec, k).holds();
    verdict(rep, res, i, ok, {{"b", rec.b()}, {"f", rec.f()}, {"n", rec.b() + rec.f() + 1}});
  }
  return res;
}

SuiteResult suite_parity(Report& rep, std::mt19937_64& rng, std::size_t count) {
  SuiteResult res;
  for (std::size_t i = 0; i < count; ++i) {
    LimitRecord rec = random_model(rng).run();
    bool ok = true;
    ojson taus = ojson::array();
    for (auto [s, t] : tau_list(rec)) {
      taus.push_back(t);
      if (!contributing_parity(rec.f(), s) && t != 0) ok = false;
    }
    for (std::size_t k = 0; k <= 2; ++k) {
      BlockAssembly a = block_matrix_assembly(rec, k);
      ok = ok && a.signature == end_signature(rec, k);
      for (const auto& p : a.pairs) ok = ok && p.signature == 0;
    }
    verdict(rep, res, i, ok, {{"b", rec.b()}, {"f", rec.f()}, {"tau", taus}});
  }
  return res;
}

SuiteResult suite_novikov(Report& rep, std::mt19937_64& rng, std::size_t count) {
  SuiteResult res;
  std::size_t index = 0;
  auto run = [&](const std::string& name, const OrientedPair& x, const std::vector<bool>& marker) {
    NovikovReport r = novikov_check(x, marker);
    verdict(rep, res, index++, r.holds(),
            {{"split", name}, {"closed", r.closed}, {"first", r.first}, {"second", r.second}});
  };
  auto s4 = fixtures::sphere(4);
  run("sphere4/star0", s4, star_marker(s4.pair, 0));
  auto x = fixtures::cp2();
  for (std::size_t v = 0; v < 9; ++v) run("cp2/star" + std::to_string(v), x, star_marker(x.pair, v));
  auto u = disjoint_union(x, s4);
  std::vector<bool> first(u.pair.facets().size(), false);
  std::fill(first.begin(), first.begin() + 36, true);
  run("cp2+sphere4/components", u, first);

  // random unions of two vertex stars; splits along non-manifolds are skipped
  std::uniform_int_distribution<std::size_t> vertex(0, 8);
  std::size_t drawn = 0;
  for (std::size_t attempt = 0; drawn < count && attempt < 50 * (count + 1); ++attempt) {
    const std::size_t a = vertex(rng), b = vertex(rng);
    if (a == b) continue;
    auto ma = star_marker(x.pair, a), mb = star_marker(x.pair, b);
    for (std::size_t i = 0; i < ma.size(); ++i) ma[i] = ma[i] || mb[i];
    try {
      run("cp2/star" + std::to_string(a) + "+star" + std::to_string(b), x, ma);
      ++drawn;
    } catch (const std::invalid_argument&) {
    }
  }
  return res;
}

SuiteResult suite_hodge(Report& rep) {
  SuiteResult res;
  HodgeReport h = verify_hodge_consistency(default_cone_grid(), 1, 8);
  for (std::size_t i = 0; i < h.rows.size(); ++i) {
    const HodgeRow& r = h.rows[i];
    verdict(rep, res, i, r.normative_agrees,
            {{"c", rat(r.c)},
             {"f", r.f},
             {"normative_k", r.audit.normative},
             {"literal_k", r.audit.literal},
             {"literal_flag", r.audit.discrepancy() ? "discrepancy" : "ok"}});
  }
  rep.line("literal", {{"discrepancies", h.literal_discrepancies()}, {"rows", h.rows.size()}});
  return res;
}

int cmd_verify(const std::string& suite, std::uint64_t seed, std::optional<std::size_t> count, Format fmt) {
  Report rep(fmt);
  std::mt19937_64 rng(seed);
  SuiteResult res;
  if (suite == "oracle") res = suite_oracle(rep, rng, count.value_or(100));
  else if (suite == "duality") res = suite_duality(rep, rng, count.value_or(100));
  else if (suite == "parity") res = suite_parity(rep, rng, count.value_or(100));
  else if (suite == "novikov") res = suite_novikov(rep, rng, count.value_or(6));
  else if (suite == "hodge-consistency") res = suite_hodge(rep);
  else throw InputError("unknown suite '" + suite + "' (duality, oracle, parity, novikov, hodge-consistency)");
  const bool ok = res.passed == res.total;
  rep.line("summary", {{"suite", suite}, {"seed", seed}, {"passed", res.passed}, {"total", res.total},
                       {"result", ok ? "pass" : "FAIL"}});
  std::cout << rep.str();
  return ok ? 0 : 1;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Perverse signatures of spaces with a fibred conical end"};
  app.require_subcommand(1);
  std::string format = "text";
  app.add_option("--format", format, "text or machine")->check(CLI::IsMember({"text", "machine"}));

  std::string c_text;
  std::size_t f = 0;
  auto* shift = app.add_subcommand("shift", "offset k for a cone parameter c");
  shift->add_option("--c", c_text, "cone parameter p/q in (0, 1]")->required();
  shift->add_option("--f", f, "fiber dimension")->required();

  std::string input;
  std::optional<std::string> c_opt;
  std::optional<long> k_opt;
  auto* table = app.add_subcommand("ih-table", "truncated end tables of a bundle document");
  auto* sig = app.add_subcommand("signature", "global signature of an assembly document");
  for (auto* sub : {table, sig}) {
    sub->add_option("--input", input, "document (JSON)")->required();
    auto* oc = sub->add_option("--c", c_opt, "cone parameter p/q in (0, 1]");
    auto* ok = sub->add_option("--k", k_opt, "offset k >= 0");
    oc->excludes(ok);
  }

  std::string suite;
  std::uint64_t seed = 0;
  std::optional<std::size_t> count;
  auto* verify = app.add_subcommand("verify", "run a verification suite");
  verify->add_option("suite", suite, "duality, oracle, parity, novikov or hodge-consistency")->required();
  verify->add_option("--seed", seed, "seed for the random corpus");
  verify->add_option("--count", count, "number of random cases");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 2;
  }

  const Format fmt = format == "machine" ? Format::machine : Format::text;
  try {
    std::optional<Rational> c;
    if (c_opt) {
      try {
        c = parse_rational(*c_opt);
      } catch (const std::invalid_argument& e) {
        throw InputError(std::string("--c: ") + e.what());
      }
    }
    if (*shift) return cmd_shift(c_text, f, fmt);
    if (*table) return cmd_ih_table(read_document(input), c, k_opt, fmt);
    if (*sig) return cmd_signature(read_document(input), c, k_opt, fmt);
    if (*verify) return cmd_verify(suite, seed, count, fmt);
  } catch (const InputError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }
  return 2;
}
