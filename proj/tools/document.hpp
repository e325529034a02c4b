#ifndef IHSIG_TOOLS_DOCUMENT_HPP
#define IHSIG_TOOLS_DOCUMENT_HPP

#include <ihsig/assemble.hpp>
#include <ihsig/fixtures.hpp>
#include <ihsig/model.hpp>

#include <json.hpp>

#include <fstream>
#include <sstream>

namespace ihsig::cli {

using nlohmann::json;

/// Bad input: unreadable file, malformed JSON, or data rejected by a module.
class InputError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Error at a JSON pointer inside the document.
[[noreturn]] inline void fail(const std::string& where, const std::string& what) {
  throw InputError((where.empty() ? "/" : where) + ": " + what);
}

struct Document {
  std::optional<OrientedPair> interior;
  std::optional<LimitRecord> end;
  std::optional<Rational> c;
  std::optional<long> k;
};

inline const json& field(const json& j, const std::string& where, const std::string& key) {
  if (!j.is_object()) fail(where, "expected an object");
  if (!j.contains(key)) fail(where, "missing field '" + key + "'");
  return j.at(key);
}

inline std::size_t as_count(const json& j, const std::string& where) {
  if (!j.is_number_integer() || j.get<long long>() < 0) fail(where, "expected a non-negative integer");
  return j.get<std::size_t>();
}

inline long as_int(const json& j, const std::string& where) {
  if (!j.is_number_integer()) fail(where, "expected an integer");
  return j.get<long>();
}

inline Rational as_rational(const json& j, const std::string& where) {
  if (j.is_number_integer()) return Rational(j.get<long long>());
  if (!j.is_string()) fail(where, "expected a rational written as \"p/q\" or an integer");
  try {
    return parse_rational(j.get<std::string>());
  } catch (const std::invalid_argument& e) {
    fail(where, e.what());
  }
}

inline std::vector<std::size_t> as_counts(const json& j, const std::string& where) {
  if (!j.is_array()) fail(where, "expected an array");
  std::vector<std::size_t> out;
  for (std::size_t i = 0; i < j.size(); ++i) out.push_back(as_count(j[i], where + "/" + std::to_string(i)));
  return out;
}

inline Matrix as_matrix(const json& j, const std::string& where) {
  if (!j.is_array()) fail(where, "expected an array of rows");
  std::size_t cols = 0;
  for (std::size_t r = 0; r < j.size(); ++r) {
    if (!j[r].is_array()) fail(where + "/" + std::to_string(r), "expected a row array");
    if (r == 0) cols = j[r].size();
    if (j[r].size() != cols) fail(where + "/" + std::to_string(r), "rows have different lengths");
  }
  Matrix m(j.size(), cols);
  for (std::size_t r = 0; r < j.size(); ++r)
    for (std::size_t c = 0; c < cols; ++c)
      m(r, c) = as_rational(j[r][c], where + "/" + std::to_string(r) + "/" + std::to_string(c));
  return m;
}

inline Vector as_vector(const json& j, const std::string& where) {
  if (!j.is_array()) fail(where, "expected an array");
  Vector v;
  for (std::size_t i = 0; i < j.size(); ++i) v.push_back(as_rational(j[i], where + "/" + std::to_string(i)));
  return v;
}

inline Slot as_slot(const json& j, const std::string& where) {
  auto v = as_counts(j, where);
  if (v.size() != 2) fail(where, "expected a slot [i, j]");
  return {v[0], v[1]};
}

inline OrientedPair named_fixture(const std::string& name, const std::string& where) {
  if (name == "sphere2") return fixtures::sphere(2);
  if (name == "sphere4") return fixtures::sphere(4);
  if (name == "ball2") return fixtures::ball(2);
  if (name == "ball4") return fixtures::ball(4);
  if (name == "cp2") return fixtures::cp2();
  if (name == "cp2_ball") return fixtures::cp2_ball();
  if (name == "cp2_disk_bundle") return fixtures::cp2_disk_bundle();
  if (name == "disk_times_sphere") return fixtures::disk_times_sphere();
  fail(where, "unknown fixture '" + name + "'");
}

inline OrientedPair parse_simplicial(const json& j, const std::string& where) {
  if (!j.is_object()) fail(where, "expected an object");
  if (j.contains("fixture")) {
    if (!j["fixture"].is_string()) fail(where + "/fixture", "expected a name");
    return named_fixture(j["fixture"].get<std::string>(), where + "/fixture");
  }
  const json& v = field(j, where, "vertices");
  const std::size_t vertices = v.is_array() ? v.size() : as_count(v, where + "/vertices");
  std::vector<Simplex> facets, boundary;
  const json& fj = field(j, where, "facets");
  if (!fj.is_array()) fail(where + "/facets", "expected an array of vertex tuples");
  for (std::size_t i = 0; i < fj.size(); ++i) facets.push_back(as_counts(fj[i], where + "/facets/" + std::to_string(i)));
  if (j.contains("boundary")) {
    const json& bj = j["boundary"];
    if (!bj.is_array()) fail(where + "/boundary", "expected an array of vertex tuples");
    for (std::size_t i = 0; i < bj.size(); ++i)
      boundary.push_back(as_counts(bj[i], where + "/boundary/" + std::to_string(i)));
  }
  try {
    SimplicialPair pair(vertices, facets, boundary);
    if (!j.contains("orientation")) return oriented(std::move(pair));
    const json& oj = j["orientation"];
    if (!oj.is_array() || oj.size() != facets.size()) {
      fail(where + "/orientation", "expected one coefficient per facet");
    }
    std::vector<int> coeff;
    for (std::size_t i = 0; i < oj.size(); ++i) {
      const long c = as_int(oj[i], where + "/orientation/" + std::to_string(i));
      if (c != 1 && c != -1) fail(where + "/orientation/" + std::to_string(i), "coefficients are +1 or -1");
      // coefficients refer to the facets as written; the pair stores them sorted
      coeff.push_back(static_cast<int>(c) * pair.given_orientation()[i]);
    }
    FundamentalCycle fc{coeff};
    check_fundamental_cycle(pair, fc);
    return {std::move(pair), std::move(fc)};
  } catch (const InputError&) {
    throw;
  } catch (const std::exception& e) {
    fail(where, e.what());
  }
}

inline LimitRecord parse_model(const json& j, const std::string& where) {
  auto base = as_counts(field(j, where, "base"), where + "/base");
  auto fiber = as_counts(field(j, where, "fiber"), where + "/fiber");
  std::vector<Transgression> ts;
  if (j.contains("transgressions")) {
    const json& tj = j["transgressions"];
    if (!tj.is_array()) fail(where + "/transgressions", "expected an array");
    for (std::size_t t = 0; t < tj.size(); ++t) {
      const std::string tw = where + "/transgressions/" + std::to_string(t);
      Transgression tr{as_count(field(tj[t], tw, "generator"), tw + "/generator"), {}};
      const json& terms = field(tj[t], tw, "terms");
      if (!terms.is_array()) fail(tw + "/terms", "expected an array");
      for (std::size_t i = 0; i < terms.size(); ++i) {
        const std::string w = tw + "/terms/" + std::to_string(i);
        auto mask = [&](const char* key) {
          unsigned m = 0;
          if (!terms[i].contains(key)) return m;
          for (auto g : as_counts(terms[i][key], w + "/" + key)) {
            if (g >= 16) fail(w + "/" + key, "generator index out of range");
            m |= 1u << g;
          }
          return m;
        };
        tr.terms.push_back({as_rational(field(terms[i], w, "coefficient"), w + "/coefficient"), mask("base"),
                            mask("fiber")});
      }
      ts.push_back(std::move(tr));
    }
  }
  try {
    return FibrationModel(SphereProductRing(base), SphereProductRing(fiber), ts).run();
  } catch (const std::exception& e) {
    fail(where, e.what());
  }
}

inline LimitRecord parse_page(const json& j, const std::string& where) {
  const std::size_t b = as_count(field(j, where, "b"), where + "/b");
  const std::size_t f = as_count(field(j, where, "f"), where + "/f");
  const json& dj = field(j, where, "dims");
  if (!dj.is_array()) fail(where + "/dims", "expected b+1 columns of f+1 dimensions");
  DimGrid dims;
  for (std::size_t i = 0; i < dj.size(); ++i) dims.push_back(as_counts(dj[i], where + "/dims/" + std::to_string(i)));
  std::map<SlotPair, Matrix> products;
  if (j.contains("products")) {
    const json& pj = j["products"];
    if (!pj.is_array()) fail(where + "/products", "expected an array");
    for (std::size_t i = 0; i < pj.size(); ++i) {
      const std::string w = where + "/products/" + std::to_string(i);
      products[{as_slot(field(pj[i], w, "left"), w + "/left"), as_slot(field(pj[i], w, "right"), w + "/right")}] =
          as_matrix(field(pj[i], w, "matrix"), w + "/matrix");
    }
  }
  std::optional<Vector> volume;
  if (j.contains("volume")) volume = as_vector(j["volume"], where + "/volume");
  std::map<std::size_t, DifferentialSet> schedule;
  if (j.contains("differentials")) {
    const json& sj = j["differentials"];
    if (!sj.is_object()) fail(where + "/differentials", "expected an object keyed by page index");
    for (const auto& [key, list] : sj.items()) {
      const std::string w = where + "/differentials/" + key;
      std::size_t r = 0;
      try {
        std::size_t used = 0;
        r = std::stoul(key, &used);
        if (used != key.size()) throw std::invalid_argument(key);
      } catch (const std::exception&) {
        fail(w, "page index must be an integer");
      }
      if (r < 2) fail(w, "page index must be at least 2");
      if (!list.is_array()) fail(w, "expected an array");
      for (std::size_t i = 0; i < list.size(); ++i) {
        const std::string wi = w + "/" + std::to_string(i);
        schedule[r][as_slot(field(list[i], wi, "slot"), wi + "/slot")] =
            as_matrix(field(list[i], wi, "matrix"), wi + "/matrix");
      }
    }
  }
  try {
    return run_to_limit(SpectralPage(b, f, dims, products, volume), schedule_hook(schedule));
  } catch (const std::exception& e) {
    fail(where, e.what());
  }
}

inline LimitRecord parse_bundle(const json& j, const std::string& where) {
  if (!j.is_object()) fail(where, "expected an object");
  if (j.contains("model")) return parse_model(j["model"], where + "/model");
  if (j.contains("product")) {
    const json& pj = j["product"];
    if (pj.is_object() && pj.contains("transgressions")) fail(where + "/product", "a product has no transgressions");
    return parse_model(pj, where + "/product");
  }
  if (j.contains("page")) return parse_page(j["page"], where + "/page");
  fail(where, "expected one of 'model', 'product' or 'page'");
}

inline Document parse_document(const std::string& text) {
  json j;
  try {
    j = json::parse(text);
  } catch (const json::parse_error& e) {
    throw InputError(std::string("parse error: ") + e.what());
  }
  if (!j.is_object()) fail("", "the document must be an object");
  for (const auto& [key, value] : j.items())
    if (key != "simplicial" && key != "bundle" && key != "parameters") fail("/" + key, "unknown section");
  Document d;
  if (j.contains("simplicial")) d.interior = parse_simplicial(j["simplicial"], "/simplicial");
  if (j.contains("bundle")) d.end = parse_bundle(j["bundle"], "/bundle");
  if (j.contains("parameters")) {
    const json& p = j["parameters"];
    if (!p.is_object()) fail("/parameters", "expected an object");
    if (p.contains("c")) d.c = as_rational(p["c"], "/parameters/c");
    if (p.contains("k")) {
      d.k = as_int(p["k"], "/parameters/k");
      if (*d.k < 0) fail("/parameters/k", "the offset k is non-negative");
    }
    if (d.c && d.k) fail("/parameters", "give either c or k, not both");
  }
  return d;
}

inline Document read_document(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw InputError("cannot read " + path);
  std::stringstream ss;
  ss << in.rdbuf();
  try {
    return parse_document(ss.str());
  } catch (const InputError& e) {
    throw InputError(path + ": " + e.what());
  }
}

}  // namespace ihsig::cli

#endif  // IHSIG_TOOLS_DOCUMENT_HPP
