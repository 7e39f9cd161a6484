#pragma once

// JSON envelopes: {"header": {...}, "payload": ...}. The header fixes the
// group, field and coefficient shape, so payloads carry no type information
// of their own. Layouts are documented in docs/formats.md.

#include <json.hpp>
#include <optional>
#include <string>
#include <vector>

#include "d1/invert.hpp"

namespace d1::io {

using Json = nlohmann::ordered_json;

inline constexpr int kFormatVersion = 1;

struct Header {
  GroupSpec group;
  FieldSpec field;
  std::size_t n = 1;
  std::string type;
};

struct Envelope {
  Header header;
  Json payload;
};

class FormatError : public UsageError {
 public:
  using UsageError::UsageError;
};

inline Json header_to_json(const Header& h) {
  Json j;
  j["format_version"] = kFormatVersion;
  j["group"] = h.group.to_string();
  j["field"] = h.field.to_string();
  j["n"] = h.n;
  j["type"] = h.type;
  return j;
}

inline Header header_from_json(const Json& j) {
  if (!j.is_object()) throw FormatError("header must be an object");
  if (!j.contains("format_version") || !j["format_version"].is_number_integer())
    throw FormatError("header lacks an integer format_version");
  int version = j["format_version"].get<int>();
  if (version != kFormatVersion)
    throw FormatError("unsupported format_version " + std::to_string(version) + " (expected " +
                      std::to_string(kFormatVersion) + ")");
  for (const char* key : {"group", "field", "type"})
    if (!j.contains(key) || !j[key].is_string()) throw FormatError(std::string("header lacks string field '") + key + "'");
  Header h;
  h.group = GroupSpec::parse(j["group"].get<std::string>());
  h.field = FieldSpec::parse(j["field"].get<std::string>());
  if (!j.contains("n") || !j["n"].is_number_unsigned() || j["n"].get<std::size_t>() < 1)
    throw FormatError("header field 'n' must be a positive integer");
  h.n = j["n"].get<std::size_t>();
  h.type = j["type"].get<std::string>();
  return h;
}

namespace detail {

inline bool holds_object(const Json& j) {
  if (j.is_object()) return true;
  if (j.is_array())
    for (const auto& v : j)
      if (holds_object(v)) return true;
  return false;
}

// Objects one key per line; arrays without objects on a single line.
inline void write_pretty(std::string& out, const Json& j, int indent) {
  const std::string pad(static_cast<std::size_t>(indent), ' ');
  if (j.is_object() && !j.empty()) {
    out += "{\n";
    bool first = true;
    for (const auto& [k, v] : j.items()) {
      if (!first) out += ",\n";
      first = false;
      out += pad + "  " + Json(k).dump() + ": ";
      write_pretty(out, v, indent + 2);
    }
    out += "\n" + pad + "}";
  } else if (j.is_array() && holds_object(j)) {
    out += "[\n";
    for (std::size_t i = 0; i < j.size(); ++i) {
      if (i) out += ",\n";
      out += pad + "  ";
      write_pretty(out, j[i], indent + 2);
    }
    out += "\n" + pad + "]";
  } else if (j.is_array()) {
    out += "[";
    for (std::size_t i = 0; i < j.size(); ++i) {
      if (i) out += ", ";
      write_pretty(out, j[i], indent);
    }
    out += "]";
  } else {
    out += j.dump();
  }
}

}  // namespace detail

inline std::string pretty(const Json& j) {
  std::string out;
  detail::write_pretty(out, j, 0);
  return out + "\n";
}

inline std::string serialize_envelope(const Envelope& e) {
  Json j;
  j["header"] = header_to_json(e.header);
  j["payload"] = e.payload;
  return pretty(j);
}

inline Envelope parse_envelope(const std::string& text) {
  Json j;
  try {
    j = Json::parse(text);
  } catch (const Json::parse_error& e) {
    throw FormatError(std::string("malformed JSON: ") + e.what());
  }
  if (!j.is_object() || !j.contains("header") || !j.contains("payload"))
    throw FormatError("expected an object with 'header' and 'payload'");
  return {header_from_json(j["header"]), j["payload"]};
}

template <Field F>
Header header_for(const Algebra<F>& alg, std::string type) {
  return {alg.group, spec_of(alg.field), alg.n, std::move(type)};
}

inline void expect_type(const Header& h, const std::string& type) {
  if (h.type != type) throw FormatError("expected payload type '" + type + "', got '" + h.type + "'");
}

// ---- group elements -------------------------------------------------------

inline Json element_to_json(const GroupElement& g) {
  if (g.kind() == GroupKind::Free) return g.letters();
  Json a = Json::array();
  for (auto v : g.data()) a.push_back(v);
  return a;
}

inline GroupElement element_from_json(const Json& j, const GroupSpec& group) {
  if (group.kind == GroupKind::Free) {
    if (!j.is_string()) throw FormatError("free-group element must be a letter string");
    auto g = GroupElement::free_word(j.get<std::string>());
    if (!g.belongs_to(group)) throw FormatError("letter outside the generators of " + group.to_string());
    return g;
  }
  if (!j.is_array() || static_cast<int>(j.size()) != group.rank)
    throw FormatError("element of " + group.to_string() + " must be an array of " + std::to_string(group.rank) +
                      " integers");
  std::vector<std::int32_t> c;
  for (const auto& v : j) {
    if (!v.is_number_integer()) throw FormatError("Z^d coordinates must be integers");
    c.push_back(v.get<std::int32_t>());
  }
  return GroupElement::zd(c);
}

inline Json subset_to_json(const FiniteSubset& s) {
  Json a = Json::array();
  for (const auto& g : s) a.push_back(element_to_json(g));
  return a;
}

inline FiniteSubset subset_from_json(const Json& j, const GroupSpec& group) {
  if (!j.is_array()) throw FormatError("subset must be an array of elements");
  std::vector<GroupElement> out;
  for (const auto& e : j) out.push_back(element_from_json(e, group));
  return FiniteSubset(std::move(out));
}

// ---- scalars, vectors, blocks ---------------------------------------------

inline Json scalar_to_json(const PrimeField&, std::uint32_t v) { return v; }
inline Json scalar_to_json(const RationalField&, const mpq_class& v) { return v.get_str(); }

inline std::uint32_t scalar_from_json(const PrimeField& f, const Json& j) {
  if (!j.is_number_integer()) throw FormatError("F_p scalar must be an integer");
  return f.from_int(j.get<std::int64_t>());
}

inline mpq_class scalar_from_json(const RationalField&, const Json& j) {
  if (j.is_number_integer()) return mpq_class(static_cast<long>(j.get<std::int64_t>()));
  if (!j.is_string()) throw FormatError("rational scalar must be a string \"a/b\" or an integer");
  mpq_class q;
  if (q.set_str(j.get<std::string>(), 10) != 0) throw FormatError("bad rational '" + j.get<std::string>() + "'");
  if (q.get_den() == 0) throw FormatError("rational with zero denominator");
  q.canonicalize();
  return q;
}

template <Field F>
Json vector_to_json(const F& f, const std::vector<typename F::value_type>& v) {
  Json a = Json::array();
  for (const auto& x : v) a.push_back(scalar_to_json(f, x));
  return a;
}

template <Field F>
std::vector<typename F::value_type> vector_from_json(const F& f, std::size_t n, const Json& j) {
  if (!j.is_array() || j.size() != n)
    throw FormatError("shape mismatch: expected a vector of length " + std::to_string(n));
  std::vector<typename F::value_type> out;
  for (const auto& x : j) out.push_back(scalar_from_json(f, x));
  return out;
}

/// A bare scalar when n = 1, otherwise an array of n rows.
template <Field F>
Json block_to_json(const F& f, std::size_t n, const Block<F>& b) {
  if (n == 1) return scalar_to_json(f, b[0]);
  Json rows = Json::array();
  for (std::size_t i = 0; i < n; ++i)
    rows.push_back(vector_to_json(f, std::vector<typename F::value_type>(b.begin() + static_cast<std::ptrdiff_t>(i * n),
                                                                         b.begin() + static_cast<std::ptrdiff_t>((i + 1) * n))));
  return rows;
}

template <Field F>
Block<F> block_from_json(const F& f, std::size_t n, const Json& j) {
  if (n == 1) {
    if (j.is_array()) throw FormatError("shape mismatch: expected a scalar coefficient for n = 1");
    return {scalar_from_json(f, j)};
  }
  if (!j.is_array() || j.size() != n)
    throw FormatError("shape mismatch: expected a " + std::to_string(n) + "x" + std::to_string(n) + " block");
  Block<F> out;
  for (const auto& row : j) {
    auto r = vector_from_json(f, n, row);
    out.insert(out.end(), r.begin(), r.end());
  }
  return out;
}

template <Field F>
Json matrix_to_json(const Matrix<F>& m) {
  Json rows = Json::array();
  for (std::size_t i = 0; i < m.rows(); ++i) {
    Json r = Json::array();
    for (std::size_t j = 0; j < m.cols(); ++j) r.push_back(scalar_to_json(m.field(), m(i, j)));
    rows.push_back(std::move(r));
  }
  return rows;
}

// ---- ring elements ----------------------------------------------------------

template <Field F>
Json terms_to_json(const GroupRingElement<F>& a) {
  Json t = Json::array();
  for (const auto& [g, c] : a.terms()) t.push_back(Json::array({element_to_json(g), block_to_json(a.algebra().field, a.algebra().n, c)}));
  return t;
}

template <Field F>
GroupRingElement<F> terms_from_json(const Algebra<F>& alg, const Json& j) {
  if (!j.is_array()) throw FormatError("terms must be an array of [element, coefficient] pairs");
  std::vector<typename GroupRingElement<F>::Term> terms;
  for (const auto& t : j) {
    if (!t.is_array() || t.size() != 2) throw FormatError("term must be a pair [element, coefficient]");
    terms.emplace_back(element_from_json(t[0], alg.group), block_from_json(alg.field, alg.n, t[1]));
  }
  return GroupRingElement<F>::from_terms(alg, std::move(terms));
}

template <Field F>
Json ring_to_json(const GroupRingElement<F>& a) {
  Json j;
  j["terms"] = terms_to_json(a);
  return j;
}

template <Field F>
GroupRingElement<F> ring_from_json(const Algebra<F>& alg, const Json& j) {
  if (!j.is_object() || !j.contains("terms")) throw FormatError("group ring element needs 'terms'");
  return terms_from_json(alg, j["terms"]);
}

template <Field F>
Json twisted_to_json(const TwistedElement<F>& x) {
  Json j;
  j["regular"] = terms_to_json(x.regular());
  Json s = Json::array();
  for (const auto& [g, b] : x.singular()) s.push_back(Json::array({element_to_json(g), terms_to_json(b)}));
  j["singular"] = std::move(s);
  return j;
}

template <Field F>
TwistedElement<F> twisted_from_json(const Algebra<F>& alg, const Json& j) {
  if (!j.is_object() || !j.contains("regular") || !j.contains("singular"))
    throw FormatError("twisted element needs 'regular' and 'singular'");
  if (!j["singular"].is_array()) throw FormatError("'singular' must be an array of [site, terms] pairs");
  std::vector<typename TwistedElement<F>::Site> sites;
  for (const auto& s : j["singular"]) {
    if (!s.is_array() || s.size() != 2) throw FormatError("singular entry must be a pair [site, terms]");
    sites.emplace_back(element_from_json(s[0], alg.group), terms_from_json(alg, s[1]));
  }
  return TwistedElement<F>(terms_from_json(alg, j["regular"]), std::move(sites));
}

/// Header n is the matrix size; entries have scalar coefficients.
template <Field F>
Json twisted_matrix_to_json(const TwistedMatrix<F>& m) {
  Json rows = Json::array();
  for (std::size_t i = 0; i < m.n(); ++i) {
    Json r = Json::array();
    for (std::size_t j = 0; j < m.n(); ++j) r.push_back(twisted_to_json(m(i, j)));
    rows.push_back(std::move(r));
  }
  Json j;
  j["entries"] = std::move(rows);
  return j;
}

template <Field F>
TwistedMatrix<F> twisted_matrix_from_json(const Algebra<F>& alg, const Json& j) {
  if (!j.is_object() || !j.contains("entries") || !j["entries"].is_array() || j["entries"].size() != alg.n)
    throw FormatError("shape mismatch: twisted matrix needs " + std::to_string(alg.n) + " rows of 'entries'");
  const auto scalar = alg.with_n(1);
  TwistedMatrix<F> m(scalar, alg.n);
  for (std::size_t i = 0; i < alg.n; ++i) {
    const auto& row = j["entries"][i];
    if (!row.is_array() || row.size() != alg.n)
      throw FormatError("shape mismatch: twisted matrix row of wrong length");
    for (std::size_t k = 0; k < alg.n; ++k) m(i, k) = twisted_from_json(scalar, row[k]);
  }
  return m;
}

template <Field F>
Json configuration_to_json(const Configuration<F>& x) {
  const auto& f = x.algebra().field;
  Json j;
  j["base"] = vector_to_json(f, x.base());
  Json d = Json::array();
  for (const auto& [g, v] : x.deviation()) d.push_back(Json::array({element_to_json(g), vector_to_json(f, v)}));
  j["deviation"] = std::move(d);
  return j;
}

template <Field F>
Configuration<F> configuration_from_json(const Algebra<F>& alg, const Json& j) {
  if (!j.is_object() || !j.contains("base") || !j.contains("deviation") || !j["deviation"].is_array())
    throw FormatError("configuration needs 'base' and a 'deviation' array");
  std::vector<typename Configuration<F>::Entry> dev;
  for (const auto& e : j["deviation"]) {
    if (!e.is_array() || e.size() != 2) throw FormatError("deviation entry must be a pair [site, vector]");
    dev.emplace_back(element_from_json(e[0], alg.group), vector_from_json(alg.field, alg.n, e[1]));
  }
  return Configuration<F>(alg, vector_from_json(alg.field, alg.n, j["base"]), std::move(dev));
}

// ---- reports ----------------------------------------------------------------

template <Field F>
Json local_map_to_json(const InducedLocalMap<F>& m) {
  Json j;
  j["domain"] = subset_to_json(m.domain);
  j["codomain"] = subset_to_json(m.codomain);
  j["matrix"] = matrix_to_json(m.matrix);
  return j;
}

inline Json tower_to_json(const KernelTowerReport& r) {
  Json j;
  j["depth"] = r.depth;
  j["window"] = r.window;
  j["max_steps"] = r.max_steps;
  Json levels = Json::array();
  for (const auto& l : r.levels) {
    Json e;
    e["level"] = l.level;
    e["sites"] = l.sites;
    e["dim_kernel"] = l.dim_kernel;
    e["dim_thread"] = l.dim_thread;
    e["stabilized"] = l.stabilized;
    e["stabilized_at"] = l.stabilized_at;
    levels.push_back(std::move(e));
  }
  j["levels"] = std::move(levels);
  j["all_threads_zero"] = r.all_threads_zero();
  return j;
}

template <Field F>
Json inverse_result_to_json(Side side, int max_radius, const std::optional<InverseHit<F>>& hit) {
  Json j;
  j["side"] = to_string(side);
  j["max_radius"] = max_radius;
  j["found"] = hit.has_value();
  if (hit) {
    j["radius"] = hit->radius;
    j["inverse"] = twisted_to_json(hit->inverse.omega());
  }
  return j;
}

inline Json budget_to_json(const VerdictBudget& b) {
  Json j;
  j["max_radius"] = b.max_radius;
  j["depth"] = b.depth;
  j["window"] = b.window;
  return j;
}

template <Field F>
Json verdict_to_json(const InjectivityVerdict<F>& v) {
  Json j;
  j["kind"] = to_string(v.kind);
  j["budget"] = budget_to_json(v.budget);
  if (v.certificate) {
    Json c;
    c["radius"] = v.certificate_radius;
    c["left_inverse"] = twisted_to_json(v.certificate->omega());
    j["certificate"] = std::move(c);
  }
  if (v.witness) {
    Json w;
    w["radius"] = v.witness_radius;
    w["for_constant_part"] = v.witness_for_constant_part;
    w["configuration"] = configuration_to_json(*v.witness);
    j["witness"] = std::move(w);
  }
  if (v.tower) j["tower"] = tower_to_json(*v.tower);
  return j;
}

}  // namespace d1::io
