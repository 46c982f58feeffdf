#pragma once

#include <chrono>
#include <cstdio>
#include <ctime>
#include <optional>
#include <string>

#include <json.hpp>

#include "bmdist/average/candidates.hpp"
#include "bmdist/bounds/certificate.hpp"
#include "bmdist/bounds/factory.hpp"
#include "bmdist/search/minimax.hpp"

namespace bmdist::io {

using json = nlohmann::json;

inline constexpr int kSchemaVersion = 1;

// The only non-deterministic key in any document.
inline constexpr const char* kTimestampKey = "timestamp";

inline std::string utc_now_iso() {
  const auto now = std::chrono::system_clock::now();
  const auto us = std::chrono::duration_cast<std::chrono::microseconds>(now.time_since_epoch()).count();
  const std::time_t secs = static_cast<std::time_t>(us / 1000000);
  std::tm tm{};
  gmtime_r(&secs, &tm);
  char buf[96];
  std::snprintf(buf, sizeof buf, "%04d-%02d-%02dT%02d:%02d:%02d.%06lldZ", tm.tm_year + 1900, tm.tm_mon + 1, tm.tm_mday,
                tm.tm_hour, tm.tm_min, tm.tm_sec, static_cast<long long>(us % 1000000));
  return buf;
}

inline json timestamp(std::optional<double> wall_seconds = std::nullopt) {
  json t = {{"created", utc_now_iso()}};
  if (wall_seconds) t["wall_seconds"] = *wall_seconds;
  return t;
}

// Removes every "timestamp" member, recursively.
inline json strip_timestamps(json j) {
  if (j.is_object()) {
    j.erase(kTimestampKey);
    for (auto& [k, v] : j.items()) v = strip_timestamps(v);
  } else if (j.is_array()) {
    for (auto& v : j) v = strip_timestamps(v);
  }
  return j;
}

// ---- scalars and matrices -------------------------------------------------

inline std::string scalar_string(const Scalar& s) { return s.to_string(); }

inline Scalar parse_scalar(const std::string& text, Mode mode) {
  if (mode == Mode::exact) return Scalar(parse_rational(text));
  try {
    std::size_t used = 0;
    const double v = std::stod(text, &used);
    if (used != text.size()) throw ParseError("trailing characters in '" + text + "'");
    return Scalar(v);
  } catch (const std::logic_error&) {
    throw ParseError("bad float '" + text + "'");
  }
}

inline json to_json(const Matrix& m) {
  json rows = json::array();
  for (std::size_t i = 0; i < m.rows(); ++i) {
    json row = json::array();
    for (std::size_t j = 0; j < m.cols(); ++j) row.push_back(scalar_string(m.at(i, j)));
    rows.push_back(std::move(row));
  }
  return {{"n", m.rows()}, {"mode", to_string(m.mode())}, {"entries", std::move(rows)}};
}

inline Matrix matrix_from_json(const json& j) {
  const std::string mode_name = j.at("mode").get<std::string>();
  if (mode_name != "exact" && mode_name != "float") throw ParseError("unknown matrix mode '" + mode_name + "'");
  const Mode mode = mode_name == "exact" ? Mode::exact : Mode::floating;
  const auto n = j.at("n").get<std::size_t>();
  const json& rows = j.at("entries");
  if (rows.size() != n) throw ParseError("matrix row count mismatch");
  std::vector<Scalar> entries;
  for (const auto& row : rows) {
    if (row.size() != n) throw ParseError("matrix column count mismatch");
    for (const auto& e : row) entries.push_back(parse_scalar(e.get<std::string>(), mode));
  }
  return Matrix::from_scalars(n, n, entries);
}

inline json rational_vector(const std::vector<Rational>& v) {
  json a = json::array();
  for (const auto& x : v) a.push_back(to_string(x));
  return a;
}

inline std::vector<Rational> rational_vector_from_json(const json& j) {
  std::vector<Rational> v;
  for (const auto& x : j) v.push_back(parse_rational(x.get<std::string>()));
  return v;
}

// ---- alpha records --------------------------------------------------------

inline json to_json(const VertexCandidate& c) {
  json family = json::array();
  for (const auto& v : c.orth_family) family.push_back(v.pattern());
  return {{"direction", rational_vector(c.direction)},
          {"ratio_squared", to_string(c.ratio_squared)},
          {"orth_rank", c.orth_rank},
          {"orth_family", std::move(family)}};
}

inline VertexCandidate candidate_from_json(const json& j) {
  VertexCandidate c;
  c.direction = rational_vector_from_json(j.at("direction"));
  c.ratio_squared = parse_rational(j.at("ratio_squared").get<std::string>());
  c.orth_rank = j.at("orth_rank").get<std::size_t>();
  for (const auto& p : j.at("orth_family")) {
    const auto s = p.get<std::string>();
    std::vector<int> coords;
    for (char ch : s) coords.push_back(ch == '-' ? -1 : 1);
    c.orth_family.push_back(SignVector::from_coords(coords));
  }
  return c;
}

inline AlphaProvenance provenance_from_string(const std::string& s) {
  for (auto p : {AlphaProvenance::enumerated, AlphaProvenance::family_lower_bound, AlphaProvenance::product_upper_bound,
                 AlphaProvenance::trivial}) {
    if (s == to_string(p)) return p;
  }
  throw ParseError("unknown alpha provenance '" + s + "'");
}

inline json to_json(const AlphaRecord& r) {
  json j = {{"n", r.n},
            {"rho_squared", r.rho_squared ? json(to_string(*r.rho_squared)) : json(nullptr)},
            {"rho", r.rho},
            {"alpha", r.alpha},
            {"provenance", to_string(r.provenance)},
            {"witness", r.witness ? to_json(*r.witness) : json(nullptr)}};
  if (r.provenance == AlphaProvenance::product_upper_bound) {
    j["base_n"] = r.base_n;
    j["base_rho"] = r.base_rho;
    j["terms"] = r.terms;
  }
  return j;
}

inline AlphaRecord alpha_from_json(const json& j) {
  AlphaRecord r;
  r.n = j.at("n").get<int>();
  if (!j.at("rho_squared").is_null()) r.rho_squared = parse_rational(j.at("rho_squared").get<std::string>());
  r.rho = j.at("rho").get<double>();
  r.alpha = j.at("alpha").get<double>();
  r.provenance = provenance_from_string(j.at("provenance").get<std::string>());
  if (!j.at("witness").is_null()) r.witness = candidate_from_json(j.at("witness"));
  if (r.provenance == AlphaProvenance::product_upper_bound) {
    r.base_n = j.at("base_n").get<int>();
    r.base_rho = j.at("base_rho").get<double>();
    r.terms = j.at("terms").get<std::uint64_t>();
  }
  return r;
}

inline json alpha_document(const AlphaRecord& r, const std::vector<VertexCandidate>* candidates = nullptr,
                           std::optional<std::uint64_t> families = std::nullopt) {
  json j = to_json(r);
  j["kind"] = "alpha-record";
  j["schema_version"] = kSchemaVersion;
  if (candidates) {
    json list = json::array();
    for (const auto& c : *candidates) list.push_back(to_json(c));
    j["candidates"] = std::move(list);
  }
  if (families) j["families_visited"] = *families;
  j[kTimestampKey] = timestamp();
  return j;
}

// ---- certificates ---------------------------------------------------------

inline json to_json(const ConstructionBlock& b) {
  return {{"kind", b.kind == ConstructionBlock::Kind::identity ? "identity" : "hadamard"},
          {"order", b.order},
          {"describe", b.describe()}};
}

inline ConstructionBlock block_from_json(const json& j) {
  const auto kind = j.at("kind").get<std::string>();
  const auto order = j.at("order").get<std::uint64_t>();
  if (kind == "identity") return ConstructionBlock::identity(order);
  if (kind != "hadamard") throw ParseError("unknown block kind '" + kind + "'");
  for (const auto& r : registry_orders(order)) {
    if (r.order == order) return ConstructionBlock::hadamard(r);
  }
  throw ParseError("no registry recipe for Hadamard order " + std::to_string(order));
}

inline BoundMethod method_from_string(const std::string& s) {
  for (auto m : {BoundMethod::block_compose, BoundMethod::hadamard_pad, BoundMethod::alpha_lower,
                 BoundMethod::direct_matrix}) {
    if (s == to_string(m)) return m;
  }
  throw ParseError("unknown bound method '" + s + "'");
}

inline Verification verification_from_string(const std::string& s) {
  for (auto v : {Verification::verified, Verification::unverified, Verification::failed}) {
    if (s == to_string(v)) return v;
  }
  throw ParseError("unknown verification status '" + s + "'");
}

inline json to_json(const BoundCertificate& c) {
  json blocks = json::array();
  for (const auto& b : c.blocks) blocks.push_back(to_json(b));
  json j = {{"n", c.n},
            {"direction", to_string(c.direction)},
            {"claimed", c.claimed.to_string()},
            {"claimed_value", c.claimed.value},
            {"method", to_string(c.method)},
            {"construction", c.construction_text()},
            {"blocks", std::move(blocks)},
            {"measured", c.measured ? json(scalar_string(*c.measured)) : json(nullptr)},
            {"measured_mode", c.measured ? json(to_string(c.measured->mode())) : json(nullptr)},
            {"verified", to_string(c.verified)}};
  if (c.method == BoundMethod::block_compose) {
    j["theorem"] = {{"bound", c.theorem_bound}, {"holds", c.theorem_holds}};
  }
  if (c.method == BoundMethod::hadamard_pad) {
    j["within_sqrt_n_plus_3"] = c.within_sqrt_n_plus_3 ? json(*c.within_sqrt_n_plus_3) : json(nullptr);
  }
  if (c.alpha) j["alpha"] = to_json(*c.alpha);
  if (c.method == BoundMethod::direct_matrix) {
    j["matrix_name"] = c.matrix_name;
    j["matrix"] = c.matrix ? to_json(*c.matrix) : json(nullptr);
  }
  return j;
}

inline BoundValue bound_value_from_json(const std::string& claimed, double value) {
  if (claimed.find_first_of("eE") == std::string::npos) {
    try {
      Surd s = Surd::parse(claimed);
      return BoundValue::of(s);
    } catch (const Error&) {
    }
  }
  return BoundValue::approximate(value);
}

inline BoundCertificate certificate_from_json(const json& j) {
  BoundCertificate c;
  c.n = j.at("n").get<int>();
  const auto dir = j.at("direction").get<std::string>();
  if (dir != "upper" && dir != "lower") throw ParseError("unknown direction '" + dir + "'");
  c.direction = dir == "upper" ? Direction::upper : Direction::lower;
  c.method = method_from_string(j.at("method").get<std::string>());
  const double value = j.at("claimed_value").get<double>();
  const auto claimed = j.at("claimed").get<std::string>();
  // Product-bound and float-matrix claims are decimal approximations.
  const bool approximate = (c.method == BoundMethod::alpha_lower && j.at("alpha").at("rho_squared").is_null()) ||
                           (c.method == BoundMethod::direct_matrix && j.at("matrix").at("mode") == "float");
  c.claimed = approximate ? BoundValue::approximate(value) : bound_value_from_json(claimed, value);
  for (const auto& b : j.at("blocks")) c.blocks.push_back(block_from_json(b));
  if (j.contains("alpha")) c.alpha = alpha_from_json(j.at("alpha"));
  if (c.method == BoundMethod::direct_matrix) {
    c.matrix_name = j.at("matrix_name").get<std::string>();
    if (!j.at("matrix").is_null()) c.matrix = matrix_from_json(j.at("matrix"));
  }
  if (!j.at("measured").is_null()) {
    const Mode mode = j.at("measured_mode") == "exact" ? Mode::exact : Mode::floating;
    c.measured = parse_scalar(j.at("measured").get<std::string>(), mode);
  }
  c.verified = verification_from_string(j.at("verified").get<std::string>());
  if (j.contains("theorem")) {
    c.theorem_bound = j.at("theorem").at("bound").get<double>();
    c.theorem_holds = j.at("theorem").at("holds").get<bool>();
  }
  if (j.contains("within_sqrt_n_plus_3") && !j.at("within_sqrt_n_plus_3").is_null()) {
    c.within_sqrt_n_plus_3 = j.at("within_sqrt_n_plus_3").get<bool>();
  }
  return c;
}

inline json certificate_document(const BoundCertificate& c) {
  json j = to_json(c);
  j["kind"] = "certificate";
  j["schema_version"] = kSchemaVersion;
  j[kTimestampKey] = timestamp();
  return j;
}

// ---- search runs ----------------------------------------------------------

inline json to_json(const SearchConfig& c) {
  return {{"n", c.n},
          {"starts", c.starts},
          {"max_iters", c.max_iters},
          {"master_seed", c.master_seed},
          {"initial_step", c.initial_step},
          {"decay", c.decay},
          {"snap_denominator_cap", c.snap_denominator_cap ? json(*c.snap_denominator_cap) : json(nullptr)},
          {"template", to_string(c.template_kind)}};
}

inline SearchConfig config_from_json(const json& j) {
  SearchConfig c;
  c.n = j.at("n").get<int>();
  c.starts = j.at("starts").get<int>();
  c.max_iters = j.at("max_iters").get<int>();
  c.master_seed = j.at("master_seed").get<std::uint64_t>();
  c.initial_step = j.at("initial_step").get<double>();
  c.decay = j.at("decay").get<double>();
  if (!j.at("snap_denominator_cap").is_null()) c.snap_denominator_cap = j.at("snap_denominator_cap").get<int>();
  const auto t = j.at("template").get<std::string>();
  if (t != "free" && t != "parametric") throw ParseError("unknown search template '" + t + "'");
  c.template_kind = t == "free" ? SearchTemplate::free : SearchTemplate::parametric;
  return c;
}

inline json search_document(const SearchRun& r) {
  json per_start = json::array();
  for (const auto& v : r.per_start) per_start.push_back(v ? json(*v) : json(nullptr));
  json trace = json::array();
  for (const auto& p : r.trace) trace.push_back({p.iteration, p.value});
  json j = {{"kind", "search-run"},
            {"schema_version", kSchemaVersion},
            {"n", r.config.n},
            {"seed", r.config.master_seed},
            {"config", to_json(r.config)},
            {"best_matrix", to_json(Matrix(r.best_matrix))},
            {"best_radius", scalar_string(r.best.value)},
            {"best_radius_value", r.best.value.to_double()},
            {"witness", r.best.witness.pattern()},
            {"per_start", std::move(per_start)},
            {"winning_start", r.winning_start},
            {"trace", std::move(trace)},
            {"reference", r.reference ? json(*r.reference) : json(nullptr)},
            {"improvement_candidate", r.improvement_candidate}};
  j["params"] = r.params ? json{{"x", r.params->first}, {"y", r.params->second}} : json(nullptr);
  if (r.snapped) {
    j["snapped"] = {{"matrix", to_json(Matrix(r.snapped->matrix))},
                    {"radius", r.snapped->radius ? json(scalar_string(r.snapped->radius->value)) : json(nullptr)},
                    {"singular", !r.snapped->radius.has_value()}};
  } else {
    j["snapped"] = nullptr;
  }
  j[kTimestampKey] = timestamp(r.wall_seconds);
  return j;
}

}  // namespace bmdist::io
