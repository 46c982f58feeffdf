#pragma once

#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "bmdist/average/recursion.hpp"
#include "bmdist/bounds/factory.hpp"
#include "bmdist/cli/json_io.hpp"
#include "bmdist/cli/run_store.hpp"
#include "bmdist/gauge/chain_audit.hpp"
#include "bmdist/hadamard/hadamard.hpp"
#include "bmdist/numeric/matrix_io.hpp"
#include "bmdist/search/minimax.hpp"

namespace bmdist::cli {

// Process exit codes.
enum Exit : int {
  kOk = 0,
  kUsage = 1,
  kVerification = 2,  // infeasible generator, failed certificate, inconsistent report
  kSingular = 3,
  kSearchFailure = 4,
};

inline constexpr const char* kStoreEnv = "BMDIST_STORE";
inline constexpr const char* kDefaultStore = "bmdist-runs";

namespace detail {

struct Common {
  bool json = false;
  bool no_store = false;
  std::string store;
  unsigned workers = 0;
};

inline void add_common(CLI::App* app, Common& c, bool storing) {
  app->add_flag("--json", c.json, "Emit JSON instead of text");
  app->add_option("--workers", c.workers, "Worker threads (default: $BMDIST_WORKERS or all cores)");
  if (storing) {
    app->add_option("--store", c.store, "Run store directory (default: $BMDIST_STORE or ./bmdist-runs)");
    app->add_flag("--no-store", c.no_store, "Do not write to the run store");
  }
}

inline RunStore store_of(const Common& c) {
  if (!c.store.empty()) return RunStore(c.store);
  if (const char* env = std::getenv(kStoreEnv)) return RunStore(env);
  return RunStore(kDefaultStore);
}

inline std::string fmt6(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.6g", v);
  return buf;
}

inline std::string value_text(const BoundValue& v) {
  if (v.exact && !v.exact->is_rational()) return v.exact->to_string() + " (" + fmt6(v.value) + ")";
  if (v.exact) return v.exact->to_string();
  return format_double(v.value);
}

inline void print_json(std::ostream& out, const io::json& j) { out << j.dump(2) << "\n"; }

// ---- radius ----------------------------------------------------------------

struct RadiusArgs {
  std::string matrix;
  bool exact = false;
  std::optional<double> audit_alpha;
  Common common;
};

inline int cmd_radius(const RadiusArgs& a, std::ostream& out) {
  const Matrix t = read_matrix_file(a.matrix, MatrixReadOptions{a.exact});
  const RadiusResult r = radius(t, a.common.workers);
  std::optional<ChainAudit> audit;
  if (a.audit_alpha) audit = lower_chain_audit(t, *a.audit_alpha, a.common.workers);
  if (a.common.json) {
    io::json j = {{"kind", "radius"},
                  {"schema_version", io::kSchemaVersion},
                  {"n", t.rows()},
                  {"mode", to_string(r.mode)},
                  {"radius", r.value.to_string()},
                  {"value", r.value.to_double()},
                  {"witness", r.witness.pattern()},
                  {"vertex_count", r.vertex_count}};
    if (audit) {
      io::json steps = io::json::array();
      for (const auto& [name, v] : audit->steps) steps.push_back({{"step", name}, {"value", v}});
      j["audit"] = {{"alpha", *a.audit_alpha}, {"passed", true}, {"steps", std::move(steps)}};
    }
    print_json(out, j);
    return kOk;
  }
  out << "radius: " << r.value.to_string() << "\n";
  if (r.mode == Mode::exact) out << "value: " << format_double(r.value.to_double()) << "\n";
  out << "witness: " << r.witness.to_string() << "\n";
  out << "mode: " << to_string(r.mode) << "\n";
  out << "vertices scanned: " << r.vertex_count << "\n";
  if (audit) {
    out << "lower-bound chain (alpha = " << format_double(*a.audit_alpha) << "): passed\n";
    for (const auto& [name, v] : audit->steps) out << "  " << name << " = " << format_double(v) << "\n";
  }
  return kOk;
}

// ---- hadamard --------------------------------------------------------------

struct HadamardArgs {
  std::optional<std::uint64_t> order;
  std::optional<int> sylvester_power;
  std::string out_file;
  Common common;
};

inline int cmd_hadamard(const HadamardArgs& a, std::ostream& out, std::ostream& err) {
  if (a.order.has_value() == a.sylvester_power.has_value()) {
    err << "hadamard: give exactly one of --order or --sylvester\n";
    return kUsage;
  }
  HadamardMatrix h = sylvester(0);
  if (a.sylvester_power) {
    h = sylvester(*a.sylvester_power);
  } else {
    std::optional<OrderRecipe> recipe;
    for (const auto& r : registry_orders(*a.order)) {
      if (r.order == *a.order) recipe = r;
    }
    if (!recipe) {
      err << "hadamard: order " << *a.order << " is not constructible here (orders 2^a * 12^b)\n";
      return kUsage;
    }
    h = recipe->build();
  }
  if (h.order() > kMaxMaterializedOrder) {
    err << "hadamard: order " << h.order() << " exceeds the materialization limit " << kMaxMaterializedOrder << "\n";
    return kUsage;
  }
  const Matrix m = h.to_matrix();
  const bool ok = is_hadamard(m);
  if (!a.out_file.empty()) {
    std::ofstream f(a.out_file);
    if (!f) throw UsageError("cannot write " + a.out_file);
    write_matrix(f, m);
  }
  if (a.common.json) {
    io::json j = {{"kind", "hadamard"},
                  {"schema_version", io::kSchemaVersion},
                  {"order", h.order()},
                  {"recipe", h.recipe()},
                  {"is_hadamard", ok}};
    if (h.order() <= static_cast<std::uint64_t>(kMeasureLimit)) j["radius"] = radius(m, a.common.workers).value.to_string();
    print_json(out, j);
  } else if (a.out_file.empty()) {
    write_matrix(out, m);
  } else {
    out << "wrote " << h.recipe() << " (order " << h.order() << ") to " << a.out_file << "\n";
  }
  return ok ? kOk : kVerification;
}

// ---- bounds ----------------------------------------------------------------

struct BoundsArgs {
  int dim = 0;
  std::string direction = "both";
  std::string method = "all";
  std::string alpha = "auto";
  std::uint64_t terms = 1'000'000;
  Common common;
};

inline int cmd_bounds(const BoundsArgs& a, std::ostream& out, std::ostream& err) {
  if (a.dim < 1) throw UsageError("--dim must be >= 1");
  std::vector<BoundCertificate> certs;
  if (a.direction == "lower" || a.direction == "both") {
    LowerOptions lo;
    lo.workers = a.common.workers;
    lo.product_terms = a.terms;
    if (a.alpha == "exact") {
      lo.source = AlphaSource::exact_enumeration;
    } else if (a.alpha == "product") {
      lo.source = a.dim == 1 ? AlphaSource::exact_enumeration : AlphaSource::product_bound;
    } else {
      lo.source = a.dim <= kDefaultExactAlphaLimit ? AlphaSource::exact_enumeration : AlphaSource::product_bound;
    }
    certs.push_back(proven_lower(a.dim, lo));
  }
  if (a.direction == "upper" || a.direction == "both") {
    if (a.method == "block" || a.method == "all") certs.push_back(block_compose_upper(a.dim, a.common.workers));
    if (a.method == "pad" || a.method == "all") certs.push_back(hadamard_pad_upper(a.dim, a.common.workers));
  }
  bool failed = false;
  io::json docs = io::json::array();
  for (auto& c : certs) {
    failed = verify_certificate(c, a.common.workers) == Verification::failed || failed;
    io::json doc = io::certificate_document(c);
    if (!a.common.no_store) {
      const auto path = store_of(a.common).save("certificate", c.n, 0, doc);
      err << "stored " << path.string() << "\n";
    }
    docs.push_back(std::move(doc));
  }
  if (a.common.json) {
    print_json(out, {{"kind", "bounds"}, {"schema_version", io::kSchemaVersion}, {"certificates", docs}});
  } else {
    for (const auto& c : certs) {
      out << to_string(c.direction) << " " << to_string(c.method) << " n=" << c.n << "\n";
      out << "  construction: " << c.construction_text() << "\n";
      out << "  claimed: " << value_text(c.claimed) << "\n";
      out << "  measured: " << (c.measured ? c.measured->to_string() : std::string("-")) << "\n";
      if (c.method == BoundMethod::block_compose) {
        out << "  theorem (sqrt(2)+1)sqrt(n) = " << fmt6(c.theorem_bound) << ": " << (c.theorem_holds ? "holds" : "VIOLATED")
            << "\n";
      }
      if (c.method == BoundMethod::hadamard_pad) {
        out << "  within sqrt(n)+3: "
            << (c.within_sqrt_n_plus_3 ? (*c.within_sqrt_n_plus_3 ? "yes" : "NO") : "not asserted (gap > 3)") << "\n";
      }
      out << "  status: " << to_string(c.verified) << "\n";
    }
  }
  return failed ? kVerification : kOk;
}

// ---- optimize --------------------------------------------------------------

struct OptimizeArgs {
  SearchConfig config;
  std::optional<int> snap_den;
  std::string templ = "free";
  std::string out_file;
  Common common;
};

inline int cmd_optimize(OptimizeArgs a, std::ostream& out, std::ostream& err) {
  if (a.config.n < 2 || a.config.n > 8) throw UsageError("--dim must be in 2..8");
  if (a.templ != "free" && a.templ != "parametric") throw UsageError("--template must be free or parametric");
  a.config.template_kind = a.templ == "free" ? SearchTemplate::free : SearchTemplate::parametric;
  a.config.snap_denominator_cap = a.snap_den;
  a.config.workers = a.common.workers;
  try {
    a.config.validate();
  } catch (const DomainError& e) {
    throw UsageError(e.what());
  }
  const SearchRun run = local_search(a.config);
  const io::json doc = io::search_document(run);
  if (!a.common.no_store) {
    const auto path = store_of(a.common).save("search", run.config.n, run.config.master_seed, doc);
    err << "stored " << path.string() << "\n";
  }
  if (!a.out_file.empty()) {
    std::ofstream f(a.out_file);
    if (!f) throw UsageError("cannot write " + a.out_file);
    write_matrix(f, run.snapped && run.snapped->radius ? Matrix(run.snapped->matrix) : Matrix(run.best_matrix));
  }
  if (a.common.json) {
    print_json(out, doc);
    return kOk;
  }
  out << "dimension: " << run.config.n << "\n";
  out << "seed: " << run.config.master_seed << "\n";
  out << "starts: " << run.config.starts << " (winner " << run.winning_start << ")\n";
  out << "best radius: " << run.best.value.to_string() << "\n";
  if (run.reference) out << "reference: " << fmt6(*run.reference) << "\n";
  if (run.params) out << "params: x = " << format_double(run.params->first) << ", y = " << format_double(run.params->second) << "\n";
  if (run.improvement_candidate) out << "IMPROVEMENT CANDIDATE: beats the reference by more than 1e-3\n";
  out << "matrix:\n" << matrix_to_string(Matrix(run.best_matrix));
  if (run.snapped) {
    out << "snapped (denominators <= " << *run.config.snap_denominator_cap << "):\n"
        << matrix_to_string(Matrix(run.snapped->matrix));
    out << "snapped radius: " << (run.snapped->radius ? run.snapped->radius->value.to_string() : "singular") << "\n";
  }
  return kOk;
}

// ---- alpha -----------------------------------------------------------------

struct AlphaArgs {
  int dim = 0;
  std::string source = "exact";
  std::uint64_t terms = 1'000'000;
  int base_n = 4;
  bool list = false;
  Common common;
};

inline int cmd_alpha(const AlphaArgs& a, std::ostream& out, std::ostream& err) {
  if (a.dim < 1) throw UsageError("--dim must be >= 1");
  AlphaRecord rec;
  std::optional<CandidateEnumeration> en;
  if (a.source == "exact") {
    if (a.dim == 1) {
      rec = trivial_alpha_record();
    } else {
      if (a.dim > kMaxEnumerationDimension) throw UsageError("exact enumeration supports --dim <= 7");
      en = enumerate_candidates(a.dim, a.common.workers);
      rec = en->record;
    }
  } else if (a.source == "product") {
    if (a.base_n != 4) throw UsageError("the product bound is seeded from rho_4 = sqrt(2); --base-n must be 4");
    rec = product_bound(a.base_n, std::sqrt(2.0), a.terms).record;
  } else {
    throw UsageError("--source must be exact or product");
  }
  const io::json doc =
      io::alpha_document(rec, en ? &en->candidates : nullptr, en ? std::optional(en->families_visited) : std::nullopt);
  if (!a.common.no_store) {
    const auto path = store_of(a.common).save("alpha", rec.n, 0, doc);
    err << "stored " << path.string() << "\n";
  }
  if (a.common.json) {
    print_json(out, doc);
    return kOk;
  }
  out << "provenance: " << to_string(rec.provenance) << "\n";
  if (rec.rho_squared) out << "rho^2: " << to_string(*rec.rho_squared) << "\n";
  out << "rho: " << format_double(rec.rho) << "\n";
  out << "alpha: " << format_double(rec.alpha) << "\n";
  if (rec.witness) {
    out << "witness:";
    for (const auto& x : rec.witness->direction) out << " " << to_string(x);
    out << "\n";
  }
  if (en) {
    out << "vertex orbits: " << en->candidates.size() << " (families visited " << en->families_visited << ")\n";
    if (a.list) {
      for (const auto& c : en->candidates) {
        out << " ";
        for (const auto& x : c.direction) out << " " << to_string(x);
        out << "   ||x||^2 = " << to_string(c.ratio_squared) << "\n";
      }
    }
  }
  return kOk;
}

// ---- report ----------------------------------------------------------------

struct ReportArgs {
  std::string dims = "1..8";
  std::string format = "markdown";
  int exact_limit = kDefaultExactAlphaLimit;
  bool use_store = true;
  Common common;
};

inline std::pair<int, int> parse_range(const std::string& s) {
  const auto dots = s.find("..");
  try {
    if (dots == std::string::npos) {
      const int v = std::stoi(s);
      return {v, v};
    }
    return {std::stoi(s.substr(0, dots)), std::stoi(s.substr(dots + 2))};
  } catch (const std::logic_error&) {
    throw UsageError("--dims expects A..B");
  }
}

inline int cmd_report(const ReportArgs& a, std::ostream& out) {
  const auto [from, to] = parse_range(a.dims);
  if (from < 1 || from > to) throw UsageError("--dims needs 1 <= A <= B");
  if (a.format != "markdown" && a.format != "csv") throw UsageError("--format must be markdown or csv");
  SummaryOptions opts;
  opts.exact_limit = a.exact_limit;
  opts.workers = a.common.workers;
  if (!a.common.no_store) opts.stored_runs = store_of(a.common).best_search_radii();
  const auto rows = summary_table(from, to, opts);
  bool consistent = true;
  for (const auto& r : rows) consistent = consistent && r.consistent;

  auto conj_lower = [](int n) { return std::sqrt(n / 2.0); };
  auto conj_upper = [](int n) { return std::sqrt(static_cast<double>(n)) + 3.0; };
  const SummaryRow* row7 = nullptr;
  const SummaryRow* row8 = nullptr;
  for (const auto& r : rows) {
    if (r.n == 7) row7 = &r;
    if (r.n == 8) row8 = &r;
  }
  const bool dip = row7 && row8 && row7->best && row8->best && row8->best->value.value < row7->best->value.value;

  if (a.common.json) {
    io::json list = io::json::array();
    for (const auto& r : rows) {
      list.push_back({{"n", r.n},
                      {"lower", {{"claimed", r.lower.claimed.to_string()},
                                 {"value", r.lower.claimed.value},
                                 {"source", r.lower.construction_text()}}},
                      {"best_known", r.best ? io::json{{"value", r.best->value.value},
                                                       {"exact", r.best->value.exact ? io::json(r.best->value.exact->to_string())
                                                                                     : io::json(nullptr)},
                                                       {"source", r.best->source}}
                                            : io::json(nullptr)},
                      {"upper", {{"claimed", r.upper.claimed.to_string()},
                                 {"value", r.upper.claimed.value},
                                 {"method", to_string(r.upper.method)},
                                 {"construction", r.upper.construction_text()}}},
                      {"conjectured_lower", conj_lower(r.n)},
                      {"conjectured_upper", conj_upper(r.n)},
                      {"consistent", r.consistent}});
    }
    print_json(out, {{"kind", "report"}, {"schema_version", io::kSchemaVersion}, {"rows", list}, {"consistent", consistent}});
    return consistent ? kOk : kVerification;
  }

  const bool md = a.format == "markdown";
  const std::string sep = md ? " | " : ",";
  const std::vector<std::string> head = {"n", "proven lower", "best known", "best-known source", "constructive upper",
                                         "upper construction", "conj. lower sqrt(n/2) [conjectural]",
                                         "conj. upper sqrt(n)+3 [conjectural]", "consistent"};
  auto line = [&](const std::vector<std::string>& cells) {
    std::string s = md ? "| " : "";
    for (std::size_t i = 0; i < cells.size(); ++i) {
      if (i) s += sep;
      std::string c = cells[i];
      if (!md && c.find(',') != std::string::npos) c = "\"" + c + "\"";
      s += c;
    }
    out << s << (md ? " |" : "") << "\n";
  };
  line(head);
  if (md) line(std::vector<std::string>(head.size(), "---"));
  for (const auto& r : rows) {
    std::string best = r.best ? fmt6(r.best->value.value) : "-";
    if (dip && r.n == 8) best += md ? " [a]" : " (a)";
    line({std::to_string(r.n), fmt6(r.lower.claimed.value), best, r.best ? r.best->source : "-",
          fmt6(r.upper.claimed.value), r.upper.construction_text(), fmt6(conj_lower(r.n)), fmt6(conj_upper(r.n)),
          r.consistent ? "yes" : "NO"});
  }
  if (dip) {
    out << (md ? "\n[a] " : "# (a) ") << "best known at n=8 (" << fmt6(row8->best->value.value)
        << ") is smaller than at n=7 (" << fmt6(row7->best->value.value) << ")\n";
  }
  if (!consistent) out << (md ? "\n" : "# ") << "lower <= best known <= upper fails in at least one row\n";
  return consistent ? kOk : kVerification;
}

}  // namespace detail

// Entry point shared by the executable and the tests. `args` excludes the
// program name.
inline int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Bounds on the Banach-Mazur distance between the cube and the crosspolytope", "bmdist"};
  app.require_subcommand(1);

  detail::RadiusArgs ra;
  auto* radius_cmd = app.add_subcommand("radius", "Radius of a generator matrix");
  radius_cmd->add_option("--matrix", ra.matrix, "Matrix file")->required();
  radius_cmd->add_flag("--exact", ra.exact, "Load decimal entries as exact rationals");
  radius_cmd->add_option("--audit", ra.audit_alpha, "Also run the lower-bound chain audit with this alpha");
  detail::add_common(radius_cmd, ra.common, false);

  detail::HadamardArgs ha;
  auto* had_cmd = app.add_subcommand("hadamard", "Write a Hadamard matrix in matrix text format");
  had_cmd->add_option("--order", ha.order, "Order 2^a * 12^b");
  had_cmd->add_option("--sylvester", ha.sylvester_power, "Sylvester power k (order 2^k)");
  had_cmd->add_option("--out", ha.out_file, "Output file (default: stdout)");
  detail::add_common(had_cmd, ha.common, false);

  detail::BoundsArgs ba;
  auto* bounds_cmd = app.add_subcommand("bounds", "Build and verify bound certificates");
  bounds_cmd->add_option("--dim", ba.dim, "Dimension")->required();
  bounds_cmd->add_option("--direction", ba.direction)->check(CLI::IsMember({"upper", "lower", "both"}));
  bounds_cmd->add_option("--method", ba.method, "Upper-bound construction")->check(CLI::IsMember({"block", "pad", "all"}));
  bounds_cmd->add_option("--alpha", ba.alpha, "Lower-bound source")->check(CLI::IsMember({"auto", "exact", "product"}));
  bounds_cmd->add_option("--terms", ba.terms, "Product-bound terms");
  detail::add_common(bounds_cmd, ba.common, true);

  detail::OptimizeArgs oa;
  auto* opt_cmd = app.add_subcommand("optimize", "Multi-start search for small-radius generators");
  opt_cmd->add_option("--dim", oa.config.n, "Dimension (2..8)")->required();
  opt_cmd->add_option("--starts", oa.config.starts, "Number of starts");
  opt_cmd->add_option("--seed", oa.config.master_seed, "Master seed");
  opt_cmd->add_option("--max-iters", oa.config.max_iters, "Iterations per start");
  opt_cmd->add_option("--step", oa.config.initial_step, "Initial pattern step");
  opt_cmd->add_option("--decay", oa.config.decay, "Step decay factor");
  opt_cmd->add_option("--snap-den", oa.snap_den, "Snap the result to rationals with this denominator cap");
  opt_cmd->add_option("--template", oa.templ, "free or parametric (n = 6 pattern)");
  opt_cmd->add_option("--out", oa.out_file, "Write the best (snapped, when nonsingular) matrix here");
  detail::add_common(opt_cmd, oa.common, true);

  detail::AlphaArgs aa;
  auto* alpha_cmd = app.add_subcommand("alpha", "Average-problem constant rho_n");
  alpha_cmd->add_option("--dim", aa.dim, "Dimension")->required();
  alpha_cmd->add_option("--source", aa.source, "exact or product");
  alpha_cmd->add_option("--terms", aa.terms, "Product-bound terms");
  alpha_cmd->add_option("--base-n", aa.base_n, "Product-bound base dimension");
  alpha_cmd->add_flag("--candidates", aa.list, "List every vertex orbit");
  detail::add_common(alpha_cmd, aa.common, true);

  detail::ReportArgs rpa;
  auto* report_cmd = app.add_subcommand("report", "Per-dimension table of bounds");
  report_cmd->add_option("--dims", rpa.dims, "Range A..B");
  report_cmd->add_option("--format", rpa.format, "markdown or csv");
  report_cmd->add_option("--exact-limit", rpa.exact_limit, "Largest n for exact rho_n");
  detail::add_common(report_cmd, rpa.common, true);

  try {
    std::vector<std::string> reversed(args.rbegin(), args.rend());
    app.parse(reversed);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kOk : kUsage;
  }

  try {
    if (*radius_cmd) return detail::cmd_radius(ra, out);
    if (*had_cmd) return detail::cmd_hadamard(ha, out, err);
    if (*bounds_cmd) return detail::cmd_bounds(ba, out, err);
    if (*opt_cmd) return detail::cmd_optimize(oa, out, err);
    if (*alpha_cmd) return detail::cmd_alpha(aa, out, err);
    if (*report_cmd) return detail::cmd_report(rpa, out);
  } catch (const InfeasibleGeneratorError& e) {
    err << "error: " << e.what() << "\n";
    return kVerification;
  } catch (const AuditFailure& e) {
    err << "error: " << e.what() << "\n";
    return kVerification;
  } catch (const SingularMatrixError& e) {
    err << "error: " << e.what() << "\n";
    return kSingular;
  } catch (const SearchFailure& e) {
    err << "error: " << e.what() << "\n";
    return kSearchFailure;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return kUsage;
  }
  return kUsage;
}

}  // namespace bmdist::cli
