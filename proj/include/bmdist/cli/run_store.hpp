#pragma once

#include <algorithm>
#include <cerrno>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "bmdist/cli/json_io.hpp"

namespace bmdist {

// A directory of immutable JSON documents named
// {kind}-{n}-{timestamp}-{seed}.json. Documents are revalidated on load.
class RunStore {
 public:
  static constexpr int kRevalidateLimit = 16;

  struct Entry {
    std::filesystem::path path;
    io::json doc;
    bool valid = false;
    std::string problem;  // why validation failed
  };

  explicit RunStore(std::filesystem::path root) : root_(std::move(root)) {}

  const std::filesystem::path& root() const { return root_; }

  // Writes a new file; never overwrites an existing one.
  std::filesystem::path save(const std::string& kind, int n, std::uint64_t seed, const io::json& doc) const {
    std::filesystem::create_directories(root_);
    const std::string text = doc.dump(2) + "\n";
    for (int attempt = 0; attempt < 1000; ++attempt) {
      std::string stamp = file_stamp();
      if (attempt > 0) stamp += "-" + std::to_string(attempt);
      const auto path = root_ / (kind + "-" + std::to_string(n) + "-" + stamp + "-" + std::to_string(seed) + ".json");
      std::FILE* f = std::fopen(path.c_str(), "wx");
      if (!f) {
        if (errno == EEXIST) continue;
        throw Error("cannot create " + path.string());
      }
      const bool ok = std::fwrite(text.data(), 1, text.size(), f) == text.size();
      if (std::fclose(f) != 0 || !ok) throw Error("failed writing " + path.string());
      return path;
    }
    throw Error("could not find a free file name in " + root_.string());
  }

  // Every *.json document in name order, each revalidated.
  std::vector<Entry> load_all() const {
    std::vector<Entry> out;
    if (!std::filesystem::is_directory(root_)) return out;
    std::vector<std::filesystem::path> paths;
    for (const auto& e : std::filesystem::directory_iterator(root_)) {
      if (e.is_regular_file() && e.path().extension() == ".json") paths.push_back(e.path());
    }
    std::sort(paths.begin(), paths.end());
    for (const auto& p : paths) out.push_back(load(p));
    return out;
  }

  static Entry load(const std::filesystem::path& p) {
    Entry e;
    e.path = p;
    try {
      std::ifstream in(p);
      e.doc = io::json::parse(in);
      e.problem = revalidate(e.doc);
      e.valid = e.problem.empty();
    } catch (const std::exception& ex) {
      e.problem = ex.what();
    }
    return e;
  }

  // Smallest validated radius per dimension over stored search runs,
  // including exact radii of snapped matrices.
  std::map<int, double> best_search_radii() const {
    std::map<int, double> best;
    for (const auto& e : load_all()) {
      if (!e.valid || e.doc.value("kind", "") != "search-run") continue;
      const int n = e.doc.at("n").get<int>();
      auto offer = [&](double v) {
        auto it = best.find(n);
        if (it == best.end() || v < it->second) best[n] = v;
      };
      offer(e.doc.at("best_radius_value").get<double>());
      const auto& snap = e.doc.at("snapped");
      if (!snap.is_null() && !snap.at("radius").is_null()) {
        offer(to_double(parse_rational(snap.at("radius").get<std::string>())));
      }
    }
    return best;
  }

  // Empty string when the document checks out.
  static std::string revalidate(const io::json& doc) {
    const std::string kind = doc.at("kind").get<std::string>();
    if (kind == "search-run") return revalidate_search(doc);
    if (kind == "certificate") return revalidate_certificate(doc);
    if (kind == "alpha-record") return revalidate_alpha(doc);
    return "unknown document kind '" + kind + "'";
  }

 private:
  static std::string file_stamp() {
    std::string s = io::utc_now_iso();  // 2026-01-02T03:04:05.123456Z
    std::string out;
    for (char c : s) {
      if (c != '-' && c != ':' && c != '.') out += c;
    }
    return out;
  }

  static std::string revalidate_search(const io::json& doc) {
    const Matrix m = io::matrix_from_json(doc.at("best_matrix"));
    if (static_cast<int>(m.rows()) > kRevalidateLimit) return {};
    const double stored = doc.at("best_radius_value").get<double>();
    const double again = radius(m, 1).value.to_double();
    if (std::fabs(again - stored) > 1e-12 * std::max(1.0, stored)) return "stored radius does not match the matrix";
    const auto& snap = doc.at("snapped");
    if (!snap.is_null() && !snap.at("radius").is_null()) {
      const Matrix s = io::matrix_from_json(snap.at("matrix"));
      if (radius(s, 1).value.to_string() != snap.at("radius").get<std::string>()) {
        return "stored snapped radius does not match the snapped matrix";
      }
    }
    return {};
  }

  static std::string revalidate_certificate(const io::json& doc) {
    BoundCertificate c = io::certificate_from_json(doc);
    const std::string claimed = doc.at("claimed").get<std::string>();
    if (c.n > kRevalidateLimit && c.method == BoundMethod::direct_matrix) return {};
    const auto stored_measured = c.measured;
    if (verify_certificate(c, 1) == Verification::failed) return "certificate fails verification";
    if (c.claimed.to_string() != claimed && c.claimed.exact) return "claimed value does not round-trip";
    if (stored_measured && c.measured && !(*stored_measured == *c.measured)) return "measured value does not match";
    return {};
  }

  static std::string revalidate_alpha(const io::json& doc) {
    const AlphaRecord r = io::alpha_from_json(doc);
    switch (r.provenance) {
      case AlphaProvenance::product_upper_bound: {
        auto pb = product_bound(r.base_n, r.base_rho, r.terms);
        return pb.certified == r.rho ? "" : "product bound does not recompute";
      }
      case AlphaProvenance::trivial:
        return r.rho_squared && *r.rho_squared == 1 ? "" : "trivial record must have rho^2 = 1";
      default: {
        if (!r.rho_squared) return "exact record without rho^2";
        if (!r.witness) return "exact record without witness";
        const auto& w = r.witness->direction;
        if (big_f(w) != 1) return "witness is not on F_n = 1";
        if (squared_norm(w) != *r.rho_squared) return "witness norm does not match rho^2";
        if (orth_sign_rank(w).rank + 1 < w.size()) return "witness fails the rank criterion";
        return {};
      }
    }
  }

  std::filesystem::path root_;
};

}  // namespace bmdist
