#include "treepoly/experiments.hpp"

#include <algorithm>
#include <chrono>
#include <fstream>
#include <functional>
#include <map>
#include <optional>
#include <stdexcept>

#include <json.hpp>

#include "treepoly/config.hpp"
#include "treepoly/density.hpp"
#include "treepoly/geometry.hpp"
#include "treepoly/models.hpp"
#include "treepoly/shape.hpp"

namespace treepoly {

namespace {

std::string point_string(const RationalVector& p) {
  std::string out = "(";
  for (std::size_t i = 0; i < p.size(); ++i) {
    if (i) out += ", ";
    out += to_string(p[i]);
  }
  return out + ")";
}

// Collects sub-assertions; a claim fails as soon as one of them is false
// but keeps going so every failure is reported.
class Claim {
 public:
  explicit Claim(std::string id) { report_.claim = std::move(id); }

  void check(bool ok, const std::string& what) {
    if (!ok) {
      report_.status = ClaimStatus::Fail;
      report_.detail.push_back(what);
    }
  }
  void witness(std::string label, std::string value) { report_.witnesses.emplace_back(std::move(label), std::move(value)); }

  VerificationReport run(const std::function<void(Claim&)>& body) {
    const auto start = std::chrono::steady_clock::now();
    try {
      body(*this);
    } catch (const ResourceLimitError& e) {
      report_.status = ClaimStatus::Skipped;
      report_.detail.push_back(std::string("skipped: ") + e.what());
    } catch (const std::exception& e) {
      report_.status = ClaimStatus::Fail;
      report_.detail.push_back(std::string("error: ") + e.what());
    }
    report_.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    return std::move(report_);
  }

 private:
  VerificationReport report_;
};

// Number of Bal_4 restrictions of the complete tree with 2^k leaves:
// both halves contribute on their own, plus a cherry from each side.
BigInt bal4_count_complete(int k) {
  BigInt count = 1;  // the complete tree on four leaves is Bal_4
  for (int j = 3; j <= k; ++j) {
    const BigInt c = binomial(std::int64_t{1} << (j - 1), 2);
    count = 2 * count + c * c;
  }
  return count;
}

bool is_power_of_two(int m) { return m > 0 && (m & (m - 1)) == 0; }

int log2_exact(int m) {
  int k = 0;
  while ((1 << k) < m) ++k;
  return k;
}

const TreeShape& shape5(std::size_t i) { return (*enumerate_shapes(5))[i]; }

}  // namespace

std::string status_name(ClaimStatus status) {
  switch (status) {
    case ClaimStatus::Pass:
      return "pass";
    case ClaimStatus::Fail:
      return "fail";
    case ClaimStatus::Skipped:
      return "skipped";
  }
  return "fail";
}

std::string report_to_json_line(const VerificationReport& report, bool include_timing) {
  nlohmann::ordered_json j;
  j["claim"] = report.claim;
  j["status"] = status_name(report.status);
  auto& w = j["witnesses"] = nlohmann::ordered_json::array();
  for (const auto& [label, value] : report.witnesses) w.push_back({label, value});
  j["detail"] = report.detail;
  if (include_timing) j["seconds"] = report.seconds;
  return j.dump();
}

VerificationReport verify_ex4(int m_max) {
  if (m_max < 5) throw DomainError("verify_ex4 needs m_max >= 5");
  return Claim("ex4-segment").run([&](Claim& c) {
    const ShapeDistribution inf_point = beta_distribution(4, BetaParam::infinity());
    c.check(inf_point.probs() == RationalVector{Rational(4, 7), Rational(3, 7)}, "beta=inf point is (4/7, 3/7)");
    const Rational floor_value(3, 7);
    std::optional<Rational> previous;
    for (int m = 5; m <= m_max; ++m) {
      const std::string at = " at m=" + std::to_string(m);
      const DensityMatrix dm = density_matrix(4, m);
      const Polytope poly = certify_vertices(PointSet::from_density(dm));
      c.check(poly.vertices().size() == 2, "exactly two vertices" + at);
      c.check(poly.has_vertex({1, 0}), "(1,0) is a vertex" + at);

      Rational balanced = 0;
      for (const auto& v : poly.vertex_points()) balanced = std::max(balanced, v[1]);
      Rational column_max = 0;
      for (const auto& col : dm.columns) column_max = std::max(column_max, col[1]);
      c.check(balanced == column_max, "balanced vertex is the column maximum" + at);
      c.check(density_row(build_max_balanced(m), 4)[1] == balanced, "maximally balanced tree attains the maximum" + at);
      c.witness("bal4 m=" + std::to_string(m), to_string(balanced));

      if (m >= 8 && is_power_of_two(m)) {
        const int k = log2_exact(m);
        const BigInt p = pow2(static_cast<unsigned>(k));
        const Rational closed = make_rational(3 * p - 5, 7 * p - 21);
        c.check(balanced == closed, "closed form (3*2^k-5)/(7*2^k-21)" + at);
        c.check(balanced == make_rational(bal4_count_complete(k), binomial(m, 4)), "doubling recurrence" + at);
        c.witness("gap to 3/7 m=" + std::to_string(m), to_string(balanced - floor_value));
      }
      c.check(balanced > floor_value, "coordinate exceeds 3/7" + at);
      if (previous) c.check(balanced <= *previous, "non-increasing in m" + at);
      previous = balanced;
      c.check(convex_membership(poly.vertex_points(), inf_point.probs()).inside, "beta=inf point inside" + at);
    }
  });
}

VerificationReport verify_ex5_vertices(int n) {
  if (n < 6) throw DomainError("verify_ex5_vertices needs n >= 6");
  return Claim("ex5-vertex-families n=" + std::to_string(n)).run([&](Claim& c) {
    const Polytope poly = sampling_polytope(5, n);
    const std::vector<std::pair<std::string, TreeShape>> families = {
        {"comb", build_comb(n)},
        {"comb(Gir_5," + std::to_string(n - 4) + ")", build_comb_replace(shape5(1), n - 4)},
        {"bicomb(" + std::to_string(n / 2) + "," + std::to_string(n - n / 2) + ")", build_bicomb(n / 2, n - n / 2)},
        {"max_balanced", build_max_balanced(n)},
    };
    c.witness("vertex count n=" + std::to_string(n), std::to_string(poly.vertices().size()));
    for (const auto& [name, tree] : families) {
      const RationalVector point = density_row(tree, 5).probs();
      c.witness(name + " n=" + std::to_string(n), point_string(point));
      c.check(poly.has_vertex(point), name + " is a vertex at n=" + std::to_string(n));
    }
  });
}

VerificationReport verify_ex5_vertices_range(int n_min, int n_max) {
  VerificationReport merged;
  merged.claim = "ex5-vertex-families";
  for (int n = n_min; n <= n_max; ++n) {
    VerificationReport r = verify_ex5_vertices(n);
    if (r.status == ClaimStatus::Fail) merged.status = ClaimStatus::Fail;
    if (r.status == ClaimStatus::Skipped && merged.status == ClaimStatus::Pass) merged.status = ClaimStatus::Skipped;
    merged.witnesses.insert(merged.witnesses.end(), r.witnesses.begin(), r.witnesses.end());
    merged.detail.insert(merged.detail.end(), r.detail.begin(), r.detail.end());
    merged.seconds += r.seconds;
  }
  return merged;
}

VerificationReport verify_c5_min(int n_min, int n_max) {
  if (n_min < 7) throw DomainError("verify_c5_min needs n >= 7");
  return Claim("c5-minimizer").run([&](Claim& c) {
    const TreeShape comb5 = build_comb(5);
    for (int n = n_min; n <= n_max; ++n) {
      const auto index = enumerate_shapes(n);
      if (index->size() > caps().max_columns) {
        throw ResourceLimitError("|RB_U(" + std::to_string(n) + ")| exceeds max_columns");
      }
      std::vector<BigInt> counts(index->size());
      parallel_for(index->size(), [&](std::size_t i) { counts[i] = count_pattern((*index)[i], comb5); });
      const BigInt best = *std::min_element(counts.begin(), counts.end());
      const auto ties = std::count(counts.begin(), counts.end(), best);
      const std::size_t argmin = static_cast<std::size_t>(std::find(counts.begin(), counts.end(), best) - counts.begin());
      const std::string at = " at n=" + std::to_string(n);
      c.check(ties == 1, "unique minimizer" + at);
      c.check((*index)[argmin] == build_max_balanced(n), "minimizer is maximally balanced" + at);
      c.witness("min c5 n=" + std::to_string(n), to_string(best) + " at " + (*index)[argmin].encoding());
    }
  });
}

VerificationReport verify_beta_limits(int k_max) {
  return Claim("beta-limits").run([&](Claim& c) {
    const ShapeDistribution inf5 = beta_distribution(5, BetaParam::infinity());
    c.check(inf5.probs() == RationalVector{Rational(4, 21), Rational(1, 7), Rational(2, 3)},
            "beta=inf on five leaves is (4/21, 1/7, 2/3)");
    c.witness("beta=inf n=5", point_string(inf5.probs()));
    const TreeShape& gir5 = shape5(1);
    const TreeShape& bal5 = shape5(2);
    for (int k = 3; k <= k_max; ++k) {
      const TreeShape tree = build_complete(k);
      const BigInt p = pow2(static_cast<unsigned>(k));
      const std::string at = " at k=" + std::to_string(k);
      const ShapeDistribution d = density_row(tree, 5);
      c.check(d[1] == Rational(1, 7), "Gir_5 coordinate is 1/7" + at);
      c.check(d[2] == Rational(2, 3) + make_rational(20, 21 * (p - 3)), "Bal_5 coordinate closed form" + at);
      c.check(d[0] == 1 - d[1] - d[2], "coordinates sum to one" + at);
      c.witness("complete k=" + std::to_string(k), point_string(d.probs()));

      const Rational b5 = Rational(BigInt(pow2(static_cast<unsigned>(k - 2)) * (p - 4) * (p - 2) * (p - 1) * (7 * p - 11))) / 315;
      const Rational g5 = Rational(BigInt(pow2(static_cast<unsigned>(k - 3)) * (p - 4) * (p - 3) * (p - 2) * (p - 1))) / 105;
      c.check(Rational(count_pattern(tree, bal5)) == b5, "Bal_5 count closed form" + at);
      c.check(Rational(count_pattern(tree, gir5)) == g5, "Gir_5 count closed form" + at);
    }
  });
}

VerificationReport verify_multinomial_limit(int n, const std::vector<int>& ms) {
  if (n != 4 && n != 5) throw DomainError("verify_multinomial_limit supports n = 4 or 5");
  if (ms.empty()) throw DomainError("verify_multinomial_limit needs at least one m");
  return Claim("multinomial-limit n=" + std::to_string(n)).run([&](Claim& c) {
    std::vector<Rational> scaled;
    for (int m : ms) {
      if (m < n) throw DomainError("multinomial limit needs m >= n");
      const TreeShape tree = build_max_balanced(m);
      const ShapeDistribution dens = density_row(tree, n);
      const ShapeDistribution model = multinomial_distribution(dm_construction(tree), n);
      Rational delta = 0;
      for (std::size_t i = 0; i < dens.size(); ++i) delta = std::max(delta, Rational(abs(dens[i] - model[i])));
      c.witness("delta m=" + std::to_string(m), to_string(delta));
      c.check(delta > 0, "gap is positive at m=" + std::to_string(m));
      scaled.push_back(delta * m);
    }
    const auto [lo, hi] = std::minmax_element(scaled.begin(), scaled.end());
    c.witness("min m*delta", to_string(*lo));
    c.witness("max m*delta", to_string(*hi));
    c.check(*hi <= 2 * *lo, "m*delta within a factor two");
  });
}

VerificationReport verify_monotone_containment(int m_min, int m_max) {
  if (m_min < 5) throw DomainError("containment check needs m >= 5");
  return Claim("monotone-containment").run([&](Claim& c) {
    std::vector<Polytope> polys;
    for (int m = m_min; m <= m_max + 1; ++m) polys.push_back(sampling_polytope(5, m));
    for (int m = m_min; m <= m_max; ++m) {
      const auto& outer = polys[static_cast<std::size_t>(m - m_min)];
      const auto& inner = polys[static_cast<std::size_t>(m - m_min + 1)];
      const std::string tag = "EX_5^" + std::to_string(m + 1) + " in EX_5^" + std::to_string(m);
      c.check(contains_polytope(inner, outer).contained, tag);
      c.witness(tag, "contained");

      // The Gir_5 point mass is outside EX_5^m once m > 5.
      if (m > 5) {
        const RationalVector outside{0, 1, 0};
        PointSet perturbed = inner.points();
        perturbed.add(outside, "perturbation");
        const Containment result = contains_polytope(certify_vertices(perturbed), outer);
        const bool rejected = !result.contained && result.witness && perturbed[*result.witness] == outside;
        c.check(rejected, "perturbation rejected with witness against EX_5^" + std::to_string(m));
      }
    }
  });
}

VerificationReport verify_lower_rule(int n_max) {
  return Claim("lower-rule").run([&](Claim& c) {
    const std::vector<BetaParam> betas = {BetaParam::finite(-1), BetaParam::finite(0), BetaParam::finite(Rational(3, 2)),
                                          BetaParam::infinity(), BetaParam::comb_limit()};
    for (int n = 4; n <= n_max; ++n) {
      for (const auto& beta : betas) {
        const bool ok = derive_lower_rule(beta_rule(n, beta)) == beta_rule(n - 1, beta);
        c.check(ok, "lower rule at n=" + std::to_string(n) + " beta=" + beta.to_string());
      }
    }
    c.witness("levels", "4.." + std::to_string(n_max));
  });
}

namespace {

struct ClaimEntry {
  std::string id;
  std::function<VerificationReport()> run;
};

const std::vector<ClaimEntry>& registry() {
  static const std::vector<ClaimEntry> entries = {
      {"beta-limits", [] { return verify_beta_limits(5); }},
      {"c5-minimizer", [] { return verify_c5_min(7, 11); }},
      {"ex4-segment", [] { return verify_ex4(12); }},
      {"ex5-vertex-families", [] { return verify_ex5_vertices_range(6, 12); }},
      {"lower-rule", [] { return verify_lower_rule(8); }},
      {"monotone-containment", [] { return verify_monotone_containment(5, 10); }},
      {"multinomial-limit-n4", [] { return verify_multinomial_limit(4, {8, 12, 16, 20}); }},
      {"multinomial-limit-n5", [] { return verify_multinomial_limit(5, {8, 12, 16, 20}); }},
  };
  return entries;
}

}  // namespace

std::vector<std::string> claim_ids() {
  std::vector<std::string> ids;
  for (const auto& e : registry()) ids.push_back(e.id);
  return ids;
}

VerificationReport run_claim(const std::string& id) {
  for (const auto& e : registry()) {
    if (e.id == id) {
      VerificationReport r = e.run();
      r.claim = id;
      return r;
    }
  }
  throw DomainError("unknown claim '" + id + "'");
}

std::vector<VerificationReport> run_all() {
  const auto& entries = registry();
  std::vector<VerificationReport> reports(entries.size());
  parallel_for(entries.size(), [&](std::size_t i) { reports[i] = run_claim(entries[i].id); });
  std::sort(reports.begin(), reports.end(), [](const auto& a, const auto& b) { return a.claim < b.claim; });
  return reports;
}

// ---------------------------------------------------------------------------
// Figure data

Figure parse_figure(const std::string& name) {
  if (name == "fig4") return Figure::Fig4;
  if (name == "fig5") return Figure::Fig5;
  if (name == "fig6") return Figure::Fig6;
  throw DomainError("unknown figure '" + name + "' (expected fig4, fig5 or fig6)");
}

std::vector<std::string> beta_grid() {
  return {"-2", "-19/10", "-3/2", "-1", "-1/2", "0", "1/2", "1", "2", "5", "10", "100", "inf"};
}

namespace {

class CsvFile {
 public:
  CsvFile(const std::filesystem::path& path, const std::string& header) : path_(path), out_(path) {
    if (!out_) throw std::runtime_error("cannot open " + path.string() + " for writing");
    out_ << header << '\n';
  }

  void row(const std::vector<std::string>& fields) {
    for (std::size_t i = 0; i < fields.size(); ++i) {
      if (i) out_ << ',';
      out_ << csv_field(fields[i]);
    }
    out_ << '\n';
  }

  std::filesystem::path close() {
    out_.close();
    if (!out_) throw std::runtime_error("write failed for " + path_.string());
    return path_;
  }

 private:
  std::filesystem::path path_;
  std::ofstream out_;
};

void write_polytopes(const std::vector<int>& ms, const std::filesystem::path& dir, std::vector<std::filesystem::path>& files) {
  CsvFile points(dir / "points.csv", "source,n,m,tree,x,y");
  CsvFile hull(dir / "hull.csv", "n,m,order,tree,x,y");
  for (int m : ms) {
    const Polytope poly = sampling_polytope(5, m);
    const auto& ps = poly.points();
    const std::string source = "EX_5^" + std::to_string(m);
    for (std::size_t i = 0; i < ps.size(); ++i) {
      points.row({source, "5", std::to_string(m), ps.provenance()[i], to_string(ps[i][0]), to_string(ps[i][1])});
    }
    const auto cycle = boundary_cycle_2d(poly);
    for (std::size_t k = 0; k < cycle.size(); ++k) {
      const auto& p = ps[cycle[k]];
      hull.row({"5", std::to_string(m), std::to_string(k), ps.provenance()[cycle[k]], to_string(p[0]), to_string(p[1])});
    }
  }
  files.push_back(points.close());
  files.push_back(hull.close());
}

void write_beta(const std::filesystem::path& dir, std::vector<std::filesystem::path>& files) {
  CsvFile beta(dir / "beta.csv", "beta,x,y");
  for (const auto& b : beta_grid()) {
    const ShapeDistribution d = beta_distribution(5, BetaParam::parse(b));
    beta.row({b, to_string(d[0]), to_string(d[1])});
  }
  files.push_back(beta.close());
}

// All weight vectors with `parts` entries in (1/den)Z summing to one.
void weight_grid(int parts, int den, const std::function<void(const RationalVector&)>& visit) {
  std::vector<int> k(static_cast<std::size_t>(parts), 0);
  auto rec = [&](auto&& self, int pos, int left) -> void {
    if (pos == parts - 1) {
      k[static_cast<std::size_t>(pos)] = left;
      RationalVector w;
      for (int v : k) w.emplace_back(v, den);
      visit(w);
      return;
    }
    for (int v = left; v >= 0; --v) {
      k[static_cast<std::size_t>(pos)] = v;
      self(self, pos + 1, left - v);
    }
  };
  rec(rec, 0, den);
}

void write_multinomial(const TreeShape& skeleton, int den, const std::filesystem::path& dir,
                       std::vector<std::filesystem::path>& files) {
  CsvFile out(dir / "multinomial.csv", "skeleton,weights,x,y");
  weight_grid(extended_edge_count(skeleton), den, [&](const RationalVector& w) {
    const ShapeDistribution d = multinomial_distribution(MultinomialParams(skeleton, w), 5);
    std::string weights;
    for (std::size_t i = 0; i < w.size(); ++i) weights += (i ? " " : "") + to_string(w[i]);
    out.row({skeleton.encoding(), weights, to_string(d[0]), to_string(d[1])});
  });
  files.push_back(out.close());
}

}  // namespace

std::vector<std::filesystem::path> emit_figure_data(Figure figure, const std::filesystem::path& directory) {
  std::error_code ec;
  std::filesystem::create_directories(directory, ec);
  if (ec) throw std::runtime_error("cannot create " + directory.string() + ": " + ec.message());

  std::vector<std::filesystem::path> files;
  switch (figure) {
    case Figure::Fig4:
      write_polytopes({7}, directory, files);
      break;
    case Figure::Fig5:
      write_beta(directory, files);
      write_multinomial(build_comb(2), 12, directory, files);
      break;
    case Figure::Fig6:
      write_polytopes({5, 6, 9, 12}, directory, files);
      write_beta(directory, files);
      write_multinomial(build_comb(3), 6, directory, files);
      break;
  }
  return files;
}

}  // namespace treepoly
