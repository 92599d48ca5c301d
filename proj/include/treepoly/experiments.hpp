// Claim-by-claim verification of the exact results on tree-shape
// polytopes, and CSV emission of the data behind the figures.

#ifndef TREEPOLY_EXPERIMENTS_HPP
#define TREEPOLY_EXPERIMENTS_HPP

#include <filesystem>
#include <iosfwd>
#include <string>
#include <utility>
#include <vector>

#include "treepoly/rational.hpp"

namespace treepoly {

enum class ClaimStatus { Pass, Fail, Skipped };

/// Outcome of one claim. Pass requires every sub-assertion to hold
/// exactly; Skipped means a resource cap was hit (the reason is in
/// `detail`).
struct VerificationReport {
  std::string claim;
  ClaimStatus status = ClaimStatus::Pass;
  /// Exact witnesses as (label, value) pairs, in the order they were checked.
  std::vector<std::pair<std::string, std::string>> witnesses;
  /// Failed sub-assertions, or the skip reason.
  std::vector<std::string> detail;
  double seconds = 0.0;

  bool passed() const noexcept { return status == ClaimStatus::Pass; }
};

std::string status_name(ClaimStatus status);
/// One JSON object on a single line; timing is the only non-deterministic field.
std::string report_to_json_line(const VerificationReport& report, bool include_timing = true);

/// EX_4^m for 5 <= m <= m_max: two vertices, the comb corner, the balanced
/// corner attained by the maximally balanced tree, its closed form at
/// powers of two, monotone decrease above 3/7, and the beta = infinity
/// point inside.
VerificationReport verify_ex4(int m_max);

/// Comb, comb(Gir_5, n-4), bicomb(floor(n/2), ceil(n/2)) and the
/// maximally balanced tree are certified vertices of EX_5^n.
VerificationReport verify_ex5_vertices(int n);
/// verify_ex5_vertices over a range of n, merged into one report.
VerificationReport verify_ex5_vertices_range(int n_min, int n_max);

/// Exhaustive Comb_5-count minimizer over RB_U(n) is unique and equals
/// the maximally balanced tree, for every n in [n_min, n_max].
VerificationReport verify_c5_min(int n_min, int n_max);

/// Exact 5-leaf densities of complete trees and the beta = infinity point.
VerificationReport verify_beta_limits(int k_max = 5);

/// delta_m = sup-norm gap between pi_n(p_{T_m}) and the leaf-edge
/// multinomial model of T_m, with T_m maximally balanced. Passes when
/// m * delta_m stays within a factor two over `ms`.
VerificationReport verify_multinomial_limit(int n, const std::vector<int>& ms);

/// Sampling polytopes shrink with m: EX_5^{m+1} inside EX_5^m.
VerificationReport verify_monotone_containment(int m_min, int m_max);

/// Lower-level beta rules are the consistency image of higher ones.
VerificationReport verify_lower_rule(int n_max);

/// Every claim at default scale, run concurrently, ordered by claim id.
std::vector<VerificationReport> run_all();
/// Claim ids accepted by run_claim(), in run_all() order.
std::vector<std::string> claim_ids();
/// Throws DomainError on an unknown id.
VerificationReport run_claim(const std::string& id);

enum class Figure { Fig4, Fig5, Fig6 };

/// Parses "fig4", "fig5", "fig6".
Figure parse_figure(const std::string& name);

/// Writes the CSV files for `figure` into `directory` (created when
/// missing) and returns their paths. Throws std::runtime_error naming the
/// path on I/O failure.
///
///   points.csv   source,n,m,tree,x,y        projected candidate points
///   hull.csv     n,m,order,tree,x,y         boundary cycles
///   beta.csv     beta,x,y                   beta curve on RB_U(5)
///   multinomial.csv  skeleton,weights,x,y   model on a weight grid
///
/// x and y are the Comb_5 and Gir_5 coordinates, exact p/q.
std::vector<std::filesystem::path> emit_figure_data(Figure figure, const std::filesystem::path& directory);

/// The beta grid used by the figures: -2, a spread of finite values, inf.
std::vector<std::string> beta_grid();

}  // namespace treepoly

#endif  // TREEPOLY_EXPERIMENTS_HPP
