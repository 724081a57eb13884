#pragma once

#include <array>
#include <optional>
#include <set>
#include <string>
#include <utility>
#include <variant>
#include <vector>

#include "posauction/core.hpp"
#include "posauction/mechanisms.hpp"

namespace posauction {

struct IrViolation
{
  BidderId bidder;
  Slot     slot;
  Rational price;
  Rational value;
};

/// Bidders charged more per click than their value under truthful reports.
/// Requires a strict instance (InvalidInput otherwise).
std::vector<IrViolation> check_ir(MechanismId mechanism, AuctionInstance const &instance);

/// Where a bidder ended up: real slot (none for the dummy slot or no slot)
/// and the per-click price paid.
struct PlacementSummary
{
  std::optional<Slot> slot;
  Rational            price;
};

using Utility = std::variant<Rational, VmPreference>;

struct DeviationReport
{
  BidderId         bidder;
  BidderType       true_type;
  BidderType       misreport;
  PlacementSummary truthful;
  PlacementSummary deviation;
  Utility          truthful_utility;
  Utility          deviation_utility;
};

struct IcConfig
{
  Rational delta{1, 1000};
  int      grid_points = 64;
  /// Allow misreporting the class as well as the value.
  bool class_deviations = true;
};

/// Misreport values probed for `bidder`: every other bidder's value and its
/// ±delta neighbours, every Δ(k,k') of `truthful` over slots with distinct
/// CTRs and its ±delta neighbours, and `grid_points` evenly spaced points in
/// (0, max value + 1]. Non-positive candidates are dropped.
std::set<Rational> critical_values(AuctionInstance const &instance, Outcome const &truthful,
                                   BidderId bidder, Rational const &delta, int grid_points);

/// 1/1000 of the smallest gap between distinct bidder values and Δ values of
/// the truthful outcome; 1/1000 when fewer than two such points exist.
Rational default_delta(AuctionInstance const &instance, Outcome const &truthful);

/// Unilateral-deviation falsifier. Returns every misreport that leaves its
/// bidder strictly better off under the bidder's true class. An infeasible
/// outcome never counts as an improvement for a VM. Reports are ordered by
/// bidder, then misreported value, then class.
std::vector<DeviationReport> check_ic(MechanismId mechanism, AuctionInstance const &instance,
                                      IcConfig const &config);

/// For a homogeneous instance: (MPR equals baseline, MPU equals baseline),
/// where the baseline is VCG for all-UM and GSP for all-VM. Throws
/// InvalidInput on a mixed instance.
std::pair<bool, bool> check_robustness(AuctionInstance const &instance);

struct LemmaReport
{
  bool                     marginal_equality   = true;  // Δ(k,k+1) = v at every UM below the top
  bool                     same_class_ordering = true;  // same class: higher value ⇒ higher slot
  bool                     cross_class_ordering = true; // VM below UM ⇒ lower value
  bool                     marginal_dominance  = true;  // Δ(k,k') ≥ v for every k' > k at a UM
  bool                     monotone_prices     = true;  // p^(k) non-decreasing in k
  std::vector<std::string> failures;

  bool all_passed() const
  {
    return marginal_equality && same_class_ordering && cross_class_ordering &&
           marginal_dominance && monotone_prices;
  }
};

/// Structural checks on an MPR outcome. Requires a strict instance and
/// strictly increasing CTRs (DegeneratePair otherwise).
LemmaReport check_lemmas(Outcome const &outcome, AuctionInstance const &instance);

struct RatioReport
{
  Rational lsw_mechanism;
  Rational lsw_optimal;
  /// optimal / mechanism; 1 when both are zero.
  Rational ratio;
};

RatioReport approximation_ratio(AuctionInstance const &instance, MechanismId mechanism);

struct LowerBoundCase
{
  BidderType          c_type;
  Outcome             mpr_outcome;
  std::optional<Slot> c_slot;
  Rational            c_payment;
  Rational            gsp_c_payment;
  RatioReport         ratio;
};

/// Two slots (CTR 1/10, 2/10), A = (ε, VM), B = (2 + ε, VM) and four
/// choices of C: (4, UM), (4, VM), (1, UM), (1, VM).
struct LowerBoundReport
{
  Rational                      epsilon;
  std::array<LowerBoundCase, 4> cases;
  /// C's payment in the all-VM cases (GSP-determined).
  Rational p_high;
  Rational p_low;
  /// 2·p_high − p_low; any IC, IR, robust mechanism with ratio below 5/4
  /// would need this to be ≤ 4.
  Rational constraint_lhs;
  Rational ratio_case1;
  /// MPR matches GSP exactly in both all-VM cases.
  bool robust_all_vm = false;
};

/// Requires 0 < epsilon < 1/10; throws InvalidConfig otherwise.
LowerBoundReport lower_bound_scenario(Rational const &epsilon);

}  // namespace posauction
