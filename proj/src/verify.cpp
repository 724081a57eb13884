#include "posauction/verify.hpp"

#include <algorithm>
#include <tuple>

#include "posauction/errors.hpp"

namespace posauction {

namespace {

void require_strict(AuctionInstance const &instance, char const *what)
{
  if (!instance.strict())
  {
    throw InvalidInput(std::string(what) + " requires pairwise distinct bidder values");
  }
}

PlacementSummary placement(Outcome const &outcome, BidderId id)
{
  auto slot = outcome.allocation.slot_of(id);
  if (slot && *slot == 0)
  {
    slot.reset();
  }
  return PlacementSummary{slot, outcome.payment(id)};
}

Utility utility_for(BidderType const &true_type, SlotLadder const &ladder,
                    PlacementSummary const &where)
{
  Rational const ctr = where.slot ? ladder.ctr(*where.slot) : Rational{0};
  if (true_type.cls == BidderClass::UM)
  {
    return um_utility(true_type.value, ctr, where.price);
  }
  return vm_preference(true_type.value, ctr, where.price);
}

bool strictly_better(Utility const &deviation, Utility const &truthful)
{
  if (auto const *d = std::get_if<Rational>(&deviation))
  {
    return *d > std::get<Rational>(truthful);
  }
  auto const &dv = std::get<VmPreference>(deviation);
  if (!dv.feasible)
  {
    return false;
  }
  return dv > std::get<VmPreference>(truthful);
}

std::vector<Rational> marginal_values(AuctionInstance const &instance, Outcome const &outcome)
{
  std::vector<Rational> out;
  std::size_t const     K      = instance.slots();
  auto const           &ladder = instance.ladder();
  for (Slot k = 1; k <= K; ++k)
  {
    for (Slot kp = k + 1; kp <= K; ++kp)
    {
      if (ladder.ctr(k) != ladder.ctr(kp))
      {
        out.push_back(marginal_payment_increase(outcome, instance, k, kp));
      }
    }
  }
  return out;
}

}  // namespace

std::vector<IrViolation> check_ir(MechanismId mechanism, AuctionInstance const &instance)
{
  require_strict(instance, "IR check");
  Outcome const            outcome = run_mechanism(mechanism, instance);
  std::vector<IrViolation> out;
  for (BidderId id = 0; id < instance.bidder_count(); ++id)
  {
    auto slot = outcome.allocation.slot_of(id);
    if (!slot || *slot == 0)
    {
      continue;
    }
    if (outcome.payment(id) > instance.bidder(id).value)
    {
      out.push_back(IrViolation{id, *slot, outcome.payment(id), instance.bidder(id).value});
    }
  }
  return out;
}

std::set<Rational> critical_values(AuctionInstance const &instance, Outcome const &truthful,
                                   BidderId bidder, Rational const &delta, int grid_points)
{
  instance.bidder(bidder);
  std::set<Rational> out;
  auto add_with_neighbours = [&](Rational const &v) {
    out.insert(v);
    out.insert(v - delta);
    out.insert(v + delta);
  };

  Rational max_value;
  for (BidderId j = 0; j < instance.bidder_count(); ++j)
  {
    max_value = max(max_value, instance.bidder(j).value);
    if (j != bidder)
    {
      add_with_neighbours(instance.bidder(j).value);
    }
  }
  if (instance.bidder_count() > 1)
  {
    for (auto const &m : marginal_values(instance, truthful))
    {
      add_with_neighbours(m);
    }
  }
  Rational const top = max_value + Rational{1};
  for (int g = 1; g <= grid_points; ++g)
  {
    out.insert(top * Rational{g, grid_points});
  }

  std::erase_if(out, [](Rational const &v) { return v.sign() <= 0; });
  return out;
}

Rational default_delta(AuctionInstance const &instance, Outcome const &truthful)
{
  std::set<Rational> points;
  for (auto const &b : instance.bidders())
  {
    points.insert(b.value);
  }
  for (auto const &m : marginal_values(instance, truthful))
  {
    points.insert(m);
  }
  std::optional<Rational> min_gap;
  for (auto it = points.begin(); it != points.end() && std::next(it) != points.end(); ++it)
  {
    Rational gap = *std::next(it) - *it;
    if (!min_gap || gap < *min_gap)
    {
      min_gap = std::move(gap);
    }
  }
  Rational const scale{1, 1000};
  return min_gap ? *min_gap * scale : scale;
}

std::vector<DeviationReport> check_ic(MechanismId mechanism, AuctionInstance const &instance,
                                      IcConfig const &config)
{
  require_strict(instance, "IC check");
  if (config.delta.sign() <= 0)
  {
    throw InvalidConfig("IC check needs delta > 0, got " + config.delta.str());
  }
  if (config.grid_points < 0)
  {
    throw InvalidConfig("grid point count must be non-negative");
  }

  Outcome const truthful = run_mechanism(mechanism, instance);
  auto const   &ladder   = instance.ladder();

  std::vector<DeviationReport> out;
  for (BidderId id = 0; id < instance.bidder_count(); ++id)
  {
    BidderType const &truth = instance.bidder(id);
    auto values = critical_values(instance, truthful, id, config.delta, config.grid_points);
    values.insert(truth.value);

    PlacementSummary const truthful_place   = placement(truthful, id);
    Utility const          truthful_utility = utility_for(truth, ladder, truthful_place);

    std::vector<BidderClass> classes{truth.cls};
    if (config.class_deviations)
    {
      classes = {BidderClass::UM, BidderClass::VM};
    }

    for (auto const &v : values)
    {
      for (BidderClass cls : classes)
      {
        BidderType const misreport{v, cls};
        if (misreport == truth)
        {
          continue;
        }
        Outcome const deviated = run_mechanism(mechanism, instance.with_bidder(id, misreport));
        PlacementSummary const where   = placement(deviated, id);
        Utility                utility = utility_for(truth, ladder, where);
        if (strictly_better(utility, truthful_utility))
        {
          out.push_back(DeviationReport{id, truth, misreport, truthful_place, where,
                                        truthful_utility, std::move(utility)});
        }
      }
    }
  }
  // Already ordered by construction (ids ascending, std::set ascending, UM
  // before VM); kept explicit for callers that merge reports.
  std::stable_sort(out.begin(), out.end(), [](auto const &a, auto const &b) {
    return std::tie(a.bidder, a.misreport.value) < std::tie(b.bidder, b.misreport.value);
  });
  return out;
}

std::pair<bool, bool> check_robustness(AuctionInstance const &instance)
{
  Outcome baseline;
  if (instance.all_of_class(BidderClass::UM))
  {
    baseline = run_vcg(instance);
  }
  else if (instance.all_of_class(BidderClass::VM))
  {
    baseline = run_gsp(instance);
  }
  else
  {
    throw InvalidInput("robustness check needs an all-UM or all-VM instance");
  }

  // Equality covers the allocation (including the dummy slot), every slot
  // price and every payment.
  return {run_mpr(instance) == baseline, run_mpu(instance) == baseline};
}

LemmaReport check_lemmas(Outcome const &outcome, AuctionInstance const &instance)
{
  require_strict(instance, "lemma check");
  auto const &ladder = instance.ladder();
  if (!ladder.strictly_increasing())
  {
    throw DegeneratePair("lemma check needs strictly increasing CTRs");
  }
  std::size_t const K = instance.slots();

  LemmaReport report;
  auto fail = [&](bool &flag, std::string message) {
    flag = false;
    report.failures.push_back(std::move(message));
  };

  auto const occupant = [&](Slot k) { return outcome.allocation.occupant(k); };
  auto const cls_at   = [&](Slot k) { return instance.bidder(*occupant(k)).cls; };
  auto const value_at = [&](Slot k) { return instance.bidder(*occupant(k)).value; };

  for (Slot k = 1; k <= K; ++k)
  {
    if (!occupant(k) || cls_at(k) != BidderClass::UM)
    {
      continue;
    }
    Rational const &v = value_at(k);
    if (k < K)
    {
      Rational const delta = marginal_payment_increase(outcome, instance, k, k + 1);
      if (delta != v)
      {
        std::string branch = "unknown";
        if (k + 1 <= K && occupant(k + 1))
        {
          // The price above a UM is either its VCG-style extension or a
          // lower VM's value; record which would have won.
          Rational const extension =
            (outcome.slot_price(k) * ladder.ctr(k) + v * (ladder.ctr(k + 1) - ladder.ctr(k))) /
            ladder.ctr(k + 1);
          branch = outcome.slot_price(k + 1) == extension ? "UM term" : "VM term";
        }
        fail(report.marginal_equality, "marginal equality: UM bidder " +
                                         std::to_string(*occupant(k)) + " at slot " +
                                         std::to_string(k) + " has delta " + delta.str() +
                                         " != value " + v.str() + " (slot " +
                                         std::to_string(k + 1) + " priced by " + branch + ")");
      }
    }
    for (Slot kp = k + 1; kp <= K; ++kp)
    {
      Rational const delta = marginal_payment_increase(outcome, instance, k, kp);
      if (delta < v)
      {
        fail(report.marginal_dominance,
             "marginal dominance: UM bidder " + std::to_string(*occupant(k)) + " at slot " +
               std::to_string(k) + " has delta(" + std::to_string(k) + "," + std::to_string(kp) +
               ") = " + delta.str() + " < value " + v.str());
      }
    }
  }

  for (Slot lo = 1; lo <= K; ++lo)
  {
    if (!occupant(lo))
    {
      continue;
    }
    for (Slot hi = lo + 1; hi <= K; ++hi)
    {
      if (!occupant(hi))
      {
        continue;
      }
      auto const lo_cls = cls_at(lo);
      auto const hi_cls = cls_at(hi);
      if (lo_cls == hi_cls && value_at(lo) > value_at(hi))
      {
        fail(report.same_class_ordering,
             "same-class ordering: bidder " + std::to_string(*occupant(lo)) + " at slot " +
               std::to_string(lo) + " outvalues bidder " + std::to_string(*occupant(hi)) +
               " at slot " + std::to_string(hi));
      }
      if (lo_cls == BidderClass::VM && hi_cls == BidderClass::UM && !(value_at(lo) < value_at(hi)))
      {
        fail(report.cross_class_ordering,
             "cross-class ordering: VM bidder " + std::to_string(*occupant(lo)) + " at slot " +
               std::to_string(lo) + " is not below UM bidder " + std::to_string(*occupant(hi)) +
               " in value");
      }
    }
  }

  for (Slot k = 2; k <= K; ++k)
  {
    if (outcome.slot_price(k) < outcome.slot_price(k - 1))
    {
      fail(report.monotone_prices, "monotone prices: p(" + std::to_string(k) + ") = " +
                                     outcome.slot_price(k).str() + " < p(" +
                                     std::to_string(k - 1) + ") = " +
                                     outcome.slot_price(k - 1).str());
    }
  }
  return report;
}

RatioReport approximation_ratio(AuctionInstance const &instance, MechanismId mechanism)
{
  require_strict(instance, "approximation ratio");
  RatioReport report;
  report.lsw_mechanism = lsw(instance, run_mechanism(mechanism, instance).allocation);
  report.lsw_optimal   = lsw(instance, optimal_allocation(instance));
  if (report.lsw_mechanism.is_zero())
  {
    if (!report.lsw_optimal.is_zero())
    {
      throw ProtocolError("mechanism welfare is zero while the optimum is positive");
    }
    report.ratio = Rational{1};
  }
  else
  {
    report.ratio = report.lsw_optimal / report.lsw_mechanism;
  }
  return report;
}

LowerBoundReport lower_bound_scenario(Rational const &epsilon)
{
  if (epsilon.sign() <= 0 || !(epsilon < Rational{1, 10}))
  {
    throw InvalidConfig("epsilon must lie in (0, 1/10), got " + epsilon.str());
  }

  SlotLadder const                ladder({Rational{1, 10}, Rational{2, 10}});
  BidderType const                a{epsilon, BidderClass::VM};
  BidderType const                b{Rational{2} + epsilon, BidderClass::VM};
  std::array<BidderType, 4> const c_types{
    BidderType{Rational{4}, BidderClass::UM}, BidderType{Rational{4}, BidderClass::VM},
    BidderType{Rational{1}, BidderClass::UM}, BidderType{Rational{1}, BidderClass::VM}};
  BidderId constexpr c_id = 2;

  LowerBoundReport report;
  report.epsilon       = epsilon;
  report.robust_all_vm = true;
  for (std::size_t i = 0; i < c_types.size(); ++i)
  {
    AuctionInstance const instance(ladder, {a, b, c_types[i]});
    LowerBoundCase       &rec = report.cases[i];
    rec.c_type                = c_types[i];
    rec.mpr_outcome           = run_mpr(instance);
    rec.c_slot                = rec.mpr_outcome.allocation.slot_of(c_id);
    rec.c_payment             = rec.mpr_outcome.payment(c_id);
    rec.gsp_c_payment         = run_gsp(instance).payment(c_id);
    rec.ratio                 = approximation_ratio(instance, MechanismId::MPR);
    if (c_types[i].cls == BidderClass::VM && !(rec.mpr_outcome == run_gsp(instance)))
    {
      report.robust_all_vm = false;
    }
  }

  report.p_high         = report.cases[1].gsp_c_payment;
  report.p_low          = report.cases[3].gsp_c_payment;
  report.constraint_lhs = Rational{2} * report.p_high - report.p_low;
  report.ratio_case1    = report.cases[0].ratio.ratio;
  return report;
}

}  // namespace posauction
