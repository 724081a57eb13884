#include "posauction/mechanisms.hpp"

#include <algorithm>
#include <string>

#include "posauction/errors.hpp"

namespace posauction {

std::string_view to_string(MechanismId id)
{
  switch (id)
  {
  case MechanismId::VCG:
    return "VCG";
  case MechanismId::GSP:
    return "GSP";
  case MechanismId::MPU:
    return "MPU";
  case MechanismId::MPR:
    return "MPR";
  }
  return "?";
}

MechanismId parse_mechanism(std::string_view text)
{
  std::string lower(text);
  std::transform(lower.begin(), lower.end(), lower.begin(),
                 [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
  if (lower == "vcg")
  {
    return MechanismId::VCG;
  }
  if (lower == "gsp")
  {
    return MechanismId::GSP;
  }
  if (lower == "mpu")
  {
    return MechanismId::MPU;
  }
  if (lower == "mpr")
  {
    return MechanismId::MPR;
  }
  throw ParseError("unknown mechanism \"" + std::string(text) + "\" (expected vcg, gsp, mpu or mpr)");
}

std::vector<Participant> ranked_participants(AuctionInstance const &instance)
{
  std::vector<Participant> out;
  for (BidderId id : rank_by_value(instance))
  {
    auto const &b = instance.bidder(id);
    out.push_back(Participant{id, b.value, b.cls});
  }
  while (out.size() < instance.slots() + 1)
  {
    out.push_back(Participant{std::nullopt, Rational{0}, BidderClass::VM});
  }
  return out;
}

namespace {

Outcome empty_outcome(AuctionInstance const &instance)
{
  Outcome out;
  out.allocation  = Allocation(instance.slots(), instance.bidder_count());
  out.slot_prices.assign(instance.slots() + 1, Rational{0});
  out.payments.assign(instance.bidder_count(), Rational{0});
  return out;
}

enum class RankedRule
{
  VCG,
  GSP,
  ByClass
};

// Value-ranked allocation shared by VCG, GSP and MPU; only the price of each
// occupied slot differs.
Outcome run_ranked(AuctionInstance const &instance, RankedRule rule)
{
  Outcome           out = empty_outcome(instance);
  std::size_t const K   = instance.slots();
  if (K == 0)
  {
    return out;
  }
  auto const &ladder       = instance.ladder();
  auto const  participants = ranked_participants(instance);

  // Slot k holds participants[K - k].
  auto at = [&](Slot k) -> Participant const & { return participants[K - k]; };

  if (auto id = at(0).id)
  {
    out.allocation.assign(0, *id);
  }

  // Running Σ_{j<k} v_{π_j}·(x_{j+1} − x_j).
  Rational externality;
  for (Slot k = 1; k <= K; ++k)
  {
    externality += at(k - 1).value * (ladder.ctr(k) - ladder.ctr(k - 1));
    Rational const vcg_price = externality / ladder.ctr(k);
    Rational const gsp_price = at(k - 1).value;

    Participant const &occupant = at(k);
    switch (rule)
    {
    case RankedRule::VCG:
      out.slot_prices[k] = vcg_price;
      break;
    case RankedRule::GSP:
      out.slot_prices[k] = gsp_price;
      break;
    case RankedRule::ByClass:
      out.slot_prices[k] = occupant.cls == BidderClass::UM ? vcg_price : gsp_price;
      break;
    }
    if (occupant.id)
    {
      out.allocation.assign(k, *occupant.id);
      out.payments[*occupant.id] = out.slot_prices[k];
    }
  }
  return out;
}

}  // namespace

Outcome run_vcg(AuctionInstance const &instance)
{
  return run_ranked(instance, RankedRule::VCG);
}

Outcome run_gsp(AuctionInstance const &instance)
{
  return run_ranked(instance, RankedRule::GSP);
}

Outcome run_mpu(AuctionInstance const &instance)
{
  return run_ranked(instance, RankedRule::ByClass);
}

PartialState::PartialState(SlotLadder ladder)
  : ladder_(std::move(ladder))
  , occupants_(ladder_.size() + 1)
  , prices_(ladder_.size() + 1, Rational{0})
  , priced_(ladder_.size() + 1, false)
{
  // The dummy slot has CTR 0, so its price never contributes.
  priced_[0] = true;
}

std::optional<Participant> const &PartialState::occupant(Slot k) const
{
  if (k >= occupants_.size())
  {
    throw ProtocolError("slot " + std::to_string(k) + " out of range");
  }
  return occupants_[k];
}

void PartialState::place(Slot k, Participant participant)
{
  if (k >= occupants_.size())
  {
    throw ProtocolError("slot " + std::to_string(k) + " out of range");
  }
  occupants_[k] = std::move(participant);
}

void PartialState::shift_up(Slot k, Slot top)
{
  if (top >= occupants_.size() || k > top)
  {
    throw ProtocolError("bad shift range");
  }
  for (Slot j = top; j > k; --j)
  {
    occupants_[j] = std::move(occupants_[j - 1]);
  }
  occupants_[k].reset();
}

bool PartialState::is_priced(Slot k) const
{
  return k < priced_.size() && priced_[k];
}

Rational const &PartialState::price(Slot k) const
{
  if (!is_priced(k))
  {
    throw ProtocolError("slot " + std::to_string(k) + " has no price yet");
  }
  return prices_[k];
}

void PartialState::set_price(Slot k, Rational price)
{
  if (k == 0 || k >= prices_.size())
  {
    throw ProtocolError("cannot price slot " + std::to_string(k));
  }
  prices_[k] = std::move(price);
  priced_[k] = true;
}

SlotPriceBreakdown slot_price_breakdown(PartialState const &state, Slot k)
{
  if (k == 0 || k > state.slots())
  {
    throw ProtocolError("cannot price slot " + std::to_string(k));
  }
  auto const &ladder = state.ladder();

  std::optional<Slot> um_slot;
  std::optional<Slot> vm_slot;
  for (Slot j = k; j-- > 0;)
  {
    auto const &occ = state.occupant(j);
    if (!occ)
    {
      throw ProtocolError("slot " + std::to_string(j) + " below slot " + std::to_string(k) +
                          " is unassigned");
    }
    if (occ->cls == BidderClass::UM && !um_slot)
    {
      um_slot = j;
    }
    if (occ->cls == BidderClass::VM && !vm_slot)
    {
      vm_slot = j;
    }
  }

  SlotPriceBreakdown out;
  if (um_slot)
  {
    Slot const   ku = *um_slot;
    auto const  &um = *state.occupant(ku);
    Rational const x_k  = ladder.ctr(k);
    Rational const x_ku = ladder.ctr(ku);
    out.um_term = (state.price(ku) * x_ku + um.value * (x_k - x_ku)) / x_k;
  }
  if (vm_slot)
  {
    out.vm_term = state.occupant(*vm_slot)->value;
  }

  if (!um_slot && !vm_slot)
  {
    out.source = PriceSource::None;
  }
  else if (um_slot && out.um_term > out.vm_term)
  {
    out.source = PriceSource::UM;
  }
  else if (vm_slot)
  {
    out.source = PriceSource::VM;
  }
  else
  {
    out.source = PriceSource::UM;
  }
  return out;
}

Rational slot_price(PartialState const &state, Slot k)
{
  return slot_price_breakdown(state, k).price();
}

Slot best_slot_for_um(Rational const &value, SlotLadder const &ladder,
                      std::span<Rational const> prices, Slot k_bar)
{
  if (k_bar < 1 || k_bar > ladder.size() || prices.size() <= k_bar)
  {
    throw ProtocolError("best slot search needs prices for slots 1.." + std::to_string(k_bar));
  }
  Slot     best         = 1;
  Rational best_utility = um_utility(value, ladder.ctr(1), prices[1]);
  for (Slot k = 2; k <= k_bar; ++k)
  {
    Rational u = um_utility(value, ladder.ctr(k), prices[k]);
    // Strict improvement only: ties stay at the lower slot.
    if (u > best_utility)
    {
      best         = k;
      best_utility = std::move(u);
    }
  }
  return best;
}

Outcome run_mpr(AuctionInstance const &instance)
{
  Outcome           out = empty_outcome(instance);
  std::size_t const K   = instance.slots();
  if (K == 0)
  {
    return out;
  }
  auto const &ladder       = instance.ladder();
  auto const  participants = ranked_participants(instance);

  // participants[0..K-1] are the top K; participants[K] takes the dummy slot.
  std::vector<Participant> vms;
  std::vector<Participant> ums;
  for (std::size_t r = K; r-- > 0;)
  {
    (participants[r].cls == BidderClass::VM ? vms : ums).push_back(participants[r]);
  }

  PartialState state(ladder);
  state.place(0, participants[K]);

  Slot k = 1;
  for (auto const &vm : vms)
  {
    state.place(k++, vm);
  }
  for (Slot j = 1; j <= std::min(vms.size() + 1, K); ++j)
  {
    state.set_price(j, slot_price(state, j));
  }

  std::size_t remaining = ums.size();
  for (auto const &um : ums)
  {
    Slot const k_bar  = K - remaining + 1;
    Slot const chosen = best_slot_for_um(um.value, ladder, state.prices(), k_bar);
    state.shift_up(chosen, k_bar);
    state.place(chosen, um);
    for (Slot j = chosen + 1; j <= std::min(k_bar + 1, K); ++j)
    {
      state.set_price(j, slot_price(state, j));
    }
    --remaining;
  }

  if (auto id = state.occupant(0)->id)
  {
    out.allocation.assign(0, *id);
  }
  for (Slot j = 1; j <= K; ++j)
  {
    out.slot_prices[j] = state.price(j);
    auto const &occ    = state.occupant(j);
    if (occ && occ->id)
    {
      out.allocation.assign(j, *occ->id);
      out.payments[*occ->id] = out.slot_prices[j];
    }
  }
  return out;
}

Outcome run_mechanism(MechanismId mechanism, AuctionInstance const &instance)
{
  switch (mechanism)
  {
  case MechanismId::VCG:
    return run_vcg(instance);
  case MechanismId::GSP:
    return run_gsp(instance);
  case MechanismId::MPU:
    return run_mpu(instance);
  case MechanismId::MPR:
    return run_mpr(instance);
  }
  throw InvalidInput("unknown mechanism");
}

}  // namespace posauction
