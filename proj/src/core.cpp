#include "posauction/core.hpp"

#include <algorithm>
#include <numeric>
#include <set>

#include "posauction/errors.hpp"

namespace posauction {

std::string_view to_string(BidderClass cls)
{
  return cls == BidderClass::UM ? "UM" : "VM";
}

BidderClass parse_bidder_class(std::string_view text)
{
  std::string upper(text);
  std::transform(upper.begin(), upper.end(), upper.begin(),
                 [](unsigned char c) { return static_cast<char>(std::toupper(c)); });
  if (upper == "UM")
  {
    return BidderClass::UM;
  }
  if (upper == "VM")
  {
    return BidderClass::VM;
  }
  throw ParseError("unknown bidder class \"" + std::string(text) + "\" (expected UM or VM)");
}

SlotLadder::SlotLadder(std::vector<Rational> ctrs)
  : ctrs_(std::move(ctrs))
{
  for (std::size_t k = 0; k < ctrs_.size(); ++k)
  {
    if (ctrs_[k].sign() <= 0)
    {
      throw InvalidInput("CTR of slot " + std::to_string(k + 1) + " must be positive, got " +
                         ctrs_[k].str());
    }
    if (k > 0 && ctrs_[k] < ctrs_[k - 1])
    {
      throw InvalidInput("CTRs must be non-decreasing bottom-up: slot " + std::to_string(k + 1) +
                         " (" + ctrs_[k].str() + ") is below slot " + std::to_string(k) + " (" +
                         ctrs_[k - 1].str() + ")");
    }
  }
}

Rational const &SlotLadder::ctr(Slot k) const
{
  static Rational const zero{0};
  if (k == 0)
  {
    return zero;
  }
  if (k > ctrs_.size())
  {
    throw InvalidInput("slot " + std::to_string(k) + " out of range");
  }
  return ctrs_[k - 1];
}

bool SlotLadder::strictly_increasing() const
{
  return std::adjacent_find(ctrs_.begin(), ctrs_.end(), [](auto const &a, auto const &b) {
           return !(a < b);
         }) == ctrs_.end();
}

AuctionInstance::AuctionInstance(SlotLadder ladder, std::vector<BidderType> bidders,
                                 std::optional<std::uint64_t> seed)
  : ladder_(std::move(ladder))
  , bidders_(std::move(bidders))
  , seed_(seed)
{
  if (bidders_.empty())
  {
    throw InvalidInput("an auction instance needs at least one bidder");
  }
  std::set<Rational> seen;
  for (std::size_t i = 0; i < bidders_.size(); ++i)
  {
    if (bidders_[i].value.sign() <= 0)
    {
      throw InvalidInput("value of bidder " + std::to_string(i) + " must be positive, got " +
                         bidders_[i].value.str());
    }
    if (!seen.insert(bidders_[i].value).second)
    {
      strict_ = false;
    }
  }
}

BidderType const &AuctionInstance::bidder(BidderId id) const
{
  if (id >= bidders_.size())
  {
    throw InvalidInput("unknown bidder id " + std::to_string(id));
  }
  return bidders_[id];
}

bool AuctionInstance::all_of_class(BidderClass cls) const
{
  return std::all_of(bidders_.begin(), bidders_.end(),
                     [cls](BidderType const &b) { return b.cls == cls; });
}

AuctionInstance AuctionInstance::with_bidder(BidderId id, BidderType type) const
{
  auto bidders = bidders_;
  if (id >= bidders.size())
  {
    throw InvalidInput("unknown bidder id " + std::to_string(id));
  }
  bidders[id] = std::move(type);
  return AuctionInstance(ladder_, std::move(bidders), seed_);
}

Allocation::Allocation(std::size_t slots, std::size_t bidders)
  : by_slot_(slots + 1)
  , by_bidder_(bidders)
{}

std::optional<BidderId> Allocation::occupant(Slot k) const
{
  if (k >= by_slot_.size())
  {
    throw InvalidInput("slot " + std::to_string(k) + " out of range");
  }
  return by_slot_[k];
}

std::optional<Slot> Allocation::slot_of(BidderId id) const
{
  if (id >= by_bidder_.size())
  {
    throw InvalidInput("unknown bidder id " + std::to_string(id));
  }
  return by_bidder_[id];
}

void Allocation::assign(Slot k, BidderId id)
{
  if (k >= by_slot_.size())
  {
    throw InvalidInput("slot " + std::to_string(k) + " out of range");
  }
  if (id >= by_bidder_.size())
  {
    throw InvalidInput("unknown bidder id " + std::to_string(id));
  }
  clear(k);
  if (auto previous = by_bidder_[id])
  {
    by_slot_[*previous].reset();
  }
  by_slot_[k]    = id;
  by_bidder_[id] = k;
}

void Allocation::clear(Slot k)
{
  if (k >= by_slot_.size())
  {
    throw InvalidInput("slot " + std::to_string(k) + " out of range");
  }
  if (auto old = by_slot_[k])
  {
    by_bidder_[*old].reset();
    by_slot_[k].reset();
  }
}

Rational const &Outcome::slot_price(Slot k) const
{
  if (k >= slot_prices.size())
  {
    throw InvalidInput("slot " + std::to_string(k) + " out of range");
  }
  return slot_prices[k];
}

Rational const &Outcome::payment(BidderId id) const
{
  if (id >= payments.size())
  {
    throw InvalidInput("unknown bidder id " + std::to_string(id));
  }
  return payments[id];
}

std::strong_ordering operator<=>(VmPreference const &lhs, VmPreference const &rhs)
{
  if (lhs.feasible != rhs.feasible)
  {
    return lhs.feasible ? std::strong_ordering::greater : std::strong_ordering::less;
  }
  if (auto c = lhs.obtained_value <=> rhs.obtained_value; c != 0)
  {
    return c;
  }
  // Lower payment is better.
  return rhs.total_payment <=> lhs.total_payment;
}

Rational lsw(AuctionInstance const &instance, Allocation const &allocation)
{
  Rational total;
  for (Slot k = 1; k <= allocation.slots(); ++k)
  {
    if (auto id = allocation.occupant(k))
    {
      total += instance.bidder(*id).value * instance.ladder().ctr(k);
    }
  }
  return total;
}

std::vector<BidderId> rank_by_value(AuctionInstance const &instance)
{
  std::vector<BidderId> order(instance.bidder_count());
  std::iota(order.begin(), order.end(), BidderId{0});
  auto const &bidders = instance.bidders();
  std::stable_sort(order.begin(), order.end(), [&](BidderId a, BidderId b) {
    return bidders[a].value > bidders[b].value;
  });
  return order;
}

Allocation optimal_allocation(AuctionInstance const &instance)
{
  std::size_t const K = instance.slots();
  Allocation        allocation(K, instance.bidder_count());
  auto const        ranked = rank_by_value(instance);
  for (std::size_t r = 0; r < ranked.size() && r <= K; ++r)
  {
    allocation.assign(K - r, ranked[r]);
  }
  return allocation;
}

Rational um_utility(Rational const &value, Rational const &ctr, Rational const &price)
{
  return ctr * (value - price);
}

VmPreference vm_preference(Rational const &true_value, Rational const &ctr, Rational const &price)
{
  return VmPreference{price <= true_value, true_value * ctr, price * ctr};
}

Rational marginal_payment_increase(Outcome const &outcome, AuctionInstance const &instance,
                                   Slot k, Slot k_prime)
{
  std::size_t const K = instance.slots();
  if (k < 1 || k >= k_prime || k_prime > K)
  {
    throw InvalidInput("marginal payment increase needs 1 <= k < k' <= K, got k=" +
                       std::to_string(k) + ", k'=" + std::to_string(k_prime));
  }
  auto const &ladder = instance.ladder();
  if (ladder.ctr(k) == ladder.ctr(k_prime))
  {
    throw DegeneratePair("slots " + std::to_string(k) + " and " + std::to_string(k_prime) +
                         " share CTR " + ladder.ctr(k).str());
  }
  return (outcome.slot_price(k_prime) * ladder.ctr(k_prime) -
          outcome.slot_price(k) * ladder.ctr(k)) /
         (ladder.ctr(k_prime) - ladder.ctr(k));
}

}  // namespace posauction
