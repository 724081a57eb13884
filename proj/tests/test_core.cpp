#include <doctest.h>

#include <algorithm>
#include <random>

#include "oracle.hpp"
#include "posauction/core.hpp"
#include "posauction/errors.hpp"
#include "posauction/instances.hpp"
#include "posauction/mechanisms.hpp"

using namespace posauction;

namespace {

Rational r(long n, long d = 1)
{
  return Rational{n, d};
}

Allocation worked_example_mpr_allocation()
{
  // B@1, D@2, C@3, E@4, A in the dummy slot.
  Allocation a(4, 5);
  a.assign(0, 0);
  a.assign(1, 1);
  a.assign(2, 3);
  a.assign(3, 2);
  a.assign(4, 4);
  return a;
}

}  // namespace

TEST_CASE("worked example fixture is recovered from the stated prices and utilities")
{
  // VM prices before any UM is placed are the VM values themselves:
  // p1 = v_A, p2 = v_B, p3 = v_C.
  Rational const vA = 6, vB = 7, vC = 8;

  // D's utilities at slots 1, 2 against prices 6, 7: x1(vD−6) = 3/10 and
  // x2(vD−7) = 4/10. E's against the same prices: x1(vE−6) = 4/10 and
  // x2(vE−7) = 6/10. Dividing pairwise: (vE−6) = 4/3 (vD−6) and
  // (vE−7) = 3/2 (vD−7). Solve the resulting linear equation for vD.
  //   6 + 4/3 (vD − 6) = 7 + 3/2 (vD − 7)  ⇒  (4/3 − 3/2) vD = 7 − 21/2 − 6 + 8
  Rational const coeff = r(4, 3) - r(3, 2);
  Rational const rhs   = Rational{7} - r(21, 2) - Rational{6} + Rational{8};
  Rational const vD    = rhs / coeff;
  Rational const vE    = Rational{6} + r(4, 3) * (vD - Rational{6});
  CHECK(vD == 9);
  CHECK(vE == 10);

  Rational const x1 = r(3, 10) / (vD - vA);
  Rational const x2 = r(4, 10) / (vD - vB);
  Rational const x3 = r(3, 10) / (vD - vC);
  Rational const x4 = r(8, 10) / (vE - Rational{8});
  CHECK(x1 == r(1, 10));
  CHECK(x2 == r(2, 10));
  CHECK(x3 == r(3, 10));
  CHECK(x4 == r(4, 10));
  // Remaining stated figures must be consistent: E at slot 3 against 23/3.
  CHECK(x3 * (vE - r(23, 3)) == r(7, 10));

  auto const fixture = worked_example_instance();
  CHECK(fixture.ladder().ctrs() == std::vector<Rational>{x1, x2, x3, x4});
  std::vector<Rational> values;
  for (auto const &b : fixture.bidders())
  {
    values.push_back(b.value);
  }
  CHECK(values == std::vector<Rational>{vA, vB, vC, vD, vE});
}

TEST_CASE("slot ladder validation")
{
  CHECK_NOTHROW(SlotLadder({r(1, 10), r(1, 10), r(2, 10)}));
  CHECK_THROWS_AS(SlotLadder({r(2, 10), r(1, 10)}), InvalidInput);
  CHECK_THROWS_AS(SlotLadder({Rational{0}, r(1, 10)}), InvalidInput);
  SlotLadder const ladder({r(1, 10), r(3, 10)});
  CHECK(ladder.ctr(0) == 0);
  CHECK(ladder.ctr(2) == r(3, 10));
  CHECK_THROWS_AS(ladder.ctr(3), InvalidInput);
  CHECK(ladder.strictly_increasing());
  CHECK_FALSE(SlotLadder({r(1, 10), r(1, 10)}).strictly_increasing());
}

TEST_CASE("auction instance invariants")
{
  SlotLadder const ladder({r(1, 2)});
  CHECK_THROWS_AS(AuctionInstance(ladder, {}), InvalidInput);
  CHECK_THROWS_AS(AuctionInstance(ladder, {{Rational{0}, BidderClass::UM}}), InvalidInput);
  AuctionInstance const tied(ladder, {{Rational{3}, BidderClass::UM}, {Rational{3}, BidderClass::VM}});
  CHECK_FALSE(tied.strict());
  CHECK(worked_example_instance().strict());
}

TEST_CASE("allocation keeps both maps consistent")
{
  Allocation a(3, 2);
  a.assign(2, 0);
  CHECK(a.slot_of(0) == 2);
  a.assign(3, 0);
  CHECK(a.slot_of(0) == 3);
  CHECK_FALSE(a.occupant(2).has_value());
  a.assign(3, 1);
  CHECK(a.occupant(3) == 1);
  CHECK_FALSE(a.slot_of(0).has_value());
  CHECK_THROWS_AS(a.assign(4, 0), InvalidInput);
  CHECK_THROWS_AS(a.assign(1, 7), InvalidInput);
}

TEST_CASE("lsw")
{
  auto const instance = worked_example_instance();
  CHECK(lsw(instance, worked_example_mpr_allocation()) == r(89, 10));
  CHECK(lsw(instance, Allocation(4, 5)) == 0);

  AuctionInstance const single(SlotLadder({Rational{1}}), {{Rational{5}, BidderClass::UM}});
  Allocation            a(1, 1);
  a.assign(1, 0);
  CHECK(lsw(single, a) == 5);

  Allocation foreign(4, 9);
  foreign.assign(1, 8);
  CHECK_THROWS_AS(lsw(instance, foreign), InvalidInput);
}

TEST_CASE("optimal allocation ranks by value")
{
  auto const instance = worked_example_instance();
  auto const opt      = optimal_allocation(instance);
  CHECK(opt.occupant(4) == 4);
  CHECK(opt.occupant(3) == 3);
  CHECK(opt.occupant(2) == 2);
  CHECK(opt.occupant(1) == 1);
  CHECK(opt.occupant(0) == 0);
  CHECK(lsw(instance, opt) == 9);
  CHECK(oracle::brute_force_max_lsw(instance) == 9);

  AuctionInstance const single(SlotLadder({Rational{1}}), {{Rational{5}, BidderClass::UM}});
  CHECK(optimal_allocation(single).occupant(1) == 0);

  Rational const        eps{1, 100};
  AuctionInstance const case1(SlotLadder({r(1, 10), r(2, 10)}),
                              {{eps, BidderClass::VM},
                               {Rational{2} + eps, BidderClass::VM},
                               {Rational{4}, BidderClass::UM}});
  auto const opt1 = optimal_allocation(case1);
  CHECK(opt1.occupant(2) == 2);
  CHECK(opt1.occupant(1) == 1);
  CHECK(opt1.occupant(0) == 0);
  CHECK(lsw(case1, opt1) == r(2, 10) * 4 + r(1, 10) * (Rational{2} + eps));
}

TEST_CASE("property: optimal allocation matches exhaustive search (n <= 7, K <= 4)")
{
  std::mt19937_64 rng(7);
  for (int iter = 0; iter < 400; ++iter)
  {
    auto const instance = oracle::random_instance(rng, 7, 4, r(1, 2));
    CHECK(lsw(instance, optimal_allocation(instance)) == oracle::brute_force_max_lsw(instance));
  }
}

TEST_CASE("um utility")
{
  CHECK(um_utility(9, r(2, 10), 7) == r(4, 10));
  CHECK(um_utility(10, r(3, 10), r(23, 3)) == r(7, 10));
  CHECK(um_utility(42, 0, 3) == 0);
}

TEST_CASE("property: um utility is increasing in value and decreasing in price")
{
  std::mt19937_64 rng(11);
  for (int iter = 0; iter < 1000; ++iter)
  {
    Rational const ctr{static_cast<long>(rng() % 1000) + 1, 1000};
    Rational const v{static_cast<long>(rng() % 5000) + 1, 100};
    Rational const p{static_cast<long>(rng() % 5000), 100};
    Rational const bump{static_cast<long>(rng() % 100) + 1, 100};
    CHECK(um_utility(v + bump, ctr, p) > um_utility(v, ctr, p));
    CHECK(um_utility(v, ctr, p + bump) < um_utility(v, ctr, p));
  }
}

TEST_CASE("vm preference")
{
  auto const a = vm_preference(8, r(3, 10), r(23, 3));
  CHECK(a.feasible);
  CHECK(a.obtained_value == r(24, 10));
  CHECK(a.total_payment == r(23, 10));

  Rational const eps{1, 1000};
  auto const     b = vm_preference(1, r(2, 10), Rational{2} + eps);
  CHECK_FALSE(b.feasible);
  CHECK(b.obtained_value == r(2, 10));
  CHECK(b.total_payment == r(4, 10) + r(2, 10) * eps);

  auto const c = vm_preference(5, 0, 0);
  CHECK(c.feasible);
  CHECK(c.obtained_value == 0);
  CHECK(c.total_payment == 0);

  // Feasible beats infeasible even with less value; lower payment breaks ties.
  CHECK(VmPreference{true, 1, 1} > VmPreference{false, 5, 0});
  CHECK(VmPreference{true, 2, 1} > VmPreference{true, 1, 0});
  CHECK(VmPreference{true, 2, 1} > VmPreference{true, 2, 3});
}

TEST_CASE("property: vm preference is a transitive total order")
{
  std::mt19937_64           rng(3);
  std::vector<VmPreference> prefs;
  for (int i = 0; i < 60; ++i)
  {
    prefs.push_back(VmPreference{rng() % 2 == 0, Rational{static_cast<long>(rng() % 4)},
                                 Rational{static_cast<long>(rng() % 4)}});
  }
  for (auto const &a : prefs)
  {
    for (auto const &b : prefs)
    {
      auto const ab = a <=> b;
      auto const ba = b <=> a;
      // Antisymmetry and totality.
      CHECK((ab < 0) == (ba > 0));
      CHECK((ab == 0) == (a == b));
      for (auto const &c : prefs)
      {
        if (a < b && b < c)
        {
          CHECK(a < c);
        }
      }
    }
  }
}

TEST_CASE("marginal payment increase")
{
  auto const instance = worked_example_instance();
  Outcome    outcome;
  outcome.allocation  = worked_example_mpr_allocation();
  outcome.slot_prices = {0, 6, 7, r(23, 3), 8};
  outcome.payments    = {0, 6, r(23, 3), 7, 8};

  CHECK(marginal_payment_increase(outcome, instance, 2, 3) == 9);
  CHECK(marginal_payment_increase(outcome, instance, 2, 4) == 9);
  CHECK_THROWS_AS(marginal_payment_increase(outcome, instance, 3, 3), InvalidInput);
  CHECK_THROWS_AS(marginal_payment_increase(outcome, instance, 0, 1), InvalidInput);
  CHECK_THROWS_AS(marginal_payment_increase(outcome, instance, 1, 5), InvalidInput);

  AuctionInstance const flat(SlotLadder({r(1, 10), r(2, 10)}),
                             {{Rational{1}, BidderClass::VM}, {Rational{2}, BidderClass::VM}});
  Outcome zero;
  zero.allocation  = Allocation(2, 2);
  zero.slot_prices = {0, 0, 0};
  zero.payments    = {0, 0};
  CHECK(marginal_payment_increase(zero, flat, 1, 2) == 0);

  AuctionInstance const tied(SlotLadder({r(1, 10), r(1, 10)}),
                             {{Rational{1}, BidderClass::VM}, {Rational{2}, BidderClass::VM}});
  CHECK_THROWS_AS(marginal_payment_increase(zero, tied, 1, 2), DegeneratePair);
}

TEST_CASE("bidder class names")
{
  CHECK(parse_bidder_class("um") == BidderClass::UM);
  CHECK(parse_bidder_class("VM") == BidderClass::VM);
  CHECK_THROWS_AS(parse_bidder_class("XM"), ParseError);
  CHECK(to_string(BidderClass::VM) == "VM");
}
