#include <doctest.h>

#include <random>

#include "oracle.hpp"
#include "posauction/errors.hpp"
#include "posauction/instances.hpp"
#include "posauction/mechanisms.hpp"

using namespace posauction;

namespace {

Rational r(long n, long d = 1)
{
  return Rational{n, d};
}

AuctionInstance lower_bound_instance(Rational const &eps, BidderType c)
{
  return AuctionInstance(SlotLadder({r(1, 10), r(2, 10)}),
                         {{eps, BidderClass::VM}, {Rational{2} + eps, BidderClass::VM}, c});
}

Participant vm(BidderId id, Rational v)
{
  return Participant{id, std::move(v), BidderClass::VM};
}

Participant um(BidderId id, Rational v)
{
  return Participant{id, std::move(v), BidderClass::UM};
}

}  // namespace

TEST_CASE("mechanism names")
{
  CHECK(parse_mechanism("MPR") == MechanismId::MPR);
  CHECK(parse_mechanism("vcg") == MechanismId::VCG);
  CHECK_THROWS_AS(parse_mechanism("first-price"), ParseError);
}

TEST_CASE("VCG")
{
  auto const out = run_vcg(worked_example_instance());
  CHECK(out.allocation.occupant(4) == 4);
  CHECK(out.payment(4) == r(15, 2));

  AuctionInstance const single(SlotLadder({Rational{1}}), {{Rational{5}, BidderClass::UM}});
  CHECK(run_vcg(single).payment(0) == 0);

  AuctionInstance const pair(SlotLadder({r(2, 10)}),
                             {{Rational{4}, BidderClass::UM}, {Rational{1}, BidderClass::UM}});
  auto const two = run_vcg(pair);
  CHECK(two.allocation.occupant(1) == 0);
  CHECK(two.payment(0) == 1);
  CHECK(two.payment(1) == 0);
  CHECK(two.allocation.occupant(0) == 1);
}

TEST_CASE("property: VCG prices equal the externality computed from scratch")
{
  std::mt19937_64 rng(101);
  for (int iter = 0; iter < 300; ++iter)
  {
    auto const instance = oracle::random_instance(rng, 7, 4, r(1, 2));
    auto const out      = run_vcg(instance);
    for (BidderId i = 0; i < instance.bidder_count(); ++i)
    {
      CHECK(out.payment(i) == oracle::vcg_price_by_externality(instance, i));
    }
  }
}

TEST_CASE("GSP")
{
  auto const out = run_gsp(worked_example_instance());
  CHECK(out.payment(4) == 9);
  CHECK(out.payment(3) == 8);
  CHECK(out.payment(2) == 7);
  CHECK(out.payment(1) == 6);
  CHECK(out.payment(0) == 0);

  Rational const eps{1, 100};
  auto const     case2 = run_gsp(lower_bound_instance(eps, {Rational{4}, BidderClass::VM}));
  CHECK(case2.payment(2) == Rational{2} + eps);
  CHECK(case2.payment(1) == eps);

  AuctionInstance const single(SlotLadder({Rational{1}}), {{Rational{5}, BidderClass::VM}});
  CHECK(run_gsp(single).payment(0) == 0);
}

TEST_CASE("MPU charges by class on the value-ranked allocation")
{
  auto const instance = worked_example_instance();
  auto const out      = run_mpu(instance);
  CHECK(out.allocation == optimal_allocation(instance));
  CHECK(out.payment(1) == 6);
  CHECK(out.payment(2) == 7);
  CHECK(out.payment(3) == 7);
  CHECK(out.payment(4) == r(15, 2));
  CHECK(out.payment(0) == 0);
}

TEST_CASE("slot price")
{
  SlotLadder const ladder({r(1, 10), r(2, 10), r(3, 10), r(4, 10)});

  SUBCASE("VM-only bottom prefix prices at the next-lower value")
  {
    PartialState state(ladder);
    state.place(0, vm(0, 6));
    state.place(1, vm(1, 7));
    state.place(2, vm(2, 8));
    CHECK(slot_price(state, 1) == 6);
    CHECK(slot_price(state, 2) == 7);
    CHECK(slot_price(state, 3) == 8);
  }

  SUBCASE("UM term can dominate")
  {
    PartialState state(ladder);
    state.place(0, vm(0, 6));
    state.place(1, vm(1, 7));
    state.set_price(1, 6);
    state.set_price(2, 7);
    state.place(2, um(3, 9));
    state.place(3, vm(2, 8));
    auto const b = slot_price_breakdown(state, 3);
    CHECK(b.um_term == r(23, 3));
    CHECK(b.vm_term == 7);
    CHECK(b.source == PriceSource::UM);
    CHECK(slot_price(state, 3) == r(23, 3));
    state.set_price(3, r(23, 3));
    CHECK(slot_price(state, 4) == 8);
  }

  SUBCASE("nothing below prices at 0")
  {
    PartialState state(ladder);
    state.place(0, Participant{std::nullopt, Rational{0}, BidderClass::VM});
    CHECK(slot_price(state, 1) == 0);
  }

  SUBCASE("a UM in the dummy slot contributes its value")
  {
    PartialState state(ladder);
    state.place(0, um(0, 5));
    auto const b = slot_price_breakdown(state, 1);
    CHECK(b.um_term == 5);
    CHECK(b.price() == 5);
  }

  SUBCASE("protocol errors")
  {
    PartialState state(ladder);
    CHECK_THROWS_AS(slot_price(state, 1), ProtocolError);
    state.place(0, vm(0, 6));
    CHECK_THROWS_AS(slot_price(state, 2), ProtocolError);
    state.place(1, um(1, 9));
    // Slot 1 holds a UM whose own price is still unknown.
    CHECK_THROWS_AS(slot_price(state, 2), ProtocolError);
    CHECK_THROWS_AS(slot_price(state, 0), ProtocolError);
  }
}

TEST_CASE("best slot for a UM")
{
  SlotLadder const ladder({r(1, 10), r(2, 10), r(3, 10), r(4, 10)});
  std::vector<Rational> const first{0, 6, 7, 8, 0};
  CHECK(best_slot_for_um(9, ladder, first, 3) == 2);
  std::vector<Rational> const second{0, 6, 7, r(23, 3), 8};
  CHECK(best_slot_for_um(10, ladder, second, 4) == 4);
  std::vector<Rational> const flat{0, 5, 5, 5, 5};
  CHECK(best_slot_for_um(5, ladder, flat, 4) == 1);
  CHECK_THROWS_AS(best_slot_for_um(5, ladder, flat, 0), ProtocolError);
}

TEST_CASE("MPR reproduces the worked example")
{
  auto const out = run_mpr(worked_example_instance());
  CHECK(out.allocation.occupant(0) == 0);
  CHECK(out.allocation.occupant(1) == 1);
  CHECK(out.allocation.occupant(2) == 3);
  CHECK(out.allocation.occupant(3) == 2);
  CHECK(out.allocation.occupant(4) == 4);
  CHECK(out.slot_prices == std::vector<Rational>{0, 6, 7, r(23, 3), 8});
  CHECK(out.payment(0) == 0);
  CHECK(out.payment(1) == 6);
  CHECK(out.payment(3) == 7);
  CHECK(out.payment(2) == r(23, 3));
  CHECK(out.payment(4) == 8);
}

TEST_CASE("MPR on the lower-bound geometry")
{
  Rational const eps{1, 100};

  // C = (1, UM): B starts at slot 1 (p1 = ε, p2 = 2 + ε); C takes slot 1
  // and pushes B up. Slot 2 is then priced from C's extension, since the
  // closest VM below slot 2 is A.
  auto const case3 = run_mpr(lower_bound_instance(eps, {Rational{1}, BidderClass::UM}));
  CHECK(case3.allocation.occupant(1) == 2);
  CHECK(case3.allocation.occupant(2) == 1);
  CHECK(case3.allocation.occupant(0) == 0);
  CHECK(case3.slot_price(1) == eps);
  CHECK(case3.slot_price(2) == (Rational{1} + eps) / 2);

  // C = (4, UM): slot 1 is worth 0.1(4 − ε) > 0.2(2 − ε).
  auto const case1 = run_mpr(lower_bound_instance(eps, {Rational{4}, BidderClass::UM}));
  CHECK(case1.allocation.occupant(1) == 2);
  CHECK(case1.allocation.occupant(2) == 1);
}

TEST_CASE("MPR equals VCG bit-exactly on all-UM input")
{
  AuctionInstance const instance(SlotLadder({r(1, 10), r(2, 10), r(3, 10)}),
                                 {{Rational{5}, BidderClass::UM},
                                  {Rational{3}, BidderClass::UM},
                                  {Rational{9}, BidderClass::UM},
                                  {Rational{1}, BidderClass::UM}});
  CHECK(run_mpr(instance) == run_vcg(instance));
}

TEST_CASE("degenerate inputs")
{
  AuctionInstance const no_slots(SlotLadder{}, {{Rational{5}, BidderClass::UM}});
  for (auto m : {MechanismId::VCG, MechanismId::GSP, MechanismId::MPU, MechanismId::MPR})
  {
    auto const out = run_mechanism(m, no_slots);
    CHECK(out.slot_prices.size() == 1);
    CHECK(out.payment(0) == 0);
    CHECK(lsw(no_slots, out.allocation) == 0);
  }

  // n <= K: virtual zero-value VMs fill the gaps and never appear.
  AuctionInstance const sparse(SlotLadder({r(1, 10), r(2, 10), r(3, 10), r(4, 10)}),
                               {{Rational{3}, BidderClass::UM},
                                {Rational{2}, BidderClass::VM},
                                {Rational{5}, BidderClass::UM}});
  for (auto m : {MechanismId::VCG, MechanismId::GSP, MechanismId::MPU, MechanismId::MPR})
  {
    auto const out = run_mechanism(m, sparse);
    int        seated = 0;
    for (Slot k = 1; k <= 4; ++k)
    {
      seated += out.allocation.occupant(k).has_value() ? 1 : 0;
    }
    CHECK(seated == 3);
    CHECK_FALSE(out.allocation.occupant(0).has_value());
    for (BidderId i = 0; i < 3; ++i)
    {
      CHECK(out.payment(i) <= sparse.bidder(i).value);
    }
  }

  // Ties: lower id ranks higher.
  AuctionInstance const tied(SlotLadder({r(1, 10), r(2, 10)}),
                             {{Rational{4}, BidderClass::VM}, {Rational{4}, BidderClass::VM}});
  auto const out = run_gsp(tied);
  CHECK(out.allocation.occupant(2) == 0);
  CHECK(out.allocation.occupant(1) == 1);
  CHECK(run_mpr(tied) == out);
}

TEST_CASE("property: robustness on homogeneous instances")
{
  std::mt19937_64 rng(5);
  for (int iter = 0; iter < 300; ++iter)
  {
    auto const ums = oracle::random_instance(rng, 9, 5, Rational{0});
    CHECK(run_mpr(ums) == run_vcg(ums));
    CHECK(run_mpu(ums) == run_vcg(ums));
    auto const vms = oracle::random_instance(rng, 9, 5, Rational{1});
    CHECK(run_mpr(vms) == run_gsp(vms));
    CHECK(run_mpu(vms) == run_gsp(vms));
  }
}

TEST_CASE("property: MPR prices agree with a bottom-up recomputation on the final allocation")
{
  std::mt19937_64 rng(17);
  for (int iter = 0; iter < 1000; ++iter)
  {
    auto const instance = oracle::random_instance(rng, 6, 3, r(1, 2));
    auto const out      = run_mpr(instance);
    CHECK(out.slot_prices == oracle::slot_prices_from_final(instance, out.allocation));
  }
}

TEST_CASE("property: mechanisms are deterministic and keep payments tied to slot prices")
{
  std::mt19937_64 rng(23);
  for (int iter = 0; iter < 200; ++iter)
  {
    auto const instance = oracle::random_instance(rng, 10, 6, r(1, 3));
    for (auto m : {MechanismId::VCG, MechanismId::GSP, MechanismId::MPU, MechanismId::MPR})
    {
      auto const a = run_mechanism(m, instance);
      CHECK(a == run_mechanism(m, instance));
      for (Slot k = 1; k <= instance.slots(); ++k)
      {
        CHECK(a.slot_price(k).sign() >= 0);
        if (auto id = a.allocation.occupant(k))
        {
          CHECK(a.payment(*id) == a.slot_price(k));
        }
      }
    }
  }
}
