#include "doctest.h"
#include "reference.hpp"

#include <qal/dynamics.hpp>
#include <qal/oracle.hpp>

#include <cstdlib>

using namespace qal;

namespace {

// sign of P^3_c(0) = (c^2 + c)^2 + c
Sign p3_sign(const DyadicInterval& c, const Precision& p) { return sign_of(critical_orbit(c, 3, p).steps[3]); }

ParamOracle s3_oracle() {
    ParamFacts f;
    f.superstable_period = 3;
    return oracle_bisect(p3_sign, DyadicInterval(Dyadic::ratio(-15, 3), Dyadic::ratio(-7, 2)), f, "s3");
}

const ref::Real s3_ref = ref::bisect([](const ref::Real& c) { return ref::iterate(c, 3); }, ref::Real(-1.875),
                                     ref::Real(-1.75));

void check_contract(ParamOracle& o, const ref::Real& c, int max_m) {
    for (int m = 1; m <= max_m; ++m) {
        Dyadic a = o.query(m);
        REQUIRE(a.in_D(m));
        ref::Real err = boost::multiprecision::abs(ref::to_real(a) - c);
        REQUIRE(err <= ref::to_real(dy_pow2(-(m - 1))));
    }
}

}  // namespace

TEST_CASE("exact oracle returns the nearest dyadic") {
    ParamOracle o = oracle_exact(Dyadic::ratio(-7, 2));
    CHECK(o.query(2) == Dyadic::ratio(-7, 2));
    CHECK((o.query(1) - Dyadic::ratio(-7, 2)).abs() == Dyadic::ratio(1, 2));
    CHECK(o.query(64) == Dyadic::ratio(-7, 2));
    CHECK(o.is_exact());
    CHECK(o.enclose(8).is_point());
    check_contract(o, ref::Real(-1.75), 128);
}

TEST_CASE("bisection oracle for the superstable period-3 centre") {
    ParamOracle o = s3_oracle();
    CHECK(o.query(4) == Dyadic::ratio(-28, 4));
    check_contract(o, s3_ref, 128);
    CHECK_FALSE(o.is_exact());
    CHECK(o.facts().superstable_period == 3);
    CHECK(ref::to_real(o.query(90)).str(20).substr(0, 18) == "-1.754877666246692");
}

TEST_CASE("adversarial wrapper stays admissible and hides exactness") {
    for (int k = 0; k < 2; ++k) {
        ParamOracle inner = k == 0 ? oracle_exact(Dyadic::ratio(-7, 2)) : s3_oracle();
        ref::Real c = k == 0 ? ref::Real(-1.75) : s3_ref;
        ParamOracle adv = oracle_adversarial(inner);
        CHECK_FALSE(adv.is_exact());
        check_contract(adv, c, 128);
        int moved = 0;
        for (int m = 4; m <= 60; ++m) {
            if (adv.query(m) != inner.fresh().query(m)) ++moved;
        }
        CHECK(moved > 0);
        DyadicInterval e = adv.enclose(30);
        CHECK(ref::in_interval(c, e));
    }
}

TEST_CASE("queries are deterministic and charged per call") {
    ParamOracle o = s3_oracle();
    Dyadic a = o.query(40);
    Dyadic b = o.query(40);
    CHECK(a == b);
    ParamOracle f = o.fresh();
    CHECK(f.query(40) == a);
    CHECK(f.ledger().total_units() == 40);
    CHECK(o.ledger().total_units() == 80);
    CHECK(o.ledger().max_precision() == 40);
    CHECK(o.ledger().report().query_count == 2);

    QueryLedger side;
    o.query(10, side);
    o.query(20, side);
    CHECK(side.total_units() == 30);
    CHECK(ledger_report(side) == LedgerSummary{30, 20, 2});
    CHECK(o.ledger().total_units() == 80);
}

TEST_CASE("exact enclosure is charged at the bit length of the value") {
    ParamOracle o = oracle_exact(Dyadic::ratio(-7, 2) + dy_pow2(-20));
    DyadicInterval e = o.enclose(4);
    CHECK(e.is_point());
    CHECK(o.ledger().max_precision() == 20);
}

TEST_CASE("bisection detects a dyadic root") {
    // P^2_c(0) = c^2 + c vanishes at c = -1
    auto pred = [](const DyadicInterval& c, const Precision& p) { return sign_of(critical_orbit(c, 2, p).steps[2]); };
    ParamOracle o = oracle_bisect(pred, DyadicInterval(Dyadic::ratio(-5, 2), Dyadic::ratio(-3, 2)));
    CHECK(o.query(30) == Dyadic(-1));
    CHECK(o.is_exact());
    CHECK(*o.facts().exact == Dyadic(-1));
}

TEST_CASE("bisection without a sign change is a fault") {
    CHECK_THROWS_AS(oracle_bisect(p3_sign, DyadicInterval(Dyadic::ratio(-3, 1), Dyadic::ratio(-1, 1))), OracleFault);
}

TEST_CASE("range check") {
    ParamOracle bad = oracle_exact(Dyadic(1));
    CHECK_THROWS_AS(require_in_range(bad), OutOfRange);
    ParamOracle low = oracle_exact(Dyadic(-3));
    CHECK_THROWS_AS(require_in_range(low), OutOfRange);
    ParamOracle ok = oracle_exact(Dyadic::ratio(1, 2));
    CHECK_NOTHROW(require_in_range(ok));
}

TEST_CASE("refiner oracle enforces its width contract") {
    auto fn = [](int bits) {
        Dyadic a = dy_round(Dyadic::ratio(-3, 2), bits + 2, Rounding::down);
        return DyadicInterval(a, a + dy_pow2(-bits));
    };
    ParamOracle o = oracle_refiner(fn, {}, "r");
    CHECK(o.query(10).in_D(10));
    auto bad = [](int) { return DyadicInterval(Dyadic(-1), Dyadic(0)); };
    ParamOracle b = oracle_refiner(bad, {}, "bad");
    CHECK_THROWS_AS(b.query(5), OracleFault);
}

TEST_CASE("precision cap from the environment") {
    setenv("QAL_MAX_PRECISION", "512", 1);
    CHECK(max_precision_cap() == 512);
    setenv("QAL_MAX_PRECISION", "junk", 1);
    CHECK(max_precision_cap(77) == 77);
    unsetenv("QAL_MAX_PRECISION");
    CHECK(max_precision_cap() == 4096);
}
