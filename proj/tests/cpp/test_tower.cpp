#include "doctest.h"

#include "carrousel/tower.hpp"

using namespace carrousel;

TEST_CASE("rational arithmetic and zero test") {
    Scalar a(Rat(1, 3)), b(Rat(2, 5));
    CHECK((a + b).to_rational() == Rat(11, 15));
    CHECK((a * b).to_rational() == Rat(2, 15));
    CHECK((a - a).is_zero());
    CHECK(a.inv().to_rational() == Rat(3));
}

TEST_CASE("extend by v^2+1 around +i") {
    UPoly def{Scalar(1), Scalar(0), Scalar(1)};  // v^2 + 1
    QBox box(Rat(-1, 4), Rat(1, 4), Rat(1, 2), Rat(3, 2));
    Scalar i = Tower::instance().root_in_box(def, box);
    CHECK((i * i + Scalar(1)).is_zero());
    CHECK_FALSE(i.is_zero());
    auto e = i.enclosure(30);
    CHECK(e.im_lo > 0);  // selected +i, not -i
    // 1/i == -i
    CHECK((i.inv() + i).is_zero());
}

TEST_CASE("extend by v^2-2 around sqrt2") {
    UPoly def{Scalar(-2), Scalar(0), Scalar(1)};
    QBox box(Rat(1), Rat(2), Rat(-1, 4), Rat(1, 4));
    Scalar r = Tower::instance().root_in_box(def, box);
    CHECK((r * r - Scalar(2)).is_zero());
    CHECK_FALSE((r - Scalar(1)).is_zero());
    auto e = r.enclosure(40);
    CHECK(e.re_lo > Rat(1414, 1001));
    CHECK(e.re_hi < Rat(1415, 1000));
}

TEST_CASE("cube roots of unity satisfy 1+z+z^2=0") {
    // v^3 - 1 with box around exp(2 pi i/3): rational root 1 is split off
    UPoly def{Scalar(-1), Scalar(0), Scalar(0), Scalar(1)};
    QBox box(Rat(-1), Rat(0), Rat(1, 4), Rat(3, 2));
    Scalar z = Tower::instance().root_in_box(def, box);
    CHECK((Scalar(1) + z + z * z).is_zero());
    CHECK((z * z * z - Scalar(1)).is_zero());
}

TEST_CASE("all_roots reports multiplicity and field ops") {
    // (v-1)^2 (v+2)
    UPoly p{Scalar(2), Scalar(-3), Scalar(0), Scalar(1)};
    auto roots = Tower::instance().all_roots(p);
    CHECK(roots.size() == 2);
    int m1 = 0, m2 = 0;
    for (auto& r : roots) {
        if ((r.value - Scalar(1)).is_zero()) m1 = r.multiplicity;
        if ((r.value + Scalar(2)).is_zero()) m2 = r.multiplicity;
    }
    CHECK(m1 == 2);
    CHECK(m2 == 1);
}

TEST_CASE("tower arithmetic properties") {
    Tower& T = Tower::instance();
    Scalar i = T.i();
    UPoly def{Scalar(-2), Scalar(0), Scalar(1)};
    QBox box(Rat(1), Rat(2), Rat(-1, 4), Rat(1, 4));
    Scalar s2 = T.root_in_box(def, box);
    Scalar a = i + s2, b = s2 * Scalar(Rat(1, 2)), c = i * s2 - Scalar(3);
    CHECK((((a + b) + c) - (a + (b + c))).is_zero());
    CHECK(((a * b) * c == a * (b * c)));
    CHECK((a * a.inv() - Scalar(1)).is_zero());
    // is_zero agrees with numeric enclosure
    Scalar nz = a * c + b;
    auto e = nz.enclosure(60);
    bool excludes_zero = !e.contains_zero();
    CHECK(excludes_zero == !nz.is_zero());
}

TEST_CASE("root of unity cache and powers") {
    Scalar z6 = Tower::instance().root_of_unity(6);
    CHECK((z6.pow(6) - Scalar(1)).is_zero());
    CHECK_FALSE((z6.pow(3) - Scalar(1)).is_zero());
    CHECK((z6.pow(3) + Scalar(1)).is_zero());
}
