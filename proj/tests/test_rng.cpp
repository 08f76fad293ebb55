#include <doctest.h>

#include <cmath>
#include <vector>

#include "popper/rng.hpp"

using namespace popper;

// Reference blocks from the Random123 Philox4x64-10 definition
// (cross-checked against an independent implementation).
TEST_CASE("philox4x64-10 known-answer blocks") {
    const Philox4x64 g0(0);
    CHECK(g0.block(0) == Philox4x64::Block{0x16554d9eca36314cULL, 0xdb20fe9d672d0fdcULL,
                                           0xd7e772cee186176bULL, 0x7e68b68aec7ba23bULL});
    CHECK(g0.block(1) == Philox4x64::Block{0x02f4ba6408e4d89bULL, 0x3dd62b0b9ca8c5b2ULL,
                                           0x1c8667a55d902e79ULL, 0x907d7a052fd5b4dcULL});
    CHECK(g0.block(2) == Philox4x64::Block{0x809bf322883987c3ULL, 0x471128b9e807f7ddULL,
                                           0xf250ba0dbec065b7ULL, 0xfc6ed66767a457bcULL});
    const Philox4x64 g1(1);
    CHECK(g1.block(1) == Philox4x64::Block{0x4db6a27b756282dfULL, 0xd944fa03babe0e2fULL,
                                           0x27f872e577060d32ULL, 0x07f697696a0482a2ULL});
}

TEST_CASE("distinct seeds and streams decorrelate") {
    CHECK(Philox4x64(0).block(0) != Philox4x64(1).block(0));
    CHECK(Philox4x64(7, 0).block(3) != Philox4x64(7, 1).block(3));
}

TEST_CASE("uniform doubles live in [0,1) and replay exactly") {
    CounterRng a(42), b(42);
    for (int i = 0; i < 1000; ++i) {
        const double x = a.next_double();
        CHECK(x >= 0.0);
        CHECK(x < 1.0);
        CHECK(x == b.next_double());
    }
}

TEST_CASE("normals have roughly unit variance and replay exactly") {
    CounterRng a(9), b(9);
    const int n = 200000;
    double sum = 0.0, sum2 = 0.0;
    for (int i = 0; i < n; ++i) {
        const double x = a.next_normal();
        CHECK(x == b.next_normal());
        sum += x;
        sum2 += x * x;
    }
    const double mean = sum / n;
    const double var = sum2 / n - mean * mean;
    CHECK(std::abs(mean) < 0.01);
    CHECK(std::abs(var - 1.0) < 0.02);
}
