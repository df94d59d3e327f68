#include "rumour/rng.hpp"

#include <doctest.h>

#include <stdexcept>

using namespace rumour;

// Reference values come from a separate Python transcription of splitmix64
// and xoshiro256++ (tools/rng_vectors.py).

TEST_CASE("splitmix64 matches the published first output for seed 0")
{
    SplitMix64 sm(0);
    CHECK(sm.next() == 0xe220a8397b1dcdafULL);
}

TEST_CASE("xoshiro256++ seeded through splitmix64")
{
    struct Vec {
        std::uint64_t seed;
        std::uint64_t out[4];
    };
    const Vec vecs[] = {
        {0, {0x53175d61490b23dfULL, 0x61da6f3dc380d507ULL, 0x5c0fdf91ec9a7bfcULL, 0x02eebf8c3bbe5e1aULL}},
        {1, {0xcfc5d07f6f03c29bULL, 0xbf424132963fe08dULL, 0x19a37d5757aaf520ULL, 0xbf08119f05cd56d6ULL}},
        {0xdeadbeef, {0x0c520eb8fea98edeULL, 0x2b74a6338b80e0e2ULL, 0xbe238770c3795322ULL, 0x5f235f98a244ea97ULL}},
    };
    for (const auto& v : vecs) {
        Xoshiro256pp g(v.seed);
        for (auto expected : v.out)
            CHECK(g.next() == expected);
    }
}

TEST_CASE("derive_key vectors")
{
    CHECK(derive_key(1, 0) == 0x9e0160293a33aaf7ULL);
    CHECK(derive_key(1, 7) == 0x0524257c04fcf117ULL);
    CHECK(derive_key(0xdeadbeef, 123456) == 0x1fd45f24d92dc1f7ULL);
    CHECK(derive_key(1, 0) != derive_key(0, 1));
}

TEST_CASE("slot uniforms")
{
    SlotStream s(derive_key(42, 3));
    CHECK(s.uniform(0) == 0x1.8e2af4a1a7dfap-2);
    CHECK(s.uniform(2) == 0x1.a71e93333e827p-1);  // slot 1 skipped, still consumed
    CHECK(s.uniform(2) == 0x1.a71e93333e827p-1);

    SlotStream t(derive_key(42, 3));
    t.uniform(0);
    CHECK(t.uniform(1) == 0x1.1532da06f9840p-7);
    CHECK_THROWS_AS(t.uniform(0), std::logic_error);
}

TEST_CASE("unit mapping stays inside the open interval")
{
    CHECK(to_unit_open(0) == 0x1p-54);
    CHECK(to_unit_open(0x7ff) == 0x1p-54);
    CHECK(to_unit_open(~std::uint64_t{0}) == 1.0 - 0x1p-53);
    CHECK(to_unit_open(std::uint64_t{1} << 63) == 0.5);
}
