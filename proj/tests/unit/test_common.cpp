#include "doctest.h"

#include "xbarsim/common.hpp"

using namespace xbarsim;

TEST_CASE("fnv1a64 reference values")
{
    CHECK(fnv1a64("") == 0xcbf29ce484222325ULL);
    CHECK(fnv1a64("a") == 0xaf63dc4c8601ec8cULL);
    CHECK(hex64(0xabcULL) == "0000000000000abc");
}

TEST_CASE("ceil_count ignores representation noise")
{
    CHECK(ceil_count(901.0) == 901);
    CHECK(ceil_count(900.0000000000001) == 900);
    CHECK(ceil_count(900.01) == 901);
    CHECK(ceil_count(0.0) == 0);
    CHECK(ceil_count(240.0 / 1e8 * 1e8) == 240);
}

TEST_CASE("Rng is reproducible and in range")
{
    Rng a(42), b(42);
    for (int i = 0; i < 100; ++i) {
        CHECK(a.next() == b.next());
    }
    Rng r(7);
    double sum = 0.0, sq = 0.0;
    const int n = 20000;
    for (int i = 0; i < n; ++i) {
        const double u = r.uniform();
        CHECK(u >= 0.0);
        CHECK(u < 1.0);
        CHECK(r.below(10) < 10);
        const double z = r.normal();
        sum += z;
        sq += z * z;
    }
    CHECK(std::abs(sum / n) < 0.03);
    CHECK(std::abs(sq / n - 1.0) < 0.05);
}

TEST_CASE("shuffle keeps a permutation")
{
    std::vector<int> v{0, 1, 2, 3, 4, 5, 6, 7};
    Rng r(3);
    r.shuffle(v);
    std::vector<int> s = v;
    std::sort(s.begin(), s.end());
    CHECK(s == std::vector<int>{0, 1, 2, 3, 4, 5, 6, 7});
}

TEST_CASE("Matrix indexing is row-major")
{
    Matrix m(2, 3);
    m(1, 2) = 5.0;
    CHECK(m.data[5] == 5.0);
    CHECK(m.row(1)[2] == 5.0);
}
