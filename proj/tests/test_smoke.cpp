#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>
#include "orbitree/scalar.hpp"
TEST_CASE("scalar basic") {
    using namespace orbitree;
    Scalar a(Rat(1, 3)), b(Rat(2, 5));
    CHECK((a + b) == Scalar(Rat(11, 15)));
}
