#include <doctest.h>

#include "properties.hpp"

TEST_CASE("atomicity") {
    const properties::Tally t = properties::atomicity();
    INFO(t.first_failure);
    CHECK(t.cases > 0);
    CHECK(t.held == t.cases);
}
