#include <doctest.h>

#include "properties.hpp"

TEST_CASE("conservation") {
    const properties::Tally t = properties::conservation();
    INFO(t.first_failure);
    CHECK(t.cases > 0);
    CHECK(t.held == t.cases);
}
