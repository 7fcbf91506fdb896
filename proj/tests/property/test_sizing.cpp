#include <doctest.h>

#include "properties.hpp"

TEST_CASE("sizing") {
    const properties::Tally t = properties::sizing_oracle();
    INFO(t.first_failure);
    CHECK(t.cases > 0);
    CHECK(t.held == t.cases);
}
