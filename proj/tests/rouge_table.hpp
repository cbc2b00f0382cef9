#pragma once

#include <array>

namespace essumm::testing {

struct RougeCase {
    const char* hyp;
    const char* ref;
    // recall, precision, f1 for rouge1, rouge2, rougesu4
    std::array<std::array<double, 3>, 3> expected;
};

// Hand-enumerated values (see tests/oracles/oracles.py).
inline const std::array<RougeCase, 10> kRougeCases{{
    {"a b c", "a b d", {{{2. / 3, 2. / 3, 2. / 3}, {1. / 2, 1. / 2, 1. / 2}, {1. / 2, 1. / 2, 1. / 2}}}},
    {"a b c", "a c b", {{{1, 1, 1}, {0, 0, 0}, {5. / 6, 5. / 6, 5. / 6}}}},
    {"the cat sat on the mat", "the cat is on the mat",
     {{{5. / 6, 5. / 6, 5. / 6}, {3. / 5, 3. / 5, 3. / 5}, {5. / 7, 5. / 7, 5. / 7}}}},
    {"the the the", "the cat", {{{1. / 2, 1. / 3, 2. / 5}, {0, 0, 0}, {1. / 3, 1. / 6, 2. / 9}}}},
    {"a b a b", "a b", {{{1, 1. / 2, 2. / 3}, {1, 1. / 3, 1. / 2}, {1, 3. / 10, 6. / 13}}}},
    {"x y z", "p q r", {{{0, 0, 0}, {0, 0, 0}, {0, 0, 0}}}},
    {"one", "one two three", {{{1. / 3, 1, 1. / 2}, {0, 0, 0}, {1. / 6, 1, 2. / 7}}}},
    {"a b c d e f g", "a g", {{{1, 2. / 7, 4. / 9}, {0, 0, 0}, {2. / 3, 2. / 27, 2. / 15}}}},
    {"a b c d e f g h", "a h", {{{1, 1. / 4, 2. / 5}, {0, 0, 0}, {2. / 3, 2. / 33, 1. / 9}}}},
    {"we will meet on monday", "the meeting is monday we will meet",
     {{{4. / 7, 4. / 5, 2. / 3}, {1. / 3, 1. / 2, 2. / 5}, {7. / 27, 7. / 15, 1. / 3}}}},
}};

}  // namespace essumm::testing
