#pragma once
// Test-only glue on top of fixtures.hpp; include <doctest.h> first.

#include "fixtures.hpp"

namespace doctest {
template <> struct StringMaker<wfo::MultisetSeries> {
    static String convert(const wfo::MultisetSeries& s) { return wfo::to_brief(s).c_str(); }
};
} // namespace doctest
