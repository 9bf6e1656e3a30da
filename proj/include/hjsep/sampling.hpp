#pragma once

// Counter-based deterministic sampling.  Every coordinate of every sample
// point is a pure function of (seed, counter), so any run -- or any other
// implementation following docs/formats.md -- reproduces the same points
// regardless of evaluation order.

#include <hjsep/geometry.hpp>

#include <cstdint>
#include <vector>

namespace hjsep {

struct Interval {
    double lo = 0.0, hi = 0.0;
};

// splitmix64 output for the given counter
uint64_t counter_mix(uint64_t seed, uint64_t counter);

// uniform double in [0, 1) from the top 53 bits
double counter_u01(uint64_t seed, uint64_t counter);

struct SampleDomain {
    Interval t;
    std::vector<Interval> q, p;

    int n() const { return static_cast<int>(q.size()); }
};

// Point `index` draws its coordinates at counters index*(2n+1) + c with the
// coordinate order (t, q1..qn, p1..pn).
PointDual sample_point(const SampleDomain& dom, uint64_t seed, int index);

}  // namespace hjsep
