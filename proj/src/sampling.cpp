#include <hjsep/sampling.hpp>

namespace hjsep {

namespace {

uint64_t mix(uint64_t z) {
    z ^= z >> 30;
    z *= 0xBF58476D1CE4E5B9ull;
    z ^= z >> 27;
    z *= 0x94D049BB133111EBull;
    z ^= z >> 31;
    return z;
}

}  // namespace

uint64_t counter_mix(uint64_t seed, uint64_t counter) {
    return mix(seed + (counter + 1) * 0x9E3779B97F4A7C15ull);
}

double counter_u01(uint64_t seed, uint64_t counter) {
    return static_cast<double>(counter_mix(seed, counter) >> 11) * 0x1.0p-53;
}

PointDual sample_point(const SampleDomain& dom, uint64_t seed, int index) {
    const int n = dom.n();
    const uint64_t base = static_cast<uint64_t>(index) * (2 * n + 1);

    auto draw = [&](const Interval& iv, uint64_t c) {
        return iv.lo + (iv.hi - iv.lo) * counter_u01(seed, base + c);
    };

    PointDual X;
    X.t = draw(dom.t, 0);
    X.q.resize(n);
    X.p.resize(n);
    for (int i = 0; i < n; ++i) X.q[i] = draw(dom.q[i], 1 + i);
    for (int i = 0; i < n; ++i) X.p[i] = draw(dom.p[i], 1 + n + i);
    return X;
}

}  // namespace hjsep
