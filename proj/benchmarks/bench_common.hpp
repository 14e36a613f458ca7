#pragma once

#include <causalfair/effects.hpp>
#include <causalfair/scm.hpp>

#include <random>
#include <sstream>

namespace causalfair::bench {

/// z(6) -> x(2) -> w(5) -> y(2) synthetic table in the Adult size class
inline Dataset synthetic_dataset(std::size_t n, unsigned seed = 7) {
    std::mt19937 rng(seed);
    std::ostringstream csv;
    csv << "z,x,w,y\n";
    std::uniform_int_distribution<int> u6(0, 5), u5(0, 4), u2(0, 1);
    for (std::size_t i = 0; i < n; ++i) {
        int z = u6(rng);
        int x = (u2(rng) + (z > 3)) % 2;
        int w = (u5(rng) + x) % 5;
        int y = (u2(rng) + ((w + z) % 3 == 0)) % 2;
        csv << "z" << z << "," << x << ",w" << w << "," << y << "\n";
    }
    std::istringstream in(csv.str());
    return load_csv_stream(in, {{"z", ColumnKind::Categorical, {}, {}},
                                {"x", ColumnKind::Categorical, {}, {}},
                                {"w", ColumnKind::Categorical, {}, {}},
                                {"y", ColumnKind::Categorical, {}, {}}});
}

inline SfmRoles synthetic_roles() {
    SfmRoles r;
    r.x = "x";
    r.y = "y";
    r.z = {"z"};
    r.w = {"w"};
    r.x0_states = {"0"};
    r.x1_states = {"1"};
    r.y_target = "1";
    return r;
}

} // namespace causalfair::bench
