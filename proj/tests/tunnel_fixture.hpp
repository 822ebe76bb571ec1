#pragma once

#include "cuspforge/surface.hpp"

namespace cftest {

// Two tunnel discs around edge 01 of a two-tet triangulation, with arcs on
// faces 2 and 3 matched to each other across the tets: a cyclic chain.
inline cuspforge::GeneralizedSurface planted_tunnel_ring(const cuspforge::Triangulation& T) {
    cuspforge::GeneralizedSurface S;
    S.base = T;
    for (int t = 0; t < 2; ++t) {
        cuspforge::GeneralizedDisc d;
        d.tet = t;
        d.kind = cuspforge::DiscKind::Tunnel;
        for (int f : {2, 3}) {
            cuspforge::GeneralizedArc a;
            a.face = f;
            a.edge_a = a.edge_b = cuspforge::edge_index(0, 1);
            a.point_a = 10 * f;
            a.point_b = 10 * f + 1;
            a.across_disc = 1 - t;
            a.across_arc = f - 2;
            d.arcs.push_back(a);
        }
        S.discs.push_back(d);
    }
    return S;
}

}  // namespace cftest
