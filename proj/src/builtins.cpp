#include "torinv/builtins.hpp"

#include <algorithm>
#include <deque>

#include "rp2_tables.hpp"

namespace torinv {
namespace {

const GroupPresentation kOrderTwo{{"a"}, {{1, 1}}};

IntMatrix scaled_identity(std::size_t n, long long c) {
    IntMatrix m(n, n);
    for (std::size_t i = 0; i < n; ++i) m.at(i, i) = c;
    return m;
}

struct Rp2Raw {
    CoverNerve nerve;
    std::vector<int> signs;  // linear-part sign per edge
};

// Assembles the frozen tables into a nerve: BFS spanning tree from chart 0
// with ascending neighbor order, and every non-tree edge whose induced loop
// has sign product -1 declared as the generator "a".
Rp2Raw rp2_raw() {
    Rp2Raw out;
    CoverNerve& nerve = out.nerve;
    nerve.vertex_count = (std::size_t)builtin_tables::kRp2Vertices;
    std::size_t n_edges = std::size(builtin_tables::kRp2Edges);
    for (std::size_t e = 0; e < n_edges; ++e) {
        nerve.edges.push_back({(std::size_t)builtin_tables::kRp2Edges[e][0],
                               (std::size_t)builtin_tables::kRp2Edges[e][1]});
        out.signs.push_back(builtin_tables::kRp2Edges[e][2]);
    }
    for (const auto& tri : builtin_tables::kRp2Triangles)
        nerve.triangles.push_back(
            {(std::size_t)tri[0], (std::size_t)tri[1], (std::size_t)tri[2]});
    nerve.presentation = kOrderTwo;

    std::vector<std::vector<std::pair<std::size_t, std::size_t>>> adj(nerve.vertex_count);
    for (std::size_t e = 0; e < n_edges; ++e) {
        adj[nerve.edges[e][0]].push_back({nerve.edges[e][1], e});
        adj[nerve.edges[e][1]].push_back({nerve.edges[e][0], e});
    }
    for (auto& list : adj) std::sort(list.begin(), list.end());

    std::vector<int> parent(nerve.vertex_count, -1);
    std::vector<char> seen(nerve.vertex_count, 0);
    std::vector<char> in_tree(n_edges, 0);
    std::vector<int> path_sign(nerve.vertex_count, 1);
    std::deque<std::size_t> queue{0};
    seen[0] = 1;
    while (!queue.empty()) {
        std::size_t u = queue.front();
        queue.pop_front();
        for (auto [w, e] : adj[u]) {
            if (seen[w]) continue;
            seen[w] = 1;
            parent[w] = (int)u;
            in_tree[e] = 1;
            path_sign[w] = path_sign[u] * out.signs[e];
            nerve.spanning_tree.push_back(e);
            queue.push_back(w);
        }
    }
    for (std::size_t e = 0; e < n_edges; ++e) {
        if (in_tree[e]) continue;
        int loop = path_sign[nerve.edges[e][0]] * out.signs[e] * path_sign[nerve.edges[e][1]];
        if (loop == -1) nerve.loop_generators[e] = "a";
    }
    return out;
}

}  // namespace

CoverNerve rp2_nerve() { return rp2_raw().nerve; }

std::vector<AffReal> rp2_atlas() {
    Rp2Raw raw = rp2_raw();
    std::vector<AffReal> atlas;
    for (int sign : raw.signs)
        atlas.push_back({GLnZ(scaled_identity(3, sign)), RatVec(3)});
    return atlas;
}

TransitionData rp2_bundle() { return trivial_fstar_fibration(rp2_nerve(), rp2_atlas()); }

CoverNerve s2_tetra_nerve() {
    CoverNerve nerve;
    nerve.vertex_count = 4;
    nerve.edges = {{0, 1}, {0, 2}, {0, 3}, {1, 2}, {1, 3}, {2, 3}};
    nerve.triangles = {{1, 2, 3}, {0, 3, 2}, {0, 1, 3}, {0, 2, 1}};
    nerve.spanning_tree = {0, 1, 2};
    return nerve;
}

TransitionData s2_tetra_bundle() {
    TransitionData td;
    td.nerve = s2_tetra_nerve();
    for (std::size_t e = 0; e < td.nerve.edges.size(); ++e) {
        RatVec half{td.nerve.edges[e][1] == 3 ? Rat(1, 2) : Rat(0)};
        td.labels.push_back(make_aff_toral(GLnZ::identity(1), std::move(half)));
    }
    return td;
}

CoverNerve circle_loop_nerve() {
    CoverNerve nerve;
    nerve.vertex_count = 3;
    nerve.edges = {{0, 1}, {1, 2}, {0, 2}};
    nerve.spanning_tree = {0, 2};
    nerve.loop_generators = {{1, "a"}};
    nerve.presentation = {{"a"}, {}};
    return nerve;
}

TransitionData circle_loop_bundle() {
    TransitionData td;
    td.nerve = circle_loop_nerve();
    td.labels.push_back(make_aff_toral(GLnZ::identity(2), RatVec(2)));
    td.labels.push_back(
        make_aff_toral(GLnZ(IntMatrix{{1, 1}, {0, 1}}), RatVec(2)));
    td.labels.push_back(make_aff_toral(GLnZ::identity(2), RatVec(2)));
    return td;
}

TwistedComplex rp2_cellular_complex() {
    TwistedComplex cx;
    cx.presentation = kOrderTwo;
    cx.ranks = {1, 1, 1};
    cx.boundaries = {{{GroupRingElement{{{1, {}}, {-1, {1}}}}}},
                     {{GroupRingElement{{{1, {}}, {1, {1}}}}}}};
    return cx;
}

Representation rp2_twisted_rep() {
    return validate_representation(kOrderTwo, {scaled_identity(3, -1)});
}

Representation rp2_trivial_rep() {
    return validate_representation(kOrderTwo, {IntMatrix::identity(3)});
}

}  // namespace torinv
