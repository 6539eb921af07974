#pragma once

// Combinatorial structure of ML-matrices: irreducibility, strongly connected
// components of the coupling graph, and the block lower triangular normal
// form of a reducible matrix.
//
// Graph convention: A(i,j) != 0 for i != j couples site j into site i
// (quantity flows from the column site to the row site), giving the edge
// j -> i. A block is "isolated" when its rows carry no off-block entries, so
// no quantity ever flows into it; isolated blocks are exactly the sources of
// the condensed DAG and are placed first in block order.

#include <algorithm>
#include <cstddef>
#include <queue>
#include <utility>
#include <vector>

#include "growmix/mlcore.hpp"

namespace growmix {

// Tarjan's algorithm, iterative to keep stack depth flat.
inline std::vector<std::vector<std::size_t>> strongly_connected_components(
    const std::vector<std::vector<std::size_t>>& adj) {
    const std::size_t n = adj.size();
    std::vector<long> index(n, -1), low(n, 0);
    std::vector<bool> on_stack(n, false);
    std::vector<std::size_t> stack;
    std::vector<std::pair<std::size_t, std::size_t>> frames; // (vertex, next child slot)
    std::vector<std::vector<std::size_t>> comps;
    long next_index = 0;

    for (std::size_t root = 0; root < n; ++root) {
        if (index[root] != -1) continue;
        index[root] = low[root] = next_index++;
        stack.push_back(root);
        on_stack[root] = true;
        frames.emplace_back(root, 0);
        while (!frames.empty()) {
            auto& fr = frames.back();
            const std::size_t v = fr.first;
            if (fr.second < adj[v].size()) {
                const std::size_t w = adj[v][fr.second++];
                if (index[w] == -1) {
                    index[w] = low[w] = next_index++;
                    stack.push_back(w);
                    on_stack[w] = true;
                    frames.emplace_back(w, 0);
                } else if (on_stack[w] && index[w] < low[v]) {
                    low[v] = index[w];
                }
            } else {
                if (low[v] == index[v]) {
                    comps.emplace_back();
                    std::size_t w;
                    do {
                        w = stack.back();
                        stack.pop_back();
                        on_stack[w] = false;
                        comps.back().push_back(w);
                    } while (w != v);
                }
                frames.pop_back();
                if (!frames.empty() && low[v] < low[frames.back().first])
                    low[frames.back().first] = low[v];
            }
        }
    }
    return comps;
}

// Coupling graph on the off-diagonal nonzero pattern (exact zeros only).
inline std::vector<std::vector<std::size_t>> coupling_graph(const MLMatrix& a) {
    const std::size_t n = a.size();
    std::vector<std::vector<std::size_t>> adj(n);
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j)
            if (i != j && a(i, j) != 0.0) adj[j].push_back(i);
    return adj;
}

inline bool is_irreducible(const MLMatrix& a) {
    if (a.size() == 1) return true;
    return strongly_connected_components(coupling_graph(a)).size() == 1;
}

struct FrobeniusForm {
    // permutation[k] = original index occupying permuted position k.
    std::vector<std::size_t> permutation;
    // Original indices of each diagonal block, ascending inside a block;
    // blocks are listed in diagonal order (isolated first, then a topological
    // order of the condensed coupling DAG).
    std::vector<std::vector<std::size_t>> blocks;
    // Positions into `blocks` of the isolated blocks (always a prefix).
    std::vector<std::size_t> isolated;
    // A restricted to each block; irreducible (or 1x1) by construction.
    std::vector<MLMatrix> block_matrices;
};

inline FrobeniusForm frobenius_normal_form(const MLMatrix& a) {
    const std::size_t n = a.size();
    const auto adj = coupling_graph(a);
    auto comps = strongly_connected_components(adj);
    for (auto& c : comps) std::sort(c.begin(), c.end());

    std::vector<std::size_t> comp_of(n);
    for (std::size_t c = 0; c < comps.size(); ++c)
        for (std::size_t v : comps[c]) comp_of[v] = c;

    // Condensed DAG with deduplicated edges.
    const std::size_t t = comps.size();
    std::vector<std::vector<std::size_t>> cadj(t);
    std::vector<std::size_t> indeg(t, 0);
    {
        std::vector<std::vector<bool>> seen(t, std::vector<bool>(t, false));
        for (std::size_t from = 0; from < n; ++from)
            for (std::size_t to : adj[from]) {
                const std::size_t cf = comp_of[from], ct = comp_of[to];
                if (cf != ct && !seen[cf][ct]) {
                    seen[cf][ct] = true;
                    cadj[cf].push_back(ct);
                    ++indeg[ct];
                }
            }
    }

    // Blocks come out isolated-first, each phase ordered by smallest original
    // index among the ready blocks, so the form is reproducible.
    using Entry = std::pair<std::size_t, std::size_t>; // (min original index, comp id)
    std::priority_queue<Entry, std::vector<Entry>, std::greater<>> ready;
    std::vector<std::size_t> order;
    order.reserve(t);
    std::size_t isolated_count = 0;
    for (std::size_t c = 0; c < t; ++c)
        if (indeg[c] == 0) ready.emplace(comps[c].front(), c);

    std::priority_queue<Entry, std::vector<Entry>, std::greater<>> next_ready;
    while (!ready.empty()) {
        const auto [mn, c] = ready.top();
        ready.pop();
        order.push_back(c);
        ++isolated_count;
        for (std::size_t d : cadj[c])
            if (--indeg[d] == 0) next_ready.emplace(comps[d].front(), d);
    }
    while (!next_ready.empty()) {
        const auto [mn, c] = next_ready.top();
        next_ready.pop();
        order.push_back(c);
        for (std::size_t d : cadj[c])
            if (--indeg[d] == 0) next_ready.emplace(comps[d].front(), d);
    }

    FrobeniusForm form;
    form.permutation.reserve(n);
    for (std::size_t k = 0; k < order.size(); ++k) {
        const auto& block = comps[order[k]];
        form.blocks.push_back(block);
        form.block_matrices.push_back(a.restricted(block));
        form.permutation.insert(form.permutation.end(), block.begin(), block.end());
        if (k < isolated_count) form.isolated.push_back(k);
    }
    return form;
}

// Entries of PAP' in the block order of the form.
inline Matrix permuted_matrix(const MLMatrix& a, const FrobeniusForm& form) {
    const std::size_t n = a.size();
    Matrix p(n);
    for (std::size_t k = 0; k < n; ++k)
        for (std::size_t l = 0; l < n; ++l) p(k, l) = a(form.permutation[k], form.permutation[l]);
    return p;
}

// Exhaustive zero-pattern scan: everything above the diagonal blocks must be 0.
inline bool is_block_lower_triangular(const MLMatrix& a, const FrobeniusForm& form) {
    const Matrix p = permuted_matrix(a, form);
    std::size_t row_start = 0;
    for (const auto& block : form.blocks) {
        const std::size_t row_end = row_start + block.size();
        for (std::size_t k = row_start; k < row_end; ++k)
            for (std::size_t l = row_end; l < a.size(); ++l)
                if (p(k, l) != 0.0) return false;
        row_start = row_end;
    }
    return true;
}

} // namespace growmix
