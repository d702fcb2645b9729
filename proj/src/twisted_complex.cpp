#include "torinv/twisted_complex.hpp"

#include <string>

namespace torinv {

IntMatrix apply_representation(const GroupRingElement& elem, const Representation& rep) {
    std::size_t n = rep.n();
    IntMatrix out(n, n);
    for (const auto& term : elem.terms) {
        IntMatrix img = evaluate_word(rep, term.word).matrix();
        for (std::size_t i = 0; i < n; ++i)
            for (std::size_t j = 0; j < n; ++j)
                out.at(i, j) += term.coeff * img.at(i, j);
    }
    return out;
}

CochainComplex to_cochain_complex(const TwistedComplex& cx, const Representation& rep) {
    std::size_t d = cx.ranks.size();
    if (cx.boundaries.size() + 1 != d && !(d == 0 && cx.boundaries.empty()))
        throw NotAComplex("expected " + std::to_string(d ? d - 1 : 0) +
                          " boundary matrices for " + std::to_string(d) + " degrees, got " +
                          std::to_string(cx.boundaries.size()));
    std::size_t n = rep.n();

    CochainComplex cc;
    for (std::size_t k = 0; k < d; ++k) cc.dims.push_back(n * cx.ranks[k]);

    for (std::size_t k = 0; k + 1 < d; ++k) {
        // boundary_{k+1} is ranks[k] x ranks[k+1]; its dual delta_{k+1} maps
        // C^k -> C^{k+1} and is the blockwise rho-image of the transpose.
        const auto& bd = cx.boundaries[k];
        if (bd.size() != cx.ranks[k])
            throw NotAComplex("boundary " + std::to_string(k + 1) + " has " +
                              std::to_string(bd.size()) + " rows, expected " +
                              std::to_string(cx.ranks[k]));
        IntMatrix delta(n * cx.ranks[k + 1], n * cx.ranks[k]);
        for (std::size_t r = 0; r < cx.ranks[k]; ++r) {
            if (bd[r].size() != cx.ranks[k + 1])
                throw NotAComplex("boundary " + std::to_string(k + 1) + " row " +
                                  std::to_string(r) + " has " + std::to_string(bd[r].size()) +
                                  " entries, expected " + std::to_string(cx.ranks[k + 1]));
            for (std::size_t c = 0; c < cx.ranks[k + 1]; ++c) {
                IntMatrix block = apply_representation(bd[r][c], rep);
                for (std::size_t i = 0; i < n; ++i)
                    for (std::size_t j = 0; j < n; ++j)
                        delta.at(c * n + i, r * n + j) = block.at(i, j);
            }
        }
        cc.deltas.push_back(std::move(delta));
    }

    for (std::size_t k = 0; k + 1 < cc.deltas.size(); ++k)
        if (!(cc.deltas[k + 1] * cc.deltas[k]).is_zero())
            throw NotAComplex("delta_" + std::to_string(k + 2) + " composed with delta_" +
                              std::to_string(k + 1) + " is nonzero");
    return cc;
}

AbelianGroup cohomology(const CochainComplex& cc, std::size_t k) {
    if (k >= cc.dims.size())
        throw DimensionMismatch("cohomology degree " + std::to_string(k) +
                                " out of range for a complex of top degree " +
                                std::to_string(cc.dims.empty() ? 0 : cc.dims.size() - 1));
    std::size_t dim_k = cc.dims[k];

    // Basis of ker(delta_{k+1}); the whole of C^k in top degree.
    std::vector<IntVec> kernel;
    if (k < cc.deltas.size()) {
        kernel = kernel_basis(cc.deltas[k]);
    } else {
        for (std::size_t i = 0; i < dim_k; ++i) {
            IntVec e(dim_k);
            e[i] = 1;
            kernel.push_back(std::move(e));
        }
    }
    IntMatrix K(dim_k, kernel.size());
    for (std::size_t j = 0; j < kernel.size(); ++j)
        for (std::size_t i = 0; i < dim_k; ++i) K.at(i, j) = kernel[j][i];

    // Express im(delta_k) in kernel coordinates; solvable since the kernel
    // basis spans the full kernel lattice and delta delta = 0.
    IntMatrix Y(kernel.size(), 0);
    if (k > 0) {
        std::optional<IntMatrix> solved = solve_diophantine_matrix(K, cc.deltas[k - 1]);
        if (!solved)
            throw NotAComplex("image of delta_" + std::to_string(k) +
                              " does not lie in the kernel lattice");
        Y = std::move(*solved);
    }
    return quotient_group(kernel.size(), Y);
}

}  // namespace torinv
