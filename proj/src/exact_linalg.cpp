#include "torinv/exact_linalg.hpp"

#include <algorithm>
#include <cassert>
#include <numeric>
#include <sstream>

namespace torinv {

Int floor_div(const Int& a, const Int& b) {
    Int q = a / b;
    Int r = a - q * b;
    if (r != 0 && ((r < 0) != (b < 0))) --q;
    return q;
}

Int floor_mod(const Int& a, const Int& b) {
    return a - floor_div(a, b) * b;
}

Rat frac(const Rat& r) {
    Int fl = floor_div(numerator(r), denominator(r));
    return r - Rat(fl);
}

IntMatrix::IntMatrix(std::initializer_list<std::initializer_list<long long>> rows) {
    rows_ = rows.size();
    cols_ = rows_ ? rows.begin()->size() : 0;
    entries_.reserve(rows_ * cols_);
    for (const auto& row : rows) {
        if (row.size() != cols_)
            throw DimensionMismatch("ragged initializer for IntMatrix");
        for (long long v : row) entries_.emplace_back(v);
    }
}

IntMatrix IntMatrix::identity(std::size_t n) {
    IntMatrix m(n, n);
    for (std::size_t i = 0; i < n; ++i) m.at(i, i) = 1;
    return m;
}

IntMatrix IntMatrix::operator*(const IntMatrix& other) const {
    if (cols_ != other.rows_)
        throw DimensionMismatch("matrix product: " + std::to_string(cols_) +
                                " columns vs " + std::to_string(other.rows_) + " rows");
    IntMatrix out(rows_, other.cols_);
    for (std::size_t i = 0; i < rows_; ++i)
        for (std::size_t k = 0; k < cols_; ++k) {
            const Int& a = at(i, k);
            if (a == 0) continue;
            for (std::size_t j = 0; j < other.cols_; ++j)
                out.at(i, j) += a * other.at(k, j);
        }
    return out;
}

IntMatrix IntMatrix::operator+(const IntMatrix& other) const {
    if (rows_ != other.rows_ || cols_ != other.cols_)
        throw DimensionMismatch("matrix sum shape mismatch");
    IntMatrix out(rows_, cols_);
    for (std::size_t i = 0; i < entries_.size(); ++i)
        out.entries_[i] = entries_[i] + other.entries_[i];
    return out;
}

IntMatrix IntMatrix::operator-(const IntMatrix& other) const {
    if (rows_ != other.rows_ || cols_ != other.cols_)
        throw DimensionMismatch("matrix difference shape mismatch");
    IntMatrix out(rows_, cols_);
    for (std::size_t i = 0; i < entries_.size(); ++i)
        out.entries_[i] = entries_[i] - other.entries_[i];
    return out;
}

IntMatrix IntMatrix::operator-() const {
    IntMatrix out(rows_, cols_);
    for (std::size_t i = 0; i < entries_.size(); ++i) out.entries_[i] = -entries_[i];
    return out;
}

IntMatrix IntMatrix::transposed() const {
    IntMatrix out(cols_, rows_);
    for (std::size_t i = 0; i < rows_; ++i)
        for (std::size_t j = 0; j < cols_; ++j) out.at(j, i) = at(i, j);
    return out;
}

bool IntMatrix::is_zero() const {
    return std::all_of(entries_.begin(), entries_.end(),
                       [](const Int& v) { return v == 0; });
}

bool IntMatrix::is_identity() const {
    if (rows_ != cols_) return false;
    for (std::size_t i = 0; i < rows_; ++i)
        for (std::size_t j = 0; j < cols_; ++j)
            if (at(i, j) != (i == j ? 1 : 0)) return false;
    return true;
}

Int IntMatrix::determinant() const {
    if (rows_ != cols_)
        throw DimensionMismatch("determinant of non-square matrix");
    std::size_t n = rows_;
    if (n == 0) return 1;
    IntMatrix a = *this;  // Bareiss fraction-free elimination
    Int sign = 1, prev = 1;
    for (std::size_t k = 0; k + 1 < n; ++k) {
        if (a.at(k, k) == 0) {
            std::size_t piv = k;
            while (piv < n && a.at(piv, k) == 0) ++piv;
            if (piv == n) return 0;
            for (std::size_t j = 0; j < n; ++j) std::swap(a.at(k, j), a.at(piv, j));
            sign = -sign;
        }
        for (std::size_t i = k + 1; i < n; ++i) {
            for (std::size_t j = k + 1; j < n; ++j)
                a.at(i, j) = (a.at(i, j) * a.at(k, k) - a.at(i, k) * a.at(k, j)) / prev;
            a.at(i, k) = 0;
        }
        prev = a.at(k, k);
    }
    return sign * a.at(n - 1, n - 1);
}

std::string IntMatrix::to_string() const {
    std::ostringstream os;
    os << "[";
    for (std::size_t i = 0; i < rows_; ++i) {
        os << (i ? ", [" : "[");
        for (std::size_t j = 0; j < cols_; ++j) os << (j ? "," : "") << at(i, j);
        os << "]";
    }
    os << "]";
    return os.str();
}

IntVec mat_vec(const IntMatrix& M, const IntVec& v) {
    if (M.cols() != v.size())
        throw DimensionMismatch("matrix-vector product shape mismatch");
    IntVec out(M.rows());
    for (std::size_t i = 0; i < M.rows(); ++i)
        for (std::size_t j = 0; j < M.cols(); ++j) out[i] += M.at(i, j) * v[j];
    return out;
}

RatVec mat_vec(const IntMatrix& M, const RatVec& v) {
    if (M.cols() != v.size())
        throw DimensionMismatch("matrix-vector product shape mismatch");
    RatVec out(M.rows());
    for (std::size_t i = 0; i < M.rows(); ++i)
        for (std::size_t j = 0; j < M.cols(); ++j)
            out[i] += Rat(M.at(i, j)) * v[j];
    return out;
}

namespace {

// Elementary operations applied simultaneously to D and its transform record.
struct SnfState {
    IntMatrix D, U, V;

    void swap_rows(std::size_t a, std::size_t b) {
        if (a == b) return;
        for (std::size_t j = 0; j < D.cols(); ++j) std::swap(D.at(a, j), D.at(b, j));
        for (std::size_t j = 0; j < U.cols(); ++j) std::swap(U.at(a, j), U.at(b, j));
    }
    void swap_cols(std::size_t a, std::size_t b) {
        if (a == b) return;
        for (std::size_t i = 0; i < D.rows(); ++i) std::swap(D.at(i, a), D.at(i, b));
        for (std::size_t i = 0; i < V.rows(); ++i) std::swap(V.at(i, a), V.at(i, b));
    }
    // row a += c * row b
    void add_row(std::size_t a, std::size_t b, const Int& c) {
        if (c == 0) return;
        for (std::size_t j = 0; j < D.cols(); ++j) D.at(a, j) += c * D.at(b, j);
        for (std::size_t j = 0; j < U.cols(); ++j) U.at(a, j) += c * U.at(b, j);
    }
    // col a += c * col b
    void add_col(std::size_t a, std::size_t b, const Int& c) {
        if (c == 0) return;
        for (std::size_t i = 0; i < D.rows(); ++i) D.at(i, a) += c * D.at(i, b);
        for (std::size_t i = 0; i < V.rows(); ++i) V.at(i, a) += c * V.at(i, b);
    }
    void negate_row(std::size_t a) {
        for (std::size_t j = 0; j < D.cols(); ++j) D.at(a, j) = -D.at(a, j);
        for (std::size_t j = 0; j < U.cols(); ++j) U.at(a, j) = -U.at(a, j);
    }

    // Smallest |entry| != 0 in the submatrix [t:, t:], ties by (row, col).
    bool find_pivot(std::size_t t, std::size_t& pi, std::size_t& pj) const {
        bool found = false;
        Int best = 0;
        for (std::size_t i = t; i < D.rows(); ++i)
            for (std::size_t j = t; j < D.cols(); ++j) {
                const Int& v = D.at(i, j);
                if (v == 0) continue;
                Int a = abs(v);
                if (!found || a < best) {
                    found = true;
                    best = a;
                    pi = i;
                    pj = j;
                }
            }
        return found;
    }

    // Clear row t and column t of everything but the pivot at (t, t).
    // Returns false when the submatrix [t:, t:] is entirely zero.
    bool process(std::size_t t) {
        std::size_t pi, pj;
        if (!find_pivot(t, pi, pj)) return false;
        swap_rows(t, pi);
        swap_cols(t, pj);
        for (;;) {
            bool clean = true;
            for (std::size_t i = t + 1; i < D.rows(); ++i) {
                if (D.at(i, t) == 0) continue;
                add_row(i, t, -floor_div(D.at(i, t), D.at(t, t)));
                if (D.at(i, t) != 0) clean = false;  // remainder < |pivot|
            }
            for (std::size_t j = t + 1; j < D.cols(); ++j) {
                if (D.at(t, j) == 0) continue;
                add_col(j, t, -floor_div(D.at(t, j), D.at(t, t)));
                if (D.at(t, j) != 0) clean = false;
            }
            if (clean) return true;
            if (!find_pivot(t, pi, pj)) return false;  // unreachable
            swap_rows(t, pi);
            swap_cols(t, pj);
        }
    }
};

}  // namespace

SmithDecomposition smith_normal_form(const IntMatrix& M) {
    SnfState s{M, IntMatrix::identity(M.rows()), IntMatrix::identity(M.cols())};
    std::size_t k = std::min(M.rows(), M.cols());
    std::size_t rank = 0;
    for (std::size_t t = 0; t < k; ++t) {
        if (!s.process(t)) break;
        ++rank;
    }
    // Enforce the divisibility chain d_i | d_j for i < j by folding offending
    // entries back in (row add brings d_j into row i; reprocessing replaces
    // d_i with the gcd) and re-running the affected positions.
    bool changed = true;
    while (changed) {
        changed = false;
        for (std::size_t i = 0; i + 1 < rank && !changed; ++i)
            for (std::size_t j = i + 1; j < rank && !changed; ++j)
                if (s.D.at(j, j) % s.D.at(i, i) != 0) {
                    s.add_row(i, j, 1);
                    for (std::size_t t = i; t < rank; ++t) s.process(t);
                    changed = true;
                }
    }
    for (std::size_t i = 0; i < rank; ++i)
        if (s.D.at(i, i) < 0) s.negate_row(i);
    return {s.U, s.D, s.V};
}

HermiteResult hermite_normal_form(const IntMatrix& M) {
    IntMatrix H = M, U = IntMatrix::identity(M.rows());
    auto swap_rows = [&](std::size_t a, std::size_t b) {
        if (a == b) return;
        for (std::size_t j = 0; j < H.cols(); ++j) std::swap(H.at(a, j), H.at(b, j));
        for (std::size_t j = 0; j < U.cols(); ++j) std::swap(U.at(a, j), U.at(b, j));
    };
    auto add_row = [&](std::size_t a, std::size_t b, const Int& c) {
        if (c == 0) return;
        for (std::size_t j = 0; j < H.cols(); ++j) H.at(a, j) += c * H.at(b, j);
        for (std::size_t j = 0; j < U.cols(); ++j) U.at(a, j) += c * U.at(b, j);
    };
    auto negate_row = [&](std::size_t a) {
        for (std::size_t j = 0; j < H.cols(); ++j) H.at(a, j) = -H.at(a, j);
        for (std::size_t j = 0; j < U.cols(); ++j) U.at(a, j) = -U.at(a, j);
    };

    std::size_t p = 0;  // next pivot row
    for (std::size_t col = 0; col < H.cols() && p < H.rows(); ++col) {
        for (;;) {
            // Smallest |entry| != 0 in this column at or below row p.
            std::size_t best_row = H.rows();
            Int best = 0;
            for (std::size_t i = p; i < H.rows(); ++i) {
                if (H.at(i, col) == 0) continue;
                Int a = abs(H.at(i, col));
                if (best_row == H.rows() || a < best) {
                    best_row = i;
                    best = a;
                }
            }
            if (best_row == H.rows()) break;  // column empty below p
            swap_rows(p, best_row);
            bool clean = true;
            for (std::size_t i = p + 1; i < H.rows(); ++i) {
                if (H.at(i, col) == 0) continue;
                add_row(i, p, -floor_div(H.at(i, col), H.at(p, col)));
                if (H.at(i, col) != 0) clean = false;
            }
            if (clean) {
                if (H.at(p, col) < 0) negate_row(p);
                for (std::size_t i = 0; i < p; ++i)
                    add_row(i, p, -floor_div(H.at(i, col), H.at(p, col)));
                ++p;
                break;
            }
        }
    }
    return {H, U};
}

DiophantineSolution solve_diophantine(const IntMatrix& M, const IntVec& b) {
    if (b.size() != M.rows())
        throw DimensionMismatch("solve_diophantine: right-hand side length " +
                                std::to_string(b.size()) + " vs " +
                                std::to_string(M.rows()) + " rows");
    SmithDecomposition snf = smith_normal_form(M);
    std::size_t k = std::min(M.rows(), M.cols());
    std::size_t rank = 0;
    while (rank < k && snf.D.at(rank, rank) != 0) ++rank;

    DiophantineSolution out;
    for (std::size_t j = rank; j < M.cols(); ++j) {
        IntVec basis(M.cols());
        for (std::size_t i = 0; i < M.cols(); ++i) basis[i] = snf.V.at(i, j);
        out.kernel.push_back(std::move(basis));
    }

    IntVec c = mat_vec(snf.U, b);
    IntVec y(M.cols());
    bool solvable = true;
    for (std::size_t i = 0; i < M.rows() && solvable; ++i) {
        if (i < rank) {
            if (c[i] % snf.D.at(i, i) != 0) solvable = false;
            else y[i] = c[i] / snf.D.at(i, i);
        } else if (c[i] != 0) {
            solvable = false;
        }
    }
    if (solvable) out.x = mat_vec(snf.V, y);
    return out;
}

std::optional<IntMatrix> solve_diophantine_matrix(const IntMatrix& M, const IntMatrix& B) {
    if (B.rows() != M.rows())
        throw DimensionMismatch("solve_diophantine_matrix: right-hand side has " +
                                std::to_string(B.rows()) + " rows vs " +
                                std::to_string(M.rows()));
    SmithDecomposition snf = smith_normal_form(M);
    std::size_t k = std::min(M.rows(), M.cols());
    std::size_t rank = 0;
    while (rank < k && snf.D.at(rank, rank) != 0) ++rank;

    IntMatrix C = snf.U * B;
    IntMatrix X(M.cols(), B.cols());
    for (std::size_t col = 0; col < B.cols(); ++col) {
        IntVec y(M.cols());
        for (std::size_t i = 0; i < M.rows(); ++i) {
            if (i < rank) {
                if (C.at(i, col) % snf.D.at(i, i) != 0) return std::nullopt;
                y[i] = C.at(i, col) / snf.D.at(i, i);
            } else if (C.at(i, col) != 0) {
                return std::nullopt;
            }
        }
        IntVec x = mat_vec(snf.V, y);
        for (std::size_t i = 0; i < M.cols(); ++i) X.at(i, col) = x[i];
    }
    return X;
}

std::vector<IntVec> kernel_basis(const IntMatrix& M) {
    return solve_diophantine(M, IntVec(M.rows())).kernel;
}

IntMatrix complete_primitive(const IntVec& v) {
    std::size_t n = v.size();
    if (n == 0 || std::all_of(v.begin(), v.end(), [](const Int& x) { return x == 0; }))
        throw NotPrimitive("zero vector cannot be completed");
    IntMatrix col(n, 1);
    for (std::size_t i = 0; i < n; ++i) col.at(i, 0) = v[i];
    HermiteResult h = hermite_normal_form(col);  // U v = (g, 0, ..., 0)^T
    if (h.H.at(0, 0) != 1)
        throw NotPrimitive("gcd of entries is " + h.H.at(0, 0).str());
    // U v = e1, so v is the first column of U^-1 and G = U^T satisfies
    // (G^-T) e1 = U^-1 e1 = v.
    return h.U.transposed();
}

IntMatrix inverse_unimodular(const IntMatrix& U) {
    if (U.rows() != U.cols())
        throw NotUnimodular("inverse of non-square matrix");
    HermiteResult h = hermite_normal_form(U);
    if (!h.H.is_identity())
        throw NotUnimodular("matrix has determinant " + U.determinant().str());
    return h.U;  // h.U * U = I
}

std::vector<Int> characteristic_polynomial(const IntMatrix& A) {
    if (A.rows() != A.cols())
        throw DimensionMismatch("characteristic polynomial of non-square matrix");
    std::size_t n = A.rows();
    std::vector<Int> c(n + 1);
    c[n] = 1;
    IntMatrix M = IntMatrix::identity(n);  // M_1 = I, c_{n-1} = -tr(A M_1)
    for (std::size_t k = 1; k <= n; ++k) {
        IntMatrix AM = A * M;
        Int tr = 0;
        for (std::size_t i = 0; i < n; ++i) tr += AM.at(i, i);
        Int coeff = -tr / Int(k);  // exact by Faddeev-LeVerrier
        c[n - k] = coeff;
        if (k < n) {
            M = AM;
            for (std::size_t i = 0; i < n; ++i) M.at(i, i) += coeff;
        }
    }
    return c;
}

std::string AbelianGroup::to_string() const {
    if (free_rank == 0 && torsion.empty()) return "0";
    std::vector<std::string> parts;
    if (free_rank == 1) parts.push_back("Z");
    else if (free_rank > 1) parts.push_back("Z^" + std::to_string(free_rank));
    for (std::size_t i = 0; i < torsion.size();) {
        std::size_t j = i;
        while (j < torsion.size() && torsion[j] == torsion[i]) ++j;
        std::string factor = "Z/" + torsion[i].str();
        if (j - i > 1) factor = "(" + factor + ")^" + std::to_string(j - i);
        parts.push_back(factor);
        i = j;
    }
    std::string out;
    for (std::size_t i = 0; i < parts.size(); ++i)
        out += (i ? " + " : "") + parts[i];
    return out;
}

AbelianGroup quotient_group(std::size_t ambient, const IntMatrix& M) {
    if (M.rows() != ambient)
        throw DimensionMismatch("quotient_group: ambient rank mismatch");
    SmithDecomposition snf = smith_normal_form(M);
    std::size_t k = std::min(M.rows(), M.cols());
    AbelianGroup g;
    std::size_t rank = 0;
    for (std::size_t i = 0; i < k && snf.D.at(i, i) != 0; ++i, ++rank)
        if (snf.D.at(i, i) > 1) g.torsion.push_back(snf.D.at(i, i));
    g.free_rank = ambient - rank;
    return g;
}

Int gcd_vec(const IntVec& v) {
    Int g = 0;
    for (const Int& x : v) g = gcd(g, x);
    return g;
}

}  // namespace torinv
