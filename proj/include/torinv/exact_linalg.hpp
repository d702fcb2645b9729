#pragma once

#include <boost/multiprecision/cpp_int.hpp>

#include <cstddef>
#include <initializer_list>
#include <optional>
#include <string>
#include <vector>

#include "torinv/errors.hpp"

namespace torinv {

using Int = boost::multiprecision::cpp_int;
using Rat = boost::multiprecision::cpp_rational;
using IntVec = std::vector<Int>;
using RatVec = std::vector<Rat>;

// Floor division / modulus (round toward -infinity; cpp_int's operator/
// truncates toward zero).
Int floor_div(const Int& a, const Int& b);
Int floor_mod(const Int& a, const Int& b);

// r - floor(r); always in [0, 1).
Rat frac(const Rat& r);

// Dense arbitrary-precision integer matrix, row-major.
class IntMatrix {
public:
    IntMatrix() = default;
    IntMatrix(std::size_t rows, std::size_t cols)
        : rows_(rows), cols_(cols), entries_(rows * cols) {}
    IntMatrix(std::initializer_list<std::initializer_list<long long>> rows);

    static IntMatrix identity(std::size_t n);

    std::size_t rows() const { return rows_; }
    std::size_t cols() const { return cols_; }

    Int& at(std::size_t i, std::size_t j) { return entries_[i * cols_ + j]; }
    const Int& at(std::size_t i, std::size_t j) const { return entries_[i * cols_ + j]; }

    bool operator==(const IntMatrix& other) const = default;

    IntMatrix operator*(const IntMatrix& other) const;
    IntMatrix operator+(const IntMatrix& other) const;
    IntMatrix operator-(const IntMatrix& other) const;
    IntMatrix operator-() const;
    IntMatrix transposed() const;

    bool is_zero() const;
    bool is_identity() const;

    // Exact determinant (square matrices) via fraction-free elimination.
    Int determinant() const;

    std::string to_string() const;

private:
    std::size_t rows_ = 0;
    std::size_t cols_ = 0;
    std::vector<Int> entries_;
};

IntVec mat_vec(const IntMatrix& M, const IntVec& v);
RatVec mat_vec(const IntMatrix& M, const RatVec& v);

// U * M * V = D with U, V unimodular and D diagonal, nonnegative, divisibility
// chain d1 | d2 | ..., zeros last.  Deterministic: pivoting always selects the
// smallest-absolute-value nonzero entry, ties broken by (row, col).
struct SmithDecomposition {
    IntMatrix U;  // rows x rows
    IntMatrix D;  // rows x cols
    IntMatrix V;  // cols x cols
};
SmithDecomposition smith_normal_form(const IntMatrix& M);

// Row-style Hermite normal form: U * M = H, U unimodular, H in row echelon
// form with positive pivots and entries above each pivot reduced into
// [0, pivot).
struct HermiteResult {
    IntMatrix H;
    IntMatrix U;
};
HermiteResult hermite_normal_form(const IntMatrix& M);

// One particular integer solution of M x = b (when it exists) together with a
// basis of the integer kernel of M.  The kernel basis is returned whether or
// not b lies in the image.
struct DiophantineSolution {
    std::optional<IntVec> x;
    std::vector<IntVec> kernel;
};
DiophantineSolution solve_diophantine(const IntMatrix& M, const IntVec& b);

// Solves M X = B column by column with a single Smith decomposition of M.
// Returns nullopt if any column of B has no integer solution.
std::optional<IntMatrix> solve_diophantine_matrix(const IntMatrix& M, const IntMatrix& B);

// Basis of the integer kernel of M (columns of the SNF's V beyond the rank;
// this spans the full kernel lattice, not just a finite-index sublattice).
std::vector<IntVec> kernel_basis(const IntMatrix& M);

// For primitive v (gcd 1) produces G in GL(n, Z) with (G^-T) e1 = v.
// Throws NotPrimitive otherwise.
IntMatrix complete_primitive(const IntVec& v);

// Exact inverse of a unimodular matrix.  Throws NotUnimodular if |det| != 1.
IntMatrix inverse_unimodular(const IntMatrix& U);

// Coefficients of det(lambda I - A), lowest degree first; result.size() == n+1
// and result[n] == 1.  Faddeev-LeVerrier, all divisions exact.
std::vector<Int> characteristic_polynomial(const IntMatrix& A);

// Isomorphism type of a finitely generated abelian group: Z^free_rank plus
// cyclic factors Z/d with d > 1 and d_i | d_{i+1}.
struct AbelianGroup {
    std::size_t free_rank = 0;
    std::vector<Int> torsion;
    bool operator==(const AbelianGroup& other) const = default;

    // "0", "Z^3", "(Z/2)^3", "Z + Z/2 + Z/4", ...
    std::string to_string() const;
};

// Isomorphism type of Z^ambient / (lattice spanned by the columns of M).
// M must have ambient rows.
AbelianGroup quotient_group(std::size_t ambient, const IntMatrix& M);

Int gcd_vec(const IntVec& v);

}  // namespace torinv
