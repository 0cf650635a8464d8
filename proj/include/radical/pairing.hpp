#pragma once

#include "radical/matrix.hpp"

namespace radical {

// A pair of spaces in perfect duality under the ambient form: pairing(i,j) =
// Phi(left_i, right_j).  For self-paired spaces (X, E, E-perp) left and right
// coincide and the pairing is the restricted Gram matrix.
template <typename T>
struct PairedSpaces {
    std::size_t left_dim = 0;
    std::size_t right_dim = 0;
    Mat<T> pairing;  // left_dim x right_dim
};

// Adjoint of A with respect to the two pairings.  A maps source-left to
// target-left; the adjoint maps target-right to source-right and satisfies
// Phi(A* u, v) = Phi(u, A v).  Solving against the Gram blocks rather than
// transposing keeps the anti-transpose cases of the standard basis honest.
template <typename T>
Mat<T> adjoint(const Mat<T>& a, const PairedSpaces<T>& source, const PairedSpaces<T>& target,
               double rank_tol = 1e-8) {
    if (a.rows() != target.left_dim || a.cols() != source.left_dim)
        throw std::invalid_argument("adjoint: map does not match source/target left spaces");
    if (source.left_dim != source.right_dim || target.left_dim != target.right_dim)
        throw std::invalid_argument("adjoint: pairings must be square");
    // From Phi(A* u, v) = Phi(u, A v):  S . A* = A^T . T.
    return solve(source.pairing, a.transpose() * target.pairing, rank_tol);
}

}  // namespace radical
