#pragma once

#include <vector>

#include "ratmix/common.hpp"
#include "ratmix/markov.hpp"
#include "ratmix/weights.hpp"

namespace ratmix::mixing {

/**
 * Weighted mixing defect (1/a_u(N)) sum_{k<N} |m(A cap T^{-k}B) - m(A) m(B) u_k|.
 * The weight vector is indexed from 0 and must cover [0, N).
 */
double rwm_defect(const markov::Chain& c, const markov::Cylinder& A, const markov::Cylinder& B,
                  const std::vector<double>& u, i64 N);
Profile rwm_defect_profile(const markov::Chain& c, const markov::Cylinder& A,
                           const markov::Cylinder& B, const std::vector<double>& u,
                           const Grid& grid);

/** m(A cap T^{-n}B) / (m(A) m(B) u_n) at grid points; zero-weight lags give 0. */
Profile krickeberg_profile(const markov::Chain& c, const markov::Cylinder& A,
                           const markov::Cylinder& B, const std::vector<double>& u,
                           const Grid& grid);

/**
 * Return sequence of F = union of pairwise disjoint cylinders:
 * a_N(F) = (1/m(F)^2) sum_{i,j} sum_{k<N} m(C_i cap T^{-k} C_j).
 */
Profile return_sequence_profile(const markov::Chain& c, const std::vector<markov::Cylinder>& parts,
                                const Grid& grid);

/** n u_n / a_u(n) over the grid; tends to 1 - beta when a_u varies with index beta. */
Profile gl_ratio_profile(const weights::WeightSeq& u, const Grid& grid);

}  // namespace ratmix::mixing
