#ifndef BRENT_ALGORITHMS_HPP
#define BRENT_ALGORITHMS_HPP

#include "brent/types.hpp"

namespace brent {

/// The mnp-term decomposition { e_ij (x) e_jk (x) e_ki } in lexicographic
/// (i,j,k) order. Every entry is 0 or 1.
Algorithm natural_algorithm(const MatMulFormat& format);

/// Strassen's 7-term decomposition for (2,2,2), entries in {-1,0,1}.
Algorithm builtin_strassen();

}  // namespace brent

#endif
