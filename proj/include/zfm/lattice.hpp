#pragma once

#include <Eigen/Core>
#include <boost/multiprecision/cpp_int.hpp>
#include <boost/multiprecision/eigen.hpp>
#include <type_traits>

// Eigen 3.4 expressions declare a void const_iterator, which trips Boost's
// byte-container probe during scalar promotion.
namespace boost::multiprecision::detail {
template <class C>
  requires requires { C::RowsAtCompileTime; }
struct is_byte_container_imp<C, true> : std::false_type {};
}  // namespace boost::multiprecision::detail

namespace zfm {

using BigInt =
    boost::multiprecision::number<boost::multiprecision::cpp_int_backend<>, boost::multiprecision::et_off>;
using IntMatrix = Eigen::Matrix<BigInt, Eigen::Dynamic, Eigen::Dynamic>;
using Element = Eigen::Matrix<BigInt, Eigen::Dynamic, 1>;

/// Exact determinant (fraction-free Bareiss elimination).
BigInt determinant(const IntMatrix& m);

/// Adjugate: adj(m) * m = det(m) * I.
IntMatrix adjugate(const IntMatrix& m);

/// Row-style Hermite normal form of the lattice spanned by the rows of `gens`:
/// nonzero rows only, upper echelon, positive pivots, entries above each
/// pivot reduced into [0, pivot).
IntMatrix hermite_normal_form(const IntMatrix& gens);

/// Index of the lattice spanned by the rows of `gens` in Z^cols, or 0 when it
/// is not of full rank.
BigInt lattice_index(const IntMatrix& gens);

}  // namespace zfm
