#pragma once

#include <Eigen/Dense>
#include <complex>

#include "livsic/mobius.hpp"
#include "livsic/transform.hpp"

namespace livsic {

/// Finite atomic stand-in for a model triple: nodes and positive weights
/// with sum w_j/(1+x_j^2) = 1, plus the von Neumann parameter. Deliberately
/// violates the infinite-mass requirement; it exists for dense linear
/// algebra cross-checks, not as a model triple in its own right.
struct DiscreteModel {
    std::vector<double> nodes;
    std::vector<double> weights;
    std::complex<double> kappa;

    int size() const { return static_cast<int>(nodes.size()); }
    /// Finite-sum Weyl function, valid anywhere off the nodes.
    std::complex<double> weyl(std::complex<double> z) const;
    double weighted_sum() const;
};

/// Quantile discretization: nodes at the cell midlevels of the probability
/// measure (1+x^2)^{-1} dmu between quantile_cut and 1-quantile_cut, cell
/// weights taken as exact mu-masses, atoms kept as exact nodes, everything
/// renormalized to the unit weighted sum.
DiscreteModel discretize(const ModelTriple& t, int n, double quantile_cut = 1e-4);

/// Dissipative matrix in the structured family T = diag(d) + gamma v v^T
/// with real d, real v and Im(gamma) >= 0, acting on the flat coordinates
/// h_j = sqrt(w_j) f_j of the discrete L^2 space. The family is closed under
/// half-plane automorphisms of the matrix, and the imaginary part is exactly
/// the rank-one (.,chi) chi with chi = sqrt(Im gamma) v.
struct DissipativeMatrix {
    Eigen::VectorXd diag;
    Eigen::VectorXd factor;
    std::complex<double> coupling;

    int size() const { return static_cast<int>(diag.size()); }
    Eigen::MatrixXcd dense() const;
    Eigen::VectorXd chi() const;
};

/// Realizes the dissipative model operator from the resolvent formula
///   R(z0) = diag((x_j - z0)^{-1}) - p(z0) g_{z0} g_{z0}^T,
/// returning T = R(z0)^{-1} + z0 via the exact rank-one update. Any valid
/// anchor gives the same matrix (tested); default z0 = i.
DissipativeMatrix build_dissipative(const DiscreteModel& d,
                                    std::complex<double> z0 = {0.0, 1.0});

/// (aT + b)(cT + d)^{-1} within the structured family.
DissipativeMatrix mobius_of(const DissipativeMatrix& t, const MobiusMap& f);

/// Characteristic function of a bounded dissipative matrix with rank-one
/// imaginary part (.,chi)chi:
///   S(z) = 1 + 2i <(T* - z)^{-1} chi, chi>.
std::complex<double> char_bounded_trace(const DissipativeMatrix& t,
                                        std::complex<double> z);

/// Dense resolvent from the literal formula; cross-check path for tests.
Eigen::MatrixXcd resolvent_dense(const DiscreteModel& d, std::complex<double> z);

/// Operator-norm residual of R(z1) - R(z2) - (z1-z2) R(z1) R(z2).
double check_resolvent_identity(const DiscreteModel& d, std::complex<double> z1,
                                std::complex<double> z2);

/// Relative operator-norm error of T^{-1} = B^{-1} - p Q against dense
/// inversion, p = (M_N(0) - tau)^{-1}, Q the outer product of the 1/x kernel.
double check_rank_one_inverse(const DiscreteModel& d);

/// Seeded random admissible discrete model (nodes away from 0, |kappa|<=0.9).
DiscreteModel random_discrete_model(int n, unsigned seed);

}  // namespace livsic
