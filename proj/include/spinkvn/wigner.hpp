#pragma once

// Matrix-valued Wigner function of a Dirac spinor,
//   W(x,p) = (1/2pi) Int exp(i p theta) psi(x - hbar theta/2) psi^dagger(x + hbar theta/2) dtheta,
// the antiparticle projector P+ and projection diagnostics.

#include "spinkvn/clifford.hpp"
#include "spinkvn/grid.hpp"
#include "spinkvn/kernels.hpp"
#include "spinkvn/potential.hpp"

namespace spinkvn {

/// Throws ConfigError unless `grid` can hold the Wigner transform of a spinor
/// on `spinor_grid`: same x axis, momentum range symmetric about zero,
/// p_max - p_min >= 2 pi hbar / dx (no aliasing of the x-grid band) and
/// dp >= pi hbar / L (shift window no longer than the correlation period).
void check_wigner_grid(const PhaseGrid& spinor_grid, const PhaseGrid& grid, double hbar);

WignerMatrixField wigner_transform(const SpinorField& psi, const PhaseGrid& grid, double hbar,
                                   Exec exec = Exec::parallel);

/// Sum of diagonal elements. Throws IntegrityError if any trace has an
/// imaginary part above 1e-8.
PhaseSpaceDensity wigner_representation(const WignerMatrixField& w);

/// (1/2)(1 + (c alpha_k (p - eA)^k + m c^2 gamma^0) / K).
Matrix4 positive_energy_projector(double p, double x, const Potential& pot, const Constants& k);

struct ProjectorTable {
  MatrixTable table;
  BlockMap map;
};

/// P+ (or P- = 1 - P+) at every grid point. Collapses to one entry per
/// momentum when the potential is uniform.
ProjectorTable make_projector_table(const PhaseGrid& grid, const Potential& pot, const Constants& k,
                                    bool complement = false);

/// W0 = P+ W P+ pointwise.
WignerMatrixField project_state(const WignerMatrixField& w, const Potential& pot, const Constants& k,
                                Exec exec = Exec::parallel);

/// sum Tr[(1 - P+) W (1 - P+)] / sum Tr W. Throws PreconditionError if the
/// total trace is not positive.
double antiparticle_fraction(const WignerMatrixField& w, const Potential& pot, const Constants& k,
                             Exec exec = Exec::parallel);

/// sum_p Tr W dp for each x.
std::vector<double> position_marginal(const WignerMatrixField& w);

}  // namespace spinkvn
