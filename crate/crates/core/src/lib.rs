//! Ground-state energies of one-dimensional Schrödinger operators
//! `H = -d^2/dx^2 + V(x)` with polynomial potentials.
//!
//! The crate provides two independent routes to the ground-state energy:
//!
//! * **Perturbed exact ansatz** ([`ansatz`] + [`quadrature`]): a trial state
//!   `phi = exp(-h)` with polynomial exponent `h` is tuned so that `phi` is
//!   the exact ground state of a nearby solvable potential (the low-degree
//!   residual terms are annihilated by a Newton iteration); the leftover
//!   residual then contributes a first-order energy correction computed by
//!   adaptive Gauss-Legendre quadrature. The sum `E0 + E1` equals the
//!   Rayleigh quotient of `phi`, hence is a variational upper bound.
//! * **Rayleigh-Ritz benchmark** ([`ritz`]): diagonalization in a
//!   harmonic-oscillator basis with a frequency scan and basis-size doubling
//!   until the energy settles, giving reference values the ansatz results
//!   can be compared against.
//!
//! [`polynomial`] supplies the shared dense-polynomial arithmetic and the
//! text parser for potentials like `"x^2 - x^3 + x^4"`.

pub mod ansatz;
mod linalg;
pub mod polynomial;
pub mod quadrature;
pub mod ritz;

pub use ansatz::{
    default_multistart_grid, is_admissible, solve, solve_full_space, AnsatzConfig, AnsatzError,
    AnsatzSolution, StartDiagnostic, StartOutcome,
};
pub use linalg::SymmetricMatrix;
pub use polynomial::{parse_potential, ParseError, Parity, Polynomial};
pub use quadrature::{
    first_order_correction, integrate_weighted, integration_radius, PerturbationResult,
    QuadratureConfig, QuadratureError,
};
pub use ritz::{
    converge_ground_state, default_frequency_grid, frequency_scan, hamiltonian_matrix,
    lowest_eigenvalue, position_matrix, FrequencyOutcome, RitzConfig, RitzError, RitzResult,
};
