//! Point-vortex rings on the constant-curvature surfaces M_λ.
//!
//! The crate covers the chart geometry ([`geometry`]), N-vortex dynamics
//! ([`vortex`]), regular rings ([`ring`]), the Hessian and Fourier-mode
//! structure at a ring ([`spectral`]), stability classification and
//! bifurcation values ([`stability`]) and the dihedral bifurcation analysis
//! including the degenerate-point probes ([`bifurcation`]).

pub mod bifurcation;
pub mod diff;
pub mod error;
pub mod geometry;
pub mod ring;
pub mod spectral;
pub mod stability;
pub mod vortex;

pub use error::{Error, Result, Warning};
pub use geometry::{AmbientPoint, GreensChoice, SurfaceParam};
pub use num_complex::Complex64;
pub use ring::RingSpec;
pub use vortex::{Trajectory, VortexConfig};
