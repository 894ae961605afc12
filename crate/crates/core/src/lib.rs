//! Arithmetic-topology laboratory for knot families with number-theoretic
//! behavior.
//!
//! Two concrete countable knot families are enumerated exactly — the
//! periodic orbits of a hyperbolic torus automorphism inside its mapping
//! torus, and the primitive closed geodesics of the modular surface — and
//! fed through the analogue of prime-splitting machinery: Frobenius classes
//! in finite quotients, natural and Dirichlet density of splitting
//! statistics, ramification bookkeeping in finite covers, and the mod-p
//! linear algebra of linking-number restriction maps.
//!
//! Module map:
//! * [`mat2`] — exact 2x2 integer matrices and Smith normal form,
//! * [`fingroup`] — finite groups as multiplication tables, conjugacy
//!   classes, quotients, and peripheral-image plumbing,
//! * [`library`] — a catalogue of small groups for exhaustive sweeps,
//! * [`orbitgen`] — the two knot families, their orderings, lengths,
//!   Frobenius data, and the on-disk record format,
//! * [`density`] — counting functions, zeta partial products, natural and
//!   Dirichlet densities, and the comparison reports,
//! * [`covers`] — decomposition/inertia data, subcover splitting, composita
//!   and rigidity sweeps, residue-degree multiplicativity,
//! * [`localglobal`] — F_p restriction maps from linking matrices,
//!   reciprocity and duality checks, seeded surjectivity experiments.

pub mod covers;
pub mod density;
pub mod error;
pub mod fingroup;
pub mod library;
pub mod localglobal;
pub mod mat2;
pub mod orbitgen;

pub use error::{Error, Result};
pub use fingroup::{ConjClass, FiniteGroup, QuotientMap, SourceModel};
pub use mat2::Mat2;
pub use orbitgen::{
    CatFamily, CatOrbit, Family, GeodesicClass, KnotFamily, LengthAssignment, LengthScheme,
    OrbitRecord, TorusPoint,
};
