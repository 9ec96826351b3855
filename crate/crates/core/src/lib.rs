//! Analysis toolkit for two-party XOR games.
//!
//! An XOR game asks two non-communicating players questions `x, y ∈ [m]`;
//! each answers with a bit and the pair wins iff the XOR of the answers
//! equals a predicate `f(x, y)`. The whole game is captured by the signed
//! probability matrix `Φ̃ = Σ (−1)^{f(x,y)} P(x,y) |x⟩⟨y|`.
//!
//! The crate computes, for any such game:
//!
//! * the exact optimal classical value (rational arithmetic, full strategy
//!   enumeration),
//! * the optimal quantum value via the elliptope semidefinite relaxation,
//!   together with a dual certificate,
//! * a necessary-and-sufficient certificate for the absence of quantum
//!   advantage, built from the diagonal matrices `Σ`, `Λ` of any optimal
//!   classical strategy,
//! * the 2m²-vertex game graph, its closed-form spectrum, its independence
//!   number, and its Lovász theta value, certifying zero-error (class-1)
//!   capacity through the `α = θ` sandwich.

pub mod certificate;
pub mod error;
pub mod families;
pub mod game;
pub mod graph;
pub mod numerics;
pub mod quantum;
pub mod rational;
pub mod sdp;
pub mod theta;

pub use certificate::{
    AdvantageCertificate, Definiteness, NoAdvantageReport, PmOneCertificate,
};
pub use error::Error;
pub use families::{FamilyKind, FamilySpec, GeneratedGame, PropertyTag, SignedPermutation};
pub use game::{ClassicalSolution, GameMatrix, Strategy, XorGame};
pub use graph::{GameGraph, Graph, GraphSpectrumReport, StructuralReport};
pub use numerics::{EigenDecomposition, RealMatrix, Spectrum, SvdDecomposition, SymmetricMatrix};
pub use quantum::{BlockGameMatrix, NormSaturation, QuantumSolution};
pub use sdp::{ElliptopeProgram, EigMinProgram, SdpSolution, SolveStatus};
pub use theta::{CapacityCertificate, ThetaWitness};

/// Crate-wide `Result` alias.
pub type Result<T> = std::result::Result<T, Error>;
