//! Exact computations with blocks of finite group algebras over prime fields,
//! group-graded crossed products, bimodules and Morita contexts, together with
//! constructive checks of the centralizer map into graded endomorphism algebras,
//! its compatibility with graded Morita equivalences, and the transport of a
//! graded Morita equivalence between ambient groups inducing the same
//! automorphisms of a normal subgroup.

pub mod algebra;
pub mod bimodule;
pub mod butterfly;
pub mod error;
pub mod field;
pub mod graded_morita;
pub mod grading;
pub mod groups;
pub mod linalg;
pub mod morita;
pub mod poly;

pub use algebra::{Algebra, AlgebraDump, AlgebraElement, BlockDecomposition, Subalgebra};
pub use bimodule::{Bimodule, DualBimodule, GradedBimodule, IsoOutcome, Side, TensorQuotient};
pub use butterfly::{ButterflyScenario, CentralizerLayer, TransportResult};
pub use error::{Error, Result};
pub use field::PrimeField;
pub use graded_morita::{DeltaWitness, DiagramReport, GradedCentralizer, GradedEndAlgebra, GradedMoritaWitness};
pub use grading::{BlockExtension, DiagonalAlgebra, GradedAlgebra};
pub use groups::{FiniteGroup, GroupSpec, QuotientGroup, Subgroup};
pub use linalg::{Matrix, Subspace, Vector};
pub use morita::{DeltaModuleStructure, DeltaSearch, InducedBimodule, MoritaContext};
