//! Exact symbolic verification engine for complex Poisson structures on
//! hypercomplex manifolds and flat twistor spaces.

pub mod context;
pub mod error;
pub mod exterior;
pub mod liealg;
pub mod linalg;
pub mod properties;
pub mod quaternionic;
pub mod report;
pub mod sample;
pub mod scalar;
pub mod schouten;
pub mod twistor;

pub use context::{ContextBuilder, Del, FrameContext, VectorField};
pub use error::{Error, Result};
pub use exterior::{BasisSpec, FormField, LinearOperator, Multivector, VectorValuedForm};
pub use linalg::Matrix;
pub use report::{Report, Status};
pub use scalar::{GaussRat, Poly, RootRelation, Scalar, Var, VarTable};
