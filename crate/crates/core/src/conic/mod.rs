//! Standard-form conic programs and an embedded interior-point solver.

mod dump;
mod linalg;
mod presolve;
mod program;
mod solver;
mod svec;

pub use dump::{dump, parse};
pub use linalg::{cholesky, min_eigenvalue, sym_eigen};
pub use presolve::{presolve, PresolveInfeasible, PresolveRecord};
pub use program::{Cone, ConicProgram, ConicSolution, Residuals, SolveStatus};
pub use solver::{solve, Settings};
pub use svec::{side_from_svec_len, smat, svec, svec_index, svec_len, svec_pair, svec_unchecked, SQRT2};
