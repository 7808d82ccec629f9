//! Exact linear algebra: Smith normal form over ℤ, elimination over ℚ and ℤ/p,
//! and cohomology of finite cochain complexes.

pub mod cohomology;
pub mod complex;
pub mod field;
pub mod integer;

pub use cohomology::{BigradedCohomology, Coeff, CohomologyResult, Graded, Group};
pub use complex::{solve_in_image, FiniteCochainComplex, Preimage};
pub use field::{Echelon, Field, PrimeField, Rationals};
pub use integer::{invariant_factors, smith_normal_form, IntegerMatrix, SnfResult};
