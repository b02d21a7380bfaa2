//! Exact ground truth: partition numbers, rational polynomials, Jensen and
//! Hermite polynomials, and Sturm root counting.

mod jensen;
mod partition;
mod poly;
mod sturm;

pub use jensen::{
    binomial, hermite_poly, hermite_poly_physicists, jensen_coeffs, jensen_poly, JensenSpec,
};
pub use partition::{PartitionTable, MAX_TABLE_N};
pub use poly::ExactPoly;
pub use sturm::{is_hyperbolic_sturm, squarefree_degree, sturm_chain, sturm_real_root_count};
