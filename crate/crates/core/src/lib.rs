//! The composition nearring of integer polynomials.
//!
//! `(Z[x], +, ∘)` is a nearring: composition is associative and right
//! distributive over addition, but not left distributive. This crate
//! provides exact polynomial arithmetic including composition, the
//! membership characterizations for the subnearrings generated by subsets
//! of `{1, x, x^2, x^3}`, a bounded brute-force closure engine over integer
//! coefficient lattices that serves as an independent oracle for those
//! characterizations, and derivation terms acting as membership
//! certificates.

pub mod checks;
pub mod closure;
pub mod lattice;
pub mod numtheory;
pub mod poly;
pub mod predicates;
pub mod witness;

pub use poly::Poly;

/// Arbitrary-precision integer polynomial, the universe element of the nearring.
pub type IntPoly = Poly<num_bigint::BigInt>;

/// Machine-word polynomial, handy for small exact computations in tests.
pub type Poly64 = Poly<i64>;
