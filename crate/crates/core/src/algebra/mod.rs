//! Finite fields, embeddings and polynomials.

pub mod embed;
pub mod field;
pub mod linalg;
pub mod parse;
pub mod poly;
pub mod univariate;

pub use embed::{embed, Embedding};
pub use field::{make_field, Elem, FieldElement, Gf};
pub use parse::{parse_poly, parse_poly_with};
pub use poly::{monomials_of_degree, Evaluator, Monomial, Poly};
