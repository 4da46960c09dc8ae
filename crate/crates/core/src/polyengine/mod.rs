//! Exact polynomial arithmetic over the rationals and Gröbner bases.

pub mod groebner;
pub mod ideal;
pub mod io;
pub mod lattice;
pub mod monomial;
pub mod order;
pub mod polynomial;

pub use groebner::{
    buchberger, is_groebner_basis, normal_form, BinomialReducer, GbCheck, GroebnerBasis, DEFAULT_PAIR_BUDGET,
};
pub use ideal::{
    ideal_contains, ideal_intersect, ideal_quotient, ideals_equal, minimal_generator_count, radical_membership,
    saturate, saturate_by_quotients, Ideal,
};
pub use io::IdealFile;
pub use monomial::Monomial;
pub use order::MonomialOrder;
pub use polynomial::{q, Coeff, Polynomial};
