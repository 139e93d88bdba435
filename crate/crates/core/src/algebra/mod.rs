//! Exact polynomial arithmetic and Gröbner bases over `QQ` and `F_p`.

pub mod field;
pub mod groebner;
pub mod monomial;
pub mod poly;
pub mod system;
pub mod text;

pub use field::{is_prime, random_prime, Field, PrimeField, Rationals, PRIME_RANGE};
pub use groebner::{groebner_basis, is_groebner_basis, normal_form, GbConfig, GbStats, GroebnerBasis};
pub use monomial::{Monomial, MonomialOrder, VarId};
pub use poly::{PolyRing, Polynomial, Registry, Term, VarClass, VarInfo};
pub use system::{OrderChoice, PolySystem, PresolveStats};
pub use text::{export_system, parse_system, ParsedSystem};
