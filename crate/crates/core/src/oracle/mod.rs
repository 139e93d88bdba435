//! Independent combinatorial values of three-point invariants on small
//! flag varieties: classical structure constants, the quantum Monk rule
//! and closed forms on `P^1`.

mod quantum;
mod schubert;

pub use quantum::{gw_divisor, p1_gw, quantum_monk, ExpansionTerm, P1Class, SchubertExpansion};
pub use schubert::{gw_classical, schubert_poly, struct_const, IntPoly, SchubertCache};
