//! The unrestricted wreath product `W = B Wr H` and the subgroups
//! `G_S = ⟨x_1, ..., x_n, ā, b̄_S⟩`.
//!
//! Conventions: `(h f h⁻¹)(x) = f(h⁻¹x)`, `ā` is `a` at the identity and `1`
//! elsewhere, `b̄_S` is `b` on `S` and `1` off it.

mod collect;
mod oracle;
mod window;
mod word;

pub use collect::{collect, BClass, ClassPartition, CollectedForm, Factor, Lamp};
pub use oracle::{
    elements_equal, is_identity_finite, is_identity_generic, is_identity_window, Verdict, WindowOracle, WindowVerdict, Witness,
};
pub use window::WindowElement;
pub use word::{Generator, Letter, MarkedWord};
