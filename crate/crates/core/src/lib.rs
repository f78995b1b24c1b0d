pub mod chains;
pub mod error;
pub mod formulas;
pub mod harness;
pub mod io;
pub mod kinds;
pub mod koszul;
pub mod linalg;
pub mod model;
pub mod region;
pub mod spectra;
pub mod structured;
pub mod tensor;

pub use error::{Error, Result};

// The book's snippets run as doctests.
#[cfg(doctest)]
mod book {
    #[doc = include_str!("../../../book/src/intro.md")]
    mod intro {}
    #[doc = include_str!("../../../book/src/tuples.md")]
    mod tuples {}
    #[doc = include_str!("../../../book/src/koszul.md")]
    mod koszul {}
    #[doc = include_str!("../../../book/src/spectra.md")]
    mod spectra {}
    #[doc = include_str!("../../../book/src/products.md")]
    mod products {}
    #[doc = include_str!("../../../book/src/structured.md")]
    mod structured {}
    #[doc = include_str!("../../../book/src/verify.md")]
    mod verify {}
}
