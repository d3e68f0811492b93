pub mod adjoint;
pub mod classifier;
pub mod corpus;
pub mod error;
pub mod finite_section;
pub mod halfplane;
pub mod mapspec;
pub mod mobius;
pub mod report;
pub mod scalar;

pub use error::{Error, Result};
pub use mapspec::{parse_map_spec, MapSpec};
pub use mobius::{ExtPoint, Mobius, Point, Value};
pub use scalar::{lit, Backend, Cplx, Judged, Rat, Real, Sign, C64};

#[cfg(doctest)]
mod book {
    #[doc = include_str!("../../../book/src/introduction.md")]
    mod introduction {}
    #[doc = include_str!("../../../book/src/maps.md")]
    mod maps {}
    #[doc = include_str!("../../../book/src/adjoint.md")]
    mod adjoint {}
    #[doc = include_str!("../../../book/src/verdicts.md")]
    mod verdicts {}
    #[doc = include_str!("../../../book/src/numerics.md")]
    mod numerics {}
    #[doc = include_str!("../../../book/src/cli.md")]
    mod cli {}
}
