//! Antichain rowmotion on finite posets across four realms: combinatorial,
//! piecewise-linear (tropical), birational (rational functions) and
//! noncommutative (matrix evaluation), together with Stanley-Thomas words
//! and homomesy checks on products of two chains.

pub mod combinatorial;
pub mod error;
pub mod poset;
pub mod realm;
pub mod rng;
pub mod stword;
pub mod transfer;

pub use error::{Error, Result};
pub use poset::{
    build_named_poset, build_poset, fibers, product_of_chains, Antichain, FinitePoset, Grid, OrderFilter, OrderIdeal,
    RectanglePoset,
};
pub use realm::{GenericSample, Realm};
pub use stword::{st_word, StWord};
pub use transfer::{antichain_rowmotion, iterate, toggle, transfer, Dynamics, Labeling, Mode, Orbit, TransferKind};
