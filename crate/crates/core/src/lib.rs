pub mod cplx;
pub mod dmod;
pub mod error;
pub mod fpmod;
pub mod functors;
pub mod linalg;
pub mod pid;
pub mod ring;
pub mod verify;

pub use error::{Error, Result};
pub use ring::{ChainElem, ChainRing, Elem, Ring};
pub use fpmod::{ModElem, ModMap, Module};
pub use dmod::DiffMod;
pub use cplx::Complex;
