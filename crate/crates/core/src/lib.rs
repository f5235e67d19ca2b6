pub mod bifunctor;
pub mod complex;
pub mod config;
pub mod cotorsion;
pub mod error;
pub mod exec;
pub mod gen;
pub mod harness;
pub mod module;
pub mod products;
pub mod ring;

pub use config::CheckConfig;
pub use error::{Error, Result};
pub use exec::Exec;
pub use module::{FPModule, Morphism, ShortExactSequence};
pub use ring::{Matrix, Ring};
