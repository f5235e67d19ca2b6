//! Classes of modules, Ext-orthogonality and cotorsion-pair checks inside a
//! finite universe.

mod checks;
mod class;
mod universe;

pub use checks::{
    check_completeness, check_cotorsion_pair, check_hereditary, check_thm_assumptions,
    cotorsion_report, Approximation, AssumptionsReport, CompletenessReport, CotorsionReport,
    HereditaryReport, PairCheck, Witness,
};
pub use class::{is_flat, is_injective, is_projective, perp, ClassSpec, Side};
pub use universe::{ExtTables, Universe, UniverseInfo};
