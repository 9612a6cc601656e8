//! The (Q, R, P) families and their numeric evaluation.

pub mod entry;
pub mod envelope;
pub mod forms;
pub mod instance;
pub mod profile;
pub mod superpotential;

pub use entry::{
    compile, compile_unchecked, enumerate_catalog, find_entry, formula_count, validate,
    CatalogEntry, InstanceParams,
};
pub use envelope::{EnvFactor, Envelope};
pub use forms::{GammaPattern, QForm, RForm, ALL_Q_FORMS, ALL_R_FORMS};
pub use instance::{default_domain, l_cut, Domain, EndKind, InstanceSource, SuperpotentialInstance};
pub use profile::{NuClass, ProfileKind, ScalarProfile};
pub use superpotential::{PTerm, Superpotential};
