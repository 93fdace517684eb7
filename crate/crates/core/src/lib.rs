//! Coevents, quantum measures and q-integrals on finite sample spaces, with an
//! exact feasibility engine for deciding which coevents a q-measure can
//! generate or actualize.

pub mod census;
pub mod filters;
pub mod integral;
pub mod linfeas;
pub mod logic;
pub mod measure;
pub mod rational;
