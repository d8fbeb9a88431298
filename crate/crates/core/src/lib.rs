//! Exact line arrangements in the real projective plane, their dual
//! quadrilateral tilings, coherent point/line configurations on those
//! tilings, and Desargues flips driven by moving lines.

pub mod arrangement;
pub mod exact;
pub mod coherence;
pub mod seed;
pub mod flip;
pub mod relations;
pub mod poly;
pub mod motion;
pub mod io;
pub mod render;
pub mod checks;
