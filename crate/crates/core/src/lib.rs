pub mod cyclo;
pub mod error;
pub mod isoclass;
pub mod liftings;
pub mod realization;
pub mod rewrite;
pub mod samples;
pub mod smash;
pub mod verify;
