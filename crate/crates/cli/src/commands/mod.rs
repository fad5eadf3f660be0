pub mod analyze;
pub mod bernoulli;
pub mod min_curve;
pub mod reduced;
pub mod rip;
pub mod transition;
