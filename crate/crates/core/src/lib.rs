pub mod agreement;
pub mod cli;
pub mod corpus;
pub mod error;
pub mod eval;
pub mod features;
pub mod joint;
pub mod pipeline;
pub mod learners;

pub use error::{Error, Result};
