pub mod cache;
pub mod catalog;
pub mod expand;
pub mod kern;

pub use cache::{expand_cached, ExpansionCache};
pub use expand::{expand, Direction};
pub use kern::{rational_identity_check, Kern, Lin};
