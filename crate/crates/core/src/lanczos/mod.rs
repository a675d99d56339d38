mod state;
mod tridiag;
pub use state::*;
pub use tridiag::*;
