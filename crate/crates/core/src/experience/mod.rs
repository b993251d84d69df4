//! Time efficiency, comfort and energy terms.

mod comfort;
mod efficiency;
mod energy;

pub use comfort::*;
pub use efficiency::*;
pub use energy::*;
