//! Rank-metric codes over `F_{q^m}`, the Loidreau encryption scheme, and a
//! structural key-recovery attack for rank multiplier `λ = 2`.

pub mod field;
pub mod poly;
pub mod linalg;
pub mod subspaces;
pub mod gabidulin;
pub mod loidreau;
pub mod distinguisher;
pub mod attack;
pub mod io;

use rand::SeedableRng;
use rand_chacha::ChaCha20Rng;

/// Independent generator for trial `index` of a campaign seeded with
/// `master`; serial and parallel runs see identical streams.
pub fn trial_rng(master: u64, index: u64) -> ChaCha20Rng {
    let mut rng = ChaCha20Rng::seed_from_u64(master);
    rng.set_stream(index);
    rng
}
