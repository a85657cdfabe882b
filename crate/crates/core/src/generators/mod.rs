//! Reproducible problem instances.
//!
//! All randomness comes from ChaCha20 seeded with `seed_from_u64(seed)`.
//! Each independent object draws from its own stream (`set_stream`), so
//! adding or removing one object never shifts the numbers of another:
//!
//! | object                          | stream     |
//! |---------------------------------|------------|
//! | Hessian `P_i`                   | `2 i`      |
//! | linear term and constant of `i` | `2 i + 1`  |
//! | two-norm sample points          | `1000`     |
//! | train/test permutation          | `1001`     |

pub mod data;
pub mod kernel;
pub mod mkl;
pub mod random;

pub use data::{gen_twonorm, load_csv, Dataset, TWONORM_DIM};
pub use kernel::{gram_matrix, kernel_eval, Kernel};
pub use mkl::{build_mkl_qcqp, DatasetSource, MklInstance, MklMetadata, MklSpec, SvmKind};
pub use random::{
    eigen_range_for_condition, gen_infeasible, gen_random_qcqp, gen_unbounded, RandomQcqpSpec,
    EIGEN_RANGE_PRESETS,
};

use rand::SeedableRng;
use rand_chacha::ChaCha20Rng;

pub const STREAM_POINTS: u64 = 1000;
pub const STREAM_SPLIT: u64 = 1001;

/// Generator for `stream` under `seed`.
pub fn stream_rng(seed: u64, stream: u64) -> ChaCha20Rng {
    let mut rng = ChaCha20Rng::seed_from_u64(seed);
    rng.set_stream(stream);
    rng
}

pub(crate) fn hessian_stream(index: usize) -> u64 {
    2 * index as u64
}

pub(crate) fn vector_stream(index: usize) -> u64 {
    2 * index as u64 + 1
}
