//! Anisotropic Littlewood-Paley layer: smooth dyadic bump partitions along
//! the vertical and horizontal frequency axes, block and low-pass projectors,
//! paraproduct splittings of a dealiased product, and empirical verifiers
//! for the inequalities the continuation argument rests on.

pub mod baselines;
mod blocks;
mod bony;
mod partition;
mod verify;

pub use blocks::{
    aniso_norm_lp, horizontal_block, horizontal_low_pass, lp_block, vertical_block,
    vertical_low_pass, BlockIndex, Direction,
};
pub use bony::{bony_horizontal, bony_vertical};
pub use partition::{build_partition, chi, phi, smooth_step, DyadicPartition};
pub use verify::{
    cjk_profile, norm_equivalence_constant, product_law_ratio, verify_bernstein,
    verify_product_law, BernsteinEnvelope, BernsteinRecord, BernsteinReport, CjkProfile,
    ProductLawRecord, ProductLawReport,
};
