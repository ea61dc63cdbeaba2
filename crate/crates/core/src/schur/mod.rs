//! Charlier and Meixner ensembles as Schur measures on partitions, and
//! truncated checks of the Cauchy-type identities they satisfy.

mod cauchy;
mod partition;

pub use cauchy::{
    charlier_shell, meixner_shell, verify_charlier_cauchy, verify_meixner_cauchy, verify_nb_cauchy,
    verify_poissonised_cauchy, CauchyReport, LowerParameterVerdict, MeixnerCauchyReport, SchurMeasure, ShellReport,
    Truncation,
};
pub use partition::{config_to_partition, partitions_iter, partitions_of, Partition};
