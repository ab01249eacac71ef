//! Grid-based dependence statistics (MIC, MinIC, MCN and the generalized
//! mean information coefficient family) with Pearson and distance
//! correlation baselines, permutation-style independence tests and seeded,
//! thread-count-independent Monte Carlo power and sample-mean studies.

pub mod baselines;
pub mod charmat;
pub mod cli;
pub mod error;
pub mod grid;
pub mod inference;
pub mod measures;
pub mod report;
pub(crate) mod rng;
pub mod sample;
pub mod sim;

pub use baselines::{distance_correlation, pearson_r2, DcorComponents};
pub use charmat::{
    approx_char_matrix, exact_char_matrix, max_grid_bound, optimize_x_axis, CharacteristicMatrix,
    MineParams,
};
pub use error::{Error, Result};
pub use inference::{
    critical_value, evaluate_statistics, null_distribution, null_distributions, test_independence,
    NullTable, StatKind, StatisticSpec, TestResult,
};
pub use measures::{
    gmic, maximal_char_matrix, mcn, mic, minic, GmicP, MaximalCharacteristicMatrix,
    MCN_DEFAULT_DELTA,
};
pub use grid::{
    contingency, equipartition_axis, mutual_information, Axis, ContingencyTable, GridPartition,
};
pub use report::{
    means_csv, means_json, parse_config_str, power_csv, power_json, to_canonical_string,
    RunManifest,
};
pub use sample::{rank_transform, RankedSample, Sample};
pub use sim::{
    default_noise_grid, default_p_sweep, default_statistics, means_noise_grid, power_study,
    sample_mean_study, seven_level_noise_grid, MeanCell, MeansResult, PowerCell, PowerResult,
    Relationship, SimConfig,
};
