//! Completion of incomplete pairwise comparison matrices with DEMATEL,
//! plus the AHP machinery around it: consistency ratios, eigenvector
//! priorities, head-to-head ingestion and CSV reports.
//!
//! ```
//! use ahpfill_core::{complete, parse_pcm_csv, priorities, CompletionOptions};
//!
//! let text = "A,B,C\n1,2,*\n1/2,1,3\n*,1/3,1\n";
//! let pcm = parse_pcm_csv(text, &Default::default()).unwrap().pcm;
//! let report = complete(&pcm, &CompletionOptions::default()).unwrap();
//! assert!((report.completed.get(0, 2) - 6.0).abs() < 1e-9);
//! let pv = priorities(&report.completed).unwrap();
//! assert_eq!(pv.ranking, vec![0, 1, 2]);
//! ```

pub mod completion;
pub mod dematel;
pub mod io;
pub mod matrix;
pub mod pcm;
pub mod rank;
pub mod synth;

pub use completion::{
    complete, from_total_relation, to_direct_relation, CompletionError, CompletionMode,
    CompletionOptions, CompletionReport, FilledCell,
};
pub use dematel::{
    normalize, prominence, total_relation, truncated_series, Category, DematelError,
    DirectRelationMatrix, ProminenceRecord, TotalRelationMatrix,
};
pub use io::{
    headtohead_to_pcm, parse_headtohead_csv, parse_pcm_csv, parse_relation_csv, write_matrix_csv,
    write_prominence_csv, write_ranking_report, HeadToHeadTable, IoError, MatrixView, ParseOptions,
    TransformConfig,
};
pub use matrix::{
    principal_eigenpair, solve_linear, spectral_radius_estimate, DenseMatrix, EigenPair,
    MatrixError,
};
pub use pcm::{
    components, connectivity, consistency, priorities, random_index, CompletePcm,
    ConsistencyReport, IncompletePcm, PcmError, PriorityVector, ValidateOptions,
};
pub use rank::kendall_tau_b;
