//! Region (mIoU) and F-measure evaluation, and table-style reporting.

mod metrics;
mod report;

pub use metrics::{
    evaluate_sequence, frame_fscore, EvalResult, FrameMask, FrameScore, PerFrame, RunningMean,
    DEFAULT_BETA_SQ,
};
pub use report::{report_table, Report, ReportEntry, ResultTable};
