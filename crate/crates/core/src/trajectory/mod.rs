//! Scene and trajectory data model, case logs, kinematics, ROI and crash detection.

mod collision;
mod kinematics;
mod log;
mod resample;
mod roi;
mod types;

pub use collision::{boxes_overlap, detect_crash, frame_collides, CONTACT_TOLERANCE};
pub use kinematics::{derive_kinematics, refresh_from, KINEMATIC_LAG};
pub use log::{case_to_string, parse_case, parse_case_str, parse_header, write_case, write_frame, CaseHeader, FrameDecoder, CASE_SCHEMA};
pub use resample::{is_irregular, resample_if_irregular, resample_uniform, IRREGULAR_GAP_TOLERANCE};
pub use roi::{in_roi, roi_filter};
pub use types::*;
