//! Output formats: GSN diagrams as DOT, reports as JSON.

mod dot;
mod json;

pub use dot::{to_dot, DotInput, RankSepError, RenderOptions};
pub use json::{report_json, Report};
