//! Rule engine: GSN well-formedness on single cases (G rules, plus U1 for
//! capability units) and separation discipline on bundles (S rules).

pub mod capability;
pub mod units;

mod bundle_rules;
mod case_rules;

use crate::diag::{sort_diagnostics, Diagnostic};
use crate::model::{AssuranceCase, Bundle};

pub use bundle_rules::capability_report;
pub(crate) use bundle_rules::reference_rules;
use units::UnitTable;

/// G1-G7 and U1 against the built-in unit table, ordered by span.
pub fn validate_case(case: &AssuranceCase) -> Vec<Diagnostic> {
    validate_case_with(case, &UnitTable::builtin())
}

pub fn validate_case_with(case: &AssuranceCase, units: &UnitTable) -> Vec<Diagnostic> {
    let mut out = case_rules::check(case, units);
    sort_diagnostics(&mut out);
    out
}

/// S1-S7 against the built-in unit table. Member cases are not re-checked
/// with the G rules; callers run [`validate_case`] on each as needed.
pub fn validate_bundle(bundle: &Bundle) -> Vec<Diagnostic> {
    validate_bundle_with(bundle, &UnitTable::builtin())
}

pub fn validate_bundle_with(bundle: &Bundle, units: &UnitTable) -> Vec<Diagnostic> {
    let mut out = bundle_rules::check(bundle, units);
    sort_diagnostics(&mut out);
    out
}

/// G rules on every member plus the S rules, merged in canonical order.
pub fn validate_bundle_full(bundle: &Bundle, units: &UnitTable) -> Vec<Diagnostic> {
    let mut out: Vec<Diagnostic> = bundle
        .cases()
        .flat_map(|c| case_rules::check(c, units))
        .collect();
    out.extend(bundle_rules::check(bundle, units));
    sort_diagnostics(&mut out);
    out
}

