//! Checks the capabilities a clinical case requires against those the
//! technological case provides.

use std::fmt;

use serde::Serialize;

use crate::decimal::{interval_contains, Decimal};
use crate::model::Capability;
use crate::validate::units::{UnitError, UnitTable};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
pub enum MatchStatus {
    Satisfied,
    UnitMismatch,
    RangeNotCovered,
    Missing,
}

impl MatchStatus {
    pub fn as_str(self) -> &'static str {
        match self {
            MatchStatus::Satisfied => "Satisfied",
            MatchStatus::UnitMismatch => "UnitMismatch",
            MatchStatus::RangeNotCovered => "RangeNotCovered",
            MatchStatus::Missing => "Missing",
        }
    }
}

impl fmt::Display for MatchStatus {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

/// Outcome for one required capability. `matched_provider` is the satisfying
/// provider when `Satisfied`; for `RangeNotCovered` and `UnitMismatch` it is
/// the closest same-name provider, kept for reporting.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MatchResult {
    pub required: Capability,
    pub status: MatchStatus,
    pub matched_provider: Option<Capability>,
}

fn base_interval(cap: &Capability, units: &UnitTable) -> Result<(Decimal, Decimal), UnitError> {
    Ok((units.to_base(&cap.low, &cap.unit)?, units.to_base(&cap.high, &cap.unit)?))
}

pub fn match_capabilities(
    required: &[Capability],
    provided: &[Capability],
    units: &UnitTable,
) -> Result<Vec<MatchResult>, UnitError> {
    for cap in required.iter().chain(provided) {
        units.get(&cap.unit)?;
    }

    let mut results = Vec::with_capacity(required.len());
    for req in required {
        let named: Vec<&Capability> = provided.iter().filter(|p| p.name == req.name).collect();
        let Some(first_named) = named.first() else {
            results.push(MatchResult {
                required: req.clone(),
                status: MatchStatus::Missing,
                matched_provider: None,
            });
            continue;
        };

        let dimension = units.get(&req.unit)?.dimension;
        let same_dimension: Vec<&Capability> = named
            .iter()
            .copied()
            .filter(|p| units.get(&p.unit).map(|u| u.dimension) == Ok(dimension))
            .collect();
        let Some(closest) = same_dimension.first() else {
            results.push(MatchResult {
                required: req.clone(),
                status: MatchStatus::UnitMismatch,
                matched_provider: Some((*first_named).clone()),
            });
            continue;
        };

        let (req_low, req_high) = base_interval(req, units)?;
        let mut satisfied = None;
        for p in &same_dimension {
            let (low, high) = base_interval(p, units)?;
            if interval_contains((&low, &high), (&req_low, &req_high)) {
                satisfied = Some(*p);
                break;
            }
        }
        results.push(match satisfied {
            Some(p) => MatchResult {
                required: req.clone(),
                status: MatchStatus::Satisfied,
                matched_provider: Some(p.clone()),
            },
            None => MatchResult {
                required: req.clone(),
                status: MatchStatus::RangeNotCovered,
                matched_provider: Some((*closest).clone()),
            },
        });
    }
    Ok(results)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::Direction;

    fn cap(name: &str, dir: Direction, unit: &str, low: &str, high: &str) -> Capability {
        Capability::new(name, dir, unit, low.parse().unwrap(), high.parse().unwrap())
    }

    fn status(req: Capability, provided: &[Capability]) -> MatchStatus {
        match_capabilities(&[req], provided, &UnitTable::builtin()).unwrap()[0].status
    }

    #[test]
    fn containment_in_same_unit() {
        let p = cap("acoustic_power", Direction::Provided, "W", "0", "300");
        let r = cap("acoustic_power", Direction::Required, "W", "0", "200");
        assert_eq!(status(r, &[p]), MatchStatus::Satisfied);
    }

    #[test]
    fn milliwatts_against_watts() {
        let p = cap("acoustic_power", Direction::Provided, "W", "0", "300");
        let r = cap("acoustic_power", Direction::Required, "mW", "0", "300000");
        assert_eq!(status(r, &[p]), MatchStatus::Satisfied);
    }

    #[test]
    fn range_fails_at_both_ends() {
        let p = cap("sonication_frequency", Direction::Provided, "MHz", "0.6", "1.4");
        let r = cap("sonication_frequency", Direction::Required, "MHz", "0.5", "1.5");
        assert_eq!(status(r, &[p]), MatchStatus::RangeNotCovered);
    }

    #[test]
    fn missing_and_unit_mismatch() {
        let p = cap("acoustic_power", Direction::Provided, "J", "0", "300");
        let r = cap("acoustic_power", Direction::Required, "W", "0", "1");
        assert_eq!(status(r.clone(), &[p]), MatchStatus::UnitMismatch);
        assert_eq!(status(r, &[]), MatchStatus::Missing);
    }

    #[test]
    fn first_satisfying_provider_wins() {
        let narrow = cap("f", Direction::Provided, "kHz", "900", "1000");
        let wide = cap("f", Direction::Provided, "MHz", "0", "2");
        let wider = cap("f", Direction::Provided, "Hz", "0", "5000000");
        let r = cap("f", Direction::Required, "MHz", "0.5", "1.5");
        let results =
            match_capabilities(&[r], &[narrow, wide.clone(), wider], &UnitTable::builtin()).unwrap();
        assert_eq!(results[0].status, MatchStatus::Satisfied);
        assert_eq!(results[0].matched_provider.as_ref(), Some(&wide));
    }

    #[test]
    fn unknown_unit_is_a_configuration_error() {
        let r = cap("f", Direction::Required, "furlong", "0", "1");
        assert_eq!(
            match_capabilities(&[r], &[], &UnitTable::builtin()),
            Err(UnitError::Unknown("furlong".into()))
        );
    }
}
