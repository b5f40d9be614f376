//! Unit symbols, their dimensions and scale factors to the dimension's base
//! unit. Conversion only ever happens within one dimension.

use std::collections::BTreeMap;
use std::fmt;

use serde::Serialize;
use thiserror::Error;

use crate::decimal::Decimal;

#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
#[serde(transparent)]
pub struct UnitSymbol(String);

impl UnitSymbol {
    pub fn as_str(&self) -> &str {
        &self.0
    }
}

impl From<&str> for UnitSymbol {
    fn from(s: &str) -> Self {
        UnitSymbol(s.to_string())
    }
}

impl From<String> for UnitSymbol {
    fn from(s: String) -> Self {
        UnitSymbol(s)
    }
}

impl fmt::Display for UnitSymbol {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.0)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Dimension {
    Power,
    Energy,
    Time,
    Frequency,
    Length,
    Temperature,
    Intensity,
}

impl Dimension {
    pub const ALL: [Dimension; 7] = [
        Dimension::Power,
        Dimension::Energy,
        Dimension::Time,
        Dimension::Frequency,
        Dimension::Length,
        Dimension::Temperature,
        Dimension::Intensity,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Dimension::Power => "power",
            Dimension::Energy => "energy",
            Dimension::Time => "time",
            Dimension::Frequency => "frequency",
            Dimension::Length => "length",
            Dimension::Temperature => "temperature",
            Dimension::Intensity => "intensity",
        }
    }

    /// Case-insensitive.
    pub fn from_name(name: &str) -> Option<Self> {
        Dimension::ALL.into_iter().find(|d| d.name().eq_ignore_ascii_case(name))
    }
}

impl fmt::Display for Dimension {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct UnitDef {
    pub symbol: UnitSymbol,
    pub dimension: Dimension,
    pub scale_to_base: Decimal,
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum UnitError {
    #[error("unknown unit symbol `{0}`")]
    Unknown(String),
    #[error("units file line {line}: {message}")]
    Syntax { line: usize, message: String },
    #[error("unit `{0}` must have a positive scale")]
    NonPositiveScale(String),
    #[error("unit `{symbol}` redefined with a different dimension or scale")]
    Conflict { symbol: String },
    #[error("dimension {dimension} already has base unit `{existing}`; `{symbol}` cannot also have scale 1")]
    SecondBase { dimension: Dimension, existing: String, symbol: String },
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct UnitTable {
    units: BTreeMap<UnitSymbol, UnitDef>,
}

impl Default for UnitTable {
    fn default() -> Self {
        UnitTable::builtin()
    }
}

impl UnitTable {
    pub fn empty() -> Self {
        UnitTable { units: BTreeMap::new() }
    }

    pub fn builtin() -> Self {
        use Dimension::*;
        let mut table = UnitTable::empty();
        let builtin: &[(&str, Dimension, i64, u32)] = &[
            ("W", Power, 1, 0),
            ("mW", Power, 1, 3),
            ("kW", Power, 1000, 0),
            ("J", Energy, 1, 0),
            ("kJ", Energy, 1000, 0),
            ("s", Time, 1, 0),
            ("ms", Time, 1, 3),
            ("min", Time, 60, 0),
            ("Hz", Frequency, 1, 0),
            ("kHz", Frequency, 1_000, 0),
            ("MHz", Frequency, 1_000_000, 0),
            ("m", Length, 1, 0),
            ("mm", Length, 1, 3),
            ("cm", Length, 1, 2),
            ("degC", Temperature, 1, 0),
            ("W_per_cm2", Intensity, 1, 0),
        ];
        for &(symbol, dimension, mantissa, scale) in builtin {
            table
                .insert(UnitDef {
                    symbol: symbol.into(),
                    dimension,
                    scale_to_base: Decimal::from_scaled(mantissa, scale),
                })
                .expect("built-in unit table is consistent");
        }
        table
    }

    pub fn insert(&mut self, def: UnitDef) -> Result<(), UnitError> {
        if !def.scale_to_base.is_positive() {
            return Err(UnitError::NonPositiveScale(def.symbol.to_string()));
        }
        if let Some(existing) = self.units.get(&def.symbol) {
            return if existing == &def {
                Ok(())
            } else {
                Err(UnitError::Conflict { symbol: def.symbol.to_string() })
            };
        }
        if def.scale_to_base == Decimal::one() {
            if let Some(base) = self.base_unit(def.dimension) {
                return Err(UnitError::SecondBase {
                    dimension: def.dimension,
                    existing: base.symbol.to_string(),
                    symbol: def.symbol.to_string(),
                });
            }
        }
        self.units.insert(def.symbol.clone(), def);
        Ok(())
    }

    pub fn base_unit(&self, dimension: Dimension) -> Option<&UnitDef> {
        self.units
            .values()
            .find(|u| u.dimension == dimension && u.scale_to_base == Decimal::one())
    }

    pub fn get(&self, symbol: &UnitSymbol) -> Result<&UnitDef, UnitError> {
        self.units
            .get(symbol)
            .ok_or_else(|| UnitError::Unknown(symbol.to_string()))
    }

    pub fn contains(&self, symbol: &UnitSymbol) -> bool {
        self.units.contains_key(symbol)
    }

    pub fn iter(&self) -> impl Iterator<Item = &UnitDef> {
        self.units.values()
    }

    pub fn to_base(&self, value: &Decimal, symbol: &UnitSymbol) -> Result<Decimal, UnitError> {
        Ok(value * &self.get(symbol)?.scale_to_base)
    }

    /// Adds the definitions of a `.units` file: one `symbol dimension scale`
    /// per line; blank lines and `#` comments are ignored.
    pub fn extend_from_text(&mut self, text: &str) -> Result<(), UnitError> {
        for def in parse_units_file(text)? {
            self.insert(def)?;
        }
        Ok(())
    }
}

pub fn parse_units_file(text: &str) -> Result<Vec<UnitDef>, UnitError> {
    let mut defs = Vec::new();
    for (n, raw) in text.lines().enumerate() {
        let line = n + 1;
        let content = raw.split('#').next().unwrap_or("").trim();
        if content.is_empty() {
            continue;
        }
        let fields: Vec<&str> = content.split_whitespace().collect();
        let syntax = |message: String| UnitError::Syntax { line, message };
        let [symbol, dimension, scale] = fields[..] else {
            return Err(syntax(format!("expected `symbol dimension scale`, found `{content}`")));
        };
        if !crate::model::is_valid_identifier(symbol) {
            return Err(syntax(format!("invalid unit symbol `{symbol}`")));
        }
        let dimension = Dimension::from_name(dimension)
            .ok_or_else(|| syntax(format!("unknown dimension `{dimension}`")))?;
        let scale_to_base: Decimal = scale
            .parse()
            .map_err(|_| syntax(format!("invalid scale `{scale}`")))?;
        defs.push(UnitDef { symbol: symbol.into(), dimension, scale_to_base });
    }
    Ok(defs)
}
